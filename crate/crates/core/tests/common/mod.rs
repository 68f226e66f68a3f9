//! Random inputs shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;

use adams_bar_core::cdga::{Cdga, Element, GeneratorSpec};
use adams_bar_core::linalg::{kernel_basis, Scalar};
use num_bigint::BigInt;
use num_traits::Zero;
use rand::rngs::StdRng;
use rand::Rng;

pub fn int(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

/// A random closed element of `a` in bidegree `(n, r)`; zero only when no
/// nonzero cocycle exists there.
pub fn random_cocycle(rng: &mut StdRng, a: &Cdga, n: i64, r: i64) -> Element {
    let basis = a.basis_slice(n, r);
    let z = kernel_basis(&a.d_matrix(n, r)).vectors;
    let mut v = BTreeMap::new();
    for k in &z {
        let c = [-2, -1, 1, 2][rng.gen_range(0..4)];
        for (&i, x) in k {
            let e: &mut Scalar = v.entry(i).or_insert_with(Scalar::zero);
            *e += x * int(c);
        }
    }
    v.retain(|_, x: &mut Scalar| !x.is_zero());
    Cdga::element_from_coordinates(&v, &basis)
}

/// Adjoins generators one at a time with random closed differentials, so
/// that `d² = 0` holds by construction.
pub fn adjoin_random(rng: &mut StdRng, a: &mut Cdga, specs: Vec<GeneratorSpec>) {
    for s in specs {
        let d = random_cocycle(rng, a, s.bidegree.coh + 1, s.bidegree.adams);
        a.adjoin_free(vec![s], vec![d]).expect("fresh generator");
    }
}

pub fn has_differential(a: &Cdga) -> bool {
    (0..a.num_generators()).any(|g| !a.differential_of(g).is_zero())
}

/// At most four generators of degree `≤ 2` and weight `≤ 3`; with
/// `want_d` the draw is repeated until some differential is nonzero.
pub fn random_free(rng: &mut StdRng, k: usize, want_d: bool) -> Cdga {
    loop {
        let mut specs: Vec<GeneratorSpec> = (0..rng.gen_range(1..=4))
            .map(|i| GeneratorSpec::new(format!("g{i}"), [0, 1, 1, 1, 2][rng.gen_range(0..5)], rng.gen_range(1..=3)))
            .collect();
        specs.sort_by_key(|s| (s.bidegree.adams, s.bidegree.coh));
        let mut a = Cdga::free(format!("R{k}"), Vec::new()).unwrap();
        adjoin_random(rng, &mut a, specs);
        if !want_d || has_differential(&a) {
            return a;
        }
    }
}
