//! The complexes `C(Δₙ)`: words of unreduced letters indexed by injections
//! `g: [i] ↪ [n]`, with face maps paired to bar face maps.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::bar::{self, BarChain};
use crate::cdga::{Cdga, Element, Monomial, Witness};
use crate::error::Result;
use crate::linalg::{self, Scalar, SparseMatrix};

/// `(g, word)`: the simplex `g` as its sorted image in `[n]`, and a word of
/// `i = |g| − 1` letters that may include the unit.
type Cell = (Vec<usize>, Vec<Monomial>);

fn sign(odd: bool) -> Scalar {
    if odd {
        -Scalar::one()
    } else {
        Scalar::one()
    }
}

fn coh(a: &Cdga, m: &Monomial) -> i64 {
    a.monomial_bidegree(m).coh
}

fn degree(a: &Cdga, cell: &Cell) -> i64 {
    cell.1.iter().map(|m| coh(a, m)).sum::<i64>() - cell.1.len() as i64
}

fn subsets(n: usize, size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    fn go(start: usize, n: usize, size: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for v in start..=n {
            cur.push(v);
            go(v + 1, n, size, cur, out);
            cur.pop();
        }
    }
    go(0, n, size, &mut Vec::new(), &mut out);
    out
}

/// Words of weight `w` and length at most `n`, letters of weight `0..=w`.
fn words(a: &Cdga, w: usize, n: usize) -> Vec<Vec<Monomial>> {
    let lets: Vec<Vec<Monomial>> = (0..=w as i64).map(|r| a.monomials_of_weight(r)).collect();
    let mut out = Vec::new();
    fn go(lets: &[Vec<Monomial>], rem: usize, left: usize, cur: &mut Vec<Monomial>, out: &mut Vec<Vec<Monomial>>) {
        if rem == 0 {
            out.push(cur.clone());
        }
        if left == 0 {
            return;
        }
        for r in 0..=rem {
            for m in &lets[r] {
                cur.push(m.clone());
                go(lets, rem - r, left - 1, cur, out);
                cur.pop();
            }
        }
    }
    go(&lets, w, n, &mut Vec::new(), &mut out);
    out
}

struct Complex<'a> {
    a: &'a Cdga,
    n: usize,
}

impl Complex<'_> {
    fn slice(&self, deg: i64, w: usize) -> Vec<Cell> {
        let mut out = Vec::new();
        for word in words(self.a, w, self.n) {
            for g in subsets(self.n, word.len() + 1) {
                let cell = (g, word.clone());
                if degree(self.a, &cell) == deg {
                    out.push(cell);
                }
            }
        }
        out.sort();
        out
    }

    fn d(&self, cell: &Cell) -> BTreeMap<Cell, Scalar> {
        let a = self.a;
        let (g, word) = cell;
        let i = word.len();
        let mut out: BTreeMap<Cell, Scalar> = BTreeMap::new();
        let mut add = |c: Cell, v: Scalar| {
            let e = out.entry(c.clone()).or_insert_with(Scalar::zero);
            *e += v;
            if e.is_zero() {
                out.remove(&c);
            }
        };
        let mut pre = 0i64;
        for k in 0..i {
            for (m, c) in a.apply_d(&Element::monomial(word[k].clone(), Scalar::one())).terms() {
                let mut next = word.clone();
                next[k] = m.clone();
                add((g.clone(), next), sign((i as i64 + pre).rem_euclid(2) == 1) * c);
            }
            pre += coh(a, &word[k]);
        }
        for j in 0..=i {
            if i == 0 {
                break;
            }
            let mut h = g.clone();
            h.remove(j);
            let s = sign(j % 2 == 1);
            if j == 0 || j == i {
                let (letter, rest) = if j == 0 { (&word[0], word[1..].to_vec()) } else { (&word[i - 1], word[..i - 1].to_vec()) };
                if letter.is_one() {
                    add((h, rest), s);
                }
                continue;
            }
            for (m, c) in a.multiply_monomials(&word[j - 1], &word[j]).terms() {
                let mut next = word[..j - 1].to_vec();
                next.push(m.clone());
                next.extend_from_slice(&word[j + 1..]);
                add((h.clone(), next), &s * c);
            }
        }
        out
    }

    fn matrix(&self, src: &[Cell], tgt: &[Cell]) -> SparseMatrix {
        let index: BTreeMap<&Cell, usize> = tgt.iter().enumerate().map(|(i, c)| (c, i)).collect();
        let mut m = SparseMatrix::zeros(tgt.len(), src.len());
        for (j, cell) in src.iter().enumerate() {
            for (c, v) in self.d(cell) {
                m.set(index[&c], j, v);
            }
        }
        m
    }
}

/// Comparison `q_n`: `(g, w) ↦ ±w` on words without unit letters, zero otherwise.
fn compare(a: &Cdga, cell: &Cell) -> Option<(Vec<Monomial>, Scalar)> {
    let word = &cell.1;
    if word.iter().any(|m| m.is_one()) {
        return None;
    }
    let i = word.len() as i64;
    let exp: i64 = word.iter().enumerate().map(|(k, m)| (i - k as i64) * coh(a, m)).sum::<i64>() + i;
    Some((word.clone(), sign(exp.rem_euclid(2) == 1)))
}

fn compare_chain(a: &Cdga, x: &BTreeMap<Cell, Scalar>) -> BarChain {
    let mut out = BarChain::new();
    for (cell, c) in x {
        if let Some((w, s)) = compare(a, cell) {
            bar::add_word(&mut out, w, s * c);
        }
    }
    out
}

fn shift(cell: &Cell) -> Cell {
    (cell.0.iter().map(|v| v + 1).collect(), cell.1.clone())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaApprox {
    pub n: usize,
    pub w_max: usize,
    /// `dim H⁰(C(Δₙ))(w)`.
    pub dims: Vec<usize>,
    /// Size of the degree-zero slice per weight.
    pub basis_sizes: Vec<usize>,
    /// Rank of `q_n` on `H⁰` into `H⁰(B̄)`.
    pub comparison_ranks: Vec<usize>,
    pub witnesses: Vec<Witness>,
}

/// `C(Δₙ)` for `a` in weights `≤ w_max`; relative pairs pass their fiber.
pub fn delta_approximation(a: &Cdga, n: usize, w_max: usize) -> Result<DeltaApprox> {
    bar::check_h0_hypotheses(a, w_max)?;
    let cx = Complex { a, n };
    let next = Complex { a, n: n + 1 };
    let mut dims = Vec::new();
    let mut basis_sizes = Vec::new();
    let mut comparison_ranks = Vec::new();
    let mut witnesses = Vec::new();
    for w in 0..=w_max {
        let below = cx.slice(-1, w);
        let here = cx.slice(0, w);
        let above = cx.slice(1, w);
        let d_here = cx.matrix(&here, &above);
        let d_below = cx.matrix(&below, &here);
        if d_here.mul(&d_below)?.nnz() != 0 {
            witnesses.push(Witness::new("d squared", format!("weight {w}: d^2 != 0 on C(Delta_{n})")));
        }
        for cell in below.iter().chain(&here) {
            let lhs = compare_chain(a, &cx.d(cell));
            let one = BTreeMap::from([(cell.clone(), Scalar::one())]);
            let rhs = bar::bar_d_chain(a, &compare_chain(a, &one));
            if lhs != rhs {
                witnesses.push(Witness::new("comparison", format!("weight {w}: q_{n} is not a chain map")));
                break;
            }
            let moved: BTreeMap<Cell, Scalar> = cx.d(cell).into_iter().map(|(c, v)| (shift(&c), v)).collect();
            if next.d(&shift(cell)) != moved {
                witnesses.push(Witness::new("transition", format!("weight {w}: C(Delta_{n}) -> C(Delta_{}) is not a chain map", n + 1)));
                break;
            }
        }
        let reps = linalg::cohomology_reps(&d_below, &d_here, here.len());
        let h0 = bar::h0_weight(a, w, None);
        let mut cols = Vec::new();
        for z in &reps {
            let chain: BTreeMap<Cell, Scalar> = z.iter().map(|(&k, c)| (here[k].clone(), c.clone())).collect();
            match h0.coordinates(&compare_chain(a, &chain)) {
                Some(v) => cols.push(v),
                None => witnesses.push(Witness::new("comparison", format!("weight {w}: q_{n} of a cocycle is not a cocycle"))),
            }
        }
        comparison_ranks.push(SparseMatrix::from_columns(h0.dim(), cols)?.rank());
        dims.push(reps.len());
        basis_sizes.push(here.len());
    }
    Ok(DeltaApprox { n, w_max, dims, basis_sizes, comparison_ranks, witnesses })
}

/// `H⁰` dimensions of `C(Δₙ)` for `n = 0..=n_max` against the bar construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stabilization {
    /// `dims[n][w]`.
    pub dims: Vec<Vec<usize>>,
    /// `truncated[m][w]`: words of length at most `m`.
    pub truncated: Vec<Vec<usize>>,
    pub full: Vec<usize>,
    /// Least `n` from which the dimension stays at the full value, per weight.
    pub stable_from: Vec<Option<usize>>,
    pub witnesses: Vec<Witness>,
}

pub fn delta_stabilization(a: &Cdga, n_max: usize, w_max: usize) -> Result<Stabilization> {
    let mut dims = Vec::new();
    let mut truncated = Vec::new();
    let mut witnesses = Vec::new();
    for n in 0..=n_max {
        let approx = delta_approximation(a, n, w_max)?;
        witnesses.extend(approx.witnesses);
        dims.push(approx.dims);
        truncated.push(bar::bar_truncated_h0(a, n, w_max)?);
    }
    let full: Vec<usize> = (0..=w_max).map(|w| bar::h0_weight(a, w, None).dim()).collect();
    let stable_from = (0..=w_max)
        .map(|w| (0..=n_max).find(|&n| (n..=n_max).all(|m| dims[m][w] == full[w])))
        .collect();
    Ok(Stabilization { dims, truncated, full, stable_from, witnesses })
}
