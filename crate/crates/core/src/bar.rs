//! The reduced bar construction and the Hopf algebra `H⁰(B̄(A))`.
//!
//! A bar word `[a1|...|am]` has letters that are basis monomials of positive
//! Adams weight. Its cohomological degree is `Σ (deg ai - 1)`; the quantity
//! `deg ai - 1` is the suspended degree of a letter and governs every sign.
//!
//! With `εi = Σ_{j<i} (deg aj - 1)` the differential is
//!
//! ```text
//! d[a1|...|am] = Σ_i (-1)^{εi} [..|d ai|..] - Σ_i (-1)^{ε(i+1)} [..|ai·a(i+1)|..]
//! ```
//!
//! the shuffle product carries the Koszul sign of the suspended letters, the
//! coproduct is deconcatenation, and the antipode reverses words.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::cdga::{Cdga, Element, Monomial, TruncationWindow, Witness};
use crate::error::{Error, Result};
use crate::linalg::{self, Echelon, Scalar, SparseMatrix, SparseVector};

pub type BarWord = Vec<Monomial>;
pub type BarChain = BTreeMap<BarWord, Scalar>;
pub type BarTensor = BTreeMap<(BarWord, BarWord), Scalar>;

/// A basis element of a weight-graded space: `(weight, index)`.
pub type BasisRef = (usize, usize);
/// A tensor on pairs of basis elements.
pub type PairTensor = BTreeMap<(BasisRef, BasisRef), Scalar>;

pub fn add_word(chain: &mut BarChain, word: BarWord, c: Scalar) {
    add_pair(chain, word, c);
}

fn add_pair<K: Ord>(map: &mut BTreeMap<K, Scalar>, key: K, c: Scalar) {
    if c.is_zero() {
        return;
    }
    match map.get_mut(&key) {
        Some(v) => {
            *v += c;
            if v.is_zero() {
                map.remove(&key);
            }
        }
        None => {
            map.insert(key, c);
        }
    }
}

fn sign(odd: bool) -> Scalar {
    if odd {
        -Scalar::one()
    } else {
        Scalar::one()
    }
}

fn suspended(a: &Cdga, m: &Monomial) -> i64 {
    a.monomial_bidegree(m).coh - 1
}

fn is_odd(n: i64) -> bool {
    n.rem_euclid(2) == 1
}

/// `(coh, adams)` of a word.
pub fn word_bidegree(a: &Cdga, word: &[Monomial]) -> (i64, i64) {
    word.iter().fold((0, 0), |(n, w), m| {
        let b = a.monomial_bidegree(m);
        (n + b.coh - 1, w + b.adams)
    })
}

/// Possible letters grouped by Adams weight `1..=w_max`.
pub fn letters(a: &Cdga, w_max: usize) -> Vec<Vec<Monomial>> {
    (0..=w_max as i64)
        .map(|r| if r == 0 { Vec::new() } else { a.monomials_of_weight(r) })
        .collect()
}

/// All words of total weight `w`, in lexicographic order.
pub fn words_of_weight(a: &Cdga, w: usize) -> Vec<BarWord> {
    let lets = letters(a, w);
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn go(lets: &[Vec<Monomial>], rem: usize, cur: &mut BarWord, out: &mut Vec<BarWord>) {
        if rem == 0 {
            out.push(cur.clone());
            return;
        }
        for r in 1..=rem {
            for m in &lets[r] {
                cur.push(m.clone());
                go(lets, rem - r, cur, out);
                cur.pop();
            }
        }
    }
    go(&lets, w, &mut cur, &mut out);
    out.sort();
    out
}

/// Basis of the `(n, w)` slice of the reduced bar construction.
pub fn bar_slice(a: &Cdga, n: i64, w: usize) -> Vec<BarWord> {
    words_of_weight(a, w).into_iter().filter(|word| word_bidegree(a, word).0 == n).collect()
}

pub fn bar_d(a: &Cdga, word: &[Monomial]) -> BarChain {
    let mut out = BarChain::new();
    let mut eps = 0i64;
    for i in 0..word.len() {
        let da = a.apply_d(&Element::monomial(word[i].clone(), Scalar::one()));
        for (m, c) in da.terms() {
            if m.is_one() {
                continue;
            }
            let mut next = word.to_vec();
            next[i] = m.clone();
            add_word(&mut out, next, sign(is_odd(eps)) * c);
        }
        eps += suspended(a, &word[i]);
        if i + 1 < word.len() {
            let prod = a.multiply_monomials(&word[i], &word[i + 1]);
            for (m, c) in prod.terms() {
                if m.is_one() {
                    continue;
                }
                let mut next = word[..i].to_vec();
                next.push(m.clone());
                next.extend_from_slice(&word[i + 2..]);
                add_word(&mut out, next, -sign(is_odd(eps)) * c);
            }
        }
    }
    out
}

pub fn bar_d_chain(a: &Cdga, x: &BarChain) -> BarChain {
    let mut out = BarChain::new();
    for (w, c) in x {
        for (v, d) in bar_d(a, w) {
            add_word(&mut out, v, c * d);
        }
    }
    out
}

/// Signed shuffles of two words.
pub fn shuffle(a: &Cdga, u: &[Monomial], v: &[Monomial]) -> BarChain {
    let su: Vec<i64> = u.iter().map(|m| suspended(a, m)).collect();
    let sv: Vec<i64> = v.iter().map(|m| suspended(a, m)).collect();
    let mut out = BarChain::new();
    let mut cur = Vec::with_capacity(u.len() + v.len());
    #[allow(clippy::too_many_arguments)]
    fn go(
        u: &[Monomial],
        v: &[Monomial],
        su: &[i64],
        sv: &[i64],
        i: usize,
        j: usize,
        odd: bool,
        cur: &mut BarWord,
        out: &mut BarChain,
    ) {
        if i == u.len() && j == v.len() {
            add_word(out, cur.clone(), sign(odd));
            return;
        }
        if i < u.len() {
            cur.push(u[i].clone());
            go(u, v, su, sv, i + 1, j, odd, cur, out);
            cur.pop();
        }
        if j < v.len() {
            let passed: i64 = su[i..].iter().sum();
            cur.push(v[j].clone());
            go(u, v, su, sv, i, j + 1, odd ^ is_odd(passed * sv[j]), cur, out);
            cur.pop();
        }
    }
    go(u, v, &su, &sv, 0, 0, false, &mut cur, &mut out);
    out
}

pub fn shuffle_chains(a: &Cdga, x: &BarChain, y: &BarChain) -> BarChain {
    let mut out = BarChain::new();
    for (u, c) in x {
        for (v, d) in y {
            for (w, e) in shuffle(a, u, v) {
                add_word(&mut out, w, c * d * e);
            }
        }
    }
    out
}

/// Deconcatenation: every split `[a1..ai] ⊗ [a(i+1)..am]` with coefficient one.
pub fn coprod(word: &[Monomial]) -> Vec<(BarWord, BarWord)> {
    (0..=word.len()).map(|i| (word[..i].to_vec(), word[i..].to_vec())).collect()
}

pub fn coprod_chain(x: &BarChain) -> BarTensor {
    let mut out = BarTensor::new();
    for (w, c) in x {
        for (l, r) in coprod(w) {
            add_pair(&mut out, (l, r), c.clone());
        }
    }
    out
}

/// `S[a1|...|am] = (-1)^m κ [am|...|a1]` with κ the Koszul sign of the reversal.
pub fn antipode(a: &Cdga, word: &[Monomial]) -> BarChain {
    let s: Vec<i64> = word.iter().map(|m| suspended(a, m)).collect();
    let mut odd = is_odd(word.len() as i64);
    for i in 0..s.len() {
        for j in i + 1..s.len() {
            odd ^= is_odd(s[i] * s[j]);
        }
    }
    let mut out = BarChain::new();
    add_word(&mut out, word.iter().rev().cloned().collect(), sign(odd));
    out
}

pub fn antipode_chain(a: &Cdga, x: &BarChain) -> BarChain {
    let mut out = BarChain::new();
    for (w, c) in x {
        for (v, d) in antipode(a, w) {
            add_word(&mut out, v, c * d);
        }
    }
    out
}

pub fn fmt_word(a: &Cdga, word: &[Monomial]) -> String {
    if word.is_empty() {
        return "[]".into();
    }
    let parts: Vec<String> = word.iter().map(|m| a.fmt_monomial(m)).collect();
    format!("[{}]", parts.join("|"))
}

pub fn fmt_chain(a: &Cdga, x: &BarChain) -> String {
    if x.is_empty() {
        return "0".into();
    }
    let mut s = String::new();
    for (i, (w, c)) in x.iter().enumerate() {
        let neg = c < &Scalar::zero();
        let abs = if neg { -c.clone() } else { c.clone() };
        if i > 0 {
            s.push_str(if neg { " - " } else { " + " });
        } else if neg {
            s.push('-');
        }
        if !abs.is_one() {
            s.push_str(&linalg::fmt_scalar(&abs));
            s.push('*');
        }
        s.push_str(&fmt_word(a, w));
    }
    s
}

/// Matrix of the bar differential between two slice bases.
pub fn d_matrix(a: &Cdga, src: &[BarWord], tgt: &[BarWord]) -> SparseMatrix {
    let index: BTreeMap<&BarWord, usize> = tgt.iter().enumerate().map(|(i, w)| (w, i)).collect();
    let mut m = SparseMatrix::zeros(tgt.len(), src.len());
    for (j, w) in src.iter().enumerate() {
        for (v, c) in bar_d(a, w) {
            let i = *index.get(&v).expect("bar differential leaves its target slice");
            m.set(i, j, c);
        }
    }
    m
}

/// One weight of `H⁰(B̄)`: the degree-0 slice and the reduced echelon basis
/// of the cocycles. Every basis vector has a pivot word where it is 1 and all
/// other basis vectors vanish, so coordinates are read off at pivots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct H0Weight {
    pub weight: usize,
    pub slice: Vec<BarWord>,
    pub basis: Vec<SparseVector>,
    pub pivots: Vec<usize>,
    index: BTreeMap<BarWord, usize>,
}

impl H0Weight {
    fn new(weight: usize, slice: Vec<BarWord>, basis: Vec<SparseVector>) -> Self {
        let pivots = basis.iter().map(|v| *v.keys().next().expect("nonzero basis vector")).collect();
        let index = slice.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
        H0Weight { weight, slice, basis, pivots, index }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn representative(&self, i: usize) -> BarChain {
        self.basis[i].iter().map(|(&k, c)| (self.slice[k].clone(), c.clone())).collect()
    }

    pub fn chain_of(&self, v: &SparseVector) -> BarChain {
        let mut out = BarChain::new();
        for (&i, c) in v {
            for (w, d) in self.representative(i) {
                add_word(&mut out, w, c * d);
            }
        }
        out
    }

    /// Coordinates of a cocycle, or `None` if `x` is not in the span.
    pub fn coordinates(&self, x: &BarChain) -> Option<SparseVector> {
        let mut v = SparseVector::new();
        for (w, c) in x {
            v.insert(*self.index.get(w)?, c.clone());
        }
        let coords: SparseVector = self
            .pivots
            .iter()
            .enumerate()
            .filter_map(|(k, p)| v.get(p).map(|c| (k, c.clone())))
            .collect();
        let mut back = SparseVector::new();
        for (&k, c) in &coords {
            linalg::axpy(&mut back, c, &self.basis[k]);
        }
        (back == v).then_some(coords)
    }
}

/// Degree-zero cocycles of the bar construction restricted to words of length at most `max_len`.
pub fn h0_weight(a: &Cdga, w: usize, max_len: Option<usize>) -> H0Weight {
    let keep = |word: &BarWord| max_len.is_none_or(|m| word.len() <= m);
    let slice: Vec<BarWord> = bar_slice(a, 0, w).into_iter().filter(keep).collect();
    let tgt: Vec<BarWord> = bar_slice(a, 1, w).into_iter().filter(keep).collect();
    let basis = linalg::kernel_basis(&d_matrix(a, &slice, &tgt)).vectors;
    H0Weight::new(w, slice, basis)
}

/// `H⁰(B̄(A))` in weights `0..=w_max` with all structure constants.
#[derive(Clone, Debug)]
pub struct HopfPresentation {
    pub algebra: String,
    pub w_max: usize,
    pub weights: Vec<H0Weight>,
    /// `h_i ∪ h_j` in coordinates of weight `i.0 + j.0`.
    pub product: BTreeMap<(BasisRef, BasisRef), SparseVector>,
    /// `δ(h)` as a tensor on pairs of basis elements.
    pub coproduct: BTreeMap<BasisRef, PairTensor>,
    pub antipode: BTreeMap<BasisRef, SparseVector>,
    /// Chain-level inconsistencies met while reading off constants.
    pub witnesses: Vec<Witness>,
}

/// Rejects algebras outside the hypotheses of the degree-zero computation.
pub fn check_h0_hypotheses(a: &Cdga, w_max: usize) -> Result<()> {
    if !a.positively_generated() {
        return Err(Error::unsupported(format!(
            "{}: every generator must have cohomological degree at least 1",
            a.name()
        )));
    }
    let window = TruncationWindow { coh_max: 1, adams_max: w_max as i64 };
    let verdict = a.is_coh_connected(window);
    if !verdict.connected {
        let w = &verdict.witnesses[0];
        return Err(Error::unsupported(format!("{} is not cohomologically connected: {} {}", a.name(), w.check, w.detail)));
    }
    Ok(())
}

pub fn h0_hopf(a: &Cdga, w_max: usize) -> Result<HopfPresentation> {
    check_h0_hypotheses(a, w_max)?;
    let weights: Vec<H0Weight> = (0..=w_max).map(|w| h0_weight(a, w, None)).collect();
    Ok(HopfPresentation::from_weights(a, w_max, weights))
}

impl HopfPresentation {
    fn from_weights(a: &Cdga, w_max: usize, weights: Vec<H0Weight>) -> Self {
        let mut hp = HopfPresentation {
            algebra: a.name().to_string(),
            w_max,
            weights,
            product: BTreeMap::new(),
            coproduct: BTreeMap::new(),
            antipode: BTreeMap::new(),
            witnesses: Vec::new(),
        };
        let reps: Vec<Vec<BarChain>> =
            hp.weights.iter().map(|h| (0..h.dim()).map(|i| h.representative(i)).collect()).collect();
        for p in 0..=w_max {
            for q in 0..=w_max - p {
                for i in 0..reps[p].len() {
                    for j in 0..reps[q].len() {
                        let prod = shuffle_chains(a, &reps[p][i], &reps[q][j]);
                        match hp.weights[p + q].coordinates(&prod) {
                            Some(v) => {
                                hp.product.insert(((p, i), (q, j)), v);
                            }
                            None => hp.witnesses.push(Witness::new(
                                "shuffle closure",
                                format!("product of H0 classes ({p},{i}) and ({q},{j}) is not a cocycle"),
                            )),
                        }
                    }
                }
            }
        }
        for (w, here) in reps.iter().enumerate() {
            for (i, h) in here.iter().enumerate() {
                let delta = coprod_chain(h);
                let mut split: BTreeMap<(usize, usize), BarTensor> = BTreeMap::new();
                for ((l, r), c) in delta {
                    let wl = word_bidegree(a, &l).1 as usize;
                    split.entry((wl, w - wl)).or_default().insert((l, r), c);
                }
                let mut tensor = PairTensor::new();
                for ((p, q), part) in split {
                    let (hl, hr) = (&hp.weights[p], &hp.weights[q]);
                    for (a_idx, &pa) in hl.pivots.iter().enumerate() {
                        for (b_idx, &pb) in hr.pivots.iter().enumerate() {
                            let key = (hl.slice[pa].clone(), hr.slice[pb].clone());
                            if let Some(c) = part.get(&key) {
                                tensor.insert(((p, a_idx), (q, b_idx)), c.clone());
                            }
                        }
                    }
                    let mut back = BarTensor::new();
                    for (&((pp, a_idx), (qq, b_idx)), c) in &tensor {
                        if pp != p || qq != q {
                            continue;
                        }
                        for (lw, lc) in &hp.weights[p].representative(a_idx) {
                            for (rw, rc) in &hp.weights[q].representative(b_idx) {
                                add_pair(&mut back, (lw.clone(), rw.clone()), c * lc * rc);
                            }
                        }
                    }
                    if back != part {
                        hp.witnesses.push(Witness::new(
                            "coproduct closure",
                            format!("coproduct of H0 class ({w},{i}) leaves H0 ⊗ H0 in weights ({p},{q})"),
                        ));
                    }
                }
                hp.coproduct.insert((w, i), tensor);
                match hp.weights[w].coordinates(&antipode_chain(a, h)) {
                    Some(v) => {
                        hp.antipode.insert((w, i), v);
                    }
                    None => hp.witnesses.push(Witness::new("antipode closure", format!("antipode of ({w},{i}) is not a cocycle"))),
                }
            }
        }
        hp
    }

    pub fn dims(&self) -> Vec<usize> {
        self.weights.iter().map(|h| h.dim()).collect()
    }

    fn basis_refs(&self) -> Vec<BasisRef> {
        self.weights.iter().enumerate().flat_map(|(w, h)| (0..h.dim()).map(move |i| (w, i))).collect()
    }

    /// Product of two coordinate vectors in weights `p` and `q`.
    pub fn multiply(&self, p: usize, x: &SparseVector, q: usize, y: &SparseVector) -> SparseVector {
        let mut out = SparseVector::new();
        for (&i, c) in x {
            for (&j, d) in y {
                if let Some(v) = self.product.get(&((p, i), (q, j))) {
                    linalg::axpy(&mut out, &(c * d), v);
                }
            }
        }
        out
    }

    fn tensor_product(&self, x: &PairTensor, y: &PairTensor) -> PairTensor {
        let mut out = PairTensor::new();
        for (&((p1, a1), (q1, b1)), c) in x {
            for (&((p2, a2), (q2, b2)), d) in y {
                if p1 + p2 > self.w_max || q1 + q2 > self.w_max {
                    continue;
                }
                let left = self.multiply(p1, &linalg::unit_vector(a1), p2, &linalg::unit_vector(a2));
                let right = self.multiply(q1, &linalg::unit_vector(b1), q2, &linalg::unit_vector(b2));
                for (&l, lc) in &left {
                    for (&r, rc) in &right {
                        add_pair(&mut out, ((p1 + p2, l), (q1 + q2, r)), c * d * lc * rc);
                    }
                }
            }
        }
        out
    }

    fn coproduct_of(&self, w: usize, x: &SparseVector) -> PairTensor {
        let mut out = PairTensor::new();
        for (&i, c) in x {
            for (k, d) in &self.coproduct[&(w, i)] {
                add_pair(&mut out, *k, c * d);
            }
        }
        out
    }

    /// Graded commutativity (all classes have degree zero, so no signs).
    pub fn check_commutative(&self) -> Vec<Witness> {
        let mut out = Vec::new();
        for (&(x, y), v) in &self.product {
            if self.product.get(&(y, x)) != Some(v) {
                out.push(Witness::new("commutativity", format!("{x:?}·{y:?} != {y:?}·{x:?}")));
            }
        }
        out
    }

    pub fn check_associative(&self) -> Vec<Witness> {
        let mut out = Vec::new();
        let refs = self.basis_refs();
        for &(p, i) in &refs {
            for &(q, j) in &refs {
                for &(r, k) in &refs {
                    if p + q + r > self.w_max {
                        continue;
                    }
                    let (ei, ej, ek) = (linalg::unit_vector(i), linalg::unit_vector(j), linalg::unit_vector(k));
                    let left = self.multiply(p + q, &self.multiply(p, &ei, q, &ej), r, &ek);
                    let right = self.multiply(p, &ei, q + r, &self.multiply(q, &ej, r, &ek));
                    if left != right {
                        out.push(Witness::new("associativity", format!("({p},{i}) ({q},{j}) ({r},{k})")));
                    }
                }
            }
        }
        out
    }

    pub fn check_coassociative(&self) -> Vec<Witness> {
        let mut out = Vec::new();
        for (&h, delta) in &self.coproduct {
            let mut left: BTreeMap<(BasisRef, BasisRef, BasisRef), Scalar> = BTreeMap::new();
            let mut right = left.clone();
            for (&(x, y), c) in delta {
                for (&(x1, x2), d) in &self.coproduct[&x] {
                    add_pair(&mut left, (x1, x2, y), c * d);
                }
                for (&(y1, y2), d) in &self.coproduct[&y] {
                    add_pair(&mut right, (x, y1, y2), c * d);
                }
            }
            if left != right {
                out.push(Witness::new("coassociativity", format!("fails on {h:?}")));
            }
        }
        out
    }

    pub fn check_counit(&self) -> Vec<Witness> {
        let mut out = Vec::new();
        for (&(w, i), delta) in &self.coproduct {
            let left: SparseVector =
                delta.iter().filter(|(k, _)| k.0 == (0, 0) && k.1 .0 == w).map(|(k, c)| (k.1 .1, c.clone())).collect();
            let right: SparseVector =
                delta.iter().filter(|(k, _)| k.1 == (0, 0) && k.0 .0 == w).map(|(k, c)| (k.0 .1, c.clone())).collect();
            let e = linalg::unit_vector(i);
            if left != e || right != e {
                out.push(Witness::new("counit", format!("fails on ({w},{i})")));
            }
        }
        out
    }

    /// `δ(xy) = δ(x)δ(y)` on all basis pairs within the weight window.
    pub fn check_bialgebra(&self) -> Vec<Witness> {
        let mut out = Vec::new();
        for (&((p, i), (q, j)), v) in &self.product {
            let lhs = self.coproduct_of(p + q, v);
            let rhs = self.tensor_product(&self.coproduct[&(p, i)], &self.coproduct[&(q, j)]);
            if lhs != rhs {
                out.push(Witness::new("bialgebra", format!("δ(({p},{i})·({q},{j})) differs")));
            }
        }
        out
    }

    /// `m(S ⊗ 1)δ = ηε` on every basis element.
    pub fn check_antipode(&self) -> Vec<Witness> {
        let mut out = Vec::new();
        for (&(w, i), delta) in &self.coproduct {
            let mut acc = SparseVector::new();
            for (&((p, a), (q, b)), c) in delta {
                let s = &self.antipode[&(p, a)];
                linalg::axpy(&mut acc, c, &self.multiply(p, s, q, &linalg::unit_vector(b)));
            }
            let expected = if w == 0 { linalg::unit_vector(0) } else { SparseVector::new() };
            if acc != expected {
                out.push(Witness::new("antipode", format!("m(S⊗1)δ fails on ({w},{i})")));
            }
        }
        out
    }

    pub fn all_witnesses(&self) -> Vec<Witness> {
        let mut out = self.witnesses.clone();
        out.extend(self.check_commutative());
        out.extend(self.check_associative());
        out.extend(self.check_coassociative());
        out.extend(self.check_counit());
        out.extend(self.check_bialgebra());
        out.extend(self.check_antipode());
        out
    }
}

/// A co-Lie coalgebra, weight graded, with cobracket stored as a full
/// antisymmetric tensor on pairs of basis elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoLiePresentation {
    pub name: String,
    pub w_max: usize,
    /// `dims[w]` for `w` in `0..=w_max` (weight 0 is always 0).
    pub dims: Vec<usize>,
    pub labels: Vec<Vec<String>>,
    pub cobracket: BTreeMap<BasisRef, PairTensor>,
}

impl CoLiePresentation {
    pub fn check_antisymmetric(&self) -> Vec<Witness> {
        let mut out = Vec::new();
        for (g, t) in &self.cobracket {
            for (&(x, y), c) in t {
                if t.get(&(y, x)).cloned().unwrap_or_else(Scalar::zero) != -c.clone() {
                    out.push(Witness::new("antisymmetry", format!("cobracket of {g:?} at {x:?},{y:?}")));
                }
            }
        }
        out
    }

    pub fn check_weights(&self) -> Vec<Witness> {
        let mut out = Vec::new();
        for (g, t) in &self.cobracket {
            for (x, y) in t.keys() {
                if x.0 + y.0 != g.0 {
                    out.push(Witness::new("weight additivity", format!("cobracket of {g:?} hits {x:?}⊗{y:?}")));
                }
            }
        }
        out
    }

    /// Cyclic sum of `(∂ ⊗ 1)∂` vanishes.
    pub fn check_co_jacobi(&self) -> Vec<Witness> {
        let mut out = Vec::new();
        for (g, t) in &self.cobracket {
            let mut triple: BTreeMap<(BasisRef, BasisRef, BasisRef), Scalar> = BTreeMap::new();
            for (&(u, v), c) in t {
                if let Some(du) = self.cobracket.get(&u) {
                    for (&(s, r), d) in du {
                        add_pair(&mut triple, (s, r, v), c * d);
                    }
                }
            }
            let mut cyclic: BTreeMap<(BasisRef, BasisRef, BasisRef), Scalar> = BTreeMap::new();
            for (&(x, y, z), c) in &triple {
                add_pair(&mut cyclic, (x, y, z), c.clone());
                add_pair(&mut cyclic, (y, z, x), c.clone());
                add_pair(&mut cyclic, (z, x, y), c.clone());
            }
            if !cyclic.is_empty() {
                out.push(Witness::new("co-Jacobi", format!("fails on {g:?}")));
            }
        }
        out
    }

    pub fn all_witnesses(&self) -> Vec<Witness> {
        let mut out = self.check_antisymmetric();
        out.extend(self.check_weights());
        out.extend(self.check_co_jacobi());
        out
    }
}

/// `γ_A`: indecomposables of `H⁰(B̄(A))` with the induced cobracket.
#[derive(Clone, Debug)]
pub struct Gamma {
    pub colie: CoLiePresentation,
    /// Per weight: echelon of the decomposables inside `H⁰(w)`.
    pub decomposables: Vec<Echelon>,
    /// Per weight: the `H⁰` basis index lifting each γ basis element.
    pub lifts: Vec<Vec<usize>>,
}

impl Gamma {
    /// Image of an `H⁰(w)` coordinate vector in `γ(w)`.
    pub fn project(&self, w: usize, x: &SparseVector) -> SparseVector {
        let r = self.decomposables[w].reduce(x);
        self.lifts[w]
            .iter()
            .enumerate()
            .filter_map(|(k, i)| r.get(i).map(|c| (k, c.clone())))
            .collect()
    }
}

pub fn gamma_from_hopf(a: &Cdga, hp: &HopfPresentation) -> Gamma {
    let w_max = hp.w_max;
    let mut decomposables = Vec::new();
    let mut lifts = Vec::new();
    for w in 0..=w_max {
        let dim = hp.weights[w].dim();
        if w == 0 {
            decomposables.push(Echelon::from_rows(dim, (0..dim).map(linalg::unit_vector).collect()));
            lifts.push(Vec::new());
            continue;
        }
        let mut rows = Vec::new();
        for p in 1..w {
            for i in 0..hp.weights[p].dim() {
                for j in 0..hp.weights[w - p].dim() {
                    rows.push(hp.product[&((p, i), (w - p, j))].clone());
                }
            }
        }
        let ech = Echelon::from_rows(dim, rows);
        lifts.push(ech.non_pivots());
        decomposables.push(ech);
    }
    let mut gamma = Gamma {
        colie: CoLiePresentation {
            name: hp.algebra.clone(),
            w_max,
            dims: lifts.iter().map(|l| l.len()).collect(),
            labels: Vec::new(),
            cobracket: BTreeMap::new(),
        },
        decomposables,
        lifts,
    };
    gamma.colie.labels = (0..=w_max)
        .map(|w| {
            gamma.lifts[w]
                .iter()
                .map(|&i| fmt_chain(a, &hp.weights[w].representative(i)))
                .collect()
        })
        .collect();
    for w in 1..=w_max {
        for (k, &i) in gamma.lifts[w].iter().enumerate() {
            let mut full = PairTensor::new();
            for (&((p, x), (q, y)), c) in &hp.coproduct[&(w, i)] {
                if p == 0 || q == 0 {
                    continue;
                }
                let px = gamma.project(p, &linalg::unit_vector(x));
                let qy = gamma.project(q, &linalg::unit_vector(y));
                for (&s, sc) in &px {
                    for (&t, tc) in &qy {
                        let v = c * sc * tc;
                        add_pair(&mut full, ((p, s), (q, t)), v.clone());
                        add_pair(&mut full, ((q, t), (p, s)), -v);
                    }
                }
            }
            gamma.colie.cobracket.insert((w, k), full);
        }
    }
    gamma
}

pub fn gamma(a: &Cdga, w_max: usize) -> Result<Gamma> {
    Ok(gamma_from_hopf(a, &h0_hopf(a, w_max)?))
}

/// Checks that monomials in the γ lifts form a basis of `H⁰(w)` for each
/// weight; returns the per-weight monomial counts.
pub fn polynomiality(hp: &HopfPresentation, g: &Gamma) -> (Vec<usize>, Vec<Witness>) {
    let mut counts = Vec::new();
    let mut witnesses = Vec::new();
    // monomials[w] = coordinate vectors of all products of lifts with weight w
    let mut monomials: Vec<Vec<(Vec<BasisRef>, SparseVector)>> = vec![Vec::new(); hp.w_max + 1];
    monomials[0].push((Vec::new(), linalg::unit_vector(0)));
    let gens: Vec<BasisRef> =
        (1..=hp.w_max).flat_map(|w| (0..g.lifts[w].len()).map(move |k| (w, k))).collect();
    for w in 1..=hp.w_max {
        let mut here = Vec::new();
        for &(gw, k) in &gens {
            if gw > w {
                continue;
            }
            for (factors, v) in &monomials[w - gw] {
                if factors.last().is_some_and(|&f| f > (gw, k)) {
                    continue;
                }
                let mut f = factors.clone();
                f.push((gw, k));
                let prod = hp.multiply(w - gw, v, gw, &linalg::unit_vector(g.lifts[gw][k]));
                here.push((f, prod));
            }
        }
        here.sort_by(|x, y| x.0.cmp(&y.0));
        let rank = Echelon::from_rows(hp.weights[w].dim(), here.iter().map(|x| x.1.clone()).collect()).rank();
        if rank != here.len() || rank != hp.weights[w].dim() {
            witnesses.push(Witness::new(
                "polynomiality",
                format!("weight {w}: {} monomials of rank {rank}, H0 dimension {}", here.len(), hp.weights[w].dim()),
            ));
        }
        counts.push(here.len());
        monomials[w] = here;
    }
    (counts, witnesses)
}

/// Dimensions of `H⁰` of the subcomplex of words of length at most `m`.
pub fn bar_truncated_h0(a: &Cdga, m: usize, w_max: usize) -> Result<Vec<usize>> {
    check_h0_hypotheses(a, w_max)?;
    Ok((0..=w_max).map(|w| h0_weight(a, w, Some(m)).dim()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cdga::fixtures::*;
    use crate::linalg::q;

    fn words(a: &Cdga, ws: &[&[&str]]) -> Vec<BarWord> {
        ws.iter()
            .map(|w| w.iter().map(|g| a.gen(g).terms().keys().next().unwrap().clone()).collect())
            .collect()
    }

    fn fmt_all(a: &Cdga, ws: &[BarWord]) -> Vec<String> {
        ws.iter().map(|w| fmt_word(a, w)).collect()
    }

    #[test]
    fn slices() {
        let a = e1();
        assert_eq!(fmt_all(&a, &bar_slice(&a, 0, 3)), vec!["[x|x|x]"]);
        assert_eq!(bar_slice(&e2(), 0, 2).len(), 4);
        let b = e3();
        let s = fmt_all(&b, &bar_slice(&b, 0, 2));
        assert_eq!(s.len(), 5);
        assert!(s.contains(&"[z]".to_string()));
        assert!(bar_slice(&b, 5, 2).is_empty());
    }

    #[test]
    fn differential_examples() {
        let b = e3();
        let z = words(&b, &[&["z"]]);
        let dz = bar_d(&b, &z[0]);
        let xy = b.multiply(&b.gen("x"), &b.gen("y"));
        let xy_word = vec![xy.terms().keys().next().unwrap().clone()];
        assert_eq!(dz, BarChain::from([(xy_word.clone(), q(1))]));
        let xy2 = words(&b, &[&["x", "y"]]);
        assert_eq!(bar_d(&b, &xy2[0]), BarChain::from([(xy_word, q(-1))]));
        let c = e2();
        assert!(bar_d(&c, &words(&c, &[&["x0", "x1"]])[0]).is_empty());
        let a = e1();
        assert!(bar_d(&a, &words(&a, &[&["x", "x"]])[0]).is_empty());
    }

    #[test]
    fn d_squared_vanishes() {
        for a in [e1(), e2(), e3()] {
            for w in 0..=4 {
                for word in words_of_weight(&a, w) {
                    assert!(bar_d_chain(&a, &bar_d(&a, &word)).is_empty());
                }
            }
        }
    }

    #[test]
    fn shuffle_examples() {
        let c = e2();
        let ws = words(&c, &[&["x0"], &["x1"], &["x0", "x1"], &["x1", "x0"]]);
        let s = shuffle(&c, &ws[0], &ws[1]);
        assert_eq!(s, BarChain::from([(ws[2].clone(), q(1)), (ws[3].clone(), q(1))]));
        let a = e1();
        let x = words(&a, &[&["x"], &["x", "x"]]);
        assert_eq!(shuffle(&a, &x[0], &x[0]), BarChain::from([(x[1].clone(), q(2))]));
        assert_eq!(shuffle(&a, &[], &x[1]), BarChain::from([(x[1].clone(), q(1))]));
    }

    #[test]
    fn coproduct_and_antipode_examples() {
        let c = e2();
        let ws = words(&c, &[&["x0"], &["x1"], &["x0", "x1"], &["x1", "x0"]]);
        assert_eq!(coprod(&ws[0]), vec![(vec![], ws[0].clone()), (ws[0].clone(), vec![])]);
        assert_eq!(coprod(&ws[2]).len(), 3);
        assert_eq!(coprod(&[]), vec![(vec![], vec![])]);
        assert_eq!(antipode(&c, &ws[0]), BarChain::from([(ws[0].clone(), q(-1))]));
        assert_eq!(antipode(&c, &ws[2]), BarChain::from([(ws[3].clone(), q(1))]));
        assert_eq!(antipode(&c, &[]), BarChain::from([(vec![], q(1))]));
    }

    #[test]
    fn h0_examples() {
        let a = e1();
        let hp = h0_hopf(&a, 4).unwrap();
        assert_eq!(hp.dims(), vec![1; 5]);
        assert!(hp.all_witnesses().is_empty());
        let x = linalg::unit_vector(0);
        let mut power = linalg::unit_vector(0);
        for w in 1..=4 {
            power = hp.multiply(w - 1, &power, 1, &x);
        }
        let fact: i64 = (1..=4).product();
        assert_eq!(power, SparseVector::from([(0, q(fact))]));
        let hp2 = h0_hopf(&e2(), 4).unwrap();
        assert_eq!(hp2.dims(), vec![1, 2, 4, 8, 16]);
        assert!(hp2.all_witnesses().is_empty());
        let hp3 = h0_hopf(&e3(), 3).unwrap();
        assert_eq!(hp3.dims()[2], 4);
        assert!(hp3.all_witnesses().is_empty());
    }

    #[test]
    fn gamma_examples() {
        let g1 = gamma(&e1(), 4).unwrap();
        assert_eq!(g1.colie.dims, vec![0, 1, 0, 0, 0]);
        let g2 = gamma(&e2(), 4).unwrap();
        assert_eq!(g2.colie.dims, vec![0, 2, 1, 2, 3]);
        assert!(g2.colie.all_witnesses().is_empty());
        let hp = h0_hopf(&e3(), 2).unwrap();
        let g3 = gamma_from_hopf(&e3(), &hp);
        assert_eq!(g3.colie.dims, vec![0, 2, 1]);
        let t = &g3.colie.cobracket[&(2, 0)];
        assert_eq!(t.len(), 2);
        let (pair, c) = t.iter().next().unwrap();
        assert_eq!(*pair, ((1, 0), (1, 1)));
        assert!(c == &q(1) || c == &q(-1));
        let (counts, w) = polynomiality(&hp, &g3);
        assert!(w.is_empty());
        assert_eq!(counts, vec![2, 4]);
    }

    #[test]
    fn truncation() {
        assert_eq!(bar_truncated_h0(&e2(), 1, 2).unwrap(), vec![1, 2, 0]);
        assert_eq!(bar_truncated_h0(&e2(), 2, 2).unwrap(), vec![1, 2, 4]);
        assert_eq!(bar_truncated_h0(&e3(), 1, 2).unwrap(), vec![1, 2, 0]);
        assert_eq!(bar_truncated_h0(&e3(), 2, 2).unwrap(), vec![1, 2, 4]);
        assert_eq!(bar_truncated_h0(&e3(), 0, 2).unwrap(), vec![1, 0, 0]);
    }

    #[test]
    fn rejects_degree_zero_generators() {
        let bad = Cdga::free("B", vec![crate::cdga::GeneratorSpec::new("v", 0, 1)]).unwrap();
        assert!(matches!(h0_hopf(&bad, 2), Err(Error::Unsupported(_))));
    }
}
