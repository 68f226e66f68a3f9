//! Adams-graded commutative dg algebras over the rationals.
//!
//! A presentation is a list of generators split into blocks. A free block
//! contributes a graded-symmetric algebra on its generators; a table block
//! contributes a finite-dimensional algebra whose basis is `1` plus the block
//! generators, with products read from a multiplication table. The whole
//! algebra is the graded tensor product of its blocks, so tensor products of
//! presentations are just block concatenation.
//!
//! Monomials are stored in a canonical form: factors sorted by generator
//! index, odd generators with exponent at most one, and at most one generator
//! from each table block.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{self, fmt_scalar, Scalar, SparseMatrix, SparseVector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BiDegree {
    pub coh: i64,
    pub adams: i64,
}

impl BiDegree {
    pub const ZERO: BiDegree = BiDegree { coh: 0, adams: 0 };

    pub fn new(coh: i64, adams: i64) -> Self {
        BiDegree { coh, adams }
    }
}

impl Add for BiDegree {
    type Output = BiDegree;
    fn add(self, o: BiDegree) -> BiDegree {
        BiDegree::new(self.coh + o.coh, self.adams + o.adams)
    }
}

impl Sub for BiDegree {
    type Output = BiDegree;
    fn sub(self, o: BiDegree) -> BiDegree {
        BiDegree::new(self.coh - o.coh, self.adams - o.adams)
    }
}

impl fmt::Display for BiDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.coh, self.adams)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorSpec {
    pub name: String,
    pub bidegree: BiDegree,
}

impl GeneratorSpec {
    pub fn new(name: impl Into<String>, coh: i64, adams: i64) -> Self {
        GeneratorSpec { name: name.into(), bidegree: BiDegree::new(coh, adams) }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Free,
    Table,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kind::Free => f.write_str("free"),
            Kind::Table => f.write_str("table"),
        }
    }
}

/// A contiguous range of generator indices sharing one multiplication rule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub kind: Kind,
    pub start: usize,
    pub end: usize,
}

/// Sorted list of `(generator index, exponent)` pairs.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<(usize, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn generator(g: usize) -> Self {
        Monomial(vec![(g, 1)])
    }

    pub fn factors(&self) -> &[(usize, u32)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    /// The factors as a word of generator indices, repeated by exponent.
    pub fn expand(&self) -> Vec<usize> {
        self.0.iter().flat_map(|&(g, e)| std::iter::repeat_n(g, e as usize)).collect()
    }

    pub fn contains(&self, g: usize) -> bool {
        self.0.iter().any(|&(h, _)| h == g)
    }

    pub fn generators(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().map(|&(g, _)| g)
    }

    /// Factors on generators `< g`, and the remaining factors reindexed from 0.
    pub fn split_at(&self, g: usize) -> (Monomial, Monomial) {
        let low = self.0.iter().filter(|f| f.0 < g).cloned().collect();
        let high = self.0.iter().filter(|f| f.0 >= g).map(|&(h, e)| (h - g, e)).collect();
        (Monomial(low), Monomial(high))
    }

    /// Shifts every generator index up by `g`.
    pub fn shifted(&self, g: usize) -> Monomial {
        Monomial(self.0.iter().map(|&(h, e)| (h + g, e)).collect())
    }
}

/// A finite linear combination of monomials with nonzero rational coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Element {
    terms: BTreeMap<Monomial, Scalar>,
}

impl Element {
    pub fn zero() -> Self {
        Element::default()
    }

    pub fn one() -> Self {
        Element::scalar(Scalar::one())
    }

    pub fn scalar(c: Scalar) -> Self {
        Element::monomial(Monomial::one(), c)
    }

    pub fn monomial(m: Monomial, c: Scalar) -> Self {
        let mut e = Element::zero();
        e.add_term(m, c);
        e
    }

    pub fn generator(g: usize) -> Self {
        Element::monomial(Monomial::generator(g), Scalar::one())
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Scalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(cur) => {
                *cur += c;
                if cur.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Element, c: &Scalar) {
        for (m, v) in &other.terms {
            self.add_term(m.clone(), v * c);
        }
    }

    pub fn scaled(&self, c: &Scalar) -> Element {
        let mut out = Element::zero();
        out.add_scaled(self, c);
        out
    }

    /// The constant term (coefficient of the unit monomial).
    pub fn constant(&self) -> Scalar {
        self.coefficient(&Monomial::one())
    }

    /// Drops every term whose monomial fails `keep`.
    pub fn filter(&self, mut keep: impl FnMut(&Monomial) -> bool) -> Element {
        Element {
            terms: self.terms.iter().filter(|(m, _)| keep(m)).map(|(m, c)| (m.clone(), c.clone())).collect(),
        }
    }
}

impl Add for &Element {
    type Output = Element;
    fn add(self, o: &Element) -> Element {
        let mut out = self.clone();
        out.add_scaled(o, &Scalar::one());
        out
    }
}

impl Sub for &Element {
    type Output = Element;
    fn sub(self, o: &Element) -> Element {
        let mut out = self.clone();
        out.add_scaled(o, &-Scalar::one());
        out
    }
}

impl Neg for &Element {
    type Output = Element;
    fn neg(self) -> Element {
        self.scaled(&-Scalar::one())
    }
}

/// Bounds for checks that range over infinitely many bidegrees.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TruncationWindow {
    pub coh_max: i64,
    pub adams_max: i64,
}

impl TruncationWindow {
    pub fn new(coh_max: i64, adams_max: i64) -> Result<Self> {
        if coh_max < 0 || adams_max < 0 {
            return Err(Error::input("window bounds must be non-negative"));
        }
        Ok(TruncationWindow { coh_max, adams_max })
    }
}

impl Default for TruncationWindow {
    fn default() -> Self {
        TruncationWindow { coh_max: 5, adams_max: 4 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub check: String,
    pub detail: String,
}

impl Witness {
    pub fn new(check: impl Into<String>, detail: impl Into<String>) -> Self {
        Witness { check: check.into(), detail: detail.into() }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub failures: Vec<Witness>,
    pub checks_run: usize,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Result of a cohomology computation on one bidegree slice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologySlice {
    pub bidegree: BiDegree,
    pub dim: usize,
    pub representatives: Vec<Element>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConnectivityVerdict {
    pub connected: bool,
    pub window: TruncationWindow,
    pub witnesses: Vec<Witness>,
}

/// A finitely presented Adams-graded cdga.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cdga {
    name: String,
    generators: Vec<GeneratorSpec>,
    blocks: Vec<Block>,
    block_of: Vec<usize>,
    differential: Vec<Element>,
    products: BTreeMap<(usize, usize), Element>,
}

impl Cdga {
    /// The ground field as a cdga (no generators).
    pub fn trivial() -> Self {
        Cdga {
            name: "Q".into(),
            generators: Vec::new(),
            blocks: Vec::new(),
            block_of: Vec::new(),
            differential: Vec::new(),
            products: BTreeMap::new(),
        }
    }

    /// A single-block presentation with zero differential and empty table.
    pub fn new(name: impl Into<String>, kind: Kind, generators: Vec<GeneratorSpec>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for g in &generators {
            if !seen.insert(g.name.clone()) {
                return Err(Error::input(format!("duplicate generator name `{}`", g.name)));
            }
            if g.bidegree.adams < 1 {
                return Err(Error::input(format!(
                    "generator `{}` has Adams degree {} (must be at least 1)",
                    g.name, g.bidegree.adams
                )));
            }
        }
        let n = generators.len();
        let blocks = if n == 0 {
            Vec::new()
        } else {
            vec![Block { kind, start: 0, end: n }]
        };
        Ok(Cdga {
            name: name.into(),
            differential: vec![Element::zero(); n],
            block_of: vec![0; n],
            generators,
            blocks,
            products: BTreeMap::new(),
        })
    }

    pub fn free(name: impl Into<String>, generators: Vec<GeneratorSpec>) -> Result<Self> {
        Cdga::new(name, Kind::Free, generators)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn set_name(&mut self, name: impl Into<String>) {
        self.name = name.into();
    }

    pub fn kind(&self) -> Kind {
        if self.blocks.iter().all(|b| b.kind == Kind::Free) {
            Kind::Free
        } else {
            Kind::Table
        }
    }

    pub fn generators(&self) -> &[GeneratorSpec] {
        &self.generators
    }

    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn block_kind(&self, g: usize) -> Kind {
        self.blocks[self.block_of[g]].kind
    }

    pub fn find(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    pub fn gen(&self, name: &str) -> Element {
        let g = self.find(name).unwrap_or_else(|| panic!("no generator named `{name}`"));
        Element::generator(g)
    }

    pub fn generator_bidegree(&self, g: usize) -> BiDegree {
        self.generators[g].bidegree
    }

    pub fn differential_of(&self, g: usize) -> &Element {
        &self.differential[g]
    }

    pub fn products(&self) -> &BTreeMap<(usize, usize), Element> {
        &self.products
    }

    pub fn set_differential(&mut self, g: usize, d: Element) {
        self.differential[g] = d;
    }

    pub fn set_differential_by_name(&mut self, name: &str, d: Element) -> Result<()> {
        let g = self.find(name).ok_or_else(|| Error::input(format!("undeclared generator `{name}`")))?;
        self.set_differential(g, d);
        Ok(())
    }

    /// Records `g * h = value` and the graded-commutative mirror `h * g`,
    /// unless that mirror has been given explicitly.
    pub fn set_product(&mut self, g: usize, h: usize, value: Element) -> Result<()> {
        if self.block_of[g] != self.block_of[h] || self.blocks[self.block_of[g]].kind != Kind::Table {
            return Err(Error::input(format!(
                "product {} * {} is not inside a multiplication table",
                self.generators[g].name, self.generators[h].name
            )));
        }
        let sign = self.koszul(g, h);
        self.products.insert((g, h), value.clone());
        self.products.entry((h, g)).or_insert_with(|| if sign { -&value } else { value });
        Ok(())
    }

    fn odd(&self, g: usize) -> bool {
        self.generators[g].bidegree.coh.rem_euclid(2) == 1
    }

    fn koszul(&self, g: usize, h: usize) -> bool {
        self.odd(g) && self.odd(h)
    }

    pub fn monomial_bidegree(&self, m: &Monomial) -> BiDegree {
        m.factors().iter().fold(BiDegree::ZERO, |acc, &(g, e)| {
            let b = self.generators[g].bidegree;
            acc + BiDegree::new(b.coh * e as i64, b.adams * e as i64)
        })
    }

    /// The common bidegree of all terms, or `None` for zero or inhomogeneous elements.
    pub fn bidegree_of(&self, a: &Element) -> Option<BiDegree> {
        let mut it = a.terms().keys().map(|m| self.monomial_bidegree(m));
        let first = it.next()?;
        it.all(|b| b == first).then_some(first)
    }

    pub fn is_homogeneous(&self, a: &Element, deg: BiDegree) -> bool {
        a.terms().keys().all(|m| self.monomial_bidegree(m) == deg)
    }

    /// Brings a word of generators (read left to right) into canonical
    /// form, accumulating `coef` times the result into `out`.
    fn normalize_word(&self, mut word: Vec<usize>, coef: Scalar, out: &mut Element) {
        let n = word.len();
        let mut negate = false;
        for i in 0..n {
            for j in 0..n.saturating_sub(1 + i) {
                if word[j] > word[j + 1] {
                    if self.koszul(word[j], word[j + 1]) {
                        negate = !negate;
                    }
                    word.swap(j, j + 1);
                }
            }
        }
        let coef = if negate { -coef } else { coef };
        let mut factors = Vec::new();
        let mut i = 0;
        while i < n {
            let g = word[i];
            let block = self.block_of[g];
            if self.blocks[block].kind == Kind::Table {
                if i + 1 < n && self.block_of[word[i + 1]] == block {
                    let Some(prod) = self.products.get(&(g, word[i + 1])) else {
                        return;
                    };
                    for (m, c) in prod.terms() {
                        let mut next = word[..i].to_vec();
                        next.extend(m.expand());
                        next.extend_from_slice(&word[i + 2..]);
                        self.normalize_word(next, &coef * c, out);
                    }
                    return;
                }
                factors.push((g, 1));
                i += 1;
            } else {
                let run = word[i..].iter().take_while(|&&h| h == g).count();
                if run >= 2 && self.odd(g) {
                    return;
                }
                factors.push((g, run as u32));
                i += run;
            }
        }
        out.add_term(Monomial(factors), coef);
    }

    /// Reduces an arbitrary element (possibly with non-canonical monomials
    /// built by hand) to canonical form.
    pub fn canonicalize(&self, a: &Element) -> Element {
        let mut out = Element::zero();
        for (m, c) in a.terms() {
            self.normalize_word(m.expand(), c.clone(), &mut out);
        }
        out
    }

    pub fn multiply_monomials(&self, a: &Monomial, b: &Monomial) -> Element {
        let mut word = a.expand();
        word.extend(b.expand());
        let mut out = Element::zero();
        self.normalize_word(word, Scalar::one(), &mut out);
        out
    }

    pub fn multiply(&self, a: &Element, b: &Element) -> Element {
        let mut out = Element::zero();
        for (ma, ca) in a.terms() {
            for (mb, cb) in b.terms() {
                let mut word = ma.expand();
                word.extend(mb.expand());
                self.normalize_word(word, ca * cb, &mut out);
            }
        }
        out
    }

    pub fn multiply_all(&self, factors: &[Element]) -> Element {
        factors.iter().fold(Element::one(), |acc, f| self.multiply(&acc, f))
    }

    /// The generator differential extended by linearity and the Leibniz rule.
    pub fn apply_d(&self, a: &Element) -> Element {
        let mut out = Element::zero();
        for (m, c) in a.terms() {
            let word = m.expand();
            let mut sign_odd = false;
            for (i, &g) in word.iter().enumerate() {
                for (dm, dc) in self.differential[g].terms() {
                    let mut next = word[..i].to_vec();
                    next.extend(dm.expand());
                    next.extend_from_slice(&word[i + 1..]);
                    let coef = if sign_odd { -(c * dc) } else { c * dc };
                    self.normalize_word(next, coef, &mut out);
                }
                if self.odd(g) {
                    sign_odd = !sign_odd;
                }
            }
        }
        out
    }

    /// All canonical monomials of Adams degree exactly `adams`, sorted.
    pub fn monomials_of_weight(&self, adams: i64) -> Vec<Monomial> {
        let mut out = Vec::new();
        if adams < 0 {
            return out;
        }
        let mut current = Vec::new();
        self.enumerate(0, adams, &mut current, &mut out);
        out.sort();
        out
    }

    fn enumerate(&self, g: usize, remaining: i64, current: &mut Vec<(usize, u32)>, out: &mut Vec<Monomial>) {
        if remaining == 0 {
            out.push(Monomial(current.clone()));
            return;
        }
        if g == self.generators.len() {
            return;
        }
        let w = self.generators[g].bidegree.adams;
        let block = &self.blocks[self.block_of[g]];
        // skip g entirely
        self.enumerate(g + 1, remaining, current, out);
        match block.kind {
            Kind::Table => {
                if w <= remaining {
                    current.push((g, 1));
                    self.enumerate(block.end, remaining - w, current, out);
                    current.pop();
                }
            }
            Kind::Free => {
                let max_e = if self.odd(g) { 1 } else { remaining / w };
                for e in 1..=max_e {
                    if e * w > remaining {
                        break;
                    }
                    current.push((g, e as u32));
                    self.enumerate(g + 1, remaining - e * w, current, out);
                    current.pop();
                }
            }
        }
    }

    /// Monomial basis of the slice `A^n(r)`.
    pub fn basis_slice(&self, n: i64, r: i64) -> Vec<Monomial> {
        self.monomials_of_weight(r)
            .into_iter()
            .filter(|m| self.monomial_bidegree(m).coh == n)
            .collect()
    }

    /// Coordinates of `a` in `basis`; `None` if some monomial is missing.
    pub fn coordinates(a: &Element, index: &BTreeMap<Monomial, usize>) -> Option<SparseVector> {
        let mut v = SparseVector::new();
        for (m, c) in a.terms() {
            v.insert(*index.get(m)?, c.clone());
        }
        Some(v)
    }

    pub fn element_from_coordinates(v: &SparseVector, basis: &[Monomial]) -> Element {
        let mut e = Element::zero();
        for (&i, c) in v {
            e.add_term(basis[i].clone(), c.clone());
        }
        e
    }

    /// Matrix of `d: A^n(r) -> A^{n+1}(r)` in the slice bases.
    pub fn d_matrix(&self, n: i64, r: i64) -> SparseMatrix {
        let src = self.basis_slice(n, r);
        let tgt = self.basis_slice(n + 1, r);
        let index: BTreeMap<Monomial, usize> = tgt.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let mut mat = SparseMatrix::zeros(tgt.len(), src.len());
        for (j, m) in src.iter().enumerate() {
            let dm = self.apply_d(&Element::monomial(m.clone(), Scalar::one()));
            let col = Cdga::coordinates(&dm, &index).expect("differential leaves its target slice");
            for (i, c) in col {
                mat.set(i, j, c);
            }
        }
        mat
    }

    pub fn cohomology_slice(&self, n: i64, r: i64) -> CohomologySlice {
        let basis = self.basis_slice(n, r);
        let reps = linalg::cohomology_reps(&self.d_matrix(n - 1, r), &self.d_matrix(n, r), basis.len());
        CohomologySlice {
            bidegree: BiDegree::new(n, r),
            dim: reps.len(),
            representatives: reps.iter().map(|v| Cdga::element_from_coordinates(v, &basis)).collect(),
        }
    }

    pub fn is_coh_connected(&self, w: TruncationWindow) -> ConnectivityVerdict {
        let mut witnesses = Vec::new();
        let h00 = self.cohomology_slice(0, 0).dim;
        if h00 != 1 {
            witnesses.push(Witness::new("H0(0)", format!("dimension {h00}, expected 1")));
        }
        for r in 1..=w.adams_max {
            for n in -w.coh_max..=0 {
                let h = self.cohomology_slice(n, r);
                if h.dim != 0 {
                    witnesses.push(Witness::new(
                        format!("H^{n}({r})"),
                        format!("dimension {} (expected 0)", h.dim),
                    ));
                }
            }
        }
        ConnectivityVerdict { connected: witnesses.is_empty(), window: w, witnesses }
    }

    /// True when every generator sits in cohomological degree at least 1, so
    /// that all positive-weight elements have positive degree.
    pub fn positively_generated(&self) -> bool {
        self.generators.iter().all(|g| g.bidegree.coh >= 1)
    }

    pub fn validate(&self, w: TruncationWindow) -> ValidationReport {
        let mut report = ValidationReport::default();
        for (g, spec) in self.generators.iter().enumerate() {
            let d = &self.differential[g];
            let expected = spec.bidegree + BiDegree::new(1, 0);
            report.checks_run += 1;
            for m in d.terms().keys() {
                let b = self.monomial_bidegree(m);
                if b != expected {
                    report.failures.push(Witness::new(
                        "d bidegree",
                        format!("d{} has a term {} of bidegree {b}, expected {expected}", spec.name, self.fmt_monomial(m)),
                    ));
                    break;
                }
            }
            report.checks_run += 1;
            let dd = self.apply_d(d);
            if !dd.is_zero() {
                report.failures.push(Witness::new(
                    "d squared",
                    format!("d(d{}) = {}", spec.name, self.fmt_element(&dd)),
                ));
            }
        }
        for block in &self.blocks {
            if block.kind != Kind::Table {
                continue;
            }
            self.validate_table(block, w, &mut report);
        }
        report
    }

    fn validate_table(&self, block: &Block, w: TruncationWindow, report: &mut ValidationReport) {
        let gens: Vec<usize> = (block.start..block.end).collect();
        let name = |g: usize| self.generators[g].name.clone();
        for (&(g, h), value) in self.products.range((block.start, 0)..(block.end, 0)) {
            report.checks_run += 1;
            let expected = self.generators[g].bidegree + self.generators[h].bidegree;
            let ok = value.terms().keys().all(|m| {
                m.factors().len() == 1
                    && m.factors()[0].1 == 1
                    && self.block_of[m.factors()[0].0] == self.block_of[g]
                    && self.monomial_bidegree(m) == expected
            });
            if !ok {
                report.failures.push(Witness::new(
                    "table entry",
                    format!("{} * {} must be a combination of table generators of bidegree {expected}", name(g), name(h)),
                ));
            }
        }
        let prod = |g: usize, h: usize| self.multiply(&Element::generator(g), &Element::generator(h));
        for &g in &gens {
            for &h in &gens {
                report.checks_run += 1;
                let gh = prod(g, h);
                let hg = prod(h, g);
                let want = if self.koszul(g, h) { -&hg } else { hg };
                if gh != want {
                    report.failures.push(Witness::new(
                        "graded commutativity",
                        format!("{} * {} = {} but the Koszul mirror gives {}", name(g), name(h), self.fmt_element(&gh), self.fmt_element(&want)),
                    ));
                }
                report.checks_run += 1;
                let lhs = self.apply_d(&gh);
                let mut rhs = self.multiply(&self.differential[g], &Element::generator(h));
                let tail = self.multiply(&Element::generator(g), &self.differential[h]);
                rhs.add_scaled(&tail, &if self.odd(g) { -Scalar::one() } else { Scalar::one() });
                if lhs != rhs {
                    report.failures.push(Witness::new(
                        "Leibniz rule",
                        format!("d({} * {}) = {} but Leibniz gives {}", name(g), name(h), self.fmt_element(&lhs), self.fmt_element(&rhs)),
                    ));
                }
                for &k in &gens {
                    let weight = [g, h, k].iter().map(|&x| self.generators[x].bidegree.adams).sum::<i64>();
                    if weight > w.adams_max {
                        continue;
                    }
                    report.checks_run += 1;
                    let left = self.multiply(&gh, &Element::generator(k));
                    let right = self.multiply(&Element::generator(g), &prod(h, k));
                    if left != right {
                        report.failures.push(Witness::new(
                            "associativity",
                            format!("({} {}) {} != {} ({} {})", name(g), name(h), name(k), name(g), name(h), name(k)),
                        ));
                    }
                }
            }
        }
    }

    /// Graded tensor product; clashing names in `other` get primes appended.
    pub fn tensor(&self, other: &Cdga) -> Cdga {
        let offset = self.generators.len();
        let mut names: BTreeSet<String> = self.generators.iter().map(|g| g.name.clone()).collect();
        let mut generators = self.generators.clone();
        let other_names: BTreeSet<String> = other.generators.iter().map(|g| g.name.clone()).collect();
        for g in &other.generators {
            let mut name = g.name.clone();
            while names.contains(&name) || (name != g.name && other_names.contains(&name)) {
                name.push('\'');
            }
            names.insert(name.clone());
            generators.push(GeneratorSpec { name, bidegree: g.bidegree });
        }
        let shift = |e: &Element| {
            let mut out = Element::zero();
            for (m, c) in e.terms() {
                out.add_term(Monomial(m.factors().iter().map(|&(g, x)| (g + offset, x)).collect()), c.clone());
            }
            out
        };
        let mut blocks = self.blocks.clone();
        blocks.extend(other.blocks.iter().map(|b| Block { kind: b.kind, start: b.start + offset, end: b.end + offset }));
        let mut block_of = self.block_of.clone();
        block_of.extend(other.block_of.iter().map(|b| b + self.blocks.len()));
        let mut differential = self.differential.clone();
        differential.extend(other.differential.iter().map(shift));
        let mut products = self.products.clone();
        for (&(g, h), v) in &other.products {
            products.insert((g + offset, h + offset), shift(v));
        }
        Cdga {
            name: format!("{}*{}", self.name, other.name),
            generators,
            blocks,
            block_of,
            differential,
            products,
        }
    }

    /// Free cdga on the given generators, then adjoins them as one new free
    /// block after the existing generators. Returns the index of the first new one.
    pub fn adjoin_free(&mut self, gens: Vec<GeneratorSpec>, differentials: Vec<Element>) -> Result<usize> {
        let start = self.generators.len();
        for g in &gens {
            if self.find(&g.name).is_some() {
                return Err(Error::input(format!("duplicate generator name `{}`", g.name)));
            }
            if g.bidegree.adams < 1 {
                return Err(Error::input(format!("generator `{}` must have Adams degree >= 1", g.name)));
            }
        }
        let n = gens.len();
        if n == 0 {
            return Ok(start);
        }
        let block = self.blocks.len();
        self.blocks.push(Block { kind: Kind::Free, start, end: start + n });
        self.block_of.extend(std::iter::repeat_n(block, n));
        self.generators.extend(gens);
        self.differential.extend(differentials);
        Ok(start)
    }

    pub fn fmt_monomial(&self, m: &Monomial) -> String {
        if m.is_one() {
            return "1".into();
        }
        m.factors()
            .iter()
            .map(|&(g, e)| {
                let n = &self.generators[g].name;
                if e == 1 {
                    n.clone()
                } else {
                    format!("{n}^{e}")
                }
            })
            .collect::<Vec<_>>()
            .join("*")
    }

    /// Human-readable form, e.g. `2*x*y - 1/2*z`.
    pub fn fmt_element(&self, a: &Element) -> String {
        if a.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (i, (m, c)) in a.terms().iter().enumerate() {
            let neg = c < &Scalar::zero();
            let abs = if neg { -c.clone() } else { c.clone() };
            if i == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            if m.is_one() {
                s.push_str(&fmt_scalar(&abs));
            } else if abs.is_one() {
                s.push_str(&self.fmt_monomial(m));
            } else {
                s.push_str(&format!("{}*{}", fmt_scalar(&abs), self.fmt_monomial(m)));
            }
        }
        s
    }
}

/// Applies the algebra map sending generator `g` of the source to
/// `images[g]` in `target`.
pub fn map_element(target: &Cdga, images: &[Element], x: &Element) -> Element {
    let mut out = Element::zero();
    for (m, c) in x.terms() {
        let factors: Vec<Element> = m.expand().into_iter().map(|g| images[g].clone()).collect();
        out.add_scaled(&target.multiply_all(&factors), c);
    }
    out
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;
    use crate::linalg::q;

    pub fn e1() -> Cdga {
        Cdga::free("E1", vec![GeneratorSpec::new("x", 1, 1)]).unwrap()
    }

    pub fn e2() -> Cdga {
        Cdga::new("E2", Kind::Table, vec![GeneratorSpec::new("x0", 1, 1), GeneratorSpec::new("x1", 1, 1)]).unwrap()
    }

    pub fn e3() -> Cdga {
        let mut a = Cdga::free(
            "E3",
            vec![GeneratorSpec::new("x", 1, 1), GeneratorSpec::new("y", 1, 1), GeneratorSpec::new("z", 1, 2)],
        )
        .unwrap();
        let xy = a.multiply(&a.gen("x"), &a.gen("y"));
        a.set_differential_by_name("z", xy).unwrap();
        a
    }

    pub fn scalar(n: i64) -> Scalar {
        q(n)
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use crate::linalg::q;

    #[test]
    fn validate_examples() {
        let w = TruncationWindow::default();
        assert!(e1().validate(w).passed());
        assert!(e3().validate(w).passed());
        let mut bad = e3();
        bad.set_differential_by_name("z", bad.gen("x")).unwrap();
        let rep = bad.validate(w);
        assert!(!rep.passed());
        assert!(rep.failures[0].detail.contains("dz"));
    }

    #[test]
    fn construction_rejects_bad_generators() {
        assert!(Cdga::free("A", vec![GeneratorSpec::new("x", 1, 0)]).is_err());
        assert!(Cdga::free("A", vec![GeneratorSpec::new("x", 1, 1), GeneratorSpec::new("x", 2, 1)]).is_err());
    }

    #[test]
    fn basis_slices() {
        let a = e1();
        assert_eq!(a.basis_slice(0, 0), vec![Monomial::one()]);
        assert_eq!(a.basis_slice(1, 1), vec![Monomial::generator(0)]);
        assert!(a.basis_slice(2, 2).is_empty());
        let b = e3();
        let s23: Vec<String> = b.basis_slice(2, 3).iter().map(|m| b.fmt_monomial(m)).collect();
        assert_eq!(s23, vec!["x*z", "y*z"]);
        let s22: Vec<String> = b.basis_slice(2, 2).iter().map(|m| b.fmt_monomial(m)).collect();
        assert_eq!(s22, vec!["x*y"]);
    }

    #[test]
    fn koszul_signs_in_products() {
        let a = e3();
        let xy = a.multiply(&a.gen("x"), &a.gen("y"));
        let yx = a.multiply(&a.gen("y"), &a.gen("x"));
        assert_eq!(yx, -&xy);
        let e = e1();
        assert!(e.multiply(&e.gen("x"), &e.gen("x")).is_zero());
        let t = e2();
        assert!(t.multiply(&t.gen("x0"), &t.gen("x1")).is_zero());
    }

    #[test]
    fn leibniz_examples() {
        let a = e3();
        assert_eq!(a.apply_d(&a.gen("z")), a.multiply(&a.gen("x"), &a.gen("y")));
        let xz = a.multiply(&a.gen("x"), &a.gen("z"));
        assert!(a.apply_d(&xz).is_zero());
        assert!(a.apply_d(&Element::one()).is_zero());
    }

    #[test]
    fn even_generators_take_powers() {
        let a = Cdga::free("P", vec![GeneratorSpec::new("u", 2, 1)]).unwrap();
        let u = a.gen("u");
        let u2 = a.multiply(&u, &u);
        assert_eq!(a.bidegree_of(&u2), Some(BiDegree::new(4, 2)));
        assert_eq!(a.basis_slice(6, 3).len(), 1);
        assert!(a.is_coh_connected(TruncationWindow::default()).connected);
    }

    #[test]
    fn cohomology_examples() {
        let a = e1();
        assert_eq!(a.cohomology_slice(1, 1).dim, 1);
        assert_eq!(a.cohomology_slice(2, 2).dim, 0);
        let b = e3();
        assert_eq!(b.cohomology_slice(1, 2).dim, 0);
        assert_eq!(b.cohomology_slice(2, 2).dim, 0);
        assert_eq!(b.cohomology_slice(0, 0).dim, 1);
        assert_eq!(b.cohomology_slice(2, 3).dim, 2);
    }

    #[test]
    fn connectivity() {
        let w = TruncationWindow::default();
        for a in [e1(), e2(), e3()] {
            assert!(a.is_coh_connected(w).connected, "{}", a.name());
        }
        let bad = Cdga::free("B", vec![GeneratorSpec::new("u", 1, 1), GeneratorSpec::new("v", 0, 1)]).unwrap();
        let v = bad.is_coh_connected(w);
        assert!(!v.connected);
        assert!(v.witnesses.iter().any(|x| x.check == "H^0(1)"));
    }

    #[test]
    fn tensor_products() {
        let a = e1().tensor(&e1());
        let names: Vec<&str> = a.generators().iter().map(|g| g.name.as_str()).collect();
        assert_eq!(names, vec!["x", "x'"]);
        assert_eq!(a.kind(), Kind::Free);
        let unit = e3().tensor(&Cdga::trivial());
        for r in 0..4 {
            for n in 0..4 {
                assert_eq!(unit.basis_slice(n, r).len(), e3().basis_slice(n, r).len());
            }
        }
        let mixed = e1().tensor(&e2());
        assert_eq!(mixed.kind(), Kind::Table);
        let s: Vec<String> = mixed.basis_slice(2, 2).iter().map(|m| mixed.fmt_monomial(m)).collect();
        assert_eq!(s, vec!["x*x0", "x*x1"]);
        let sign = mixed.multiply(&mixed.gen("x0"), &mixed.gen("x"));
        assert_eq!(sign, -&mixed.multiply(&mixed.gen("x"), &mixed.gen("x0")));
        assert_eq!(scalar(1), q(1));
    }
}
