//! Augmented algebras over a base `𝒩`: the fiber `K = A ⊗_𝒩 ℚ`, the relative
//! bar construction as a connection over `𝒩`, semi-direct product data, the
//! two co-actions, base change, and the punctured-line demo.

use std::collections::BTreeMap;
use std::ops::Range;

use num_traits::One;

use crate::bar::{self, BarWord, HopfPresentation};
use crate::cdga::{map_element, BiDegree, Cdga, Element, GeneratorSpec, Kind, Monomial, TruncationWindow, Witness};
use crate::connection::{self, ConnectionModule};
use crate::error::{Error, Result};
use crate::linalg::{self, Scalar, SparseMatrix, SparseVector};
use crate::minimal_model::{generalized_nilpotent_check, map_chain, minimal_model};
use crate::parse::CdgaFile;

mod delta;

pub use delta::{delta_approximation, delta_stabilization, DeltaApprox, Stabilization};

/// `A = 𝒩 ⊗ Sym*E` with the base generators declared first, and an
/// augmentation `ε: A → 𝒩`. The own generators are normalized so that
/// `ε(e) = 0`, i.e. `e ↦ e − ε(e)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AugmentedOverN {
    base: Cdga,
    total: Cdga,
}

fn sign(odd: bool) -> Scalar {
    if odd {
        -Scalar::one()
    } else {
        Scalar::one()
    }
}

impl AugmentedOverN {
    /// `aug` maps own generators of `total` to elements in the base generators.
    pub fn new(base: &Cdga, total: &Cdga, aug: &BTreeMap<usize, Element>) -> Result<Self> {
        if base.kind() != Kind::Free || total.kind() != Kind::Free {
            return Err(Error::unsupported("relative computations need free base and total algebras"));
        }
        let nb = base.num_generators();
        if total.num_generators() < nb {
            return Err(Error::input("total algebra has fewer generators than the base"));
        }
        for g in 0..nb {
            if total.generators()[g] != base.generators()[g] || total.differential_of(g) != base.differential_of(g) {
                return Err(Error::input(format!(
                    "total algebra must start with the base generators, declared identically (mismatch at {})",
                    base.generators()[g].name
                )));
            }
        }
        let mut eps: Vec<Element> = (0..total.num_generators())
            .map(|g| if g < nb { Element::generator(g) } else { Element::zero() })
            .collect();
        for (&g, value) in aug {
            if g < nb {
                if *value != Element::generator(g) {
                    return Err(Error::input(format!("augmentation of base generator {} is fixed", base.generators()[g].name)));
                }
                continue;
            }
            if value.terms().keys().any(|m| m.generators().any(|h| h >= nb)) {
                return Err(Error::input(format!("augmentation of {} must lie in the base", total.generators()[g].name)));
            }
            if !value.is_zero() && !total.is_homogeneous(value, total.generator_bidegree(g)) {
                return Err(Error::input(format!("augmentation of {} has the wrong bidegree", total.generators()[g].name)));
            }
            eps[g] = value.clone();
        }
        for g in nb..total.num_generators() {
            let lhs = map_element(base, &eps, total.differential_of(g));
            let rhs = base.apply_d(&eps[g]);
            if lhs != rhs {
                return Err(Error::input(format!(
                    "augmentation is not a chain map: eps(d {}) = {} but d eps({0}) = {}",
                    total.generators()[g].name,
                    base.fmt_element(&lhs),
                    base.fmt_element(&rhs)
                )));
            }
        }
        // e ↦ e' + ε(e) rewrites the differential in the normalized generators
        let shift: Vec<Element> = (0..total.num_generators())
            .map(|g| if g < nb { Element::generator(g) } else { &Element::generator(g) + &eps[g] })
            .collect();
        let mut normalized = total.clone();
        for (g, e) in eps.iter().enumerate().skip(nb) {
            let d = &map_element(total, &shift, total.differential_of(g)) - &base.apply_d(e);
            normalized.set_differential(g, d);
        }
        Ok(AugmentedOverN { base: base.clone(), total: normalized })
    }

    /// An algebra over the ground field with its canonical augmentation.
    pub fn over_ground(a: &Cdga) -> Result<Self> {
        AugmentedOverN::new(&Cdga::trivial(), a, &BTreeMap::new())
    }

    pub fn from_files(base: &CdgaFile, total: &CdgaFile) -> Result<Self> {
        AugmentedOverN::new(&base.cdga, &total.cdga, &total.augmentation)
    }

    pub fn base(&self) -> &Cdga {
        &self.base
    }

    /// The total algebra in normalized generators.
    pub fn total(&self) -> &Cdga {
        &self.total
    }

    pub fn base_len(&self) -> usize {
        self.base.num_generators()
    }

    pub fn own(&self) -> Range<usize> {
        self.base_len()..self.total.num_generators()
    }

    /// `ε: A → 𝒩`.
    pub fn epsilon(&self, x: &Element) -> Element {
        x.filter(|m| m.generators().all(|g| g < self.base_len()))
    }

    /// The fiber `K = A ⊗_𝒩 ℚ = Sym*E` with the differential `d⁰`.
    pub fn fiber(&self) -> Cdga {
        let specs: Vec<GeneratorSpec> = self.own().map(|g| self.total.generators()[g].clone()).collect();
        let mut k = Cdga::free(format!("{}/{}", self.total.name(), self.base.name()), specs).expect("own generators are valid");
        for g in self.own() {
            k.set_differential(g - self.base_len(), self.to_fiber(self.total.differential_of(g)));
        }
        k
    }

    /// The quotient map `A → K` killing `𝒩⁺`.
    pub fn to_fiber(&self, x: &Element) -> Element {
        let mut out = Element::zero();
        for (m, c) in x.terms() {
            let (low, high) = m.split_at(self.base_len());
            if low.is_one() {
                out.add_term(high, c.clone());
            }
        }
        out
    }

    /// The inclusion `K → A` of the own generators.
    pub fn from_fiber(&self, x: &Element) -> Element {
        let mut out = Element::zero();
        for (m, c) in x.terms() {
            out.add_term(m.shifted(self.base_len()), c.clone());
        }
        out
    }

    /// `Γ(μ)` for a monomial of `K`: the `𝒩⁺ ⊗ K` part of `d_A(μ)`, as
    /// `(base monomial, fiber monomial, coefficient)`.
    pub fn connection_of(&self, mono: &Monomial) -> Vec<(Monomial, Monomial, Scalar)> {
        let lift = Element::monomial(mono.shifted(self.base_len()), Scalar::one());
        let mut out = Vec::new();
        for (m, c) in self.total.apply_d(&lift).terms() {
            let (low, high) = m.split_at(self.base_len());
            if !low.is_one() {
                out.push((low, high, c.clone()));
            }
        }
        out
    }

    fn check_hypotheses(&self, w_max: usize) -> Result<()> {
        let verdict = self.base.is_coh_connected(TruncationWindow { coh_max: 2, adams_max: w_max as i64 });
        if !verdict.connected {
            return Err(Error::unsupported(format!("base {} is not cohomologically connected in the window", self.base.name())));
        }
        let nil = generalized_nilpotent_check(&self.total, self.base_len());
        if !nil.nilpotent {
            return Err(Error::unsupported(format!(
                "{} is not generalized nilpotent over {}; replace it by its relative minimal model",
                self.total.name(),
                self.base.name()
            )));
        }
        Ok(())
    }
}

/// One slice of `A = 𝒩 ⊕ ℐ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitSlice {
    pub bidegree: BiDegree,
    pub base_dim: usize,
    pub ideal_basis: Vec<Element>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitIdeal {
    pub slices: Vec<SplitSlice>,
    pub witnesses: Vec<Witness>,
}

/// Splits every slice in the window into base monomials and the ideal `ℐ = ker ε`,
/// checking that `ℐ` is closed under `d` and under multiplication by the base.
pub fn split_ideal(x: &AugmentedOverN, window: TruncationWindow) -> SplitIdeal {
    let a = x.total();
    let nb = x.base_len();
    let mut slices = Vec::new();
    let mut witnesses = Vec::new();
    for r in 0..=window.adams_max {
        for n in 0..=window.coh_max {
            let basis = a.basis_slice(n, r);
            if basis.is_empty() {
                continue;
            }
            let base_dim = basis.iter().filter(|m| m.generators().all(|g| g < nb)).count();
            let ideal_basis: Vec<Element> = basis
                .iter()
                .filter(|m| m.generators().any(|g| g >= nb))
                .map(|m| {
                    let e = Element::monomial(m.clone(), Scalar::one());
                    &e - &x.epsilon(&e)
                })
                .collect();
            for v in &ideal_basis {
                if !x.epsilon(&a.apply_d(v)).is_zero() {
                    witnesses.push(Witness::new("ideal", format!("d({}) leaves the ideal", a.fmt_element(v))));
                }
                for g in 0..nb {
                    if !x.epsilon(&a.multiply(&Element::generator(g), v)).is_zero() {
                        witnesses.push(Witness::new("ideal", format!("{} * ({}) leaves the ideal", a.generators()[g].name, a.fmt_element(v))));
                    }
                }
            }
            slices.push(SplitSlice { bidegree: BiDegree::new(n, r), base_dim, ideal_basis });
        }
    }
    SplitIdeal { slices, witnesses }
}

/// `B̄(K)` in weights `≤ w_max` as a connection over the base: `d⁰` is the
/// bar differential of `K` and `Γ` comes from the base part of `d_A` on letters.
pub fn bar_connection(x: &AugmentedOverN, w_max: usize) -> ConnectionModule {
    let k = x.fiber();
    let base = x.base();
    let mut cells = Vec::new();
    let mut words: Vec<BarWord> = Vec::new();
    for w in 0..=w_max {
        for word in bar::words_of_weight(&k, w) {
            cells.push((bar::fmt_word(&k, &word), BiDegree::new(bar::word_bidegree(&k, &word).0, w as i64)));
            words.push(word);
        }
    }
    let index: BTreeMap<&BarWord, usize> = words.iter().enumerate().map(|(i, w)| (w, i)).collect();
    let mut d0 = BTreeMap::new();
    let mut gamma: BTreeMap<(usize, usize), Element> = BTreeMap::new();
    for (j, word) in words.iter().enumerate() {
        for (v, c) in bar::bar_d(&k, word) {
            d0.insert((index[&v], j), c);
        }
        let mut eps = 0i64;
        for (i, letter) in word.iter().enumerate() {
            for (b, o, c) in x.connection_of(letter) {
                let nb = base.monomial_bidegree(&b).coh;
                let mut next = word.clone();
                next[i] = o;
                let coef = sign((eps * (1 + nb)).rem_euclid(2) == 1) * c;
                gamma.entry((index[&next], j)).or_default().add_term(b, coef);
            }
            eps += k.monomial_bidegree(letter).coh - 1;
        }
    }
    gamma.retain(|_, e| !e.is_zero());
    ConnectionModule::new(format!("B({})", k.name()), base, cells, d0, gamma)
}

/// `H⁰` of the relative bar construction: the kernel Hopf algebra `H⁰(B̄(K))`
/// together with the flat connection induced on it.
#[derive(Clone, Debug)]
pub struct RelativeBarH0 {
    pub fiber: Cdga,
    pub kernel: HopfPresentation,
    pub bar: ConnectionModule,
    pub h0: ConnectionModule,
    pub witnesses: Vec<Witness>,
}

pub fn relative_bar_h0(x: &AugmentedOverN, w_max: usize) -> Result<RelativeBarH0> {
    x.check_hypotheses(w_max)?;
    let fiber = x.fiber();
    let kernel = bar::h0_hopf(&fiber, w_max)?;
    let bar = bar_connection(x, w_max);
    let h0 = connection::cohomology(&bar, 0)?;
    let mut witnesses: Vec<Witness> = bar.flatness_witnesses();
    witnesses.extend(h0.flatness_witnesses());
    let h0_dims: Vec<usize> = (0..=w_max).map(|w| h0.cells.iter().filter(|c| c.1.adams == w as i64).count()).collect();
    if h0_dims != kernel.dims() {
        witnesses.push(Witness::new("relative bar", format!("H0 dims {h0_dims:?} differ from the kernel Hopf algebra {:?}", kernel.dims())));
    }
    Ok(RelativeBarH0 { fiber, kernel, bar, h0, witnesses })
}

/// Matrices of an `H⁰` map induced letterwise by an algebra map, one per weight.
/// `None` for a weight where some image is not a cocycle of the target.
fn induced_h0(source: &HopfPresentation, target: &Cdga, target_hp: &HopfPresentation, images: &[Element]) -> Vec<Option<SparseMatrix>> {
    source
        .weights
        .iter()
        .zip(&target_hp.weights)
        .map(|(sw, tw)| {
            let cols = (0..sw.dim())
                .map(|k| tw.coordinates(&map_chain(target, images, &sw.representative(k))))
                .collect::<Option<Vec<SparseVector>>>()?;
            SparseMatrix::from_columns(tw.dim(), cols).ok()
        })
        .collect()
}

/// Dimension data of `G_A ≅ K ⋉ G_𝒩` in weights `≤ w_max`.
#[derive(Clone, Debug)]
pub struct SemiDirectData {
    pub w_max: usize,
    pub base_dims: Vec<usize>,
    pub kernel_dims: Vec<usize>,
    pub total_dims: Vec<usize>,
    /// `Σ_{w'} base(w') · kernel(w − w')`.
    pub predicted_dims: Vec<usize>,
    pub base_gamma: Vec<usize>,
    pub kernel_gamma: Vec<usize>,
    pub total_gamma: Vec<usize>,
    /// Degree-one own generators by weight.
    pub kernel_generators: Vec<Vec<String>>,
    pub kernel_hopf: HopfPresentation,
    pub witnesses: Vec<Witness>,
}

impl SemiDirectData {
    pub fn passed(&self) -> bool {
        self.witnesses.is_empty()
    }
}

pub fn semidirect(x: &AugmentedOverN, w_max: usize) -> Result<SemiDirectData> {
    x.check_hypotheses(w_max)?;
    let (base, total, fiber) = (x.base(), x.total(), x.fiber());
    let nb = x.base_len();
    let base_hp = bar::h0_hopf(base, w_max)?;
    let total_hp = bar::h0_hopf(total, w_max)?;
    let kernel_hp = bar::h0_hopf(&fiber, w_max)?;
    let (base_dims, kernel_dims, total_dims) = (base_hp.dims(), kernel_hp.dims(), total_hp.dims());
    let predicted_dims: Vec<usize> = (0..=w_max).map(|w| (0..=w).map(|v| base_dims[v] * kernel_dims[w - v]).sum()).collect();
    let base_gamma = bar::gamma_from_hopf(base, &base_hp).colie.dims;
    let kernel_gamma = bar::gamma_from_hopf(&fiber, &kernel_hp).colie.dims;
    let total_gamma = bar::gamma_from_hopf(total, &total_hp).colie.dims;
    let mut kernel_generators = vec![Vec::new(); w_max + 1];
    for g in 0..fiber.num_generators() {
        let b = fiber.generator_bidegree(g);
        if b.coh == 1 && b.adams <= w_max as i64 {
            kernel_generators[b.adams as usize].push(fiber.generators()[g].name.clone());
        }
    }
    let mut witnesses = Vec::new();
    if predicted_dims != total_dims {
        witnesses.push(Witness::new("polynomial extension", format!("total dims {total_dims:?} but product formula gives {predicted_dims:?}")));
    }
    for w in 1..=w_max {
        if total_gamma[w] != base_gamma[w] + kernel_gamma[w] {
            witnesses.push(Witness::new(
                "indecomposables",
                format!("weight {w}: gamma_A = {} but gamma_N + gamma_K = {}", total_gamma[w], base_gamma[w] + kernel_gamma[w]),
            ));
        }
    }
    let fiber_minimal = (0..fiber.num_generators())
        .all(|g| fiber.differential_of(g).terms().keys().all(|m| m.expand().len() != 1));
    if fiber_minimal {
        for w in 1..=w_max {
            if kernel_gamma[w] != kernel_generators[w].len() {
                witnesses.push(Witness::new(
                    "kernel generators",
                    format!("weight {w}: gamma_K = {} but {} degree-one generators", kernel_gamma[w], kernel_generators[w].len()),
                ));
            }
        }
    }
    let n_total = total.num_generators();
    let incl: Vec<Element> = (0..nb).map(Element::generator).collect();
    let split: Vec<Element> = (0..n_total).map(|g| if g < nb { Element::generator(g) } else { Element::zero() }).collect();
    let quot: Vec<Element> = (0..n_total).map(|g| if g < nb { Element::zero() } else { Element::generator(g - nb) }).collect();
    let p = induced_h0(&base_hp, total, &total_hp, &incl);
    let s = induced_h0(&total_hp, base, &base_hp, &split);
    let k = induced_h0(&total_hp, &fiber, &kernel_hp, &quot);
    for w in 0..=w_max {
        match (&p[w], &s[w], &k[w]) {
            (Some(p), Some(s), Some(k)) => {
                let sp = s.mul(p)?;
                let id = SparseMatrix::from_columns(base_dims[w], (0..base_dims[w]).map(linalg::unit_vector).collect())?;
                if sp != id {
                    witnesses.push(Witness::new("splitting", format!("weight {w}: s_* p_* is not the identity")));
                }
                if w > 0 && k.mul(p)?.nnz() != 0 {
                    witnesses.push(Witness::new("kernel", format!("weight {w}: the base maps nontrivially to the kernel")));
                }
                if k.rank() != kernel_dims[w] {
                    witnesses.push(Witness::new("kernel", format!("weight {w}: H0(B(A)) does not surject onto the kernel")));
                }
            }
            _ => witnesses.push(Witness::new("hopf maps", format!("weight {w}: an induced map leaves the cocycles"))),
        }
    }
    Ok(SemiDirectData {
        w_max,
        base_dims,
        kernel_dims,
        total_dims,
        predicted_dims,
        base_gamma,
        kernel_gamma,
        total_gamma,
        kernel_generators,
        kernel_hopf: kernel_hp,
        witnesses,
    })
}

/// Co-action matrix: `(e, f) ↦ n` for `e ↦ Σ n ⊗ f`, indexed by fiber generators.
pub type CoactionMatrix = BTreeMap<(usize, usize), Element>;

#[derive(Clone, Debug)]
pub struct CoactionReport {
    /// Fiber generators of degree one in the window.
    pub generators: Vec<usize>,
    pub names: Vec<String>,
    /// From `d_A` projected to `𝒩¹ ⊗ E¹`.
    pub split: CoactionMatrix,
    /// From the connection on `H⁰` of the relative bar construction.
    pub conn: CoactionMatrix,
    /// The `Λ²E¹` part of `d_A`, i.e. the kernel cobracket.
    pub cobracket: BTreeMap<usize, Element>,
    pub witnesses: Vec<Witness>,
}

impl CoactionReport {
    pub fn passed(&self) -> bool {
        self.split == self.conn && self.witnesses.is_empty()
    }
}

fn add_coaction(m: &mut CoactionMatrix, key: (usize, usize), e: &Element, c: &Scalar) {
    let entry = m.entry(key).or_default();
    entry.add_scaled(e, c);
    if entry.is_zero() {
        m.remove(&key);
    }
}

pub fn coaction_check(x: &AugmentedOverN, w_max: usize) -> Result<CoactionReport> {
    let rb = relative_bar_h0(x, w_max)?;
    let (base, total, fiber) = (x.base(), x.total(), &rb.fiber);
    let nb = x.base_len();
    let generators: Vec<usize> = (0..fiber.num_generators())
        .filter(|&g| {
            let b = fiber.generator_bidegree(g);
            b.coh == 1 && b.adams <= w_max as i64
        })
        .collect();
    let names = generators.iter().map(|&g| fiber.generators()[g].name.clone()).collect();
    let mut split = CoactionMatrix::new();
    let mut cobracket = BTreeMap::new();
    for &e in &generators {
        for (m, c) in total.differential_of(nb + e).terms() {
            let (low, high) = m.split_at(nb);
            let single = |mono: &Monomial| match mono.factors() {
                [(g, 1)] => Some(*g),
                _ => None,
            };
            if low.is_one() {
                cobracket.entry(e).or_insert_with(Element::zero).add_term(high, c.clone());
            } else if let (Some(b), Some(f)) = (single(&low), single(&high)) {
                if base.generator_bidegree(b).coh == 1 && fiber.generator_bidegree(f).coh == 1 {
                    add_coaction(&mut split, (e, f), &Element::generator(b), c);
                }
            }
        }
    }
    let mut witnesses = rb.witnesses.clone();
    let mut offsets = vec![0usize; w_max + 2];
    for w in 0..=w_max {
        offsets[w + 1] = offsets[w] + rb.kernel.weights[w].dim();
    }
    let length_one = |w: usize, k: usize| -> SparseVector {
        rb.kernel.weights[w]
            .representative(k)
            .into_iter()
            .filter_map(|(word, c)| match word.as_slice() {
                [letter] => match letter.factors() {
                    [(g, 1)] => Some((*g, c)),
                    _ => None,
                },
                _ => None,
            })
            .collect()
    };
    let mut conn = CoactionMatrix::new();
    for &e in &generators {
        let r = fiber.generator_bidegree(e).adams as usize;
        let hw = &rb.kernel.weights[r];
        let lengths = SparseMatrix::from_columns(fiber.num_generators(), (0..hw.dim()).map(|k| length_one(r, k)).collect())?;
        let Some(lift) = linalg::solve(&lengths, &linalg::unit_vector(e))? else {
            witnesses.push(Witness::new("coaction", format!("[{}] is not the length-one part of a class", fiber.generators()[e].name)));
            continue;
        };
        for (&(i, j), coef) in &rb.h0.gamma {
            if j < offsets[r] || j >= offsets[r + 1] {
                continue;
            }
            let Some(xk) = lift.get(&(j - offsets[r])) else { continue };
            let ri = rb.h0.cells[i].1.adams as usize;
            for (f, c) in length_one(ri, i - offsets[ri]) {
                add_coaction(&mut conn, (e, f), coef, &(xk * c));
            }
        }
    }
    let pos: BTreeMap<usize, usize> = generators.iter().enumerate().map(|(p, &g)| (g, p)).collect();
    let cells = generators.iter().map(|&g| (fiber.generators()[g].name.clone(), BiDegree::new(0, fiber.generator_bidegree(g).adams))).collect();
    let mut gamma = BTreeMap::new();
    for (&(e, f), n) in &split {
        if let (Some(&pe), Some(&pf)) = (pos.get(&e), pos.get(&f)) {
            gamma.insert((pf, pe), n.clone());
        }
    }
    for w in ConnectionModule::new("E1", base, cells, BTreeMap::new(), gamma).flatness_witnesses() {
        witnesses.push(Witness::new(format!("comodule {}", w.check), w.detail));
    }
    Ok(CoactionReport { generators, names, split, conn, cobracket, witnesses })
}

/// The pair over the minimal model `𝒩' → 𝒩` of the base, and the comparison
/// of kernel data and co-actions before and after.
#[derive(Clone, Debug)]
pub struct BaseChange {
    pub changed: AugmentedOverN,
    /// Image in the old base of every generator of the new base.
    pub structure_map: Vec<Element>,
    pub before: SemiDirectData,
    pub after: SemiDirectData,
    pub coaction_before: CoactionReport,
    pub coaction_after: CoactionReport,
    pub witnesses: Vec<Witness>,
}

impl BaseChange {
    pub fn passed(&self) -> bool {
        self.witnesses.is_empty()
    }
}

fn map_coaction(target: &Cdga, images: &[Element], m: &CoactionMatrix) -> CoactionMatrix {
    let mut out = CoactionMatrix::new();
    for (&key, e) in m {
        add_coaction(&mut out, key, &map_element(target, images, e), &Scalar::one());
    }
    out
}

/// Inverts an algebra map on generators, slice by slice in the window.
fn invert_on_generators(source: &Cdga, target: &Cdga, f: &[Element], coh_max: i64, w_max: i64) -> Result<Vec<Element>> {
    for r in 1..=w_max {
        for n in 0..=coh_max {
            let src = source.basis_slice(n, r);
            let tgt = target.basis_slice(n, r);
            if src.len() != tgt.len() {
                return Err(Error::unsupported("base change needs a structure map that is invertible in the window"));
            }
        }
    }
    (0..target.num_generators())
        .map(|g| {
            let b = target.generator_bidegree(g);
            let src = source.basis_slice(b.coh, b.adams);
            let tgt = target.basis_slice(b.coh, b.adams);
            let index: BTreeMap<Monomial, usize> = tgt.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
            let cols = src
                .iter()
                .map(|m| Cdga::coordinates(&map_element(target, f, &Element::monomial(m.clone(), Scalar::one())), &index))
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| Error::input("structure map leaves its slice"))?;
            let mat = SparseMatrix::from_columns(tgt.len(), cols)?;
            if mat.rank() != tgt.len() {
                return Err(Error::unsupported("base change needs a structure map that is invertible in the window"));
            }
            let x = linalg::solve(&mat, &Cdga::coordinates(&Element::generator(g), &index).expect("generator in its slice"))?
                .expect("full rank");
            Ok(Cdga::element_from_coordinates(&x, &src))
        })
        .collect()
}

/// Replaces the base by its computed minimal model and recomputes the kernel
/// data and both co-actions.
pub fn base_change(x: &AugmentedOverN, w_max: usize) -> Result<BaseChange> {
    let base = x.base();
    let nb = x.base_len();
    let mm = minimal_model(base, 2, w_max)?;
    let model = mm.model.clone();
    let f = mm.structure_map.clone();
    let g = invert_on_generators(&model, base, &f, 3, w_max as i64)?;
    let nm = model.num_generators();
    let mut specs = model.generators().to_vec();
    specs.extend(x.own().map(|h| x.total().generators()[h].clone()));
    let mut total = Cdga::free(format!("{}'", x.total().name()), specs)?;
    for h in 0..nm {
        total.set_differential(h, model.differential_of(h).clone());
    }
    for h in x.own() {
        let mut d = Element::zero();
        for (m, c) in x.total().differential_of(h).terms() {
            let (low, high) = m.split_at(nb);
            let pulled = map_element(&model, &g, &Element::monomial(low, Scalar::one()));
            let lifted = total.multiply(&pulled, &Element::monomial(high.shifted(nm), c.clone()));
            d.add_scaled(&lifted, &Scalar::one());
        }
        total.set_differential(h - nb + nm, d);
    }
    let changed = AugmentedOverN::new(&model, &total, &BTreeMap::new())?;
    let before = semidirect(x, w_max)?;
    let after = semidirect(&changed, w_max)?;
    let coaction_before = coaction_check(x, w_max)?;
    let coaction_after = coaction_check(&changed, w_max)?;
    let mut witnesses = Vec::new();
    if (&before.base_dims, &before.kernel_dims, &before.total_dims) != (&after.base_dims, &after.kernel_dims, &after.total_dims) {
        witnesses.push(Witness::new("base change", "kernel, base or total dimensions changed"));
    }
    if map_coaction(base, &f, &coaction_after.split) != coaction_before.split
        || map_coaction(base, &f, &coaction_after.conn) != coaction_before.conn
    {
        witnesses.push(Witness::new("base change", "co-action matrices changed under the base change"));
    }
    Ok(BaseChange { changed, structure_map: f, before, after, coaction_before, coaction_after, witnesses })
}

/// `(1/w) Σ_{d | w} μ(d) q^{w/d}`: dimension of weight `w` of the free Lie
/// algebra on `q` generators of weight one.
pub fn necklace_count(q: u64, w: u32) -> u64 {
    fn mobius(mut n: u32) -> i128 {
        let mut result = 1;
        let mut p = 2;
        while p * p <= n {
            if n.is_multiple_of(p) {
                n /= p;
                if n.is_multiple_of(p) {
                    return 0;
                }
                result = -result;
            }
            p += 1;
        }
        if n > 1 {
            result = -result;
        }
        result
    }
    if w == 0 {
        return 0;
    }
    let total: i128 = (1..=w).filter(|d| w.is_multiple_of(*d)).map(|d| mobius(d) * (q as i128).pow(w / d)).sum();
    (total / w as i128) as u64
}

pub const MOCK_BASE_NOTE: &str = "formal model over the mock trivial-coefficient base: \
generators stand in for the punctures, products and differential vanish; this is not the motivic cycle algebra";

/// Bar data of the formal model of the projective line minus `k` points.
#[derive(Clone, Debug)]
pub struct Pi1Demo {
    pub punctures: usize,
    pub algebra: Cdga,
    pub hopf_dims: Vec<usize>,
    pub gamma_dims: Vec<usize>,
    pub lyndon_dims: Vec<usize>,
    pub witnesses: Vec<Witness>,
    pub note: &'static str,
}

impl Pi1Demo {
    pub fn passed(&self) -> bool {
        self.witnesses.is_empty() && self.gamma_dims == self.lyndon_dims
    }
}

/// The table algebra with `k − 1` generators of bidegree `(1, 1)`, zero
/// products and zero differential.
pub fn punctured_line(k: usize) -> Result<Cdga> {
    if k < 2 {
        return Err(Error::input("at least two punctures are needed"));
    }
    let gens = (0..k - 1).map(|i| GeneratorSpec::new(format!("x{i}"), 1, 1)).collect();
    Cdga::new(format!("P1-minus-{k}"), Kind::Table, gens)
}

pub fn pi1_demo(k: usize, w_max: usize) -> Result<Pi1Demo> {
    let a = punctured_line(k)?;
    let hp = bar::h0_hopf(&a, w_max)?;
    let g = bar::gamma_from_hopf(&a, &hp);
    let mut witnesses = hp.all_witnesses();
    witnesses.extend(g.colie.all_witnesses());
    let lyndon_dims = (0..=w_max).map(|w| necklace_count(k as u64 - 1, w as u32) as usize).collect();
    Ok(Pi1Demo { punctures: k, hopf_dims: hp.dims(), gamma_dims: g.colie.dims.clone(), lyndon_dims, algebra: a, witnesses, note: MOCK_BASE_NOTE })
}
