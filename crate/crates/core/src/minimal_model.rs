//! Absolute and relative n-minimal models, the co-Lie coalgebra `QA`, and
//! the comparison `QA ≅ γ_A`.
//!
//! Models are built stage by stage: Adams weight outermost, cohomological
//! degree inside. At stage `(m, k)` the mapping cone of the structure map
//! `f: M → A` has `R^k = A^k(m) ⊕ M^{k+1}(m)` and `d(α, μ) = (dα + fμ, -dμ)`;
//! every class `(α, μ)` of `H^k(R)(m)` is killed by a new generator `v` of
//! bidegree `(k, m)` with `f(v) = α` and `dv = -μ`.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};

use crate::bar::{self, BarChain, BasisRef, CoLiePresentation, PairTensor};
use crate::cdga::{map_element, BiDegree, Cdga, Element, GeneratorSpec, Kind, Monomial, TruncationWindow, Witness};
use crate::error::{Error, Result};
use crate::linalg::{self, Echelon, Scalar, SparseMatrix, SparseVector};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StageLog {
    pub weight: i64,
    pub degree: i64,
    /// Rounds of adjunction until the cone cohomology of the stage vanished.
    pub iterations: usize,
    pub adjoined: Vec<String>,
    pub classes_killed: usize,
}

/// Comparison of `H^i(M)(r)` and `H^i(A)(r)` under the structure map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SliceCertificate {
    pub degree: i64,
    pub weight: i64,
    pub model_dim: usize,
    pub target_dim: usize,
    pub induced_rank: usize,
    /// `iso` for degrees up to n, `injective` for degree n + 1.
    pub requirement: &'static str,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub window: TruncationWindow,
    pub slices: Vec<SliceCertificate>,
    pub chain_map_failures: Vec<Witness>,
}

impl Certificate {
    pub fn passed(&self) -> bool {
        self.chain_map_failures.is_empty() && self.slices.iter().all(|s| s.ok)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NilpotenceVerdict {
    pub nilpotent: bool,
    /// Layers of own generators; each layer's differentials only involve
    /// earlier layers and base generators.
    pub filtration: Vec<Vec<usize>>,
    /// A dependency cycle when the check fails.
    pub cycle: Vec<usize>,
    pub reason: Option<String>,
}

#[derive(Clone, Debug)]
pub struct MinimalModelResult {
    pub model: Cdga,
    /// Generators `0..base_len` of the model are the base generators.
    pub base_len: usize,
    /// Image in the target of every model generator.
    pub structure_map: Vec<Element>,
    pub stages: Vec<StageLog>,
    pub n: usize,
    pub w_max: usize,
    pub filtration: NilpotenceVerdict,
    pub certificate: Certificate,
}

impl MinimalModelResult {
    pub fn own_generators(&self) -> std::ops::Range<usize> {
        self.base_len..self.model.num_generators()
    }

    /// Number of own generators of each bidegree.
    pub fn generator_counts(&self) -> BTreeMap<BiDegree, usize> {
        let mut out = BTreeMap::new();
        for g in self.own_generators() {
            *out.entry(self.model.generator_bidegree(g)).or_insert(0) += 1;
        }
        out
    }
}

/// Layering of the generators `own_start..` by the dependency graph of the
/// differential; a cycle refutes generalized nilpotence.
pub fn generalized_nilpotent_check(a: &Cdga, own_start: usize) -> NilpotenceVerdict {
    if a.kind() != Kind::Free {
        return NilpotenceVerdict {
            nilpotent: false,
            filtration: Vec::new(),
            cycle: Vec::new(),
            reason: Some("algebra is not free over the base".into()),
        };
    }
    let n = a.num_generators();
    let deps: Vec<BTreeSet<usize>> = (0..n)
        .map(|g| {
            if g < own_start {
                return BTreeSet::new();
            }
            a.differential_of(g)
                .terms()
                .keys()
                .flat_map(|m| m.generators().collect::<Vec<_>>())
                .filter(|&h| h >= own_start)
                .collect()
        })
        .collect();
    let mut placed = vec![false; n];
    let mut filtration = Vec::new();
    loop {
        let layer: Vec<usize> = (own_start..n)
            .filter(|&g| !placed[g] && deps[g].iter().all(|&h| placed[h]))
            .collect();
        if layer.is_empty() {
            break;
        }
        for &g in &layer {
            placed[g] = true;
        }
        filtration.push(layer);
    }
    let rest: Vec<usize> = (own_start..n).filter(|&g| !placed[g]).collect();
    if rest.is_empty() {
        return NilpotenceVerdict { nilpotent: true, filtration, cycle: Vec::new(), reason: None };
    }
    // walk unplaced dependencies until a generator repeats
    let mut path = vec![rest[0]];
    loop {
        let cur = *path.last().expect("nonempty path");
        let next = *deps[cur].iter().find(|&&h| !placed[h]).expect("unplaced generator has an unplaced dependency");
        if let Some(pos) = path.iter().position(|&g| g == next) {
            let cycle = path[pos..].to_vec();
            let names: Vec<&str> = cycle.iter().map(|&g| a.generators()[g].name.as_str()).collect();
            return NilpotenceVerdict {
                nilpotent: false,
                filtration,
                reason: Some(format!("dependency cycle {}", names.join(" -> "))),
                cycle,
            };
        }
        path.push(next);
    }
}

fn slice_index(basis: &[Monomial]) -> BTreeMap<Monomial, usize> {
    basis.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect()
}

/// Matrix of the algebra map `M^k(r) → A^k(r)`.
fn map_matrix(model: &Cdga, target: &Cdga, images: &[Element], k: i64, r: i64) -> SparseMatrix {
    let src = model.basis_slice(k, r);
    let tgt = target.basis_slice(k, r);
    let index = slice_index(&tgt);
    let mut m = SparseMatrix::zeros(tgt.len(), src.len());
    for (j, mono) in src.iter().enumerate() {
        let img = map_element(target, images, &Element::monomial(mono.clone(), Scalar::one()));
        for (i, c) in Cdga::coordinates(&img, &index).expect("structure map preserves bidegree") {
            m.set(i, j, c);
        }
    }
    m
}

/// Cone differential `R^k(r) → R^{k+1}(r)` in the block layout `(A^k, M^{k+1})`.
fn cone_matrix(model: &Cdga, target: &Cdga, images: &[Element], k: i64, r: i64) -> SparseMatrix {
    let (ak, ak1) = (target.basis_slice(k, r).len(), target.basis_slice(k + 1, r).len());
    let (mk1, mk2) = (model.basis_slice(k + 1, r).len(), model.basis_slice(k + 2, r).len());
    let da = target.d_matrix(k, r);
    let dm = model.d_matrix(k + 1, r);
    let f = map_matrix(model, target, images, k + 1, r);
    let mut out = SparseMatrix::zeros(ak1 + mk2, ak + mk1);
    for j in 0..ak {
        for (&i, c) in da.column(j) {
            out.set(i, j, c.clone());
        }
    }
    for j in 0..mk1 {
        for (&i, c) in f.column(j) {
            out.set(i, ak + j, c.clone());
        }
        for (&i, c) in dm.column(j) {
            out.set(ak1 + i, ak + j, -c.clone());
        }
    }
    out
}

fn cone_cohomology(model: &Cdga, target: &Cdga, images: &[Element], k: i64, r: i64) -> Vec<SparseVector> {
    let dim = target.basis_slice(k, r).len() + model.basis_slice(k + 1, r).len();
    linalg::cohomology_reps(
        &cone_matrix(model, target, images, k - 1, r),
        &cone_matrix(model, target, images, k, r),
        dim,
    )
}

fn fresh_name(taken: &BTreeSet<String>, target: &Cdga, alpha: &Element, k: i64, m: i64, counter: &mut usize) -> String {
    if alpha.len() == 1 {
        let (mono, c) = alpha.terms().iter().next().expect("one term");
        if (c.is_one() || (-c.clone()).is_one()) && mono.factors().len() == 1 && mono.factors()[0].1 == 1 {
            let name = &target.generators()[mono.factors()[0].0].name;
            if !taken.contains(name) {
                return name.clone();
            }
        }
    }
    loop {
        let name = format!("e{k}_{m}_{counter}");
        *counter += 1;
        if !taken.contains(&name) && target.find(&name).is_none() {
            return name;
        }
    }
}

/// The n-minimal model of `target` relative to `base`, where `base_map[g]`
/// is the image in `target` of base generator `g`.
pub fn relative_minimal_model(
    base: &Cdga,
    target: &Cdga,
    base_map: &[Element],
    n: usize,
    w_max: usize,
) -> Result<MinimalModelResult> {
    if n == 0 {
        return Err(Error::input("model degree n must be at least 1"));
    }
    if base_map.len() != base.num_generators() {
        return Err(Error::input("base map needs one image per base generator"));
    }
    if base.kind() != Kind::Free {
        return Err(Error::unsupported(format!("base {} must be a free algebra", base.name())));
    }
    let window = TruncationWindow { coh_max: n as i64 + 1, adams_max: w_max as i64 };
    let verdict = base.is_coh_connected(window);
    if !verdict.connected {
        return Err(Error::unsupported(format!(
            "base {} is not cohomologically connected: {} {}",
            base.name(),
            verdict.witnesses[0].check,
            verdict.witnesses[0].detail
        )));
    }
    for (g, img) in base_map.iter().enumerate() {
        if !target.is_homogeneous(img, base.generator_bidegree(g)) {
            return Err(Error::input(format!("image of base generator {} has the wrong bidegree", base.generators()[g].name)));
        }
    }
    let mut model = base.clone();
    model.set_name(format!("{}{{{n}}}", target.name()));
    let mut images = base_map.to_vec();
    let mut stages = Vec::new();
    let mut counter = 0usize;
    for m in 1..=w_max as i64 {
        for k in 1..=n as i64 {
            let mut log = StageLog { weight: m, degree: k, iterations: 0, adjoined: Vec::new(), classes_killed: 0 };
            loop {
                let reps = cone_cohomology(&model, target, &images, k, m);
                if reps.is_empty() {
                    break;
                }
                log.iterations += 1;
                log.classes_killed += reps.len();
                let a_basis = target.basis_slice(k, m);
                let m_basis = model.basis_slice(k + 1, m);
                let mut new_gens = Vec::new();
                let mut new_d = Vec::new();
                let mut new_images = Vec::new();
                for v in &reps {
                    let mut alpha = Element::zero();
                    let mut mu = Element::zero();
                    for (&i, c) in v {
                        if i < a_basis.len() {
                            alpha.add_term(a_basis[i].clone(), c.clone());
                        } else {
                            mu.add_term(m_basis[i - a_basis.len()].clone(), c.clone());
                        }
                    }
                    let taken: BTreeSet<String> = model
                        .generators()
                        .iter()
                        .chain(new_gens.iter())
                        .map(|g| g.name.clone())
                        .collect();
                    let name = fresh_name(&taken, target, &alpha, k, m, &mut counter);
                    new_gens.push(GeneratorSpec::new(name.clone(), k, m));
                    new_d.push(-&mu);
                    new_images.push(alpha);
                    log.adjoined.push(name);
                }
                model.adjoin_free(new_gens, new_d)?;
                images.extend(new_images);
            }
            stages.push(log);
        }
    }
    let filtration = generalized_nilpotent_check(&model, base.num_generators());
    let certificate = certify(&model, target, &images, n, w_max);
    Ok(MinimalModelResult {
        model,
        base_len: base.num_generators(),
        structure_map: images,
        stages,
        n,
        w_max,
        filtration,
        certificate,
    })
}

/// Absolute n-minimal model (base = ground field).
pub fn minimal_model(a: &Cdga, n: usize, w_max: usize) -> Result<MinimalModelResult> {
    relative_minimal_model(&Cdga::trivial(), a, &[], n, w_max)
}

/// Compares cohomology of `model` and `target` under the algebra map.
pub fn certify(model: &Cdga, target: &Cdga, images: &[Element], n: usize, w_max: usize) -> Certificate {
    let mut chain_map_failures = Vec::new();
    for g in 0..model.num_generators() {
        let lhs = map_element(target, images, model.differential_of(g));
        let rhs = target.apply_d(&images[g]);
        if lhs != rhs {
            chain_map_failures.push(Witness::new(
                "chain map",
                format!("f(d{}) != d f({})", model.generators()[g].name, model.generators()[g].name),
            ));
        }
    }
    let mut slices = Vec::new();
    for r in 1..=w_max as i64 {
        for i in 1..=n as i64 + 1 {
            let hm = model.cohomology_slice(i, r);
            let ha = target.cohomology_slice(i, r);
            let index = slice_index(&target.basis_slice(i, r));
            let imgs: Vec<SparseVector> = hm
                .representatives
                .iter()
                .map(|z| Cdga::coordinates(&map_element(target, images, z), &index).expect("bidegree preserved"))
                .collect();
            let boundaries = target.d_matrix(i - 1, r).columns().to_vec();
            let rank = linalg::induced_rank(&imgs, &boundaries, index.len());
            let (requirement, ok) = if i <= n as i64 {
                ("iso", hm.dim == ha.dim && rank == ha.dim)
            } else {
                ("injective", rank == hm.dim)
            };
            slices.push(SliceCertificate {
                degree: i,
                weight: r,
                model_dim: hm.dim,
                target_dim: ha.dim,
                induced_rank: rank,
                requirement,
                ok,
            });
        }
    }
    Certificate {
        window: TruncationWindow { coh_max: n as i64 + 1, adams_max: w_max as i64 },
        slices,
        chain_map_failures,
    }
}

/// Runs the construction on a model's own output and compares presentations.
pub fn idempotence_witnesses(result: &MinimalModelResult, base: &Cdga) -> Result<Vec<Witness>> {
    let base_map: Vec<Element> = (0..result.base_len).map(Element::generator).collect();
    let again = relative_minimal_model(base, &result.model, &base_map, result.n, result.w_max)?;
    let mut out = Vec::new();
    if again.model.generators() != result.model.generators() {
        out.push(Witness::new("idempotence", "rerun produced a different generator list"));
        return Ok(out);
    }
    for g in 0..again.model.num_generators() {
        if again.model.differential_of(g) != result.model.differential_of(g) {
            out.push(Witness::new("idempotence", format!("differential of {} changed", result.model.generators()[g].name)));
        }
        if again.structure_map[g] != Element::generator(g) {
            out.push(Witness::new("idempotence", format!("structure map moved {}", result.model.generators()[g].name)));
        }
    }
    Ok(out)
}

/// `QA`: degree-one generators of the 1-minimal model, with `∂` read off
/// from their differentials.
#[derive(Clone, Debug)]
pub struct QaColie {
    pub result: MinimalModelResult,
    pub colie: CoLiePresentation,
    /// Per weight: model generator indices forming the basis of `QA(w)`.
    pub generators: Vec<Vec<usize>>,
}

pub fn qa_colie(a: &Cdga, w_max: usize) -> Result<QaColie> {
    let result = minimal_model(a, 1, w_max)?;
    qa_from_model(result)
}

fn qa_from_model(result: MinimalModelResult) -> Result<QaColie> {
    let model = &result.model;
    let mut generators = vec![Vec::new(); result.w_max + 1];
    let mut position = BTreeMap::new();
    for g in result.own_generators() {
        let b = model.generator_bidegree(g);
        if b.coh == 1 {
            let w = b.adams as usize;
            position.insert(g, (w, generators[w].len()));
            generators[w].push(g);
        }
    }
    let mut cobracket = BTreeMap::new();
    for (&g, &basis) in &position {
        let mut t = PairTensor::new();
        for (mono, c) in model.differential_of(g).terms() {
            let f = mono.factors();
            if f.len() != 2 || f[0].1 != 1 || f[1].1 != 1 {
                return Err(Error::input(format!(
                    "d{} is not quadratic in degree-one generators",
                    model.generators()[g].name
                )));
            }
            let (Some(&p), Some(&q)) = (position.get(&f[0].0), position.get(&f[1].0)) else {
                return Err(Error::input("cobracket leaves degree-one generators"));
            };
            t.insert((p, q), c.clone());
            t.insert((q, p), -c.clone());
        }
        cobracket.insert(basis, t);
    }
    let colie = CoLiePresentation {
        name: format!("Q({})", model.name()),
        w_max: result.w_max,
        dims: generators.iter().map(|g| g.len()).collect(),
        labels: generators.iter().map(|gs| gs.iter().map(|&g| model.generators()[g].name.clone()).collect()).collect(),
        cobracket,
    };
    Ok(QaColie { result, colie, generators })
}

/// Letterwise image of a bar chain under an algebra map.
pub fn map_chain(target: &Cdga, images: &[Element], x: &BarChain) -> BarChain {
    let mut out = BarChain::new();
    for (word, c) in x {
        let mut partial: Vec<(Vec<Monomial>, Scalar)> = vec![(Vec::new(), c.clone())];
        for letter in word {
            let img = map_element(target, images, &Element::monomial(letter.clone(), Scalar::one()));
            let mut next = Vec::new();
            for (prefix, pc) in &partial {
                for (m, mc) in img.terms() {
                    let mut w = prefix.clone();
                    w.push(m.clone());
                    next.push((w, pc * mc));
                }
            }
            partial = next;
        }
        for (w, v) in partial {
            bar::add_word(&mut out, w, v);
        }
    }
    out
}

#[derive(Clone, Debug)]
pub struct QuillenReport {
    pub w_max: usize,
    pub gamma_dims: Vec<usize>,
    pub qa_dims: Vec<usize>,
    pub h0_dims: Vec<usize>,
    /// Per weight: matrix of `ψ: γ_A(w) → QA(w)`, columns indexed by γ basis.
    pub psi: Vec<SparseMatrix>,
    pub witnesses: Vec<Witness>,
}

impl QuillenReport {
    pub fn passed(&self) -> bool {
        self.witnesses.is_empty()
    }
}

fn full_rank_square(m: &SparseMatrix) -> bool {
    m.rows() == m.cols() && m.rank() == m.rows()
}

/// Builds `ψ = (length-one part) ∘ f_*^{-1}: γ_A → QA`, where `f_*` is the
/// map on `H⁰B̄` induced by the 1-minimal model, and checks that it is a
/// weight-wise isomorphism intertwining the cobrackets.
pub fn quillen_compare(a: &Cdga, w_max: usize) -> Result<QuillenReport> {
    let qa = qa_colie(a, w_max)?;
    let model = &qa.result.model;
    let images = &qa.result.structure_map;
    let hp_a = bar::h0_hopf(a, w_max)?;
    let hp_m = bar::h0_hopf(model, w_max)?;
    let gamma = bar::gamma_from_hopf(a, &hp_a);
    let mut witnesses = Vec::new();
    if !qa.result.certificate.passed() {
        witnesses.push(Witness::new("minimal model", "1-minimal model failed its certificate"));
    }
    let mut psi = Vec::new();
    for w in 0..=w_max {
        let (hm, ha) = (&hp_m.weights[w], &hp_a.weights[w]);
        let mut cols = Vec::new();
        for i in 0..hm.dim() {
            let img = map_chain(a, images, &hm.representative(i));
            match ha.coordinates(&img) {
                Some(v) => cols.push(v),
                None => {
                    witnesses.push(Witness::new("f_*", format!("image of H0 class ({w},{i}) is not a cocycle")));
                    cols.push(SparseVector::new());
                }
            }
        }
        let f_star = SparseMatrix::from_columns(ha.dim(), cols)?;
        if !full_rank_square(&f_star) {
            witnesses.push(Witness::new(
                "f_*",
                format!("weight {w}: map H0B(A{{1}}) -> H0B(A) is {}x{} of rank {}", f_star.rows(), f_star.cols(), f_star.rank()),
            ));
            psi.push(SparseMatrix::zeros(qa.generators[w].len(), gamma.lifts[w].len()));
            continue;
        }
        let qpos: BTreeMap<Monomial, usize> =
            qa.generators[w].iter().enumerate().map(|(k, &g)| (Monomial::generator(g), k)).collect();
        let mut cols = Vec::new();
        for &lift in &gamma.lifts[w] {
            let pre = linalg::solve(&f_star, &linalg::unit_vector(lift))?.expect("invertible");
            let chain = hm.chain_of(&pre);
            let mut col = SparseVector::new();
            for (word, c) in &chain {
                if word.len() == 1 {
                    if let Some(&k) = qpos.get(&word[0]) {
                        linalg::add_entry(&mut col, k, c.clone());
                    }
                }
            }
            cols.push(col);
        }
        let m = SparseMatrix::from_columns(qa.generators[w].len(), cols)?;
        if w > 0 && !full_rank_square(&m) {
            witnesses.push(Witness::new(
                "psi",
                format!("weight {w}: gamma -> QA is {}x{} of rank {}", m.rows(), m.cols(), m.rank()),
            ));
        }
        psi.push(m);
    }
    if witnesses.is_empty() {
        for w in 1..=w_max {
            for k in 0..gamma.lifts[w].len() {
                let mut lhs = PairTensor::new();
                for (&((p, s), (q, t)), c) in &gamma.colie.cobracket[&(w, k)] {
                    for (&i, ci) in psi[p].column(s) {
                        for (&j, cj) in psi[q].column(t) {
                            add_tensor(&mut lhs, ((p, i), (q, j)), c * ci * cj);
                        }
                    }
                }
                let mut rhs = PairTensor::new();
                for (&i, ci) in psi[w].column(k) {
                    for (key, c) in &qa.colie.cobracket[&(w, i)] {
                        add_tensor(&mut rhs, *key, ci * c);
                    }
                }
                if lhs != rhs {
                    witnesses.push(Witness::new("cobracket", format!("ψ does not intertwine cobrackets on γ({w}) element {k}")));
                }
            }
        }
    }
    Ok(QuillenReport {
        w_max,
        gamma_dims: gamma.colie.dims.clone(),
        qa_dims: qa.colie.dims.clone(),
        h0_dims: hp_a.dims(),
        psi,
        witnesses,
    })
}

fn add_tensor(t: &mut PairTensor, key: (BasisRef, BasisRef), c: Scalar) {
    if c.is_zero() {
        return;
    }
    let e = t.entry(key).or_insert_with(Scalar::zero);
    *e += c;
    if e.is_zero() {
        t.remove(&key);
    }
}

/// Rank of the echelon span of `vectors`, used by callers comparing spaces.
pub fn span_rank(ambient: usize, vectors: &[SparseVector]) -> usize {
    Echelon::from_rows(ambient, vectors.to_vec()).rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cdga::fixtures::*;

    fn e4_pair() -> (Cdga, Cdga) {
        let base = Cdga::free("E1", vec![GeneratorSpec::new("t", 1, 1)]).unwrap();
        let mut total = Cdga::free(
            "E4",
            vec![GeneratorSpec::new("t", 1, 1), GeneratorSpec::new("u", 1, 1), GeneratorSpec::new("v", 1, 2)],
        )
        .unwrap();
        let tu = total.multiply(&total.gen("t"), &total.gen("u"));
        total.set_differential_by_name("v", tu).unwrap();
        (base, total)
    }

    #[test]
    fn e3_is_its_own_model() {
        let a = e3();
        let r = minimal_model(&a, 2, 3).unwrap();
        assert!(r.certificate.passed(), "{:?}", r.certificate);
        let names: Vec<&str> = r.model.generators().iter().map(|g| g.name.as_str()).collect();
        assert_eq!(&names[..3], &["x", "y", "z"]);
        assert_eq!(r.model.fmt_element(r.model.differential_of(2)), "x*y");
        let r1 = minimal_model(&a, 1, 2).unwrap();
        assert_eq!(r1.model.num_generators(), 3);
        assert!(idempotence_witnesses(&r1, &Cdga::trivial()).unwrap().is_empty());
        assert!(r.stages.iter().all(|s| s.iterations <= 1));
    }

    #[test]
    fn wedge_of_circles() {
        let r = minimal_model(&e2(), 1, 3).unwrap();
        assert!(r.certificate.passed());
        let counts: Vec<usize> =
            (1..=3).map(|w| r.generator_counts().get(&BiDegree::new(1, w)).copied().unwrap_or(0)).collect();
        assert_eq!(counts, vec![2, 1, 2]);
        assert!(r.filtration.nilpotent);
    }

    #[test]
    fn relative_e4() {
        let (base, total) = e4_pair();
        let r = relative_minimal_model(&base, &total, &[total.gen("t")], 2, 3).unwrap();
        assert!(r.certificate.passed());
        let own: Vec<&str> = r.own_generators().map(|g| r.model.generators()[g].name.as_str()).collect();
        assert_eq!(own, vec!["u", "v"]);
        assert_eq!(r.model.fmt_element(r.model.differential_of(2)), "t*u");
        assert_eq!(r.filtration.filtration, vec![vec![1], vec![2]]);
        assert!(idempotence_witnesses(&r, &base).unwrap().is_empty());
    }

    #[test]
    fn nilpotence_cycles() {
        let mut a = Cdga::free("C", vec![GeneratorSpec::new("g", 2, 1), GeneratorSpec::new("h", 3, 1)]).unwrap();
        a.set_differential_by_name("g", a.gen("h")).unwrap();
        let v = generalized_nilpotent_check(&a, 0);
        assert!(v.nilpotent);
        let mut b = Cdga::free("S", vec![GeneratorSpec::new("g", 2, 1), GeneratorSpec::new("k", 1, 1)]).unwrap();
        let gk = b.multiply(&b.gen("g"), &b.gen("k"));
        b.set_differential_by_name("g", gk).unwrap();
        let v = generalized_nilpotent_check(&b, 0);
        assert!(!v.nilpotent);
        assert_eq!(v.cycle, vec![0]);
        let e = generalized_nilpotent_check(&e3(), 0);
        assert_eq!(e.filtration, vec![vec![0, 1], vec![2]]);
    }

    #[test]
    fn qa_examples() {
        let q3 = qa_colie(&e3(), 2).unwrap();
        assert_eq!(q3.colie.dims, vec![0, 2, 1]);
        assert_eq!(q3.colie.cobracket[&(2, 0)].get(&((1, 0), (1, 1))), Some(&Scalar::one()));
        let q1 = qa_colie(&e1(), 3).unwrap();
        assert_eq!(q1.colie.dims, vec![0, 1, 0, 0]);
        let q2 = qa_colie(&e2(), 3).unwrap();
        assert_eq!(q2.colie.dims, vec![0, 2, 1, 2]);
        assert!(q2.colie.all_witnesses().is_empty());
    }

    #[test]
    fn quillen_examples() {
        for (a, w) in [(e1(), 3), (e2(), 3), (e3(), 3)] {
            let r = quillen_compare(&a, w).unwrap();
            assert!(r.passed(), "{}: {:?}", a.name(), r.witnesses);
            assert_eq!(r.gamma_dims, r.qa_dims);
        }
    }
}
