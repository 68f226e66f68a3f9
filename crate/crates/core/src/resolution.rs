//! Finite-dimensional dg modules given by matrices, and cell resolutions of them.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::One;

use crate::cdga::{BiDegree, Cdga, Element, Monomial, Witness};
use crate::cell::{Cell, CellModule, Column, ModElement};
use crate::error::{Error, Result};
use crate::linalg::{self, Scalar, SparseMatrix, SparseVector};

/// A dg module with a finite basis: a differential and one action matrix per generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DgModule {
    pub name: String,
    algebra: Cdga,
    pub basis: Vec<Cell>,
    pub d: SparseMatrix,
    pub actions: Vec<SparseMatrix>,
}

impl DgModule {
    pub fn new(name: impl Into<String>, algebra: &Cdga, basis: Vec<Cell>, d: SparseMatrix, actions: Vec<SparseMatrix>) -> Result<Self> {
        let n = basis.len();
        if d.rows() != n || d.cols() != n || actions.len() != algebra.num_generators() {
            return Err(Error::input("matrix shapes do not match the basis and generators"));
        }
        if actions.iter().any(|m| m.rows() != n || m.cols() != n) {
            return Err(Error::input("action matrix shape does not match the basis"));
        }
        let m = DgModule { name: name.into(), algebra: algebra.clone(), basis, d, actions };
        if let Some(w) = m.witnesses().first() {
            return Err(Error::input(format!("{}: {}", w.check, w.detail)));
        }
        Ok(m)
    }

    /// `A_{≥lo} / A_{>hi}` as a module over `A`.
    pub fn algebra_window(a: &Cdga, lo: i64, hi: i64) -> Result<Self> {
        let mut monos = Vec::new();
        for w in lo.max(0)..=hi {
            monos.extend(a.monomials_of_weight(w));
        }
        let cells = monos.iter().map(|m| (a.fmt_monomial(m), a.monomial_bidegree(m))).collect();
        let index: BTreeMap<Monomial, usize> = monos.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let n = monos.len();
        let coords = |e: &Element| -> SparseVector {
            e.terms().iter().filter_map(|(m, c)| index.get(m).map(|&i| (i, c.clone()))).collect()
        };
        let d = SparseMatrix::from_columns(n, monos.iter().map(|m| coords(&a.apply_d(&Element::monomial(m.clone(), Scalar::one())))).collect())?;
        let actions = (0..a.num_generators())
            .map(|g| {
                let cols = monos.iter().map(|m| coords(&a.multiply_monomials(&Monomial::generator(g), m))).collect();
                SparseMatrix::from_columns(n, cols)
            })
            .collect::<Result<_>>()?;
        DgModule::new(format!("{}[{lo},{hi}]", a.name()), a, cells, d, actions)
    }

    /// The quotient of a cell module by everything of weight above `w_max`.
    pub fn from_cell_module(m: &CellModule, w_max: i64) -> Result<Self> {
        let a = m.algebra();
        let mut basis_keys: Vec<(Monomial, usize)> = Vec::new();
        for (j, cell) in m.cells().iter().enumerate() {
            for w in 0..=(w_max - cell.1.adams) {
                for mono in a.monomials_of_weight(w) {
                    basis_keys.push((mono, j));
                }
            }
        }
        let index: BTreeMap<(Monomial, usize), usize> = basis_keys.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect();
        let n = basis_keys.len();
        let coords = |x: &ModElement| -> SparseVector {
            let mut v = SparseVector::new();
            for (&j, e) in x {
                for (mono, c) in e.terms() {
                    if let Some(&i) = index.get(&(mono.clone(), j)) {
                        linalg::add_entry(&mut v, i, c.clone());
                    }
                }
            }
            v
        };
        let cells = basis_keys
            .iter()
            .map(|(mono, j)| {
                let cell = &m.cells()[*j];
                let name = if mono.is_one() { cell.0.clone() } else { format!("{}*{}", a.fmt_monomial(mono), cell.0) };
                (name, a.monomial_bidegree(mono) + cell.1)
            })
            .collect();
        let elem = |mono: &Monomial, j: usize| ModElement::from([(j, Element::monomial(mono.clone(), Scalar::one()))]);
        let d = SparseMatrix::from_columns(n, basis_keys.iter().map(|(mono, j)| coords(&m.apply_d(&elem(mono, *j)))).collect())?;
        let actions = (0..a.num_generators())
            .map(|g| {
                let cols = basis_keys
                    .iter()
                    .map(|(mono, j)| coords(&ModElement::from([(*j, a.multiply_monomials(&Monomial::generator(g), mono))])))
                    .collect();
                SparseMatrix::from_columns(n, cols)
            })
            .collect::<Result<_>>()?;
        DgModule::new(format!("{}<={w_max}", m.name), a, cells, d, actions)
    }

    pub fn algebra(&self) -> &Cdga {
        &self.algebra
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    /// `μ · v` with `μ = g₁ g₂ ⋯` acting as `g₁(g₂(⋯ v))`.
    pub fn act_monomial(&self, mono: &Monomial, v: &SparseVector) -> SparseVector {
        let mut out = v.clone();
        for &g in mono.expand().iter().rev() {
            out = self.actions[g].mul_vec(&out);
        }
        out
    }

    pub fn act(&self, e: &Element, v: &SparseVector) -> SparseVector {
        let mut out = SparseVector::new();
        for (mono, c) in e.terms() {
            linalg::axpy(&mut out, c, &self.act_monomial(mono, v));
        }
        out
    }

    /// Failures of bidegrees, `d² = 0`, the algebra relations and the Leibniz rule.
    pub fn witnesses(&self) -> Vec<Witness> {
        let a = &self.algebra;
        let mut out = Vec::new();
        let n = self.len();
        for j in 0..n {
            let bj = self.basis[j].1;
            for &i in self.d.column(j).keys() {
                if self.basis[i].1 != bj + BiDegree::new(1, 0) {
                    out.push(Witness::new("module bidegree", format!("d{} hits {}", self.basis[j].0, self.basis[i].0)));
                }
            }
            for (g, act) in self.actions.iter().enumerate() {
                for &i in act.column(j).keys() {
                    if self.basis[i].1 != bj + a.generator_bidegree(g) {
                        out.push(Witness::new("module bidegree", format!("{} * {} hits {}", a.generators()[g].name, self.basis[j].0, self.basis[i].0)));
                    }
                }
            }
        }
        if !out.is_empty() {
            return out;
        }
        for j in 0..n {
            let e = linalg::unit_vector(j);
            let de = self.d.mul_vec(&e);
            if !self.d.mul_vec(&de).is_empty() {
                out.push(Witness::new("d squared", format!("d(d{}) != 0", self.basis[j].0)));
            }
            for g in 0..a.num_generators() {
                let sign = if a.generator_bidegree(g).coh.rem_euclid(2) == 1 { -Scalar::one() } else { Scalar::one() };
                let mut lhs = self.d.mul_vec(&self.actions[g].mul_vec(&e));
                linalg::axpy(&mut lhs, &-sign, &self.actions[g].mul_vec(&de));
                let rhs = self.act(&a.apply_d(&Element::generator(g)), &e);
                if lhs != rhs {
                    out.push(Witness::new("leibniz", format!("d({} * {}) is wrong", a.generators()[g].name, self.basis[j].0)));
                }
                for h in 0..a.num_generators() {
                    let gh = self.actions[g].mul_vec(&self.actions[h].mul_vec(&e));
                    let want = self.act(&a.multiply(&Element::generator(g), &Element::generator(h)), &e);
                    if gh != want {
                        out.push(Witness::new(
                            "relation",
                            format!("{} * {} acts wrongly on {}", a.generators()[g].name, a.generators()[h].name, self.basis[j].0),
                        ));
                    }
                }
            }
        }
        out
    }

    fn indices(&self, deg: BiDegree) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.basis[i].1 == deg).collect()
    }

    pub fn weights(&self) -> BTreeSet<i64> {
        self.basis.iter().map(|c| c.1.adams).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResolutionCertificate {
    pub w_max: i64,
    /// Nonzero cohomology of the cone of the resolution map, by bidegree.
    pub cone_cohomology: BTreeMap<BiDegree, usize>,
    pub chain_map_failures: Vec<Witness>,
    /// False when the target has weights beyond `w_max`.
    pub complete: bool,
}

impl ResolutionCertificate {
    pub fn passed(&self) -> bool {
        self.cone_cohomology.is_empty() && self.chain_map_failures.is_empty()
    }
}

#[derive(Clone, Debug)]
pub struct Resolution {
    pub module: CellModule,
    /// `φ(b_j)` as a vector in the target.
    pub map: Vec<SparseVector>,
    pub certificate: ResolutionCertificate,
}

impl Resolution {
    pub fn apply(&self, target: &DgModule, x: &ModElement) -> SparseVector {
        apply_map(target, &self.map, x)
    }
}

/// `φ(Σ e_j b_j) = Σ e_j φ(b_j)`.
fn apply_map(target: &DgModule, map: &[SparseVector], x: &ModElement) -> SparseVector {
    let mut out = SparseVector::new();
    for (&j, e) in x {
        linalg::axpy(&mut out, &Scalar::one(), &target.act(e, &map[j]));
    }
    out
}

struct Cone {
    /// Target indices in cone degree `k` (bidegree `(k, r)`).
    target: Vec<usize>,
    /// Source slice basis in degree `k + 1`.
    source: Vec<(Monomial, usize)>,
}

fn cone_basis(d: &DgModule, p: &CellModule, k: i64, r: i64) -> Cone {
    Cone { target: d.indices(BiDegree::new(k, r)), source: p.slice_basis(k + 1, r) }
}

fn cone_matrix(d: &DgModule, p: &CellModule, map: &[SparseVector], k: i64, r: i64) -> SparseMatrix {
    let src = cone_basis(d, p, k, r);
    let tgt = cone_basis(d, p, k + 1, r);
    let t_off = tgt.target.len();
    let t_index: BTreeMap<usize, usize> = tgt.target.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let s_index: BTreeMap<&(Monomial, usize), usize> = tgt.source.iter().enumerate().map(|(i, x)| (x, t_off + i)).collect();
    let mut m = SparseMatrix::zeros(t_off + tgt.source.len(), src.target.len() + src.source.len());
    for (col, &j) in src.target.iter().enumerate() {
        for (i, c) in d.d.mul_vec(&linalg::unit_vector(j)) {
            m.set(t_index[&i], col, c);
        }
    }
    let off = src.target.len();
    for (col, (mono, j)) in src.source.iter().enumerate() {
        for (i, c) in d.act_monomial(mono, &map[*j]) {
            m.set(t_index[&i], off + col, c);
        }
        let x = ModElement::from([(*j, Element::monomial(mono.clone(), Scalar::one()))]);
        for (i, e) in p.apply_d(&x) {
            for (mm, c) in e.terms() {
                m.set(s_index[&(mm.clone(), i)], off + col, -c);
            }
        }
    }
    m
}

fn cone_degrees(d: &DgModule, p: &CellModule, r: i64) -> BTreeSet<i64> {
    let mut degs: BTreeSet<i64> = d.basis.iter().filter(|c| c.1.adams == r).map(|c| c.1.coh).collect();
    let a = p.algebra();
    for cell in p.cells() {
        for mono in a.monomials_of_weight(r - cell.1.adams) {
            degs.insert(cell.1.coh + a.monomial_bidegree(&mono).coh - 1);
        }
    }
    degs
}

fn cone_cohomology(d: &DgModule, p: &CellModule, map: &[SparseVector], r: i64) -> Vec<(i64, Cone, Vec<SparseVector>)> {
    let mut out = Vec::new();
    for k in cone_degrees(d, p, r) {
        let basis = cone_basis(d, p, k, r);
        let dim = basis.target.len() + basis.source.len();
        let reps = linalg::cohomology_reps(&cone_matrix(d, p, map, k - 1, r), &cone_matrix(d, p, map, k, r), dim);
        if !reps.is_empty() {
            out.push((k, basis, reps));
        }
    }
    out
}

/// Builds a cell module `P` and an `A`-linear quasi-isomorphism `P → D` in
/// weights up to `w_max`, one weight at a time.
pub fn cell_resolution(d: &DgModule, w_max: i64) -> Result<Resolution> {
    let a = d.algebra();
    let mut cells: Vec<Cell> = Vec::new();
    let mut columns: Vec<Column> = Vec::new();
    let mut map: Vec<SparseVector> = Vec::new();
    let weights = d.weights();
    let lo = weights.iter().next().copied().unwrap_or(0);
    let mut p = CellModule::zero(a);
    for r in lo..=w_max {
        for (k, basis, reps) in cone_cohomology(d, &p, &map, r) {
            let off = basis.target.len();
            for (n, rep) in reps.iter().enumerate() {
                let mut alpha = SparseVector::new();
                let mut col = Column::new();
                for (&i, c) in rep {
                    if i < off {
                        alpha.insert(basis.target[i], c.clone());
                    } else {
                        let (mono, j) = &basis.source[i - off];
                        col.entry(*j).or_default().add_term(mono.clone(), -c);
                    }
                }
                col.retain(|_, e| !e.is_zero());
                cells.push((format!("p{k}_{r}_{n}"), BiDegree::new(k, r)));
                columns.push(col);
                map.push(alpha);
            }
        }
        p = CellModule::new(format!("P({})", d.name), a, cells.clone(), columns.clone())?;
    }
    let certificate = certify(d, &p, &map, lo, w_max);
    Ok(Resolution { module: p, map, certificate })
}

fn certify(d: &DgModule, p: &CellModule, map: &[SparseVector], lo: i64, w_max: i64) -> ResolutionCertificate {
    let mut cone = BTreeMap::new();
    for r in lo..=w_max {
        for (k, _, reps) in cone_cohomology(d, p, map, r) {
            cone.insert(BiDegree::new(k, r), reps.len());
        }
    }
    let mut failures = Vec::new();
    for (j, cell) in p.cells().iter().enumerate() {
        if map[j].keys().any(|&i| d.basis[i].1 != cell.1) {
            failures.push(Witness::new("map bidegree", format!("image of {} has the wrong bidegree", cell.0)));
        }
        let lhs = d.d.mul_vec(&map[j]);
        let rhs = apply_map(d, map, &p.columns()[j]);
        if lhs != rhs {
            failures.push(Witness::new("chain map", format!("d φ({0}) != φ(d {0})", cell.0)));
        }
    }
    let complete = d.weights().iter().all(|&w| w <= w_max);
    ResolutionCertificate { w_max, cone_cohomology: cone, chain_map_failures: failures, complete }
}
