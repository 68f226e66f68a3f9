//! Finite cell modules over a cdga and their triangulated-category operations.
//!
//! A cell module is free on a finite basis `b_j` with `d(b_j) = Σ a_ij b_i`.
//! Modules are left modules: `d(μ b) = dμ·b + (-1)^{deg μ} μ·db`.
//! Adams degrees of basis elements may be negative, so Tate twists are stored
//! as ordinary bidegrees.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::cdga::{BiDegree, Cdga, Element, Monomial, Witness};
use crate::error::{Error, Result};
use crate::linalg::{self, Scalar, SparseMatrix, SparseVector};
use crate::parse::ModuleFile;

pub type Cell = (String, BiDegree);
/// `d(b_j)` as a map from target cell index to coefficient.
pub type Column = BTreeMap<usize, Element>;
/// A module element: coefficient per cell.
pub type ModElement = BTreeMap<usize, Element>;
/// Matrix of a module map: `(i, j) -> f_ij` with `f(m_j) = Σ f_ij n_i`.
pub type ModMatrix = BTreeMap<(usize, usize), Element>;

fn parity(n: i64) -> bool {
    n.rem_euclid(2) == 1
}

fn signed(e: &Element, negate: bool) -> Element {
    if negate {
        -e
    } else {
        e.clone()
    }
}

pub(crate) fn add_to(m: &mut ModElement, cell: usize, e: &Element) {
    let entry = m.entry(cell).or_default();
    entry.add_scaled(e, &Scalar::one());
    if entry.is_zero() {
        m.remove(&cell);
    }
}

fn coefficient_deg(a: &Cdga, e: &Element) -> i64 {
    a.bidegree_of(e).map(|b| b.coh).unwrap_or(0)
}

/// Differential of `Σ coef_j b_j` in a module given by columns.
pub(crate) fn apply_columns(a: &Cdga, columns: &[Column], x: &ModElement) -> ModElement {
    let mut out = ModElement::new();
    for (&j, coef) in x {
        add_to(&mut out, j, &a.apply_d(coef));
        for (mono, c) in coef.terms() {
            let mu = Element::monomial(mono.clone(), c.clone());
            let negate = parity(a.monomial_bidegree(mono).coh);
            for (&i, aij) in &columns[j] {
                add_to(&mut out, i, &signed(&a.multiply(&mu, aij), negate));
            }
        }
    }
    out
}

/// Bidegree, triangularity and `d² = 0` checks shared by cell modules and connections.
pub(crate) fn structure_witnesses(a: &Cdga, cells: &[Cell], columns: &[Column]) -> Vec<Witness> {
    let mut out = Vec::new();
    for (j, col) in columns.iter().enumerate() {
        for (&i, aij) in col {
            let want = BiDegree::new(cells[j].1.coh - cells[i].1.coh + 1, cells[j].1.adams - cells[i].1.adams);
            if !a.is_homogeneous(aij, want) || aij.is_zero() {
                out.push(Witness::new(
                    "coefficient bidegree",
                    format!("coefficient of {} in d{} must be nonzero of bidegree {want}", cells[i].0, cells[j].0),
                ));
            }
        }
    }
    if !out.is_empty() {
        return out;
    }
    for (j, cell) in cells.iter().enumerate() {
        let dd = apply_columns(a, columns, &columns[j]);
        if let Some((i, c)) = dd.iter().next() {
            out.push(Witness::new(
                "d squared",
                format!("d(d{}) has coefficient {} on {}", cell.0, a.fmt_element(c), cells[*i].0),
            ));
        }
    }
    out
}

/// Longest-path stages of the dependency graph, or the index of a cell on a cycle.
fn derive_stages(columns: &[Column]) -> std::result::Result<Vec<usize>, usize> {
    let n = columns.len();
    let mut stage: Vec<Option<usize>> = vec![None; n];
    let mut on_stack = vec![false; n];
    fn visit(j: usize, columns: &[Column], stage: &mut Vec<Option<usize>>, on_stack: &mut Vec<bool>) -> std::result::Result<usize, usize> {
        if let Some(s) = stage[j] {
            return Ok(s);
        }
        if on_stack[j] {
            return Err(j);
        }
        on_stack[j] = true;
        let mut s = 0;
        for &i in columns[j].keys() {
            s = s.max(visit(i, columns, stage, on_stack)? + 1);
        }
        on_stack[j] = false;
        stage[j] = Some(s);
        Ok(s)
    }
    for j in 0..n {
        visit(j, columns, &mut stage, &mut on_stack)?;
    }
    Ok(stage.into_iter().map(|s| s.expect("visited")).collect())
}

/// Complex of rational spaces with a scalar differential, indexed by cells.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QComplex {
    pub cells: Vec<Cell>,
    /// `d0(b_j) = Σ d0[(i, j)] b_i`.
    pub d0: BTreeMap<(usize, usize), Scalar>,
}

impl QComplex {
    fn indices(&self, deg: BiDegree) -> Vec<usize> {
        (0..self.cells.len()).filter(|&i| self.cells[i].1 == deg).collect()
    }

    fn block(&self, src: &[usize], tgt: &[usize]) -> SparseMatrix {
        let mut m = SparseMatrix::zeros(tgt.len(), src.len());
        for (c, &j) in src.iter().enumerate() {
            for (r, &i) in tgt.iter().enumerate() {
                if let Some(v) = self.d0.get(&(i, j)) {
                    m.set(r, c, v.clone());
                }
            }
        }
        m
    }

    /// Cocycle representatives at `deg`, as vectors over the cells of that bidegree.
    pub fn cohomology_reps(&self, deg: BiDegree) -> (Vec<usize>, Vec<SparseVector>) {
        let here = self.indices(deg);
        let below = self.indices(BiDegree::new(deg.coh - 1, deg.adams));
        let above = self.indices(BiDegree::new(deg.coh + 1, deg.adams));
        let reps = linalg::cohomology_reps(&self.block(&below, &here), &self.block(&here, &above), here.len());
        (here, reps)
    }

    /// Nonzero cohomology dimensions keyed by `(coh, adams)`.
    pub fn cohomology(&self) -> BTreeMap<(i64, i64), usize> {
        let mut degs: Vec<BiDegree> = self.cells.iter().map(|c| c.1).collect();
        degs.sort();
        degs.dedup();
        let mut out = BTreeMap::new();
        for d in degs {
            let dim = self.cohomology_reps(d).1.len();
            if dim > 0 {
                out.insert((d.coh, d.adams), dim);
            }
        }
        out
    }

    pub fn is_acyclic(&self) -> bool {
        self.cohomology().is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellModule {
    pub name: String,
    algebra: Cdga,
    cells: Vec<Cell>,
    columns: Vec<Column>,
    stages: Vec<usize>,
}

/// `(W_n M, gr^W_n M, W^{>n} M)` with the index maps into `M`.
#[derive(Clone, Debug)]
pub struct WeightTruncation {
    pub lower: CellModule,
    pub graded: CellModule,
    pub upper: CellModule,
    /// Cell indices of `M` making up `W_n M` and `W^{>n} M`.
    pub lower_cells: Vec<usize>,
    pub upper_cells: Vec<usize>,
}

impl CellModule {
    pub fn new(name: impl Into<String>, algebra: &Cdga, cells: Vec<Cell>, columns: Vec<Column>) -> Result<Self> {
        let name = name.into();
        if columns.len() != cells.len() {
            return Err(Error::input("one differential column per cell is required"));
        }
        if columns.iter().flat_map(|c| c.keys()).any(|&i| i >= cells.len()) {
            return Err(Error::input("differential refers to a missing cell"));
        }
        let stages = derive_stages(&columns).map_err(|j| {
            Error::input(format!("differential of {} is not strictly triangular (dependency cycle)", cells[j].0))
        })?;
        if let Some(w) = structure_witnesses(algebra, &cells, &columns).first() {
            return Err(Error::input(format!("{name}: {}: {}", w.check, w.detail)));
        }
        Ok(CellModule { name, algebra: algebra.clone(), cells, columns, stages })
    }

    pub fn from_file(file: &ModuleFile, algebra: &Cdga) -> Result<Self> {
        let mut columns = vec![Column::new(); file.cells.len()];
        for (&j, entries) in &file.differential {
            for (i, e) in entries {
                columns[j].insert(*i, e.clone());
            }
        }
        CellModule::new(file.name.clone(), algebra, file.cells.clone(), columns)
    }

    /// The Tate object `A⟨n⟩`: one cell of bidegree `(0, -n)` with zero differential.
    pub fn tate(algebra: &Cdga, n: i64) -> Self {
        CellModule::new(format!("Q({n})"), algebra, vec![(format!("b{n}"), BiDegree::new(0, -n))], vec![Column::new()])
            .expect("Tate object is valid")
    }

    pub fn zero(algebra: &Cdga) -> Self {
        CellModule::new("0", algebra, Vec::new(), Vec::new()).expect("zero module")
    }

    pub fn algebra(&self) -> &Cdga {
        &self.algebra
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn columns(&self) -> &[Column] {
        &self.columns
    }

    pub fn stages(&self) -> &[usize] {
        &self.stages
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn witnesses(&self) -> Vec<Witness> {
        structure_witnesses(&self.algebra, &self.cells, &self.columns)
    }

    pub fn apply_d(&self, x: &ModElement) -> ModElement {
        apply_columns(&self.algebra, &self.columns, x)
    }

    pub fn direct_sum(&self, other: &CellModule) -> Result<CellModule> {
        same_algebra(self, other)?;
        let off = self.len();
        let mut cells = self.cells.clone();
        let mut columns = self.columns.clone();
        for (c, col) in other.cells.iter().zip(&other.columns) {
            let mut name = c.0.clone();
            while cells.iter().any(|x| x.0 == name) {
                name.push('\'');
            }
            cells.push((name, c.1));
            columns.push(col.iter().map(|(&i, e)| (i + off, e.clone())).collect());
        }
        CellModule::new(format!("{}+{}", self.name, other.name), &self.algebra, cells, columns)
    }

    /// `M[1]`: every cell moves down one degree and `d` changes sign.
    pub fn shift(&self) -> CellModule {
        let cells = self.cells.iter().map(|(n, d)| (format!("s{n}"), BiDegree::new(d.coh - 1, d.adams))).collect();
        let columns = self
            .columns
            .iter()
            .map(|col| {
                col.iter()
                    .map(|(&i, e)| (i, signed(e, !parity(coefficient_deg(&self.algebra, e)))))
                    .collect()
            })
            .collect();
        CellModule::new(format!("{}[1]", self.name), &self.algebra, cells, columns).expect("shift of a valid module")
    }

    /// `M[k]` for any integer `k`.
    pub fn shift_by(&self, k: i64) -> CellModule {
        let mut out = self.clone();
        if k >= 0 {
            for _ in 0..k {
                out = out.shift();
            }
        } else {
            for _ in 0..(-k) {
                let cells = out.cells.iter().map(|(n, d)| (format!("u{n}"), BiDegree::new(d.coh + 1, d.adams))).collect();
                let columns = out
                    .columns
                    .iter()
                    .map(|col| {
                        col.iter()
                            .map(|(&i, e)| (i, signed(e, !parity(coefficient_deg(&out.algebra, e)))))
                            .collect()
                    })
                    .collect();
                out = CellModule::new(format!("{}[-1]", out.name), &out.algebra, cells, columns).expect("unshift");
            }
        }
        out
    }

    /// Basis `(μ, j)` of the slice `M^n(r)`, sorted.
    pub fn slice_basis(&self, n: i64, r: i64) -> Vec<(Monomial, usize)> {
        let mut out = Vec::new();
        for (j, (_, d)) in self.cells.iter().enumerate() {
            for m in self.algebra.basis_slice(n - d.coh, r - d.adams) {
                out.push((m, j));
            }
        }
        out.sort();
        out
    }

    pub fn d_matrix(&self, n: i64, r: i64) -> SparseMatrix {
        let src = self.slice_basis(n, r);
        let tgt = self.slice_basis(n + 1, r);
        let index: BTreeMap<&(Monomial, usize), usize> = tgt.iter().enumerate().map(|(i, b)| (b, i)).collect();
        let mut m = SparseMatrix::zeros(tgt.len(), src.len());
        for (col, (mono, j)) in src.iter().enumerate() {
            let x = ModElement::from([(*j, Element::monomial(mono.clone(), Scalar::one()))]);
            for (i, e) in self.apply_d(&x) {
                for (mm, c) in e.terms() {
                    let row = index[&(mm.clone(), i)];
                    m.set(row, col, c.clone());
                }
            }
        }
        m
    }

    pub fn cohomology_dim(&self, n: i64, r: i64) -> usize {
        let dim = self.slice_basis(n, r).len();
        linalg::cohomology_reps(&self.d_matrix(n - 1, r), &self.d_matrix(n, r), dim).len()
    }

    /// The complex `qM = M ⊗_A ℚ`: constant parts of the differential.
    pub fn q_functor(&self) -> QComplex {
        let mut d0 = BTreeMap::new();
        for (j, col) in self.columns.iter().enumerate() {
            for (&i, e) in col {
                let c = e.constant();
                if !c.is_zero() {
                    d0.insert((i, j), c);
                }
            }
        }
        QComplex { cells: self.cells.clone(), d0 }
    }

    /// Restriction to the cells in `keep` (which must be closed under `d`
    /// for a submodule, or have every dropped target outside for a quotient).
    pub fn restrict(&self, name: impl Into<String>, keep: &[usize]) -> CellModule {
        let pos: BTreeMap<usize, usize> = keep.iter().enumerate().map(|(k, &j)| (j, k)).collect();
        let cells = keep.iter().map(|&j| self.cells[j].clone()).collect();
        let columns = keep
            .iter()
            .map(|&j| self.columns[j].iter().filter_map(|(i, e)| pos.get(i).map(|&k| (k, e.clone()))).collect())
            .collect();
        CellModule::new(name, &self.algebra, cells, columns).expect("restriction of a valid module along a weight split")
    }

    pub fn weight_truncate(&self, n: i64) -> WeightTruncation {
        let lower_cells: Vec<usize> = (0..self.len()).filter(|&j| self.cells[j].1.adams <= n).collect();
        let upper_cells: Vec<usize> = (0..self.len()).filter(|&j| self.cells[j].1.adams > n).collect();
        let graded_cells: Vec<usize> = (0..self.len()).filter(|&j| self.cells[j].1.adams == n).collect();
        WeightTruncation {
            lower: self.restrict(format!("W_{n}({})", self.name), &lower_cells),
            graded: self.restrict(format!("gr_{n}({})", self.name), &graded_cells),
            upper: self.restrict(format!("W>{n}({})", self.name), &upper_cells),
            lower_cells,
            upper_cells,
        }
    }

    pub fn weights(&self) -> Vec<i64> {
        let mut w: Vec<i64> = self.cells.iter().map(|c| c.1.adams).collect();
        w.sort();
        w.dedup();
        w
    }

    /// `M` lies in the heart when `H^n(qM) = 0` for all `n ≠ 0`.
    pub fn in_heart(&self) -> bool {
        self.q_functor().cohomology().keys().all(|&(n, _)| n == 0)
    }

    /// Finite modules always pass; the report lists `dim H^*(gr^W_n q M)` per weight.
    pub fn is_finite_tate(&self) -> (bool, BTreeMap<i64, usize>) {
        let mut dims = BTreeMap::new();
        for w in self.weights() {
            let g = self.weight_truncate(w).graded.q_functor().cohomology();
            dims.insert(w, g.values().sum());
        }
        (true, dims)
    }
}

fn same_algebra(m: &CellModule, n: &CellModule) -> Result<()> {
    if m.algebra != n.algebra {
        return Err(Error::input(format!("modules {} and {} live over different algebras", m.name, n.name)));
    }
    Ok(())
}

/// Identity matrix of a module.
pub fn identity(m: &CellModule) -> ModMatrix {
    (0..m.len()).map(|j| ((j, j), Element::one())).collect()
}

/// Checks that `f` has bidegree `(0, 0)` and commutes with the differentials.
pub fn chain_map_witnesses(source: &CellModule, target: &CellModule, f: &ModMatrix) -> Vec<Witness> {
    let a = &source.algebra;
    let mut out = Vec::new();
    for (&(i, j), e) in f {
        let want = source.cells[j].1 - target.cells[i].1;
        if !a.is_homogeneous(e, want) {
            out.push(Witness::new("map bidegree", format!("entry ({}, {}) must have bidegree {want}", target.cells[i].0, source.cells[j].0)));
        }
    }
    if !out.is_empty() {
        return out;
    }
    for j in 0..source.len() {
        let fj: ModElement = f.iter().filter(|((_, c), _)| *c == j).map(|(&(i, _), e)| (i, e.clone())).collect();
        let lhs = target.apply_d(&fj);
        let mut rhs = ModElement::new();
        for (&k, akj) in &source.columns[j] {
            for (&(i, c), fik) in f {
                if c == k {
                    add_to(&mut rhs, i, &a.multiply(akj, fik));
                }
            }
        }
        if lhs != rhs {
            out.push(Witness::new("chain map", format!("d f({0}) != f(d {0})", source.cells[j].0)));
        }
    }
    out
}

/// `Cone(f)` with basis `N ⊔ M[1]` and `d(n, m) = (dn + f(m), -dm)`.
pub fn cone(source: &CellModule, target: &CellModule, f: &ModMatrix) -> Result<CellModule> {
    same_algebra(source, target)?;
    if let Some(w) = chain_map_witnesses(source, target, f).first() {
        return Err(Error::input(format!("not a chain map: {}", w.detail)));
    }
    let shifted = source.shift();
    let off = target.len();
    let mut cells = target.cells.clone();
    let mut columns = target.columns.clone();
    for (j, (cell, col)) in shifted.cells.iter().zip(&shifted.columns).enumerate() {
        let mut name = cell.0.clone();
        while cells.iter().any(|x| x.0 == name) {
            name.push('\'');
        }
        cells.push((name, cell.1));
        let mut c: Column = col.iter().map(|(&i, e)| (i + off, e.clone())).collect();
        for (&(i, jj), e) in f {
            if jj == j {
                c.insert(i, e.clone());
            }
        }
        columns.push(c);
    }
    CellModule::new(format!("Cone({}->{})", source.name, target.name), &source.algebra, cells, columns)
}

/// `M ⊗_A N` on the basis `b_j ⊗ c_l`.
pub fn tensor_mod(m: &CellModule, n: &CellModule) -> Result<CellModule> {
    same_algebra(m, n)?;
    let a = &m.algebra;
    let idx = |j: usize, l: usize| j * n.len() + l;
    let mut cells = Vec::new();
    let mut columns = Vec::new();
    for (j, bj) in m.cells.iter().enumerate() {
        for (l, cl) in n.cells.iter().enumerate() {
            cells.push((format!("{}*{}", bj.0, cl.0), bj.1 + cl.1));
            let mut col = Column::new();
            for (&i, aij) in &m.columns[j] {
                col.insert(idx(i, l), aij.clone());
            }
            let deg_b = bj.1.coh;
            for (&k, akl) in &n.columns[l] {
                let negate = parity(deg_b) ^ parity(deg_b * coefficient_deg(a, akl));
                col.insert(idx(j, k), signed(akl, negate));
            }
            columns.push(col);
        }
    }
    CellModule::new(format!("{}*{}", m.name, n.name), a, cells, columns)
}

/// `Hom_A(M, N)` on the basis `φ_{j,l}` with `φ_{j,l}(b_i) = δ_ij c_l`, and
/// `(df)(m) = d(f(m)) + (-1)^{n+1} f(dm)` for `f` of degree `n`.
pub fn hom_complex(m: &CellModule, n: &CellModule) -> Result<CellModule> {
    same_algebra(m, n)?;
    let a = &m.algebra;
    let idx = |j: usize, l: usize| j * n.len() + l;
    let mut cells = Vec::new();
    let mut columns = Vec::new();
    for (j, bj) in m.cells.iter().enumerate() {
        for (l, cl) in n.cells.iter().enumerate() {
            let deg = cl.1 - bj.1;
            cells.push((format!("hom({},{})", bj.0, cl.0), deg));
            let mut col = Column::new();
            for (&mm, aml) in &n.columns[l] {
                let e = col.entry(idx(j, mm)).or_default();
                e.add_scaled(aml, &Scalar::one());
            }
            for (k, ck) in m.columns.iter().enumerate() {
                if let Some(ajk) = ck.get(&j) {
                    let negate = parity(deg.coh + 1) ^ parity(deg.coh * coefficient_deg(a, ajk));
                    let e = col.entry(idx(k, l)).or_default();
                    e.add_scaled(&signed(ajk, negate), &Scalar::one());
                }
            }
            col.retain(|_, e| !e.is_zero());
            columns.push(col);
        }
    }
    CellModule::new(format!("Hom({},{})", m.name, n.name), a, cells, columns)
}

/// `Hom_K(M, N) = H⁰(Hom_A(M, N)(0))`.
pub fn hom_group(m: &CellModule, n: &CellModule) -> Result<usize> {
    Ok(hom_complex(m, n)?.cohomology_dim(0, 0))
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::cdga::fixtures::*;
    use crate::cdga::GeneratorSpec;

    /// Over E1: `b` in (0,0), `c` in (0,1), `dc = x·b`.
    pub fn e1_pair() -> CellModule {
        let a = e1();
        let cells = vec![("b".to_string(), BiDegree::new(0, 0)), ("c".to_string(), BiDegree::new(0, 1))];
        let columns = vec![Column::new(), Column::from([(0, a.gen("x"))])];
        CellModule::new("P", &a, cells, columns).unwrap()
    }

    #[test]
    fn validation() {
        let m = e1_pair();
        assert_eq!(m.stages(), &[0, 1]);
        let a = e1();
        let bad = CellModule::new(
            "B",
            &a,
            vec![("b".into(), BiDegree::new(0, 0)), ("c".into(), BiDegree::new(0, 0))],
            vec![Column::new(), Column::from([(0, a.gen("x"))])],
        );
        assert!(bad.is_err());
        let cyc = CellModule::new(
            "C",
            &a,
            vec![("b".into(), BiDegree::new(0, 0)), ("c".into(), BiDegree::new(1, 0))],
            vec![Column::from([(1, Element::one())]), Column::from([(0, Element::one())])],
        );
        assert!(cyc.is_err());
    }

    #[test]
    fn q_functor_examples() {
        let a = e3();
        assert_eq!(CellModule::tate(&a, 2).q_functor().cohomology(), BTreeMap::from([((0, -2), 1)]));
        let m = e1_pair();
        assert_eq!(m.q_functor().cohomology(), BTreeMap::from([((0, 0), 1), ((0, 1), 1)]));
        let id = cone(&m, &m, &identity(&m)).unwrap();
        assert!(id.q_functor().is_acyclic());
        let t = CellModule::tate(&a, 0);
        assert_eq!(cone(&t, &t, &identity(&t)).unwrap().len(), 2);
    }

    #[test]
    fn cone_of_zero_map_is_target() {
        let m = e1_pair();
        let z = CellModule::zero(m.algebra());
        let c = cone(&z, &m, &ModMatrix::new()).unwrap();
        assert_eq!(c.cells(), m.cells());
        assert_eq!(c.columns(), m.columns());
    }

    #[test]
    fn multiplication_by_x_cone() {
        let a = e1();
        // A<-1>[-1] has one cell in bidegree (1, 1); x: (1,1) cell -> (0,0) cell is x times b.
        let src = CellModule::tate(&a, -1).shift_by(-1);
        let tgt = CellModule::tate(&a, 0);
        let f = ModMatrix::from([((0, 0), a.gen("x"))]);
        let c = cone(&src, &tgt, &f).unwrap();
        assert_eq!(c.cells()[1].1, BiDegree::new(0, 1));
        let p = e1_pair();
        assert_eq!(c.columns()[1], p.columns()[1]);
        assert!(cone(&tgt, &tgt, &ModMatrix::from([((0, 0), Element::one().scaled(&Scalar::from_integer(2.into())))])).is_ok());
        let not_chain = ModMatrix::from([((0, 0), Element::one())]);
        assert!(!chain_map_witnesses(&p, &p, &not_chain).is_empty());
        assert!(cone(&p, &p, &not_chain).is_err());
    }

    #[test]
    fn tensor_and_hom_of_tate_objects() {
        let a = e3();
        let t = tensor_mod(&CellModule::tate(&a, 2), &CellModule::tate(&a, 3)).unwrap();
        assert_eq!(t.cells()[0].1, BiDegree::new(0, -5));
        let h = hom_complex(&CellModule::tate(&a, 1), &CellModule::tate(&a, 1)).unwrap();
        assert_eq!(h.cells()[0].1, BiDegree::ZERO);
        for (x, y) in [(0, 0), (1, 0), (0, 2), (2, 1)] {
            let expected = if x == y { 1 } else { 0 };
            assert_eq!(hom_group(&CellModule::tate(&a, x), &CellModule::tate(&a, y)).unwrap(), expected);
        }
        let nc = Cdga::free("V", vec![GeneratorSpec::new("v", 0, 1)]).unwrap();
        // Hom(Q(-1), Q(0)) = H^0(A(1)) which is one-dimensional here
        assert_eq!(hom_group(&CellModule::tate(&nc, -1), &CellModule::tate(&nc, 0)).unwrap(), 1);
        assert_eq!(nc.cohomology_slice(0, 1).dim, 1);
    }

    #[test]
    fn tensor_and_hom_are_complexes() {
        let m = e1_pair();
        let mm = tensor_mod(&m, &m.shift()).unwrap();
        assert!(mm.witnesses().is_empty());
        let h = hom_complex(&m, &m.shift()).unwrap();
        assert!(h.witnesses().is_empty());
        assert_eq!(hom_group(&m, &m).unwrap(), 1);
    }

    #[test]
    fn weight_truncation() {
        let m = e1_pair();
        let t = m.weight_truncate(0);
        assert_eq!(t.lower.len(), 1);
        assert_eq!(t.upper.len(), 1);
        assert!(t.upper.columns()[0].is_empty());
        assert_eq!(t.graded.cells()[0].0, "b");
        let (ok, dims) = m.is_finite_tate();
        assert!(ok);
        assert_eq!(dims, BTreeMap::from([(0, 1), (1, 1)]));
    }
}
