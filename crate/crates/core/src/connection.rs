//! Flat nilpotent connections: the equivalent description of cell modules
//! by a complex `(M₀, d⁰)` of rational spaces plus `Γ: M₀ → A⁺ ⊗ M₀`, and the
//! truncations built from it.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::cdga::{BiDegree, Cdga, Element, Witness};
use crate::cell::{structure_witnesses, Cell, CellModule, Column, QComplex};
use crate::error::{Error, Result};
use crate::linalg::{self, Echelon, Scalar, SparseMatrix, SparseVector};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConnectionModule {
    pub name: String,
    algebra: Cdga,
    pub cells: Vec<Cell>,
    /// `d⁰(b_j) = Σ d0[(i, j)] b_i`.
    pub d0: BTreeMap<(usize, usize), Scalar>,
    /// `Γ(b_j) = Σ gamma[(i, j)] ⊗ b_i` with coefficients in `A⁺`.
    pub gamma: BTreeMap<(usize, usize), Element>,
}

/// Splits `d = d⁰ + d⁺` along `A = ℚ ⊕ A⁺`.
pub fn to_connection(m: &CellModule) -> ConnectionModule {
    let mut d0 = BTreeMap::new();
    let mut gamma = BTreeMap::new();
    for (j, col) in m.columns().iter().enumerate() {
        for (&i, e) in col {
            let c = e.constant();
            if !c.is_zero() {
                d0.insert((i, j), c);
            }
            let plus = e.filter(|mono| !mono.is_one());
            if !plus.is_zero() {
                gamma.insert((i, j), plus);
            }
        }
    }
    ConnectionModule { name: m.name.clone(), algebra: m.algebra().clone(), cells: m.cells().to_vec(), d0, gamma }
}

pub fn from_connection(c: &ConnectionModule) -> Result<CellModule> {
    CellModule::new(c.name.clone(), &c.algebra, c.cells.clone(), c.columns())
}

impl ConnectionModule {
    pub fn new(
        name: impl Into<String>,
        algebra: &Cdga,
        cells: Vec<Cell>,
        d0: BTreeMap<(usize, usize), Scalar>,
        gamma: BTreeMap<(usize, usize), Element>,
    ) -> Self {
        ConnectionModule { name: name.into(), algebra: algebra.clone(), cells, d0, gamma }
    }

    pub fn algebra(&self) -> &Cdga {
        &self.algebra
    }

    pub fn columns(&self) -> Vec<Column> {
        let mut cols = vec![Column::new(); self.cells.len()];
        for (&(i, j), c) in &self.d0 {
            cols[j].entry(i).or_default().add_term(crate::cdga::Monomial::one(), c.clone());
        }
        for (&(i, j), e) in &self.gamma {
            cols[j].entry(i).or_default().add_scaled(e, &Scalar::from_integer(1.into()));
        }
        for col in &mut cols {
            col.retain(|_, e| !e.is_zero());
        }
        cols
    }

    /// Failures of `d⁰² = 0`, `Γ ∈ A⁺ ⊗ M`, and flatness `dΓ + Γ² = 0`
    /// (together with the cross terms with `d⁰`).
    pub fn flatness_witnesses(&self) -> Vec<Witness> {
        let mut out = Vec::new();
        for (&(i, j), e) in &self.gamma {
            if !e.constant().is_zero() {
                out.push(Witness::new("connection", format!("Γ({}) has a constant term on {}", self.cells[j].0, self.cells[i].0)));
            }
        }
        out.extend(structure_witnesses(&self.algebra, &self.cells, &self.columns()));
        out
    }

    pub fn q_complex(&self) -> QComplex {
        QComplex { cells: self.cells.clone(), d0: self.d0.clone() }
    }

    /// Image of `Σ v_j b_j` under `d⁰` (as a vector) and under `Γ`
    /// (as vectors per monomial coefficient).
    fn images(&self, v: &SparseVector) -> (SparseVector, BTreeMap<crate::cdga::Monomial, SparseVector>) {
        let mut d = SparseVector::new();
        let mut g: BTreeMap<crate::cdga::Monomial, SparseVector> = BTreeMap::new();
        for (&j, c) in v {
            for (&(i, jj), x) in &self.d0 {
                if jj == j {
                    linalg::add_entry(&mut d, i, c * x);
                }
            }
            for (&(i, jj), e) in &self.gamma {
                if jj == j {
                    for (mono, x) in e.terms() {
                        linalg::add_entry(g.entry(mono.clone()).or_default(), i, c * x);
                    }
                }
            }
        }
        g.retain(|_, v| !v.is_empty());
        (d, g)
    }

    fn bidegree_of(&self, v: &SparseVector) -> Result<BiDegree> {
        let mut it = v.keys().map(|&j| self.cells[j].1);
        let first = it.next().ok_or_else(|| Error::input("zero basis vector"))?;
        if it.any(|b| b != first) {
            return Err(Error::input("basis vectors must be homogeneous"));
        }
        Ok(first)
    }

    /// The sub-connection on the span of `vectors`; fails if the span is not stable.
    pub fn subconnection(&self, name: &str, vectors: &[SparseVector], names: Vec<String>) -> Result<ConnectionModule> {
        let n = self.cells.len();
        let mat = SparseMatrix::from_columns(n, vectors.to_vec())?;
        let cells: Vec<Cell> = vectors
            .iter()
            .zip(names)
            .map(|(v, nm)| Ok((nm, self.bidegree_of(v)?)))
            .collect::<Result<_>>()?;
        let coords = |w: &SparseVector| -> Result<SparseVector> {
            linalg::solve(&mat, w)?.ok_or_else(|| Error::input(format!("span is not stable under the connection of {}", self.name)))
        };
        let mut d0 = BTreeMap::new();
        let mut gamma: BTreeMap<(usize, usize), Element> = BTreeMap::new();
        for (k, v) in vectors.iter().enumerate() {
            let (d, g) = self.images(v);
            for (i, c) in coords(&d)? {
                d0.insert((i, k), c);
            }
            for (mono, w) in g {
                for (i, c) in coords(&w)? {
                    gamma.entry((i, k)).or_default().add_term(mono.clone(), c);
                }
            }
        }
        gamma.retain(|_, e| !e.is_zero());
        Ok(ConnectionModule { name: name.into(), algebra: self.algebra.clone(), cells, d0, gamma })
    }

    /// The quotient connection by the span of `vectors` (assumed stable).
    pub fn quotient(&self, name: &str, vectors: &[SparseVector]) -> ConnectionModule {
        let ech = Echelon::from_rows(self.cells.len(), vectors.to_vec());
        let keep = ech.non_pivots();
        let pos: BTreeMap<usize, usize> = keep.iter().enumerate().map(|(k, &j)| (j, k)).collect();
        let project = |w: &SparseVector| -> SparseVector {
            ech.reduce(w).into_iter().filter_map(|(i, c)| pos.get(&i).map(|&k| (k, c))).collect()
        };
        let mut d0 = BTreeMap::new();
        let mut gamma: BTreeMap<(usize, usize), Element> = BTreeMap::new();
        for (k, &j) in keep.iter().enumerate() {
            let (d, g) = self.images(&linalg::unit_vector(j));
            for (i, c) in project(&d) {
                d0.insert((i, k), c);
            }
            for (mono, w) in g {
                for (i, c) in project(&w) {
                    gamma.entry((i, k)).or_default().add_term(mono.clone(), c);
                }
            }
        }
        gamma.retain(|_, e| !e.is_zero());
        ConnectionModule {
            name: name.into(),
            algebra: self.algebra.clone(),
            cells: keep.iter().map(|&j| self.cells[j].clone()).collect(),
            d0,
            gamma,
        }
    }

    fn degree_indices(&self, deg: BiDegree) -> Vec<usize> {
        (0..self.cells.len()).filter(|&i| self.cells[i].1 == deg).collect()
    }

    fn weights(&self) -> Vec<i64> {
        let mut w: Vec<i64> = self.cells.iter().map(|c| c.1.adams).collect();
        w.sort();
        w.dedup();
        w
    }
}

/// `(τ_{≤n}, τ^{>n}, Hⁿ)` of a connection, with consistency witnesses.
#[derive(Clone, Debug)]
pub struct TTruncation {
    pub lower: ConnectionModule,
    pub upper: ConnectionModule,
    pub cohomology: ConnectionModule,
    pub witnesses: Vec<Witness>,
}

/// Truncation in the t-structure. Requires every algebra generator in
/// degree at least 1, so that `Γ` never raises the degree of `M₀`.
pub fn t_truncate(c: &ConnectionModule, n: i64) -> Result<TTruncation> {
    let a = &c.algebra;
    if !a.positively_generated() {
        return Err(Error::unsupported("t-truncation needs an algebra generated in positive degrees"));
    }
    let q = c.q_complex();
    let mut sub = Vec::new();
    let mut names = Vec::new();
    for (j, cell) in c.cells.iter().enumerate() {
        if cell.1.coh < n {
            sub.push(linalg::unit_vector(j));
            names.push(cell.0.clone());
        }
    }
    for w in c.weights() {
        let deg = BiDegree::new(n, w);
        let here = c.degree_indices(deg);
        let above = c.degree_indices(BiDegree::new(n + 1, w));
        let mut dmat = SparseMatrix::zeros(above.len(), here.len());
        for (col, &j) in here.iter().enumerate() {
            for (row, &i) in above.iter().enumerate() {
                if let Some(x) = c.d0.get(&(i, j)) {
                    dmat.set(row, col, x.clone());
                }
            }
        }
        for (k, z) in linalg::kernel_basis(&dmat).vectors.iter().enumerate() {
            sub.push(z.iter().map(|(&i, x)| (here[i], x.clone())).collect());
            names.push(format!("z{n}_{w}_{k}"));
        }
    }
    let lower = c.subconnection(&format!("t<={n}({})", c.name), &sub, names)?;
    let upper = c.quotient(&format!("t>{n}({})", c.name), &sub);
    let cohomology = cohomology(c, n)?;
    let mut witnesses = Vec::new();
    for (label, part) in [("lower", &lower), ("upper", &upper), ("cohomology", &cohomology)] {
        for w in part.flatness_witnesses() {
            witnesses.push(Witness::new(format!("{label} {}", w.check), w.detail));
        }
    }
    let full = q.cohomology();
    let want_lower: BTreeMap<_, _> = full.iter().filter(|(k, _)| k.0 <= n).map(|(k, v)| (*k, *v)).collect();
    let want_upper: BTreeMap<_, _> = full.iter().filter(|(k, _)| k.0 > n).map(|(k, v)| (*k, *v)).collect();
    let want_h: BTreeMap<_, _> = full.iter().filter(|(k, _)| k.0 == n).map(|(k, v)| (*k, *v)).collect();
    if lower.q_complex().cohomology() != want_lower {
        witnesses.push(Witness::new("truncation", "q-cohomology of the lower truncation is not H^{<=n}"));
    }
    if upper.q_complex().cohomology() != want_upper {
        witnesses.push(Witness::new("truncation", "q-cohomology of the upper truncation is not H^{>n}"));
    }
    if cohomology.q_complex().cohomology() != want_h {
        witnesses.push(Witness::new("truncation", "H^n connection has the wrong dimensions"));
    }
    Ok(TTruncation { lower, upper, cohomology, witnesses })
}

/// `Hⁿ(M₀)` with the connection induced by the degree-one part `Γ⁽¹⁾`.
/// Cells are the echelon cocycle representatives of each weight, in order.
pub fn cohomology(c: &ConnectionModule, n: i64) -> Result<ConnectionModule> {
    let q = c.q_complex();
    let mut cells = Vec::new();
    let mut vectors: Vec<SparseVector> = Vec::new();
    for w in c.weights() {
        let deg = BiDegree::new(n, w);
        let (idx, reps) = q.cohomology_reps(deg);
        for (k, r) in reps.iter().enumerate() {
            cells.push((format!("h{n}_{w}_{k}"), deg));
            vectors.push(r.iter().map(|(&i, x)| (idx[i], x.clone())).collect());
        }
    }
    cohomology_connection(c, n, &cells, &vectors)
}

fn cohomology_connection(c: &ConnectionModule, n: i64, cells: &[Cell], reps: &[SparseVector]) -> Result<ConnectionModule> {
    let a = &c.algebra;
    let q = c.q_complex();
    // per weight: matrix [reps | boundaries] to read classes off cocycles
    let mut solvers: BTreeMap<i64, (SparseMatrix, Vec<usize>)> = BTreeMap::new();
    for w in c.weights() {
        let here = c.degree_indices(BiDegree::new(n, w));
        let below = c.degree_indices(BiDegree::new(n - 1, w));
        let mut cols: Vec<SparseVector> = Vec::new();
        let mut owners = Vec::new();
        for (k, cell) in cells.iter().enumerate() {
            if cell.1.adams == w {
                cols.push(reps[k].clone());
                owners.push(k);
            }
        }
        for &j in &below {
            let v: SparseVector = here
                .iter()
                .filter_map(|&i| q.d0.get(&(i, j)).map(|x| (i, x.clone())))
                .collect();
            cols.push(v);
        }
        solvers.insert(w, (SparseMatrix::from_columns(c.cells.len(), cols)?, owners));
    }
    let mut gamma: BTreeMap<(usize, usize), Element> = BTreeMap::new();
    for (k, z) in reps.iter().enumerate() {
        let (_, g) = c.images(z);
        for (mono, w) in g {
            if a.monomial_bidegree(&mono).coh != 1 {
                continue;
            }
            let weight = cells[k].1.adams - a.monomial_bidegree(&mono).adams;
            let (mat, owners) = &solvers[&weight];
            let x = linalg::solve(mat, &w)?
                .ok_or_else(|| Error::input("degree-one part of the connection leaves the cocycles"))?;
            for (idx, coef) in x {
                if idx < owners.len() {
                    gamma.entry((owners[idx], k)).or_default().add_term(mono.clone(), coef);
                }
            }
        }
    }
    gamma.retain(|_, e| !e.is_zero());
    Ok(ConnectionModule {
        name: format!("H{n}({})", c.name),
        algebra: c.algebra.clone(),
        cells: cells.to_vec(),
        d0: BTreeMap::new(),
        gamma,
    })
}

/// Truncation of a cell module, returned as cell modules.
pub fn t_truncate_module(m: &CellModule, n: i64) -> Result<(CellModule, CellModule, ConnectionModule, Vec<Witness>)> {
    let t = t_truncate(&to_connection(m), n)?;
    Ok((from_connection(&t.lower)?, from_connection(&t.upper)?, t.cohomology, t.witnesses))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cdga::fixtures::*;
    use crate::cell::tests::e1_pair;
    use crate::linalg::q;

    #[test]
    fn round_trip() {
        let m = e1_pair();
        let c = to_connection(&m);
        assert!(c.d0.is_empty());
        assert_eq!(c.gamma.len(), 1);
        assert!(c.flatness_witnesses().is_empty());
        assert_eq!(from_connection(&c).unwrap(), m);
        let t = to_connection(&CellModule::tate(&e3(), 0));
        assert!(t.gamma.is_empty() && t.d0.is_empty());
    }

    #[test]
    fn truncating_a_degree_zero_module() {
        let m = e1_pair();
        let (lower, upper, h, w) = t_truncate_module(&m, 0).unwrap();
        assert!(w.is_empty(), "{w:?}");
        assert_eq!(lower.len(), 2);
        assert!(upper.is_empty());
        assert_eq!(h.cells.len(), 2);
        assert_eq!(h.gamma.len(), 1);
        assert!(m.in_heart());
    }

    #[test]
    fn truncation_with_d0() {
        let a = e3();
        // b (0,0), c (1,0) with dc = 0, e (0,1) with de = x b; f (-1, 0) with df = b
        let cells = vec![
            ("b".to_string(), BiDegree::new(0, 0)),
            ("c".to_string(), BiDegree::new(1, 0)),
            ("e".to_string(), BiDegree::new(0, 1)),
            ("f".to_string(), BiDegree::new(-1, 0)),
        ];
        let mut cols = vec![Column::new(); 4];
        cols[2].insert(0, a.gen("x"));
        cols[3].insert(0, Element::scalar(q(1)));
        let m = CellModule::new("M", &a, cells, cols).unwrap();
        assert!(!m.in_heart());
        for n in -1..=1 {
            let t = t_truncate(&to_connection(&m), n).unwrap();
            assert!(t.witnesses.is_empty(), "n={n}: {:?}", t.witnesses);
        }
        let sub = to_connection(&m).subconnection("bad", &[linalg::unit_vector(2)], vec!["e".into()]);
        assert!(sub.is_err());
    }
}
