//! Exact sparse linear algebra over the rationals.
//!
//! Every kernel, cohomology and quotient computation in the crate reduces to
//! the routines here. Elimination is plain Gauss-Jordan over [`Scalar`] with a
//! deterministic pivot rule (first available row, lowest column), so the same
//! input always produces the same basis.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// An exact rational number, always stored in lowest terms.
pub type Scalar = BigRational;

/// A sparse vector: coordinate index to nonzero value.
pub type SparseVector = BTreeMap<usize, Scalar>;

pub fn q(n: i64) -> Scalar {
    BigRational::from_integer(BigInt::from(n))
}

pub fn q_frac(n: i64, d: i64) -> Scalar {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Formats a rational as `p` or `p/q`.
pub fn fmt_scalar(s: &Scalar) -> String {
    if s.denom().is_one() {
        s.numer().to_string()
    } else {
        format!("{}/{}", s.numer(), s.denom())
    }
}

/// Adds `coef * src` into `dst`, dropping entries that cancel.
pub fn axpy(dst: &mut SparseVector, coef: &Scalar, src: &SparseVector) {
    if coef.is_zero() {
        return;
    }
    for (&i, v) in src {
        add_entry(dst, i, coef * v);
    }
}

pub fn add_entry(dst: &mut SparseVector, i: usize, v: Scalar) {
    if v.is_zero() {
        return;
    }
    match dst.get_mut(&i) {
        Some(cur) => {
            *cur += v;
            if cur.is_zero() {
                dst.remove(&i);
            }
        }
        None => {
            dst.insert(i, v);
        }
    }
}

pub fn scale(v: &SparseVector, c: &Scalar) -> SparseVector {
    if c.is_zero() {
        return SparseVector::new();
    }
    v.iter().map(|(&i, x)| (i, x * c)).collect()
}

pub fn unit_vector(i: usize) -> SparseVector {
    let mut v = SparseVector::new();
    v.insert(i, Scalar::one());
    v
}

/// Column-major sparse matrix with no stored zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    columns: Vec<SparseVector>,
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, cols, columns: vec![SparseVector::new(); cols] }
    }

    /// Builds a matrix from its columns. Entries outside `rows` are an error.
    pub fn from_columns(rows: usize, columns: Vec<SparseVector>) -> Result<Self> {
        for c in &columns {
            if let Some((&i, _)) = c.iter().next_back() {
                if i >= rows {
                    return Err(Error::input(format!("row index {i} out of bounds ({rows} rows)")));
                }
            }
            if c.values().any(|v| v.is_zero()) {
                return Err(Error::input("stored zero entry in sparse column"));
            }
        }
        Ok(SparseMatrix { rows, cols: columns.len(), columns })
    }

    pub fn from_dense(rows: &[Vec<i64>]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        let mut m = SparseMatrix::zeros(nrows, ncols);
        for (i, row) in rows.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                m.set(i, j, q(x));
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, j: usize) -> &SparseVector {
        &self.columns[j]
    }

    pub fn columns(&self) -> &[SparseVector] {
        &self.columns
    }

    pub fn get(&self, i: usize, j: usize) -> Scalar {
        self.columns[j].get(&i).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        if v.is_zero() {
            self.columns[j].remove(&i);
        } else {
            self.columns[j].insert(i, v);
        }
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(|c| c.len()).sum()
    }

    /// Row-major view of the entries.
    pub fn row_vectors(&self) -> Vec<SparseVector> {
        let mut rows = vec![SparseVector::new(); self.rows];
        for (j, c) in self.columns.iter().enumerate() {
            for (&i, v) in c {
                rows[i].insert(j, v.clone());
            }
        }
        rows
    }

    pub fn mul_vec(&self, x: &SparseVector) -> SparseVector {
        let mut out = SparseVector::new();
        for (&j, xj) in x {
            if j < self.cols {
                axpy(&mut out, xj, &self.columns[j]);
            }
        }
        out
    }

    pub fn mul(&self, other: &SparseMatrix) -> Result<SparseMatrix> {
        if self.cols != other.rows {
            return Err(Error::input(format!(
                "dimension mismatch: {}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let columns = other.columns.iter().map(|c| self.mul_vec(c)).collect();
        Ok(SparseMatrix { rows: self.rows, cols: other.cols, columns })
    }

    pub fn rank(&self) -> usize {
        Echelon::from_rows(self.cols, self.row_vectors()).rank()
    }
}

/// Reduced row echelon form of a list of vectors in a fixed ambient space.
///
/// Rows have leading entry 1 at their pivot and zeros in every other pivot
/// column, so the rows are a canonical basis of their span.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Echelon {
    ambient: usize,
    rows: Vec<SparseVector>,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn from_rows(ambient: usize, mut input: Vec<SparseVector>) -> Self {
        input.retain(|r| !r.is_empty());
        let mut pivots = Vec::new();
        let mut rank = 0;
        for col in 0..ambient {
            if rank == input.len() {
                break;
            }
            let Some(p) = (rank..input.len()).find(|&r| input[r].contains_key(&col)) else {
                continue;
            };
            input.swap(rank, p);
            let inv = input[rank][&col].recip();
            let pivot_row = scale(&input[rank], &inv);
            for (r, row) in input.iter_mut().enumerate() {
                if r == rank {
                    continue;
                }
                if let Some(c) = row.get(&col).cloned() {
                    axpy(row, &(-c), &pivot_row);
                }
            }
            input[rank] = pivot_row;
            pivots.push(col);
            rank += 1;
        }
        input.truncate(rank);
        Echelon { ambient, rows: input, pivots }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[SparseVector] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Subtracts the span component: the result vanishes on every pivot column.
    pub fn reduce(&self, v: &SparseVector) -> SparseVector {
        let mut out = v.clone();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if let Some(c) = out.get(&p).cloned() {
                axpy(&mut out, &(-c), row);
            }
        }
        out
    }

    pub fn contains(&self, v: &SparseVector) -> bool {
        self.reduce(v).is_empty()
    }

    /// Coordinates of `v` in the echelon rows, if `v` lies in their span.
    pub fn coordinates(&self, v: &SparseVector) -> Option<SparseVector> {
        if !self.contains(v) {
            return None;
        }
        let mut out = SparseVector::new();
        for (k, &p) in self.pivots.iter().enumerate() {
            if let Some(c) = v.get(&p) {
                out.insert(k, c.clone());
            }
        }
        Some(out)
    }

    pub fn non_pivots(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.ambient];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.ambient).filter(|&c| !is_pivot[c]).collect()
    }
}

/// A list of linearly independent vectors in `Q^ambient_dim`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubspaceBasis {
    pub ambient_dim: usize,
    pub vectors: Vec<SparseVector>,
}

impl SubspaceBasis {
    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn echelon(&self) -> Echelon {
        Echelon::from_rows(self.ambient_dim, self.vectors.clone())
    }
}

/// Canonical basis of the kernel: the reduced echelon form of the null space.
pub fn kernel_basis(m: &SparseMatrix) -> SubspaceBasis {
    let ech = Echelon::from_rows(m.cols(), m.row_vectors());
    let mut raw = Vec::new();
    for f in ech.non_pivots() {
        let mut v = unit_vector(f);
        for (row, &p) in ech.rows().iter().zip(ech.pivots()) {
            if let Some(c) = row.get(&f) {
                v.insert(p, -c.clone());
            }
        }
        raw.push(v);
    }
    let canon = Echelon::from_rows(m.cols(), raw);
    SubspaceBasis { ambient_dim: m.cols(), vectors: canon.rows().to_vec() }
}

/// Canonical basis of the column space (image).
pub fn image_basis(m: &SparseMatrix) -> SubspaceBasis {
    let ech = Echelon::from_rows(m.rows(), m.columns().to_vec());
    SubspaceBasis { ambient_dim: m.rows(), vectors: ech.rows().to_vec() }
}

/// Particular solution of `m x = b` with all free variables set to zero.
pub fn solve(m: &SparseMatrix, b: &SparseVector) -> Result<Option<SparseVector>> {
    if let Some((&i, _)) = b.iter().next_back() {
        if i >= m.rows() {
            return Err(Error::input(format!(
                "right-hand side index {i} exceeds {} rows",
                m.rows()
            )));
        }
    }
    let n = m.cols();
    let mut rows = m.row_vectors();
    for (r, row) in rows.iter_mut().enumerate() {
        if let Some(v) = b.get(&r) {
            row.insert(n, v.clone());
        }
    }
    let ech = Echelon::from_rows(n + 1, rows);
    if ech.pivots().contains(&n) {
        return Ok(None);
    }
    let mut x = SparseVector::new();
    for (row, &p) in ech.rows().iter().zip(ech.pivots()) {
        if let Some(v) = row.get(&n) {
            x.insert(p, v.clone());
        }
    }
    Ok(Some(x))
}

/// Standard vectors completing `sub` to a basis of the ambient space.
pub fn quotient_reps(sub: &SubspaceBasis, ambient_dim: usize) -> Result<SubspaceBasis> {
    if sub.ambient_dim != ambient_dim {
        return Err(Error::input(format!(
            "subspace lives in dimension {}, expected {ambient_dim}",
            sub.ambient_dim
        )));
    }
    let ech = sub.echelon();
    if ech.rank() != sub.vectors.len() {
        return Err(Error::input("subspace vectors are not linearly independent"));
    }
    let vectors = ech.non_pivots().into_iter().map(unit_vector).collect();
    Ok(SubspaceBasis { ambient_dim, vectors })
}

/// Rank of the map induced on `Z/B` by sending each `z` in `sources` to a
/// vector of the target, modulo the target boundaries `target_boundaries`.
pub fn induced_rank(images: &[SparseVector], target_boundaries: &[SparseVector], ambient: usize) -> usize {
    let b = Echelon::from_rows(ambient, target_boundaries.to_vec()).rank();
    let mut all = target_boundaries.to_vec();
    all.extend(images.iter().cloned());
    Echelon::from_rows(ambient, all).rank() - b
}

/// Canonical cocycle representatives of `ker d_out / im d_in` on a space of
/// dimension `dim`: the reduced rows of the cocycle space modulo boundaries.
pub fn cohomology_reps(d_in: &SparseMatrix, d_out: &SparseMatrix, dim: usize) -> Vec<SparseVector> {
    let boundaries = Echelon::from_rows(dim, d_in.columns().to_vec());
    let cocycles = kernel_basis(d_out);
    let reduced = cocycles.vectors.iter().map(|z| boundaries.reduce(z)).collect();
    Echelon::from_rows(dim, reduced).rows().to_vec()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vec_of(entries: &[(usize, i64)]) -> SparseVector {
        entries.iter().map(|&(i, v)| (i, q(v))).collect()
    }

    #[test]
    fn kernel_of_identity_is_empty() {
        let m = SparseMatrix::from_dense(&[vec![1, 0], vec![0, 1]]);
        assert_eq!(kernel_basis(&m).dim(), 0);
    }

    #[test]
    fn kernel_of_zero_map() {
        let m = SparseMatrix::zeros(1, 2);
        let k = kernel_basis(&m);
        assert_eq!(k.dim(), 2);
        assert_eq!(k.vectors, vec![unit_vector(0), unit_vector(1)]);
    }

    #[test]
    fn kernel_is_echelon_normalized() {
        let m = SparseMatrix::from_dense(&[vec![1, 1], vec![1, 1]]);
        let k = kernel_basis(&m);
        assert_eq!(k.vectors, vec![vec_of(&[(0, 1), (1, -1)])]);
    }

    #[test]
    fn solve_examples() {
        let id = SparseMatrix::from_dense(&[vec![1]]);
        assert_eq!(solve(&id, &vec_of(&[(0, 3)])).unwrap(), Some(vec_of(&[(0, 3)])));
        let two = SparseMatrix::from_dense(&[vec![2]]);
        assert_eq!(solve(&two, &vec_of(&[(0, 4)])).unwrap(), Some(vec_of(&[(0, 2)])));
        let m = SparseMatrix::from_dense(&[vec![1, 0], vec![0, 0]]);
        assert_eq!(solve(&m, &vec_of(&[(1, 1)])).unwrap(), None);
        assert!(solve(&m, &vec_of(&[(5, 1)])).is_err());
    }

    #[test]
    fn quotient_examples() {
        let empty = SubspaceBasis { ambient_dim: 2, vectors: vec![] };
        assert_eq!(quotient_reps(&empty, 2).unwrap().vectors, vec![unit_vector(0), unit_vector(1)]);
        let e0 = SubspaceBasis { ambient_dim: 2, vectors: vec![unit_vector(0)] };
        assert_eq!(quotient_reps(&e0, 2).unwrap().vectors, vec![unit_vector(1)]);
        let diag = SubspaceBasis { ambient_dim: 2, vectors: vec![vec_of(&[(0, 1), (1, 1)])] };
        assert_eq!(quotient_reps(&diag, 2).unwrap().vectors, vec![unit_vector(1)]);
        let dep = SubspaceBasis {
            ambient_dim: 2,
            vectors: vec![vec_of(&[(0, 1)]), vec_of(&[(0, 2)])],
        };
        assert!(quotient_reps(&dep, 2).is_err());
        assert!(quotient_reps(&e0, 3).is_err());
    }

    #[test]
    fn fractions_stay_reduced() {
        let m = SparseMatrix::from_dense(&[vec![2, 4], vec![6, 3]]);
        let x = solve(&m, &vec_of(&[(0, 1), (1, 1)])).unwrap().unwrap();
        assert_eq!(m.mul_vec(&x), vec_of(&[(0, 1), (1, 1)]));
        assert_eq!(x[&0], q_frac(1, 18));
        assert_eq!(fmt_scalar(&x[&0]), "1/18");
    }
}
