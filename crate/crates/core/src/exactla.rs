//! Exact rational linear algebra.
//!
//! Everything downstream (product kernels, symmetrisation kernels, right
//! inverses of the Euler-class multiplication, Poincaré pairings) reduces to
//! elimination over the rationals. Pivoting is deterministic: the leftmost
//! nonzero column is eliminated first and ties go to the first row holding a
//! nonzero entry, so every "choice" made from these routines is reproducible.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational scalar, always kept in lowest terms with positive denominator.
pub type Scalar = BigRational;

pub fn int(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Scalar {
    Scalar::new(BigInt::from(n), BigInt::from(d))
}

pub fn zero_vec(n: usize) -> Vec<Scalar> {
    vec![Scalar::zero(); n]
}

pub fn unit_vec(n: usize, i: usize) -> Vec<Scalar> {
    let mut v = zero_vec(n);
    v[i] = Scalar::one();
    v
}

pub fn is_zero_vec(v: &[Scalar]) -> bool {
    v.iter().all(Zero::is_zero)
}

/// `acc += c * v`
pub fn axpy(acc: &mut [Scalar], c: &Scalar, v: &[Scalar]) {
    debug_assert_eq!(acc.len(), v.len());
    if c.is_zero() {
        return;
    }
    for (a, x) in acc.iter_mut().zip(v) {
        if !x.is_zero() {
            *a += c * x;
        }
    }
}

pub fn scaled(c: &Scalar, v: &[Scalar]) -> Vec<Scalar> {
    v.iter().map(|x| c * x).collect()
}

pub fn sub_vec(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn add_vec(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn dot(a: &[Scalar], b: &[Scalar]) -> Scalar {
    let mut s = Scalar::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            s += x * y;
        }
    }
    s
}

/// Largest absolute entry; zero for an empty vector.
pub fn max_abs(v: &[Scalar]) -> Scalar {
    v.iter().map(|x| x.abs()).fold(Scalar::zero(), |a, b| if b > a { b } else { a })
}

/// Dense row-major rational matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Scalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Scalar::one();
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Scalar>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        Self::from_rows_with_cols(rows, cols)
    }

    /// Like `from_rows` but keeps the column count when `rows` is empty.
    pub fn from_rows_with_cols(rows: &[Vec<Scalar>], cols: usize) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix rows");
            data.extend(r.iter().cloned());
        }
        Matrix { rows: rows.len(), cols, data }
    }

    pub fn from_columns(nrows: usize, columns: &[Vec<Scalar>]) -> Self {
        let mut m = Self::zeros(nrows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), nrows, "column length mismatch");
            for (i, x) in c.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let rows: Vec<Vec<Scalar>> = rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect();
        Self::from_rows(&rows)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn row_vecs(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols, "matrix-vector shape mismatch");
        (0..self.rows).map(|i| dot(self.row(i), v)).collect()
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn rank(&self) -> usize {
        rref(self).pivots.len()
    }

    /// Two-sided inverse of a square matrix, `None` when singular.
    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        if n == 0 {
            return Some(Matrix::zeros(0, 0));
        }
        let mut aug = Matrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = Scalar::one();
        }
        let r = rref(&aug);
        if r.pivots.len() < n || r.pivots[n - 1] >= n {
            return None;
        }
        let mut inv = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = r.reduced[(i, n + j)].clone();
            }
        }
        Some(inv)
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = Scalar;
    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Scalar {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Clone, Debug)]
pub struct Rref {
    pub reduced: Matrix,
    pub pivots: Vec<usize>,
}

pub fn rref(m: &Matrix) -> Rref {
    let (nr, nc) = (m.rows, m.cols);
    let mut rows = m.row_vecs();
    let mut pivots = Vec::new();
    let mut prow = 0;
    for col in 0..nc {
        if prow >= nr {
            break;
        }
        let Some(found) = (prow..nr).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(prow, found);
        let inv = rows[prow][col].recip();
        if !inv.is_one() {
            for x in rows[prow][col..].iter_mut() {
                if !x.is_zero() {
                    *x *= &inv;
                }
            }
        }
        let support: Vec<usize> = (col..nc).filter(|&j| !rows[prow][j].is_zero()).collect();
        let pivot_row = rows[prow].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == prow || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for &j in &support {
                let delta = &factor * &pivot_row[j];
                row[j] -= delta;
            }
        }
        pivots.push(col);
        prow += 1;
    }
    Rref { reduced: Matrix::from_rows_with_cols(&rows, nc), pivots }
}

/// A subspace of `K^ambient_dim` given by linearly independent basis vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Vec<Vec<Scalar>>,
}

impl Subspace {
    pub fn zero(ambient_dim: usize) -> Self {
        Subspace { ambient_dim, basis: Vec::new() }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Subspace { ambient_dim, basis: (0..ambient_dim).map(|i| unit_vec(ambient_dim, i)).collect() }
    }

    /// Span of `vectors`, keeping a maximal independent subset in the given order.
    pub fn span(ambient_dim: usize, vectors: &[Vec<Scalar>]) -> Self {
        let mut ech = Echelon::new(ambient_dim);
        let mut basis = Vec::new();
        for v in vectors {
            assert_eq!(v.len(), ambient_dim, "vector length does not match ambient dimension");
            if ech.insert(v) {
                basis.push(v.clone());
            }
        }
        Subspace { ambient_dim, basis }
    }

    /// Wraps vectors already known to be independent (checked).
    pub fn from_basis(ambient_dim: usize, basis: Vec<Vec<Scalar>>) -> Result<Self> {
        let s = Self::span(ambient_dim, &basis);
        if s.basis.len() != basis.len() {
            return Err(Error::Input("basis vectors are linearly dependent".into()));
        }
        Ok(s)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Scalar>] {
        &self.basis
    }

    pub fn into_basis(self) -> Vec<Vec<Scalar>> {
        self.basis
    }

    /// Basis vectors as the columns of an `ambient_dim x dim` matrix.
    pub fn as_columns(&self) -> Matrix {
        Matrix::from_columns(self.ambient_dim, &self.basis)
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.coordinates(v).is_some()
    }

    /// Coordinates of `v` in this basis, if `v` lies in the subspace.
    pub fn coordinates(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        solve_particular(&self.as_columns(), v)
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.ambient_dim == other.ambient_dim && self.basis.iter().all(|b| other.contains(b))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut all = self.basis.clone();
        all.extend(other.basis.iter().cloned());
        Subspace::span(self.ambient_dim, &all)
    }

    pub fn same_as(&self, other: &Subspace) -> bool {
        self.dim() == other.dim() && self.is_subspace_of(other)
    }
}

/// Incrementally maintained echelon basis for fast membership tests.
#[derive(Clone, Debug)]
pub struct Echelon {
    dim: usize,
    rows: Vec<(usize, Vec<Scalar>)>,
}

impl Echelon {
    pub fn new(dim: usize) -> Self {
        Echelon { dim, rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Residual of `v` after eliminating against the stored rows.
    pub fn reduce(&self, v: &[Scalar]) -> Vec<Scalar> {
        let mut r = v.to_vec();
        for (p, row) in &self.rows {
            if !r[*p].is_zero() {
                let c = r[*p].clone();
                for (x, y) in r.iter_mut().zip(row) {
                    if !y.is_zero() {
                        *x -= &c * y;
                    }
                }
            }
        }
        r
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        is_zero_vec(&self.reduce(v))
    }

    /// Adds `v`; returns false when it was already in the span.
    pub fn insert(&mut self, v: &[Scalar]) -> bool {
        debug_assert_eq!(v.len(), self.dim);
        let mut r = self.reduce(v);
        let Some(p) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = r[p].recip();
        for x in r.iter_mut() {
            *x *= &inv;
        }
        for (_, row) in self.rows.iter_mut() {
            if !row[p].is_zero() {
                let c = row[p].clone();
                for (x, y) in row.iter_mut().zip(&r) {
                    if !y.is_zero() {
                        *x -= &c * y;
                    }
                }
            }
        }
        self.rows.push((p, r));
        true
    }
}

/// Basis of `{v : m v = 0}`: one vector per free column, free entry 1.
pub fn kernel_basis(m: &Matrix) -> Subspace {
    let Rref { reduced, pivots } = rref(m);
    let n = m.cols;
    let mut is_pivot = vec![false; n];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut basis = Vec::new();
    for f in (0..n).filter(|&c| !is_pivot[c]) {
        let mut v = zero_vec(n);
        v[f] = Scalar::one();
        for (row, &pc) in pivots.iter().enumerate() {
            let e = &reduced[(row, f)];
            if !e.is_zero() {
                v[pc] = -e.clone();
            }
        }
        basis.push(v);
    }
    Subspace { ambient_dim: n, basis }
}

/// Some `v` with `m v = b`, free variables set to zero; `None` iff `b` is not in the image.
pub fn solve_particular(m: &Matrix, b: &[Scalar]) -> Option<Vec<Scalar>> {
    assert_eq!(b.len(), m.rows, "right-hand side length mismatch");
    let n = m.cols;
    let mut aug = Matrix::zeros(m.rows, n + 1);
    for i in 0..m.rows {
        for j in 0..n {
            aug[(i, j)] = m[(i, j)].clone();
        }
        aug[(i, n)] = b[i].clone();
    }
    let Rref { reduced, pivots } = rref(&aug);
    if pivots.last() == Some(&n) {
        return None;
    }
    let mut v = zero_vec(n);
    for (row, &pc) in pivots.iter().enumerate() {
        v[pc] = reduced[(row, n)].clone();
    }
    Some(v)
}

pub fn intersect(u: &Subspace, v: &Subspace) -> Result<Subspace> {
    if u.ambient_dim != v.ambient_dim {
        return Err(Error::Input(format!(
            "cannot intersect subspaces of K^{} and K^{}",
            u.ambient_dim, v.ambient_dim
        )));
    }
    let n = u.ambient_dim;
    // columns [U | -V]; kernel vectors (a, b) give U a = V b
    let mut cols: Vec<Vec<Scalar>> = u.basis.clone();
    cols.extend(v.basis.iter().map(|b| b.iter().map(|x| -x).collect::<Vec<_>>()));
    let ker = kernel_basis(&Matrix::from_columns(n, &cols));
    let vectors: Vec<Vec<Scalar>> = ker
        .basis
        .iter()
        .map(|k| {
            let mut w = zero_vec(n);
            for (c, b) in k[..u.dim()].iter().zip(&u.basis) {
                axpy(&mut w, c, b);
            }
            w
        })
        .collect();
    Ok(Subspace::span(n, &vectors))
}

/// Greedy complement of `u` inside `w`: walks `w`'s basis in order (the standard
/// basis when `w` is the ambient space) keeping every vector independent of
/// what has been accumulated so far.
pub fn complement_in(u: &Subspace, w: &Subspace) -> Result<Subspace> {
    if u.ambient_dim != w.ambient_dim {
        return Err(Error::Input("complement: ambient dimensions differ".into()));
    }
    if !u.is_subspace_of(w) {
        return Err(Error::Input("complement: subspace is not contained in the target space".into()));
    }
    let mut ech = Echelon::new(u.ambient_dim);
    for b in &u.basis {
        ech.insert(b);
    }
    let mut basis = Vec::new();
    for b in &w.basis {
        if ech.rank() == w.dim() {
            break;
        }
        if ech.insert(b) {
            basis.push(b.clone());
        }
    }
    Ok(Subspace { ambient_dim: u.ambient_dim, basis })
}

pub fn format_scalar(x: &Scalar) -> String {
    x.to_string()
}
