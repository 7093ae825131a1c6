//! Dense complex kernels with explicit tolerance semantics.
//!
//! Storage is our own row-major [`CMatrix`]; the decompositions are delegated
//! to `nalgebra` (built without `std`). The rank rule is relative to the
//! largest singular value, so every integer this module returns is invariant
//! under rescaling of the input.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::Index;

use nalgebra::DMatrix;
use num_complex::Complex;

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;

/// Tolerances shared by every engine.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    /// Singular values at or below `rel_rank_tol * sigma_max * max(rows, cols)` count as zero.
    pub rel_rank_tol: f64,
    /// Inner products at or below `support_tol * |v| * |x|` count as zero.
    pub support_tol: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { rel_rank_tol: 1e-10, support_tol: 1e-9 }
    }
}

impl Tolerance {
    pub fn new(rel_rank_tol: f64, support_tol: f64) -> Result<Self> {
        let ok = |t: f64| t.is_finite() && (0.0..1.0).contains(&t);
        if !ok(rel_rank_tol) || !ok(support_tol) {
            return Err(Error::InvalidInput("tolerances must lie in [0, 1)"));
        }
        Ok(Tolerance { rel_rank_tol, support_tol })
    }
}

/// A finite complex vector.
#[derive(Debug, Clone, PartialEq)]
pub struct CVector(Vec<C64>);

impl CVector {
    pub fn new(entries: Vec<C64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidInput("vector must have positive dimension"));
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidInput("non-finite vector entry"));
        }
        Ok(CVector(entries))
    }

    /// Builds a vector with zero imaginary parts.
    pub fn from_real(entries: &[f64]) -> Result<Self> {
        Self::new(entries.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    /// The `k`-th standard basis vector of `C^dim`.
    pub fn basis(dim: usize, k: usize) -> Self {
        let mut v = vec![C64::new(0.0, 0.0); dim];
        v[k] = C64::new(1.0, 0.0);
        CVector(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[C64] {
        &self.0
    }

    pub fn norm(&self) -> f64 {
        libm::sqrt(self.norm_sqr())
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `<self, other> = sum conj(self_i) * other_i`.
    pub fn inner(&self, other: &CVector) -> C64 {
        debug_assert_eq!(self.dim(), other.dim());
        self.0.iter().zip(&other.0).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn scale(&self, c: C64) -> CVector {
        CVector(self.0.iter().map(|z| z * c).collect())
    }

    /// Unit-norm representative whose first non-negligible coordinate is real
    /// and positive. Returns `None` for a zero vector.
    pub fn canonical(&self, tol: f64) -> Option<CVector> {
        let norm = self.norm();
        if norm <= tol {
            return None;
        }
        let lead = self.0.iter().find(|z| z.norm() > tol * norm)?;
        let phase = lead.conj() / lead.norm();
        Some(self.scale(phase / norm))
    }
}

impl Index<usize> for CVector {
    type Output = C64;

    fn index(&self, i: usize) -> &C64 {
        &self.0[i]
    }
}

/// Row-major dense complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl CMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::InvalidInput("entry count does not match rows * cols"));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidInput("non-finite matrix entry"));
        }
        Ok(CMatrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix { rows, cols, data: vec![C64::new(0.0, 0.0); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::InvalidInput("ragged rows"));
        }
        let data = rows.iter().flat_map(|r| r.iter().map(|&x| C64::new(x, 0.0))).collect();
        Self::new(rows.len(), cols, data)
    }

    /// Matrix with the given vectors as columns. All vectors must share `dim`.
    pub fn from_columns<'a, I>(dim: usize, columns: I) -> Result<Self>
    where
        I: IntoIterator<Item = &'a CVector>,
    {
        let columns: Vec<&CVector> = columns.into_iter().collect();
        let mut m = Self::zeros(dim, columns.len());
        for (j, c) in columns.iter().enumerate() {
            if c.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: c.dim() });
            }
            for i in 0..dim {
                m.data[i * m.cols + j] = c[i];
            }
        }
        Ok(m)
    }

    /// Matrix whose rows are the conjugate transposes `v*` of the given
    /// vectors; its nullspace is the orthogonal complement of their span.
    pub fn from_adjoint_rows<'a, I>(dim: usize, vectors: I) -> Result<Self>
    where
        I: IntoIterator<Item = &'a CVector>,
    {
        Ok(Self::from_columns(dim, vectors)?.adjoint())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, z: C64) {
        self.data[i * self.cols + j] = z;
    }

    pub fn column(&self, j: usize) -> CVector {
        CVector((0..self.rows).map(|i| self.get(i, j)).collect())
    }

    pub fn columns(&self) -> Vec<CVector> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn adjoint(&self) -> CMatrix {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).conj();
            }
        }
        t
    }

    pub fn mul_vec(&self, x: &CVector) -> CVector {
        debug_assert_eq!(self.cols, x.dim());
        CVector(
            (0..self.rows)
                .map(|i| (0..self.cols).map(|j| self.get(i, j) * x[j]).sum())
                .collect(),
        )
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hcat(&self, other: &CMatrix) -> Result<CMatrix> {
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch { expected: self.rows, found: other.rows });
        }
        let cols = self.cols + other.cols;
        let mut m = Self::zeros(self.rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.data[i * cols + j] = self.get(i, j);
            }
            for j in 0..other.cols {
                m.data[i * cols + self.cols + j] = other.get(i, j);
            }
        }
        Ok(m)
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entry modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        debug_assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    fn to_na(&self) -> DMatrix<C64> {
        DMatrix::from_row_slice(self.rows, self.cols, &self.data)
    }

    fn from_na(m: &DMatrix<C64>) -> CMatrix {
        let mut out = Self::zeros(m.nrows(), m.ncols());
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                out.data[i * m.ncols() + j] = m[(i, j)];
            }
        }
        out
    }
}

fn rank_threshold(sigma_max: f64, rows: usize, cols: usize, tol: &Tolerance) -> f64 {
    tol.rel_rank_tol * sigma_max * rows.max(cols) as f64
}

fn singular_values(m: &CMatrix) -> Vec<f64> {
    if m.rows == 0 || m.cols == 0 {
        return Vec::new();
    }
    m.to_na().singular_values().iter().copied().collect()
}

/// Number of singular values above the relative threshold; 0 for a zero or
/// empty matrix.
pub fn numerical_rank(m: &CMatrix, tol: &Tolerance) -> usize {
    let sv = singular_values(m);
    let sigma_max = sv.iter().copied().fold(0.0, f64::max);
    if sigma_max == 0.0 {
        return 0;
    }
    let cut = rank_threshold(sigma_max, m.rows, m.cols, tol);
    sv.iter().filter(|&&s| s > cut).count()
}

/// Orthonormal basis (as columns) of `{x : M x = 0}` under the rank rule of
/// [`numerical_rank`].
pub fn nullspace_basis(m: &CMatrix, tol: &Tolerance) -> CMatrix {
    let n = m.cols;
    if n == 0 {
        return CMatrix::zeros(0, 0);
    }
    if m.rows == 0 || m.max_abs() == 0.0 {
        return CMatrix::identity(n);
    }
    // Zero-pad to at least n rows so the thin SVD yields a full n x n V.
    let padded_rows = m.rows.max(n);
    let mut padded = DMatrix::<C64>::zeros(padded_rows, n);
    for i in 0..m.rows {
        for j in 0..n {
            padded[(i, j)] = m.get(i, j);
        }
    }
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("requested V^T");
    let sigma_max = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let cut = rank_threshold(sigma_max, m.rows, m.cols, tol);
    let null: Vec<usize> = (0..n).filter(|&k| svd.singular_values[k] <= cut).collect();
    let mut basis = CMatrix::zeros(n, null.len());
    for (c, &k) in null.iter().enumerate() {
        for i in 0..n {
            basis.set(i, c, v_t[(k, i)].conj());
        }
    }
    basis
}

fn check_hermitian(h: &CMatrix, tol: &Tolerance) -> Result<()> {
    if h.rows != h.cols {
        return Err(Error::InvalidInput("matrix must be square"));
    }
    if h.max_abs_diff(&h.adjoint()) > tol.rel_rank_tol * h.max_abs() {
        return Err(Error::NotHermitian);
    }
    Ok(())
}

/// Real eigenvalues of a Hermitian matrix in ascending order.
pub fn hermitian_eigenvalues(h: &CMatrix, tol: &Tolerance) -> Result<Vec<f64>> {
    check_hermitian(h, tol)?;
    if h.rows == 0 {
        return Ok(Vec::new());
    }
    let mut ev: Vec<f64> = h.to_na().symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    Ok(ev)
}

/// Inverse of a Hermitian positive-definite matrix via its eigendecomposition.
pub(crate) fn hermitian_inverse(h: &CMatrix, tol: &Tolerance) -> Result<CMatrix> {
    check_hermitian(h, tol)?;
    let eig = h.to_na().symmetric_eigen();
    let lmax = eig.eigenvalues.iter().copied().fold(0.0, f64::max);
    if eig.eigenvalues.iter().any(|&l| l <= h.rows as f64 * tol.rel_rank_tol * lmax) {
        return Err(Error::NotAFrame);
    }
    let q = &eig.eigenvectors;
    let inv_diag = DMatrix::from_diagonal(&eig.eigenvalues.map(|l| C64::new(1.0 / l, 0.0)));
    Ok(CMatrix::from_na(&(q * inv_diag * q.adjoint())))
}

/// Dimension of `span(U) ∩ span(V)`, computed as
/// `rank U + rank V - rank [U | V]`.
pub fn span_intersection_dim(u: &CMatrix, v: &CMatrix, tol: &Tolerance) -> Result<usize> {
    let joint = u.hcat(v)?;
    let sum = numerical_rank(u, tol) + numerical_rank(v, tol);
    Ok(sum.saturating_sub(numerical_rank(&joint, tol)))
}

/// Rank of a family of vectors of common dimension `dim`.
pub fn rank_of<'a, I>(dim: usize, vectors: I, tol: &Tolerance) -> Result<usize>
where
    I: IntoIterator<Item = &'a CVector>,
{
    Ok(numerical_rank(&CMatrix::from_columns(dim, vectors)?, tol))
}
