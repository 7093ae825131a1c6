//! Frames, frame bounds, canonical duals and rank-one POVMs.
//!
//! Bounds follow the frame-operator convention: for a tight frame with
//! constant `c`, `sum_k |<x, v_k>|^2 = c |x|^2` and `S = sum_k v_k v_k* = c I`.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, CVector, Tolerance, C64};
use crate::rng;

/// Relative eigenvalue spread under which a frame counts as tight.
pub const TIGHT_TOL: f64 = 1e-9;

/// Maximum-norm slack allowed in `sum_i mu_i mu_i* = I`.
pub const POVM_TOL: f64 = 1e-10;

/// An ordered family of nonzero vectors in `C^dim`.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    label: String,
    dim: usize,
    vectors: Vec<CVector>,
    operator: CMatrix,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameBounds {
    pub lower: f64,
    pub upper: f64,
    pub tight: bool,
    pub tight_constant: Option<f64>,
}

impl Frame {
    pub fn new(label: impl Into<String>, vectors: Vec<CVector>, tol: &Tolerance) -> Result<Self> {
        let dim = vectors.first().ok_or(Error::InvalidInput("a frame needs at least one vector"))?.dim();
        for v in &vectors {
            if v.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: v.dim() });
            }
            if v.norm() <= tol.support_tol {
                return Err(Error::ZeroVector);
            }
        }
        let operator = outer_sum(dim, &vectors);
        Ok(Frame { label: label.into(), dim, vectors, operator })
    }

    /// Convenience constructor for frames with real coordinates.
    pub fn from_real(label: impl Into<String>, vectors: &[&[f64]], tol: &Tolerance) -> Result<Self> {
        let vectors = vectors.iter().map(|v| CVector::from_real(v)).collect::<Result<Vec<_>>>()?;
        Self::new(label, vectors, tol)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[CVector] {
        &self.vectors
    }

    pub fn vector(&self, k: usize) -> &CVector {
        &self.vectors[k]
    }

    /// `S = sum_k v_k v_k*`, computed once at construction.
    pub fn frame_operator(&self) -> &CMatrix {
        &self.operator
    }

    pub fn frame_bounds(&self, tol: &Tolerance) -> Result<FrameBounds> {
        let ev = linalg::hermitian_eigenvalues(&self.operator, tol)?;
        let (lower, upper) = (ev[0], ev[ev.len() - 1]);
        if lower <= self.dim as f64 * tol.rel_rank_tol * upper {
            return Err(Error::NotAFrame);
        }
        let tight = upper - lower <= TIGHT_TOL * upper;
        Ok(FrameBounds { lower, upper, tight, tight_constant: tight.then(|| (lower + upper) / 2.0) })
    }

    /// Tight constant, or `None` when the frame is not tight.
    pub fn tight_constant(&self, tol: &Tolerance) -> Result<Option<f64>> {
        Ok(self.frame_bounds(tol)?.tight_constant)
    }

    /// The canonical dual frame `{S^{-1} v_k}`.
    pub fn canonical_dual(&self, tol: &Tolerance) -> Result<Frame> {
        self.frame_bounds(tol)?;
        let inv = linalg::hermitian_inverse(&self.operator, tol)?;
        let vectors = self.vectors.iter().map(|v| inv.mul_vec(v)).collect();
        Frame::new(format!("{}*", self.label), vectors, tol)
    }

    /// Rescales a tight frame with constant `c` by `1/sqrt(c)`.
    pub fn to_povm(&self, tol: &Tolerance) -> Result<Povm> {
        let c = self.tight_constant(tol)?.ok_or(Error::NotTight { frame: 0 })?;
        let s = C64::new(1.0 / libm::sqrt(c), 0.0);
        Povm::new(self.vectors.iter().map(|v| v.scale(s)).collect())
    }

    /// Indices `k` with `|<v_k, x>| > support_tol * |v_k| * |x|`.
    pub fn support(&self, x: &CVector, tol: &Tolerance) -> Result<Vec<usize>> {
        if x.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: x.dim() });
        }
        let xn = x.norm();
        if xn <= tol.support_tol {
            return Err(Error::ZeroVector);
        }
        Ok((0..self.len())
            .filter(|&k| {
                let v = &self.vectors[k];
                v.inner(x).norm() > tol.support_tol * v.norm() * xn
            })
            .collect())
    }

    /// `n_F(x)`, the number of frame coefficients of `x` that are nonzero.
    pub fn support_count(&self, x: &CVector, tol: &Tolerance) -> Result<usize> {
        Ok(self.support(x, tol)?.len())
    }

    /// `sum_{k in idx} |<x, v_k>|^2`.
    pub fn energy<I: IntoIterator<Item = usize>>(&self, x: &CVector, idx: I) -> f64 {
        idx.into_iter().map(|k| self.vectors[k].inner(x).norm_sqr()).fold(0.0, |s, e| s + e)
    }

    pub fn scaled(&self, c: C64, tol: &Tolerance) -> Result<Frame> {
        Frame::new(self.label.clone(), self.vectors.iter().map(|v| v.scale(c)).collect(), tol)
    }
}

fn outer_sum(dim: usize, vectors: &[CVector]) -> CMatrix {
    let mut s = CMatrix::zeros(dim, dim);
    for v in vectors {
        for i in 0..dim {
            for j in 0..dim {
                s.set(i, j, s.get(i, j) + v[i] * v[j].conj());
            }
        }
    }
    s
}

/// A rank-one POVM stored through its measurement vectors `mu_i`; the
/// effects are `Q_i = mu_i mu_i*`.
#[derive(Debug, Clone, PartialEq)]
pub struct Povm {
    dim: usize,
    vectors: Vec<CVector>,
}

impl Povm {
    pub fn new(vectors: Vec<CVector>) -> Result<Self> {
        let dim = vectors.first().ok_or(Error::InvalidInput("empty POVM"))?.dim();
        if vectors.iter().any(|v| v.dim() != dim) {
            return Err(Error::InvalidInput("measurement vectors of mixed dimension"));
        }
        let povm = Povm { dim, vectors };
        if povm.residual() > POVM_TOL {
            return Err(Error::InvalidInput("effects do not sum to the identity"));
        }
        Ok(povm)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn measurement_vectors(&self) -> &[CVector] {
        &self.vectors
    }

    pub fn effects_sum(&self) -> CMatrix {
        outer_sum(self.dim, &self.vectors)
    }

    /// `max |(sum_i Q_i - I)_{jk}|`.
    pub fn residual(&self) -> f64 {
        self.effects_sum().max_abs_diff(&CMatrix::identity(self.dim))
    }

    /// Outcome probabilities `p(i) = |<mu_i, state>|^2` for a unit state.
    pub fn measurement_probabilities(&self, state: &CVector) -> Result<Vec<f64>> {
        if state.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: state.dim() });
        }
        let norm = state.norm();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::NotNormalized { norm });
        }
        Ok(self.vectors.iter().map(|mu| mu.inner(state).norm_sqr()).collect())
    }
}

/// The standard basis of `C^dim`.
pub fn standard_basis(dim: usize, tol: &Tolerance) -> Result<Frame> {
    Frame::new("identity", (0..dim).map(|k| CVector::basis(dim, k)).collect(), tol)
}

/// Columns of the unitary DFT matrix, `F_{jk} = exp(2 pi i jk / d) / sqrt(d)`.
pub fn fourier_basis(dim: usize, tol: &Tolerance) -> Result<Frame> {
    let scale = 1.0 / libm::sqrt(dim as f64);
    let vectors = (0..dim)
        .map(|k| {
            let entries = (0..dim)
                .map(|j| {
                    let phase = 2.0 * core::f64::consts::PI * ((j * k) % dim) as f64 / dim as f64;
                    C64::new(libm::cos(phase) * scale, libm::sin(phase) * scale)
                })
                .collect();
            CVector::new(entries)
        })
        .collect::<Result<Vec<_>>>()?;
    Frame::new("fourier", vectors, tol)
}

/// Haar-distributed unitary of size `n` (Gram-Schmidt on a complex Ginibre
/// matrix, which fixes the phases of `R`'s diagonal to be positive).
fn haar_unitary(n: usize, rng: &mut rng::Rng) -> Vec<Vec<C64>> {
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(n);
    while cols.len() < n {
        let mut v = rng::complex_gaussian(rng, n);
        for _ in 0..2 {
            for q in &cols {
                let proj: C64 = q.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                v.iter_mut().zip(q).for_each(|(x, a)| *x -= proj * a);
            }
        }
        let norm = libm::sqrt(v.iter().map(|z| z.norm_sqr()).sum::<f64>());
        if norm > 1e-8 {
            v.iter_mut().for_each(|z| *z /= norm);
            cols.push(v);
        }
    }
    cols
}

/// `n` vectors in `C^d` with frame operator equal to the identity: the
/// columns of the first `d` rows of a Haar unitary.
pub fn random_parseval_frame(dim: usize, n: usize, seed: u64, tol: &Tolerance) -> Result<Frame> {
    if dim == 0 || n < dim {
        return Err(Error::InvalidShape { dim, count: n });
    }
    let mut rng = rng::seeded(seed);
    let u = haar_unitary(n, &mut rng);
    // u[k] is column k of U; take its first d entries.
    let vectors = u.iter().map(|col| CVector::new(col[..dim].to_vec())).collect::<Result<Vec<_>>>()?;
    Frame::new(format!("parseval-{dim}x{n}-{seed}"), vectors, tol)
}

/// A Haar-random orthonormal basis of `C^dim`.
pub fn random_orthonormal_basis(dim: usize, seed: u64, tol: &Tolerance) -> Result<Frame> {
    let mut f = random_parseval_frame(dim, dim, seed, tol)?;
    f.label = format!("orthonormal-{dim}-{seed}");
    Ok(f)
}
