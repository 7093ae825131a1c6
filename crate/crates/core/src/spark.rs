//! Spark (Kruskal rank) by exhaustive search, and coherence bounds on it.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::frames::Frame;
use crate::linalg::{self, CMatrix, CVector, Tolerance};
use crate::subsets::{Budget, Combinations};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum SparkValue {
    Finite(usize),
    /// All columns are linearly independent.
    Infinite,
}

impl SparkValue {
    pub fn finite(self) -> Option<usize> {
        match self {
            SparkValue::Finite(k) => Some(k),
            SparkValue::Infinite => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SparkResult {
    pub value: SparkValue,
    /// Lexicographically first dependent column set of minimal size.
    pub witness: Option<Vec<usize>>,
    pub columns_checked: u64,
}

/// Column concatenation `(F_1, F_2, ...)` of frames over a common space.
pub fn concatenation(frames: &[&Frame]) -> Result<CMatrix> {
    let dim = frames.first().ok_or(Error::TooFewColumns)?.dim();
    if let Some(f) = frames.iter().find(|f| f.dim() != dim) {
        return Err(Error::DimensionMismatch { expected: dim, found: f.dim() });
    }
    CMatrix::from_columns(dim, frames.iter().flat_map(|f| f.vectors()))
}

/// Smallest `k` such that some `k` columns of `m` are linearly dependent.
///
/// Sizes are scanned in increasing order and subsets of a given size in
/// lexicographic order; the first dependent subset is the witness.
pub fn spark(m: &CMatrix, tol: &Tolerance, budget: &Budget) -> Result<SparkResult> {
    if m.cols() == 0 {
        return Err(Error::TooFewColumns);
    }
    budget.check_instance(m.cols(), m.rows())?;
    let columns = m.columns();
    let mut meter = budget.meter();
    for k in 1..=m.cols() {
        for subset in Combinations::new(m.cols(), k) {
            meter.tick()?;
            let rank = linalg::rank_of(m.rows(), subset.iter().map(|&j| &columns[j]), tol)?;
            if rank < k {
                return Ok(SparkResult {
                    value: SparkValue::Finite(k),
                    witness: Some(subset),
                    columns_checked: meter.used,
                });
            }
        }
    }
    Ok(SparkResult { value: SparkValue::Infinite, witness: None, columns_checked: meter.used })
}

fn unit_columns(m: &CMatrix) -> Result<Vec<CVector>> {
    if m.cols() < 2 {
        return Err(Error::TooFewColumns);
    }
    m.columns()
        .into_iter()
        .map(|c| {
            let n = c.norm();
            if n == 0.0 {
                Err(Error::ZeroVector)
            } else {
                Ok(c.scale((1.0 / n).into()))
            }
        })
        .collect()
}

/// `mu(M)`: largest `|<c_i, c_j>|` over distinct unit-normalized columns.
pub fn dictionary_coherence(m: &CMatrix) -> Result<f64> {
    let cols = unit_columns(m)?;
    let mut mu = 0.0f64;
    for i in 0..cols.len() {
        for j in i + 1..cols.len() {
            mu = mu.max(cols[i].inner(&cols[j]).norm());
        }
    }
    Ok(mu)
}

/// `1 + 1/mu(M)`.
pub fn spark_lower_bound(m: &CMatrix) -> Result<f64> {
    let mu = dictionary_coherence(m)?;
    if mu == 0.0 {
        return Err(Error::ZeroCoherence);
    }
    Ok(1.0 + 1.0 / mu)
}

/// Integer spark bound obtained by rounding `1 + 1/mu` up, with a small
/// allowance so that a bound equal to an integer up to rounding is not
/// pushed to the next one.
pub fn integer_spark_bound(bound: f64) -> usize {
    libm::ceil(bound - 1e-9) as usize
}

/// `M(A, B) = max_{k,j} |<a_k, b_j>|` on the raw (unnormalized) vectors.
pub fn mutual_coherence(a: &Frame, b: &Frame) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), found: b.dim() });
    }
    Ok(a.vectors()
        .iter()
        .flat_map(|x| b.vectors().iter().map(move |y| x.inner(y).norm()))
        .fold(0.0, f64::max))
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoherenceReport {
    /// `mu` of the concatenation `(A, B)`.
    pub dictionary_mu: f64,
    /// `M(A, B)`.
    pub mutual: f64,
    /// `M(A*, B)` with `A*` the canonical dual of `A`; `None` when `A` does not span.
    pub mutual_dual_a_b: Option<f64>,
    /// `M(A*, A)`.
    pub mutual_dual_a_a: Option<f64>,
    /// `1 + 1/mu`; `None` when `mu = 0`.
    pub spark_lower_bound: Option<f64>,
}

pub fn coherence_report(a: &Frame, b: &Frame, tol: &Tolerance) -> Result<CoherenceReport> {
    let m = concatenation(&[a, b])?;
    let dictionary_mu = dictionary_coherence(&m)?;
    let dual = a.canonical_dual(tol).ok();
    Ok(CoherenceReport {
        dictionary_mu,
        mutual: mutual_coherence(a, b)?,
        mutual_dual_a_b: dual.as_ref().map(|d| mutual_coherence(d, b)).transpose()?,
        mutual_dual_a_a: dual.as_ref().map(|d| mutual_coherence(d, a)).transpose()?,
        spark_lower_bound: (dictionary_mu > 0.0).then(|| 1.0 + 1.0 / dictionary_mu),
    })
}
