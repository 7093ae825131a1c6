//! s-order incompatibility of `n >= 2` frames and the pairwise bound
//! `(1/2) sum_{i<j} s_ij <= s`.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::frames::Frame;
use crate::incompat::{self, Method};
use crate::linalg::{CVector, Tolerance};
use crate::oracle;
use crate::search;
use crate::subsets::Budget;

/// Which search computes an order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Engine {
    /// Complement-rank search; every frame must be tight.
    SubsetRank,
    /// Support-minimum oracle; any frames.
    SupportOracle,
    /// `SubsetRank` when every frame involved is tight, else `SupportOracle`.
    Auto,
}

/// One index set per frame, zero-based and sorted.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct MultiSelection {
    pub subsets: Vec<Vec<usize>>,
}

impl MultiSelection {
    pub fn total(&self) -> usize {
        self.subsets.iter().map(Vec::len).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairEntry {
    pub i: usize,
    pub j: usize,
    pub order: usize,
    pub method: Method,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairwiseTable {
    pub n: usize,
    /// Entries for `i < j` in row-major order.
    pub entries: Vec<PairEntry>,
}

impl PairwiseTable {
    /// `s_ij`, symmetric; `None` on the diagonal.
    pub fn order(&self, i: usize, j: usize) -> Option<usize> {
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        self.entries.iter().find(|e| e.i == i && e.j == j).map(|e| e.order)
    }

    /// `(1/2) sum_{i<j} s_ij`.
    pub fn half_sum(&self) -> f64 {
        self.entries.iter().map(|e| e.order as f64).sum::<f64>() / 2.0
    }

    /// Square matrix view with zeros on the diagonal.
    pub fn matrix(&self) -> Vec<Vec<usize>> {
        (0..self.n).map(|i| (0..self.n).map(|j| self.order(i, j).unwrap_or(0)).collect()).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MultiResult {
    pub order: usize,
    pub selection: MultiSelection,
    pub witness: CVector,
    pub method: Method,
    /// `n_{F_i}(witness)` for each frame.
    pub witness_supports: Vec<usize>,
    pub pairwise: PairwiseTable,
    /// `(1/2) sum_{i<j} s_ij`.
    pub bound_lhs: f64,
    /// `bound_lhs <= order`.
    pub bound_holds: bool,
    /// `bound_lhs < order`.
    pub strict: bool,
}

fn all_tight(frames: &[&Frame], tol: &Tolerance) -> Result<Option<usize>> {
    for (i, f) in frames.iter().enumerate() {
        if f.tight_constant(tol)?.is_none() {
            return Ok(Some(i));
        }
    }
    Ok(None)
}

fn resolve(engine: Engine, frames: &[&Frame], tol: &Tolerance) -> Result<Method> {
    let loose = all_tight(frames, tol)?;
    match (engine, loose) {
        (Engine::SupportOracle, _) | (Engine::Auto, Some(_)) => Ok(Method::SupportOracle),
        (Engine::SubsetRank, Some(i)) => Err(Error::NotTight { frame: i }),
        (_, None) => Ok(Method::SubsetRank),
    }
}

/// Minimal `sum_i |S_i|` (all `S_i` nonempty) such that some nonzero state
/// has its coefficients in every `F_i` supported inside `S_i`; equivalently
/// `min_x sum_i n_{F_i}(x)`.
pub fn order_of(frames: &[&Frame], tol: &Tolerance, budget: &Budget, engine: Engine) -> Result<(usize, MultiSelection, CVector, Method)> {
    if frames.len() < 2 {
        return Err(Error::TooFewFrames { found: frames.len() });
    }
    search::common_dim(frames)?;
    let method = resolve(engine, frames, tol)?;
    Ok(match method {
        Method::SubsetRank => {
            let f = search::subset_rank_search(frames, tol, budget)?;
            (f.order, MultiSelection { subsets: f.selection }, f.witness, method)
        }
        Method::SupportOracle => {
            let h = oracle::support_minimum(frames, tol, budget)?;
            (h.order, MultiSelection { subsets: h.supports }, h.witness, method)
        }
    })
}

/// The complement-rank search without the tightness check, for cross-checking
/// the oracle on frames that are not tight.
pub fn subset_rank_order(frames: &[&Frame], tol: &Tolerance, budget: &Budget) -> Result<(usize, MultiSelection, CVector)> {
    if frames.len() < 2 {
        return Err(Error::TooFewFrames { found: frames.len() });
    }
    let f = search::subset_rank_search(frames, tol, budget)?;
    Ok((f.order, MultiSelection { subsets: f.selection }, f.witness))
}

/// `s_ij` for every pair, each computed with the two-frame engine.
pub fn pairwise_orders(frames: &[&Frame], tol: &Tolerance, budget: &Budget, engine: Engine) -> Result<PairwiseTable> {
    if frames.len() < 2 {
        return Err(Error::TooFewFrames { found: frames.len() });
    }
    search::common_dim(frames)?;
    let mut entries = Vec::new();
    for i in 0..frames.len() {
        for j in i + 1..frames.len() {
            let pair = [frames[i], frames[j]];
            let r = match resolve(engine, &pair, tol)? {
                Method::SubsetRank => incompat::subset_rank_order(pair[0], pair[1], tol, budget)?,
                Method::SupportOracle => incompat::min_support_sum(pair[0], pair[1], tol, budget)?,
            };
            entries.push(PairEntry { i, j, order: r.order, method: r.method });
        }
    }
    Ok(PairwiseTable { n: frames.len(), entries })
}

pub fn multi_incompatibility_order(frames: &[&Frame], tol: &Tolerance, budget: &Budget, engine: Engine) -> Result<MultiResult> {
    let (order, selection, witness, method) = order_of(frames, tol, budget, engine)?;
    let witness_supports = frames.iter().map(|f| f.support_count(&witness, tol)).collect::<Result<Vec<_>>>()?;
    let pairwise = pairwise_orders(frames, tol, budget, engine)?;
    let bound_lhs = pairwise.half_sum();
    Ok(MultiResult {
        order,
        selection,
        witness,
        method,
        witness_supports,
        pairwise,
        bound_lhs,
        bound_holds: bound_lhs <= order as f64,
        strict: bound_lhs < order as f64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frames::{fourier_basis, standard_basis};
    use alloc::vec;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn identity_triple_is_an_equality_case() {
        let id = standard_basis(2, &tol()).unwrap();
        let r = multi_incompatibility_order(&[&id, &id, &id], &tol(), &Budget::default(), Engine::Auto).unwrap();
        assert_eq!(r.order, 3);
        assert_eq!(r.method, Method::SubsetRank);
        assert_eq!(r.witness_supports, vec![1, 1, 1]);
        assert!((r.witness.entries()[0].re - 1.0).abs() < 1e-12);
        assert_eq!(r.pairwise.matrix(), vec![vec![0, 2, 2], vec![2, 0, 2], vec![2, 2, 0]]);
        assert_eq!(r.bound_lhs, 3.0);
        assert!(r.bound_holds && !r.strict);
    }

    #[test]
    fn identity_fourier_identity() {
        let id = standard_basis(2, &tol()).unwrap();
        let f = fourier_basis(2, &tol()).unwrap();
        let frames = [&id, &f, &id];
        let rank = multi_incompatibility_order(&frames, &tol(), &Budget::default(), Engine::SubsetRank).unwrap();
        let oracle = multi_incompatibility_order(&frames, &tol(), &Budget::default(), Engine::SupportOracle).unwrap();
        // e1 has supports (1, 2, 1); nothing does better since F shares no direction with I
        assert_eq!(rank.order, 4);
        assert_eq!(oracle.order, 4);
        assert_eq!(rank.pairwise.order(0, 1), Some(3));
        assert_eq!(rank.pairwise.order(0, 2), Some(2));
        assert_eq!(rank.bound_lhs, 4.0);
        assert!(rank.bound_holds && !rank.strict);
    }

    #[test]
    fn pairwise_table_is_symmetric() {
        let id = standard_basis(2, &tol()).unwrap();
        let f = fourier_basis(2, &tol()).unwrap();
        let t = pairwise_orders(&[&id, &id, &f], &tol(), &Budget::default(), Engine::Auto).unwrap();
        let m = t.matrix();
        for (i, row) in m.iter().enumerate() {
            assert_eq!(t.order(i, i), None);
            for (j, v) in row.iter().enumerate() {
                assert_eq!(*v, m[j][i]);
            }
        }
        assert_eq!(t.order(1, 0), Some(2));
    }

    #[test]
    fn error_paths() {
        let id = standard_basis(2, &tol()).unwrap();
        assert_eq!(
            multi_incompatibility_order(&[&id], &tol(), &Budget::default(), Engine::Auto),
            Err(Error::TooFewFrames { found: 1 })
        );
        let id3 = standard_basis(3, &tol()).unwrap();
        assert!(matches!(
            multi_incompatibility_order(&[&id, &id, &id3], &tol(), &Budget::default(), Engine::Auto),
            Err(Error::DimensionMismatch { .. })
        ));
        let loose = Frame::from_real("L", &[&[1.0, 0.0], &[0.0, 2.0]], &tol()).unwrap();
        assert_eq!(
            multi_incompatibility_order(&[&id, &loose, &id], &tol(), &Budget::default(), Engine::SubsetRank),
            Err(Error::NotTight { frame: 1 })
        );
        let many: Vec<&Frame> = (0..13).map(|_| &id).collect();
        assert!(matches!(
            multi_incompatibility_order(&many, &tol(), &Budget::default(), Engine::Auto),
            Err(Error::BudgetExceeded(_))
        ));
    }
}
