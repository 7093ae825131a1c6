//! Complement-rank search shared by the two-frame and multi-frame engines.
//!
//! For frames `F_1..F_n` over `C^d` a nonzero `x` has all its nonzero
//! coefficients in `F_i` inside `S_i` for every `i` exactly when `x` is
//! orthogonal to every complement vector, i.e. when the complement vectors
//! `{v : v in F_i, index not in S_i}` have rank `< d`. For tight frames the
//! coefficient condition is the same as `sum_{k in S_i} |<x, v_k>|^2 = c_i |x|^2`.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::frames::Frame;
use crate::linalg::{self, CMatrix, CVector, Tolerance};
use crate::subsets::{complement, Budget, Combinations, Meter};

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Found {
    pub order: usize,
    pub selection: Vec<Vec<usize>>,
    pub witness: CVector,
}

pub(crate) fn common_dim(frames: &[&Frame]) -> Result<usize> {
    let dim = frames.first().ok_or(Error::TooFewFrames { found: 0 })?.dim();
    match frames.iter().find(|f| f.dim() != dim) {
        Some(f) => Err(Error::DimensionMismatch { expected: dim, found: f.dim() }),
        None => Ok(dim),
    }
}

/// Vectors of each frame whose index is NOT selected.
fn complement_vectors<'a>(frames: &[&'a Frame], selection: &[Vec<usize>]) -> Vec<&'a CVector> {
    frames
        .iter()
        .zip(selection)
        .flat_map(|(f, s)| complement(s, f.len()).into_iter().map(move |k| f.vector(k)))
        .collect()
}

/// Unit vector orthogonal to all of `vectors`, in canonical phase, if any.
pub(crate) fn annihilating_state(dim: usize, vectors: &[&CVector], tol: &Tolerance) -> Result<Option<CVector>> {
    if vectors.is_empty() {
        return Ok(Some(CVector::basis(dim, 0)));
    }
    let rows = CMatrix::from_adjoint_rows(dim, vectors.iter().copied())?;
    let ns = linalg::nullspace_basis(&rows, tol);
    if ns.cols() == 0 {
        return Ok(None);
    }
    Ok(ns.column(0).canonical(tol.support_tol))
}

/// Calls `visit` on every selection with `|S_i| = sizes[i]`, in
/// lexicographic order of `(S_1, S_2, ...)`.
fn for_each_product<F>(sizes: &[usize], lens: &[usize], prefix: &mut Vec<Vec<usize>>, visit: &mut F) -> Result<()>
where
    F: FnMut(&[Vec<usize>]) -> Result<()>,
{
    let i = prefix.len();
    if i == sizes.len() {
        return visit(prefix);
    }
    for s in Combinations::new(lens[i], sizes[i]) {
        prefix.push(s);
        for_each_product(sizes, lens, prefix, visit)?;
        prefix.pop();
    }
    Ok(())
}

/// Calls `visit` on every size vector with `lo[i] <= a_i <= hi[i]` and
/// `sum a_i = total`.
fn for_each_composition<F>(total: usize, lo: &[usize], hi: &[usize], acc: &mut Vec<usize>, visit: &mut F) -> Result<()>
where
    F: FnMut(&[usize]) -> Result<()>,
{
    let i = acc.len();
    if i == lo.len() {
        return if total == 0 { visit(acc) } else { Ok(()) };
    }
    let rest_lo: usize = lo[i + 1..].iter().sum();
    let rest_hi: usize = hi[i + 1..].iter().sum();
    for a in lo[i]..=hi[i].min(total) {
        let left = total - a;
        if left < rest_lo || left > rest_hi {
            continue;
        }
        acc.push(a);
        for_each_composition(left, lo, hi, acc, visit)?;
        acc.pop();
    }
    Ok(())
}

/// Visits every selection with per-frame sizes in `[lo_i, hi_i]` summing to
/// `total`, one tick of `meter` each.
pub(crate) fn for_each_selection<V>(
    frames: &[&Frame],
    total: usize,
    lo: &[usize],
    hi: &[usize],
    meter: &mut Meter,
    mut visit: V,
) -> Result<()>
where
    V: FnMut(&[Vec<usize>]) -> Result<()>,
{
    let lens: Vec<usize> = frames.iter().map(|f| f.len()).collect();
    for_each_composition(total, lo, hi, &mut Vec::new(), &mut |sizes: &[usize]| {
        for_each_product(sizes, &lens, &mut Vec::new(), &mut |sel: &[Vec<usize>]| {
            meter.tick()?;
            visit(sel)
        })
    })
}

/// Lexicographically least selection (as in [`for_each_selection`]) accepted
/// by `pred`.
pub(crate) fn least_selection<P>(
    frames: &[&Frame],
    total: usize,
    lo: &[usize],
    hi: &[usize],
    meter: &mut Meter,
    mut pred: P,
) -> Result<Option<Vec<Vec<usize>>>>
where
    P: FnMut(&[Vec<usize>]) -> Result<bool>,
{
    let mut best: Option<Vec<Vec<usize>>> = None;
    for_each_selection(frames, total, lo, hi, meter, |sel| {
        if best.as_deref().is_some_and(|b| b <= sel) {
            return Ok(());
        }
        if pred(sel)? {
            best = Some(sel.to_vec());
        }
        Ok(())
    })?;
    Ok(best)
}

/// Minimal `sum |S_i|` over selections with every `S_i` nonempty whose
/// complement vectors fail to span `C^d`.
pub(crate) fn subset_rank_search(frames: &[&Frame], tol: &Tolerance, budget: &Budget) -> Result<Found> {
    let dim = common_dim(frames)?;
    let total: usize = frames.iter().map(|f| f.len()).sum();
    budget.check_instance(total, dim)?;
    let mut meter = budget.meter();
    let lo = alloc::vec![1; frames.len()];
    let hi: Vec<usize> = frames.iter().map(|f| f.len()).collect();
    for s in frames.len()..=total {
        let hit = least_selection(frames, s, &lo, &hi, &mut meter, |sel| {
            let comp = complement_vectors(frames, sel);
            Ok(linalg::rank_of(dim, comp.iter().copied(), tol)? < dim)
        })?;
        if let Some(selection) = hit {
            let comp = complement_vectors(frames, &selection);
            let witness = annihilating_state(dim, &comp, tol)?
                .expect("complement rank below dim has a nontrivial nullspace");
            return Ok(Found { order: s, selection, witness });
        }
    }
    unreachable!("selecting every index leaves no complement vectors")
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn compositions_respect_bounds() {
        let mut seen = Vec::new();
        for_each_composition(3, &[1, 1], &[2, 3], &mut Vec::new(), &mut |a: &[usize]| {
            seen.push(a.to_vec());
            Ok(())
        })
        .unwrap();
        assert_eq!(seen, vec![vec![1, 2], vec![2, 1]]);
    }

    #[test]
    fn products_are_lexicographic() {
        let mut seen = Vec::new();
        for_each_product(&[1, 1], &[2, 2], &mut Vec::new(), &mut |s: &[Vec<usize>]| {
            seen.push(s.to_vec());
            Ok(())
        })
        .unwrap();
        assert_eq!(
            seen,
            vec![
                vec![vec![0], vec![0]],
                vec![vec![0], vec![1]],
                vec![vec![1], vec![0]],
                vec![vec![1], vec![1]]
            ]
        );
    }
}
