//! Support-minimum oracle: `min_{x != 0} sum_i n_{F_i}(x)` for arbitrary
//! (not necessarily tight) frames.
//!
//! The minimizer's zero pattern `Z` (the vectors orthogonal to it) spans a
//! proper subspace, and any nonzero `x` orthogonal to `span Z` vanishes on at
//! least `Z`. So the minimum is found by enumerating every vector family of
//! rank `< d`, taking one state orthogonal to it, and counting supports
//! directly. Spans are tracked with Gram-Schmidt rather than SVD so this path
//! shares no numerics with the complement-rank engine.

use alloc::vec::Vec;

use crate::error::Result;
use crate::frames::Frame;
use crate::linalg::{CVector, Tolerance, C64};
use crate::search::common_dim;
use crate::subsets::{Budget, Meter};

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct OracleHit {
    pub order: usize,
    pub witness: CVector,
    /// Support of the witness in each frame.
    pub supports: Vec<Vec<usize>>,
}

/// Orthonormal basis built one vector at a time.
#[derive(Clone)]
struct Span {
    basis: Vec<Vec<C64>>,
}

impl Span {
    /// Component of `v` orthogonal to the span (two Gram-Schmidt passes).
    fn residual(&self, v: &[C64]) -> Vec<C64> {
        let mut r = v.to_vec();
        for _ in 0..2 {
            for q in &self.basis {
                let p: C64 = q.iter().zip(&r).map(|(a, b)| a.conj() * b).sum();
                r.iter_mut().zip(q).for_each(|(x, a)| *x -= p * a);
            }
        }
        r
    }

    fn push_residual(&mut self, mut r: Vec<C64>) {
        let n = norm(&r);
        r.iter_mut().for_each(|z| *z /= n);
        self.basis.push(r);
    }

    /// Unit vector orthogonal to the span: the projected standard basis
    /// vector with the largest residual.
    fn orthogonal_state(&self, dim: usize) -> Vec<C64> {
        let best = (0..dim)
            .map(|k| {
                let mut e = alloc::vec![C64::new(0.0, 0.0); dim];
                e[k] = C64::new(1.0, 0.0);
                self.residual(&e)
            })
            .max_by(|a, b| norm(a).total_cmp(&norm(b)))
            .expect("dim >= 1");
        let n = norm(&best);
        best.into_iter().map(|z| z / n).collect()
    }
}

fn norm(v: &[C64]) -> f64 {
    libm::sqrt(v.iter().map(|z| z.norm_sqr()).sum())
}

struct Search<'a> {
    frames: &'a [&'a Frame],
    /// (frame, index) for every vector, frame-major.
    items: Vec<(usize, usize)>,
    dim: usize,
    tol: &'a Tolerance,
    meter: Meter,
    best: Option<OracleHit>,
}

impl Search<'_> {
    fn visit(&mut self, pos: usize, span: &Span) -> Result<()> {
        if pos == self.items.len() {
            return self.leaf(span);
        }
        let (f, k) = self.items[pos];
        let v = self.frames[f].vector(k).entries();
        let r = self.residual_if_new(span, v);
        match r {
            // already in the span: any state orthogonal to the span is orthogonal to v
            None => self.visit(pos + 1, span),
            Some(r) => {
                if span.basis.len() + 1 < self.dim {
                    let mut grown = span.clone();
                    grown.push_residual(r);
                    self.visit(pos + 1, &grown)?;
                }
                self.visit(pos + 1, span)
            }
        }
    }

    fn residual_if_new(&self, span: &Span, v: &[C64]) -> Option<Vec<C64>> {
        let r = span.residual(v);
        (norm(&r) > self.tol.support_tol * norm(v)).then_some(r)
    }

    fn leaf(&mut self, span: &Span) -> Result<()> {
        self.meter.tick()?;
        let x = CVector::new(span.orthogonal_state(self.dim))?;
        let supports = self.frames.iter().map(|f| f.support(&x, self.tol)).collect::<Result<Vec<_>>>()?;
        let order = supports.iter().map(Vec::len).sum();
        if self.best.as_ref().is_none_or(|b| order < b.order) {
            let witness = x.canonical(self.tol.support_tol).expect("unit vector");
            self.best = Some(OracleHit { order, witness, supports });
        }
        Ok(())
    }
}

pub(crate) fn support_minimum(frames: &[&Frame], tol: &Tolerance, budget: &Budget) -> Result<OracleHit> {
    let dim = common_dim(frames)?;
    let items: Vec<(usize, usize)> =
        frames.iter().enumerate().flat_map(|(f, fr)| (0..fr.len()).map(move |k| (f, k))).collect();
    budget.check_instance(items.len(), dim)?;
    let mut search = Search { frames, items, dim, tol, meter: budget.meter(), best: None };
    search.visit(0, &Span { basis: Vec::new() })?;
    Ok(search.best.expect("the empty pattern always yields a leaf"))
}
