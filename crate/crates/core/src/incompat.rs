//! Two-frame s-order incompatibility, the support-minimum oracle, the
//! minimal reconstruction number and the frame-bound uncertainty constants.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::frames::Frame;
use crate::linalg::{self, CVector, Tolerance};
use crate::oracle;
use crate::rng;
use crate::search::{self, for_each_selection, least_selection};
use crate::subsets::{complement, Budget};

/// A pair `(S, T)` of index sets into frames of sizes `m` and `n`.
/// Indices are zero-based and kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SubsetSelection {
    s: Vec<usize>,
    t: Vec<usize>,
    m: usize,
    n: usize,
}

impl SubsetSelection {
    pub fn new(mut s: Vec<usize>, mut t: Vec<usize>, m: usize, n: usize) -> Result<Self> {
        s.sort_unstable();
        s.dedup();
        t.sort_unstable();
        t.dedup();
        if s.last().is_some_and(|&i| i >= m) || t.last().is_some_and(|&j| j >= n) {
            return Err(Error::InvalidInput("subset index out of range"));
        }
        Ok(SubsetSelection { s, t, m, n })
    }

    pub fn for_frames(s: Vec<usize>, t: Vec<usize>, a: &Frame, b: &Frame) -> Result<Self> {
        Self::new(s, t, a.len(), b.len())
    }

    pub fn s(&self) -> &[usize] {
        &self.s
    }

    pub fn t(&self) -> &[usize] {
        &self.t
    }

    pub fn s_complement(&self) -> Vec<usize> {
        complement(&self.s, self.m)
    }

    pub fn t_complement(&self) -> Vec<usize> {
        complement(&self.t, self.n)
    }

    /// `|S| + |T|`.
    pub fn size(&self) -> usize {
        self.s.len() + self.t.len()
    }

    /// Declared frame sizes `(m, n)`.
    pub fn sizes(&self) -> (usize, usize) {
        (self.m, self.n)
    }

    pub(crate) fn matches(&self, a: &Frame, b: &Frame) -> Result<()> {
        if (self.m, self.n) != (a.len(), b.len()) {
            return Err(Error::InvalidInput("selection was built for frames of different sizes"));
        }
        Ok(())
    }

    fn from_pair(sel: &[Vec<usize>], m: usize, n: usize) -> Self {
        SubsetSelection { s: sel[0].clone(), t: sel[1].clone(), m, n }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Rank test on the complement vectors (tight-frame equivalence).
    SubsetRank,
    /// Direct minimization of support counts over zero patterns.
    SupportOracle,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IncompatibilityResult {
    pub order: usize,
    pub selection: SubsetSelection,
    /// Unit norm, first nonzero coordinate real and positive.
    pub witness: CVector,
    pub method: Method,
}

fn same_dim(a: &Frame, b: &Frame) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), found: b.dim() });
    }
    Ok(())
}

fn require_tight(frames: &[&Frame], tol: &Tolerance) -> Result<Vec<f64>> {
    frames
        .iter()
        .enumerate()
        .map(|(i, f)| f.tight_constant(tol)?.ok_or(Error::NotTight { frame: i }))
        .collect()
}

/// Order `s` of two tight frames: the least `|S| + |T|` over nonempty `S`, `T`
/// admitting a nonzero `x` with `sum_{S} |<x,a_k>|^2 = alpha |x|^2` and
/// `sum_{T} |<x,b_j>|^2 = beta |x|^2`.
pub fn incompatibility_order(a: &Frame, b: &Frame, tol: &Tolerance, budget: &Budget) -> Result<IncompatibilityResult> {
    same_dim(a, b)?;
    require_tight(&[a, b], tol)?;
    subset_rank_order(a, b, tol, budget)
}

/// The complement-rank search of [`incompatibility_order`] without the
/// tightness check. For frames that are not tight the result is the support
/// minimum, not an order in the tight-frame sense.
pub fn subset_rank_order(a: &Frame, b: &Frame, tol: &Tolerance, budget: &Budget) -> Result<IncompatibilityResult> {
    same_dim(a, b)?;
    let found = search::subset_rank_search(&[a, b], tol, budget)?;
    Ok(IncompatibilityResult {
        order: found.order,
        selection: SubsetSelection::from_pair(&found.selection, a.len(), b.len()),
        witness: found.witness,
        method: Method::SubsetRank,
    })
}

/// `min_{x != 0} n_A(x) + n_B(x)`, with the achieving state and its supports.
pub fn min_support_sum(a: &Frame, b: &Frame, tol: &Tolerance, budget: &Budget) -> Result<IncompatibilityResult> {
    same_dim(a, b)?;
    let hit = oracle::support_minimum(&[a, b], tol, budget)?;
    Ok(IncompatibilityResult {
        order: hit.order,
        selection: SubsetSelection::from_pair(&hit.supports, a.len(), b.len()),
        witness: hit.witness,
        method: Method::SupportOracle,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReconstructionResult {
    pub t_min: usize,
    /// Lexicographically least proper pair of maximal size whose union does
    /// not span.
    pub max_nonspanning: SubsetSelection,
}

/// `t_min = max { |S|+|T| : S ⊊ I, T ⊊ J, span(A_S ∪ B_T) != C^d }`.
pub fn minimal_reconstruction_number(a: &Frame, b: &Frame, tol: &Tolerance, budget: &Budget) -> Result<ReconstructionResult> {
    same_dim(a, b)?;
    let dim = a.dim();
    budget.check_instance(a.len() + b.len(), dim)?;
    let mut meter = budget.meter();
    let frames = [a, b];
    let hi = [a.len() - 1, b.len() - 1];
    for t in (0..=hi[0] + hi[1]).rev() {
        let hit = least_selection(&frames, t, &[0, 0], &hi, &mut meter, |sel| {
            let vs = sel[0].iter().map(|&k| a.vector(k)).chain(sel[1].iter().map(|&j| b.vector(j)));
            Ok(linalg::rank_of(dim, vs, tol)? < dim)
        })?;
        if let Some(sel) = hit {
            return Ok(ReconstructionResult {
                t_min: t,
                max_nonspanning: SubsetSelection::from_pair(&sel, a.len(), b.len()),
            });
        }
    }
    unreachable!("the empty selection never spans")
}

fn complement_family<'a>(a: &'a Frame, b: &'a Frame, sel: &SubsetSelection) -> Vec<&'a CVector> {
    let sc = sel.s_complement();
    let tc = sel.t_complement();
    sc.iter().map(|&k| a.vector(k)).chain(tc.iter().map(|&j| b.vector(j))).collect()
}

/// `C_{S,T}`: lower frame bound of `{a_k}_{k in S^c} ∪ {b_j}_{j in T^c}`.
pub fn combined_lower_frame_bound(a: &Frame, b: &Frame, sel: &SubsetSelection, tol: &Tolerance) -> Result<f64> {
    same_dim(a, b)?;
    sel.matches(a, b)?;
    let family = complement_family(a, b, sel);
    if family.is_empty() || linalg::rank_of(a.dim(), family.iter().copied(), tol)? < a.dim() {
        return Err(Error::NotSpanning);
    }
    let sub = Frame::new("complement", family.into_iter().cloned().collect(), tol)?;
    match sub.frame_bounds(tol) {
        Ok(bounds) => Ok(bounds.lower),
        Err(Error::NotAFrame) => Err(Error::NotSpanning),
        Err(e) => Err(e),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct UncertaintyConstants {
    pub alpha: f64,
    pub beta: f64,
    /// `C_{S,T}` for every `(S, T)` with `|S| + |T| < s`, empty sets included,
    /// ordered by size and then lexicographically.
    pub c_st: Vec<(SubsetSelection, f64)>,
    /// `min C_{S,T}`.
    pub c_s: f64,
    /// `1 / min(alpha, beta, C_s)`.
    pub c: f64,
}

pub fn uncertainty_constants(a: &Frame, b: &Frame, s: usize, tol: &Tolerance, budget: &Budget) -> Result<UncertaintyConstants> {
    same_dim(a, b)?;
    let consts = require_tight(&[a, b], tol)?;
    budget.check_instance(a.len() + b.len(), a.dim())?;
    let mut meter = budget.meter();
    let mut c_st = Vec::new();
    for size in 0..s {
        for_each_selection(&[a, b], size, &[0, 0], &[a.len(), b.len()], &mut meter, |sel| {
            let sel = SubsetSelection::from_pair(sel, a.len(), b.len());
            let bound = combined_lower_frame_bound(a, b, &sel, tol)?;
            c_st.push((sel, bound));
            Ok(())
        })?;
    }
    let c_s = c_st.iter().map(|(_, c)| *c).fold(f64::INFINITY, f64::min);
    let (alpha, beta) = (consts[0], consts[1]);
    let c = 1.0 / alpha.min(beta).min(c_s);
    Ok(UncertaintyConstants { alpha, beta, c_st, c_s, c })
}

/// Outcome of a randomized check of `n_A(x) + n_B(x) >= s`.
#[derive(Debug, Clone, PartialEq)]
pub struct SupportCheck {
    pub trials: usize,
    pub violations: usize,
    pub min_observed: usize,
    pub first_counterexample: Option<CVector>,
    /// `n_A + n_B` at the stored witness.
    pub witness_sum: usize,
    pub witness_attains: bool,
}

impl SupportCheck {
    pub fn passed(&self) -> bool {
        self.violations == 0 && self.witness_attains
    }
}

pub fn verify_support_uncertainty(
    a: &Frame,
    b: &Frame,
    result: &IncompatibilityResult,
    trials: usize,
    seed: u64,
    tol: &Tolerance,
) -> Result<SupportCheck> {
    same_dim(a, b)?;
    let s = result.order;
    let sum = |x: &CVector| -> Result<usize> { Ok(a.support_count(x, tol)? + b.support_count(x, tol)?) };
    let mut rng = rng::seeded(seed);
    let mut check = SupportCheck {
        trials,
        violations: 0,
        min_observed: usize::MAX,
        first_counterexample: None,
        witness_sum: sum(&result.witness)?,
        witness_attains: false,
    };
    check.witness_attains = check.witness_sum == s;
    for i in 0..trials {
        let x = if i % 2 == 0 { rng::unit_state(&mut rng, a.dim()) } else { rng::real_unit_state(&mut rng, a.dim()) };
        let n = sum(&x)?;
        check.min_observed = check.min_observed.min(n);
        if n < s {
            check.violations += 1;
            check.first_counterexample.get_or_insert(x);
        }
    }
    Ok(check)
}

/// Outcome of a randomized check of
/// `|x|^2 <= C (sum_{S^c} |<x,a_k>|^2 + sum_{T^c} |<x,b_j>|^2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundCheck {
    pub checked: usize,
    pub violations: usize,
    /// Smallest `C * rhs - |x|^2` observed.
    pub worst_margin: f64,
    pub first_violation: Option<(SubsetSelection, CVector)>,
}

impl BoundCheck {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

pub const BOUND_SLACK: f64 = 1e-9;

/// Samples `trials` states per stored selection of `constants`.
pub fn verify_uncertainty_relation(
    a: &Frame,
    b: &Frame,
    constants: &UncertaintyConstants,
    trials: usize,
    seed: u64,
) -> Result<BoundCheck> {
    same_dim(a, b)?;
    let mut check = BoundCheck { checked: 0, violations: 0, worst_margin: f64::INFINITY, first_violation: None };
    for (idx, (sel, _)) in constants.c_st.iter().enumerate() {
        sel.matches(a, b)?;
        let mut rng = rng::seeded(rng::derive_seed(seed, idx as u64));
        let (sc, tc) = (sel.s_complement(), sel.t_complement());
        for i in 0..trials {
            let x = if i % 2 == 0 { rng::unit_state(&mut rng, a.dim()) } else { rng::real_unit_state(&mut rng, a.dim()) };
            let rhs = a.energy(&x, sc.iter().copied()) + b.energy(&x, tc.iter().copied());
            let margin = constants.c * rhs - x.norm_sqr();
            check.checked += 1;
            check.worst_margin = check.worst_margin.min(margin);
            if margin < -BOUND_SLACK {
                check.violations += 1;
                check.first_violation.get_or_insert_with(|| (sel.clone(), x.clone()));
            }
        }
    }
    Ok(check)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frames::{fourier_basis, standard_basis};
    use alloc::vec;
    use libm::sqrt;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn budget() -> Budget {
        Budget::default()
    }

    fn ex3() -> (Frame, Frame) {
        let h = sqrt(2.0) / 2.0;
        (
            Frame::from_real("A", &[&[1.0, 0.0], &[0.0, 1.0]], &tol()).unwrap(),
            Frame::from_real("B", &[&[0.0, h], &[h, 0.5], &[h, -0.5]], &tol()).unwrap(),
        )
    }

    fn sel(s: &[usize], t: &[usize], a: &Frame, b: &Frame) -> SubsetSelection {
        SubsetSelection::for_frames(s.to_vec(), t.to_vec(), a, b).unwrap()
    }

    #[test]
    fn selection_accessors() {
        let s = SubsetSelection::new(vec![2, 0, 2], vec![1], 3, 4).unwrap();
        assert_eq!(s.s(), &[0, 2]);
        assert_eq!(s.s_complement(), vec![1]);
        assert_eq!(s.t_complement(), vec![0, 2, 3]);
        assert_eq!(s.size(), 3);
        assert!(SubsetSelection::new(vec![3], vec![], 3, 4).is_err());
    }

    #[test]
    fn order_examples() {
        let (a, b) = ex3();
        let r = incompatibility_order(&a, &b, &tol(), &budget()).unwrap();
        assert_eq!(r.order, 3);
        assert_eq!(r.method, Method::SubsetRank);
        assert_eq!(a.support_count(&r.witness, &tol()).unwrap() + b.support_count(&r.witness, &tol()).unwrap(), 3);

        let id = standard_basis(2, &tol()).unwrap();
        let r = incompatibility_order(&id, &id, &tol(), &budget()).unwrap();
        assert_eq!(r.order, 2);
        assert_eq!((r.selection.s(), r.selection.t()), (&[0][..], &[0][..]));
        assert!((r.witness.entries()[0].re - 1.0).abs() < 1e-12 && r.witness.entries()[1].norm() < 1e-12);

        let id3 = standard_basis(3, &tol()).unwrap();
        let f3 = fourier_basis(3, &tol()).unwrap();
        assert_eq!(incompatibility_order(&id3, &f3, &tol(), &budget()).unwrap().order, 4);
    }

    #[test]
    fn order_rejects_bad_input() {
        let (a, _) = ex3();
        let loose = Frame::from_real("L", &[&[1.0, 0.0], &[0.0, 2.0]], &tol()).unwrap();
        assert_eq!(incompatibility_order(&a, &loose, &tol(), &budget()), Err(Error::NotTight { frame: 1 }));
        let id3 = standard_basis(3, &tol()).unwrap();
        assert!(matches!(incompatibility_order(&a, &id3, &tol(), &budget()), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn oracle_examples() {
        let (a, b) = ex3();
        let r = min_support_sum(&a, &b, &tol(), &budget()).unwrap();
        assert_eq!(r.order, 3);
        assert_eq!(r.method, Method::SupportOracle);
        assert_eq!((r.selection.s().len(), r.selection.t().len()), (1, 2));
        assert!((r.witness.entries()[0].re - 1.0).abs() < 1e-12);

        let id = standard_basis(2, &tol()).unwrap();
        assert_eq!(min_support_sum(&id, &id, &tol(), &budget()).unwrap().order, 2);
    }

    #[test]
    fn reconstruction_examples() {
        let id = standard_basis(2, &tol()).unwrap();
        let r = minimal_reconstruction_number(&id, &id, &tol(), &budget()).unwrap();
        assert_eq!(r.t_min, 2);
        assert_eq!(r.max_nonspanning, sel(&[0], &[0], &id, &id));

        let (a, b) = ex3();
        assert_eq!(minimal_reconstruction_number(&a, &b, &tol(), &budget()).unwrap().t_min, 2);

        let id3 = standard_basis(3, &tol()).unwrap();
        assert_eq!(minimal_reconstruction_number(&id3, &id3, &tol(), &budget()).unwrap().t_min, 4);
    }

    #[test]
    fn combined_bound_examples() {
        let (a, b) = ex3();
        let c = combined_lower_frame_bound(&a, &b, &sel(&[], &[], &a, &b), &tol()).unwrap();
        assert!((c - 2.0).abs() < 1e-13);
        let c = combined_lower_frame_bound(&a, &b, &sel(&[0], &[0], &a, &b), &tol()).unwrap();
        assert!((c - 1.0).abs() < 1e-13);

        let id = standard_basis(2, &tol()).unwrap();
        let c = combined_lower_frame_bound(&id, &id, &sel(&[0], &[], &id, &id), &tol()).unwrap();
        assert!((c - 1.0).abs() < 1e-13);

        let bad = sel(&[0], &[0], &id, &id);
        assert_eq!(combined_lower_frame_bound(&id, &id, &bad, &tol()), Err(Error::NotSpanning));
        let all = sel(&[0, 1], &[0, 1], &id, &id);
        assert_eq!(combined_lower_frame_bound(&id, &id, &all, &tol()), Err(Error::NotSpanning));
    }

    #[test]
    fn constants_for_identity_pair() {
        let id = standard_basis(2, &tol()).unwrap();
        let u = uncertainty_constants(&id, &id, 2, &tol(), &budget()).unwrap();
        // (∅,∅), ({0},∅), ({1},∅), (∅,{0}), (∅,{1})
        assert_eq!(u.c_st.len(), 5);
        assert!(u.c_st.iter().all(|(_, c)| *c >= 1.0 - 1e-12));
        assert!((u.c_s - 1.0).abs() < 1e-12);
        assert!((u.c - 1.0).abs() < 1e-12);
        assert!(verify_uncertainty_relation(&id, &id, &u, 50, 1).unwrap().passed());
    }

    #[test]
    fn support_check_on_identity_pair() {
        let id = standard_basis(2, &tol()).unwrap();
        let r = incompatibility_order(&id, &id, &tol(), &budget()).unwrap();
        let c = verify_support_uncertainty(&id, &id, &r, 100, 5, &tol()).unwrap();
        assert!(c.passed());
        assert_eq!(c.witness_sum, 2);
        assert_eq!(c.min_observed, 4);
    }

    #[test]
    fn support_check_reports_counterexamples() {
        let id = standard_basis(2, &tol()).unwrap();
        let mut r = incompatibility_order(&id, &id, &tol(), &budget()).unwrap();
        r.order = 5;
        let c = verify_support_uncertainty(&id, &id, &r, 10, 5, &tol()).unwrap();
        assert_eq!(c.violations, 10);
        assert!(c.first_counterexample.is_some() && !c.witness_attains && !c.passed());
    }
}
