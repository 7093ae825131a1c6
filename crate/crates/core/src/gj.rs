//! Ghobber–Jaming type inequality for two (not necessarily tight) frames:
//!
//! `C(S,T) |x| <= (sum_{S^c} |<x,a_k>|^2)^{1/2} + (sum_{T^c} |<x,b_j>|^2)^{1/2}`
//!
//! with
//!
//! `C(S,T) = (1 - (a2/b1)^{1/2} M(A*,B) |S|^{1/2} |T|^{1/2})
//!         / max{ b1^{-1/2}, (1 + (b2/b1)^{1/2}) a1^{-1/2} m M(A*,A) }`
//!
//! for `|S||T| < (b1/a2) M(A*,B)^{-2}`, where `a1, b1` are the lower and
//! upper frame bounds of `A`, `a2, b2` those of `B`, and `A*` is the
//! canonical dual of `A`. The constant is evaluated exactly as stated;
//! [`verify_gj`] measures the inequality rather than assuming it.

use alloc::vec::Vec;

use libm::sqrt;

use crate::error::{Error, Result};
use crate::frames::Frame;
use crate::incompat::SubsetSelection;
use crate::linalg::{CVector, Tolerance};
use crate::rng;
use crate::spark::mutual_coherence;

pub const GJ_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Admissibility {
    pub admissible: bool,
    /// `(b1/a2) / M(A*,B)^2`; infinite when `M(A*,B) = 0`.
    pub threshold: f64,
    /// `|S| |T|`.
    pub product: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GjConstants {
    pub alpha1: f64,
    pub beta1: f64,
    pub alpha2: f64,
    pub beta2: f64,
    /// `M(A*, B)`.
    pub mutual_dual_a_b: f64,
    /// `M(A*, A)`, taken over all index pairs including `k = j`.
    pub mutual_dual_a_a: f64,
    pub m: usize,
    pub threshold: f64,
    pub numerator: f64,
    pub denominator: f64,
    pub c_st: f64,
}

struct Inputs {
    alpha1: f64,
    beta1: f64,
    alpha2: f64,
    beta2: f64,
    dual_b: f64,
    dual_a: f64,
}

fn inputs(a: &Frame, b: &Frame, tol: &Tolerance) -> Result<Inputs> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), found: b.dim() });
    }
    let ba = a.frame_bounds(tol)?;
    let bb = b.frame_bounds(tol)?;
    let dual = a.canonical_dual(tol)?;
    Ok(Inputs {
        alpha1: ba.lower,
        beta1: ba.upper,
        alpha2: bb.lower,
        beta2: bb.upper,
        dual_b: mutual_coherence(&dual, b)?,
        dual_a: mutual_coherence(&dual, a)?,
    })
}

fn threshold(inp: &Inputs) -> f64 {
    if inp.dual_b == 0.0 {
        f64::INFINITY
    } else {
        inp.beta1 / inp.alpha2 / (inp.dual_b * inp.dual_b)
    }
}

/// Whether `|S||T|` is below the admissibility threshold.
pub fn gj_admissible(a: &Frame, b: &Frame, sel: &SubsetSelection, tol: &Tolerance) -> Result<Admissibility> {
    sel.matches(a, b)?;
    let inp = inputs(a, b, tol)?;
    let threshold = threshold(&inp);
    let product = sel.s().len() * sel.t().len();
    Ok(Admissibility { admissible: (product as f64) < threshold, threshold, product })
}

pub fn gj_constant(a: &Frame, b: &Frame, sel: &SubsetSelection, tol: &Tolerance) -> Result<GjConstants> {
    sel.matches(a, b)?;
    let inp = inputs(a, b, tol)?;
    let threshold = threshold(&inp);
    let product = sel.s().len() * sel.t().len();
    if (product as f64) >= threshold {
        return Err(Error::Inadmissible { product, threshold });
    }
    let m = a.len();
    let numerator = 1.0 - sqrt(inp.alpha2 / inp.beta1) * inp.dual_b * sqrt(product as f64);
    let denominator =
        (1.0 / sqrt(inp.beta1)).max((1.0 + sqrt(inp.beta2 / inp.beta1)) / sqrt(inp.alpha1) * m as f64 * inp.dual_a);
    Ok(GjConstants {
        alpha1: inp.alpha1,
        beta1: inp.beta1,
        alpha2: inp.alpha2,
        beta2: inp.beta2,
        mutual_dual_a_b: inp.dual_b,
        mutual_dual_a_a: inp.dual_a,
        m,
        threshold,
        numerator,
        denominator,
        c_st: numerator / denominator,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct GjViolation {
    pub state: CVector,
    /// `C(S,T) |x|`.
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GjCheck {
    pub constants: GjConstants,
    pub trials: usize,
    pub violations: usize,
    /// Smallest `rhs / (C(S,T) |x|)` observed.
    pub min_ratio: f64,
    pub first_violation: Option<GjViolation>,
}

impl GjCheck {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

fn gj_sides(a: &Frame, b: &Frame, sel: &SubsetSelection, c: f64, x: &CVector) -> (f64, f64) {
    let rhs = sqrt(a.energy(x, sel.s_complement())) + sqrt(b.energy(x, sel.t_complement()));
    (c * x.norm(), rhs)
}

/// Checks the inequality on `trials` seeded random unit states, alternating
/// complex and real Gaussian directions, plus any `extra` states supplied.
pub fn verify_gj(
    a: &Frame,
    b: &Frame,
    sel: &SubsetSelection,
    trials: usize,
    seed: u64,
    extra: &[CVector],
    tol: &Tolerance,
) -> Result<GjCheck> {
    let constants = gj_constant(a, b, sel, tol)?;
    let mut rng = rng::seeded(seed);
    let sampled = (0..trials).map(|i| {
        if i % 2 == 0 {
            rng::unit_state(&mut rng, a.dim())
        } else {
            rng::real_unit_state(&mut rng, a.dim())
        }
    });
    let states: Vec<CVector> = sampled.chain(extra.iter().cloned()).collect();
    Ok(check_states(a, b, sel, constants, &states))
}

/// Runs the inequality with the given constants on `states`. Lets callers
/// probe the harness with altered constants.
pub fn check_states(a: &Frame, b: &Frame, sel: &SubsetSelection, constants: GjConstants, states: &[CVector]) -> GjCheck {
    let c = constants.c_st;
    let mut check = GjCheck { constants, trials: 0, violations: 0, min_ratio: f64::INFINITY, first_violation: None };
    for x in states {
        let (lhs, rhs) = gj_sides(a, b, sel, c, x);
        check.trials += 1;
        if lhs > 0.0 {
            check.min_ratio = check.min_ratio.min(rhs / lhs);
        }
        if lhs > rhs + GJ_SLACK {
            check.violations += 1;
            check.first_violation.get_or_insert_with(|| GjViolation { state: x.clone(), lhs, rhs });
        }
    }
    check
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frames::standard_basis;
    use alloc::vec;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn hadamard() -> Frame {
        let h = 1.0 / sqrt(2.0);
        Frame::from_real("H", &[&[h, h], &[h, -h]], &tol()).unwrap()
    }

    fn sel(s: &[usize], t: &[usize], a: &Frame, b: &Frame) -> SubsetSelection {
        SubsetSelection::for_frames(s.to_vec(), t.to_vec(), a, b).unwrap()
    }

    #[test]
    fn admissibility_examples() {
        let id = standard_basis(2, &tol()).unwrap();
        let r = gj_admissible(&id, &id, &sel(&[], &[0, 1], &id, &id), &tol()).unwrap();
        assert!(r.admissible);
        assert!((r.threshold - 1.0).abs() < 1e-12);
        assert!(!gj_admissible(&id, &id, &sel(&[0], &[0], &id, &id), &tol()).unwrap().admissible);

        let h = hadamard();
        let r = gj_admissible(&id, &h, &sel(&[0], &[0], &id, &h), &tol()).unwrap();
        assert!(r.admissible);
        assert!((r.threshold - 2.0).abs() < 1e-12);
    }

    #[test]
    fn constant_examples() {
        let id = standard_basis(2, &tol()).unwrap();
        let g = gj_constant(&id, &id, &sel(&[], &[], &id, &id), &tol()).unwrap();
        assert_eq!(g.numerator, 1.0);
        assert!((g.denominator - 4.0).abs() < 1e-12);
        assert!((g.c_st - 0.25).abs() < 1e-12);

        let h = hadamard();
        let g = gj_constant(&id, &h, &sel(&[0], &[0], &id, &h), &tol()).unwrap();
        assert!((g.numerator - (1.0 - 1.0 / sqrt(2.0))).abs() < 1e-12);
        assert!((g.denominator - 4.0).abs() < 1e-12);
        assert!((g.c_st - 0.073_223_304_703_363_12).abs() < 1e-12);

        for t in [vec![], vec![0], vec![0, 1]] {
            assert_eq!(gj_constant(&id, &h, &sel(&[], &t, &id, &h), &tol()).unwrap().numerator, 1.0);
        }
        assert!(matches!(
            gj_constant(&id, &id, &sel(&[0], &[0], &id, &id), &tol()),
            Err(Error::Inadmissible { product: 1, .. })
        ));
    }

    #[test]
    fn constant_decreases_with_selection_size() {
        let id = standard_basis(3, &tol()).unwrap();
        let f = crate::frames::fourier_basis(3, &tol()).unwrap();
        let c = |s: &[usize], t: &[usize]| gj_constant(&id, &f, &sel(s, t, &id, &f), &tol()).unwrap().c_st;
        assert!(c(&[0], &[0]) >= c(&[0, 1], &[0]));
        assert!(c(&[0], &[0]) >= c(&[0], &[0, 1]));
        assert!(c(&[], &[]) >= c(&[0], &[0]));
    }

    #[test]
    fn harness_examples() {
        let id = standard_basis(2, &tol()).unwrap();
        let r = verify_gj(&id, &id, &sel(&[], &[], &id, &id), 1000, 7, &[], &tol()).unwrap();
        assert!(r.passed() && r.trials == 1000);
        // rhs >= sqrt(2) |x| while C |x| = |x| / 4
        assert!(r.min_ratio >= 4.0 * sqrt(2.0) - 1e-9);

        let h = hadamard();
        let r = verify_gj(&id, &h, &sel(&[0], &[0], &id, &h), 1000, 7, &[], &tol()).unwrap();
        assert!(r.passed());
    }

    #[test]
    fn harness_records_violations() {
        let id = standard_basis(2, &tol()).unwrap();
        let s = sel(&[], &[], &id, &id);
        let mut doctored = gj_constant(&id, &id, &s, &tol()).unwrap();
        doctored.c_st = 10.0;
        let states = vec![CVector::basis(2, 0), CVector::basis(2, 1)];
        let r = check_states(&id, &id, &s, doctored, &states);
        assert_eq!((r.trials, r.violations), (2, 2));
        assert!(!r.passed());
        let v = r.first_violation.unwrap();
        assert_eq!(v.state, states[0]);
        assert!((v.lhs - 10.0).abs() < 1e-12 && (v.rhs - 2.0).abs() < 1e-12);
    }
}
