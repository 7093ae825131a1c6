//! Bundled example frames and the seeded generators.

use incompat_core::frames::{fourier_basis, random_orthonormal_basis, random_parseval_frame, standard_basis};
use incompat_core::{Frame, Tolerance};

use crate::error::{CliError, CliResult};

pub const FIXTURES: [&str; 5] = ["paper-ex3-A", "paper-ex3-B", "paper-expli-A", "paper-expli-B", "paper-expli-C"];

pub const KINDS: [&str; 9] = [
    "parseval",
    "orthonormal",
    "fourier",
    "identity",
    "paper-ex3-A",
    "paper-ex3-B",
    "paper-expli-A",
    "paper-expli-B",
    "paper-expli-C",
];

fn rows(name: &str) -> Option<Vec<[f64; 2]>> {
    let r3 = 3f64.sqrt();
    let h = 2f64.sqrt() / 2.0;
    let q = 2.0 * 3f64.powf(0.25);
    let r = (2.0 * r3 - 1.25).sqrt();
    Some(match name {
        "paper-ex3-A" => vec![[1.0, 0.0], [0.0, 1.0]],
        "paper-ex3-B" => vec![[0.0, h], [h, 0.5], [h, -0.5]],
        "paper-expli-A" => vec![[2.0 * r3, 1.0], [-2.0, -r3], [0.0, 2.0 * r3]],
        "paper-expli-B" => vec![[1.0, 1.0], [0.5, 0.5], [0.0, 1.0], [2.0, -r3], [-r, -r]],
        "paper-expli-C" => vec![[2.0, -r3], [q, q], [-2.0, r3], [0.0, -2f64.sqrt()]],
        _ => return None,
    })
}

pub fn fixture(name: &str, tol: &Tolerance) -> Option<Frame> {
    let rows = rows(name)?;
    let refs: Vec<&[f64]> = rows.iter().map(|v| v.as_slice()).collect();
    Some(Frame::from_real(name, &refs, tol).expect("fixtures are valid frames"))
}

pub fn generate(kind: &str, dim: usize, n: usize, seed: u64, tol: &Tolerance) -> CliResult<Frame> {
    if let Some(f) = fixture(kind, tol) {
        return Ok(f);
    }
    if dim == 0 {
        return Err(CliError::Usage("dimension must be positive".into()));
    }
    let ctx = CliError::core(format!("generate {kind}"));
    match kind {
        "parseval" => random_parseval_frame(dim, n, seed, tol).map_err(ctx),
        "orthonormal" => random_orthonormal_basis(dim, seed, tol).map_err(ctx),
        "fourier" => fourier_basis(dim, tol).map_err(ctx),
        "identity" => standard_basis(dim, tol).map_err(ctx),
        _ => Err(CliError::Usage(format!("unknown kind {kind:?}; expected one of {}", KINDS.join(", ")))),
    }
}

/// Published values for the bundled examples, keyed by claim name.
pub fn paper_claims(labels: &[&str]) -> Vec<(&'static str, usize)> {
    match labels {
        ["paper-ex3-A", "paper-ex3-B"] => vec![("spark(A,B)", 2), ("s(A,B)", 3)],
        ["paper-expli-A", "paper-expli-B", "paper-expli-C"] => {
            vec![("s_AB", 5), ("s_BC", 5), ("s_AC", 4), ("s", 8)]
        }
        _ => Vec::new(),
    }
}
