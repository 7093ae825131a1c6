//! Incompatibility structure of finite frames and rank-one POVMs.
//!
//! Given frames `A = {a_k}` and `B = {b_j}` of `C^d`, this crate computes
//!
//! * the spark of the concatenation `(A, B)` and coherence bounds on it,
//! * the order `s` of incompatibility: the least `|S| + |T|` for which a
//!   nonzero state has its `A`-coefficients supported in `S` and its
//!   `B`-coefficients supported in `T`, both through a complement-rank search
//!   and through an independent support-minimum oracle,
//! * the minimal reconstruction number `t_min` (with `s + t_min = m + n` for
//!   tight frames),
//! * the constants of the frame-bound uncertainty relation and of the
//!   coherence-based (Ghobber–Jaming type) inequality, with randomized
//!   verification harnesses,
//! * the same order for `n >= 3` frames together with the pairwise bound.
//!
//! The crate is `no_std` and needs only `alloc`. All operations are pure and
//! deterministic for a given seed and [`Tolerance`].

#![no_std]

extern crate alloc;

mod error;
mod oracle;
mod search;

pub mod frames;
pub mod gj;
pub mod incompat;
pub mod linalg;
pub mod multi;
pub mod rng;
pub mod spark;
pub mod subsets;

pub use error::{Error, Result};
pub use frames::{Frame, FrameBounds, Povm};
pub use incompat::{IncompatibilityResult, Method, SubsetSelection};
pub use linalg::{CMatrix, CVector, Tolerance, C64};
pub use multi::Engine;
pub use spark::{SparkResult, SparkValue};
pub use subsets::Budget;
