//! Seeded randomness for generators and verification harnesses.

use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::linalg::{CVector, C64};

pub type Rng = ChaCha8Rng;

pub fn seeded(seed: u64) -> Rng {
    Rng::seed_from_u64(seed)
}

/// Mixes a master seed with a stream index (splitmix64 finalizer).
pub fn derive_seed(master: u64, stream: u64) -> u64 {
    let mut z = master ^ stream.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn gaussian(rng: &mut Rng) -> f64 {
    StandardNormal.sample(rng)
}

/// Entries i.i.d. standard complex Gaussian.
pub fn complex_gaussian(rng: &mut Rng, dim: usize) -> Vec<C64> {
    (0..dim).map(|_| C64::new(gaussian(rng), gaussian(rng))).collect()
}

fn normalize(mut v: Vec<C64>) -> CVector {
    let norm = libm::sqrt(v.iter().map(|z| z.norm_sqr()).sum::<f64>());
    v.iter_mut().for_each(|z| *z /= norm);
    CVector::new(v).expect("gaussian samples are finite")
}

/// Uniformly distributed unit vector in `C^dim`.
pub fn unit_state(rng: &mut Rng, dim: usize) -> CVector {
    normalize(complex_gaussian(rng, dim))
}

/// Uniformly distributed unit vector in `R^dim`, embedded in `C^dim`.
pub fn real_unit_state(rng: &mut Rng, dim: usize) -> CVector {
    normalize((0..dim).map(|_| C64::new(gaussian(rng), 0.0)).collect())
}
