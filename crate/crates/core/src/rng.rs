//! Seeded, splittable randomness. Every randomized search draws start `i`
//! from its own ChaCha stream keyed by `(seed, i)`, so results do not depend
//! on how starts are scheduled across threads.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::hilbert::{GradedVector, C64};

pub type LabRng = ChaCha8Rng;

/// Independent stream `index` of the generator family `seed`.
pub fn stream(seed: u64, index: u64) -> LabRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Derives a child seed from a parent seed and a label; used to give each
/// sub-search its own family.
pub fn derive_seed(seed: u64, label: u64) -> u64 {
    // splitmix64 finalizer
    let mut z = seed ^ label.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn gaussian_c64(rng: &mut LabRng) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im)
}

pub fn gaussian_real(rng: &mut LabRng) -> f64 {
    rng.sample(StandardNormal)
}

pub fn random_matrix(rng: &mut LabRng, rows: usize, cols: usize) -> DMatrix<C64> {
    DMatrix::from_fn(rows, cols, |_, _| gaussian_c64(rng))
}

pub fn random_real_matrix(rng: &mut LabRng, rows: usize, cols: usize) -> DMatrix<C64> {
    DMatrix::from_fn(rows, cols, |_, _| C64::new(gaussian_real(rng), 0.0))
}

pub fn random_dvector(rng: &mut LabRng, dim: usize) -> DVector<C64> {
    DVector::from_fn(dim, |_, _| gaussian_c64(rng))
}

pub fn random_vector(rng: &mut LabRng, dim: usize) -> GradedVector {
    GradedVector::from_dvector(random_dvector(rng, dim))
}

/// Uniformly distributed unit vector of `C^dim`.
pub fn random_unit(rng: &mut LabRng, dim: usize) -> DVector<C64> {
    loop {
        let v = random_dvector(rng, dim);
        let n = v.norm();
        if n > 1e-12 {
            return v / C64::new(n, 0.0);
        }
    }
}

/// Haar-ish random isometry `C^cols → C^rows` (orthonormal columns), `cols ≤ rows`.
pub fn random_isometry(rng: &mut LabRng, rows: usize, cols: usize) -> DMatrix<C64> {
    assert!(cols <= rows);
    let g = random_matrix(rng, rows, cols);
    let qr = g.qr();
    let q = qr.q();
    q.columns(0, cols).into_owned()
}

pub fn uniform(rng: &mut LabRng, lo: f64, hi: f64) -> f64 {
    rng.random_range(lo..hi)
}

pub fn index_below(rng: &mut LabRng, n: usize) -> usize {
    rng.random_range(0..n)
}
