//! Seeded random matrices shared by the model generators and the probes.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::ComplexMatrix;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian(rng: &mut impl Rng) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) / 2f64.sqrt()
}

/// Matrix with i.i.d. standard complex Gaussian entries.
pub fn gaussian_matrix(rows: usize, cols: usize, rng: &mut impl Rng) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| gaussian(rng))
}

pub fn random_hermitian(n: usize, rng: &mut impl Rng) -> ComplexMatrix {
    gaussian_matrix(n, n, rng).hermitian_part()
}

/// y†y for Gaussian y: a random positive semidefinite matrix.
pub fn random_psd(n: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let y = gaussian_matrix(n, n, rng);
    y.dagger().matmul(&y)
}

/// Random unit vector in C^n.
pub fn random_unit_vector(n: usize, rng: &mut impl Rng) -> Vec<Complex64> {
    let v: Vec<Complex64> = (0..n).map(|_| gaussian(rng)).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / norm).collect()
}
