//! Independent oracles for the spin-1 valence-bond chain, built from explicit
//! state vectors rather than transfer matrices.
#![allow(dead_code)]

use fcs::linalg::ComplexMatrix;
use fcs::random;
use num_complex::Complex64;

const S: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// 4×3 map from spin-1 states to pairs of spin-1/2 (|↑↑⟩, symmetric, |↓↓⟩).
fn triplet_columns() -> [[f64; 3]; 4] {
    [[1.0, 0.0, 0.0], [0.0, S, 0.0], [0.0, S, 0.0], [0.0, 0.0, 1.0]]
}

/// Singlet amplitude ⟨x y|s⟩ for spins x (left) and y (right), 0 = up.
fn singlet(x: usize, y: usize) -> f64 {
    match (x, y) {
        (0, 1) => S,
        (1, 0) => -S,
        _ => 0.0,
    }
}

/// Projects a vector over 2n spin-1/2 (ordered a₀ b₀ a₁ b₁ …) onto the
/// spin-1 states of each pair, giving a vector in (C³)^{⊗n}. Pairs are
/// contracted one at a time: the tensor has shape [3]^k × [4]^(n−k).
fn project_pairs(raw: &[f64], n: usize) -> Vec<Complex64> {
    let w = triplet_columns();
    let mut v = raw.to_vec();
    for k in 0..n {
        let outer = 3usize.pow(k as u32);
        let inner = 4usize.pow((n - 1 - k) as u32);
        let mut next = vec![0.0; outer * 3 * inner];
        for o in 0..outer {
            for lab in 0..3 {
                for pair in 0..4 {
                    let c = w[pair][lab];
                    if c == 0.0 {
                        continue;
                    }
                    for i in 0..inner {
                        next[(o * 3 + lab) * inner + i] += c * v[(o * 4 + pair) * inner + i];
                    }
                }
            }
        }
        v = next;
    }
    v.into_iter().map(|x| Complex64::new(x, 0.0)).collect()
}

fn spin(cfg: usize, n_spins: usize, pos: usize) -> usize {
    (cfg >> (n_spins - 1 - pos)) & 1
}

/// Valence-bond state on a periodic ring of `length` spin-1 sites.
pub fn ring_state(length: usize) -> Vec<Complex64> {
    let n_spins = 2 * length;
    let raw: Vec<f64> = (0..1usize << n_spins)
        .map(|cfg| {
            (0..length)
                .map(|k| {
                    let b = spin(cfg, n_spins, 2 * k + 1);
                    let a_next = spin(cfg, n_spins, (2 * k + 2) % n_spins);
                    singlet(b, a_next)
                })
                .product()
        })
        .collect();
    project_pairs(&raw, length)
}

/// Open valence-bond chain of `length` sites with the outer spins fixed to
/// `left` and `right`.
pub fn open_chain_state(length: usize, left: usize, right: usize) -> Vec<Complex64> {
    let n_spins = 2 * length;
    let raw: Vec<f64> = (0..1usize << n_spins)
        .map(|cfg| {
            if spin(cfg, n_spins, 0) != left || spin(cfg, n_spins, n_spins - 1) != right {
                return 0.0;
            }
            (0..length - 1)
                .map(|k| singlet(spin(cfg, n_spins, 2 * k + 1), spin(cfg, n_spins, 2 * k + 2)))
                .product()
        })
        .collect();
    project_pairs(&raw, length)
}

/// ⟨φ| a₁ ⊗ … ⊗ a_n |φ⟩ for φ ∈ (C^d)^{⊗n}.
pub fn product_expectation(phi: &[Complex64], letters: &[ComplexMatrix]) -> Complex64 {
    let n = letters.len();
    let d = letters[0].rows();
    let mut v = phi.to_vec();
    for (axis, a) in letters.iter().enumerate() {
        let inner = d.pow((n - 1 - axis) as u32);
        let outer = d.pow(axis as u32);
        let mut next = vec![Complex64::new(0.0, 0.0); v.len()];
        for o in 0..outer {
            for i in 0..d {
                for j in 0..d {
                    let c = a[(i, j)];
                    for k in 0..inner {
                        next[(o * d + i) * inner + k] += c * v[(o * d + j) * inner + k];
                    }
                }
            }
        }
        v = next;
    }
    phi.iter().zip(&v).map(|(x, y)| x.conj() * y).sum()
}

fn norm_sqr(phi: &[Complex64]) -> f64 {
    phi.iter().map(|z| z.norm_sqr()).sum()
}

/// Expectation of `letters` (on sites 0..n) in the valence-bond ring of
/// `length` sites, padding with identities.
pub fn ring_oracle(letters: &[ComplexMatrix], length: usize) -> Complex64 {
    let phi = ring_state(length);
    let mut full = letters.to_vec();
    full.resize(length, ComplexMatrix::identity(3));
    product_expectation(&phi, &full) / norm_sqr(&phi)
}

/// Expectation of `letters` on consecutive sites of the infinite
/// valence-bond chain: the open chain with both dangling spins traced out.
pub fn open_window_oracle(letters: &[ComplexMatrix]) -> Complex64 {
    let n = letters.len();
    let mut num = Complex64::new(0.0, 0.0);
    let mut den = 0.0;
    for left in 0..2 {
        for right in 0..2 {
            let phi = open_chain_state(n, left, right);
            num += product_expectation(&phi, letters);
            den += norm_sqr(&phi);
        }
    }
    num / den
}

pub fn sz() -> ComplexMatrix {
    ComplexMatrix::diag_real(&[1.0, 0.0, -1.0])
}

/// Random Hermitian matrix scaled to unit operator norm.
pub fn unit_hermitian(d: usize, rng: &mut impl rand::Rng) -> ComplexMatrix {
    let h = random::random_hermitian(d, rng);
    let n = fcs::linalg::operator_norm(&h);
    h.scale_re(1.0 / n)
}
