//! Ready-made generating maps: product states, the spin-1 valence-bond
//! (AKLT) chain and seeded random isometry models.

use num_complex::Complex64;

use crate::cpmap::{cp_from_isometry, stinespring_from_choi, CpMapData, CP_TOL};
use crate::error::{Error, Result};
use crate::linalg::{herm_eig, orthonormalize_columns, pauli_basis, ComplexMatrix, ZERO};
use crate::random;

/// Spin-1 valence-bond model on a chain of spin-1/2 pairs.
#[derive(Debug, Clone)]
pub struct AkltData {
    /// Projection onto the triplet subspace of C² ⊗ C².
    pub p: ComplexMatrix,
    /// Projection onto the singlet.
    pub p0: ComplexMatrix,
    /// 4×3 isometry onto the range of `p`, columns |↑↑⟩, (|↑↓⟩+|↓↑⟩)/√2, |↓↓⟩.
    pub w: ComplexMatrix,
    /// Coefficients of `p` in the basis I⊗I, σ¹⊗σ¹, σ²⊗σ², σ³⊗σ³.
    pub g: [f64; 4],
    pub cp: CpMapData,
}

/// Σ_α c_α σ^α ⊗ σ^α.
fn pauli_pair_sum(coeffs: [f64; 4]) -> ComplexMatrix {
    let sigma = pauli_basis();
    let mut out = ComplexMatrix::zeros(4, 4);
    for (c, s) in coeffs.iter().zip(sigma.iter()) {
        out.axpy(Complex64::new(*c, 0.0), &s.kron(s));
    }
    out
}

pub fn triplet_embedding() -> ComplexMatrix {
    let s = 1.0 / 2f64.sqrt();
    ComplexMatrix::from_real_rows(&[&[1.0, 0.0, 0.0], &[0.0, s, 0.0], &[0.0, s, 0.0], &[0.0, 0.0, 1.0]])
}

pub fn aklt_model() -> AkltData {
    let g = [0.75, 0.25, 0.25, 0.25];
    let p = pauli_pair_sum(g);
    let p0 = pauli_pair_sum([0.25, -0.25, -0.25, -0.25]);
    let w = triplet_embedding();
    let cp = dimerized_model(&w, &p0, 4.0 / 3.0).expect("valence-bond map is unital and CP");
    AkltData { p, p0, w, g, cp }
}

/// Generating map of a dimerized valence-bond state.
///
/// Each site carries a pair of spins of dimension k, and `w` ((k·k)×d)
/// identifies M_d with a corner of M_k ⊗ M_k via a ↦ W a W†. The second spin
/// of a site is paired with the bond space M_k through the functional
/// ξ₀(M) = scale · Tr(M · p0):
///
/// E(a ⊗ B) = (id ⊗ ξ₀)(W a W† ⊗ B),
///
/// so r = k. The map is rejected unless it is unital and completely positive.
pub fn dimerized_model(w: &ComplexMatrix, p0: &ComplexMatrix, scale: f64) -> Result<CpMapData> {
    let d = w.cols();
    let k = (w.rows() as f64).sqrt().round() as usize;
    if k * k != w.rows() || k == 0 {
        return Err(Error::ShapeMismatch(format!(
            "embedding has {} rows, expected a square number",
            w.rows()
        )));
    }
    if p0.shape() != (k * k, k * k) {
        return Err(Error::ShapeMismatch(format!(
            "pairing matrix is {:?}, expected {}x{}",
            p0.shape(),
            k * k,
            k * k
        )));
    }
    let r = k;
    let dr = d * r;
    // E(e_ij ⊗ e_vv')[p, q] = scale Σ_{u,u'} W[(p,u),i] conj(W[(q,u'),j]) p0[(u',v'),(u,v)]
    let mut sup = ComplexMatrix::zeros(r * r, dr * dr);
    for i in 0..d {
        for v in 0..r {
            let mu = i * r + v;
            for j in 0..d {
                for vp in 0..r {
                    let nu = j * r + vp;
                    let col = nu * dr + mu;
                    for p in 0..r {
                        for q in 0..r {
                            let mut acc = ZERO;
                            for u in 0..k {
                                let left = w[(p * k + u, i)];
                                if left == ZERO {
                                    continue;
                                }
                                for up in 0..k {
                                    acc += left * w[(q * k + up, j)].conj() * p0[(up * k + vp, u * k + v)];
                                }
                            }
                            sup[(q * r + p, col)] = acc * scale;
                        }
                    }
                }
            }
        }
    }
    stinespring_from_choi(&sup, d, r, CP_TOL)
}

/// Spin-1 operators (Sx, Sy, Sz) in the triplet basis, Sz = diag(1, 0, −1).
pub fn aklt_spin_operators() -> (ComplexMatrix, ComplexMatrix, ComplexMatrix) {
    let w = triplet_embedding();
    let sigma = pauli_basis();
    let id = ComplexMatrix::identity(2);
    let total = |s: &ComplexMatrix| {
        let half = s.scale_re(0.5);
        let sum = &half.kron(&id) + &id.kron(&half);
        w.dagger().matmul(&sum).matmul(&w)
    };
    (total(&sigma[1]), total(&sigma[2]), total(&sigma[3]))
}

/// Single-site state ω₀ of a product state.
#[derive(Debug, Clone, PartialEq)]
pub enum LocalState {
    /// Unit vector ψ₀ ∈ C^d.
    Pure(Vec<Complex64>),
    /// Density matrix ρ₀ ∈ M_d.
    Mixed(ComplexMatrix),
}

impl LocalState {
    pub fn dim(&self) -> usize {
        match self {
            LocalState::Pure(psi) => psi.len(),
            LocalState::Mixed(rho) => rho.rows(),
        }
    }

    pub fn density(&self) -> ComplexMatrix {
        match self {
            LocalState::Pure(psi) => ComplexMatrix::outer(psi, psi),
            LocalState::Mixed(rho) => rho.clone(),
        }
    }

    /// ω₀(a) = Tr(ρ₀ a).
    pub fn expectation(&self, a: &ComplexMatrix) -> Complex64 {
        self.density().matmul(a).trace()
    }
}

#[derive(Debug, Clone)]
pub struct ProductModelData {
    pub state: LocalState,
    pub cp: CpMapData,
}

const STATE_TOL: f64 = 1e-12;

/// E(a ⊗ λ) = ω₀(a)·λ with r = 1.
///
/// A pure state is its own dilation; a mixed one is purified as
/// Σ_k √p_k |φ_k⟩ ⊗ |k⟩, which becomes the dilation multiplicity.
pub fn product_model(state: LocalState) -> Result<ProductModelData> {
    let cp = match &state {
        LocalState::Pure(psi) => {
            if psi.is_empty() {
                return Err(Error::NotAState("empty state vector".into()));
            }
            let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if !norm.is_finite() || (norm - 1.0).abs() > STATE_TOL {
                return Err(Error::NotAState(format!("vector norm is {norm}")));
            }
            let v = ComplexMatrix::from_columns(psi.len(), std::slice::from_ref(psi));
            cp_from_isometry(&v, psi.len(), 1)?
        }
        LocalState::Mixed(rho) => {
            if !rho.is_square() || rho.rows() == 0 {
                return Err(Error::NotAState("density matrix must be square".into()));
            }
            let defect = rho.hermiticity_defect();
            if defect > STATE_TOL {
                return Err(Error::NotAState(format!("density matrix not Hermitian ({defect:.3e})")));
            }
            let tr = rho.trace();
            if (tr - Complex64::new(1.0, 0.0)).norm() > STATE_TOL {
                return Err(Error::NotAState(format!("trace is {tr}")));
            }
            let eig = herm_eig(&rho.hermitian_part())?;
            let min = eig.eigenvalues[0];
            if min < -STATE_TOL {
                return Err(Error::NotAState(format!("negative eigenvalue {min:.3e}")));
            }
            let kept: Vec<usize> = (0..eig.eigenvalues.len())
                .filter(|&k| eig.eigenvalues[k] > STATE_TOL)
                .collect();
            let d = rho.rows();
            let m = kept.len();
            let mut v = ComplexMatrix::zeros(d * m, 1);
            for (k, &idx) in kept.iter().enumerate() {
                let phi = eig.eigenvector(idx);
                let amp = eig.eigenvalues[idx].sqrt();
                for i in 0..d {
                    v[(i * m + k, 0)] = phi[i] * amp;
                }
            }
            // renormalize away the clipped weight
            let norm = v.frobenius_norm();
            CpMapData::from_dilation(v.scale_re(1.0 / norm), d, m, 1)?
        }
    };
    Ok(ProductModelData { state, cp })
}

/// Product state of the `index`-th basis vector of C^d.
pub fn basis_product_model(d: usize, index: usize) -> Result<ProductModelData> {
    if index >= d {
        return Err(Error::IndexOutOfRange { index, bound: d });
    }
    let mut psi = vec![ZERO; d];
    psi[index] = Complex64::new(1.0, 0.0);
    product_model(LocalState::Pure(psi))
}

/// Isometry (rows×cols) from QR orthonormalization of a seeded complex
/// Gaussian matrix.
pub fn random_isometry(rows: usize, cols: usize, seed: u64) -> ComplexMatrix {
    let mut rng = random::rng(seed);
    orthonormalize_columns(&random::gaussian_matrix(rows, cols, &mut rng))
}

pub fn random_model(d: usize, r: usize, seed: u64) -> CpMapData {
    assert!(d >= 1 && r >= 1, "dimensions must be positive");
    cp_from_isometry(&random_isometry(d * r, r, seed), d, r).expect("QR output is an isometry")
}

/// Random model whose dilation carries an extra multiplicity `m` on each
/// site, so generic Kraus rank is d·m rather than d.
pub fn random_dilated_model(d: usize, r: usize, m: usize, seed: u64) -> CpMapData {
    assert!(d >= 1 && r >= 1 && m >= 1, "dimensions must be positive");
    CpMapData::from_dilation(random_isometry(d * m * r, r, seed), d, m, r).expect("QR output is an isometry")
}

/// E(1 ⊗ T) = T with a one-dimensional site algebra.
pub fn identity_channel(r: usize) -> CpMapData {
    cp_from_isometry(&ComplexMatrix::identity(r), 1, r).expect("identity is an isometry")
}
