//! Operator-product presentation of a generating map in the tensor-product
//! model.
//!
//! Both Hilbert spaces of a Stinespring dilation V₀ : H₂ → H₁ ⊗ H₂ are
//! extended by a distinguished unit vector, H̃ᵢ = C·ξᵢ ⊕ Hᵢ (index 0 is ξᵢ).
//! The extended isometry sends ξ₂ ↦ ξ₁ ⊗ ξ₂ and χ ↦ V₀χ, U(χ̃) = ξ₁ ⊗ χ̃,
//! and Z_ι = |δ_ι⟩⟨ξ₁|. The slices Σ_ι = V_ext†(Z_ι ⊗ I)U then give
//!
//! E_(n)(A ⊗ T) = Σ_{I,J} ⟨δ_I, A δ_J⟩ Σ_{i₁}⋯Σ_{i_n} T Σ_{j_n}†⋯Σ_{j₁}†.
//!
//! When the dilation has multiplicity m, H₁ = C^d ⊗ C^m and letters act as
//! a ⊗ I_m.

use num_complex::Complex64;

use crate::cpmap::{CpMapData, Word};
use crate::error::{Error, Result};
use crate::linalg::{apply_on_axis, isometry_defect, ComplexMatrix, ONE, ZERO};
use crate::random;
use crate::reconstruct::BoundaryState;

#[derive(Debug, Clone)]
pub struct ExtendedModel {
    pub base: CpMapData,
    /// Dimension of H₁ (d times the dilation multiplicity).
    pub site_dim: usize,
    /// ((site_dim+1)(r+1)) × (r+1).
    pub v_ext: ComplexMatrix,
    /// ((site_dim+1)(r+1)) × (r+1), χ̃ ↦ ξ₁ ⊗ χ̃.
    pub u: ComplexMatrix,
    /// Σ_ι, (r+1) × (r+1), one per basis vector of H₁.
    pub sigma: Vec<ComplexMatrix>,
    pub hypotheses: HypothesisReport,
}

/// Residuals of the structural conditions that make the operator-product
/// formula valid. All vanish (up to rounding) by construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HypothesisReport {
    /// max ‖[Ã ⊗ I, I ⊗ T̃]‖ over sampled pairs.
    pub commuting_residual: f64,
    /// max of ‖U†U − I‖ and ‖UU† − P_ξ₁ ⊗ I‖.
    pub u_residual: f64,
    /// ‖(P_ξ₁ ⊗ I)(I ⊗ T̃)(P_ξ₁ ⊗ I) − U T̃ U†‖ over sampled T̃.
    pub compression_residual: f64,
    /// ‖V_ext†V_ext − I‖.
    pub isometry_residual: f64,
    /// max ‖Σ_ι ξ₂‖.
    pub sigma_xi_residual: f64,
}

impl HypothesisReport {
    pub fn max_residual(&self) -> f64 {
        [
            self.commuting_residual,
            self.u_residual,
            self.compression_residual,
            self.isometry_residual,
            self.sigma_xi_residual,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    pub fn holds(&self, tol: f64) -> bool {
        self.max_residual() <= tol
    }
}

/// Z_i = |δ_i⟩⟨ξ₁| on H̃₁ = C·ξ₁ ⊕ C^d.
pub fn z_operator(i: usize, d: usize) -> Result<ComplexMatrix> {
    if i >= d {
        return Err(Error::IndexOutOfRange { index: i, bound: d });
    }
    let mut z = ComplexMatrix::zeros(d + 1, d + 1);
    z[(1 + i, 0)] = ONE;
    Ok(z)
}

/// t ∈ M_r as the corner of M_{r+1} acting by 0 on ξ.
pub fn embed_reduced(t: &ComplexMatrix) -> ComplexMatrix {
    t.embed(t.rows() + 1, t.cols() + 1, 1, 1)
}

/// Builds the extended model; a dilation is recovered from the Choi matrix
/// when the map does not carry one.
pub fn extend_model(cp: &CpMapData) -> Result<ExtendedModel> {
    let base = cp.with_dilation().map_err(|e| Error::NoDilation(e.to_string()))?;
    let dilation = base.dilation().expect("with_dilation attaches one").clone();
    let r = base.r();
    let site_dim = base.d() * dilation.multiplicity;
    let (h1, h2) = (site_dim + 1, r + 1);
    let v0 = &dilation.v;
    let mut v_ext = ComplexMatrix::zeros(h1 * h2, h2);
    v_ext[(0, 0)] = ONE;
    for iota in 0..site_dim {
        for t in 0..r {
            for s in 0..r {
                v_ext[((1 + iota) * h2 + 1 + t, 1 + s)] = v0[(iota * r + t, s)];
            }
        }
    }
    let mut u = ComplexMatrix::zeros(h1 * h2, h2);
    for beta in 0..h2 {
        u[(beta, beta)] = ONE;
    }
    let id2 = ComplexMatrix::identity(h2);
    let sigma: Vec<ComplexMatrix> = (0..site_dim)
        .map(|iota| {
            let z = z_operator(iota, site_dim).expect("index in range");
            v_ext.dagger().matmul(&z.kron(&id2)).matmul(&u)
        })
        .collect();
    let hypotheses = check_hypotheses(&v_ext, &u, &sigma, h1, h2);
    Ok(ExtendedModel {
        base,
        site_dim,
        v_ext,
        u,
        sigma,
        hypotheses,
    })
}

fn check_hypotheses(
    v_ext: &ComplexMatrix,
    u: &ComplexMatrix,
    sigma: &[ComplexMatrix],
    h1: usize,
    h2: usize,
) -> HypothesisReport {
    let mut rng = random::rng(0x5eed);
    let id1 = ComplexMatrix::identity(h1);
    let id2 = ComplexMatrix::identity(h2);
    let mut p_xi = ComplexMatrix::zeros(h1, h1);
    p_xi[(0, 0)] = ONE;
    let p_big = p_xi.kron(&id2);
    let mut commuting_residual: f64 = 0.0;
    let mut compression_residual: f64 = 0.0;
    for _ in 0..4 {
        let a = random::gaussian_matrix(h1, h1, &mut rng);
        let t = random::gaussian_matrix(h2, h2, &mut rng);
        let left = a.kron(&id2);
        let right = id1.kron(&t);
        commuting_residual = commuting_residual.max(left.commutator(&right).max_abs());
        let compressed = p_big.matmul(&right).matmul(&p_big);
        let via_u = u.matmul(&t).matmul(&u.dagger());
        compression_residual = compression_residual.max(compressed.max_abs_diff(&via_u));
    }
    let u_residual = isometry_defect(u).max(u.matmul(&u.dagger()).max_abs_diff(&p_big));
    let sigma_xi_residual = sigma
        .iter()
        .map(|s| (0..h2).map(|k| s[(k, 0)].norm()).fold(0.0, f64::max))
        .fold(0.0, f64::max);
    HypothesisReport {
        commuting_residual,
        u_residual,
        compression_residual,
        isometry_residual: isometry_defect(v_ext),
        sigma_xi_residual,
    }
}

impl ExtendedModel {
    pub fn r(&self) -> usize {
        self.base.r()
    }

    /// Letter a ∈ M_d as it acts on H₁.
    fn site_operator(&self, a: &ComplexMatrix) -> ComplexMatrix {
        let m = self.site_dim / self.base.d();
        a.kron(&ComplexMatrix::identity(m))
    }
}

/// E_(n)(A ⊗ t) through the Σ-slices, contracted letter by letter
/// right to left; returns an (r+1) × (r+1) matrix supported on H₂.
pub fn op_product_eval(em: &ExtendedModel, word: &Word, t: &ComplexMatrix) -> Result<ComplexMatrix> {
    word.check_dim(em.base.d())?;
    let r = em.r();
    if t.shape() != (r, r) {
        return Err(Error::ShapeMismatch(format!(
            "reduced argument is {:?}, expected {r}x{r}",
            t.shape()
        )));
    }
    let mut acc = embed_reduced(t);
    for a in word.letters().iter().rev() {
        let rho = em.site_operator(a);
        let mut next = ComplexMatrix::zeros(r + 1, r + 1);
        for (iota, s_i) in em.sigma.iter().enumerate() {
            // Σ_κ ρ(a)[ι,κ] acc Σ_κ†
            let mut inner = ComplexMatrix::zeros(r + 1, r + 1);
            for (kappa, s_k) in em.sigma.iter().enumerate() {
                let c = rho[(iota, kappa)];
                if c != ZERO {
                    inner.axpy(c, &s_k.dagger());
                }
            }
            if inner.max_abs() == 0.0 {
                continue;
            }
            next = &next + &s_i.matmul(&acc).matmul(&inner);
        }
        acc = next;
    }
    Ok(acc)
}

/// Orthonormal basis χ_α of H̃₂ (the standard one, index 0 = ξ₂) and its
/// matrix units B_αβ = |χ_α⟩⟨χ_β|.
#[derive(Debug, Clone)]
pub struct UnitMatrixBasis {
    pub chi: Vec<Vec<Complex64>>,
}

impl UnitMatrixBasis {
    pub fn standard(dim: usize) -> Self {
        let chi = (0..dim)
            .map(|a| (0..dim).map(|b| if a == b { ONE } else { ZERO }).collect())
            .collect();
        Self { chi }
    }

    pub fn unit(&self, alpha: usize, beta: usize) -> ComplexMatrix {
        ComplexMatrix::outer(&self.chi[alpha], &self.chi[beta])
    }
}

/// Γ_n(B_αβ) ∈ (H₁)^{⊗n}: component J is Tr(B_αβ Σ_{j_n}†⋯Σ_{j₁}†) = conj((Σ_{j₁}⋯Σ_{j_n})[α, β]).
fn gamma_vectors(em: &ExtendedModel, n: usize) -> Vec<Vec<Vec<Complex64>>> {
    let h2 = em.r() + 1;
    let mut products = vec![ComplexMatrix::identity(h2)];
    for _ in 0..n {
        let mut next = Vec::with_capacity(products.len() * em.site_dim);
        for p in &products {
            for s in &em.sigma {
                next.push(p.matmul(s));
            }
        }
        products = next;
    }
    (0..h2)
        .map(|alpha| {
            (0..h2)
                .map(|beta| products.iter().map(|p| p[(alpha, beta)].conj()).collect())
                .collect()
        })
        .collect()
}

/// ω(a₁ ⊗ … ⊗ a_n) = Σ_{αβγ} ξ(B_αγ) ⟨Γ_n(B_αβ), A Γ_n(B_γβ)⟩.
pub fn gamma_n_presentation(em: &ExtendedModel, xi: &BoundaryState, word: &Word) -> Result<Complex64> {
    word.check_dim(em.base.d())?;
    let r = em.r();
    if xi.dim() != r {
        return Err(Error::ShapeMismatch(format!(
            "boundary state acts on C^{}, model has r = {r}",
            xi.dim()
        )));
    }
    let n = word.len();
    let h2 = r + 1;
    let rho = embed_reduced(xi.rho());
    let gammas = gamma_vectors(em, n);
    let dims = vec![em.site_dim; n];
    let ops: Vec<ComplexMatrix> = word.letters().iter().map(|a| em.site_operator(a)).collect();
    let apply_word = |v: &[Complex64]| {
        let mut out = v.to_vec();
        for (axis, op) in ops.iter().enumerate() {
            out = apply_on_axis(&out, &dims, axis, op);
        }
        out
    };
    let mut total = ZERO;
    #[allow(clippy::needless_range_loop)]
    for beta in 0..h2 {
        let transformed: Vec<Vec<Complex64>> = (0..h2).map(|gamma| apply_word(&gammas[gamma][beta])).collect();
        for alpha in 0..h2 {
            for gamma in 0..h2 {
                // ξ(B_αγ) = Tr(ρ |α⟩⟨γ|) = ρ[γ, α]
                let weight = rho[(gamma, alpha)];
                if weight == ZERO {
                    continue;
                }
                let inner: Complex64 = gammas[alpha][beta]
                    .iter()
                    .zip(&transformed[gamma])
                    .map(|(x, y)| x.conj() * y)
                    .sum();
                total += weight * inner;
            }
        }
    }
    Ok(total)
}
