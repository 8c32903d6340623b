//! Reconstruction of the translation-invariant state from (E, ξ): the
//! tower ω_n = ξ ∘ E_(n), the shift map S̄(T) = E(1 ⊗ T), invariant boundary
//! functionals, correlations and fullness.

use num_complex::Complex64;

use crate::cpmap::{iterate, iterate_operator, CpMapData, Word};
use crate::error::{Error, Result};
use crate::linalg::{eigenvalues, herm_eig, matrix_unit, ComplexMatrix, ONE, ZERO};

/// Boundary functional ξ(T) = Tr(ρ T) on M_r.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryState {
    rho: ComplexMatrix,
}

const STATE_TOL: f64 = 1e-10;

impl BoundaryState {
    /// Accepts ρ if it is Hermitian, positive and of unit trace (within 1e-10).
    pub fn new(rho: ComplexMatrix) -> Result<Self> {
        if !rho.is_square() {
            return Err(Error::ShapeMismatch("density matrix must be square".into()));
        }
        let deviation = rho.hermiticity_defect();
        if deviation > STATE_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        let min = herm_eig(&rho.hermitian_part())?.eigenvalues[0];
        if min < -STATE_TOL {
            return Err(Error::NotPositive { min_eigenvalue: min });
        }
        let tr = rho.trace();
        if (tr - ONE).norm() > STATE_TOL {
            return Err(Error::NotAState(format!("trace is {tr}")));
        }
        Ok(Self { rho })
    }

    /// ρ = I/r.
    pub fn maximally_mixed(r: usize) -> Self {
        Self {
            rho: ComplexMatrix::identity(r).scale_re(1.0 / r as f64),
        }
    }

    pub fn rho(&self) -> &ComplexMatrix {
        &self.rho
    }

    pub fn dim(&self) -> usize {
        self.rho.rows()
    }

    pub fn eval(&self, t: &ComplexMatrix) -> Complex64 {
        trace_product(&self.rho, t)
    }
}

/// Tr(a · b) without forming the product.
fn trace_product(a: &ComplexMatrix, b: &ComplexMatrix) -> Complex64 {
    let n = a.rows();
    let mut acc = ZERO;
    for i in 0..n {
        for j in 0..n {
            acc += a[(i, j)] * b[(j, i)];
        }
    }
    acc
}

/// Matrix (r² × r²) of T ↦ E(a ⊗ T) in the column-stacking convention.
pub fn transfer_matrix(cp: &CpMapData, a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let (d, r) = (cp.d(), cp.r());
    if a.shape() != (d, d) {
        return Err(Error::ShapeMismatch(format!(
            "letter is {:?}, expected {d}x{d}",
            a.shape()
        )));
    }
    let dr = d * r;
    let sup = cp.superop();
    // vec(a ⊗ T) has entry a[i,j]·T[s,t] at index (j·r + t)·dr + i·r + s
    Ok(ComplexMatrix::from_fn(r * r, r * r, |row, col| {
        let (s, t) = (col % r, col / r);
        let mut acc = ZERO;
        for i in 0..d {
            for j in 0..d {
                let aij = a[(i, j)];
                if aij != ZERO {
                    acc += aij * sup[(row, (j * r + t) * dr + i * r + s)];
                }
            }
        }
        acc
    }))
}

/// Matrix of the shift map S̄(T) = E(I_d ⊗ T).
pub fn shift_superop(cp: &CpMapData) -> ComplexMatrix {
    transfer_matrix(cp, &ComplexMatrix::identity(cp.d())).expect("identity letter has the right shape")
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransferSpectrum {
    /// Sorted by modulus, largest first.
    pub eigenvalues: Vec<Complex64>,
    /// |λ₂|, or 0 when r = 1.
    pub gap_modulus: f64,
}

pub fn transfer_spectrum(cp: &CpMapData) -> Result<TransferSpectrum> {
    let eigenvalues = eigenvalues(&shift_superop(cp))?;
    let gap_modulus = eigenvalues.get(1).map_or(0.0, |z| z.norm());
    Ok(TransferSpectrum {
        eigenvalues,
        gap_modulus,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct FixedPoint {
    /// The unit e with S̄(e) = e; I_r for unital maps.
    pub unit: ComplexMatrix,
    /// Dimension of the fixed space of S̄; 1 when the fixed point is unique.
    pub multiplicity: usize,
}

impl FixedPoint {
    pub fn is_unique(&self) -> bool {
        self.multiplicity == 1
    }
}

/// Verifies S̄(I) = I and that S̄ⁿ(T₀) settles for a generic Hermitian T₀.
///
/// The fixed-space dimension is reported rather than resolved; for the
/// identity channel every T is fixed.
pub fn fixed_point_unit(cp: &CpMapData, tol: f64, max_iter: usize) -> Result<FixedPoint> {
    let r = cp.r();
    let s = shift_superop(cp);
    let unit = ComplexMatrix::identity(r);
    let image = ComplexMatrix::unvec(&s.mul_vec(&unit.vec()), r, r);
    let deviation = image.max_abs_diff(&unit);
    if deviation > tol {
        return Err(Error::NotUnital { deviation });
    }
    let mut t = ComplexMatrix::from_fn(r, r, |i, j| {
        let (i, j) = (i as f64, j as f64);
        if i == j {
            Complex64::new(1.0 + i, 0.0)
        } else {
            Complex64::new(0.5 / (1.0 + i + j), 0.25 * (j - i))
        }
    });
    let mut converged = false;
    for _ in 0..max_iter {
        let next = ComplexMatrix::unvec(&s.mul_vec(&t.vec()), r, r);
        let step = next.max_abs_diff(&t);
        t = next;
        if step <= tol * t.max_abs().max(1.0) {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence { iterations: max_iter });
    }
    let mut shifted = s.clone();
    for k in 0..r * r {
        shifted[(k, k)] -= ONE;
    }
    let multiplicity = crate::linalg::null_space(&shifted, tol.max(1e-12)).cols();
    Ok(FixedPoint { unit, multiplicity })
}

/// The state ξ with ξ ∘ S̄ = ξ and ξ(I) = 1.
///
/// ξ(T) = Tr(ρT) = vec(ρᵀ)·vec(T), so vec(ρᵀ) spans the kernel of S̄ᵀ − I.
/// The candidate is Hermitized and eigenvalues in (−1e-12, 0) are clipped
/// before the positivity test.
pub fn invariant_functional(cp: &CpMapData, tol: f64) -> Result<BoundaryState> {
    let r = cp.r();
    let n = r * r;
    let mut m = shift_superop(cp).transpose();
    for k in 0..n {
        m[(k, k)] -= ONE;
    }
    let scale = m.max_abs().max(1.0);
    let gram = m.dagger().matmul(&m).hermitian_part();
    let eig = herm_eig(&gram)?;
    let residual_of = |v: &[Complex64]| m.mul_vec(v).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let null: Vec<Vec<Complex64>> = (0..n)
        .map(|k| eig.eigenvector(k))
        .filter(|v| residual_of(v) <= tol * scale)
        .collect();
    if null.is_empty() {
        let best = residual_of(&eig.eigenvector(0));
        return Err(Error::NotInvariant { residual: best });
    }
    if null.len() > 1 {
        let candidates = null
            .iter()
            .map(|w| {
                let rho = ComplexMatrix::unvec(w, r, r).transpose();
                let tr = rho.trace();
                if tr.norm() > 1e-12 {
                    rho.scale(ONE / tr)
                } else {
                    rho
                }
            })
            .collect();
        return Err(Error::DegenerateFixedSpace {
            multiplicity: null.len(),
            candidates,
        });
    }
    let rho = ComplexMatrix::unvec(&null[0], r, r).transpose();
    let tr = rho.trace();
    if tr.norm() < 1e-12 {
        return Err(Error::NotPositive { min_eigenvalue: 0.0 });
    }
    let rho = rho.scale(ONE / tr).hermitian_part();
    let eig = herm_eig(&rho)?;
    let min = eig.eigenvalues[0];
    if min <= -1e-12 {
        return Err(Error::NotPositive { min_eigenvalue: min });
    }
    let rho = if min < 0.0 {
        eig.reconstruct_with(|l| l.max(0.0))
    } else {
        rho
    };
    let rho = rho.scale(ONE / rho.trace());
    let residual = m
        .mul_vec(&rho.transpose().vec())
        .iter()
        .map(|z| z.norm_sqr())
        .sum::<f64>()
        .sqrt();
    if residual > tol * scale {
        return Err(Error::NotInvariant { residual });
    }
    BoundaryState::new(rho)
}

fn check_boundary(cp: &CpMapData, xi: &BoundaryState) -> Result<()> {
    if xi.dim() != cp.r() {
        return Err(Error::ShapeMismatch(format!(
            "boundary state acts on C^{}, model has r = {}",
            xi.dim(),
            cp.r()
        )));
    }
    Ok(())
}

/// ω_n(a₁ ⊗ … ⊗ a_n) = ξ(E_(n)(a₁ ⊗ … ⊗ a_n ⊗ I)).
pub fn omega_eval(cp: &CpMapData, xi: &BoundaryState, word: &Word) -> Result<Complex64> {
    check_boundary(cp, xi)?;
    Ok(xi.eval(&iterate(cp, word, &ComplexMatrix::identity(cp.r()))?))
}

/// ω_n(x) for a general x ∈ M_d^{⊗n} (d^n × d^n, first site most significant).
pub fn omega_operator(cp: &CpMapData, xi: &BoundaryState, x: &ComplexMatrix, n: usize) -> Result<Complex64> {
    check_boundary(cp, xi)?;
    Ok(xi.eval(&iterate_operator(cp, x, n, &ComplexMatrix::identity(cp.r()))?))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShiftCheck {
    /// |ω_{n+1}(1 ⊗ a) − ω_n(a)|
    pub shift_residual: f64,
    /// |ω_{n+1}(a ⊗ 1) − ω_n(a)|
    pub tower_residual: f64,
    pub passed: bool,
}

impl ShiftCheck {
    pub fn residual(&self) -> f64 {
        self.shift_residual.max(self.tower_residual)
    }
}

pub fn shift_invariance_check(cp: &CpMapData, xi: &BoundaryState, word: &Word, tol: f64) -> Result<ShiftCheck> {
    let base = omega_eval(cp, xi, word)?;
    let one = Word::identity(cp.d(), 1);
    let shifted = omega_eval(cp, xi, &one.concat(word))?;
    let extended = omega_eval(cp, xi, &word.concat(&one))?;
    let shift_residual = (shifted - base).norm();
    let tower_residual = (extended - base).norm();
    Ok(ShiftCheck {
        shift_residual,
        tower_residual,
        passed: shift_residual <= tol && tower_residual <= tol,
    })
}

/// ω(A ⊗ 1^{⊗sep} ⊗ B) − ω(A)ω(B), evaluated with powers of the shift map.
pub fn correlation(
    cp: &CpMapData,
    xi: &BoundaryState,
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    separation: usize,
) -> Result<Complex64> {
    check_boundary(cp, xi)?;
    let r = cp.r();
    let ta = transfer_matrix(cp, a)?;
    let tb = transfer_matrix(cp, b)?;
    let s = shift_superop(cp);
    let unit = ComplexMatrix::identity(r).vec();
    let mut v = tb.mul_vec(&unit);
    let omega_b = xi.eval(&ComplexMatrix::unvec(&v, r, r));
    for _ in 0..separation {
        v = s.mul_vec(&v);
    }
    v = ta.mul_vec(&v);
    let joint = xi.eval(&ComplexMatrix::unvec(&v, r, r));
    let omega_a = xi.eval(&ComplexMatrix::unvec(&ta.mul_vec(&unit), r, r));
    Ok(joint - omega_a * omega_b)
}

/// Same quantity as [`correlation`], evaluated on the explicit word
/// [A, 1, …, 1, B] through the tower.
pub fn correlation_by_word(
    cp: &CpMapData,
    xi: &BoundaryState,
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    separation: usize,
) -> Result<Complex64> {
    let d = cp.d();
    let mut letters = vec![a.clone()];
    letters.extend(std::iter::repeat_n(ComplexMatrix::identity(d), separation));
    letters.push(b.clone());
    let joint = omega_eval(cp, xi, &Word::new(letters))?;
    let omega_a = omega_eval(cp, xi, &Word::new(vec![a.clone()]))?;
    let omega_b = omega_eval(cp, xi, &Word::new(vec![b.clone()]))?;
    Ok(joint - omega_a * omega_b)
}

/// Exponential clustering rate |λ₂| of the shift map.
///
/// Fails with [`Error::DegenerateFixedSpace`] when eigenvalue 1 is not simple.
pub fn clustering_rate(cp: &CpMapData) -> Result<f64> {
    invariant_functional(cp, 1e-9)?;
    Ok(transfer_spectrum(cp)?.gap_modulus)
}

/// Expectation of `word` (on sites 0..n) in the periodic chain of `length`
/// sites: Tr(T_{a₁} ⋯ T_{a_n} S̄^{L−n}) / Tr(S̄^L), T_a the transfer matrices.
pub fn ring_expectation(cp: &CpMapData, word: &Word, length: usize) -> Result<Complex64> {
    word.check_dim(cp.d())?;
    if word.len() > length || length == 0 {
        return Err(Error::InvalidArgument(format!(
            "word of length {} does not fit a ring of {length} sites",
            word.len()
        )));
    }
    let s = shift_superop(cp);
    let mut num = ComplexMatrix::identity(s.rows());
    for a in word.letters() {
        num = num.matmul(&transfer_matrix(cp, a)?);
    }
    let mut den = ComplexMatrix::identity(s.rows());
    for k in 0..length {
        den = den.matmul(&s);
        if k + word.len() < length {
            num = num.matmul(&s);
        }
    }
    Ok(num.trace() / den.trace())
}

/// Dimension of span{E_(n)(x ⊗ s) : 1 ≤ n ≤ n_max, x ∈ M_d^{⊗n}} in M_r.
///
/// Uses E_(n+1)(x ⊗ y ⊗ s) = E(x ⊗ E_(n)(y ⊗ s)): the level-(n+1) span is
/// generated by E(e_ij ⊗ T) with T running over a basis of level n.
/// Vectors count as independent above a relative tolerance of 1e-8.
pub fn fullness_dimension(cp: &CpMapData, s: &ComplexMatrix, n_max: usize) -> Result<usize> {
    let (d, r) = (cp.d(), cp.r());
    if s.shape() != (r, r) {
        return Err(Error::ShapeMismatch(format!(
            "seed is {:?}, expected {r}x{r}",
            s.shape()
        )));
    }
    if s.max_abs() == 0.0 {
        return Err(Error::InvalidArgument("fullness seed must be nonzero".into()));
    }
    let units: Vec<ComplexMatrix> = (0..d * d).map(|k| matrix_unit(d, k / d, k % d)).collect();
    let mut total: Vec<Vec<Complex64>> = Vec::new();
    let mut level = vec![s.clone()];
    for _ in 0..n_max {
        let mut next: Vec<Vec<Complex64>> = Vec::new();
        for t in &level {
            for e in &units {
                let v = cp.apply_monomial(e, t).vec();
                push_independent(&mut next, v.clone());
                push_independent(&mut total, v);
            }
        }
        if next.is_empty() || total.len() == r * r && next.len() == r * r {
            break;
        }
        level = next.iter().map(|v| ComplexMatrix::unvec(v, r, r)).collect();
    }
    Ok(total.len())
}

/// Gram–Schmidt step: appends the normalized residual of `v` against the
/// orthonormal `basis` if it exceeds 1e-8 of ‖v‖.
fn push_independent(basis: &mut Vec<Vec<Complex64>>, mut v: Vec<Complex64>) {
    let norm0 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm0 < 1e-300 {
        return;
    }
    for _ in 0..2 {
        for u in basis.iter() {
            let proj: Complex64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (vi, ui) in v.iter_mut().zip(u) {
                *vi -= proj * ui;
            }
        }
    }
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm > 1e-8 * norm0 {
        basis.push(v.into_iter().map(|z| z / norm).collect());
    }
}
