//! Finite-window entanglement kernel of a reconstructed state.
//!
//! For a left window of m sites and a right window of n sites the functional
//! matrix F[x, a] = ω(x ⊗ a) is indexed by Hilbert–Schmidt orthonormal
//! monomial bases (products of generalized Gell-Mann matrices, first site
//! most significant). Its null space is the truncated kernel K ⊂ M_d^{⊗n};
//! the quotient M_d^{⊗n} / K is the reduced space seen from the left.
//!
//! F factors as L·R where row x of L is the functional T ↦ ξ(E_(m)(x ⊗ T))
//! on M_r and column a of R is vec(E_(n)(a ⊗ I)), so every rank computation
//! reduces to r²-sized Gram matrices.

use num_complex::Complex64;
use rand::Rng;

use crate::cpmap::{iterate_operator, CpMapData};
use crate::error::{Error, Result};
use crate::linalg::{
    digits, gell_mann_basis, herm_eig, kron_all, matrix_unit, operator_norm, range_basis, ComplexMatrix, ONE, ZERO,
};
use crate::random;
use crate::reconstruct::{transfer_matrix, BoundaryState};

/// Upper limit on d^{2(m+n)}, the number of entries of F.
pub const MAX_WINDOW_ENTRIES: u128 = 1_000_000;

/// Default number of ascent steps for [`archimedean_membership`].
pub const DEFAULT_ASCENT_ITERS: usize = 500;

/// Element `index` of the monomial basis of M_d^{⊗n}.
pub fn monomial_basis_element(d: usize, n: usize, index: usize) -> ComplexMatrix {
    let basis = gell_mann_basis(d);
    if n == 0 {
        return ComplexMatrix::identity(1);
    }
    let factors: Vec<&ComplexMatrix> = digits(index, d * d, n).into_iter().map(|k| &basis[k]).collect();
    kron_all(factors)
}

/// Coordinates of x in the monomial basis of M_d^{⊗n}.
pub fn monomial_coefficients(x: &ComplexMatrix, d: usize, n: usize) -> Vec<Complex64> {
    let count = (d * d).pow(n as u32);
    (0..count)
        .map(|k| monomial_basis_element(d, n, k).hs_inner(x))
        .collect()
}

#[derive(Debug, Clone)]
pub struct FunctionalMatrix {
    pub m_left: usize,
    pub n_right: usize,
    pub d: usize,
    /// F = L·R, d^{2m} × d^{2n}.
    pub matrix: ComplexMatrix,
    left: ComplexMatrix,
    right: ComplexMatrix,
}

impl FunctionalMatrix {
    /// L: rows are the left functionals as r²-vectors, T ↦ Σ L[x, k]·vec(T)[k].
    pub fn left(&self) -> &ComplexMatrix {
        &self.left
    }

    /// R: columns are vec(E_(n)(a ⊗ I)).
    pub fn right(&self) -> &ComplexMatrix {
        &self.right
    }

    pub fn rank(&self, tol: f64) -> usize {
        quotient_basis(self, tol).cols()
    }
}

fn window_guard(d: usize, m: usize, n: usize) -> Result<()> {
    let entries = (d as u128).checked_pow(2 * (m + n) as u32).unwrap_or(u128::MAX);
    if entries > MAX_WINDOW_ENTRIES {
        return Err(Error::WindowTooLarge {
            entries,
            limit: MAX_WINDOW_ENTRIES,
        });
    }
    Ok(())
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

fn basis_transfers(cp: &CpMapData) -> Vec<ComplexMatrix> {
    gell_mann_basis(cp.d())
        .iter()
        .map(|g| transfer_matrix(cp, g).expect("basis letter has the right shape"))
        .collect()
}

/// Rows ξ(E_(m)(x ⊗ ·)) for the monomial basis x of M_d^{⊗m}.
fn left_functionals(cp: &CpMapData, xi: &BoundaryState, transfers: &[ComplexMatrix], m: usize) -> ComplexMatrix {
    let r2 = cp.r() * cp.r();
    // ξ(T) = vec(ρᵀ)·vec(T)
    let w = xi.rho().transpose().vec();
    let mut rows = vec![w];
    for _ in 0..m {
        let mut next = Vec::with_capacity(rows.len() * transfers.len());
        for row in &rows {
            for t in transfers {
                next.push((0..r2).map(|c| (0..r2).map(|k| row[k] * t[(k, c)]).sum()).collect());
            }
        }
        rows = next;
    }
    ComplexMatrix::from_rows(&rows)
}

/// Columns vec(E_(n)(a ⊗ I)) for the monomial basis a of M_d^{⊗n}.
fn right_images(cp: &CpMapData, transfers: &[ComplexMatrix], n: usize) -> ComplexMatrix {
    let r = cp.r();
    let mut cols = vec![ComplexMatrix::identity(r).vec()];
    for _ in 0..n {
        let mut next = Vec::with_capacity(cols.len() * transfers.len());
        for t in transfers {
            for col in &cols {
                next.push(t.mul_vec(col));
            }
        }
        cols = next;
    }
    ComplexMatrix::from_columns(r * r, &cols)
}

/// F[x, a] = ω(x ⊗ a) for x on m_left sites and a on the n_right sites to
/// their right.
pub fn functional_matrix(
    cp: &CpMapData,
    xi: &BoundaryState,
    m_left: usize,
    n_right: usize,
) -> Result<FunctionalMatrix> {
    check_boundary(cp, xi)?;
    if m_left == 0 || n_right == 0 {
        return Err(Error::InvalidArgument("window lengths must be at least 1".into()));
    }
    window_guard(cp.d(), m_left, n_right)?;
    let transfers = basis_transfers(cp);
    let left = left_functionals(cp, xi, &transfers, m_left);
    let right = right_images(cp, &transfers, n_right);
    let matrix = left.matmul(&right);
    Ok(FunctionalMatrix {
        m_left,
        n_right,
        d: cp.d(),
        matrix,
        left,
        right,
    })
}

/// Orthonormal basis (columns) of range(F†), the HS-orthogonal complement
/// of the kernel, computed through the factorization F = L·R.
fn quotient_basis(f: &FunctionalMatrix, tol: f64) -> ComplexMatrix {
    let n = f.right.cols();
    let lb = range_basis(&f.left.dagger(), tol);
    if lb.cols() == 0 {
        return ComplexMatrix::zeros(n, 0);
    }
    let a = f.right.dagger().matmul(&lb);
    column_space(&a, tol)
}

/// Orthonormal basis of the column space of a tall matrix from its small
/// Gram matrix a†a.
fn column_space(a: &ComplexMatrix, tol: f64) -> ComplexMatrix {
    let gram = a.dagger().matmul(a).hermitian_part();
    let eig = herm_eig(&gram).expect("Gram matrix is Hermitian");
    let top = eig.eigenvalues.last().copied().unwrap_or(0.0);
    let mut cols: Vec<Vec<Complex64>> = Vec::new();
    for k in (0..gram.rows()).rev() {
        let l = eig.eigenvalues[k];
        if top <= 0.0 || l <= tol * tol * top {
            continue;
        }
        let mut u = a.mul_vec(&eig.eigenvector(k));
        orthogonalize(&mut u, &cols);
        let norm = norm(&u);
        if norm > 0.0 {
            cols.push(u.into_iter().map(|z| z / norm).collect());
        }
    }
    ComplexMatrix::from_columns(a.rows(), &cols)
}

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn orthogonalize(v: &mut [Complex64], basis: &[Vec<Complex64>]) {
    for _ in 0..2 {
        for u in basis {
            let proj: Complex64 = u.iter().zip(v.iter()).map(|(a, b)| a.conj() * b).sum();
            for (vi, ui) in v.iter_mut().zip(u) {
                *vi -= proj * ui;
            }
        }
    }
}

/// Truncated kernel K ⊂ M_d^{⊗n} as a list of HS-orthonormal operators.
#[derive(Debug, Clone)]
pub struct KernelBasis {
    pub elements: Vec<ComplexMatrix>,
    /// Columns: the elements in monomial-basis coordinates (window kernels only).
    pub coefficients: Option<ComplexMatrix>,
    /// Orthonormal quotient representatives in monomial coordinates (window kernels only).
    pub complement: Option<ComplexMatrix>,
    pub quotient_dim: usize,
    /// Set when F vanishes identically, so the quotient is trivial.
    pub degenerate: bool,
}

impl KernelBasis {
    /// Kernel spanned by the given operators (orthonormalized); quotient
    /// dimension is taken relative to the full matrix algebra.
    pub fn from_elements(elements: &[ComplexMatrix]) -> Result<Self> {
        let dim = match elements.first() {
            Some(e) => e.rows(),
            None => {
                return Ok(Self::empty(0));
            }
        };
        let mut vecs: Vec<Vec<Complex64>> = Vec::new();
        for e in elements {
            if e.shape() != (dim, dim) {
                return Err(Error::ShapeMismatch(
                    "kernel elements must share one square shape".into(),
                ));
            }
            let mut v = e.as_slice().to_vec();
            let n0 = norm(&v);
            orthogonalize(&mut v, &vecs);
            let n = norm(&v);
            if n > 1e-10 * n0.max(1e-300) {
                vecs.push(v.into_iter().map(|z| z / n).collect());
            }
        }
        let elements: Vec<ComplexMatrix> = vecs
            .into_iter()
            .map(|v| ComplexMatrix::from_vec(dim, dim, v).expect("length matches"))
            .collect();
        Ok(Self {
            quotient_dim: dim * dim - elements.len(),
            elements,
            coefficients: None,
            complement: None,
            degenerate: false,
        })
    }

    /// The zero kernel on M_dim.
    pub fn empty(dim: usize) -> Self {
        Self {
            elements: Vec::new(),
            coefficients: None,
            complement: None,
            quotient_dim: dim * dim,
            degenerate: false,
        }
    }

    pub fn dim(&self) -> usize {
        self.elements.len()
    }

    /// Kernel of the level-`level` amplification: e_ij ⊗ k for all matrix
    /// units of M_level and kernel elements k.
    pub fn amplify(&self, level: usize) -> KernelBasis {
        let mut elements = Vec::with_capacity(level * level * self.elements.len());
        for i in 0..level {
            for j in 0..level {
                let e = matrix_unit(level, i, j);
                for k in &self.elements {
                    elements.push(e.kron(k));
                }
            }
        }
        KernelBasis {
            elements,
            coefficients: None,
            complement: None,
            quotient_dim: level * level * self.quotient_dim,
            degenerate: self.degenerate,
        }
    }
}

/// Null space of F with singular values below `tol`·σ_max counted as zero.
pub fn kernel_basis(f: &FunctionalMatrix, tol: f64) -> KernelBasis {
    let (d, n) = (f.d, f.n_right);
    let size = f.right.cols();
    let q = quotient_basis(f, tol);
    let mut kernel: Vec<Vec<Complex64>> = Vec::with_capacity(size - q.cols());
    let mut span: Vec<Vec<Complex64>> = (0..q.cols()).map(|c| q.column(c)).collect();
    for c in 0..size {
        if kernel.len() + q.cols() == size {
            break;
        }
        let mut v = vec![ZERO; size];
        v[c] = ONE;
        orthogonalize(&mut v, &span);
        let nv = norm(&v);
        if nv > 1e-6 {
            let v: Vec<Complex64> = v.into_iter().map(|z| z / nv).collect();
            span.push(v.clone());
            kernel.push(v);
        }
    }
    let basis: Vec<ComplexMatrix> = (0..size).map(|k| monomial_basis_element(d, n, k)).collect();
    let elements = kernel
        .iter()
        .map(|v| {
            let mut acc = ComplexMatrix::zeros(basis[0].rows(), basis[0].cols());
            for (coef, g) in v.iter().zip(&basis) {
                if *coef != ZERO {
                    acc.axpy(*coef, g);
                }
            }
            acc
        })
        .collect();
    KernelBasis {
        elements,
        coefficients: Some(ComplexMatrix::from_columns(size, &kernel)),
        quotient_dim: q.cols(),
        degenerate: q.cols() == 0,
        complement: Some(q),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuotientProfile {
    pub n_right: usize,
    /// quotient_dims[k] is the quotient dimension for m_left = k + 1.
    pub quotient_dims: Vec<usize>,
    /// The last two entries agree.
    pub stabilized: bool,
}

pub fn quotient_profile(
    cp: &CpMapData,
    xi: &BoundaryState,
    m_max: usize,
    n_right: usize,
    tol: f64,
) -> Result<QuotientProfile> {
    window_guard(cp.d(), m_max, n_right)?;
    let mut quotient_dims = Vec::with_capacity(m_max);
    for m in 1..=m_max {
        let f = functional_matrix(cp, xi, m, n_right)?;
        quotient_dims.push(f.rank(tol));
    }
    let stabilized =
        quotient_dims.len() >= 2 && quotient_dims[quotient_dims.len() - 1] == quotient_dims[quotient_dims.len() - 2];
    Ok(QuotientProfile {
        n_right,
        quotient_dims,
        stabilized,
    })
}

/// Left-conditioning operators: g†g for each monomial basis element g of
/// the left window, then `samples` random y†y.
fn conditioning_operators(d: usize, m: usize, samples: usize, seed: u64) -> Vec<ComplexMatrix> {
    let count = (d * d).pow(m as u32);
    let dim = d.pow(m as u32);
    let mut out: Vec<ComplexMatrix> = (0..count)
        .map(|k| {
            let g = monomial_basis_element(d, m, k);
            g.dagger().matmul(&g)
        })
        .collect();
    let mut rng = random::rng(seed);
    for _ in 0..samples {
        out.push(random::random_psd(dim, &mut rng));
    }
    out
}

/// Left functionals ℓ_x(T) = ξ(E_(m)(x ⊗ T)) for the given x, as r²-rows.
fn conditioned_functionals(f: &FunctionalMatrix, xs: &[ComplexMatrix]) -> Vec<Vec<Complex64>> {
    let (d, m) = (f.d, f.m_left);
    let r2 = f.left.cols();
    let basis: Vec<ComplexMatrix> = (0..f.left.rows()).map(|k| monomial_basis_element(d, m, k)).collect();
    xs.iter()
        .map(|x| {
            let mut row = vec![ZERO; r2];
            for (k, g) in basis.iter().enumerate() {
                let c = g.hs_inner(x);
                if c == ZERO {
                    continue;
                }
                for (j, entry) in row.iter_mut().enumerate() {
                    *entry += c * f.left[(k, j)];
                }
            }
            row
        })
        .collect()
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Sampled lower bound on Γ(b) = sup_x |ω_x(b)| where ω_x(b) = ω(x ⊗ b)/ω(x)
/// runs over left-conditioned states with x ⪰ 0 on `m_left` sites.
///
/// `b_repr` is a d^n × d^n operator on the right window. The identity gives
/// exactly 1 because numerator and denominator follow the same path.
pub fn gamma_lower_bound(
    cp: &CpMapData,
    xi: &BoundaryState,
    b_repr: &ComplexMatrix,
    n_right: usize,
    m_left: usize,
    samples: usize,
    seed: u64,
) -> Result<f64> {
    let f = functional_matrix(cp, xi, m_left, n_right)?;
    let values = conditioned_values(cp, &f, std::slice::from_ref(b_repr), samples, seed)?;
    Ok(values.iter().map(|v| v[0].norm()).fold(0.0, f64::max))
}

/// ω_x(b_k) for every conditioning operator x and every b_k.
fn conditioned_values(
    cp: &CpMapData,
    f: &FunctionalMatrix,
    bs: &[ComplexMatrix],
    samples: usize,
    seed: u64,
) -> Result<Vec<Vec<Complex64>>> {
    let r = cp.r();
    let n = f.n_right;
    let unit = iterate_operator(
        cp,
        &ComplexMatrix::identity(cp.d().pow(n as u32)),
        n,
        &ComplexMatrix::identity(r),
    )?
    .vec();
    let images: Vec<Vec<Complex64>> = bs
        .iter()
        .map(|b| iterate_operator(cp, b, n, &ComplexMatrix::identity(r)).map(|t| t.vec()))
        .collect::<Result<_>>()?;
    let xs = conditioning_operators(f.d, f.m_left, samples, seed);
    let rows = conditioned_functionals(f, &xs);
    let scale = rows.iter().map(|row| dot(row, &unit).norm()).fold(0.0, f64::max);
    Ok(rows
        .iter()
        .filter_map(|row| {
            let denom = dot(row, &unit);
            if denom.norm() <= 1e-12 * scale {
                return None;
            }
            let denom = denom.norm();
            Some(images.iter().map(|img| dot(row, img) / denom).collect())
        })
        .collect())
}

/// Matrix-level Γ_k lower bound for b ∈ M_k(M_d^{⊗n}) given as a
/// (k·d^n)-square block matrix: sup_x ‖[ω_x(b_ij)]‖.
#[allow(clippy::too_many_arguments)]
pub fn gamma_n_lower_bound(
    cp: &CpMapData,
    xi: &BoundaryState,
    b_blocks: &ComplexMatrix,
    level: usize,
    n_right: usize,
    m_left: usize,
    samples: usize,
    seed: u64,
) -> Result<f64> {
    let block = cp.d().pow(n_right as u32);
    if level == 0 || b_blocks.shape() != (level * block, level * block) {
        return Err(Error::ShapeMismatch(format!(
            "block operator is {:?}, expected {}x{}",
            b_blocks.shape(),
            level * block,
            level * block
        )));
    }
    let f = functional_matrix(cp, xi, m_left, n_right)?;
    let mut bs = Vec::with_capacity(level * level);
    for i in 0..level {
        for j in 0..level {
            bs.push(b_blocks.submatrix(i * block, j * block, block, block));
        }
    }
    let values = conditioned_values(cp, &f, &bs, samples, seed)?;
    Ok(values
        .iter()
        .map(|v| operator_norm(&ComplexMatrix::from_vec(level, level, v.clone()).expect("level² entries")))
        .fold(0.0, f64::max))
}

#[derive(Debug, Clone, PartialEq)]
pub struct GammaProbe {
    /// Minimum sampled Γ over random unit quotient representatives. This is
    /// an upper bound on inf{Γ(b) : ‖b‖ = 1}, not a certificate.
    pub value: f64,
    pub quotient_dim: usize,
    pub degenerate: bool,
}

/// Probes inf{Γ(b) : ‖b‖₂ = 1} over the quotient by sampling `samples`
/// random unit representatives orthogonal to the kernel.
pub fn gamma_condition_probe(
    cp: &CpMapData,
    xi: &BoundaryState,
    n_right: usize,
    m_left: usize,
    samples: usize,
    seed: u64,
) -> Result<GammaProbe> {
    let f = functional_matrix(cp, xi, m_left, n_right)?;
    let q = quotient_basis(&f, 1e-8);
    if q.cols() == 0 {
        return Ok(GammaProbe {
            value: 0.0,
            quotient_dim: 0,
            degenerate: true,
        });
    }
    let (d, n) = (cp.d(), n_right);
    let basis: Vec<ComplexMatrix> = (0..q.rows()).map(|k| monomial_basis_element(d, n, k)).collect();
    let mut rng = random::rng(seed);
    let mut reps = Vec::with_capacity(samples.max(1));
    for _ in 0..samples.max(1) {
        let coeffs = random::random_unit_vector(q.cols(), &mut rng);
        let v = q.mul_vec(&coeffs);
        let mut b = ComplexMatrix::zeros(basis[0].rows(), basis[0].cols());
        for (c, g) in v.iter().zip(&basis) {
            b.axpy(*c, g);
        }
        reps.push(b);
    }
    let inner_seed = rng.random::<u64>();
    let values = conditioned_values(cp, &f, &reps, samples, inner_seed)?;
    let value = (0..reps.len())
        .map(|k| values.iter().map(|v| v[k].norm()).fold(0.0, f64::max))
        .fold(f64::INFINITY, f64::min);
    Ok(GammaProbe {
        value,
        quotient_dim: q.cols(),
        degenerate: false,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Membership {
    pub member: bool,
    /// Best value of λ_min(a + k) found over Hermitian kernel elements k.
    pub value: f64,
}

/// Real HS-orthonormal basis of the Hermitian elements in span(kernel).
fn hermitian_kernel_basis(kernel: &KernelBasis) -> Vec<ComplexMatrix> {
    let mut out: Vec<ComplexMatrix> = Vec::new();
    let i = Complex64::new(0.0, 1.0);
    for k in &kernel.elements {
        let re = (k + &k.dagger()).scale_re(0.5);
        let im = (k - &k.dagger()).scale(-i * 0.5);
        for mut h in [re, im] {
            for _ in 0..2 {
                for g in &out {
                    let proj = g.hs_inner(&h).re;
                    h.axpy(Complex64::new(-proj, 0.0), g);
                }
            }
            let n = h.frobenius_norm();
            if n > 1e-10 {
                out.push(h.scale_re(1.0 / n));
            }
        }
    }
    out
}

fn check_hermitian(a: &ComplexMatrix) -> Result<()> {
    let deviation = a.hermiticity_defect();
    if deviation > 1e-10 * a.max_abs().max(1.0) {
        return Err(Error::NotHermitian { deviation });
    }
    Ok(())
}

fn combination(a: &ComplexMatrix, basis: &[ComplexMatrix], c: &[f64]) -> ComplexMatrix {
    let mut m = a.clone();
    for (cj, h) in c.iter().zip(basis) {
        m.axpy(Complex64::new(*cj, 0.0), h);
    }
    m.hermitian_part()
}

/// Soft-min −μ log Σ exp(−λ_i/μ) and its gradient in kernel coordinates.
fn smoothed_min(m: &ComplexMatrix, basis: &[ComplexMatrix], mu: f64) -> (f64, f64, Vec<f64>) {
    let eig = herm_eig(m).expect("combination is Hermitian");
    let lmin = eig.eigenvalues[0];
    let weights: Vec<f64> = eig.eigenvalues.iter().map(|l| (-(l - lmin) / mu).exp()).collect();
    let total: f64 = weights.iter().sum();
    let value = lmin - mu * total.ln();
    let mut grad = vec![0.0; basis.len()];
    for (k, w) in weights.iter().enumerate() {
        if *w < 1e-18 {
            continue;
        }
        let v = eig.eigenvector(k);
        for (g, h) in grad.iter_mut().zip(basis) {
            let hv = h.mul_vec(&v);
            let expect: Complex64 = v.iter().zip(&hv).map(|(a, b)| a.conj() * b).sum();
            *g += w / total * expect.re;
        }
    }
    (value, lmin, grad)
}

/// Largest λ_min(a + k) over Hermitian k in span(kernel).
///
/// λ_min is concave in k; it is maximized by gradient ascent on the
/// soft-min smoothing with backtracking steps, tightening the smoothing
/// width over ten rounds of `iters / 10` steps. The best exact λ_min seen
/// is returned.
fn max_min_eigenvalue(a: &ComplexMatrix, kernel: &KernelBasis, iters: usize) -> f64 {
    let basis = hermitian_kernel_basis(kernel);
    let lambda0 = herm_eig(&a.hermitian_part()).expect("Hermitian").eigenvalues[0];
    if basis.is_empty() {
        return lambda0;
    }
    let scale = operator_norm(a).max(1.0);
    let cap = 1e6 * scale;
    let rounds = 10;
    let per_round = (iters / rounds).max(20);
    let mut c = vec![0.0; basis.len()];
    let mut best = lambda0;
    let mut step = scale;
    for round in 0..rounds {
        let mu = scale * 10f64.powi(-(round as i32) - 1);
        let (mut value, _, mut grad) = smoothed_min(&combination(a, &basis, &c), &basis, mu);
        for _ in 0..per_round {
            let gnorm2: f64 = grad.iter().map(|g| g * g).sum();
            if gnorm2 < 1e-30 {
                break;
            }
            let mut accepted = false;
            while step > 1e-16 * scale {
                let trial: Vec<f64> = c.iter().zip(&grad).map(|(ci, gi)| ci + step * gi).collect();
                let (tv, tmin, tg) = smoothed_min(&combination(a, &basis, &trial), &basis, mu);
                if tv >= value + 1e-4 * step * gnorm2 {
                    c = trial;
                    value = tv;
                    grad = tg;
                    best = best.max(tmin);
                    step *= 2.0;
                    accepted = true;
                    break;
                }
                step *= 0.5;
            }
            if !accepted || best > cap {
                break;
            }
        }
        if best > cap {
            break;
        }
        step = step.max(mu);
    }
    best
}

/// Tests whether ε·1 + a + k ⪰ 0 is reachable for every ε > 0 with k in the
/// kernel, i.e. whether sup_k λ_min(a + k) ≥ −tol.
pub fn archimedean_membership(a: &ComplexMatrix, kernel: &KernelBasis, tol: f64, iters: usize) -> Result<Membership> {
    check_hermitian(a)?;
    check_kernel_shape(a, kernel)?;
    let value = max_min_eigenvalue(a, kernel, iters);
    Ok(Membership {
        member: value >= -tol,
        value,
    })
}

fn check_kernel_shape(a: &ComplexMatrix, kernel: &KernelBasis) -> Result<()> {
    if let Some(k) = kernel.elements.first() {
        if k.shape() != a.shape() {
            return Err(Error::ShapeMismatch(format!(
                "kernel elements are {:?}, operator is {:?}",
                k.shape(),
                a.shape()
            )));
        }
    }
    Ok(())
}

/// Order seminorm ⟦a⟧ = inf{t ≥ 0 : t·1 ± a in the Archimedean cone}.
///
/// Membership of t·1 + a is λ_min-monotone in t with sup_k λ_min(t·1 + a + k)
/// = t + m(a), so the bisection over t collapses to
/// ⟦a⟧ = max(0, −m(a), −m(−a)) with m(a) = sup_k λ_min(a + k).
/// `tol` is the precision target of the ascent.
pub fn order_seminorm(a: &ComplexMatrix, kernel: &KernelBasis, tol: f64) -> Result<f64> {
    check_hermitian(a)?;
    check_kernel_shape(a, kernel)?;
    let iters = if tol < 1e-8 {
        4 * DEFAULT_ASCENT_ITERS
    } else {
        DEFAULT_ASCENT_ITERS
    };
    let plus = max_min_eigenvalue(a, kernel, iters);
    let minus = max_min_eigenvalue(&a.scale_re(-1.0), kernel, iters);
    Ok(0f64.max(-plus).max(-minus))
}
