use num_complex::Complex64;

use super::matrix::{ComplexMatrix, ONE, ZERO};
use crate::error::{Error, Result};

const HERMITIAN_TOL: f64 = 1e-10;
const MAX_SWEEPS: usize = 100;
const MAX_QR_ITERS_PER_EIGENVALUE: usize = 200;

/// Spectral decomposition of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermEigResult {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Column `k` is the unit eigenvector for `eigenvalues[k]`.
    pub eigenvectors: ComplexMatrix,
}

impl HermEigResult {
    pub fn eigenvector(&self, k: usize) -> Vec<Complex64> {
        self.eigenvectors.column(k)
    }

    /// Σ_k f(λ_k) |v_k⟩⟨v_k|.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.eigenvalues.len();
        let mut out = ComplexMatrix::zeros(n, n);
        for (k, &lambda) in self.eigenvalues.iter().enumerate() {
            let w = f(lambda);
            if w == 0.0 {
                continue;
            }
            let v = self.eigenvector(k);
            for i in 0..n {
                let vi = v[i] * w;
                for j in 0..n {
                    out[(i, j)] += vi * v[j].conj();
                }
            }
        }
        out
    }
}

/// Full spectral decomposition of a Hermitian matrix by cyclic Jacobi
/// rotations.
pub fn herm_eig(m: &ComplexMatrix) -> Result<HermEigResult> {
    if !m.is_square() {
        return Err(Error::ShapeMismatch(format!(
            "herm_eig needs a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let scale = m.frobenius_norm();
    let deviation = m.hermiticity_defect();
    if deviation > HERMITIAN_TOL * scale.max(f64::MIN_POSITIVE) && deviation > 0.0 {
        return Err(Error::NotHermitian { deviation });
    }
    Ok(jacobi(&m.hermitian_part()))
}

fn jacobi(m: &ComplexMatrix) -> HermEigResult {
    let n = m.rows();
    let mut a = m.clone();
    let mut v = ComplexMatrix::identity(n);
    let scale = a.frobenius_norm();

    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= f64::EPSILON * scale || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let mag = apq.norm();
                if mag <= f64::MIN_POSITIVE {
                    continue;
                }
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                // Skip rotations that cannot change the diagonal in floating point.
                if mag < 1e-3 * f64::EPSILON * (app.abs() + aqq.abs()) {
                    a[(p, q)] = ZERO;
                    a[(q, p)] = ZERO;
                    continue;
                }
                let phase = apq / mag;
                let theta = (aqq - app) / (2.0 * mag);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                // J = diag(1, e^{-iφ}) · [[c, s], [-s, c]] in the (p, q) plane.
                let jpp = Complex64::new(c, 0.0);
                let jpq = Complex64::new(s, 0.0);
                let jqp = -phase.conj() * s;
                let jqq = phase.conj() * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * jpp + akq * jqp;
                    a[(k, q)] = akp * jpq + akq * jqq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = jpp.conj() * apk + jqp.conj() * aqk;
                    a[(q, k)] = jpq.conj() * apk + jqq.conj() * aqk;
                }
                a[(p, q)] = ZERO;
                a[(q, p)] = ZERO;
                a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * jpp + vkq * jqp;
                    v[(k, q)] = vkp * jpq + vkq * jqq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let eigenvalues = order.iter().map(|&i| a[(i, i)].re).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, n, |i, k| v[(i, order[k])]);
    HermEigResult {
        eigenvalues,
        eigenvectors,
    }
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_eig(m: &ComplexMatrix) -> Result<f64> {
    Ok(herm_eig(m)?.eigenvalues.first().copied().unwrap_or(0.0))
}

/// Largest singular value, from the spectrum of a†a.
pub fn operator_norm(a: &ComplexMatrix) -> f64 {
    if a.rows() == 0 || a.cols() == 0 {
        return 0.0;
    }
    let gram = a.dagger().matmul(a);
    let top = jacobi(&gram.hermitian_part())
        .eigenvalues
        .last()
        .copied()
        .unwrap_or(0.0);
    top.max(0.0).sqrt()
}

/// Orthonormal basis of `{v : ‖m·v‖ ≤ tol·‖m‖}` as the columns of the
/// returned matrix (zero columns when the kernel is trivial).
///
/// Candidates come from the eigenvectors of m†m; each is accepted by its
/// directly measured residual ‖m·v‖, which is far more accurate than the
/// square root of a tiny Gram eigenvalue.
pub fn null_space(m: &ComplexMatrix, tol: f64) -> ComplexMatrix {
    assert!(tol > 0.0, "null_space tolerance must be positive");
    let n = m.cols();
    if n == 0 {
        return ComplexMatrix::zeros(0, 0);
    }
    let norm = operator_norm(m);
    let gram = m.dagger().matmul(m).hermitian_part();
    let eig = jacobi(&gram);
    let threshold = tol * norm;
    let mut cols = Vec::new();
    for k in 0..n {
        let v = eig.eigenvector(k);
        let mv = m.mul_vec(&v);
        let res = mv.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if res <= threshold {
            cols.push(v);
        }
    }
    ComplexMatrix::from_columns(n, &cols)
}

/// Orthonormal basis of the column space of `m` (Gram eigenvectors whose
/// eigenvalue exceeds `tol²·λ_max`), i.e. the complement of [`null_space`].
pub fn range_basis(m: &ComplexMatrix, tol: f64) -> ComplexMatrix {
    let gram = m.matmul(&m.dagger()).hermitian_part();
    let eig = jacobi(&gram);
    let top = eig.eigenvalues.last().copied().unwrap_or(0.0);
    let cols: Vec<Vec<Complex64>> = (0..gram.rows())
        .filter(|&k| top > 0.0 && eig.eigenvalues[k] > tol * tol * top)
        .map(|k| eig.eigenvector(k))
        .collect();
    ComplexMatrix::from_columns(m.rows(), &cols)
}

/// Numerical rank: number of Gram eigenvalues above `tol·λ_max`.
pub fn gram_rank(vectors: &[Vec<Complex64>], tol: f64) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    let k = vectors.len();
    let gram = ComplexMatrix::from_fn(k, k, |i, j| {
        vectors[i].iter().zip(&vectors[j]).map(|(a, b)| a.conj() * b).sum()
    });
    let eig = jacobi(&gram.hermitian_part());
    let top = eig.eigenvalues.last().copied().unwrap_or(0.0);
    if top <= 0.0 {
        return 0;
    }
    eig.eigenvalues.iter().filter(|&&l| l > tol * top).count()
}

/// Modified Gram–Schmidt (run twice) on the columns of `m`; returns the Q
/// factor of a thin QR. Panics if the columns are numerically dependent.
pub fn orthonormalize_columns(m: &ComplexMatrix) -> ComplexMatrix {
    let (rows, cols) = m.shape();
    let mut q: Vec<Vec<Complex64>> = Vec::with_capacity(cols);
    for j in 0..cols {
        let mut v = m.column(j);
        for _ in 0..2 {
            for u in &q {
                let proj: Complex64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (vi, ui) in v.iter_mut().zip(u) {
                    *vi -= proj * ui;
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        assert!(norm > 1e-12, "columns are linearly dependent");
        for vi in &mut v {
            *vi /= norm;
        }
        q.push(v);
    }
    ComplexMatrix::from_columns(rows, &q)
}

/// Eigenvalues of a general square matrix, via Householder reduction to
/// Hessenberg form followed by Wilkinson-shifted complex QR sweeps.
/// Sorted by modulus descending (ties broken by real then imaginary part).
pub fn eigenvalues(m: &ComplexMatrix) -> Result<Vec<Complex64>> {
    if !m.is_square() {
        return Err(Error::ShapeMismatch(format!(
            "eigenvalues need a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let n = m.rows();
    let mut h = hessenberg(m);
    let mut eig = vec![ZERO; n];
    let mut hi = n;
    let mut iters = 0usize;
    while hi > 0 {
        let top = hi - 1;
        if top == 0 {
            eig[0] = h[(0, 0)];
            break;
        }
        // Locate the start of the active unreduced block.
        let mut lo = top;
        while lo > 0 {
            let sub = h[(lo, lo - 1)].norm();
            let diag = h[(lo - 1, lo - 1)].norm() + h[(lo, lo)].norm();
            if sub <= f64::EPSILON * diag.max(f64::MIN_POSITIVE) {
                h[(lo, lo - 1)] = ZERO;
                break;
            }
            lo -= 1;
        }
        if lo == top {
            eig[top] = h[(top, top)];
            hi -= 1;
            iters = 0;
            continue;
        }
        iters += 1;
        if iters > MAX_QR_ITERS_PER_EIGENVALUE {
            return Err(Error::NoConvergence {
                iterations: MAX_QR_ITERS_PER_EIGENVALUE,
            });
        }
        let shift = if iters.is_multiple_of(11) {
            // Exceptional shift to break cycles.
            h[(top, top)] + Complex64::new(0.75 * h[(top, top - 1)].norm(), 0.0)
        } else {
            wilkinson_shift(&h, top)
        };
        qr_sweep(&mut h, lo, top, shift);
    }
    eig.sort_by(|a, b| {
        b.norm()
            .total_cmp(&a.norm())
            .then(b.re.total_cmp(&a.re))
            .then(b.im.total_cmp(&a.im))
    });
    Ok(eig)
}

fn hessenberg(m: &ComplexMatrix) -> ComplexMatrix {
    let n = m.rows();
    let mut h = m.clone();
    for k in 0..n.saturating_sub(2) {
        let x: Vec<Complex64> = ((k + 1)..n).map(|i| h[(i, k)]).collect();
        let xnorm = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if xnorm == 0.0 {
            continue;
        }
        let phase = if x[0].norm() > 0.0 { x[0] / x[0].norm() } else { ONE };
        let alpha = -phase * xnorm;
        let mut v = x;
        v[0] -= alpha;
        let vnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if vnorm == 0.0 {
            continue;
        }
        for z in &mut v {
            *z /= vnorm;
        }
        // H ← (I − 2vv†) H
        for j in 0..n {
            let dot: Complex64 = v.iter().enumerate().map(|(i, vi)| vi.conj() * h[(k + 1 + i, j)]).sum();
            for (i, vi) in v.iter().enumerate() {
                h[(k + 1 + i, j)] -= 2.0 * vi * dot;
            }
        }
        // H ← H (I − 2vv†)
        for i in 0..n {
            let dot: Complex64 = v.iter().enumerate().map(|(j, vj)| h[(i, k + 1 + j)] * vj).sum();
            for (j, vj) in v.iter().enumerate() {
                h[(i, k + 1 + j)] -= 2.0 * dot * vj.conj();
            }
        }
        for i in (k + 2)..n {
            h[(i, k)] = ZERO;
        }
    }
    h
}

fn wilkinson_shift(h: &ComplexMatrix, top: usize) -> Complex64 {
    let a = h[(top - 1, top - 1)];
    let b = h[(top - 1, top)];
    let c = h[(top, top - 1)];
    let d = h[(top, top)];
    let tr = a + d;
    let det = a * d - b * c;
    let disc = (tr * tr * 0.25 - det).sqrt();
    let l1 = tr * 0.5 + disc;
    let l2 = tr * 0.5 - disc;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// One explicit shifted QR step `H − μI = QR, H ← RQ + μI` on the block
/// `lo..=hi`, using Givens rotations.
fn qr_sweep(h: &mut ComplexMatrix, lo: usize, hi: usize, shift: Complex64) {
    for i in lo..=hi {
        h[(i, i)] -= shift;
    }
    let mut rotations = Vec::with_capacity(hi - lo);
    for k in lo..hi {
        let x = h[(k, k)];
        let y = h[(k + 1, k)];
        let r = (x.norm_sqr() + y.norm_sqr()).sqrt();
        if r == 0.0 {
            rotations.push((ONE, ZERO));
            continue;
        }
        let c = x / r;
        let s = y / r;
        // Rows k, k+1 ← G [row_k; row_k+1] with G = [[c*, s*], [−s, c]].
        for j in k..=hi {
            let hk = h[(k, j)];
            let hk1 = h[(k + 1, j)];
            h[(k, j)] = c.conj() * hk + s.conj() * hk1;
            h[(k + 1, j)] = -s * hk + c * hk1;
        }
        rotations.push((c, s));
    }
    for (offset, &(c, s)) in rotations.iter().enumerate() {
        let k = lo + offset;
        // Columns k, k+1 ← [col_k, col_k+1] G†.
        for i in lo..=(k + 1).min(hi) {
            let hk = h[(i, k)];
            let hk1 = h[(i, k + 1)];
            h[(i, k)] = hk * c + hk1 * s;
            h[(i, k + 1)] = -hk * s.conj() + hk1 * c.conj();
        }
    }
    for i in lo..=hi {
        h[(i, i)] += shift;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::pauli_basis;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identity_and_pauli_spectra() {
        let e = herm_eig(&ComplexMatrix::identity(2)).unwrap();
        assert_eq!(e.eigenvalues, vec![1.0, 1.0]);
        let z = &pauli_basis()[3];
        let e = herm_eig(z).unwrap();
        assert!((e.eigenvalues[0] + 1.0).abs() < 1e-15);
        assert!((e.eigenvalues[1] - 1.0).abs() < 1e-15);
        let y = &pauli_basis()[2];
        let e = herm_eig(y).unwrap();
        assert!((e.eigenvalues[0] + 1.0).abs() < 1e-14);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert!(matches!(herm_eig(&m), Err(Error::NotHermitian { .. })));
        assert!(matches!(
            herm_eig(&ComplexMatrix::zeros(2, 3)),
            Err(Error::ShapeMismatch(_))
        ));
    }

    #[test]
    fn complex_hermitian_reconstruction() {
        let m = ComplexMatrix::from_rows(&[
            vec![c(2.0, 0.0), c(1.0, -1.0), c(0.0, 0.5)],
            vec![c(1.0, 1.0), c(-1.0, 0.0), c(0.3, 0.0)],
            vec![c(0.0, -0.5), c(0.3, 0.0), c(0.5, 0.0)],
        ]);
        let e = herm_eig(&m).unwrap();
        let back = e.reconstruct_with(|l| l);
        assert!(back.max_abs_diff(&m) < 1e-13);
        let gram = e.eigenvectors.dagger().matmul(&e.eigenvectors);
        assert!(gram.max_abs_diff(&ComplexMatrix::identity(3)) < 1e-13);
    }

    #[test]
    fn null_space_examples() {
        assert_eq!(null_space(&ComplexMatrix::identity(3), 1e-10).cols(), 0);
        let z = null_space(&ComplexMatrix::zeros(2, 2), 1e-10);
        assert_eq!(z.cols(), 2);
        assert!(z.dagger().matmul(&z).max_abs_diff(&ComplexMatrix::identity(2)) < 1e-14);
        let s = 1.0 / 2f64.sqrt();
        let row = ComplexMatrix::from_real_rows(&[&[s, s]]);
        let k = null_space(&row, 1e-10);
        assert_eq!(k.cols(), 1);
        let v = k.column(0);
        // proportional to (1, −1)/√2
        assert!((v[0] + v[1]).norm() < 1e-14);
        assert!((v[0].norm() - s).abs() < 1e-14);
    }

    #[test]
    fn general_eigenvalues_of_triangular_and_rotation() {
        let t = ComplexMatrix::from_real_rows(&[&[3.0, 1.0, 2.0], &[0.0, -1.0, 4.0], &[0.0, 0.0, 0.5]]);
        let e = eigenvalues(&t).unwrap();
        assert!((e[0] - c(3.0, 0.0)).norm() < 1e-12);
        assert!((e[1] - c(-1.0, 0.0)).norm() < 1e-12);
        assert!((e[2] - c(0.5, 0.0)).norm() < 1e-12);
        let rot = ComplexMatrix::from_real_rows(&[&[0.0, -1.0], &[1.0, 0.0]]);
        let e = eigenvalues(&rot).unwrap();
        assert!((e[0] - c(0.0, 1.0)).norm() < 1e-12);
        assert!((e[1] - c(0.0, -1.0)).norm() < 1e-12);
    }

    #[test]
    fn operator_norm_of_diagonal() {
        let m = ComplexMatrix::diag_real(&[0.5, -3.0, 2.0]);
        assert!((operator_norm(&m) - 3.0).abs() < 1e-14);
    }
}
