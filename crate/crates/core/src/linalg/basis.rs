use num_complex::Complex64;

use super::matrix::{ComplexMatrix, ONE, ZERO};

/// σ⁰ = I₂, σ¹, σ², σ³.
pub fn pauli_basis() -> [ComplexMatrix; 4] {
    let i = Complex64::new(0.0, 1.0);
    [
        ComplexMatrix::identity(2),
        ComplexMatrix::from_rows(&[vec![ZERO, ONE], vec![ONE, ZERO]]),
        ComplexMatrix::from_rows(&[vec![ZERO, -i], vec![i, ZERO]]),
        ComplexMatrix::from_rows(&[vec![ONE, ZERO], vec![ZERO, -ONE]]),
    ]
}

/// Matrix unit e_{ij} of size n×n.
pub fn matrix_unit(n: usize, i: usize, j: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(n, n);
    m[(i, j)] = ONE;
    m
}

/// Hilbert–Schmidt orthonormal Hermitian basis of M_d built from the
/// generalized Gell-Mann matrices.
///
/// Ordering: `I/√d`, then for each pair `j < k` the symmetric and the
/// antisymmetric off-diagonal element, then the `d − 1` diagonal ones.
pub fn gell_mann_basis(d: usize) -> Vec<ComplexMatrix> {
    assert!(d >= 1, "dimension must be positive");
    let mut basis = Vec::with_capacity(d * d);
    basis.push(ComplexMatrix::identity(d).scale_re(1.0 / (d as f64).sqrt()));
    let h = 1.0 / 2f64.sqrt();
    for j in 0..d {
        for k in (j + 1)..d {
            let mut sym = ComplexMatrix::zeros(d, d);
            sym[(j, k)] = Complex64::new(h, 0.0);
            sym[(k, j)] = Complex64::new(h, 0.0);
            basis.push(sym);
            let mut anti = ComplexMatrix::zeros(d, d);
            anti[(j, k)] = Complex64::new(0.0, -h);
            anti[(k, j)] = Complex64::new(0.0, h);
            basis.push(anti);
        }
    }
    for l in 1..d {
        let norm = 1.0 / ((l * (l + 1)) as f64).sqrt();
        let mut diag = vec![0.0; d];
        for x in diag.iter_mut().take(l) {
            *x = norm;
        }
        diag[l] = -(l as f64) * norm;
        basis.push(ComplexMatrix::diag_real(&diag));
    }
    basis
}

/// Digits of `index` in base `base`, most significant first, padded to `len`.
pub(crate) fn digits(mut index: usize, base: usize, len: usize) -> Vec<usize> {
    let mut out = vec![0; len];
    for slot in out.iter_mut().rev() {
        *slot = index % base;
        index /= base;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pauli_algebra() {
        let s = pauli_basis();
        assert_eq!(s[0], ComplexMatrix::identity(2));
        for a in 0..4 {
            for b in 0..4 {
                let t = s[a].matmul(&s[b]).trace();
                let expect = if a == b { 2.0 } else { 0.0 };
                assert!((t - Complex64::new(expect, 0.0)).norm() < 1e-15);
            }
        }
        let i = Complex64::new(0.0, 1.0);
        assert_eq!(s[1].matmul(&s[2]), s[3].scale(i));
    }

    #[test]
    fn gell_mann_is_orthonormal_and_hermitian() {
        for d in 1..=4 {
            let b = gell_mann_basis(d);
            assert_eq!(b.len(), d * d);
            for (x, g) in b.iter().enumerate() {
                assert_eq!(g.hermiticity_defect(), 0.0);
                for (y, h) in b.iter().enumerate() {
                    let ip = g.hs_inner(h);
                    let expect = if x == y { 1.0 } else { 0.0 };
                    assert!((ip - Complex64::new(expect, 0.0)).norm() < 1e-14, "d={d} {x} {y}");
                }
            }
        }
    }

    #[test]
    fn digits_roundtrip() {
        assert_eq!(digits(5, 3, 3), vec![0, 1, 2]);
        assert_eq!(digits(0, 4, 2), vec![0, 0]);
    }
}
