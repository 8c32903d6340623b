//! Dense complex linear algebra: products, Kronecker products, Hermitian
//! and general eigenproblems, null spaces and the standard operator bases.

mod basis;
mod eigen;
mod matrix;

pub(crate) use basis::digits;
pub use basis::{gell_mann_basis, matrix_unit, pauli_basis};
pub use eigen::{
    eigenvalues, gram_rank, herm_eig, min_eig, null_space, operator_norm, orthonormalize_columns, range_basis,
    HermEigResult,
};
pub use matrix::ComplexMatrix;
pub(crate) use matrix::{ONE, ZERO};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kron(b)
}

/// Kronecker product of a non-empty list of factors, left to right.
pub fn kron_all<'a>(factors: impl IntoIterator<Item = &'a ComplexMatrix>) -> ComplexMatrix {
    let mut it = factors.into_iter();
    let first = it.next().expect("kron_all needs at least one factor").clone();
    it.fold(first, |acc, f| acc.kron(f))
}

pub fn matmul(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    if a.cols() != b.rows() {
        return Err(Error::ShapeMismatch(format!(
            "cannot multiply {}x{} by {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    Ok(a.matmul(b))
}

pub fn dagger(a: &ComplexMatrix) -> ComplexMatrix {
    a.dagger()
}

pub fn trace(a: &ComplexMatrix) -> Complex64 {
    a.trace()
}

/// Tr(a† b).
pub fn hs_inner(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<Complex64> {
    if a.shape() != b.shape() {
        return Err(Error::ShapeMismatch(format!(
            "hs_inner of {:?} and {:?}",
            a.shape(),
            b.shape()
        )));
    }
    Ok(a.hs_inner(b))
}

/// ‖V†V − I‖ measured entrywise.
pub fn isometry_defect(v: &ComplexMatrix) -> f64 {
    v.dagger().matmul(v).max_abs_diff(&ComplexMatrix::identity(v.cols()))
}

/// Applies `op` (dims[axis] × dims[axis]) to one tensor factor of a vector
/// laid out row-major over `dims` (first factor most significant).
pub(crate) fn apply_on_axis(data: &[Complex64], dims: &[usize], axis: usize, op: &ComplexMatrix) -> Vec<Complex64> {
    let n = dims[axis];
    assert_eq!(op.shape(), (n, n), "axis operator has the wrong size");
    let outer: usize = dims[..axis].iter().product();
    let inner: usize = dims[axis + 1..].iter().product();
    assert_eq!(data.len(), outer * n * inner, "tensor length mismatch");
    let mut out = vec![ZERO; data.len()];
    for o in 0..outer {
        for i in 0..n {
            for j in 0..n {
                let a = op[(i, j)];
                if a == ZERO {
                    continue;
                }
                let src = (o * n + j) * inner;
                let dst = (o * n + i) * inner;
                for k in 0..inner {
                    out[dst + k] += a * data[src + k];
                }
            }
        }
    }
    out
}
