//! Order seminorm on a quotient by a kernel: with no kernel it is the
//! operator norm, and the unit always has seminorm one.

use fcs::kernel::{functional_matrix, kernel_basis, order_seminorm, KernelBasis};
use fcs::linalg::{operator_norm, ComplexMatrix};
use fcs::models::{aklt_model, aklt_spin_operators};
use fcs::random;
use fcs::reconstruct::invariant_functional;

fn main() -> fcs::Result<()> {
    let mut rng = random::rng(3);
    for _ in 0..4 {
        let a = random::random_hermitian(3, &mut rng);
        let v = order_seminorm(&a, &KernelBasis::empty(3), 1e-9)?;
        println!("⟦a⟧ = {v:.9}, ‖a‖ = {:.9}", operator_norm(&a));
    }

    let cp = aklt_model().cp;
    let xi = invariant_functional(&cp, 1e-10)?;
    let kernel = kernel_basis(&functional_matrix(&cp, &xi, 1, 1)?, 1e-8);
    println!("AKLT one-site kernel has dimension {}", kernel.dim());
    let (_, _, sz) = aklt_spin_operators();
    for (name, a) in [
        ("1", ComplexMatrix::identity(3)),
        ("Sz", sz.clone()),
        ("Sz²", sz.matmul(&sz)),
    ] {
        println!("⟦{name}⟧ = {:.9}", order_seminorm(&a, &kernel, 1e-9)?);
    }
    Ok(())
}
