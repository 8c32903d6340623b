//! Truncated entanglement kernels: quotient dimensions of the window
//! functional F(x, y) = ω(x ⊗ y) and sampled conditioning of the quotient.

use fcs::kernel::{functional_matrix, gamma_condition_probe, kernel_basis, quotient_profile};
use fcs::models::{aklt_model, basis_product_model, random_model};
use fcs::reconstruct::invariant_functional;

fn main() -> fcs::Result<()> {
    let models = [
        ("product |0⟩", basis_product_model(2, 0)?.cp),
        ("AKLT", aklt_model().cp),
        ("random d=2 r=3", random_model(2, 3, 1)),
    ];
    for (name, cp) in &models {
        let xi = invariant_functional(cp, 1e-9)?;
        let profile = quotient_profile(cp, &xi, 2, 2, 1e-8)?;
        let f = functional_matrix(cp, &xi, 2, 2)?;
        let kernel = kernel_basis(&f, 1e-8);
        let probe = gamma_condition_probe(cp, &xi, 2, 2, 20, 0)?;
        println!(
            "{name:>16}: quotient dims {:?} (stabilized {}), kernel dim {}, Γ probe {:.4}",
            profile.quotient_dims,
            profile.stabilized,
            kernel.dim(),
            probe.value
        );
    }
    Ok(())
}
