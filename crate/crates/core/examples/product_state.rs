//! A product state as a finitely correlated state with one-dimensional
//! boundary: expectations factorize and correlations vanish.

use fcs::cpmap::Word;
use fcs::linalg::{pauli_basis, ComplexMatrix};
use fcs::models::{product_model, LocalState};
use fcs::reconstruct::{correlation, invariant_functional, omega_eval};
use num_complex::Complex64;

fn main() -> fcs::Result<()> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let plus = vec![Complex64::new(s, 0.0), Complex64::new(s, 0.0)];
    let pm = product_model(LocalState::Pure(plus))?;
    let xi = invariant_functional(&pm.cp, 1e-10)?;
    let [_, x, _, z] = pauli_basis();

    let word = Word::new(vec![x.clone(), x.clone(), ComplexMatrix::identity(2), x.clone()]);
    println!("ω(X X 1 X) = {:.12}", omega_eval(&pm.cp, &xi, &word)?.re);
    println!(
        "ω(Z)       = {:.12}",
        omega_eval(&pm.cp, &xi, &Word::new(vec![z.clone()]))?.re
    );
    for r in 0..4 {
        println!("corr_XX({r}) = {:.3e}", correlation(&pm.cp, &xi, &x, &x, r)?.norm());
    }

    let mixed = product_model(LocalState::Mixed(ComplexMatrix::diag_real(&[0.75, 0.25])))?;
    let xi = invariant_functional(&mixed.cp, 1e-10)?;
    let zz = Word::new(vec![z.clone(), z]);
    println!(
        "mixed state: ω(Z Z) = {:.12} (expected 0.25)",
        omega_eval(&mixed.cp, &xi, &zz)?.re
    );
    Ok(())
}
