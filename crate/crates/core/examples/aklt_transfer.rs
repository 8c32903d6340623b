//! Transfer spectrum, boundary state and spin correlations of the AKLT chain.

use fcs::models::{aklt_model, aklt_spin_operators};
use fcs::reconstruct::{clustering_rate, correlation, invariant_functional, transfer_spectrum};

fn main() -> fcs::Result<()> {
    let cp = aklt_model().cp;
    let spectrum = transfer_spectrum(&cp)?;
    println!("transfer eigenvalues:");
    for z in &spectrum.eigenvalues {
        println!("  {:+.6} {:+.6}i", z.re, z.im);
    }
    let xi = invariant_functional(&cp, 1e-10)?;
    let rho = xi.rho();
    println!("boundary state ρ:");
    for i in 0..rho.rows() {
        let row: Vec<String> = (0..rho.cols()).map(|j| format!("{:+.6}", rho[(i, j)].re)).collect();
        println!("  [{}]", row.join(", "));
    }
    println!("clustering rate {:.6}", clustering_rate(&cp)?);

    let (_, _, sz) = aklt_spin_operators();
    println!("r  ⟨Sz Sz⟩_c        closed form");
    for r in 0..8 {
        let c = correlation(&cp, &xi, &sz, &sz, r)?;
        let exact = -4.0 / 9.0 * (-1.0f64 / 3.0).powi(r as i32);
        println!("{r}  {:+.12}  {:+.12}", c.re, exact);
    }
    Ok(())
}
