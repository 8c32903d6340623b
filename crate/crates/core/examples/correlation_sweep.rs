//! Correlation length versus clustering rate over a family of random models.

use fcs::linalg::operator_norm;
use fcs::models::random_model;
use fcs::random;
use fcs::reconstruct::{clustering_rate, correlation, invariant_functional};

fn main() -> fcs::Result<()> {
    let mut rng = random::rng(8);
    println!(" r  seed  |λ₂|     ξ = −1/ln|λ₂|  |corr(10)|   |corr(20)|");
    for r in 2..=4 {
        for seed in 0..3 {
            let cp = random_model(2, r, seed);
            let xi = invariant_functional(&cp, 1e-9)?;
            let rate = clustering_rate(&cp)?;
            let a = random::random_hermitian(2, &mut rng);
            let a = a.scale_re(1.0 / operator_norm(&a));
            let c10 = correlation(&cp, &xi, &a, &a, 10)?.norm();
            let c20 = correlation(&cp, &xi, &a, &a, 20)?.norm();
            println!(
                "{r:>2}  {seed:>4}  {rate:.4}   {:>10.4}     {c10:.3e}   {c20:.3e}",
                -1.0 / rate.ln()
            );
        }
    }
    Ok(())
}
