//! The operator-product presentation: extended spaces with a distinguished
//! vector, checked against the nested map and the state.

use fcs::cpmap::{iterate, Word};
use fcs::linalg::ComplexMatrix;
use fcs::models::{aklt_model, aklt_spin_operators};
use fcs::opprod::{embed_reduced, extend_model, gamma_n_presentation, op_product_eval};
use fcs::reconstruct::{invariant_functional, omega_eval};

fn main() -> fcs::Result<()> {
    let cp = aklt_model().cp;
    let em = extend_model(&cp)?;
    println!(
        "site space dimension {}, hypotheses hold to {:.3e}",
        em.site_dim,
        em.hypotheses.max_residual()
    );

    let (sx, _, sz) = aklt_spin_operators();
    let word = Word::new(vec![sz.clone(), sz, sx.clone(), sx]);
    let t = ComplexMatrix::identity(2);
    let via = op_product_eval(&em, &word, &t)?;
    let direct = embed_reduced(&iterate(&cp, &word, &t)?);
    println!("operator product vs nested map: {:.3e}", via.distance(&direct));

    let xi = invariant_functional(&cp, 1e-10)?;
    let g = gamma_n_presentation(&em, &xi, &word)?;
    let w = omega_eval(&cp, &xi, &word)?;
    println!("Γ_n presentation {g:.12} vs ω {w:.12}");
    Ok(())
}
