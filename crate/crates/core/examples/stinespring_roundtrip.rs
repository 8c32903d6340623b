//! Superoperator → Choi matrix → minimal Stinespring isometry → superoperator.

use fcs::cpmap::{choi, stinespring_from_choi, CpMapData, CP_TOL};
use fcs::linalg::isometry_defect;
use fcs::models::random_dilated_model;

fn main() -> fcs::Result<()> {
    let (d, r) = (2, 3);
    let cp = random_dilated_model(d, r, 2, 42);
    let c = choi(&cp);
    println!(
        "Choi matrix {}×{}, min eigenvalue {:.3e}",
        c.matrix.rows(),
        c.matrix.cols(),
        c.min_eigenvalue()
    );

    let recovered = stinespring_from_choi(cp.superop(), d, r, CP_TOL)?;
    let dil = recovered.dilation().expect("recovered maps carry a dilation");
    println!(
        "recovered V is {}×{}, multiplicity {}, isometry defect {:.3e}",
        dil.v.rows(),
        dil.v.cols(),
        dil.multiplicity,
        isometry_defect(&dil.v)
    );
    let rebuilt = CpMapData::from_dilation(dil.v.clone(), d, dil.multiplicity, r)?;
    println!(
        "superoperator residual {:.3e}",
        rebuilt.superop().max_abs_diff(cp.superop())
    );
    Ok(())
}
