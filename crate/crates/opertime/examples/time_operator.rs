//! A time operator from a nested family of projections: on the
//! translation model the spectral integral telescopes to multiplication
//! by the coordinate, exactly, and shifting the family shifts the
//! operator by the same amount.

use opertime::opcore::linalg::{cr, unitary_defect};
use opertime::timeop::{time_operator_from_projections, NestedProjectionFamily};

fn main() -> opertime::Result<()> {
    let n = 32usize;
    let h = 0.25;
    let x0 = -4.0;
    let coords: Vec<f64> = (0..n).map(|j| x0 + j as f64 * h).collect();

    let fam = NestedProjectionFamily::coordinate_family(&coords);
    let result = time_operator_from_projections(&fam)?;
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let expected = if i == j { cr(coords[i]) } else { cr(0.0) };
            worst = worst.max((result.time_operator[(i, j)] - expected).norm());
        }
    }
    println!("T - multiplication-by-coordinate deviation: {worst:.3e}");

    let shifted: Vec<f64> = coords.iter().map(|t| t + 5.0).collect();
    let fam5 = NestedProjectionFamily::new(shifted, fam.projections.clone(), 1e-12)?;
    let t5 = time_operator_from_projections(&fam5)?.time_operator;
    let mut worst5 = 0.0f64;
    for i in 0..n {
        worst5 = worst5.max((t5[(i, i)] - result.time_operator[(i, i)] - cr(5.0)).norm());
    }
    println!("shifted family: T' - (T + 5 I) deviation: {worst5:.3e}");

    let v = result.companion_unitary(0.37);
    println!("companion unitary defect at s = 0.37: {:.3e}", unitary_defect(&v));
    Ok(())
}
