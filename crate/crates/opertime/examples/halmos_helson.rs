//! The Halmos-Helson splitting of an invariant subspace: a shift part
//! carried by a rigid operator function and a doubly invariant part
//! carried by a range function, pointwise orthogonal.

use opertime::invsub::{dirichlet_column, halmos_helson_decompose, FourierWindowSubspace};
use opertime::opcore::linalg::CVector;

fn main() -> opertime::Result<()> {
    // (chi H^2 tensor e_0) + (M_E tensor e_1), E the lower half circle
    let m = 10usize;
    let slots = 2 * m + 1;
    let mut cols: Vec<CVector> = (1..=8)
        .map(|k| {
            FourierWindowSubspace::from_monomials(2, m, &[(k, 0)])
                .unwrap()
                .basis
                .columns
                .column(0)
                .into_owned()
        })
        .collect();
    let lower: Vec<usize> = (0..slots / 2).collect();
    for &j in &lower {
        cols.push(dirichlet_column(j, 2, 1, m));
    }
    let s = FourierWindowSubspace::from_columns(2, m, &cols, 2)?;

    let dec = halmos_helson_decompose(&s)?;
    println!(
        "input rank {} = shift part (innovation multiplicity {}) + doubly part (dim {})",
        s.rank(),
        dec.innovation_dim,
        dec.doubly_dim
    );
    println!("J ranks: {:?}", dec.range_j.ranks());
    println!("K ranks: {:?}", dec.range_k.ranks());
    println!(
        "pointwise J \u{22a5} K residual: {:.3e} (doubly-part iterations: {})",
        dec.orthogonality_residual, dec.iterations
    );
    if let Some(rigid) = &dec.rigid {
        println!(
            "rigid function partial-isometry defect: {:.3e}",
            rigid.partial_isometry_defect()
        );
    }
    Ok(())
}
