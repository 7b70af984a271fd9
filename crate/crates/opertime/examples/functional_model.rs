//! The residual functional model of an intrinsically irreversible
//! cascade: the backward shift classifies C01, its boundary defect fills
//! the full fiber, the model evolution is the exact cyclic bilateral
//! shift, and the quasi-affinity intertwines the original contraction
//! with the residual part of its dilation.

use opertime::charfun::{
    functional_model_circle, quasi_affinity_x, residual_part, schaffer_dilation,
};
use opertime::cogen::Probe;
use opertime::opcore::linalg::{cr, eigenphases, CVector};
use opertime::opcore::operator::OperatorRep;

fn main() -> opertime::Result<()> {
    let n = 64usize;
    let w = OperatorRep::TruncShiftBwd { dim: n };

    let model = functional_model_circle(&w, n)?;
    println!(
        "class {:?}, model dimension {} of {}, shift is exact cyclic: {}",
        model.class,
        model.model_dim,
        n,
        matches!(model.model_shift, OperatorRep::CyclicShift { .. })
    );
    println!("model unitarity defect: {:.3e}", model.unitarity_defect()?);

    let dil = schaffer_dilation(&w, n)?;
    let res = residual_part(&dil, 8)?;
    println!(
        "dilation ambient {} -> residual dimension {}",
        dil.ambient_dim,
        res.basis.rank()
    );
    let phases = eigenphases(&res.restriction)?;
    println!(
        "residual part eigenphase range: [{:.4}, {:.4}] over {} phases",
        phases.first().unwrap(),
        phases.last().unwrap(),
        phases.len()
    );

    let m = dil.ambient_dim;
    let probes: Vec<Probe> = (0..4)
        .map(|k| {
            let mut v = CVector::zeros(m);
            v[16 + 12 * k] = cr(1.0);
            Probe::new(v, 8)
        })
        .collect();
    let qa = quasi_affinity_x(&dil, &res, &w, &probes)?;
    let worst = qa
        .intertwining_residuals
        .iter()
        .copied()
        .fold(0.0, f64::max);
    println!(
        "quasi-affinity: rank {}, smallest singular value {:.3}, intertwining residual {worst:.3e}",
        qa.rank, qa.smallest_singular_value
    );
    Ok(())
}
