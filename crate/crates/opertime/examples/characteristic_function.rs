//! The characteristic function of a contraction: the scalar Moebius form,
//! contractivity inside the disc, unitary boundary values, and the
//! boundary defect that carries the functional model.

use opertime::charfun::{delta_samples, theta};
use opertime::opcore::linalg::{c, cr, operator_norm, random_contraction, unitary_defect, CMatrix};
use opertime::opcore::operator::OperatorRep;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use std::f64::consts::PI;

fn main() -> opertime::Result<()> {
    // scalar c = 1/2: Theta(z) = (z - c)/(1 - c z)
    let w = OperatorRep::dense(CMatrix::from_element(1, 1, cr(0.5)));
    let mut worst = 0.0f64;
    for k in 0..64 {
        let angle = 2.0 * PI * k as f64 / 64.0;
        let lam = c(angle.cos(), angle.sin()) * cr(0.8);
        let got = theta(&w, lam)?[(0, 0)];
        let want = (lam - cr(0.5)) / (cr(1.0) - cr(0.5) * lam);
        worst = worst.max((got - want).norm());
    }
    println!("scalar Moebius deviation on |z| = 0.8: {worst:.3e}");

    // dense contraction: boundary values are unitary, Delta nearly zero
    let mut rng = ChaCha12Rng::seed_from_u64(11);
    let wd = OperatorRep::dense(random_contraction(&mut rng, 4, 0.85));
    let samples = delta_samples(&wd, 32)?;
    let unit = samples
        .theta
        .iter()
        .map(unitary_defect)
        .fold(0.0, f64::max);
    println!("dense contraction: boundary unitarity defect {unit:.3e}, max ||Delta|| {:.3e}",
        samples.max_delta_norm());

    // backward shift: Delta is identically the identity on its defect line
    let bwd = delta_samples(&OperatorRep::TruncShiftBwd { dim: 64 }, 64)?;
    let dev = bwd
        .delta
        .iter()
        .map(|d| (operator_norm(d) - 1.0).abs())
        .fold(0.0, f64::max);
    println!("backward shift: ||Delta|| - 1 deviation {dev:.3e} (range function of the model)");
    Ok(())
}
