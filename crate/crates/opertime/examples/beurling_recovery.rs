//! Beurling's theorem at desk scale: plant an inner function, take the
//! invariant subspace it generates, and recover it (up to one unimodular
//! constant) as the innovation generator.

use opertime::invsub::{beurling_inner, blaschke_column, FourierWindowSubspace};
use opertime::opcore::linalg::{c, cr, CVector, C64};
use std::f64::consts::PI;

fn main() -> opertime::Result<()> {
    let half_width = 64usize;

    // chi^3 H^2
    let mons: Vec<(i64, usize)> = (3..=60).map(|k| (k, 0)).collect();
    let s = FourierWindowSubspace::from_monomials(1, half_width, &mons)?;
    let inner = beurling_inner(&s)?;
    println!(
        "chi^3 window: innovation modulus deviation {:.3e}",
        inner.modulus_deviation
    );

    // Blaschke factor a = 1/2
    let a = cr(0.5);
    let cols: Vec<CVector> = (0..=20i64)
        .map(|k| blaschke_column(a, k, 1, 0, half_width))
        .collect();
    let sb = FourierWindowSubspace::from_columns(1, half_width, &cols, 4)?;
    let rec = beurling_inner(&sb)?;
    let slots = sb.slots();
    let q_true: Vec<C64> = (0..slots)
        .map(|j| {
            let theta = 2.0 * PI * j as f64 / slots as f64;
            let w = c(theta.cos(), theta.sin());
            (w - a) / (cr(1.0) - a.conj() * w)
        })
        .collect();
    let phase = q_true[0] / rec.samples[0];
    let mut worst = 0.0f64;
    for (got, want) in rec.samples.iter().zip(&q_true) {
        worst = worst.max((got * phase - want).norm());
    }
    println!(
        "Blaschke a = 1/2: recovered up to the constant {phase:.4}, max deviation {worst:.3e}"
    );
    Ok(())
}
