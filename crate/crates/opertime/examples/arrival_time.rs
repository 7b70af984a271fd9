//! The arrival-time operator end to end: momentum action against the
//! symbolic oracle, the two-channel energy representation, the Werner
//! dilation, and the arrival density with its exact time covariance.

use opertime::abclock::{
    ab_momentum_apply, arrival_density, energy_rep, werner_dilation, MomentumGrid,
    MomentumWavefunction,
};
use opertime::opcore::linalg::{c, cr};
use std::f64::consts::PI;

fn main() -> opertime::Result<()> {
    // derivative oracle on psi = k^2 e^{-k^2}
    let h = 0.01;
    let grid = MomentumGrid::standard(h, (6.0 / h) as usize)?;
    let psi = MomentumWavefunction::from_fn(grid.clone(), true, |k| cr(k * k * (-k * k).exp()));
    let image = ab_momentum_apply(&psi)?;
    let mut worst = 0.0f64;
    for j in 0..grid.len() {
        let k = grid.k_at(j);
        let expected = c(0.0, 0.5) * cr((3.0 - 4.0 * k * k) * (-k * k).exp());
        worst = worst.max((image.samples[j] - expected).norm());
    }
    println!("momentum action vs symbolic derivative at h = {h}: {worst:.3e}");

    // energy representation of a normalized Gaussian
    let h = 0.005;
    let grid = MomentumGrid::standard(h, (11.0 / h) as usize)?;
    let psi = MomentumWavefunction::from_fn(grid, true, |k| {
        cr(PI.powf(-0.25) * (-(k - 5.0) * (k - 5.0) / 2.0).exp())
    })
    .normalized();
    let v = energy_rep(&psi);
    println!(
        "energy representation: {} lambda points, norm defect vs momentum grid {:.3e}",
        v.lambdas.len(),
        (v.norm() - psi.norm()).abs()
    );

    // arrival density through the Werner dilation
    let dil = werner_dilation(64.0, 4096)?;
    let density = arrival_density(&psi, &dil, None)?;
    println!(
        "arrival density: total mass {:.9}, embedding defect {:.3e}",
        density.total_mass, density.embedding_defect
    );
    let peak = density
        .density
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .unwrap();
    println!(
        "density peak at t = {:.4} (height {:.4})",
        density.t0 + peak.0 as f64 * density.dt,
        peak.1
    );

    let shifted = arrival_density(&psi, &dil, Some(16.0 * density.dt))?;
    let n_t = density.density.len();
    let mut covariance = 0.0f64;
    for m in 0..n_t {
        let src = (m + n_t - 16) % n_t;
        covariance = covariance.max((shifted.density[m] - density.density[src]).abs());
    }
    println!("time covariance defect for a 16-cell shift: {covariance:.3e}");
    Ok(())
}
