//! Arrival-time suite: the momentum-space action against its symbolic
//! oracle, the energy-representation isometry, the Werner dilation
//! compression, and the arrival density.

use super::ExperimentConfig;
use crate::abclock::{
    ab_momentum_apply, arrival_density, energy_rep, werner_dilation, MomentumGrid,
    MomentumWavefunction,
};
use crate::opcore::linalg::{c, cr, CMatrix};
use crate::report::{all_pass, write_csv, write_json, Verdict, F17, SCHEMA_VERSION};
use crate::Result;
use serde::Serialize;
use std::f64::consts::PI;
use std::path::PathBuf;

#[derive(Serialize)]
struct AbClockReport {
    schema: u32,
    suite: &'static str,
    seed: u64,
    derivative_error_coarse: F17,
    derivative_error_fine: F17,
    derivative_ratio: F17,
    energy_defect_coarse: F17,
    energy_defect_fine: F17,
    energy_order: F17,
    density_mass_defect: F17,
    covariance_defect: F17,
    compression_error_coarse: F17,
    compression_error_fine: F17,
    compression_ratio: F17,
    embedding_defect: F17,
    verdicts: Vec<Verdict>,
}

fn derivative_error(h: f64) -> Result<f64> {
    let n_side = (6.0 / h) as usize;
    let grid = MomentumGrid::standard(h, n_side)?;
    let psi = MomentumWavefunction::from_fn(grid.clone(), true, |k| cr(k * k * (-k * k).exp()));
    let image = ab_momentum_apply(&psi)?;
    let mut worst = 0.0f64;
    for j in 0..grid.len() {
        let k = grid.k_at(j);
        let expected = c(0.0, 0.5) * cr((3.0 - 4.0 * k * k) * (-k * k).exp());
        worst = worst.max((image.samples[j] - expected).norm());
    }
    Ok(worst)
}

fn energy_defect(h: f64) -> Result<f64> {
    let n_side = (14.0 / h) as usize;
    let grid = MomentumGrid::standard(h, n_side)?;
    let psi = MomentumWavefunction::from_fn(grid, true, |k| {
        cr(PI.powf(-0.25) * (-(k - 5.0) * (k - 5.0) / 2.0).exp())
    });
    let v = energy_rep(&psi);
    Ok((v.norm() - 1.0).abs())
}

fn compression_error(n: usize) -> Result<f64> {
    let dil = werner_dilation(16.0, n)?;
    let mut embedded = CMatrix::zeros(n, 2);
    for j in 0..n {
        let lam = dil.line.lambda_at(j);
        if lam > 0.0 {
            embedded[(j, 0)] = cr(lam * lam * (-lam * lam).exp());
        }
    }
    let moved = dil.compress_apply(&embedded)?;
    let mut worst = 0.0f64;
    for j in 0..n {
        let lam = dil.line.lambda_at(j);
        if lam > 0.5 && lam < 8.0 {
            let expected = c(0.0, -1.0) * cr((2.0 * lam - 2.0 * lam * lam * lam) * (-lam * lam).exp());
            worst = worst.max((moved[(j, 0)] - expected).norm());
        }
    }
    Ok(worst)
}

pub fn run(cfg: &ExperimentConfig) -> Result<(bool, Vec<PathBuf>)> {
    let mut verdicts = Vec::new();

    // momentum-space action against the symbolic derivative
    let d_coarse = derivative_error(0.02)?;
    let d_fine = derivative_error(0.01)?;
    let d_ratio = d_coarse / d_fine;
    verdicts.push(Verdict::geq(
        "derivative_halving_ratio",
        d_ratio,
        cfg.tolerance("derivative_ratio", 1e-30).max(3.5),
    ));

    // energy-representation norm defect vs the continuum, order >= 1
    let e_coarse = energy_defect(0.08)?;
    let e_fine = energy_defect(0.04)?;
    let order = (e_coarse / e_fine).log2();
    verdicts.push(Verdict::geq("energy_defect_order", order, 1.0));

    // arrival density: normalization and covariance
    let h = 0.005;
    let n_side = (11.0 / h) as usize;
    let grid = MomentumGrid::standard(h, n_side)?;
    let psi = MomentumWavefunction::from_fn(grid, true, |k| {
        cr(PI.powf(-0.25) * (-(k - 5.0) * (k - 5.0) / 2.0).exp())
    })
    .normalized();
    let dil = werner_dilation(64.0, 4096)?;
    let base = arrival_density(&psi, &dil, None)?;
    let mass_defect = (base.total_mass - 1.0).abs();
    verdicts.push(Verdict::leq(
        "density_normalization",
        mass_defect,
        cfg.tolerance("density_mass", 1e-6),
    ));

    let cells = 16i64;
    let t0 = cells as f64 * base.dt;
    let shifted = arrival_density(&psi, &dil, Some(t0))?;
    let n_t = base.density.len();
    let mut covariance = 0.0f64;
    for m in 0..n_t {
        let src = ((m as i64 - cells).rem_euclid(n_t as i64)) as usize;
        covariance = covariance.max((shifted.density[m] - base.density[src]).abs());
    }
    verdicts.push(Verdict::leq(
        "density_time_covariance",
        covariance,
        cfg.tolerance("covariance", 1e-10),
    ));

    // Werner compression order on the C^1 energy probe
    let c_coarse = compression_error(512)?;
    let c_fine = compression_error(1024)?;
    let c_ratio = c_coarse / c_fine;
    verdicts.push(Verdict::geq("compression_halving_ratio", c_ratio, 3.5));

    // CSV curves: (t, density) and (lambda, |vec psi|^2)
    let rows_density: Vec<Vec<f64>> = base
        .density
        .iter()
        .enumerate()
        .map(|(m, d)| vec![base.t0 + m as f64 * base.dt, *d])
        .collect();
    let density_csv = cfg.out_path("ab_clock_density.csv");
    write_csv(&density_csv, &["t", "density"], &rows_density)?;

    let v = energy_rep(&psi);
    let rows_energy: Vec<Vec<f64>> = v
        .lambdas
        .iter()
        .enumerate()
        .map(|(i, lam)| {
            vec![
                *lam,
                v.channels[(i, 0)].norm_sqr() + v.channels[(i, 1)].norm_sqr(),
            ]
        })
        .collect();
    let energy_csv = cfg.out_path("ab_clock_energy.csv");
    write_csv(&energy_csv, &["lambda", "vec_psi_sq"], &rows_energy)?;

    let report = AbClockReport {
        schema: SCHEMA_VERSION,
        suite: "ab_clock",
        seed: cfg.seed,
        derivative_error_coarse: F17(d_coarse),
        derivative_error_fine: F17(d_fine),
        derivative_ratio: F17(d_ratio),
        energy_defect_coarse: F17(e_coarse),
        energy_defect_fine: F17(e_fine),
        energy_order: F17(order),
        density_mass_defect: F17(mass_defect),
        covariance_defect: F17(covariance),
        compression_error_coarse: F17(c_coarse),
        compression_error_fine: F17(c_fine),
        compression_ratio: F17(c_ratio),
        embedding_defect: F17(base.embedding_defect),
        verdicts,
    };
    let json_path = cfg.out_path("ab_clock_report.json");
    write_json(&json_path, &report)?;
    Ok((all_pass(&report.verdicts), vec![json_path, density_csv, energy_csv]))
}
