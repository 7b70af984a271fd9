//! Characteristic-function suite: the scalar Moebius oracle, boundary
//! unitarity for dense contractions, and the boundary-defect curves.

use super::ExperimentConfig;
use crate::charfun::{delta_samples, theta};
use crate::opcore::linalg::{c, cr, operator_norm, random_contraction, unitary_defect};
use crate::opcore::operator::OperatorRep;
use crate::report::{all_pass, write_csv, write_json, Verdict, F17, SCHEMA_VERSION};
use crate::Result;
use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use serde::Serialize;
use std::f64::consts::PI;
use std::path::PathBuf;

#[derive(Serialize)]
struct ScalarOracle {
    re: F17,
    im: F17,
    disc_deviation: F17,
    boundary_deviation: F17,
    boundary_modulus_deviation: F17,
}

#[derive(Serialize)]
struct CharfunReport {
    schema: u32,
    suite: &'static str,
    seed: u64,
    oracle_points_disc: usize,
    oracle_points_boundary: usize,
    scalar_oracles: Vec<ScalarOracle>,
    dense_dim: usize,
    dense_boundary_unitarity: F17,
    dense_pythagoras: F17,
    backward_shift_n: usize,
    backward_shift_delta_deviation: F17,
    verdicts: Vec<Verdict>,
}

pub fn run(cfg: &ExperimentConfig) -> Result<(bool, Vec<PathBuf>)> {
    let tol_oracle = cfg.tolerance("moebius_oracle", 1e-10);
    let tol_boundary = cfg.tolerance("boundary_unitarity", 1e-8);
    let tol_pyth = cfg.tolerance("pythagoras", 1e-9);
    let n_points = 256usize;

    let mut scalar_oracles = Vec::new();
    let mut verdicts = Vec::new();
    for (idx, &cc) in [cr(0.5), c(0.3, 0.4)].iter().enumerate() {
        let w = OperatorRep::dense(DMatrix::from_element(1, 1, cc));
        let mut disc_dev = 0.0f64;
        for k in 0..n_points {
            // deterministic spiral through the disc
            let angle = 2.0 * PI * (k as f64) * 0.618_033_988_749_894_9;
            let radius = 0.97 * ((k as f64) + 0.5) / n_points as f64;
            let lam = c(angle.cos(), angle.sin()) * cr(radius);
            let got = theta(&w, lam)?[(0, 0)];
            let want = (lam - cc) / (cr(1.0) - cc.conj() * lam);
            disc_dev = disc_dev.max((got - want).norm());
        }
        let mut boundary_dev = 0.0f64;
        let mut modulus_dev = 0.0f64;
        for k in 0..n_points {
            let angle = 2.0 * PI * k as f64 / n_points as f64;
            let omega = c(angle.cos(), angle.sin());
            let got = theta(&w, omega)?[(0, 0)];
            let want = (omega - cc) / (cr(1.0) - cc.conj() * omega);
            boundary_dev = boundary_dev.max((got - want).norm());
            modulus_dev = modulus_dev.max((got.norm() - 1.0).abs());
        }
        verdicts.push(Verdict::leq(
            &format!("moebius_disc_{idx}"),
            disc_dev,
            tol_oracle,
        ));
        verdicts.push(Verdict::leq(
            &format!("moebius_boundary_{idx}"),
            boundary_dev,
            tol_oracle,
        ));
        verdicts.push(Verdict::leq(
            &format!("boundary_modulus_{idx}"),
            modulus_dev,
            tol_oracle,
        ));
        scalar_oracles.push(ScalarOracle {
            re: F17(cc.re),
            im: F17(cc.im),
            disc_deviation: F17(disc_dev),
            boundary_deviation: F17(boundary_dev),
            boundary_modulus_deviation: F17(modulus_dev),
        });
    }

    // dense completely-non-unitary contraction: boundary unitarity
    let mut rng = ChaCha12Rng::seed_from_u64(cfg.seed);
    let dense_dim = 4usize;
    let w_dense = OperatorRep::dense(random_contraction(&mut rng, dense_dim, 0.85));
    let grid_n = cfg.grid_n.unwrap_or(64);
    let samples = delta_samples(&w_dense, grid_n)?;
    let mut unit_dev = 0.0f64;
    for th in &samples.theta {
        unit_dev = unit_dev.max(unitary_defect(th));
    }
    let pyth = samples
        .pythagoras_defect
        .iter()
        .copied()
        .fold(0.0, f64::max);
    verdicts.push(Verdict::leq("dense_boundary_unitarity", unit_dev, tol_boundary));
    verdicts.push(Verdict::leq("dense_pythagoras", pyth, tol_pyth));

    // backward shift: delta identically the identity on the defect fiber
    let bwd_n = 64usize;
    let bwd = delta_samples(&OperatorRep::TruncShiftBwd { dim: bwd_n }, grid_n)?;
    let bwd_dev = bwd
        .delta
        .iter()
        .map(|d| (operator_norm(d) - 1.0).abs())
        .fold(0.0, f64::max);
    verdicts.push(Verdict::leq(
        "backward_shift_delta_identity",
        bwd_dev,
        cfg.tolerance("delta_identity", 1e-10),
    ));

    // CSV curves: (angle, ||delta||, rank) per grid point for both models
    let mut rows = Vec::with_capacity(grid_n);
    let dense_ranks = samples.delta_ranks();
    let bwd_ranks = bwd.delta_ranks();
    for j in 0..grid_n {
        let angle = 2.0 * PI * j as f64 / grid_n as f64;
        rows.push(vec![
            angle,
            operator_norm(&samples.delta[j]),
            dense_ranks[j] as f64,
            operator_norm(&bwd.delta[j]),
            bwd_ranks[j] as f64,
        ]);
    }
    let csv_path = cfg.out_path("charfun_delta_curves.csv");
    write_csv(
        &csv_path,
        &[
            "omega_angle",
            "dense_delta_norm",
            "dense_delta_rank",
            "bwd_delta_norm",
            "bwd_delta_rank",
        ],
        &rows,
    )?;

    let report = CharfunReport {
        schema: SCHEMA_VERSION,
        suite: "charfun",
        seed: cfg.seed,
        oracle_points_disc: n_points,
        oracle_points_boundary: n_points,
        scalar_oracles,
        dense_dim,
        dense_boundary_unitarity: F17(unit_dev),
        dense_pythagoras: F17(pyth),
        backward_shift_n: bwd_n,
        backward_shift_delta_deviation: F17(bwd_dev),
        verdicts,
    };
    let json_path = cfg.out_path("charfun_report.json");
    write_json(&json_path, &report)?;
    Ok((all_pass(&report.verdicts), vec![json_path, csv_path]))
}
