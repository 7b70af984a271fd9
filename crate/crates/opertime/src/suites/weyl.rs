//! Finite Weyl pair suite: the exact clock/shift relation over a size
//! ladder and the exponentiated Weyl commutation relation.

use super::ExperimentConfig;
use crate::opcore::linalg::cr;
use crate::opcore::operator::OperatorRep;
use crate::report::{all_pass, write_csv, write_json, Verdict, F17, SCHEMA_VERSION};
use crate::timeop::{check_weyl_relation, finite_weyl_pair, finite_weyl_residual};
use crate::Result;
use serde::Serialize;
use std::f64::consts::PI;
use std::path::PathBuf;

#[derive(Serialize)]
struct WeylReport {
    schema: u32,
    suite: &'static str,
    seed: u64,
    sizes: Vec<usize>,
    relation_residuals: Vec<F17>,
    exponentiated_size: usize,
    exponentiated_residual: F17,
    verdicts: Vec<Verdict>,
}

pub fn run(cfg: &ExperimentConfig) -> Result<(bool, Vec<PathBuf>)> {
    let mut sizes = vec![2usize, 64, 1024];
    if let Some(n) = cfg.grid_n {
        if !sizes.contains(&n) {
            sizes.push(n);
        }
    }
    let tol = cfg.tolerance("weyl_relation", 1e-12);
    let mut residuals = Vec::new();
    let mut verdicts = Vec::new();
    for &n in &sizes {
        let (clock, shift) = finite_weyl_pair(n);
        let r = finite_weyl_residual(&clock, &shift)?;
        residuals.push(F17(r));
        verdicts.push(Verdict::leq(&format!("clock_shift_residual_n{n}"), r, tol));
    }

    // exponentiated relation at the compatible discrete parameters
    let n_exp = 32usize;
    let (clock, shift) = finite_weyl_pair(n_exp);
    let u_family = |t: f64| -> Result<OperatorRep> {
        let a = t.round() as i64;
        let mut m = OperatorRep::identity(n_exp);
        for _ in 0..a.unsigned_abs() {
            m = OperatorRep::Compose(vec![shift.clone(), m]);
        }
        if a < 0 {
            m = m.adjoint();
        }
        Ok(OperatorRep::dense(m.to_dense()?))
    };
    let v_family = |s: f64| -> Result<OperatorRep> {
        let b = (s * n_exp as f64 / (2.0 * PI)).round() as i64;
        let mut m = OperatorRep::identity(n_exp);
        for _ in 0..b.unsigned_abs() {
            m = OperatorRep::Compose(vec![clock.clone(), m]);
        }
        if b < 0 {
            m = m.adjoint();
        }
        Ok(OperatorRep::dense(m.to_dense()?))
    };
    let step = 2.0 * PI / n_exp as f64;
    let wr = check_weyl_relation(
        &u_family,
        &v_family,
        &[0.0, 1.0, 3.0, 7.0],
        &[0.0, step, 4.0 * step],
        cfg.tolerance("exponentiated_weyl", 1e-11),
    )?;
    verdicts.push(Verdict::leq(
        "exponentiated_weyl_residual",
        wr.max_residual,
        wr.threshold,
    ));
    let _ = cr(0.0);

    let report = WeylReport {
        schema: SCHEMA_VERSION,
        suite: "weyl",
        seed: cfg.seed,
        sizes: sizes.clone(),
        relation_residuals: residuals.clone(),
        exponentiated_size: n_exp,
        exponentiated_residual: F17(wr.max_residual),
        verdicts,
    };
    let json_path = cfg.out_path("weyl_report.json");
    write_json(&json_path, &report)?;
    let csv_path = cfg.out_path("weyl_residuals.csv");
    let rows: Vec<Vec<f64>> = sizes
        .iter()
        .zip(&residuals)
        .map(|(n, r)| vec![*n as f64, r.0])
        .collect();
    write_csv(&csv_path, &["n", "residual"], &rows)?;
    Ok((all_pass(&report.verdicts), vec![json_path, csv_path]))
}
