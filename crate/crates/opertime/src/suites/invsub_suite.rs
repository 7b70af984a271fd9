//! Invariant-subspace suite: inner-function plant-and-recover and the
//! two-fiber Halmos-Helson decomposition.

use super::ExperimentConfig;
use crate::invsub::{
    beurling_inner, blaschke_column, dirichlet_column, halmos_helson_decompose,
    innovation_basis, innovation_ladder_orthogonality, DecompositionSummary,
    FourierWindowSubspace,
};
use crate::opcore::linalg::{c, cr, CVector, C64};
use crate::report::{all_pass, write_csv, write_json, Verdict, F17, SCHEMA_VERSION};
use crate::Result;
use serde::Serialize;
use std::f64::consts::PI;
use std::path::PathBuf;

#[derive(Serialize)]
struct PlantRecover {
    label: String,
    half_width: usize,
    deviation: F17,
    modulus_deviation: F17,
}

#[derive(Serialize)]
struct InvsubReport {
    schema: u32,
    suite: &'static str,
    seed: u64,
    plants: Vec<PlantRecover>,
    ladder_orthogonality: F17,
    decomposition: DecompositionSummary,
    ranks_expected_j: Vec<usize>,
    ranks_expected_k: Vec<usize>,
    ranks_match: bool,
    verdicts: Vec<Verdict>,
}

fn plant_deviation(
    planted: &dyn Fn(C64) -> C64,
    s: &FourierWindowSubspace,
) -> Result<(f64, f64)> {
    let inner = beurling_inner(s)?;
    let n = s.slots();
    let q_true: Vec<C64> = (0..n)
        .map(|j| {
            let theta = 2.0 * PI * j as f64 / n as f64;
            planted(c(theta.cos(), theta.sin()))
        })
        .collect();
    let phase = q_true[0] / inner.samples[0];
    let mut worst = 0.0f64;
    for (rec, want) in inner.samples.iter().zip(&q_true) {
        worst = worst.max((rec * phase - want).norm());
    }
    Ok((worst, inner.modulus_deviation))
}

pub fn run(cfg: &ExperimentConfig) -> Result<(bool, Vec<PathBuf>)> {
    let half_width = cfg.window_half_width.unwrap_or(64);
    let margin = cfg.margin.unwrap_or(4);
    let tol_plant = cfg.tolerance("plant_recover", 1e-7);
    let tol_orth = cfg.tolerance("pointwise_orthogonality", 1e-8);
    let tol_ladder = cfg.tolerance("ladder_orthogonality", 1e-10);

    let mut verdicts = Vec::new();
    let mut plants = Vec::new();

    // monomial chi^3
    let mons: Vec<(i64, usize)> = (3..=(half_width as i64 - margin as i64)).map(|k| (k, 0)).collect();
    let s_mono = FourierWindowSubspace::from_monomials(1, half_width, &mons)?;
    let (dev, modulus) = plant_deviation(&|w| w * w * w, &s_mono)?;
    verdicts.push(Verdict::leq("plant_monomial_chi3", dev, tol_plant));
    plants.push(PlantRecover {
        label: "chi^3".into(),
        half_width,
        deviation: F17(dev),
        modulus_deviation: F17(modulus),
    });

    // Blaschke factor a = 1/2
    let a = cr(0.5);
    let keep = (half_width / 3).max(8);
    let cols: Vec<CVector> = (0..=keep as i64)
        .map(|sft| blaschke_column(a, sft, 1, 0, half_width))
        .collect();
    let s_blaschke = FourierWindowSubspace::from_columns(1, half_width, &cols, margin)?;
    let (dev_b, modulus_b) =
        plant_deviation(&|w| (w - a) / (cr(1.0) - a.conj() * w), &s_blaschke)?;
    verdicts.push(Verdict::leq("plant_blaschke_half", dev_b, tol_plant));
    plants.push(PlantRecover {
        label: "blaschke a=0.5".into(),
        half_width,
        deviation: F17(dev_b),
        modulus_deviation: F17(modulus_b),
    });

    // innovation ladder orthogonality on the Hardy window
    let hardy = FourierWindowSubspace::hardy_window(1, half_width, margin)?;
    let inno = innovation_basis(&hardy)?;
    let ladder = innovation_ladder_orthogonality(&inno.basis, &hardy, margin.min(4))?;
    verdicts.push(Verdict::leq("innovation_ladder", ladder, tol_ladder));

    // mixed two-fiber decomposition
    let m_mix = 10usize;
    let slots = 2 * m_mix + 1;
    let mut cols: Vec<CVector> = (1..=8)
        .map(|k| {
            let s = FourierWindowSubspace::from_monomials(2, m_mix, &[(k, 0)]).unwrap();
            s.basis.columns.column(0).into_owned()
        })
        .collect();
    let lower: Vec<usize> = (0..slots / 2).collect();
    for &j in &lower {
        cols.push(dirichlet_column(j, 2, 1, m_mix));
    }
    let s_mix = FourierWindowSubspace::from_columns(2, m_mix, &cols, 2)?;
    let dec = halmos_helson_decompose(&s_mix)?;
    let summary = dec.summary(&s_mix);
    let ranks_expected_j = vec![1usize; slots];
    let ranks_expected_k: Vec<usize> = (0..slots).map(|j| usize::from(lower.contains(&j))).collect();
    let ranks_match =
        summary.ranks_j == ranks_expected_j && summary.ranks_k == ranks_expected_k;
    verdicts.push(Verdict::leq(
        "decomposition_j_perp_k",
        dec.orthogonality_residual,
        tol_orth,
    ));
    verdicts.push(Verdict::boolean("decomposition_ranks", ranks_match));
    if let Some(rigid) = &dec.rigid {
        verdicts.push(Verdict::leq(
            "rigid_partial_isometry",
            rigid.partial_isometry_defect(),
            cfg.tolerance("partial_isometry", 1e-8),
        ));
    }

    // CSV: the recovered Blaschke samples
    let inner_b = beurling_inner(&s_blaschke)?;
    let rows: Vec<Vec<f64>> = inner_b
        .samples
        .iter()
        .enumerate()
        .map(|(j, q)| {
            let angle = 2.0 * PI * j as f64 / s_blaschke.slots() as f64;
            vec![angle, q.re, q.im, q.norm() - 1.0]
        })
        .collect();
    let csv_path = cfg.out_path("invsub_inner_recovery.csv");
    write_csv(&csv_path, &["omega_angle", "q_re", "q_im", "modulus_defect"], &rows)?;

    let report = InvsubReport {
        schema: SCHEMA_VERSION,
        suite: "invsub",
        seed: cfg.seed,
        plants,
        ladder_orthogonality: F17(ladder),
        decomposition: summary,
        ranks_expected_j,
        ranks_expected_k,
        ranks_match,
        verdicts,
    };
    let json_path = cfg.out_path("invsub_report.json");
    write_json(&json_path, &report)?;
    Ok((all_pass(&report.verdicts), vec![json_path, csv_path]))
}
