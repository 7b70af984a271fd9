//! Outgoing-subspace suite: the axioms, the Sinai translation
//! representation, and the spectral representation on the shift model.

use super::ExperimentConfig;
use crate::opcore::operator::OperatorRep;
use crate::opcore::subspace::SubspaceBasis;
use crate::report::{all_pass, write_csv, write_json, Verdict, F17, SCHEMA_VERSION};
use crate::timeop::{sinai_translation_representation, spectral_representation, verify_outgoing};
use crate::Result;
use serde::Serialize;
use std::path::PathBuf;

#[derive(Serialize)]
struct LaxPhillipsReport {
    schema: u32,
    suite: &'static str,
    seed: u64,
    n: usize,
    invariance_residual: F17,
    intersection_dim: usize,
    union_codim: usize,
    fiber_dim: usize,
    conjugation_residual: F17,
    mplus_alignment: F17,
    two_channel_fiber_dim: usize,
    spectral_evolution_residual: F17,
    spectral_derivative_residual: F17,
    paley_wiener_residual: F17,
    roundtrip_residual: F17,
    verdicts: Vec<Verdict>,
}

pub fn run(cfg: &ExperimentConfig) -> Result<(bool, Vec<PathBuf>)> {
    let n = cfg.grid_n.unwrap_or(256);
    let tol = cfg.tolerance("representation", 1e-9);
    let u = OperatorRep::CyclicShift {
        blocks: n,
        block_size: 1,
        power: -1,
    };
    let mp = SubspaceBasis::coordinate_span(n, &(n / 2..n).collect::<Vec<_>>());
    let outgoing = verify_outgoing(&mp, &u, n / 2, 1)?;
    let mut verdicts = vec![
        Verdict::boolean("outgoing_invariant", outgoing.invariant),
        Verdict::boolean("outgoing_intersection_trivial", outgoing.intersection_dim == 0),
        Verdict::boolean("outgoing_union_dense", outgoing.union_codim == 0),
    ];

    let trans = sinai_translation_representation(&u, &mp, n / 2, 1)?;
    verdicts.push(Verdict::boolean("fiber_is_single_channel", trans.fiber_dim == 1));
    verdicts.push(Verdict::leq(
        "translation_conjugation",
        trans.conjugation_residual,
        tol,
    ));
    verdicts.push(Verdict::leq("mplus_alignment", trans.mplus_alignment, tol));

    // two interleaved channels
    let u2 = OperatorRep::CyclicShift {
        blocks: n,
        block_size: 1,
        power: -2,
    };
    let trans2 = sinai_translation_representation(&u2, &mp, n / 2 - 1, 2)?;
    verdicts.push(Verdict::boolean("two_channel_fiber", trans2.fiber_dim == 2));

    let spec = spectral_representation(&trans, &u, &mp)?;
    verdicts.push(Verdict::leq("spectral_evolution", spec.evolution_residual, tol));
    verdicts.push(Verdict::leq(
        "spectral_derivative",
        spec.derivative_residual,
        tol,
    ));
    verdicts.push(Verdict::leq(
        "paley_wiener",
        spec.paley_wiener_residual,
        cfg.tolerance("paley_wiener", 1e-10),
    ));
    verdicts.push(Verdict::leq(
        "spectral_roundtrip",
        spec.roundtrip_residual,
        cfg.tolerance("roundtrip", 1e-10),
    ));

    // CSV: per-column conjugation residual of the translation map
    let u_dense = u.to_dense()?;
    let conj = trans.map.adjoint() * &u_dense * &trans.map;
    let model = OperatorRep::CyclicShift {
        blocks: trans.slots,
        block_size: trans.fiber_dim,
        power: -1,
    }
    .to_dense()?;
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|col| {
            let mut worst = 0.0f64;
            for row in 0..n {
                worst = worst.max((conj[(row, col)] - model[(row, col)]).norm());
            }
            vec![col as f64, worst]
        })
        .collect();
    let csv_path = cfg.out_path("lax_phillips_conjugation.csv");
    write_csv(&csv_path, &["column", "residual"], &rows)?;

    let report = LaxPhillipsReport {
        schema: SCHEMA_VERSION,
        suite: "lax_phillips",
        seed: cfg.seed,
        n,
        invariance_residual: F17(outgoing.invariance_residual),
        intersection_dim: outgoing.intersection_dim,
        union_codim: outgoing.union_codim,
        fiber_dim: trans.fiber_dim,
        conjugation_residual: F17(trans.conjugation_residual),
        mplus_alignment: F17(trans.mplus_alignment),
        two_channel_fiber_dim: trans2.fiber_dim,
        spectral_evolution_residual: F17(spec.evolution_residual),
        spectral_derivative_residual: F17(spec.derivative_residual),
        paley_wiener_residual: F17(spec.paley_wiener_residual),
        roundtrip_residual: F17(spec.roundtrip_residual),
        verdicts,
    };
    let json_path = cfg.out_path("lax_phillips_report.json");
    write_json(&json_path, &report)?;
    Ok((all_pass(&report.verdicts), vec![json_path, csv_path]))
}
