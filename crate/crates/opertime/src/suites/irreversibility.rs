//! Intrinsic-irreversibility suite: Cayley calculus round trips, C-class
//! classification, the functional model of the backward shift, and the
//! quasi-affinity intertwining.

use super::ExperimentConfig;
use crate::charfun::{
    defect, functional_model_circle, quasi_affinity_x, residual_part, schaffer_dilation,
};
use crate::cogen::{
    cayley_cogenerator, cayley_generator, classify_c_class, cogenerator_from_semigroup,
    CClass, Probe, SemigroupSampler,
};
use crate::opcore::linalg::{
    self, c, cr, max_abs, random_hermitian, random_matrix, CMatrix, CVector,
};
use crate::opcore::operator::OperatorRep;
use crate::report::{all_pass, write_csv, write_json, Verdict, F17, SCHEMA_VERSION};
use crate::Result;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use serde::Serialize;
use std::path::PathBuf;

#[derive(Serialize)]
struct IrreversibilityReport {
    schema: u32,
    suite: &'static str,
    seed: u64,
    cayley_roundtrip_residual: F17,
    unitary_cogenerator_defect: F17,
    phi_error_coarse: F17,
    phi_error_fine: F17,
    phi_refinement_ratio: F17,
    stationary_flagged: bool,
    shift_class: CClass,
    shift_one_not_eigenvalue: bool,
    scalar_class: CClass,
    defect_dims: (usize, usize),
    truncation_artifact_suppressed: bool,
    model_is_exact_cyclic: bool,
    model_unitarity_defect: F17,
    intertwining_residual: F17,
    degenerate_x_for_c00: bool,
    verdicts: Vec<Verdict>,
}

pub fn run(cfg: &ExperimentConfig) -> Result<(bool, Vec<PathBuf>)> {
    let mut rng = ChaCha12Rng::seed_from_u64(cfg.seed);
    let mut verdicts = Vec::new();

    // Cayley round trip on a seeded dissipative generator
    let n = 8;
    let h_part = random_hermitian(&mut rng, n);
    let b = random_matrix(&mut rng, n, n);
    let a = h_part.map(|z| z * c(0.0, 1.0)) - (&b * b.adjoint()).scale(0.5);
    let w = cayley_cogenerator(&OperatorRep::dense(a.clone()))?;
    let back = cayley_generator(&w)?.to_dense()?;
    let roundtrip = max_abs(&(back - &a));
    verdicts.push(Verdict::leq(
        "cayley_roundtrip",
        roundtrip,
        cfg.tolerance("cayley_roundtrip", 1e-9),
    ));

    // Hermitian generator -> unitary cogenerator
    let h2 = random_hermitian(&mut rng, 6);
    let w_unit = cayley_cogenerator(&OperatorRep::dense(h2.map(|z| z * c(0.0, 1.0))))?;
    let unitary_defect = linalg::unitary_defect(&w_unit.to_dense()?);
    verdicts.push(Verdict::leq(
        "unitary_cogenerator",
        unitary_defect,
        cfg.tolerance("unitary_cogenerator", 1e-10),
    ));

    // small-time recovery error halves with t
    let w_true = CMatrix::from_partial_diagonal(2, 2, &[cr(0.0), cr(1.0 / 3.0)]);
    let sampler = SemigroupSampler::from_cogenerator(&OperatorRep::dense(w_true.clone()))?;
    let err = |t: f64| -> Result<f64> {
        let est = cogenerator_from_semigroup(&sampler, t)?;
        Ok(max_abs(&(est.cogenerator.to_dense()? - &w_true)))
    };
    let e_coarse = err(0.01)?;
    let e_fine = err(0.005)?;
    let ratio = e_fine / e_coarse;
    verdicts.push(Verdict::leq("phi_refinement_ratio", ratio, 0.6));

    // stationary semigroup flagged degenerate
    let stationary = SemigroupSampler::new(2, |_| CMatrix::identity(2, 2));
    let est = cogenerator_from_semigroup(&stationary, 1e-3)?;
    verdicts.push(Verdict::boolean(
        "stationary_degenerate_flag",
        est.degenerate_stationary,
    ));

    // classification: backward shift is C01, strict scalar is C00
    let shift_n = cfg.grid_n.unwrap_or(64);
    let w_shift = OperatorRep::TruncShiftBwd { dim: shift_n };
    let mut probe = Probe::basis_vector(shift_n, shift_n / 8);
    probe.boundary_margin = shift_n - 1 - shift_n / 8;
    let class_report = classify_c_class(&w_shift, &[probe], shift_n / 2)?;
    verdicts.push(Verdict::boolean(
        "backward_shift_is_c01",
        class_report.verdict == CClass::C01,
    ));
    verdicts.push(Verdict::boolean(
        "one_not_eigenvalue",
        class_report.one_not_eigenvalue,
    ));
    let scalar_probe = Probe::new(CVector::from_element(1, cr(1.0)), 0);
    let scalar_report = classify_c_class(
        &OperatorRep::dense(CMatrix::from_element(1, 1, cr(0.5))),
        &[scalar_probe],
        48,
    )?;
    verdicts.push(Verdict::boolean(
        "scalar_half_is_c00",
        scalar_report.verdict == CClass::C00,
    ));

    // defect data and the functional model of the backward shift
    let dd = defect(&w_shift)?;
    let model = functional_model_circle(&w_shift, shift_n)?;
    let model_is_exact_cyclic = matches!(
        model.model_shift,
        OperatorRep::CyclicShift { power: -1, .. }
    );
    let model_unitarity = model.unitarity_defect()?;
    verdicts.push(Verdict::boolean("model_exact_cyclic", model_is_exact_cyclic));
    verdicts.push(Verdict::leq(
        "model_unitarity",
        model_unitarity,
        cfg.tolerance("model_unitarity", 1e-9),
    ));

    // quasi-affinity intertwining on margin probes
    let dil = schaffer_dilation(&w_shift, shift_n)?;
    let res = residual_part(&dil, 8)?;
    let m_amb = dil.ambient_dim;
    let probes: Vec<Probe> = (0..4)
        .map(|k| {
            let mut v = CVector::zeros(m_amb);
            v[16 + 8 * k] = cr(1.0);
            Probe::new(v, 8)
        })
        .collect();
    let qa = quasi_affinity_x(&dil, &res, &w_shift, &probes)?;
    let intertwining = qa
        .intertwining_residuals
        .iter()
        .copied()
        .fold(0.0, f64::max);
    verdicts.push(Verdict::leq(
        "quasi_affinity_intertwining",
        intertwining,
        cfg.tolerance("intertwining", 1e-8),
    ));

    // degenerate X for the C00 scalar
    let w_scalar = OperatorRep::dense(CMatrix::from_element(1, 1, cr(0.0)));
    let dil0 = schaffer_dilation(&w_scalar, 8)?;
    let res0 = residual_part(&dil0, 6)?;
    let qa0 = quasi_affinity_x(&dil0, &res0, &w_scalar, &[])?;
    verdicts.push(Verdict::boolean("degenerate_x_for_c00", qa0.degenerate));

    // CSV decay curves
    let rows: Vec<Vec<f64>> = class_report.forward_decay[0]
        .iter()
        .zip(&class_report.adjoint_decay[0])
        .enumerate()
        .map(|(k, (f, a))| vec![k as f64, *f, *a])
        .collect();
    let csv_path = cfg.out_path("irreversibility_decay.csv");
    write_csv(&csv_path, &["n", "forward_norm", "adjoint_norm"], &rows)?;

    let report = IrreversibilityReport {
        schema: SCHEMA_VERSION,
        suite: "irreversibility",
        seed: cfg.seed,
        cayley_roundtrip_residual: F17(roundtrip),
        unitary_cogenerator_defect: F17(unitary_defect),
        phi_error_coarse: F17(e_coarse),
        phi_error_fine: F17(e_fine),
        phi_refinement_ratio: F17(ratio),
        stationary_flagged: est.degenerate_stationary,
        shift_class: class_report.verdict,
        shift_one_not_eigenvalue: class_report.one_not_eigenvalue,
        scalar_class: scalar_report.verdict,
        defect_dims: dd.defect_dims(),
        truncation_artifact_suppressed: dd.truncation_artifact_suppressed,
        model_is_exact_cyclic,
        model_unitarity_defect: F17(model_unitarity),
        intertwining_residual: F17(intertwining),
        degenerate_x_for_c00: qa0.degenerate,
        verdicts,
    };
    let json_path = cfg.out_path("irreversibility_report.json");
    write_json(&json_path, &report)?;
    Ok((all_pass(&report.verdicts), vec![json_path, csv_path]))
}
