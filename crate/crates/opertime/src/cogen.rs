//! Cayley-transform calculus between contraction semigroups and their
//! cogenerators, and numerical C-class classification.
//!
//! A contraction semigroup {W_t} with generator A determines its
//! cogenerator W = (A + I)(A - I)^{-1}; conversely A = (W + I)(W - I)^{-1}
//! and W_t = e_t(W) with e_t(z) = exp(t (z+1)/(z-1)). The semigroup can be
//! recovered from a small-time sample through phi_t(z) = (z-1+t)/(z-1-t).
//! The C-class of a contraction (does W^n h die out, does W*^n h survive)
//! is the irreversibility precondition for the functional models.

use crate::error::{OperError, Result};
use crate::opcore::linalg::{
    self, condition_number, cr, matrix_exp, max_abs, CMatrix, CVector,
};
use crate::opcore::operator::OperatorRep;

/// Condition-number ceiling treated as "numerically invertible".
const COND_LIMIT: f64 = 1e12;

/// Distance from the spectrum to 1 below which the Cayley transform is
/// refused.
const EIG_ONE_TOL: f64 = 1e-10;

/// Sampled one-parameter semigroup t >= 0 |-> dense operator.
pub struct SemigroupSampler {
    eval: Box<dyn Fn(f64) -> CMatrix>,
    pub dim: usize,
}

impl SemigroupSampler {
    pub fn new(dim: usize, eval: impl Fn(f64) -> CMatrix + 'static) -> Self {
        Self {
            eval: Box::new(eval),
            dim,
        }
    }

    /// Semigroup e^{tA} of a dense generator.
    pub fn from_generator(a: CMatrix) -> Self {
        let dim = a.nrows();
        Self::new(dim, move |t| matrix_exp(&a.scale(t)))
    }

    /// Semigroup of a cogenerator, through e_t.
    pub fn from_cogenerator(w: &OperatorRep) -> Result<Self> {
        let a = cayley_generator(w)?.to_dense()?;
        Ok(Self::from_generator(a))
    }

    pub fn eval(&self, t: f64) -> CMatrix {
        (self.eval)(t)
    }

    /// Identity-at-zero defect and worst semigroup-property residual over
    /// the sampled time pairs.
    pub fn validate(&self, times: &[f64]) -> SemigroupValidation {
        let id_defect = linalg::identity_defect(&self.eval(0.0));
        let mut worst = 0.0f64;
        for &t in times {
            for &s in times {
                let lhs = self.eval(t) * self.eval(s);
                let rhs = self.eval(t + s);
                worst = worst.max(max_abs(&(lhs - rhs)));
            }
        }
        SemigroupValidation {
            identity_defect: id_defect,
            semigroup_residual: worst,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SemigroupValidation {
    pub identity_defect: f64,
    pub semigroup_residual: f64,
}

/// Cogenerator W = (A + I)(A - I)^{-1} of a dense generator.
///
/// Fails when A - I is numerically singular, which signals that the
/// Cayley transform would need 1 in the spectrum.
pub fn cayley_cogenerator(a: &OperatorRep) -> Result<OperatorRep> {
    let a = a.to_dense()?;
    let n = a.nrows();
    let id = CMatrix::identity(n, n);
    let denom = &a - &id;
    if condition_number(&denom) > COND_LIMIT {
        return Err(OperError::SpectrumObstruction {
            detail: "A - I numerically singular: 1 obstructs the Cayley transform".into(),
        });
    }
    let w = linalg::solve(&denom, &(&a + &id), "cayley cogenerator resolvent")?;
    Ok(OperatorRep::dense(w))
}

/// Generator A = (W + I)(W - I)^{-1} of a cogenerator.
///
/// Refused when 1 is an eigenvalue of W: a contraction is a cogenerator
/// precisely when 1 is not among its eigenvalues.
pub fn cayley_generator(w: &OperatorRep) -> Result<OperatorRep> {
    let w = w.to_dense()?;
    let n = w.nrows();
    let dist = linalg::spectral_distance(&w, cr(1.0))?;
    if dist <= EIG_ONE_TOL {
        return Err(OperError::SpectrumObstruction {
            detail: format!("1 is an eigenvalue of the cogenerator (distance {dist:.3e})"),
        });
    }
    let id = CMatrix::identity(n, n);
    let a = linalg::solve(&(&w - &id), &(&w + &id), "cayley generator resolvent")?;
    Ok(OperatorRep::dense(a))
}

/// Semigroup element W_t = e_t(W) = exp(t (W + I)(W - I)^{-1}).
pub fn semigroup_element(w: &OperatorRep, t: f64) -> Result<OperatorRep> {
    if t < 0.0 {
        return Err(OperError::InvalidInput {
            detail: format!("semigroup element needs t >= 0, got {t}"),
        });
    }
    let a = cayley_generator(w)?.to_dense()?;
    Ok(OperatorRep::dense(matrix_exp(&a.scale(t))))
}

/// Result of recovering a cogenerator from a small-time semigroup sample.
#[derive(Debug, Clone)]
pub struct CogeneratorEstimate {
    pub cogenerator: OperatorRep,
    /// Set when the sampled element is the identity to working precision
    /// relative to t: a stationary semigroup, for which the limit
    /// phi_t(W_t) -> W carries no dynamical information.
    pub degenerate_stationary: bool,
}

/// Recover the cogenerator from one semigroup sample via
/// phi_t(W_t) = (W_t - I + tI)(W_t - I - tI)^{-1}; the error against the
/// true cogenerator is O(t).
pub fn cogenerator_from_semigroup(
    sampler: &SemigroupSampler,
    t_small: f64,
) -> Result<CogeneratorEstimate> {
    if t_small <= 0.0 {
        return Err(OperError::InvalidInput {
            detail: format!("phi_t needs t > 0, got {t_small}"),
        });
    }
    let wt = sampler.eval(t_small);
    let n = wt.nrows();
    let id = CMatrix::identity(n, n);
    let m = &wt - &id;
    let degenerate_stationary = max_abs(&m) < 1e-6 * t_small;
    let num = &m + id.scale(t_small);
    let den = &m - id.scale(t_small);
    if condition_number(&den) > COND_LIMIT {
        return Err(OperError::Singular {
            detail: "phi_t resolvent W_t - (1 + t) I is numerically singular".into(),
        });
    }
    // (M + tI) and (M - tI)^{-1} commute, so the one-sided solve is exact.
    let w = linalg::solve(&den, &num, "phi_t resolvent")?;
    Ok(CogeneratorEstimate {
        cogenerator: OperatorRep::dense(w),
        degenerate_stationary,
    })
}

/// Asymptotic C-class verdict for a contraction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum CClass {
    C00,
    C01,
    C10,
    C11,
    Inconclusive,
}

/// Decay sequences of `||W^n h||` and `||W*^n h||` per probe, with the
/// thresholded verdict. Raw sequences are kept so callers can re-threshold.
#[derive(Debug, Clone)]
pub struct ClassReport {
    pub forward_decay: Vec<Vec<f64>>,
    pub adjoint_decay: Vec<Vec<f64>>,
    pub verdict: CClass,
    pub one_not_eigenvalue: bool,
    pub decay_threshold: f64,
    pub persist_threshold: f64,
}

/// A probe vector with the width of the boundary band its support avoids.
#[derive(Debug, Clone)]
pub struct Probe {
    pub data: CVector,
    pub boundary_margin: usize,
}

impl Probe {
    pub fn new(data: CVector, boundary_margin: usize) -> Self {
        Self {
            data,
            boundary_margin,
        }
    }

    /// Standard basis probe; the margin is the distance to the nearest end.
    pub fn basis_vector(dim: usize, index: usize) -> Self {
        let mut data = CVector::zeros(dim);
        data[index] = cr(1.0);
        Self {
            data,
            boundary_margin: index.min(dim - 1 - index),
        }
    }
}

/// A sequence "decays" when its final value drops below
/// `decay_threshold x initial`, "persists" when it stays above
/// `persist_threshold x initial`; anything else is inconclusive.
const DECAY_THRESHOLD: f64 = 1e-6;
const PERSIST_THRESHOLD: f64 = 0.5;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Tail {
    Decays,
    Persists,
    Unclear,
}

fn tail_of(seq: &[f64]) -> Tail {
    let initial = seq[0];
    let last = *seq.last().unwrap();
    if initial == 0.0 {
        return Tail::Unclear;
    }
    if last < DECAY_THRESHOLD * initial {
        Tail::Decays
    } else if last > PERSIST_THRESHOLD * initial {
        Tail::Persists
    } else {
        Tail::Unclear
    }
}

/// Classify the asymptotic class of a contraction from probe decay
/// sequences of length `n_max`.
///
/// Truncated-shift inputs require every probe to carry a boundary margin
/// of at least `n_max`, otherwise the sequences would measure the
/// truncation edge instead of the operator.
pub fn classify_c_class(w: &OperatorRep, probes: &[Probe], n_max: usize) -> Result<ClassReport> {
    if probes.is_empty() || n_max == 0 {
        return Err(OperError::InvalidInput {
            detail: "classification needs at least one probe and n_max >= 1".into(),
        });
    }
    let truncated = matches!(
        w,
        OperatorRep::TruncShiftFwd { .. } | OperatorRep::TruncShiftBwd { .. }
    );
    if truncated {
        for (i, p) in probes.iter().enumerate() {
            if p.boundary_margin < n_max {
                return Err(OperError::MarginViolated {
                    detail: format!(
                        "probe {i} has margin {} < n_max {n_max} on a truncated shift",
                        p.boundary_margin
                    ),
                });
            }
        }
    }

    let adj = w.adjoint();
    let mut forward = Vec::with_capacity(probes.len());
    let mut adjoint = Vec::with_capacity(probes.len());
    for p in probes {
        forward.push(norm_sequence(w, &p.data, n_max)?);
        adjoint.push(norm_sequence(&adj, &p.data, n_max)?);
    }

    let fwd_tails: Vec<Tail> = forward.iter().map(|s| tail_of(s)).collect();
    let adj_tails: Vec<Tail> = adjoint.iter().map(|s| tail_of(s)).collect();
    let all = |tails: &[Tail], want: Tail| tails.iter().all(|&t| t == want);

    let verdict = if all(&fwd_tails, Tail::Decays) && all(&adj_tails, Tail::Decays) {
        CClass::C00
    } else if all(&fwd_tails, Tail::Decays) && all(&adj_tails, Tail::Persists) {
        CClass::C01
    } else if all(&fwd_tails, Tail::Persists) && all(&adj_tails, Tail::Decays) {
        CClass::C10
    } else if all(&fwd_tails, Tail::Persists) && all(&adj_tails, Tail::Persists) {
        CClass::C11
    } else {
        CClass::Inconclusive
    };

    let one_not_eigenvalue = one_not_eigenvalue(w)?;

    Ok(ClassReport {
        forward_decay: forward,
        adjoint_decay: adjoint,
        verdict,
        one_not_eigenvalue,
        decay_threshold: DECAY_THRESHOLD,
        persist_threshold: PERSIST_THRESHOLD,
    })
}

fn norm_sequence(w: &OperatorRep, h: &CVector, n_max: usize) -> Result<Vec<f64>> {
    let mut seq = Vec::with_capacity(n_max + 1);
    let mut cur = h.clone();
    seq.push(cur.norm());
    for _ in 0..n_max {
        cur = w.apply(&cur)?;
        seq.push(cur.norm());
    }
    Ok(seq)
}

/// Whether 1 fails to be an eigenvalue: structural rule for the shift
/// variants, spectral computation for dense carriers.
pub fn one_not_eigenvalue(w: &OperatorRep) -> Result<bool> {
    match w {
        // The cyclic shift has every N-th root of unity, including 1.
        OperatorRep::CyclicShift { .. } => Ok(false),
        // In the infinite model the unilateral shift has empty point
        // spectrum and the backward shift has the open disc; 1 is in
        // neither.
        OperatorRep::TruncShiftFwd { .. } | OperatorRep::TruncShiftBwd { .. } => Ok(true),
        _ => {
            let m = w.to_dense()?;
            Ok(linalg::spectral_distance(&m, cr(1.0))? > EIG_ONE_TOL)
        }
    }
}
