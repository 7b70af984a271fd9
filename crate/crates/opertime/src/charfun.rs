//! Defect operators, the characteristic function and its boundary defect,
//! circle and half-plane functional models, finite-step isometric
//! dilation, residual parts, and the quasi-affinity intertwiner.
//!
//! For a contraction W the defect operators are D_W = (I - W*W)^{1/2} and
//! D_{W*} = (I - WW*)^{1/2}, with defect spaces their closed ranges. The
//! characteristic function
//!
//!   Theta_W(z) = [-W + z D_{W*} (I - z W*)^{-1} D_W] restricted to D_W
//!
//! is contractive on the open disc and unitary at boundary points in the
//! resolvent set. Its boundary defect Delta(w) = (I - Theta*Theta)^{1/2}
//! is the range function of the residual model space: the model evolution
//! is multiplication by the circle variable on the pointwise range of
//! Delta. Structured shift variants use their exact infinite-model defect
//! rule instead of the truncated matrices, so the truncation artifact at
//! the window edge never enters the model.

use crate::cogen::{classify_c_class, CClass, Probe};
use crate::error::{OperError, Result};
use crate::opcore::grid::{
    dft_columns, eval_modes_at, fourier, FourierDirection, GridFunction, LineWeight,
};
use crate::opcore::linalg::{
    self, c, condition_number, cr, hermitian_sqrt_clipped, max_abs, CMatrix, CVector, C64,
};
use crate::opcore::operator::OperatorRep;
use crate::opcore::range::RangeFunction;
use crate::opcore::subspace::{self, orthonormalize_columns, SubspaceBasis};
use crate::opcore::Domain;
use std::f64::consts::PI;

/// Absolute singular-value cutoff for extracting defect and model ranges.
/// Defect-type operators are bounded by 1, so the cutoff is absolute:
/// a relative cutoff would inflate a numerically-zero defect matrix
/// (for instance of a unitary, where D_W ~ sqrt(rounding)) to full rank.
const DEFECT_RANK_TOL: f64 = 1e-6;

/// Defect operators and defect spaces of a contraction.
#[derive(Debug, Clone)]
pub struct DefectData {
    pub d_w: CMatrix,
    pub d_w_star: CMatrix,
    pub basis_dw: SubspaceBasis,
    pub basis_dw_star: SubspaceBasis,
    /// Set when the structured infinite-model rule suppressed a spurious
    /// defect created by the finite truncation (the boundary sample of a
    /// truncated shift).
    pub truncation_artifact_suppressed: bool,
}

impl DefectData {
    pub fn defect_dims(&self) -> (usize, usize) {
        (self.basis_dw.rank(), self.basis_dw_star.rank())
    }
}

/// Defect operators of a contraction.
///
/// Dense carriers use the Hermitian square root of I - W*W with the
/// spectrum clipped to [0, 1]. The truncated backward shift keeps its
/// infinite-model rule: D_W supported on the bottom sample, D_{W*} = 0;
/// symmetrically for the forward shift.
pub fn defect(w: &OperatorRep) -> Result<DefectData> {
    match w {
        OperatorRep::TruncShiftBwd { dim } => {
            let n = *dim;
            let mut d_w = CMatrix::zeros(n, n);
            d_w[(0, 0)] = cr(1.0);
            Ok(DefectData {
                d_w,
                d_w_star: CMatrix::zeros(n, n),
                basis_dw: SubspaceBasis::coordinate_span(n, &[0]),
                basis_dw_star: SubspaceBasis::trivial(n),
                truncation_artifact_suppressed: true,
            })
        }
        OperatorRep::TruncShiftFwd { dim } => {
            let n = *dim;
            let mut d_w_star = CMatrix::zeros(n, n);
            d_w_star[(0, 0)] = cr(1.0);
            Ok(DefectData {
                d_w: CMatrix::zeros(n, n),
                d_w_star,
                basis_dw: SubspaceBasis::trivial(n),
                basis_dw_star: SubspaceBasis::coordinate_span(n, &[0]),
                truncation_artifact_suppressed: true,
            })
        }
        OperatorRep::CyclicShift { .. } => {
            let n = w.dim();
            Ok(DefectData {
                d_w: CMatrix::zeros(n, n),
                d_w_star: CMatrix::zeros(n, n),
                basis_dw: SubspaceBasis::trivial(n),
                basis_dw_star: SubspaceBasis::trivial(n),
                truncation_artifact_suppressed: false,
            })
        }
        _ => {
            w.require_contraction(1e-12)?;
            let m = w.to_dense()?;
            let n = m.nrows();
            let id = CMatrix::identity(n, n);
            let d_w = hermitian_sqrt_clipped(&(&id - m.adjoint() * &m), 1.0);
            let d_w_star = hermitian_sqrt_clipped(&(&id - &m * m.adjoint()), 1.0);
            let basis_dw = subspace::range_basis_abs(&d_w, DEFECT_RANK_TOL)?;
            let basis_dw_star = subspace::range_basis_abs(&d_w_star, DEFECT_RANK_TOL)?;
            Ok(DefectData {
                d_w,
                d_w_star,
                basis_dw,
                basis_dw_star,
                truncation_artifact_suppressed: false,
            })
        }
    }
}

/// Characteristic function at one point, as a matrix from `basis_dw`
/// coordinates to `basis_dw_star` coordinates.
pub fn theta(w: &OperatorRep, lambda: C64) -> Result<CMatrix> {
    let dd = defect(w)?;
    theta_with_defect(w, &dd, lambda)
}

/// Same as [`theta`] with a precomputed defect; structured shifts use
/// their closed forms (the map between a trivial and a one-dimensional
/// defect space is identically zero of the appropriate shape).
pub fn theta_with_defect(w: &OperatorRep, dd: &DefectData, lambda: C64) -> Result<CMatrix> {
    let (r, rs) = dd.defect_dims();
    match w {
        OperatorRep::TruncShiftBwd { .. }
        | OperatorRep::TruncShiftFwd { .. }
        | OperatorRep::CyclicShift { .. } => Ok(CMatrix::zeros(rs, r)),
        _ => {
            let m = w.to_dense()?;
            let n = m.nrows();
            if r == 0 || rs == 0 {
                return Ok(CMatrix::zeros(rs, r));
            }
            let id = CMatrix::identity(n, n);
            let resolvent_arg = &id - m.adjoint().map(|z| z * lambda);
            if condition_number(&resolvent_arg) > 1e12 {
                return Err(OperError::Singular {
                    detail: format!(
                        "I - lambda W* numerically singular at lambda = {lambda}; point outside A_W"
                    ),
                });
            }
            let rhs = &dd.d_w * &dd.basis_dw.columns; // n x r
            let solved = linalg::solve(&resolvent_arg, &rhs, "characteristic function resolvent")?;
            let full = -&m * &dd.basis_dw.columns + (&dd.d_w_star * solved).map(|z| z * lambda);
            Ok(dd.basis_dw_star.columns.adjoint() * full)
        }
    }
}

/// Characteristic function and boundary defect sampled at the N-th roots
/// of unity.
#[derive(Debug, Clone)]
pub struct CharFunSamples {
    pub n: usize,
    /// Theta(w_j): defect-space matrices, one per grid point.
    pub theta: Vec<CMatrix>,
    /// Delta(w_j) = (I - Theta* Theta)^{1/2} on the D_W coordinates.
    pub delta: Vec<CMatrix>,
    /// Pointwise || Delta^2 - Delta ||; small exactly when Delta is the
    /// projection onto ker Theta(w_j), the C01 situation.
    pub idempotency_defect: Vec<f64>,
    /// Pointwise || Theta(w_j)^H Theta(w_j) + Delta^2 - I ||.
    pub pythagoras_defect: Vec<f64>,
}

impl CharFunSamples {
    pub fn max_delta_norm(&self) -> f64 {
        self.delta
            .iter()
            .map(linalg::operator_norm)
            .fold(0.0, f64::max)
    }

    /// Rank of Delta(w_j) at every grid point.
    pub fn delta_ranks(&self) -> Vec<usize> {
        self.delta
            .iter()
            .map(|d| {
                let sv = d.clone().svd(false, false).singular_values;
                sv.iter().filter(|&&s| s > DEFECT_RANK_TOL).count()
            })
            .collect()
    }
}

/// Sample Theta and Delta at all N roots of unity.
pub fn delta_samples(w: &OperatorRep, n: usize) -> Result<CharFunSamples> {
    if n == 0 {
        return Err(OperError::InvalidInput {
            detail: "delta_samples needs a nonempty grid".into(),
        });
    }
    let dd = defect(w)?;
    let r = dd.basis_dw.rank();
    let id_r = CMatrix::identity(r, r);
    let mut thetas = Vec::with_capacity(n);
    let mut deltas = Vec::with_capacity(n);
    let mut idem = Vec::with_capacity(n);
    let mut pyth = Vec::with_capacity(n);
    for j in 0..n {
        let angle = 2.0 * PI * j as f64 / n as f64;
        let omega = c(angle.cos(), angle.sin());
        let th = theta_with_defect(w, &dd, omega)?;
        let gram = th.adjoint() * &th;
        let delta = hermitian_sqrt_clipped(&(&id_r - &gram), 1.0);
        idem.push(max_abs(&(&delta * &delta - &delta)));
        pyth.push(max_abs(&(gram + &delta * &delta - &id_r)));
        thetas.push(th);
        deltas.push(delta);
    }
    Ok(CharFunSamples {
        n,
        theta: thetas,
        delta: deltas,
        idempotency_defect: idem,
        pythagoras_defect: pyth,
    })
}

/// The circle functional model: the pointwise range of the boundary
/// defect, and the model evolution acting on Fourier-coefficient stacks.
#[derive(Debug, Clone)]
pub struct FunctionalModel {
    /// Range function of the model space, on the D_W coordinates.
    pub range: RangeFunction,
    /// Multiplication by the circle variable compressed to the model
    /// space, acting on coefficient stacks of N blocks of size
    /// `fiber_dim` (FFT mode ordering). When the range is full at every
    /// point this is the exact cyclic block shift.
    pub model_shift: OperatorRep,
    pub fiber_dim: usize,
    pub class: CClass,
    /// Dimension of the model space inside the N * fiber_dim coefficient
    /// coordinates.
    pub model_dim: usize,
}

impl FunctionalModel {
    /// Worst defect of unitarity of the model shift on the model space.
    pub fn unitarity_defect(&self) -> Result<f64> {
        let basis = self.model_space_basis()?;
        if basis.rank() == 0 {
            return Ok(0.0);
        }
        let mut images = CMatrix::zeros(basis.dim(), basis.rank());
        for j in 0..basis.rank() {
            let col = basis.columns.column(j).into_owned();
            images.set_column(j, &self.model_shift.apply(&col)?);
        }
        let gram = images.adjoint() * &images;
        Ok(linalg::identity_defect(&gram))
    }

    /// Orthonormal basis of the model space in coefficient coordinates.
    pub fn model_space_basis(&self) -> Result<SubspaceBasis> {
        let n = self.range.n_points;
        let r = self.fiber_dim;
        if r == 0 {
            return Ok(SubspaceBasis::trivial(0));
        }
        let mut cols: Vec<CVector> = Vec::new();
        for j in 0..n {
            let p = &self.range.projections[j];
            let pb = orthonormalize_columns(p, 1e-10)?;
            for k in 0..pb.rank() {
                // sample-space spike in the fiber direction at point j
                let mut sample_vec = CMatrix::zeros(n, r);
                for ch in 0..r {
                    sample_vec[(j, ch)] = pb.columns[(ch, k)];
                }
                let modes = dft_columns(&sample_vec, true).scale(1.0 / n as f64);
                let mut stacked = CVector::zeros(n * r);
                for m in 0..n {
                    for ch in 0..r {
                        stacked[m * r + ch] = modes[(m, ch)];
                    }
                }
                cols.push(stacked);
            }
        }
        subspace::orthonormalize(&cols, 1e-10)
    }
}

/// Build the circle functional model of a contraction.
///
/// The class is established first; an inconclusive verdict is an error
/// asking for a larger n_max, and a C00 input yields the trivial model.
pub fn functional_model_circle(w: &OperatorRep, n: usize) -> Result<FunctionalModel> {
    let report = classify_c_class(w, &default_probes(w), default_n_max(w))?;
    match report.verdict {
        CClass::C00 | CClass::C01 => {}
        CClass::Inconclusive => {
            return Err(OperError::Inconclusive {
                detail: "class inconclusive at the default probe depth; rerun with larger n_max"
                    .into(),
            })
        }
        other => {
            return Err(OperError::Precondition {
                detail: format!("functional model requires class C00 or C01, got {other:?}"),
            })
        }
    }

    let samples = delta_samples(w, n)?;
    let r = if samples.delta.is_empty() {
        0
    } else {
        samples.delta[0].nrows()
    };
    if r == 0 {
        return Ok(FunctionalModel {
            range: RangeFunction::trivial(n, 0),
            model_shift: OperatorRep::dense(CMatrix::zeros(0, 0)),
            fiber_dim: 0,
            class: report.verdict,
            model_dim: 0,
        });
    }

    let mut projections = Vec::with_capacity(n);
    let mut full_everywhere = true;
    let mut model_dim = 0usize;
    for delta in &samples.delta {
        let basis = subspace::range_basis_abs(delta, DEFECT_RANK_TOL)?;
        model_dim += basis.rank();
        if basis.rank() < r {
            full_everywhere = false;
        }
        projections.push(basis.projector());
    }
    let range = RangeFunction::new(projections)?;

    // Multiplication by chi acts on coefficient stacks as the cyclic block
    // shift c_k -> c_{k-1}, compressed by the model-space projector.
    let chi_shift = OperatorRep::CyclicShift {
        blocks: n,
        block_size: r,
        power: -1,
    };
    let model_shift = if full_everywhere {
        chi_shift
    } else if model_dim == 0 {
        OperatorRep::dense(CMatrix::zeros(n * r, n * r))
    } else {
        let p_hat = coefficient_space_projector(&range)?;
        let s = chi_shift.to_dense()?;
        OperatorRep::dense(&p_hat * s * &p_hat)
    };

    Ok(FunctionalModel {
        range,
        model_shift,
        fiber_dim: r,
        class: report.verdict,
        model_dim,
    })
}

/// Pointwise multiplication projector conjugated into coefficient space.
fn coefficient_space_projector(range: &RangeFunction) -> Result<CMatrix> {
    let n = range.n_points;
    let r = range.fiber_dim;
    let dim = n * r;
    let mut p = CMatrix::zeros(dim, dim);
    let mut e = CVector::zeros(dim);
    for col in 0..dim {
        e[col] = cr(1.0);
        let mut coeff_mat = CMatrix::zeros(n, r);
        for m in 0..n {
            for ch in 0..r {
                coeff_mat[(m, ch)] = e[m * r + ch];
            }
        }
        let synth = dft_columns(&coeff_mat, false);
        let mut sample_mat = CMatrix::zeros(n, r);
        for j in 0..n {
            let row: CVector = synth.row(j).transpose();
            let projected = &range.projections[j] * row;
            for ch in 0..r {
                sample_mat[(j, ch)] = projected[ch];
            }
        }
        let modes = dft_columns(&sample_mat, true).scale(1.0 / n as f64);
        for m in 0..n {
            for ch in 0..r {
                p[(m * r + ch, col)] = modes[(m, ch)];
            }
        }
        e[col] = cr(0.0);
    }
    Ok(p)
}

fn default_probes(w: &OperatorRep) -> Vec<Probe> {
    let dim = w.dim();
    match w {
        OperatorRep::TruncShiftBwd { .. } | OperatorRep::TruncShiftFwd { .. } => {
            // The truncation artifact of both shifts lives at the top
            // sample; a low-index probe with the distance-to-top margin
            // sees the infinite-model dynamics for n_max steps.
            let idx = (dim / 8).min(8);
            let mut p = Probe::basis_vector(dim, idx);
            p.boundary_margin = dim - 1 - idx;
            vec![p]
        }
        _ => (0..dim.min(3))
            .map(|i| Probe::basis_vector(dim, (i * dim / dim.min(3).max(1)).min(dim - 1)))
            .collect(),
    }
}

fn default_n_max(w: &OperatorRep) -> usize {
    match w {
        OperatorRep::TruncShiftBwd { dim } | OperatorRep::TruncShiftFwd { dim } => (dim / 2).max(1),
        _ => 96,
    }
}

/// Half-plane counterpart of the boundary data: Xi(x) = Theta((x-i)/(x+i))
/// and Upsilon(x) = (I - Xi*Xi)^{1/2} on a symmetric line grid; the model
/// evolution is multiplication by exp(i t x).
#[derive(Debug, Clone)]
pub struct HalfplaneModel {
    pub grid: Domain,
    pub xi: Vec<CMatrix>,
    pub upsilon: Vec<CMatrix>,
}

impl HalfplaneModel {
    /// Model evolution at time t: multiplication by exp(i t x_j) fiberwise.
    pub fn evolution(&self, t: f64) -> OperatorRep {
        let r = self.upsilon.first().map_or(1, |m| m.nrows().max(1));
        let n = self.grid.len();
        let symbols = (0..n)
            .map(|j| {
                let x = self.grid.line_point(j);
                CMatrix::identity(r, r).map(|z| z * c(0.0, t * x).exp())
            })
            .collect();
        OperatorRep::MulSymbol { symbols }
    }
}

/// Sample the half-plane model data for `w` on a symmetric line grid.
pub fn functional_model_halfplane(
    w: &OperatorRep,
    n: usize,
    half_width: f64,
) -> Result<HalfplaneModel> {
    let dd = defect(w)?;
    let h = 2.0 * half_width / n as f64;
    let grid = Domain::Line {
        n,
        h,
        x0: -half_width,
        weight: LineWeight::Dx,
    };
    let r = dd.basis_dw.rank();
    let id_r = CMatrix::identity(r, r);
    let mut xi = Vec::with_capacity(n);
    let mut upsilon = Vec::with_capacity(n);
    for j in 0..n {
        let x = grid.line_point(j);
        let omega = c(x, -1.0) / c(x, 1.0);
        let th = theta_with_defect(w, &dd, omega)?;
        let ups = hermitian_sqrt_clipped(&(&id_r - th.adjoint() * &th), 1.0);
        xi.push(th);
        upsilon.push(ups);
    }
    Ok(HalfplaneModel { grid, xi, upsilon })
}

/// Result of the disc-to-half-plane transform of a circle function.
#[derive(Debug, Clone)]
pub struct HalfplaneTransform {
    pub result: GridFunction,
    /// | ||f||_{dx/pi} - ||u||_{circle} | on the finite window.
    pub norm_defect: f64,
    /// Analytic bound for the mass of f beyond the window.
    pub tail_bound: f64,
}

/// Map a sampled circle function u to the line via
/// f(x) = u((x - i)/(x + i)) / (x + i), evaluating u by trigonometric
/// interpolation. The output carries the dx/pi weight; as the window
/// grows the two norms agree.
pub fn halfplane_transform(
    u: &GridFunction,
    n_line: usize,
    half_width: f64,
) -> Result<HalfplaneTransform> {
    if !matches!(u.domain, Domain::Circle { .. }) {
        return Err(OperError::InvalidInput {
            detail: "halfplane_transform expects a circle-sampled function".into(),
        });
    }
    let modes = fourier(u, FourierDirection::Forward)?;
    let h = 2.0 * half_width / n_line as f64;
    let domain = Domain::Line {
        n: n_line,
        h,
        x0: -half_width,
        weight: LineWeight::DxOverPi,
    };
    let d = u.channels();
    let mut samples = CMatrix::zeros(n_line, d);
    let mut sup_u_sq = 0.0f64;
    for j in 0..n_line {
        let x = domain.line_point(j);
        let omega = c(x, -1.0) / c(x, 1.0);
        let val = eval_modes_at(&modes.samples, omega);
        sup_u_sq = sup_u_sq.max(val.iter().map(|z| z.norm_sqr()).sum());
        let scale = cr(1.0) / c(x, 1.0);
        for ch in 0..d {
            samples[(j, ch)] = val[ch] * scale;
        }
    }
    let f = GridFunction {
        domain,
        samples,
        boundary_margin: 0,
    };
    let norm_defect = (f.norm() - u.norm()).abs();
    // |f(x)|^2 <= sup|u|^2 / (x^2 + 1); tail of the dx/pi integral.
    let tail_bound = sup_u_sq * 2.0 / PI * (PI / 2.0 - half_width.atan());
    Ok(HalfplaneTransform {
        result: f,
        norm_defect,
        tail_bound,
    })
}

/// Finite-step isometric dilation of a contraction.
#[derive(Debug, Clone)]
pub struct IsometricDilation {
    pub u_plus: OperatorRep,
    /// Basis of the original space inside the ambient space.
    pub embed: SubspaceBasis,
    pub steps: usize,
    pub ambient_dim: usize,
    pub defect_rank: usize,
    /// Blocks at the chain end contaminated by truncation or wrap glue.
    pub boundary_blocks: usize,
}

/// Block isometric dilation with `n_steps` defect-chain blocks:
/// U+ (h, d0, d1, ...) = (W h, D_W h, d0, ..., d_{steps-2}); the isometry
/// defect is confined to the final block. Unitary inputs dilate to
/// themselves. The truncated backward shift, whose infinite model is a
/// co-isometry with trivial W*-defect, dilates to the exact cyclic shift
/// on the extended window (the finite stand-in for the bilateral shift),
/// with the wrap seam recorded as the glue boundary.
pub fn schaffer_dilation(w: &OperatorRep, n_steps: usize) -> Result<IsometricDilation> {
    w.require_contraction(1e-12)?;
    if let OperatorRep::TruncShiftBwd { dim } = w {
        let m = dim + n_steps;
        // Layout: (d_{steps-1}, ..., d_0, h_0, ..., h_{dim-1}); the left
        // cyclic shift reproduces W on the embedded block for up to
        // n_steps applications.
        let u_plus = OperatorRep::CyclicShift {
            blocks: m,
            block_size: 1,
            power: 1,
        };
        let indices: Vec<usize> = (n_steps..m).collect();
        return Ok(IsometricDilation {
            u_plus,
            embed: SubspaceBasis::coordinate_span(m, &indices),
            steps: n_steps,
            ambient_dim: m,
            defect_rank: 1,
            boundary_blocks: 1,
        });
    }
    if let OperatorRep::TruncShiftFwd { dim } = w {
        // Already an isometry in the infinite model: dilation is itself.
        return Ok(IsometricDilation {
            u_plus: w.clone(),
            embed: SubspaceBasis::full(*dim),
            steps: n_steps,
            ambient_dim: *dim,
            defect_rank: 0,
            boundary_blocks: 1,
        });
    }

    let dd = defect(w)?;
    let r = dd.basis_dw.rank();
    let d = w.dim();
    if r == 0 {
        return Ok(IsometricDilation {
            u_plus: w.clone(),
            embed: SubspaceBasis::full(d),
            steps: n_steps,
            ambient_dim: d,
            defect_rank: 0,
            boundary_blocks: 0,
        });
    }
    let m = d + r * n_steps;
    let wd = w.to_dense()?;
    let mut u = CMatrix::zeros(m, m);
    for i in 0..d {
        for j in 0..d {
            u[(i, j)] = wd[(i, j)];
        }
    }
    // First chain block receives D_W h in defect coordinates.
    let dw_coords = dd.basis_dw.columns.adjoint() * &dd.d_w; // r x d
    for i in 0..r {
        for j in 0..d {
            u[(d + i, j)] = dw_coords[(i, j)];
        }
    }
    // Chain transport: block k feeds block k+1; the last block truncates.
    for k in 0..n_steps.saturating_sub(1) {
        for i in 0..r {
            u[(d + (k + 1) * r + i, d + k * r + i)] = cr(1.0);
        }
    }
    let indices: Vec<usize> = (0..d).collect();
    Ok(IsometricDilation {
        u_plus: OperatorRep::dense(u),
        embed: SubspaceBasis::coordinate_span(m, &indices),
        steps: n_steps,
        ambient_dim: m,
        defect_rank: r,
        boundary_blocks: 1,
    })
}

impl IsometricDilation {
    /// || P_H U+^n |_H - W^n || for n = 0..=n_max.
    pub fn compression_defects(&self, w: &OperatorRep, n_max: usize) -> Result<Vec<f64>> {
        let wd = w.to_dense()?;
        let d = wd.nrows();
        let e = &self.embed.columns; // ambient x d
        let mut defects = Vec::with_capacity(n_max + 1);
        let mut image = e.clone();
        let mut wn = CMatrix::identity(d, d);
        for _ in 0..=n_max {
            let compressed = e.adjoint() * &image;
            defects.push(linalg::operator_norm(&(&compressed - &wn)));
            let mut next = CMatrix::zeros(self.ambient_dim, d);
            for col in 0..d {
                let x: CVector = image.column(col).into_owned();
                next.set_column(col, &self.u_plus.apply(&x)?);
            }
            image = next;
            wn = &wd * wn;
        }
        Ok(defects)
    }
}

/// Residual part of an isometric dilation.
#[derive(Debug, Clone)]
pub struct ResidualPart {
    pub basis: SubspaceBasis,
    /// Compression of U+ to the residual basis.
    pub restriction: CMatrix,
}

/// Compute the residual subspace of a dilation.
///
/// Exactly unitary dilations (the cyclic stand-in for a bilateral shift,
/// or a unitary dense input) keep the full ambient space and restrict to
/// themselves. Otherwise the residual is the iterated intersection of the
/// images U+^n H for n <= n_probe, which kills both the pure-shift part
/// and the truncation tail.
pub fn residual_part(dil: &IsometricDilation, n_probe: usize) -> Result<ResidualPart> {
    if n_probe > dil.steps && dil.defect_rank > 0 {
        return Err(OperError::Precondition {
            detail: format!("n_probe {n_probe} exceeds dilation steps {}", dil.steps),
        });
    }
    if dil.u_plus.is_exactly_unitary(1e-10) {
        let basis = SubspaceBasis::full(dil.ambient_dim);
        let restriction = dil.u_plus.to_dense()?;
        return Ok(ResidualPart { basis, restriction });
    }
    let mut current = dil.embed.clone();
    let mut image = dil.embed.clone();
    for _ in 1..=n_probe {
        let mut cols = CMatrix::zeros(dil.ambient_dim, image.rank());
        for j in 0..image.rank() {
            let x: CVector = image.columns.column(j).into_owned();
            cols.set_column(j, &dil.u_plus.apply(&x)?);
        }
        image = orthonormalize_columns(&cols, 1e-10)?;
        current = subspace::intersect(&current, &image, 1e-10)?;
        if current.rank() == 0 {
            break;
        }
    }
    let restriction = if current.rank() == 0 {
        CMatrix::zeros(0, 0)
    } else {
        let u_dense = dil.u_plus.to_dense()?;
        current.columns.adjoint() * &u_dense * &current.columns
    };
    Ok(ResidualPart {
        basis: current,
        restriction,
    })
}

/// The quasi-affinity X = (P_R |_H)^* with its intertwining diagnostics.
#[derive(Debug, Clone)]
pub struct QuasiAffinityReport {
    /// d x r matrix mapping residual coordinates into the original space.
    pub x: CMatrix,
    /// ||W X v - X R v|| per probe (probes live in residual coordinates).
    pub intertwining_residuals: Vec<f64>,
    pub smallest_singular_value: f64,
    pub rank: usize,
    /// Set when the residual is trivial: X degenerates to 0, the signature
    /// of a dynamics with no surviving unitary part.
    pub degenerate: bool,
}

/// Build X and check the intertwining W X = X R on the supplied probes.
pub fn quasi_affinity_x(
    dil: &IsometricDilation,
    residual: &ResidualPart,
    w: &OperatorRep,
    probes: &[Probe],
) -> Result<QuasiAffinityReport> {
    let d = dil.embed.rank();
    let r = residual.basis.rank();
    if r == 0 {
        return Ok(QuasiAffinityReport {
            x: CMatrix::zeros(d, 0),
            intertwining_residuals: probes.iter().map(|_| 0.0).collect(),
            smallest_singular_value: 0.0,
            rank: 0,
            degenerate: true,
        });
    }
    // (P_R |_H): H -> R has matrix B^H E; its adjoint is X = E^H B.
    let x = dil.embed.columns.adjoint() * &residual.basis.columns; // d x r
    let mut residuals = Vec::with_capacity(probes.len());
    for p in probes {
        if p.data.len() != r {
            return Err(OperError::DimensionMismatch {
                expected: r,
                got: p.data.len(),
            });
        }
        let xv = &x * &p.data;
        let wxv = w.apply(&xv)?;
        let rv = &residual.restriction * &p.data;
        let xrv = &x * rv;
        residuals.push((wxv - xrv).norm());
    }
    let sv = x.clone().svd(false, false).singular_values;
    let smax = sv.iter().copied().fold(0.0, f64::max);
    let smin = sv.iter().copied().fold(f64::INFINITY, f64::min);
    let rank = sv.iter().filter(|&&s| s > 1e-10 * smax.max(1.0)).count();
    Ok(QuasiAffinityReport {
        x,
        intertwining_residuals: residuals,
        smallest_singular_value: if smin.is_finite() { smin } else { 0.0 },
        rank,
        degenerate: smax < 1e-12,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opcore::linalg::{operator_norm, random_contraction, unitary_defect};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha12Rng;

    fn scalar_op(z: C64) -> OperatorRep {
        OperatorRep::dense(CMatrix::from_element(1, 1, z))
    }

    #[test]
    fn defect_of_zero_operator_is_identity() {
        let w = OperatorRep::dense(CMatrix::zeros(2, 2));
        let dd = defect(&w).unwrap();
        assert!(max_abs(&(&dd.d_w - CMatrix::identity(2, 2))) < 1e-12);
        assert!(max_abs(&(&dd.d_w_star - CMatrix::identity(2, 2))) < 1e-12);
        assert_eq!(dd.defect_dims(), (2, 2));
    }

    #[test]
    fn defect_of_scalar_half() {
        let dd = defect(&scalar_op(cr(0.5))).unwrap();
        assert!((dd.d_w[(0, 0)].re - (3.0f64).sqrt() / 2.0).abs() < 1e-12);
    }

    #[test]
    fn defect_of_backward_shift_uses_infinite_model() {
        let dd = defect(&OperatorRep::TruncShiftBwd { dim: 16 }).unwrap();
        assert_eq!(dd.defect_dims(), (1, 0));
        assert!(dd.truncation_artifact_suppressed);
        assert!((dd.d_w[(0, 0)].re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn defect_rejects_expansions() {
        let w = OperatorRep::dense(CMatrix::identity(2, 2).scale(1.5));
        assert!(matches!(defect(&w), Err(OperError::NotAContraction { .. })));
    }

    #[test]
    fn dense_defect_ranks_agree() {
        let mut rng = ChaCha12Rng::seed_from_u64(3);
        let w = random_contraction(&mut rng, 5, 0.9);
        let dd = defect(&OperatorRep::dense(w)).unwrap();
        let (a, b) = dd.defect_dims();
        assert_eq!(a, b);
    }

    #[test]
    fn theta_of_zero_scalar_is_lambda() {
        let th = theta(&scalar_op(cr(0.0)), c(0.3, 0.0)).unwrap();
        assert_eq!(th.nrows(), 1);
        assert!((th[(0, 0)] - cr(0.3)).norm() < 1e-12);
    }

    #[test]
    fn theta_matches_moebius_form_for_scalars() {
        for &cc in &[cr(0.5), c(0.3, 0.4)] {
            let w = scalar_op(cc);
            for k in 0..64 {
                let angle = 2.0 * PI * k as f64 / 64.0;
                let lam = c(angle.cos(), angle.sin()) * cr(0.09 + 0.9 * (k as f64) / 64.0);
                let got = theta(&w, lam).unwrap()[(0, 0)];
                let want = (lam - cc) / (cr(1.0) - cc.conj() * lam);
                assert!((got - want).norm() < 1e-10, "lambda={lam}");
            }
            for k in 0..64 {
                let angle = 2.0 * PI * k as f64 / 64.0;
                let omega = c(angle.cos(), angle.sin());
                let got = theta(&w, omega).unwrap()[(0, 0)];
                let want = (omega - cc) / (cr(1.0) - cc.conj() * omega);
                assert!((got - want).norm() < 1e-10);
                assert!((got.norm() - 1.0).abs() < 1e-10, "boundary modulus");
            }
        }
    }

    #[test]
    fn theta_at_origin_is_minus_w() {
        let th = theta(&scalar_op(cr(0.5)), cr(0.0)).unwrap();
        assert!((th[(0, 0)] + cr(0.5)).norm() < 1e-12);
    }

    #[test]
    fn theta_contractive_on_disc_random_contractions() {
        let mut rng = ChaCha12Rng::seed_from_u64(8);
        for _ in 0..4 {
            let w = OperatorRep::dense(random_contraction(&mut rng, 5, 0.9));
            let dd = defect(&w).unwrap();
            for _ in 0..50 {
                let lam = c(
                    rng.random_range(-0.99..0.99),
                    rng.random_range(-0.99..0.99),
                );
                if lam.norm() >= 1.0 {
                    continue;
                }
                let th = theta_with_defect(&w, &dd, lam).unwrap();
                assert!(operator_norm(&th) <= 1.0 + 1e-10);
            }
        }
    }

    #[test]
    fn boundary_unitarity_for_dense_cnu_contractions() {
        let mut rng = ChaCha12Rng::seed_from_u64(13);
        let w = OperatorRep::dense(random_contraction(&mut rng, 4, 0.8));
        let samples = delta_samples(&w, 32).unwrap();
        for th in &samples.theta {
            assert!(unitary_defect(th) < 1e-8);
        }
        assert!(samples.max_delta_norm() < 1e-7);
    }

    #[test]
    fn pythagoras_identity_at_every_grid_point() {
        let mut rng = ChaCha12Rng::seed_from_u64(19);
        let w = OperatorRep::dense(random_contraction(&mut rng, 4, 0.95));
        let samples = delta_samples(&w, 24).unwrap();
        for p in &samples.pythagoras_defect {
            assert!(*p < 1e-9);
        }
    }

    #[test]
    fn delta_of_backward_shift_is_identity_fiber() {
        let samples = delta_samples(&OperatorRep::TruncShiftBwd { dim: 64 }, 64).unwrap();
        for (th, dl) in samples.theta.iter().zip(&samples.delta) {
            assert_eq!(th.nrows(), 0);
            assert_eq!(th.ncols(), 1);
            assert!((dl[(0, 0)].re - 1.0).abs() < 1e-12);
        }
        for d in &samples.idempotency_defect {
            assert!(*d < 1e-12);
        }
        assert_eq!(samples.delta_ranks(), vec![1; 64]);
    }

    #[test]
    fn functional_model_of_backward_shift_is_exact_cyclic_shift() {
        let w = OperatorRep::TruncShiftBwd { dim: 64 };
        let model = functional_model_circle(&w, 64).unwrap();
        assert_eq!(model.class, CClass::C01);
        assert_eq!(model.fiber_dim, 1);
        assert_eq!(model.model_dim, 64);
        assert!(matches!(
            model.model_shift,
            OperatorRep::CyclicShift {
                blocks: 64,
                block_size: 1,
                power: -1
            }
        ));
        assert!(model.unitarity_defect().unwrap() < 1e-12);
        assert_eq!(model.range.ranks(), vec![1; 64]);
    }

    #[test]
    fn functional_model_of_strict_scalar_contractions_is_trivial() {
        for &z in &[cr(0.5), cr(0.0)] {
            let model = functional_model_circle(&scalar_op(z), 16).unwrap();
            assert_eq!(model.class, CClass::C00);
            assert_eq!(model.model_dim, 0);
        }
    }

    #[test]
    fn halfplane_constant_symbol() {
        let u = GridFunction::circle_from_fn(64, |_| cr(2.0));
        let ht = halfplane_transform(&u, 512, 40.0).unwrap();
        let x = ht.result.domain.line_point(100);
        let want = cr(2.0) / c(x, 1.0);
        assert!((ht.result.samples[(100, 0)] - want).norm() < 1e-10);
        // x = 0 maps to omega = -1; u(-1) = 2, so f(0) = 2/i = -2i.
        let j0 = 256;
        assert!(ht.result.domain.line_point(j0).abs() < 1e-9);
        assert!((ht.result.samples[(j0, 0)] - c(0.0, -2.0)).norm() < 1e-9);
    }

    #[test]
    fn halfplane_norm_defect_halves_with_window() {
        // Degree-8 trigonometric polynomial; the tail of f is controlled
        // by |u| near omega = 1 (the image of |x| -> infinity), so the
        // alternating signs keep the window truncation mild.
        let u = GridFunction::circle_from_fn(128, |w| {
            let mut acc = cr(0.0);
            let mut p = cr(1.0);
            for k in 0..=8 {
                acc += p * cr(if k % 2 == 0 { 1.0 } else { -1.0 } / (1.0 + k as f64));
                p *= w;
            }
            acc
        });
        let e100 = halfplane_transform(&u, 4096, 100.0).unwrap();
        let e200 = halfplane_transform(&u, 8192, 200.0).unwrap();
        assert!(e100.norm_defect < 1e-2, "defect {}", e100.norm_defect);
        assert!(e200.norm_defect < 0.62 * e100.norm_defect);
        assert!(e100.tail_bound > 0.0);
    }

    #[test]
    fn halfplane_intertwines_e_t_with_phase_multiplication() {
        // e_t on the boundary pulls back to exp(i t x) under the Cayley map.
        let t = 0.7;
        let u = GridFunction::circle_from_fn(128, |w| w + cr(0.25) * w * w);
        let et_u = GridFunction::circle_from_fn(128, |w| {
            let e_t = ((w + cr(1.0)) / (w - cr(1.0)) * cr(t)).exp();
            e_t * (w + cr(0.25) * w * w)
        });
        let f = halfplane_transform(&u, 1024, 30.0).unwrap();
        let g = halfplane_transform(&et_u, 1024, 30.0).unwrap();
        let n = 1024;
        let mut worst = 0.0f64;
        for j in (n / 8)..(7 * n / 8) {
            let x = f.result.domain.line_point(j);
            let want = c(0.0, t * x).exp() * f.result.samples[(j, 0)];
            worst = worst.max((g.result.samples[(j, 0)] - want).norm());
        }
        assert!(worst < 1e-6, "worst deviation {worst}");
    }

    #[test]
    fn schaffer_dilation_of_zero_scalar_is_truncated_forward_shift() {
        let dil = schaffer_dilation(&scalar_op(cr(0.0)), 2).unwrap();
        assert_eq!(dil.ambient_dim, 3);
        let u = dil.u_plus.to_dense().unwrap();
        let expected = OperatorRep::TruncShiftFwd { dim: 3 }.to_dense().unwrap();
        assert!(max_abs(&(u.clone() - expected)) < 1e-14);
        let g = u.adjoint() * &u;
        assert!((g[(0, 0)].re - 1.0).abs() < 1e-14);
        assert!(g[(2, 2)].norm() < 1e-14);
    }

    #[test]
    fn dilation_compression_reproduces_powers() {
        let mut rng = ChaCha12Rng::seed_from_u64(31);
        let w = OperatorRep::dense(random_contraction(&mut rng, 4, 0.97));
        let dil = schaffer_dilation(&w, 12).unwrap();
        let defects = dil.compression_defects(&w, 12).unwrap();
        for (n, d) in defects.iter().enumerate() {
            assert!(*d < 1e-10, "n={n}: defect {d}");
        }
        // n = 0 compression is the identity.
        assert!(defects[0] < 1e-14);
    }

    #[test]
    fn dilation_of_unitary_is_itself() {
        let mut rng = ChaCha12Rng::seed_from_u64(37);
        let u = linalg::random_unitary(&mut rng, 5);
        let dil = schaffer_dilation(&OperatorRep::dense(u.clone()), 8).unwrap();
        assert_eq!(dil.ambient_dim, 5);
        assert_eq!(dil.defect_rank, 0);
        assert!(max_abs(&(dil.u_plus.to_dense().unwrap() - u)) < 1e-12);
    }

    #[test]
    fn residual_of_c00_scalar_is_trivial() {
        let dil = schaffer_dilation(&scalar_op(cr(0.5)), 16).unwrap();
        let res = residual_part(&dil, 12).unwrap();
        assert_eq!(res.basis.rank(), 0);
    }

    #[test]
    fn residual_of_unitary_is_full_space() {
        let mut rng = ChaCha12Rng::seed_from_u64(41);
        let u = linalg::random_unitary(&mut rng, 4);
        let w = OperatorRep::dense(u.clone());
        let dil = schaffer_dilation(&w, 8).unwrap();
        let res = residual_part(&dil, 8).unwrap();
        assert_eq!(res.basis.rank(), 4);
        assert!(max_abs(&(&res.restriction - &u)) < 1e-10);
    }

    #[test]
    fn residual_of_backward_shift_matches_bilateral_model() {
        let n = 64;
        let steps = 64;
        let w = OperatorRep::TruncShiftBwd { dim: n };
        let dil = schaffer_dilation(&w, steps).unwrap();
        let res = residual_part(&dil, 16).unwrap();
        assert_eq!(res.basis.rank(), n + steps);
        let phases = linalg::eigenphases(&res.restriction).unwrap();
        let model = functional_model_circle(&w, n + steps).unwrap();
        let model_phases = linalg::eigenphases(&model.model_shift.to_dense().unwrap()).unwrap();
        for (a, b) in phases.iter().zip(&model_phases) {
            assert!((a - b).abs() < 1e-8);
        }
    }

    #[test]
    fn quasi_affinity_degenerates_for_c00_scalar() {
        let w = scalar_op(cr(0.0));
        let dil = schaffer_dilation(&w, 8).unwrap();
        let res = residual_part(&dil, 6).unwrap();
        let report = quasi_affinity_x(&dil, &res, &w, &[]).unwrap();
        assert!(report.degenerate);
        assert_eq!(report.rank, 0);
    }

    #[test]
    fn quasi_affinity_is_identity_for_unitary() {
        let mut rng = ChaCha12Rng::seed_from_u64(43);
        let u = linalg::random_unitary(&mut rng, 4);
        let w = OperatorRep::dense(u);
        let dil = schaffer_dilation(&w, 6).unwrap();
        let res = residual_part(&dil, 6).unwrap();
        let probes: Vec<Probe> = (0..4).map(|i| Probe::basis_vector(4, i)).collect();
        let report = quasi_affinity_x(&dil, &res, &w, &probes).unwrap();
        assert!(!report.degenerate);
        assert!((report.smallest_singular_value - 1.0).abs() < 1e-10);
        for r in &report.intertwining_residuals {
            assert!(*r < 1e-10);
        }
    }

    #[test]
    fn quasi_affinity_intertwines_backward_shift_with_margin_probes() {
        let n = 64;
        let steps = 64;
        let w = OperatorRep::TruncShiftBwd { dim: n };
        let dil = schaffer_dilation(&w, steps).unwrap();
        let res = residual_part(&dil, 8).unwrap();
        let m = n + steps;
        // probes supported away from the wrap seam by margin at least 8
        let probes: Vec<Probe> = (0..6)
            .map(|k| {
                let mut v = CVector::zeros(m);
                v[16 + 10 * k] = cr(1.0);
                v[17 + 10 * k] = cr(0.5);
                Probe::new(v.scale(1.0 / 1.25f64.sqrt()), 8)
            })
            .collect();
        let report = quasi_affinity_x(&dil, &res, &w, &probes).unwrap();
        for r in &report.intertwining_residuals {
            assert!(*r <= 1e-8, "residual {r}");
        }
        assert!(!report.degenerate);
    }
}
