//! Invariant subspaces of vector-valued functions on the circle, in the
//! truncated Fourier-window model.
//!
//! A subspace is carried by an orthonormal basis in coefficient
//! coordinates on the window k in [-M, M] (fiber dimension d, so the
//! ambient dimension is d(2M+1)). Exact simply invariant subspaces cannot
//! exist in a finite cyclic model, so the window keeps an explicit margin:
//! the guaranteed headroom between the content and the window edges.
//! Every multiplication by the circle variable consumes one unit of
//! margin and fails loudly at zero.
//!
//! Doubly invariant content is handled through the aliased picture on the
//! natural 2M+1-point grid, where multiplication by the variable is an
//! exact cyclic permutation of coefficient slots: Wiener-type subspaces
//! (pointwise sample conditions) are exactly invariant there, while
//! analytic window content is not (the wrap is detected and rejected).
//! Classification and the Halmos-Helson splitting combine both pictures.

use crate::error::{OperError, Result};
use crate::opcore::linalg::{c, cr, max_abs, CMatrix, CVector, C64};
use crate::opcore::range::RangeFunction;
use crate::opcore::subspace::{
    self, complement_within, orthonormalize_columns, SubspaceBasis,
};
use serde::Serialize;
use std::f64::consts::PI;

/// Containment tolerance for invariance decisions.
const INVARIANCE_TOL: f64 = 1e-8;

/// Absolute cutoff for pointwise fiber-rank decisions (sample values of
/// unit basis vectors are O(1), exact zeros are rounding-level).
const POINTWISE_RANK_TOL: f64 = 1e-6;

/// A subspace of the coefficient window [-M, M] with fiber dimension d.
#[derive(Debug, Clone)]
pub struct FourierWindowSubspace {
    pub fiber_dim: usize,
    /// Window half-width M; coefficient slots are k = -M ..= M.
    pub half_width: usize,
    /// Orthonormal basis in coefficient coordinates, slot-major:
    /// index (k + M) * d + channel.
    pub basis: SubspaceBasis,
    /// Remaining shift budget before content reaches a window edge.
    pub margin: usize,
}

impl FourierWindowSubspace {
    pub fn slots(&self) -> usize {
        2 * self.half_width + 1
    }

    pub fn ambient_dim(&self) -> usize {
        self.slots() * self.fiber_dim
    }

    pub fn rank(&self) -> usize {
        self.basis.rank()
    }

    /// Coefficient slot of signed mode k.
    pub fn slot(&self, k: i64) -> usize {
        (k + self.half_width as i64) as usize
    }

    pub fn new(
        fiber_dim: usize,
        half_width: usize,
        basis: SubspaceBasis,
        margin: usize,
    ) -> Result<Self> {
        if margin >= half_width.max(1) {
            return Err(OperError::InvalidInput {
                detail: format!("margin {margin} must be smaller than the half-width {half_width}"),
            });
        }
        let expect = (2 * half_width + 1) * fiber_dim;
        if basis.rank() > 0 && basis.dim() != expect {
            return Err(OperError::DimensionMismatch {
                expected: expect,
                got: basis.dim(),
            });
        }
        Ok(Self {
            fiber_dim,
            half_width,
            basis,
            margin,
        })
    }

    /// Span of monomials chi^k tensor e_{channel}; the margin is the
    /// computed headroom between the content and the window edges.
    pub fn from_monomials(
        fiber_dim: usize,
        half_width: usize,
        monomials: &[(i64, usize)],
    ) -> Result<Self> {
        let slots = 2 * half_width + 1;
        let dim = slots * fiber_dim;
        let mut cols = Vec::with_capacity(monomials.len());
        let m = half_width as i64;
        let mut top_headroom = half_width as i64;
        let mut bottom_headroom = half_width as i64;
        for &(k, ch) in monomials {
            if k < -m || k > m || ch >= fiber_dim {
                return Err(OperError::InvalidInput {
                    detail: format!("monomial ({k}, {ch}) outside the window or fiber"),
                });
            }
            top_headroom = top_headroom.min(m - k);
            bottom_headroom = bottom_headroom.min(k + m);
            let mut v = CVector::zeros(dim);
            v[((k + m) as usize) * fiber_dim + ch] = cr(1.0);
            cols.push(v);
        }
        let margin = top_headroom.min(bottom_headroom).max(0) as usize;
        let basis = subspace::orthonormalize(&cols, 1e-12)?;
        Self::new(
            fiber_dim,
            half_width,
            basis,
            margin.min(half_width.saturating_sub(1)),
        )
    }

    /// The Hardy window: monomials 0 ..= M - margin on every fiber channel.
    pub fn hardy_window(fiber_dim: usize, half_width: usize, margin: usize) -> Result<Self> {
        let top = half_width.saturating_sub(margin) as i64;
        let mut monomials = Vec::new();
        for k in 0..=top {
            for ch in 0..fiber_dim {
                monomials.push((k, ch));
            }
        }
        let mut s = Self::from_monomials(fiber_dim, half_width, &monomials)?;
        s.margin = margin;
        Ok(s)
    }

    /// Span of arbitrary coefficient columns with a declared margin.
    pub fn from_columns(
        fiber_dim: usize,
        half_width: usize,
        columns: &[CVector],
        margin: usize,
    ) -> Result<Self> {
        let basis = subspace::orthonormalize(columns, 1e-10)?;
        Self::new(fiber_dim, half_width, basis, margin)
    }

    /// Evaluate the basis columns at the j-th point of the natural
    /// (2M+1)-point grid; returns a d x rank matrix of sample values.
    pub fn sample_values(&self, j: usize) -> CMatrix {
        let n = self.slots();
        let theta = 2.0 * PI * j as f64 / n as f64;
        let omega = c(theta.cos(), theta.sin());
        let m = self.half_width as i64;
        let mut out = CMatrix::zeros(self.fiber_dim, self.rank());
        for col in 0..self.rank() {
            for k in -m..=m {
                let w = omega.powi(k as i32);
                let s = self.slot(k);
                for ch in 0..self.fiber_dim {
                    out[(ch, col)] += self.basis.columns[(s * self.fiber_dim + ch, col)] * w;
                }
            }
        }
        out
    }

    /// Pointwise range function of the span on the natural grid.
    pub fn pointwise_range(&self) -> Result<RangeFunction> {
        let n = self.slots();
        let mut projections = Vec::with_capacity(n);
        for j in 0..n {
            let vals = self.sample_values(j);
            let basis = subspace::range_basis_abs(&vals, POINTWISE_RANK_TOL)?;
            projections.push(basis.projector());
        }
        RangeFunction::new(projections)
    }
}

/// Window (truncating) shift of raw coefficient columns by `power`.
fn window_shift_columns(cols: &CMatrix, fiber_dim: usize, slots: usize, power: i64) -> CMatrix {
    let mut out = CMatrix::zeros(cols.nrows(), cols.ncols());
    for col in 0..cols.ncols() {
        for s in 0..slots {
            let src = s as i64 - power;
            if src < 0 || src >= slots as i64 {
                continue;
            }
            for ch in 0..fiber_dim {
                out[(s * fiber_dim + ch, col)] = cols[(src as usize * fiber_dim + ch, col)];
            }
        }
    }
    out
}

/// Aliased (cyclic) shift of raw coefficient columns: the exact action of
/// multiplication by the circle variable on the natural (2M+1)-point grid.
fn aliased_shift_columns(cols: &CMatrix, fiber_dim: usize, slots: usize, power: i64) -> CMatrix {
    let mut out = CMatrix::zeros(cols.nrows(), cols.ncols());
    let n = slots as i64;
    for col in 0..cols.ncols() {
        for s in 0..slots {
            let src = ((s as i64 - power).rem_euclid(n)) as usize;
            for ch in 0..fiber_dim {
                out[(s * fiber_dim + ch, col)] = cols[(src * fiber_dim + ch, col)];
            }
        }
    }
    out
}

/// Multiply the subspace by chi^{power} (power = +1 or -1) in the window
/// model: coefficients shift, content pushed past an edge is truncated,
/// and one unit of margin is consumed.
pub fn shift_action(s: &FourierWindowSubspace, power: i64) -> Result<FourierWindowSubspace> {
    if power != 1 && power != -1 {
        return Err(OperError::InvalidInput {
            detail: format!("shift_action expects power +1 or -1, got {power}"),
        });
    }
    if s.margin == 0 {
        return Err(OperError::MarginExhausted {
            detail: "window margin exhausted; rebuild the subspace on a larger window".into(),
        });
    }
    let shifted = window_shift_columns(&s.basis.columns, s.fiber_dim, s.slots(), power);
    let basis = orthonormalize_columns(&shifted, 1e-10)?;
    Ok(FourierWindowSubspace {
        fiber_dim: s.fiber_dim,
        half_width: s.half_width,
        basis,
        margin: s.margin - 1,
    })
}

/// Invariance classification of a window subspace.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Invariance {
    Doubly,
    Simply,
    NotInvariant,
}

/// Classification result; the range function is present for the doubly
/// invariant case (the Wiener-Srinivasan parametrization).
#[derive(Debug, Clone)]
pub struct InvarianceReport {
    pub kind: Invariance,
    pub range: Option<RangeFunction>,
    /// Worst containment residual over the basis columns for the forward
    /// (chi) direction and the backward (chi^{-1}) direction.
    pub forward_residual: f64,
    pub backward_residual: f64,
}

fn containment_residual_of_image(s: &FourierWindowSubspace, image: &CMatrix) -> f64 {
    let mut worst = 0.0f64;
    for col in 0..image.ncols() {
        let v: CVector = image.column(col).into_owned();
        let proj = &s.basis.columns * (s.basis.columns.adjoint() * &v);
        worst = worst.max((v - proj).norm());
    }
    worst
}

/// Containment defect of one forward image with the top margin band
/// excused: content that a chi-action pushes into the last `margin` slots
/// is exactly what the finite window cannot decide, so it does not count
/// against invariance.
fn excused_window_defect(s: &FourierWindowSubspace, image: &CVector) -> f64 {
    let p = &s.basis.columns;
    let mut delta = image - p * (p.adjoint() * image);
    let slots = s.slots();
    let band_start = slots.saturating_sub(s.margin);
    for slot in band_start..slots {
        for ch in 0..s.fiber_dim {
            delta[slot * s.fiber_dim + ch] = cr(0.0);
        }
    }
    delta.norm()
}

/// Per-column hybrid image of multiplication by chi^{power}: the aliased
/// image when it is certified inside the span (the exact doubly-invariant
/// mechanism), otherwise the truncating window image.
fn hybrid_images(s: &FourierWindowSubspace, power: i64) -> CMatrix {
    let aliased = aliased_shift_columns(&s.basis.columns, s.fiber_dim, s.slots(), power);
    let windowed = window_shift_columns(&s.basis.columns, s.fiber_dim, s.slots(), power);
    let p = &s.basis.columns;
    let mut out = CMatrix::zeros(aliased.nrows(), aliased.ncols());
    for col in 0..aliased.ncols() {
        let a: CVector = aliased.column(col).into_owned();
        let defect = (&a - p * (p.adjoint() * &a)).norm();
        if defect <= INVARIANCE_TOL {
            out.set_column(col, &a);
        } else {
            out.set_column(col, &windowed.column(col).into_owned());
        }
    }
    out
}

/// Decide whether the subspace is doubly invariant, simply invariant, or
/// not invariant.
///
/// Doubly invariance is checked in the aliased picture, where the action
/// is exactly unitary; the range function is then the pointwise span of
/// the sample values. Simple invariance is forward containment of the
/// hybrid images (window truncation at the analytic edge, aliased
/// wraparound for pointwise content) without backward containment.
pub fn classify_invariance(s: &FourierWindowSubspace) -> Result<InvarianceReport> {
    if s.margin == 0 {
        return Err(OperError::MarginExhausted {
            detail: "classification needs at least one unit of margin".into(),
        });
    }
    let fwd_aliased = aliased_shift_columns(&s.basis.columns, s.fiber_dim, s.slots(), 1);
    let bwd_aliased = aliased_shift_columns(&s.basis.columns, s.fiber_dim, s.slots(), -1);
    let fwd_res_aliased = containment_residual_of_image(s, &fwd_aliased);
    let bwd_res_aliased = containment_residual_of_image(s, &bwd_aliased);
    if fwd_res_aliased <= INVARIANCE_TOL && bwd_res_aliased <= INVARIANCE_TOL {
        return Ok(InvarianceReport {
            kind: Invariance::Doubly,
            range: Some(s.pointwise_range()?),
            forward_residual: fwd_res_aliased,
            backward_residual: bwd_res_aliased,
        });
    }
    // Forward invariance per column: either the aliased image is inside
    // the span (pointwise content) or the truncating window image is,
    // with the top margin band excused (analytic content).
    let fwd_window = window_shift_columns(&s.basis.columns, s.fiber_dim, s.slots(), 1);
    let mut fwd_res = 0.0f64;
    for col in 0..s.rank() {
        let a: CVector = fwd_aliased.column(col).into_owned();
        let pa = &s.basis.columns * (s.basis.columns.adjoint() * &a);
        let aliased_defect = (&a - pa).norm();
        let w: CVector = fwd_window.column(col).into_owned();
        let windowed_defect = excused_window_defect(s, &w);
        fwd_res = fwd_res.max(aliased_defect.min(windowed_defect));
    }
    if fwd_res <= INVARIANCE_TOL {
        return Ok(InvarianceReport {
            kind: Invariance::Simply,
            range: None,
            forward_residual: fwd_res,
            backward_residual: bwd_res_aliased,
        });
    }
    Ok(InvarianceReport {
        kind: Invariance::NotInvariant,
        range: None,
        forward_residual: fwd_res,
        backward_residual: bwd_res_aliased,
    })
}

/// Innovation subspace I_0 = M minus chi M.
#[derive(Debug, Clone)]
pub struct InnovationBasis {
    pub basis: SubspaceBasis,
    /// Set when the innovation is trivial, the signature of a doubly
    /// invariant input.
    pub doubly_invariant: bool,
}

/// Orthonormal basis of the first innovation subspace. The dimension is
/// the multiplicity of the shift part of the input.
pub fn innovation_basis(s: &FourierWindowSubspace) -> Result<InnovationBasis> {
    if s.margin == 0 {
        return Err(OperError::MarginExhausted {
            detail: "innovation needs one unit of margin for the chi action".into(),
        });
    }
    let images = hybrid_images(s, 1);
    let chi_m = orthonormalize_columns(&images, 1e-10)?;
    let inno = complement_within(&s.basis, &chi_m, 1e-6)?;
    Ok(InnovationBasis {
        doubly_invariant: inno.rank() == 0,
        basis: inno,
    })
}

/// Operator-valued function whose values are partial isometries with a
/// common initial space.
#[derive(Debug, Clone)]
pub struct RigidFunction {
    pub n_points: usize,
    /// d x d values; the first `rank` columns carry the isometry.
    pub values: Vec<CMatrix>,
    pub initial_projection: CMatrix,
    pub rank: usize,
}

impl RigidFunction {
    /// Worst pointwise deviation of value^H value from the initial
    /// projection: the partial-isometry law.
    pub fn partial_isometry_defect(&self) -> f64 {
        self.values
            .iter()
            .map(|v| max_abs(&(v.adjoint() * v - &self.initial_projection)))
            .fold(0.0, f64::max)
    }

    /// Pointwise range function of the values.
    pub fn range(&self) -> Result<RangeFunction> {
        let mut projections = Vec::with_capacity(self.n_points);
        for v in &self.values {
            let b = subspace::range_basis_abs(v, POINTWISE_RANK_TOL)?;
            projections.push(b.projector());
        }
        RangeFunction::new(projections)
    }
}

/// Build the rigid function whose columns are the sample values of an
/// innovation basis on the natural grid of the window.
pub fn rigid_from_innovation(
    i0: &SubspaceBasis,
    window: &FourierWindowSubspace,
) -> Result<RigidFunction> {
    let r = i0.rank();
    if r == 0 {
        return Err(OperError::InvalidInput {
            detail: "rigid function needs a nonempty innovation basis".into(),
        });
    }
    let d = window.fiber_dim;
    if r > d {
        return Err(OperError::InvalidInput {
            detail: format!("innovation multiplicity {r} exceeds the fiber dimension {d}"),
        });
    }
    let carrier = FourierWindowSubspace {
        fiber_dim: d,
        half_width: window.half_width,
        basis: i0.clone(),
        margin: window.margin,
    };
    let n = window.slots();
    let mut initial = CMatrix::zeros(d, d);
    for i in 0..r {
        initial[(i, i)] = cr(1.0);
    }
    let mut values = Vec::with_capacity(n);
    for j in 0..n {
        let vals = carrier.sample_values(j); // d x r
        let sv = vals.clone().svd(false, false).singular_values;
        let smin = sv.iter().copied().fold(f64::INFINITY, f64::min);
        if smin < 0.5 {
            return Err(OperError::InvalidInput {
                detail: format!(
                    "pointwise rank collapse at grid point {j}: smallest singular value {smin:.3e}"
                ),
            });
        }
        let mut v = CMatrix::zeros(d, d);
        for col in 0..r {
            for row in 0..d {
                v[(row, col)] = vals[(row, col)];
            }
        }
        values.push(v);
    }
    Ok(RigidFunction {
        n_points: n,
        values,
        initial_projection: initial,
        rank: r,
    })
}

/// Worst inner product between distinct rungs chi^a I_0 and chi^b I_0 of
/// the innovation ladder up to the given depth.
pub fn innovation_ladder_orthogonality(
    i0: &SubspaceBasis,
    window: &FourierWindowSubspace,
    depth: usize,
) -> Result<f64> {
    let d = window.fiber_dim;
    let slots = window.slots();
    let mut shifted: Vec<CMatrix> = vec![i0.columns.clone()];
    for n in 1..=depth {
        shifted.push(window_shift_columns(&shifted[n - 1], d, slots, 1));
    }
    let mut worst = 0.0f64;
    for a in 0..shifted.len() {
        for b in (a + 1)..shifted.len() {
            let g = shifted[a].adjoint() * &shifted[b];
            worst = worst.max(max_abs(&g));
        }
    }
    Ok(worst)
}

/// Scalar inner-function recovery.
#[derive(Debug, Clone)]
pub struct InnerFunction {
    /// Samples on the natural grid, normalized so the first sample is
    /// positive real (the constant-factor convention).
    pub samples: Vec<C64>,
    /// max_j | |q(w_j)| - 1 |.
    pub modulus_deviation: f64,
}

/// Recover the Beurling inner generator of a scalar simply invariant
/// window subspace: the single innovation generator evaluated on the
/// grid, determined up to one unimodular constant.
pub fn beurling_inner(s: &FourierWindowSubspace) -> Result<InnerFunction> {
    if s.fiber_dim != 1 {
        return Err(OperError::InvalidInput {
            detail: "beurling_inner expects a scalar (fiber dimension 1) subspace".into(),
        });
    }
    let inno = innovation_basis(s)?;
    if inno.basis.rank() != 1 {
        return Err(OperError::InvalidInput {
            detail: format!(
                "inner recovery needs a one-dimensional innovation, got rank {}",
                inno.basis.rank()
            ),
        });
    }
    let carrier = FourierWindowSubspace {
        fiber_dim: 1,
        half_width: s.half_width,
        basis: inno.basis,
        margin: s.margin,
    };
    let n = s.slots();
    let mut samples: Vec<C64> = (0..n).map(|j| carrier.sample_values(j)[(0, 0)]).collect();
    let first = samples[0];
    if first.norm() > 0.0 {
        let phase = first.conj() / cr(first.norm());
        for q in samples.iter_mut() {
            *q *= phase;
        }
    }
    let modulus_deviation = samples
        .iter()
        .map(|q| (q.norm() - 1.0).abs())
        .fold(0.0, f64::max);
    Ok(InnerFunction {
        samples,
        modulus_deviation,
    })
}

/// The Halmos-Helson splitting of an invariant subspace into its shift
/// part (a rigid function applied to the Hardy window) and its doubly
/// invariant part (a range function K), with J orthogonal to K pointwise.
#[derive(Debug, Clone)]
pub struct HalmosHelsonDecomposition {
    /// Rigid function of the shift part; absent when the input is doubly
    /// invariant (the shift part is trivial).
    pub rigid: Option<RigidFunction>,
    /// Range function of the doubly invariant part.
    pub range_k: RangeFunction,
    /// Range function of the shift part (trivial when rigid is absent).
    pub range_j: RangeFunction,
    /// max_j || J(w_j) K(w_j) ||.
    pub orthogonality_residual: f64,
    pub innovation_dim: usize,
    pub doubly_dim: usize,
    /// Aliased doubly-part iterations used.
    pub iterations: usize,
}

/// Machine-readable summary for the JSON exports.
#[derive(Debug, Clone, Serialize)]
pub struct DecompositionSummary {
    pub fiber_dim: usize,
    pub half_width: usize,
    pub margin: usize,
    pub innovation_dim: usize,
    pub doubly_dim: usize,
    pub ranks_j: Vec<usize>,
    pub ranks_k: Vec<usize>,
    pub orthogonality_residual: f64,
    pub iterations: usize,
}

/// Extract the largest doubly invariant part of the subspace: iterate
/// D <- D meet (chi D) meet (chi^{-1} D) in the aliased picture, where
/// both actions are exact permutations. Analytic ladder content is shaved
/// from both ends and dies out; pointwise (Wiener) content is fixed.
fn doubly_part(s: &FourierWindowSubspace) -> Result<(SubspaceBasis, usize)> {
    let mut d = s.basis.clone();
    let mut iterations = 0usize;
    for _ in 0..50 {
        if d.rank() == 0 {
            break;
        }
        iterations += 1;
        let fwd = orthonormalize_columns(
            &aliased_shift_columns(&d.columns, s.fiber_dim, s.slots(), 1),
            1e-10,
        )?;
        let bwd = orthonormalize_columns(
            &aliased_shift_columns(&d.columns, s.fiber_dim, s.slots(), -1),
            1e-10,
        )?;
        let step = subspace::intersect(&subspace::intersect(&d, &fwd, 1e-10)?, &bwd, 1e-10)?;
        if step.rank() == d.rank() {
            d = step;
            break;
        }
        d = step;
    }
    Ok((d, iterations))
}

/// Decompose an invariant window subspace into shift part and doubly
/// invariant part.
pub fn halmos_helson_decompose(s: &FourierWindowSubspace) -> Result<HalmosHelsonDecomposition> {
    if s.margin == 0 {
        return Err(OperError::MarginExhausted {
            detail: "decomposition needs margin for the innovation step".into(),
        });
    }
    let (m_inf, iterations) = doubly_part(s)?;
    let doubly_dim = m_inf.rank();
    let k_carrier = FourierWindowSubspace {
        fiber_dim: s.fiber_dim,
        half_width: s.half_width,
        basis: m_inf.clone(),
        margin: s.margin,
    };
    let range_k = k_carrier.pointwise_range()?;

    // Shift part: N = M minus M_infinity.
    let n_basis = complement_within(&s.basis, &m_inf, 1e-8)?;
    if n_basis.rank() == 0 {
        let range_j = RangeFunction::trivial(s.slots(), s.fiber_dim);
        return Ok(HalmosHelsonDecomposition {
            rigid: None,
            orthogonality_residual: 0.0,
            range_j,
            range_k,
            innovation_dim: 0,
            doubly_dim,
            iterations,
        });
    }
    let n_sub = FourierWindowSubspace {
        fiber_dim: s.fiber_dim,
        half_width: s.half_width,
        basis: n_basis,
        margin: s.margin,
    };
    let inno = innovation_basis(&n_sub)?;
    if inno.basis.rank() == 0 {
        return Err(OperError::InvalidInput {
            detail: "shift part has trivial innovation; input may not be invariant".into(),
        });
    }
    let rigid = rigid_from_innovation(&inno.basis, &n_sub)?;
    let range_j = rigid.range()?;
    let orthogonality_residual = range_j.orthogonality_residual(&range_k)?;
    Ok(HalmosHelsonDecomposition {
        innovation_dim: rigid.rank,
        rigid: Some(rigid),
        range_j,
        range_k,
        orthogonality_residual,
        doubly_dim,
        iterations,
    })
}

impl HalmosHelsonDecomposition {
    pub fn summary(&self, s: &FourierWindowSubspace) -> DecompositionSummary {
        DecompositionSummary {
            fiber_dim: s.fiber_dim,
            half_width: s.half_width,
            margin: s.margin,
            innovation_dim: self.innovation_dim,
            doubly_dim: self.doubly_dim,
            ranks_j: self.range_j.ranks(),
            ranks_k: self.range_k.ranks(),
            orthogonality_residual: self.orthogonality_residual,
            iterations: self.iterations,
        }
    }
}

/// Coefficient column of the Blaschke factor (omega - a)/(1 - conj(a) omega)
/// times chi^{shift}, truncated to the window: the Taylor series
/// -a + (1 - |a|^2) sum_{k >= 1} conj(a)^{k-1} omega^k.
pub fn blaschke_column(
    a: C64,
    shift: i64,
    fiber_dim: usize,
    channel: usize,
    half_width: usize,
) -> CVector {
    let slots = 2 * half_width + 1;
    let mut v = CVector::zeros(slots * fiber_dim);
    let m = half_width as i64;
    let put = |vv: &mut CVector, k: i64, z: C64| {
        if k >= -m && k <= m {
            vv[((k + m) as usize) * fiber_dim + channel] = z;
        }
    };
    put(&mut v, shift, -a);
    let head = cr(1.0) - a * a.conj();
    let mut pw = cr(1.0);
    for k in 1..=(2 * m) {
        put(&mut v, shift + k, head * pw);
        pw *= a.conj();
    }
    v
}

/// Dirichlet-kernel column: the unit-norm trigonometric interpolation
/// kernel concentrated at grid point j of the natural (2M+1)-point grid.
pub fn dirichlet_column(j: usize, fiber_dim: usize, channel: usize, half_width: usize) -> CVector {
    let slots = 2 * half_width + 1;
    let mut v = CVector::zeros(slots * fiber_dim);
    let m = half_width as i64;
    let theta = 2.0 * PI * j as f64 / slots as f64;
    let omega = c(theta.cos(), theta.sin());
    let scale = cr(1.0 / (slots as f64).sqrt());
    for k in -m..=m {
        v[((k + m) as usize) * fiber_dim + channel] = omega.powi(-k as i32) * scale;
    }
    v
}
