//! The arrival-time operator of the free particle: momentum-space action,
//! energy representation, Werner dilation to the doubled energy line, and
//! arrival densities.
//!
//! In momentum representation the (extended) arrival-time operator acts as
//!
//!   (i/2) [ d(psi/k)/dk + (1/k) d psi/dk ]
//!
//! on wavefunctions vanishing at k = 0 faster than |k|^{1/2}. The energy
//! change of variables lambda = k^2/2 packs the two momentum branches into
//! a two-channel half-line vector with weight d lambda = k dk, on which
//! the operator is -i d/d lambda with a boundary condition at 0. Dropping
//! that condition on the doubled line gives the selfadjoint dilation,
//! realized here as the Fourier-spectral derivative on a uniform
//! lambda-grid; the arrival density is the channel-summed modulus squared
//! of the time representation (the Fourier transform in lambda).
//!
//! All units use hbar = 1 and mass 1.

use crate::error::{OperError, Result};
use crate::opcore::grid::dft_columns;
use crate::opcore::linalg::{c, cr, CMatrix, CVector, C64};
use crate::opcore::operator::OperatorRep;
use std::f64::consts::PI;

/// Symmetric punctured momentum grid: k = +-(puncture + i) h for
/// i = 0..n_side, stored in ascending order (negative block first).
#[derive(Debug, Clone, PartialEq)]
pub struct MomentumGrid {
    pub h: f64,
    /// Number of grid steps excluded around 0; k_min = puncture_steps * h.
    pub puncture_steps: usize,
    /// Points per side.
    pub n_side: usize,
}

impl MomentumGrid {
    pub fn new(h: f64, puncture_steps: usize, n_side: usize) -> Result<Self> {
        if h <= 0.0 || n_side == 0 || puncture_steps == 0 {
            return Err(OperError::InvalidInput {
                detail: "momentum grid needs h > 0, a puncture, and points".into(),
            });
        }
        Ok(Self {
            h,
            puncture_steps,
            n_side,
        })
    }

    /// Standard puncture of four grid cells.
    pub fn standard(h: f64, n_side: usize) -> Result<Self> {
        Self::new(h, 4, n_side)
    }

    pub fn len(&self) -> usize {
        2 * self.n_side
    }

    pub fn is_empty(&self) -> bool {
        self.n_side == 0
    }

    pub fn k_min(&self) -> f64 {
        self.puncture_steps as f64 * self.h
    }

    pub fn k_max(&self) -> f64 {
        (self.puncture_steps + self.n_side - 1) as f64 * self.h
    }

    /// k at storage index j (ascending; j < n_side is the negative side).
    pub fn k_at(&self, j: usize) -> f64 {
        if j < self.n_side {
            -((self.puncture_steps + self.n_side - 1 - j) as f64) * self.h
        } else {
            (self.puncture_steps + (j - self.n_side)) as f64 * self.h
        }
    }

    /// Positive k of branch index i = 0..n_side.
    pub fn k_pos(&self, i: usize) -> f64 {
        (self.puncture_steps + i) as f64 * self.h
    }

    /// Storage index of +k_pos(i).
    pub fn idx_pos(&self, i: usize) -> usize {
        self.n_side + i
    }

    /// Storage index of -k_pos(i).
    pub fn idx_neg(&self, i: usize) -> usize {
        self.n_side - 1 - i
    }
}

/// Sampled momentum wavefunction with its domain diagnostics.
#[derive(Debug, Clone)]
pub struct MomentumWavefunction {
    pub grid: MomentumGrid,
    /// Samples in ascending-k storage order.
    pub samples: CVector,
    /// Surrogate of lim_{k->0} psi(k)/|k|^{1/2} = 0: the ratio at the
    /// innermost retained points is below the grid threshold.
    pub vanishing_at_zero: bool,
    pub smooth: bool,
}

impl MomentumWavefunction {
    /// Threshold for the vanishing-at-zero surrogate: 10 sqrt(h).
    pub fn vanishing_threshold(grid: &MomentumGrid) -> f64 {
        10.0 * grid.h.sqrt()
    }

    pub fn from_fn(grid: MomentumGrid, smooth: bool, f: impl Fn(f64) -> C64) -> Self {
        let samples = CVector::from_fn(grid.len(), |j, _| f(grid.k_at(j)));
        let threshold = Self::vanishing_threshold(&grid);
        let inner_pos = samples[grid.idx_pos(0)].norm() / grid.k_min().sqrt();
        let inner_neg = samples[grid.idx_neg(0)].norm() / grid.k_min().sqrt();
        let vanishing_at_zero = inner_pos <= threshold && inner_neg <= threshold;
        Self {
            grid,
            samples,
            vanishing_at_zero,
            smooth,
        }
    }

    /// Norm with the plain dk quadrature.
    pub fn norm(&self) -> f64 {
        (self.grid.h * self.samples.iter().map(|z| z.norm_sqr()).sum::<f64>()).sqrt()
    }

    pub fn normalized(mut self) -> Self {
        let n = self.norm();
        if n > 0.0 {
            self.samples = self.samples.scale(1.0 / n);
        }
        self
    }

    /// Inner product with the dk weight.
    pub fn inner(&self, other: &Self) -> C64 {
        let mut acc = cr(0.0);
        for j in 0..self.samples.len() {
            acc += self.samples[j].conj() * other.samples[j];
        }
        acc * cr(self.grid.h)
    }
}

/// Apply the arrival-time action (i/2)[d(psi/k)/dk + (1/k) d psi/dk]
/// by second-order differences on each side of the puncture (central in
/// the interior, one-sided three-point at the side ends).
pub fn ab_momentum_apply(psi: &MomentumWavefunction) -> Result<MomentumWavefunction> {
    if !psi.vanishing_at_zero {
        return Err(OperError::DomainViolation {
            detail: format!(
                "wavefunction does not vanish at zero: |psi(k)|/sqrt(|k|) at the puncture \
                 exceeds the threshold {:.3e}",
                MomentumWavefunction::vanishing_threshold(&psi.grid)
            ),
        });
    }
    if !psi.smooth {
        return Err(OperError::DomainViolation {
            detail: "arrival-time action needs the smoothness flag".into(),
        });
    }
    let grid = psi.grid.clone();
    let n_side = grid.n_side;
    let h = grid.h;
    let mut out = CVector::zeros(grid.len());

    // derivative of a sampled side (ascending in storage order), second
    // order everywhere
    let derive = |vals: &[C64]| -> Vec<C64> {
        let n = vals.len();
        let mut d = vec![cr(0.0); n];
        if n < 3 {
            return d;
        }
        let inv2h = cr(1.0 / (2.0 * h));
        d[0] = (vals[1] * cr(4.0) - vals[2] - vals[0] * cr(3.0)) * inv2h;
        for j in 1..n - 1 {
            d[j] = (vals[j + 1] - vals[j - 1]) * inv2h;
        }
        d[n - 1] = (vals[n - 1] * cr(3.0) - vals[n - 2] * cr(4.0) + vals[n - 3]) * inv2h;
        d
    };

    for side in 0..2 {
        let idx = |i: usize| {
            if side == 0 {
                grid.idx_neg(n_side - 1 - i) // ascending k on the negative side
            } else {
                grid.idx_pos(i)
            }
        };
        let ks: Vec<f64> = (0..n_side)
            .map(|i| grid.k_at(idx(i)))
            .collect();
        let vals: Vec<C64> = (0..n_side).map(|i| psi.samples[idx(i)]).collect();
        let over_k: Vec<C64> = (0..n_side).map(|i| vals[i] / cr(ks[i])).collect();
        let d_over_k = derive(&over_k);
        let d_vals = derive(&vals);
        for i in 0..n_side {
            let total = (d_over_k[i] + d_vals[i] / cr(ks[i])) * c(0.0, 0.5);
            out[idx(i)] = total;
        }
    }

    Ok(MomentumWavefunction {
        grid,
        samples: out,
        vanishing_at_zero: psi.vanishing_at_zero,
        smooth: psi.smooth,
    })
}

/// Energy-representation vector: two channels over the induced lambda
/// grid, with the exact d lambda = k dk quadrature weights.
#[derive(Debug, Clone)]
pub struct EnergyRepVector {
    pub grid: MomentumGrid,
    /// lambda_i = k_i^2 / 2 over the positive branch, ascending.
    pub lambdas: Vec<f64>,
    /// Quadrature weights k_i h.
    pub weights: Vec<f64>,
    /// channels[(i, 0)] carries the +sqrt(2 lambda) branch,
    /// channels[(i, 1)] the -sqrt(2 lambda) branch.
    pub channels: CMatrix,
}

impl EnergyRepVector {
    pub fn norm(&self) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.lambdas.len() {
            acc += self.weights[i]
                * (self.channels[(i, 0)].norm_sqr() + self.channels[(i, 1)].norm_sqr());
        }
        acc.sqrt()
    }
}

/// Change of variables lambda = k^2/2:
/// vec(lambda) = (2 lambda)^{-1/4} (psi(+sqrt(2 lambda)), psi(-sqrt(2 lambda))).
/// The reweighting makes the grid norms agree exactly.
pub fn energy_rep(psi: &MomentumWavefunction) -> EnergyRepVector {
    let grid = psi.grid.clone();
    let n = grid.n_side;
    let mut lambdas = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    let mut channels = CMatrix::zeros(n, 2);
    for i in 0..n {
        let k = grid.k_pos(i);
        let lam = 0.5 * k * k;
        lambdas.push(lam);
        weights.push(k * grid.h);
        let scale = cr((2.0 * lam).powf(-0.25));
        channels[(i, 0)] = psi.samples[grid.idx_pos(i)] * scale;
        channels[(i, 1)] = psi.samples[grid.idx_neg(i)] * scale;
    }
    EnergyRepVector {
        grid,
        lambdas,
        weights,
        channels,
    }
}

/// Invert the energy representation back to momentum samples. The grids
/// must be consistent (the lambdas must be the images of the stored
/// momentum grid).
pub fn energy_rep_inverse(v: &EnergyRepVector) -> Result<MomentumWavefunction> {
    let grid = v.grid.clone();
    if v.lambdas.len() != grid.n_side {
        return Err(OperError::GridMismatch {
            detail: format!(
                "energy vector has {} lambda points for a grid with {} per side",
                v.lambdas.len(),
                grid.n_side
            ),
        });
    }
    for (i, lam) in v.lambdas.iter().enumerate() {
        let k = grid.k_pos(i);
        if (lam - 0.5 * k * k).abs() > 1e-12 * (1.0 + lam.abs()) {
            return Err(OperError::GridMismatch {
                detail: format!("lambda {i} = {lam} is not k^2/2 of the grid point {k}"),
            });
        }
    }
    let mut samples = CVector::zeros(grid.len());
    for i in 0..grid.n_side {
        let scale = cr((2.0 * v.lambdas[i]).powf(0.25));
        samples[grid.idx_pos(i)] = v.channels[(i, 0)] * scale;
        samples[grid.idx_neg(i)] = v.channels[(i, 1)] * scale;
    }
    Ok(MomentumWavefunction {
        grid,
        samples,
        vanishing_at_zero: true,
        smooth: true,
    })
}

/// Uniform doubled lambda line for the dilation and the time
/// representation.
#[derive(Debug, Clone, PartialEq)]
pub struct LambdaLine {
    pub n: usize,
    pub h: f64,
    /// Left end; the grid is lambda_j = lambda0 + j h, symmetric about 0.
    pub lambda0: f64,
}

impl LambdaLine {
    pub fn symmetric(half_width: f64, n: usize) -> Result<Self> {
        if n == 0 || !n.is_power_of_two() {
            return Err(OperError::InvalidInput {
                detail: "lambda line needs a power-of-two point count".into(),
            });
        }
        let h = 2.0 * half_width / n as f64;
        Ok(Self {
            n,
            h,
            lambda0: -half_width,
        })
    }

    pub fn lambda_at(&self, j: usize) -> f64 {
        self.lambda0 + j as f64 * self.h
    }
}

/// The Werner dilation: the selfadjoint spectral derivative on the
/// doubled lambda line, together with the zero-extension embedding.
pub struct WernerDilation {
    pub line: LambdaLine,
    /// -i d/d lambda as a dense circulant (Fourier-spectral, Nyquist
    /// zeroed); Hermitian to rounding.
    pub p_ext: OperatorRep,
}

/// Build the dilation on a symmetric lambda window.
pub fn werner_dilation(half_width: f64, n: usize) -> Result<WernerDilation> {
    let line = LambdaLine::symmetric(half_width, n)?;
    let (p, _q) = crate::timeop::schrodinger_couple(n, line.h, line.lambda0)?;
    Ok(WernerDilation { line, p_ext: p })
}

impl WernerDilation {
    /// Multiplication by lambda on the doubled line (the dilated
    /// Hamiltonian in the energy representation).
    pub fn q_ext(&self) -> OperatorRep {
        OperatorRep::MulSymbol {
            symbols: (0..self.line.n)
                .map(|j| CMatrix::from_element(1, 1, cr(self.line.lambda_at(j))))
                .collect(),
        }
    }

    /// Zero-extend a two-channel energy vector onto the uniform line by
    /// local cubic (4-point) Lagrange interpolation on the induced
    /// nonuniform lambda nodes. Returns the embedded channels (n x 2) and
    /// the norm defect of the embedding.
    pub fn embed(&self, v: &EnergyRepVector) -> (CMatrix, f64) {
        let n = self.line.n;
        let mut out = CMatrix::zeros(n, 2);
        let lam_min = v.lambdas.first().copied().unwrap_or(0.0);
        let lam_max = v.lambdas.last().copied().unwrap_or(0.0);
        for j in 0..n {
            let lam = self.line.lambda_at(j);
            if lam < lam_min || lam > lam_max {
                continue;
            }
            // locate the bracketing nodes
            let pos = v.lambdas.partition_point(|&l| l < lam);
            let i1 = pos.min(v.lambdas.len() - 1);
            let lo = i1.saturating_sub(2);
            let hi = (lo + 4).min(v.lambdas.len());
            let lo = hi.saturating_sub(4);
            for ch in 0..2 {
                let mut acc = cr(0.0);
                for a in lo..hi {
                    let mut weight = 1.0;
                    for b in lo..hi {
                        if a != b {
                            weight *= (lam - v.lambdas[b]) / (v.lambdas[a] - v.lambdas[b]);
                        }
                    }
                    acc += v.channels[(a, ch)] * cr(weight);
                }
                out[(j, ch)] = acc;
            }
        }
        let embedded_norm = (self.line.h
            * out.iter().map(|z| z.norm_sqr()).sum::<f64>())
        .sqrt();
        let defect = (embedded_norm - v.norm()).abs();
        (out, defect)
    }

    /// Compression of the dilation to the embedded positive half-line:
    /// apply p_ext to each embedded channel and restrict to lambda > 0.
    pub fn compress_apply(&self, embedded: &CMatrix) -> Result<CMatrix> {
        let n = self.line.n;
        let mut out = CMatrix::zeros(n, 2);
        for ch in 0..2 {
            let col: CVector = embedded.column(ch).into_owned();
            let moved = self.p_ext.apply(&col)?;
            for j in 0..n {
                if self.line.lambda_at(j) > 0.0 {
                    out[(j, ch)] = moved[j];
                }
            }
        }
        Ok(out)
    }
}

/// Arrival-time density on the dual grid of a lambda line.
#[derive(Debug, Clone)]
pub struct ArrivalDensity {
    /// Time grid spacing 2 pi / (N h_lambda); times are in FFT order
    /// folded symmetric, ascending.
    pub dt: f64,
    pub t0: f64,
    pub density: Vec<f64>,
    /// Riemann integral of the density over the time window.
    pub total_mass: f64,
    /// Norm defect of the embedding step.
    pub embedding_defect: f64,
}

/// Compute the arrival density of a normalized momentum wavefunction:
/// the channel-summed modulus squared of the time representation (the
/// Fourier transform of the zero-extended energy representation), with an
/// optional exact phase modulation e^{i lambda t_shift} applied on the
/// uniform grid.
pub fn arrival_density(
    psi: &MomentumWavefunction,
    dilation: &WernerDilation,
    t_shift: Option<f64>,
) -> Result<ArrivalDensity> {
    let norm = psi.norm();
    let zero_input = norm == 0.0;
    if !zero_input && (norm - 1.0).abs() > 1e-10 {
        return Err(OperError::Precondition {
            detail: format!("arrival density needs a normalized state, got norm {norm}"),
        });
    }
    let v = energy_rep(psi);
    let (mut embedded, embedding_defect) = dilation.embed(&v);
    if let Some(ts) = t_shift {
        for j in 0..dilation.line.n {
            let lam = dilation.line.lambda_at(j);
            let phase = c(0.0, lam * ts).exp();
            embedded[(j, 0)] *= phase;
            embedded[(j, 1)] *= phase;
        }
    }
    let n = dilation.line.n;
    let h = dilation.line.h;
    // unitary line transform channel by channel (fold to symmetric times)
    let raw = dft_columns(&embedded, true);
    let dt = 2.0 * PI / (n as f64 * h);
    let t0 = -((n / 2) as f64) * dt;
    let scale = h / (2.0 * PI).sqrt();
    let mut density = vec![0.0f64; n];
    for m in 0..n {
        let idx = (m + n / 2) % n;
        let mut d = 0.0;
        for ch in 0..2 {
            d += (raw[(idx, ch)] * cr(scale)).norm_sqr();
        }
        density[m] = d;
    }
    let total_mass = dt * density.iter().sum::<f64>();
    Ok(ArrivalDensity {
        dt,
        t0,
        density,
        total_mass,
        embedding_defect,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opcore::linalg;

    fn probe_k2_gaussian(grid: &MomentumGrid) -> MomentumWavefunction {
        MomentumWavefunction::from_fn(grid.clone(), true, |k| cr(k * k * (-k * k).exp()))
    }

    #[test]
    fn grid_layout_is_ascending_and_punctured() {
        let grid = MomentumGrid::standard(0.25, 8).unwrap();
        assert_eq!(grid.len(), 16);
        assert!((grid.k_min() - 1.0).abs() < 1e-15);
        for j in 1..grid.len() {
            assert!(grid.k_at(j) > grid.k_at(j - 1));
        }
        assert!((grid.k_at(8) - 1.0).abs() < 1e-15);
        assert!((grid.k_at(7) + 1.0).abs() < 1e-15);
        assert_eq!(grid.idx_pos(0), 8);
        assert_eq!(grid.idx_neg(0), 7);
    }

    #[test]
    fn ab_apply_matches_symbolic_derivative_at_second_order() {
        // psi = k^2 e^{-k^2}: the action is (i/2)(3 - 4k^2) e^{-k^2}.
        let error_at = |h: f64| -> f64 {
            let n_side = (6.0 / h) as usize;
            let grid = MomentumGrid::standard(h, n_side).unwrap();
            let psi = probe_k2_gaussian(&grid);
            assert!(psi.vanishing_at_zero);
            let image = ab_momentum_apply(&psi).unwrap();
            let mut worst = 0.0f64;
            for j in 0..grid.len() {
                let k = grid.k_at(j);
                let expected = c(0.0, 0.5) * cr((3.0 - 4.0 * k * k) * (-k * k).exp());
                worst = worst.max((image.samples[j] - expected).norm());
            }
            worst
        };
        let e1 = error_at(0.02);
        let e2 = error_at(0.01);
        assert!(e1 < 1e-2, "coarse error {e1}");
        assert!(e1 / e2 >= 3.5, "order below two: {e1:.3e} -> {e2:.3e}");
    }

    #[test]
    fn ab_apply_of_zero_is_zero() {
        let grid = MomentumGrid::standard(0.05, 64).unwrap();
        let psi = MomentumWavefunction::from_fn(grid, true, |_| cr(0.0));
        let image = ab_momentum_apply(&psi).unwrap();
        assert!(image.samples.iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn ab_apply_rejects_nonvanishing_states() {
        let grid = MomentumGrid::standard(0.01, 512).unwrap();
        let psi = MomentumWavefunction::from_fn(grid, true, |k| cr((-k * k).exp()));
        assert!(!psi.vanishing_at_zero);
        assert!(matches!(
            ab_momentum_apply(&psi),
            Err(OperError::DomainViolation { .. })
        ));
    }

    #[test]
    fn ab_apply_is_symmetric_on_domain_probes() {
        let sym_defect = |h: f64| -> f64 {
            let n_side = (6.0 / h) as usize;
            let grid = MomentumGrid::standard(h, n_side).unwrap();
            let phi = MomentumWavefunction::from_fn(grid.clone(), true, |k| {
                cr(k * k * (-k * k).exp())
            });
            let psi = MomentumWavefunction::from_fn(grid.clone(), true, |k| {
                c(k * k * k * (-k * k).exp(), 0.3 * k * k * (-0.5 * k * k).exp())
            });
            let t_phi = ab_momentum_apply(&phi).unwrap();
            let t_psi = ab_momentum_apply(&psi).unwrap();
            (t_phi.inner(&psi) - phi.inner(&t_psi)).norm()
        };
        let d1 = sym_defect(0.02);
        let d2 = sym_defect(0.01);
        assert!(d1 < 1e-3, "symmetry defect {d1}");
        assert!(d1 / d2 > 3.0, "symmetry defect order: {d1:.3e} -> {d2:.3e}");
    }

    #[test]
    fn energy_rep_of_grid_delta_at_unit_momentum() {
        // unit sample at k = 1: channel 0 value (2 * 0.5)^{-1/4} = 1.
        let grid = MomentumGrid::standard(0.125, 16).unwrap();
        let idx_one = grid.idx_pos(4); // k = (4 + 4) * 0.125 = 1.0
        assert!((grid.k_pos(4) - 1.0).abs() < 1e-15);
        let mut samples = CVector::zeros(grid.len());
        samples[idx_one] = cr(1.0);
        let psi = MomentumWavefunction {
            grid: grid.clone(),
            samples,
            vanishing_at_zero: true,
            smooth: false,
        };
        let v = energy_rep(&psi);
        assert!((v.lambdas[4] - 0.5).abs() < 1e-15);
        assert!((v.channels[(4, 0)] - cr(1.0)).norm() < 1e-14);
        assert!(v.channels[(4, 1)].norm() == 0.0);
    }

    #[test]
    fn energy_rep_norm_is_exact_on_grid_data() {
        let grid = MomentumGrid::standard(0.01, 700).unwrap();
        let psi = MomentumWavefunction::from_fn(grid, true, |k| {
            c((-(k - 5.0) * (k - 5.0)).exp(), 0.3 * (-(k + 4.0) * (k + 4.0)).exp())
        });
        let v = energy_rep(&psi);
        assert!((v.norm() - psi.norm()).abs() < 1e-12);
    }

    #[test]
    fn energy_rep_roundtrip_is_identity() {
        let grid = MomentumGrid::standard(0.02, 300).unwrap();
        let psi = MomentumWavefunction::from_fn(grid, true, |k| {
            cr(k * (-0.3 * k * k).exp())
        });
        let v = energy_rep(&psi);
        let back = energy_rep_inverse(&v).unwrap();
        let mut worst = 0.0f64;
        for j in 0..psi.samples.len() {
            worst = worst.max((back.samples[j] - psi.samples[j]).norm());
        }
        assert!(worst < 1e-12);
    }

    #[test]
    fn energy_rep_inverse_rejects_inconsistent_grids() {
        let grid = MomentumGrid::standard(0.02, 10).unwrap();
        let psi = MomentumWavefunction::from_fn(grid, true, |k| cr(k));
        let mut v = energy_rep(&psi);
        v.lambdas[3] += 0.1;
        assert!(matches!(
            energy_rep_inverse(&v),
            Err(OperError::GridMismatch { .. })
        ));
    }

    #[test]
    fn energy_norm_defect_versus_continuum_is_first_order() {
        // Against the analytic L^2 norm the defect is dominated by the
        // puncture hole, an O(h) effect.
        let defect_at = |h: f64| -> f64 {
            let n_side = (14.0 / h) as usize;
            let grid = MomentumGrid::standard(h, n_side).unwrap();
            // normalized Gaussian pair on both branches: psi = pi^{-1/4} e^{-(k-5)^2/2}
            let psi = MomentumWavefunction::from_fn(grid, true, |k| {
                cr(PI.powf(-0.25) * (-(k - 5.0) * (k - 5.0) / 2.0).exp())
            });
            let v = energy_rep(&psi);
            (v.norm() - 1.0).abs()
        };
        let d1 = defect_at(0.08);
        let d2 = defect_at(0.04);
        assert!(d1 < 1.0);
        let order = (d1 / d2).log2();
        assert!(order >= 1.0, "measured order {order}: {d1:.3e} -> {d2:.3e}");
    }

    #[test]
    fn werner_p_ext_is_hermitian() {
        let dil = werner_dilation(32.0, 512).unwrap();
        let p = dil.p_ext.to_dense().unwrap();
        assert!(linalg::hermitian_defect(&p) <= 1e-12);
    }

    #[test]
    fn werner_pair_satisfies_grid_ccr() {
        let dil = werner_dilation(16.0, 256).unwrap();
        let q = dil.q_ext();
        // centered Gaussian in lambda, away from the window ends
        let n = dil.line.n;
        let mut data = CVector::zeros(n);
        for j in 0..n {
            let lam = dil.line.lambda_at(j);
            data[j] = cr((-lam * lam / 2.0).exp());
        }
        let norm = data.norm();
        let probe = crate::timeop::Probe::new(data.scale(1.0 / norm), 0);
        let report = crate::timeop::check_ccr(&dil.p_ext, &q, &[probe], 1e-8).unwrap();
        assert!(report.verdict, "CCR residual {}", report.max_residual);
    }

    fn compression_error(n: usize, f: impl Fn(f64) -> f64, df: impl Fn(f64) -> f64) -> f64 {
        let dil = werner_dilation(16.0, n).unwrap();
        let mut embedded = CMatrix::zeros(n, 2);
        for j in 0..n {
            let lam = dil.line.lambda_at(j);
            if lam > 0.0 {
                embedded[(j, 0)] = cr(f(lam));
            }
        }
        let moved = dil.compress_apply(&embedded).unwrap();
        let mut worst = 0.0f64;
        for j in 0..n {
            let lam = dil.line.lambda_at(j);
            if lam > 0.5 && lam < 8.0 {
                let expected = c(0.0, -1.0) * cr(df(lam));
                worst = worst.max((moved[(j, 0)] - expected).norm());
            }
        }
        worst
    }

    #[test]
    fn werner_compression_reproduces_energy_action() {
        // The compression acts as -i vec'(lambda) on interior points. The
        // spectral derivative is global, so the convergence order is set
        // by the regularity of the zero-extension at lambda = 0:
        // vec = lambda e^{-lambda^2} has a derivative kink there and
        // converges at first order; vec = lambda^2 e^{-lambda^2} extends
        // C^1 and clears second order.
        let kink1 = compression_error(512, |l| l * (-l * l).exp(), |l| {
            (1.0 - 2.0 * l * l) * (-l * l).exp()
        });
        let kink2 = compression_error(1024, |l| l * (-l * l).exp(), |l| {
            (1.0 - 2.0 * l * l) * (-l * l).exp()
        });
        assert!(kink1 < 0.05, "coarse compression error {kink1}");
        assert!(kink2 <= kink1 / 1.7, "no first-order decay: {kink1:.3e} -> {kink2:.3e}");

        let smooth1 = compression_error(512, |l| l * l * (-l * l).exp(), |l| {
            (2.0 * l - 2.0 * l * l * l) * (-l * l).exp()
        });
        let smooth2 = compression_error(1024, |l| l * l * (-l * l).exp(), |l| {
            (2.0 * l - 2.0 * l * l * l) * (-l * l).exp()
        });
        assert!(smooth1 < 1e-3, "coarse smooth compression error {smooth1}");
        assert!(
            smooth2 <= smooth1 / 3.5,
            "order below two: {smooth1:.3e} -> {smooth2:.3e}"
        );
    }

    #[test]
    fn arrival_density_normalizes_and_vanishes_for_zero_state() {
        let h = 0.005;
        let n_side = (11.0 / h) as usize;
        let grid = MomentumGrid::standard(h, n_side).unwrap();
        let psi = MomentumWavefunction::from_fn(grid.clone(), true, |k| {
            cr(PI.powf(-0.25) * (-(k - 5.0) * (k - 5.0) / 2.0).exp())
        })
        .normalized();
        let dil = werner_dilation(64.0, 4096).unwrap();
        let density = arrival_density(&psi, &dil, None).unwrap();
        assert!(
            (density.total_mass - 1.0).abs() < 1e-6,
            "mass {}",
            density.total_mass
        );

        let zero = MomentumWavefunction::from_fn(grid, true, |_| cr(0.0));
        let empty = arrival_density(&zero, &dil, None).unwrap();
        assert!(empty.density.iter().all(|d| *d == 0.0));
    }

    #[test]
    fn arrival_density_rejects_unnormalized_states() {
        let grid = MomentumGrid::standard(0.01, 600).unwrap();
        let psi = MomentumWavefunction::from_fn(grid, true, |k| {
            cr(2.0 * (-(k - 5.0) * (k - 5.0)).exp())
        });
        let dil = werner_dilation(32.0, 1024).unwrap();
        assert!(matches!(
            arrival_density(&psi, &dil, None),
            Err(OperError::Precondition { .. })
        ));
    }

    #[test]
    fn arrival_density_time_covariance_is_exact_for_aligned_shifts() {
        let h = 0.005;
        let n_side = (11.0 / h) as usize;
        let grid = MomentumGrid::standard(h, n_side).unwrap();
        let psi = MomentumWavefunction::from_fn(grid, true, |k| {
            cr(PI.powf(-0.25) * (-(k - 5.0) * (k - 5.0) / 2.0).exp())
        })
        .normalized();
        let dil = werner_dilation(64.0, 4096).unwrap();
        let base = arrival_density(&psi, &dil, None).unwrap();
        // shift by exactly 16 time cells
        let cells = 16i64;
        let t0 = cells as f64 * base.dt;
        let shifted = arrival_density(&psi, &dil, Some(t0)).unwrap();
        let n = base.density.len();
        let mut worst = 0.0f64;
        for m in 0..n {
            let src = ((m as i64 - cells).rem_euclid(n as i64)) as usize;
            worst = worst.max((shifted.density[m] - base.density[src]).abs());
        }
        assert!(worst < 1e-10, "covariance defect {worst}");
    }

    #[test]
    fn wwr_holds_exactly_for_the_dilated_pair() {
        // The evolution generated by p_ext is translation in lambda;
        // against multiplication by lambda it satisfies the weak Weyl
        // relation exactly on aligned interior probes: the restored
        // Schroedinger-couple structure of the dilation. The dyadic
        // lambda grid makes the cancellation bitwise.
        use crate::timeop::{check_wwr, Evolution, Probe, WeylPairCandidate};
        let n = 1024usize;
        let half_width = 16.0; // h = 1/32, dyadic
        let line = LambdaLine::symmetric(half_width, n).unwrap();
        let cand = WeylPairCandidate {
            evolution: Evolution::Translation {
                n,
                h: line.h,
                x0: line.lambda0,
            },
            t_candidate: OperatorRep::MulSymbol {
                symbols: (0..n)
                    .map(|j| CMatrix::from_element(1, 1, cr(line.lambda_at(j))))
                    .collect(),
            },
            domain_margin: 64,
        };
        let mut data = CVector::zeros(n);
        for j in (n / 4)..(3 * n / 4) {
            let lam = line.lambda_at(j);
            let v = (-lam * lam / 4.0).exp();
            data[j] = cr(if v < 1e-14 { 0.0 } else { v });
        }
        let norm = data.norm();
        let probes = vec![Probe::new(data.scale(1.0 / norm), n / 4)];
        let times = vec![line.h, 8.0 * line.h, -16.0 * line.h];
        let report = check_wwr(&cand, &probes, &times, 0.0).unwrap();
        assert_eq!(report.max_residual, 0.0);
        assert!(report.verdict);
    }
}
