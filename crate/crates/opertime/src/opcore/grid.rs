//! Uniform grids on the circle and the line, sampled vector-valued
//! functions, and the discrete Fourier transform between them.
//!
//! Circle functions model elements of L^2(H) sampled at the N-th roots of
//! unity with measure weight 1/N per sample (the discretization of
//! d omega / 2 pi). Their Fourier coefficients live on a `CircleModes`
//! domain with unit weight, so that Parseval is exact. Line functions
//! carry their spacing `h`; the norm weight is `h` per sample, or `h/pi`
//! for the half-plane convention used by the disc-to-line transform.

use crate::error::{OperError, Result};
use crate::opcore::linalg::{c, cr, C64, CMatrix};
use rustfft::FftPlanner;
use std::f64::consts::PI;

/// Per-sample quadrature weight attached to a line domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LineWeight {
    /// Plain dx quadrature.
    Dx,
    /// dx / pi, the half-plane model convention.
    DxOverPi,
}

/// Sampling domain of a [`GridFunction`].
#[derive(Debug, Clone, PartialEq)]
pub enum Domain {
    /// N-th roots of unity, weight 1/N per sample.
    Circle { n: usize },
    /// Fourier coefficient side of a circle grid, unit weight per mode.
    /// Mode `k` is stored at index `k mod n` (FFT ordering).
    CircleModes { n: usize },
    /// Uniform line grid x_j = x0 + j h, j = 0..n.
    Line {
        n: usize,
        h: f64,
        x0: f64,
        weight: LineWeight,
    },
}

impl Domain {
    pub fn len(&self) -> usize {
        match self {
            Domain::Circle { n } | Domain::CircleModes { n } => *n,
            Domain::Line { n, .. } => *n,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Quadrature weight of one sample.
    pub fn sample_weight(&self) -> f64 {
        match self {
            Domain::Circle { n } => 1.0 / *n as f64,
            Domain::CircleModes { .. } => 1.0,
            Domain::Line { h, weight, .. } => match weight {
                LineWeight::Dx => *h,
                LineWeight::DxOverPi => *h / PI,
            },
        }
    }

    /// The j-th circle point exp(2 pi i j / N).
    pub fn circle_point(&self, j: usize) -> C64 {
        match self {
            Domain::Circle { n } | Domain::CircleModes { n } => {
                let theta = 2.0 * PI * j as f64 / *n as f64;
                c(theta.cos(), theta.sin())
            }
            Domain::Line { .. } => panic!("circle_point on a line domain"),
        }
    }

    /// The j-th line coordinate.
    pub fn line_point(&self, j: usize) -> f64 {
        match self {
            Domain::Line { h, x0, .. } => x0 + j as f64 * *h,
            _ => panic!("line_point on a circle domain"),
        }
    }
}

/// Sampled complex vector-valued function: N samples of a C^d fiber.
///
/// Samples are stored as an N x d matrix (one row per grid point).
/// `boundary_margin` counts end samples considered contaminated by
/// truncation artifacts; comparisons exclude them. It is 0 on the circle.
#[derive(Debug, Clone)]
pub struct GridFunction {
    pub domain: Domain,
    pub samples: CMatrix,
    pub boundary_margin: usize,
}

impl GridFunction {
    pub fn new(domain: Domain, samples: CMatrix) -> Result<Self> {
        if samples.nrows() != domain.len() {
            return Err(OperError::DimensionMismatch {
                expected: domain.len(),
                got: samples.nrows(),
            });
        }
        if domain.is_empty() || samples.ncols() == 0 {
            return Err(OperError::InvalidInput {
                detail: "empty grid function".into(),
            });
        }
        Ok(Self {
            domain,
            samples,
            boundary_margin: 0,
        })
    }

    pub fn zeros(domain: Domain, channels: usize) -> Self {
        let samples = CMatrix::zeros(domain.len(), channels);
        Self {
            domain,
            samples,
            boundary_margin: 0,
        }
    }

    /// Scalar circle function from a closure over the roots of unity.
    pub fn circle_from_fn(n: usize, f: impl Fn(C64) -> C64) -> Self {
        let domain = Domain::Circle { n };
        let samples = CMatrix::from_fn(n, 1, |j, _| f(domain.circle_point(j)));
        Self {
            domain,
            samples,
            boundary_margin: 0,
        }
    }

    /// Scalar line function from a closure over the coordinates.
    pub fn line_from_fn(n: usize, h: f64, x0: f64, weight: LineWeight, f: impl Fn(f64) -> C64) -> Self {
        let domain = Domain::Line { n, h, x0, weight };
        let samples = CMatrix::from_fn(n, 1, |j, _| f(domain.line_point(j)));
        Self {
            domain,
            samples,
            boundary_margin: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.domain.len()
    }

    pub fn is_empty(&self) -> bool {
        self.domain.is_empty()
    }

    pub fn channels(&self) -> usize {
        self.samples.ncols()
    }

    /// Norm in the domain's declared quadrature.
    pub fn norm(&self) -> f64 {
        (self.domain.sample_weight() * self.samples.iter().map(|z| z.norm_sqr()).sum::<f64>())
            .sqrt()
    }

    /// Squared norm in the declared quadrature.
    pub fn norm_sqr(&self) -> f64 {
        self.domain.sample_weight() * self.samples.iter().map(|z| z.norm_sqr()).sum::<f64>()
    }
}

/// Transform direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FourierDirection {
    Forward,
    Inverse,
}

/// Discrete Fourier transform with the crate's unitary conventions.
///
/// Circle: coefficient k of a sampled circle function is
/// `(1/N) sum_j v_j omega_N^{-jk}`; the inverse is the plain synthesis
/// `sum_k c_k omega_N^{jk}`. With the 1/N circle weight and unit mode
/// weight the transform is unitary, so Parseval holds to rounding.
///
/// Line: forward maps samples on `x_j = x0 + j h` to samples on the
/// frequency grid `k_m` of spacing `2 pi / (N h)` (FFT ordering folded to
/// a symmetric window) via `(h / sqrt(2 pi)) sum_j f_j exp(-i k_m x_j)`;
/// the inverse mirrors it. Both carry plain-`dx` weights.
pub fn fourier(gf: &GridFunction, direction: FourierDirection) -> Result<GridFunction> {
    match gf.domain {
        Domain::Circle { n } => {
            if direction == FourierDirection::Inverse {
                return Err(OperError::InvalidInput {
                    detail: "inverse fourier on a circle-sample domain; expected CircleModes".into(),
                });
            }
            let samples = dft_columns(&gf.samples, true);
            Ok(GridFunction {
                domain: Domain::CircleModes { n },
                samples: samples.scale(1.0 / n as f64),
                boundary_margin: gf.boundary_margin,
            })
        }
        Domain::CircleModes { n } => {
            if direction == FourierDirection::Forward {
                return Err(OperError::InvalidInput {
                    detail: "forward fourier on a coefficient domain; expected Circle".into(),
                });
            }
            let samples = dft_columns(&gf.samples, false);
            Ok(GridFunction {
                domain: Domain::Circle { n },
                samples,
                boundary_margin: gf.boundary_margin,
            })
        }
        Domain::Line { n, h, x0, weight } => {
            if weight != LineWeight::Dx {
                return Err(OperError::InvalidInput {
                    detail: "line fourier is defined for the plain dx weight".into(),
                });
            }
            let dk = 2.0 * PI / (n as f64 * h);
            let k0 = -(((n / 2) as f64) * dk);
            match direction {
                FourierDirection::Forward => {
                    // Phase-split: f_hat(k_m) = h/sqrt(2pi) e^{-i k_m x0} DFT_m'
                    // with the mode index folded so k0 corresponds to -N/2.
                    let raw = dft_columns(&gf.samples, true);
                    let half = n / 2;
                    let mut out = CMatrix::zeros(n, gf.channels());
                    for m in 0..n {
                        // frequency index in FFT ordering for output slot m
                        let idx = (m + half) % n;
                        let k = k0 + m as f64 * dk;
                        let phase = c(0.0, -k * x0).exp() * cr(h / (2.0 * PI).sqrt());
                        for ch in 0..gf.channels() {
                            out[(m, ch)] = phase * raw[(idx, ch)];
                        }
                    }
                    Ok(GridFunction {
                        domain: Domain::Line {
                            n,
                            h: dk,
                            x0: k0,
                            weight: LineWeight::Dx,
                        },
                        samples: out,
                        boundary_margin: gf.boundary_margin,
                    })
                }
                FourierDirection::Inverse => {
                    // Interpret the input as frequency samples; reconstruct on
                    // the spatial grid of spacing 2 pi / (N h_k) and origin
                    // chosen symmetric.
                    let hx = 2.0 * PI / (n as f64 * h);
                    let x0_out = -(((n / 2) as f64) * hx);
                    let half = n / 2;
                    let mut folded = CMatrix::zeros(n, gf.channels());
                    for m in 0..n {
                        let k = x0 + m as f64 * h;
                        let phase = c(0.0, k * x0_out).exp() * cr(h / (2.0 * PI).sqrt());
                        let idx = (m + half) % n;
                        for ch in 0..gf.channels() {
                            folded[(idx, ch)] = phase * gf.samples[(m, ch)];
                        }
                    }
                    let out = dft_columns(&folded, false);
                    Ok(GridFunction {
                        domain: Domain::Line {
                            n,
                            h: hx,
                            x0: x0_out,
                            weight: LineWeight::Dx,
                        },
                        samples: out,
                        boundary_margin: gf.boundary_margin,
                    })
                }
            }
        }
    }
}

/// Unnormalized DFT of each column: forward uses kernel exp(-2 pi i jk/N).
pub fn dft_columns(m: &CMatrix, forward: bool) -> CMatrix {
    let n = m.nrows();
    let mut planner = FftPlanner::<f64>::new();
    let fft = if forward {
        planner.plan_fft_forward(n)
    } else {
        planner.plan_fft_inverse(n)
    };
    let mut out = CMatrix::zeros(n, m.ncols());
    let mut buf: Vec<C64> = Vec::with_capacity(n);
    for col in 0..m.ncols() {
        buf.clear();
        buf.extend((0..n).map(|i| m[(i, col)]));
        fft.process(&mut buf);
        for i in 0..n {
            out[(i, col)] = buf[i];
        }
    }
    out
}

/// Signed mode index of coefficient slot `idx` in FFT ordering on N modes:
/// 0, 1, ..., floor(N/2), then negatives.
pub fn signed_mode(idx: usize, n: usize) -> i64 {
    let idx = idx as i64;
    let n = n as i64;
    if idx <= n / 2 {
        idx
    } else {
        idx - n
    }
}

/// Coefficient slot of signed mode `k` in FFT ordering (k must satisfy
/// -N/2 <= k <= N/2 up to aliasing; reduced mod N).
pub fn mode_slot(k: i64, n: usize) -> usize {
    (k.rem_euclid(n as i64)) as usize
}

/// Evaluate a coefficient stack (CircleModes) at an arbitrary unimodular
/// point by trigonometric interpolation with symmetric mode window.
pub fn eval_modes_at(coeffs: &CMatrix, omega: C64) -> nalgebra::DVector<C64> {
    let n = coeffs.nrows();
    let d = coeffs.ncols();
    let mut acc = nalgebra::DVector::<C64>::zeros(d);
    for idx in 0..n {
        let k = signed_mode(idx, n);
        let w = omega.powi(k as i32);
        for ch in 0..d {
            acc[ch] += coeffs[(idx, ch)] * w;
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opcore::linalg::max_abs;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha12Rng;

    #[test]
    fn constant_circle_function_has_unit_zeroth_coefficient() {
        let gf = GridFunction::circle_from_fn(8, |_| cr(1.0));
        let modes = fourier(&gf, FourierDirection::Forward).unwrap();
        assert!((modes.samples[(0, 0)] - cr(1.0)).norm() < 1e-14);
        for k in 1..8 {
            assert!(modes.samples[(k, 0)].norm() < 1e-14);
        }
    }

    #[test]
    fn grid_delta_on_line_has_flat_spectrum() {
        let n = 64;
        let h = 0.25;
        let x0 = -8.0;
        let mut gf = GridFunction::zeros(Domain::Line { n, h, x0, weight: LineWeight::Dx }, 1);
        // delta at x = 0 -> sample index 32
        gf.samples[(32, 0)] = cr(1.0);
        let hat = fourier(&gf, FourierDirection::Forward).unwrap();
        let mods: Vec<f64> = (0..n).map(|m| hat.samples[(m, 0)].norm()).collect();
        let first = mods[0];
        for m in mods {
            assert!((m - first).abs() < 1e-12);
        }
    }

    #[test]
    fn circle_parseval_and_roundtrip() {
        let mut rng = ChaCha12Rng::seed_from_u64(5);
        let n = 256;
        let samples = CMatrix::from_fn(n, 2, |_, _| {
            c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        });
        let gf = GridFunction::new(Domain::Circle { n }, samples).unwrap();
        let modes = fourier(&gf, FourierDirection::Forward).unwrap();
        assert!((gf.norm() - modes.norm()).abs() < 1e-10);
        let back = fourier(&modes, FourierDirection::Inverse).unwrap();
        assert!(max_abs(&(&back.samples - &gf.samples)) < 1e-10);
    }

    #[test]
    fn line_parseval_and_roundtrip() {
        let mut rng = ChaCha12Rng::seed_from_u64(6);
        let n = 128;
        let h = 0.125;
        let x0 = -8.0;
        let samples = CMatrix::from_fn(n, 1, |_, _| {
            c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        });
        let gf = GridFunction::new(Domain::Line { n, h, x0, weight: LineWeight::Dx }, samples).unwrap();
        let hat = fourier(&gf, FourierDirection::Forward).unwrap();
        assert!((gf.norm() - hat.norm()).abs() < 1e-10, "parseval");
        let back = fourier(&hat, FourierDirection::Inverse).unwrap();
        assert!(max_abs(&(&back.samples - &gf.samples)) < 1e-10, "roundtrip");
        match back.domain {
            Domain::Line { h: hb, x0: xb, .. } => {
                assert!((hb - h).abs() < 1e-12);
                assert!((xb - x0).abs() < 1e-9);
            }
            _ => panic!("wrong domain"),
        }
    }

    #[test]
    fn large_circle_roundtrip_stays_tight() {
        let mut rng = ChaCha12Rng::seed_from_u64(9);
        let n = 4096;
        let samples = CMatrix::from_fn(n, 1, |_, _| {
            c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        });
        let gf = GridFunction::new(Domain::Circle { n }, samples).unwrap();
        let modes = fourier(&gf, FourierDirection::Forward).unwrap();
        let back = fourier(&modes, FourierDirection::Inverse).unwrap();
        assert!(max_abs(&(&back.samples - &gf.samples)) < 1e-10);
    }

    #[test]
    fn trig_interpolation_matches_samples() {
        let n = 16;
        let gf = GridFunction::circle_from_fn(n, |w| w * w + cr(0.5) * w.conj());
        let modes = fourier(&gf, FourierDirection::Forward).unwrap();
        for j in 0..n {
            let w = gf.domain.circle_point(j);
            let v = eval_modes_at(&modes.samples, w);
            assert!((v[0] - gf.samples[(j, 0)]).norm() < 1e-12);
        }
    }

    #[test]
    fn mode_indexing_roundtrip() {
        for n in [7usize, 8] {
            for idx in 0..n {
                let k = signed_mode(idx, n);
                assert_eq!(mode_slot(k, n), idx);
            }
        }
    }
}
