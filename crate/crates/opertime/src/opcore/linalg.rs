//! Dense complex linear algebra kernel.
//!
//! Everything downstream works with `DMatrix<Complex<f64>>`. This module
//! collects the handful of factorization-level helpers the models need:
//! operator norms, Hermitian square roots, linear solves with condition
//! reporting, matrix exponentials, and a general complex eigenvalue solver
//! (Hessenberg reduction + shifted QR; nalgebra's Schur does not converge
//! on permutation-like spectra with equal moduli).

use crate::error::{OperError, Result};
use nalgebra::{Complex, DMatrix, DVector};
use rand::Rng;

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn cr(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// Largest singular value.
pub fn operator_norm(m: &CMatrix) -> f64 {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0.0;
    }
    m.clone().singular_values()[0]
}

pub fn frobenius_norm(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn max_abs_vec(v: &CVector) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Deviation of `m` from the identity in max-abs.
pub fn identity_defect(m: &CMatrix) -> f64 {
    let id = CMatrix::identity(m.nrows(), m.ncols());
    max_abs(&(m - id))
}

/// Deviation of `m` from unitarity: max-abs of m^H m - I.
pub fn unitary_defect(m: &CMatrix) -> f64 {
    identity_defect(&(m.adjoint() * m))
}

/// Deviation from Hermitian symmetry in max-abs.
pub fn hermitian_defect(m: &CMatrix) -> f64 {
    max_abs(&(m - m.adjoint()))
}

/// Condition number sigma_max / sigma_min; infinite when singular.
pub fn condition_number(m: &CMatrix) -> f64 {
    let sv = m.clone().singular_values();
    let smax = sv[0];
    let smin = sv[sv.len() - 1];
    if smin == 0.0 {
        f64::INFINITY
    } else {
        smax / smin
    }
}

/// Solve A X = B, reporting singularity through the error channel.
pub fn solve(a: &CMatrix, b: &CMatrix, context: &str) -> Result<CMatrix> {
    let lu = a.clone().lu();
    lu.solve(b).ok_or_else(|| OperError::Singular {
        detail: context.to_string(),
    })
}

/// Hermitian square root of a PSD matrix. Eigenvalues are clipped to
/// `[0, clip_max]` before the square root so that roundoff-negative or
/// slightly-over-one defect spectra stay admissible.
pub fn hermitian_sqrt_clipped(m: &CMatrix, clip_max: f64) -> CMatrix {
    let n = m.nrows();
    if n == 0 {
        return m.clone();
    }
    let herm = (m + m.adjoint()).scale(0.5);
    let eig = herm.symmetric_eigen();
    let mut d = CMatrix::zeros(n, n);
    for i in 0..n {
        let lam = eig.eigenvalues[i].clamp(0.0, clip_max);
        d[(i, i)] = cr(lam.sqrt());
    }
    &eig.eigenvectors * d * eig.eigenvectors.adjoint()
}

/// Matrix exponential (nalgebra's Pade scaling-and-squaring).
pub fn matrix_exp(m: &CMatrix) -> CMatrix {
    m.exp()
}

/// Eigenvalues of a general complex square matrix.
///
/// Hessenberg reduction by Householder reflections, then shifted QR with
/// Wilkinson shifts and periodic exceptional shifts. Returns the
/// eigenvalues in no particular order.
pub fn eigenvalues(m: &CMatrix) -> Result<Vec<C64>> {
    let n = m.nrows();
    if n != m.ncols() {
        return Err(OperError::DimensionMismatch {
            expected: n,
            got: m.ncols(),
        });
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    if n == 1 {
        return Ok(vec![m[(0, 0)]]);
    }
    // Hermitian fast path: the symmetric solver is exact and cheap.
    let scale = max_abs(m).max(1.0);
    if hermitian_defect(m) <= 1e-13 * scale {
        let eig = (m + m.adjoint()).scale(0.5).symmetric_eigen();
        return Ok(eig.eigenvalues.iter().map(|&l| cr(l)).collect());
    }
    let mut h = hessenberg(m);
    qr_eigenvalues(&mut h)
}

/// Eigenvalues sorted by phase in `[-pi, pi)`; intended for unitary spectra.
pub fn eigenphases(m: &CMatrix) -> Result<Vec<f64>> {
    let mut phases: Vec<f64> = eigenvalues(m)?.iter().map(|z| z.arg()).collect();
    phases.sort_by(f64::total_cmp);
    Ok(phases)
}

fn hessenberg(m: &CMatrix) -> CMatrix {
    let n = m.nrows();
    let mut h = m.clone();
    for k in 0..n.saturating_sub(2) {
        // Householder vector for column k below the subdiagonal.
        let x = h.view((k + 1, k), (n - k - 1, 1)).into_owned();
        let norm = x.norm();
        if norm <= f64::MIN_POSITIVE {
            continue;
        }
        let alpha = x[(0, 0)];
        let phase = if alpha.norm() == 0.0 {
            cr(1.0)
        } else {
            alpha / cr(alpha.norm())
        };
        let mut v = x;
        v[(0, 0)] += phase * cr(norm);
        let vnorm2 = v.iter().map(|z| z.norm_sqr()).sum::<f64>();
        if vnorm2 <= f64::MIN_POSITIVE {
            continue;
        }
        let tau = cr(2.0 / vnorm2);
        // Left: rows k+1.., all columns.
        let sub = h.view((k + 1, 0), (n - k - 1, n)).into_owned();
        let w = v.adjoint() * &sub;
        let update = &v * w;
        for i in 0..n - k - 1 {
            for j in 0..n {
                h[(k + 1 + i, j)] -= tau * update[(i, j)];
            }
        }
        // Right: all rows, columns k+1...
        let sub = h.view((0, k + 1), (n, n - k - 1)).into_owned();
        let w = &sub * &v;
        for i in 0..n {
            for j in 0..n - k - 1 {
                h[(i, k + 1 + j)] -= tau * w[(i, 0)] * v[(j, 0)].conj();
            }
        }
        // Clean the annihilated entries.
        for i in k + 2..n {
            h[(i, k)] = cr(0.0);
        }
    }
    h
}

fn wilkinson_shift(a: C64, b: C64, c_: C64, d: C64) -> C64 {
    // Eigenvalue of [[a, b], [c_, d]] closest to d.
    let tr_half = (a - d) * cr(0.5);
    let disc = (tr_half * tr_half + b * c_).sqrt();
    let mu1 = d + tr_half + disc;
    let mu2 = d + tr_half - disc;
    if (mu1 - d).norm() < (mu2 - d).norm() {
        mu1
    } else {
        mu2
    }
}

fn qr_eigenvalues(h: &mut CMatrix) -> Result<Vec<C64>> {
    let n = h.nrows();
    let mut hi = n - 1;
    let mut iter_this_block = 0usize;
    let mut total_iter = 0usize;
    let max_total = 40 * n.max(10);
    let eps = f64::EPSILON;

    loop {
        // Deflate all negligible subdiagonals.
        for i in 1..=hi {
            let s = h[(i - 1, i - 1)].norm() + h[(i, i)].norm();
            let s = if s == 0.0 { 1.0 } else { s };
            if h[(i, i - 1)].norm() <= eps * s {
                h[(i, i - 1)] = cr(0.0);
            }
        }
        // Shrink the active block from the bottom.
        while hi > 0 && h[(hi, hi - 1)].norm() == 0.0 {
            hi -= 1;
            iter_this_block = 0;
        }
        if hi == 0 {
            break;
        }
        // Find the start of the active block.
        let mut lo = hi;
        while lo > 0 && h[(lo, lo - 1)].norm() != 0.0 {
            lo -= 1;
        }

        total_iter += 1;
        iter_this_block += 1;
        if total_iter > max_total {
            return Err(OperError::EigenNoConvergence {
                iterations: total_iter,
            });
        }

        let mu = if iter_this_block % 12 == 0 {
            // Exceptional shift to break equal-modulus symmetry.
            h[(hi, hi)] + cr(0.75 * h[(hi, hi - 1)].norm()) + c(0.0, 0.33 * h[(hi, hi - 1)].norm())
        } else {
            wilkinson_shift(
                h[(hi - 1, hi - 1)],
                h[(hi - 1, hi)],
                h[(hi, hi - 1)],
                h[(hi, hi)],
            )
        };

        // Explicit shifted QR sweep on the active block via Givens rotations.
        for i in lo..=hi {
            h[(i, i)] -= mu;
        }
        let mut rotations: Vec<(usize, C64, C64)> = Vec::with_capacity(hi - lo);
        for k in lo..hi {
            let a = h[(k, k)];
            let b = h[(k + 1, k)];
            let r = (a.norm_sqr() + b.norm_sqr()).sqrt();
            if r <= f64::MIN_POSITIVE {
                continue;
            }
            let ca = a.conj() / cr(r);
            let cb = b.conj() / cr(r);
            // Apply G = [[ca, cb], [-conj(cb)... ]] rows k, k+1.
            for j in k..n {
                let x = h[(k, j)];
                let y = h[(k + 1, j)];
                h[(k, j)] = ca * x + cb * y;
                h[(k + 1, j)] = -cb.conj() * x + ca.conj() * y;
            }
            rotations.push((k, ca, cb));
        }
        for &(k, ca, cb) in &rotations {
            // Apply G^H on columns k, k+1.
            let top = (k + 2).min(hi);
            for i in 0..=top {
                let x = h[(i, k)];
                let y = h[(i, k + 1)];
                h[(i, k)] = x * ca.conj() + y * cb.conj();
                h[(i, k + 1)] = x * -cb + y * ca;
            }
        }
        for i in lo..=hi {
            h[(i, i)] += mu;
        }
    }

    Ok((0..n).map(|i| h[(i, i)]).collect())
}

/// Minimum distance from the point `z` to the spectrum.
pub fn spectral_distance(m: &CMatrix, z: C64) -> Result<f64> {
    Ok(eigenvalues(m)?
        .iter()
        .map(|l| (l - z).norm())
        .fold(f64::INFINITY, f64::min))
}

/// Spectral radius (largest eigenvalue modulus).
pub fn spectral_radius(m: &CMatrix) -> Result<f64> {
    Ok(eigenvalues(m)?
        .iter()
        .map(|l| l.norm())
        .fold(0.0, f64::max))
}

/// Seeded random matrix with i.i.d. complex entries in the unit box.
pub fn random_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| {
        c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    })
}

/// Seeded random Hermitian matrix with spectrum in roughly [-1, 1].
pub fn random_hermitian<R: Rng>(rng: &mut R, n: usize) -> CMatrix {
    let m = random_matrix(rng, n, n);
    (&m + m.adjoint()).scale(0.5 / (n as f64).sqrt())
}

/// Seeded random unitary via QR of a random matrix.
pub fn random_unitary<R: Rng>(rng: &mut R, n: usize) -> CMatrix {
    let m = random_matrix(rng, n, n);
    let qr = m.qr();
    let mut q = qr.q();
    let r = qr.r();
    // Fix column phases so the factor is unique and well-spread.
    for j in 0..n {
        let d = r[(j, j)];
        if d.norm() > 0.0 {
            let phase = d / cr(d.norm());
            for i in 0..n {
                q[(i, j)] *= phase;
            }
        }
    }
    q
}

/// Seeded random strict contraction with operator norm at most `target < 1`.
pub fn random_contraction<R: Rng>(rng: &mut R, n: usize, target: f64) -> CMatrix {
    let m = random_matrix(rng, n, n);
    let norm = operator_norm(&m);
    if norm == 0.0 {
        return m;
    }
    m.scale(target / norm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;
    use std::f64::consts::PI;

    fn cyclic_shift_matrix(n: usize) -> CMatrix {
        CMatrix::from_fn(n, n, |i, j| if j == (i + 1) % n { cr(1.0) } else { cr(0.0) })
    }

    #[test]
    fn eigenvalues_of_cyclic_shift_are_roots_of_unity() {
        for n in [2usize, 5, 8, 16] {
            let eigs = eigenvalues(&cyclic_shift_matrix(n)).unwrap();
            assert_eq!(eigs.len(), n);
            // Each root of unity must be hit by exactly one eigenvalue;
            // compare as complex points to avoid the phase cut at pi.
            let mut used = vec![false; n];
            for k in 0..n {
                let theta = 2.0 * PI * k as f64 / n as f64;
                let root = c(theta.cos(), theta.sin());
                let (idx, dist) = eigs
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| !used[*i])
                    .map(|(i, z)| (i, (z - root).norm()))
                    .min_by(|a, b| a.1.total_cmp(&b.1))
                    .unwrap();
                assert!(dist < 1e-10, "n={n}, k={k}: distance {dist}");
                used[idx] = true;
            }
        }
    }

    #[test]
    fn eigenvalues_of_triangular_matrix_are_diagonal() {
        let m = CMatrix::from_row_slice(
            3,
            3,
            &[
                c(1.0, 2.0),
                c(5.0, 0.0),
                c(1.0, 1.0),
                cr(0.0),
                c(-0.5, 0.25),
                c(2.0, -1.0),
                cr(0.0),
                cr(0.0),
                c(0.0, 3.0),
            ],
        );
        let mut eigs = eigenvalues(&m).unwrap();
        eigs.sort_by(|a, b| a.re.total_cmp(&b.re));
        let mut want = [c(1.0, 2.0), c(-0.5, 0.25), c(0.0, 3.0)];
        want.sort_by(|a, b| a.re.total_cmp(&b.re));
        for (g, w) in eigs.iter().zip(&want) {
            assert!((g - w).norm() < 1e-10);
        }
    }

    #[test]
    fn eigenvalues_match_planted_diagonalizable_spectrum() {
        let mut rng = ChaCha12Rng::seed_from_u64(7);
        let n = 6;
        let planted: Vec<C64> = (0..n)
            .map(|k| c(0.3 * k as f64 - 1.0, 0.2 * (k as f64).sin()))
            .collect();
        let v = random_matrix(&mut rng, n, n) + CMatrix::identity(n, n).scale(3.0);
        let d = CMatrix::from_fn(n, n, |i, j| if i == j { planted[i] } else { cr(0.0) });
        let vinv = solve(&v, &CMatrix::identity(n, n), "test").unwrap();
        let m = &v * d * vinv;
        let mut eigs = eigenvalues(&m).unwrap();
        eigs.sort_by(|a, b| a.re.total_cmp(&b.re));
        let mut want = planted.clone();
        want.sort_by(|a, b| a.re.total_cmp(&b.re));
        for (g, w) in eigs.iter().zip(&want) {
            assert!((g - w).norm() < 1e-8, "{g} vs {w}");
        }
    }

    #[test]
    fn eigenvalues_agree_with_hermitian_solver() {
        let mut rng = ChaCha12Rng::seed_from_u64(11);
        let h = random_hermitian(&mut rng, 8);
        // Force the general path by adding a tiny non-Hermitian perturbation.
        let mut g = h.clone();
        g[(0, 1)] += c(1e-9, 1e-9);
        let mut got: Vec<f64> = eigenvalues(&g).unwrap().iter().map(|z| z.re).collect();
        got.sort_by(f64::total_cmp);
        let mut want: Vec<f64> = h.symmetric_eigen().eigenvalues.iter().copied().collect();
        want.sort_by(f64::total_cmp);
        for (g, w) in got.iter().zip(&want) {
            assert!((g - w).abs() < 1e-7);
        }
    }

    #[test]
    fn hermitian_sqrt_squares_back() {
        let mut rng = ChaCha12Rng::seed_from_u64(3);
        let a = random_matrix(&mut rng, 5, 5);
        let psd = &a * a.adjoint();
        let psd = psd.scale(1.0 / operator_norm(&psd));
        let root = hermitian_sqrt_clipped(&psd, f64::INFINITY);
        assert!(max_abs(&(&root * &root - &psd)) < 1e-10);
        assert!(hermitian_defect(&root) < 1e-12);
    }

    #[test]
    fn matrix_exp_on_nilpotent_block() {
        let m = CMatrix::from_row_slice(2, 2, &[cr(0.0), cr(1.0), cr(0.0), cr(0.0)]);
        let e = matrix_exp(&m);
        assert!(max_abs(&(e - CMatrix::from_row_slice(2, 2, &[cr(1.0), cr(1.0), cr(0.0), cr(1.0)]))) < 1e-14);
    }

    #[test]
    fn random_unitary_is_unitary() {
        let mut rng = ChaCha12Rng::seed_from_u64(21);
        let u = random_unitary(&mut rng, 7);
        assert!(unitary_defect(&u) < 1e-12);
    }

    #[test]
    fn solve_reports_singularity() {
        let m = CMatrix::zeros(3, 3);
        let b = CMatrix::identity(3, 3);
        assert!(solve(&m, &b, "singular test").is_err());
    }
}
