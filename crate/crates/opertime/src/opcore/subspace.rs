//! Orthonormal subspace bases and subspace arithmetic.
//!
//! Rank decisions use a singular-value cutoff relative to the largest
//! singular value, so the routines are scale invariant. Intersections use
//! the two-projection alternating method with a fixed iteration cap; the
//! test suite cross-checks it against a direct nullspace computation.

use crate::error::{OperError, Result};
use crate::opcore::linalg::{cr, CMatrix, CVector};

/// Orthonormal column set spanning a subspace, with the tolerance that was
/// used for its rank decisions.
#[derive(Debug, Clone)]
pub struct SubspaceBasis {
    /// dim x r orthonormal columns.
    pub columns: CMatrix,
    pub tol: f64,
}

impl SubspaceBasis {
    /// Ambient dimension.
    pub fn dim(&self) -> usize {
        self.columns.nrows()
    }

    /// Subspace dimension (rank).
    pub fn rank(&self) -> usize {
        self.columns.ncols()
    }

    pub fn is_trivial(&self) -> bool {
        self.rank() == 0
    }

    /// Full space of the given ambient dimension.
    pub fn full(dim: usize) -> Self {
        Self {
            columns: CMatrix::identity(dim, dim),
            tol: 1e-12,
        }
    }

    /// Trivial subspace of the given ambient dimension.
    pub fn trivial(dim: usize) -> Self {
        Self {
            columns: CMatrix::zeros(dim, 0),
            tol: 1e-12,
        }
    }

    /// Span of the given coordinate indices.
    pub fn coordinate_span(dim: usize, indices: &[usize]) -> Self {
        let mut columns = CMatrix::zeros(dim, indices.len());
        for (c_idx, &i) in indices.iter().enumerate() {
            columns[(i, c_idx)] = cr(1.0);
        }
        Self {
            columns,
            tol: 1e-12,
        }
    }

    /// Max-abs deviation of columns^H columns from the identity.
    pub fn orthonormality_defect(&self) -> f64 {
        if self.rank() == 0 {
            return 0.0;
        }
        let g = self.columns.adjoint() * &self.columns;
        crate::opcore::linalg::identity_defect(&g)
    }

    /// Orthogonal projector onto the subspace as a dense matrix.
    pub fn projector(&self) -> CMatrix {
        if self.rank() == 0 {
            return CMatrix::zeros(self.dim(), self.dim());
        }
        &self.columns * self.columns.adjoint()
    }
}

/// Orthonormalize a set of vectors into a basis of their span.
///
/// Rank-deficient inputs are compressed; the rank cut is
/// `tol * sigma_max`. An empty input yields the trivial basis.
pub fn orthonormalize(vectors: &[CVector], tol: f64) -> Result<SubspaceBasis> {
    if vectors.is_empty() {
        return Ok(SubspaceBasis {
            columns: CMatrix::zeros(0, 0),
            tol,
        });
    }
    let dim = vectors[0].len();
    for v in vectors {
        if v.len() != dim {
            return Err(OperError::DimensionMismatch {
                expected: dim,
                got: v.len(),
            });
        }
    }
    let mut m = CMatrix::zeros(dim, vectors.len());
    for (j, v) in vectors.iter().enumerate() {
        m.set_column(j, v);
    }
    orthonormalize_columns(&m, tol)
}

/// Orthonormalize the columns of a matrix (SVD compression).
pub fn orthonormalize_columns(m: &CMatrix, tol: f64) -> Result<SubspaceBasis> {
    let dim = m.nrows();
    if m.ncols() == 0 || dim == 0 {
        return Ok(SubspaceBasis {
            columns: CMatrix::zeros(dim, 0),
            tol,
        });
    }
    let svd = m.clone().svd(true, false);
    let u = svd.u.as_ref().expect("svd with u");
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
    if smax == 0.0 {
        return Ok(SubspaceBasis {
            columns: CMatrix::zeros(dim, 0),
            tol,
        });
    }
    let rank = svd
        .singular_values
        .iter()
        .filter(|&&s| s > tol * smax)
        .count();
    Ok(SubspaceBasis {
        columns: u.columns(0, rank).into_owned(),
        tol,
    })
}

/// Range basis of a norm-bounded matrix with an absolute singular-value
/// cutoff. Appropriate for defect-type operators bounded by 1, where a
/// relative cutoff would inflate a numerically-zero matrix to full rank.
pub fn range_basis_abs(m: &CMatrix, abs_tol: f64) -> Result<SubspaceBasis> {
    let dim = m.nrows();
    if m.ncols() == 0 || dim == 0 {
        return Ok(SubspaceBasis {
            columns: CMatrix::zeros(dim, 0),
            tol: abs_tol,
        });
    }
    let svd = m.clone().svd(true, false);
    let u = svd.u.as_ref().expect("svd with u");
    let rank = svd
        .singular_values
        .iter()
        .filter(|&&s| s > abs_tol)
        .count();
    Ok(SubspaceBasis {
        columns: u.columns(0, rank).into_owned(),
        tol: abs_tol,
    })
}

/// Orthogonal projection of `v` onto the basis span: basis (basis^H v).
pub fn project(basis: &SubspaceBasis, v: &CVector) -> Result<CVector> {
    if basis.rank() == 0 {
        return Ok(CVector::zeros(v.len()));
    }
    if basis.dim() != v.len() {
        return Err(OperError::DimensionMismatch {
            expected: basis.dim(),
            got: v.len(),
        });
    }
    Ok(&basis.columns * (basis.columns.adjoint() * v))
}

/// Principal angles (radians, ascending) between two subspaces.
pub fn principal_angles(a: &SubspaceBasis, b: &SubspaceBasis) -> Vec<f64> {
    if a.rank() == 0 || b.rank() == 0 {
        return Vec::new();
    }
    let m = a.columns.adjoint() * &b.columns;
    let mut angles: Vec<f64> = m
        .svd(false, false)
        .singular_values
        .iter()
        .map(|&s| s.clamp(-1.0, 1.0).acos())
        .collect();
    angles.sort_by(f64::total_cmp);
    angles
}

/// Largest principal angle between equal-rank spans; inf if ranks differ.
pub fn max_principal_angle(a: &SubspaceBasis, b: &SubspaceBasis) -> f64 {
    if a.rank() != b.rank() {
        return f64::INFINITY;
    }
    principal_angles(a, b).last().copied().unwrap_or(0.0)
}

/// Operator-norm residual of the containment `a` inside `b`:
/// || (I - P_b) A ||.
pub fn containment_residual(a: &SubspaceBasis, b: &SubspaceBasis) -> f64 {
    if a.rank() == 0 {
        return 0.0;
    }
    let pa = &a.columns - &b.columns * (b.columns.adjoint() * &a.columns);
    crate::opcore::linalg::operator_norm(&pa)
}

/// Basis of the intersection of two subspaces.
///
/// Two-projection alternating method: iterate X <- P_a P_b X starting from
/// a basis of `a`, cap 50 sweeps, then keep the directions whose iterate
/// retained near-unit length (singular value above `1 - angle_tol`).
pub fn intersect(a: &SubspaceBasis, b: &SubspaceBasis, tol: f64) -> Result<SubspaceBasis> {
    if a.dim() != b.dim() {
        return Err(OperError::DimensionMismatch {
            expected: a.dim(),
            got: b.dim(),
        });
    }
    let dim = a.dim();
    if a.rank() == 0 || b.rank() == 0 {
        return Ok(SubspaceBasis {
            columns: CMatrix::zeros(dim, 0),
            tol,
        });
    }
    let mut x = a.columns.clone();
    let mut prev_defect = f64::INFINITY;
    for _ in 0..50 {
        // P_b then P_a, expressed through the thin factors.
        x = &b.columns * (b.columns.adjoint() * &x);
        x = &a.columns * (a.columns.adjoint() * &x);
        // Early exit once the iterate is numerically a projection fixed point.
        let defect = {
            let again_b = &b.columns * (b.columns.adjoint() * &x);
            crate::opcore::linalg::max_abs(&(&again_b - &x))
        };
        if defect < 1e-15 || (prev_defect - defect).abs() < 1e-16 {
            prev_defect = defect;
            break;
        }
        prev_defect = defect;
    }
    let _ = prev_defect;
    // Directions in the true intersection keep singular value 1; everything
    // else contracts by cos^100 of its principal angle.
    let svd = x.svd(true, false);
    let u = svd.u.as_ref().expect("svd with u");
    let keep = svd
        .singular_values
        .iter()
        .filter(|&&s| s > 1.0 - 1e-6)
        .count();
    let candidate = u.columns(0, keep).into_owned();
    // Polish: confirm each kept direction is in both spans within tol.
    let mut cols: Vec<CVector> = Vec::new();
    for j in 0..candidate.ncols() {
        let col: CVector = candidate.column(j).into_owned();
        let in_a = project(a, &col)?;
        let in_b = project(b, &col)?;
        if (&in_a - &col).norm() < 1e-7 && (&in_b - &col).norm() < 1e-7 {
            cols.push(col);
        }
    }
    orthonormalize(&cols, tol)
}

/// Basis of `outer` minus (orthocomplement of) `inner` inside it:
/// span of (I - P_inner) applied to the outer basis. The cutoff `tol` is
/// absolute: the outer basis columns are unit vectors, so residuals below
/// `tol` are cancellation noise, not complement directions.
pub fn complement_within(outer: &SubspaceBasis, inner: &SubspaceBasis, tol: f64) -> Result<SubspaceBasis> {
    if outer.rank() == 0 {
        return Ok(SubspaceBasis {
            columns: CMatrix::zeros(outer.dim(), 0),
            tol,
        });
    }
    let mut m = outer.columns.clone();
    if inner.rank() > 0 {
        if inner.dim() != outer.dim() {
            return Err(OperError::DimensionMismatch {
                expected: outer.dim(),
                got: inner.dim(),
            });
        }
        m -= &inner.columns * (inner.columns.adjoint() * &m);
    }
    range_basis_abs(&m, tol)
}

/// Span of the union of two subspaces.
pub fn union_span(a: &SubspaceBasis, b: &SubspaceBasis, tol: f64) -> Result<SubspaceBasis> {
    if a.rank() == 0 {
        return Ok(b.clone());
    }
    if b.rank() == 0 {
        return Ok(a.clone());
    }
    if a.dim() != b.dim() {
        return Err(OperError::DimensionMismatch {
            expected: a.dim(),
            got: b.dim(),
        });
    }
    let mut m = CMatrix::zeros(a.dim(), a.rank() + b.rank());
    for j in 0..a.rank() {
        m.set_column(j, &a.columns.column(j).into_owned());
    }
    for j in 0..b.rank() {
        m.set_column(a.rank() + j, &b.columns.column(j).into_owned());
    }
    orthonormalize_columns(&m, tol)
}

/// Direct nullspace-based intersection used as an independent oracle in
/// tests: the intersection of span(A) and span(B) is A z for null vectors
/// (z, w) of [A  -B].
pub fn intersect_via_nullspace(a: &SubspaceBasis, b: &SubspaceBasis, tol: f64) -> Result<SubspaceBasis> {
    if a.rank() == 0 || b.rank() == 0 {
        return Ok(SubspaceBasis {
            columns: CMatrix::zeros(a.dim(), 0),
            tol,
        });
    }
    let dim = a.dim();
    let ra = a.rank();
    let rb = b.rank();
    let mut stacked = CMatrix::zeros(dim, ra + rb);
    for j in 0..ra {
        stacked.set_column(j, &a.columns.column(j).into_owned());
    }
    for j in 0..rb {
        stacked.set_column(ra + j, &(-b.columns.column(j).into_owned()));
    }
    let svd = stacked.svd(false, true);
    let vt = svd.v_t.as_ref().expect("svd with v_t");
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let cut = 1e-9 * smax.max(1.0);
    let mut members: Vec<CVector> = Vec::new();
    for i in 0..svd.singular_values.len().min(vt.nrows()) {
        if svd.singular_values[i] <= cut {
            let z: CVector = vt.row(i).adjoint().rows(0, ra).into_owned();
            members.push(&a.columns * z);
        }
    }
    // Null rows beyond the singular value list (wide matrices).
    for i in svd.singular_values.len()..vt.nrows() {
        let z: CVector = vt.row(i).adjoint().rows(0, ra).into_owned();
        members.push(&a.columns * z);
    }
    orthonormalize(&members, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opcore::linalg::{c, cr, random_matrix};
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn v2(a: f64, b: f64) -> CVector {
        CVector::from_vec(vec![cr(a), cr(b)])
    }

    #[test]
    fn collinear_vectors_compress_to_rank_one() {
        let basis = orthonormalize(&[v2(1.0, 0.0), v2(2.0, 0.0)], 1e-10).unwrap();
        assert_eq!(basis.rank(), 1);
        assert!((basis.columns[(0, 0)].norm() - 1.0).abs() < 1e-12);
        assert!(basis.columns[(1, 0)].norm() < 1e-12);
    }

    #[test]
    fn already_orthonormal_input_keeps_rank() {
        let basis = orthonormalize(&[v2(1.0, 0.0), v2(0.0, 1.0)], 1e-10).unwrap();
        assert_eq!(basis.rank(), 2);
        assert!(basis.orthonormality_defect() < 1e-12);
    }

    #[test]
    fn gram_matrix_is_identity_for_skew_input() {
        let basis = orthonormalize(&[v2(1.0, 1.0), v2(1.0, -1.0)], 1e-10).unwrap();
        assert_eq!(basis.rank(), 2);
        assert!(basis.orthonormality_defect() < 1e-12);
    }

    #[test]
    fn empty_input_yields_rank_zero() {
        let basis = orthonormalize(&[], 1e-10).unwrap();
        assert_eq!(basis.rank(), 0);
    }

    #[test]
    fn projection_onto_first_coordinate() {
        let basis = orthonormalize(&[v2(1.0, 0.0)], 1e-10).unwrap();
        let p = project(&basis, &v2(3.0, 4.0)).unwrap();
        assert!((p[0] - cr(3.0)).norm() < 1e-12);
        assert!(p[1].norm() < 1e-12);
    }

    #[test]
    fn projection_onto_full_space_is_identity() {
        let basis = SubspaceBasis::full(4);
        let v = CVector::from_vec(vec![c(1.0, 2.0), cr(0.5), c(0.0, -3.0), cr(7.0)]);
        let p = project(&basis, &v).unwrap();
        assert!((&p - &v).norm() < 1e-12);
    }

    #[test]
    fn projection_residual_is_orthogonal_to_projection() {
        let mut rng = ChaCha12Rng::seed_from_u64(17);
        let m = random_matrix(&mut rng, 6, 3);
        let basis = orthonormalize_columns(&m, 1e-10).unwrap();
        for _ in 0..8 {
            let v: CVector = random_matrix(&mut rng, 6, 1).column(0).into_owned();
            let pv = project(&basis, &v).unwrap();
            let residual = &v - &pv;
            let inner: C64 = residual.dotc(&pv);
            assert!(inner.norm() < 1e-12);
        }
    }

    use crate::opcore::linalg::C64;

    #[test]
    fn projector_is_idempotent_and_hermitian() {
        let mut rng = ChaCha12Rng::seed_from_u64(23);
        let m = random_matrix(&mut rng, 7, 4);
        let basis = orthonormalize_columns(&m, 1e-10).unwrap();
        let p = basis.projector();
        assert!(crate::opcore::linalg::max_abs(&(&p * &p - &p)) < 1e-12);
        assert!(crate::opcore::linalg::hermitian_defect(&p) < 1e-12);
    }

    #[test]
    fn orthonormalize_is_idempotent_on_the_span() {
        let mut rng = ChaCha12Rng::seed_from_u64(29);
        let m = random_matrix(&mut rng, 8, 5);
        let b1 = orthonormalize_columns(&m, 1e-10).unwrap();
        let b2 = orthonormalize_columns(&b1.columns, 1e-10).unwrap();
        assert_eq!(b1.rank(), b2.rank());
        assert!(max_principal_angle(&b1, &b2) < 1e-10);
    }

    #[test]
    fn intersection_of_coordinate_planes() {
        let a = SubspaceBasis::coordinate_span(4, &[0, 1, 2]);
        let b = SubspaceBasis::coordinate_span(4, &[1, 2, 3]);
        let cap = intersect(&a, &b, 1e-10).unwrap();
        assert_eq!(cap.rank(), 2);
        let expected = SubspaceBasis::coordinate_span(4, &[1, 2]);
        assert!(max_principal_angle(&cap, &expected) < 1e-8);
    }

    #[test]
    fn alternating_intersection_matches_nullspace_oracle() {
        let mut rng = ChaCha12Rng::seed_from_u64(31);
        for _ in 0..6 {
            let shared = random_matrix(&mut rng, 9, 2);
            let mut acols = random_matrix(&mut rng, 9, 4);
            let mut bcols = random_matrix(&mut rng, 9, 4);
            acols.set_column(0, &shared.column(0).into_owned());
            acols.set_column(1, &shared.column(1).into_owned());
            bcols.set_column(0, &shared.column(0).into_owned());
            bcols.set_column(1, &shared.column(1).into_owned());
            let a = orthonormalize_columns(&acols, 1e-10).unwrap();
            let b = orthonormalize_columns(&bcols, 1e-10).unwrap();
            let alt = intersect(&a, &b, 1e-10).unwrap();
            let oracle = intersect_via_nullspace(&a, &b, 1e-10).unwrap();
            assert_eq!(alt.rank(), 2, "alternating rank");
            assert_eq!(oracle.rank(), 2, "oracle rank");
            assert!(max_principal_angle(&alt, &oracle) < 1e-6);
        }
    }

    #[test]
    fn complement_within_splits_dimensions() {
        let outer = SubspaceBasis::coordinate_span(5, &[0, 1, 2]);
        let inner = SubspaceBasis::coordinate_span(5, &[1]);
        let comp = complement_within(&outer, &inner, 1e-10).unwrap();
        assert_eq!(comp.rank(), 2);
        let expected = SubspaceBasis::coordinate_span(5, &[0, 2]);
        assert!(max_principal_angle(&comp, &expected) < 1e-10);
    }
}
