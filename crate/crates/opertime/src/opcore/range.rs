//! Range functions: per-grid-point orthogonal projections on a circle grid.

use crate::error::{OperError, Result};
use crate::opcore::linalg::{hermitian_defect, max_abs, CMatrix};

/// A range function on an N-point circle grid: one d x d orthogonal
/// projection per grid point. The discrete stand-in for a measurable
/// assignment of closed fiber subspaces.
#[derive(Debug, Clone)]
pub struct RangeFunction {
    pub n_points: usize,
    pub fiber_dim: usize,
    pub projections: Vec<CMatrix>,
}

impl RangeFunction {
    pub fn new(projections: Vec<CMatrix>) -> Result<Self> {
        let n_points = projections.len();
        if n_points == 0 {
            return Err(OperError::InvalidInput {
                detail: "range function needs at least one grid point".into(),
            });
        }
        let fiber_dim = projections[0].nrows();
        for p in &projections {
            if p.nrows() != fiber_dim || p.ncols() != fiber_dim {
                return Err(OperError::DimensionMismatch {
                    expected: fiber_dim,
                    got: p.nrows(),
                });
            }
        }
        Ok(Self {
            n_points,
            fiber_dim,
            projections,
        })
    }

    /// Constant full-fiber range function.
    pub fn full(n_points: usize, fiber_dim: usize) -> Self {
        Self {
            n_points,
            fiber_dim,
            projections: vec![CMatrix::identity(fiber_dim, fiber_dim); n_points],
        }
    }

    /// Constant trivial range function.
    pub fn trivial(n_points: usize, fiber_dim: usize) -> Self {
        Self {
            n_points,
            fiber_dim,
            projections: vec![CMatrix::zeros(fiber_dim, fiber_dim); n_points],
        }
    }

    /// Worst pointwise deviation from Hermitian idempotency.
    pub fn projection_defect(&self) -> f64 {
        self.projections
            .iter()
            .map(|p| {
                let idem = max_abs(&(p * p - p));
                idem.max(hermitian_defect(p))
            })
            .fold(0.0, f64::max)
    }

    /// Rank at each grid point (trace of the projection, rounded).
    pub fn ranks(&self) -> Vec<usize> {
        self.projections
            .iter()
            .map(|p| {
                let tr: f64 = (0..p.nrows()).map(|i| p[(i, i)].re).sum();
                tr.round().max(0.0) as usize
            })
            .collect()
    }

    /// Worst pointwise product norm ||J(w_j) K(w_j)||; zero when the two
    /// range functions are orthogonal almost everywhere in the grid sense.
    pub fn orthogonality_residual(&self, other: &RangeFunction) -> Result<f64> {
        if self.n_points != other.n_points || self.fiber_dim != other.fiber_dim {
            return Err(OperError::GridMismatch {
                detail: format!(
                    "range functions on {}x{} vs {}x{}",
                    self.n_points, self.fiber_dim, other.n_points, other.fiber_dim
                ),
            });
        }
        Ok(self
            .projections
            .iter()
            .zip(&other.projections)
            .map(|(a, b)| max_abs(&(a * b)))
            .fold(0.0, f64::max))
    }

    /// Pointwise difference report: grid indices where the two range
    /// functions differ beyond `tol` (no almost-everywhere quotient exists
    /// on a grid, so callers get the raw diff).
    pub fn pointwise_diff(&self, other: &RangeFunction, tol: f64) -> Result<Vec<usize>> {
        if self.n_points != other.n_points || self.fiber_dim != other.fiber_dim {
            return Err(OperError::GridMismatch {
                detail: "pointwise diff of incompatible range functions".into(),
            });
        }
        Ok(self
            .projections
            .iter()
            .zip(&other.projections)
            .enumerate()
            .filter(|(_, (a, b))| max_abs(&(*a - *b)) > tol)
            .map(|(j, _)| j)
            .collect())
    }
}
