//! Tagged operator representations.
//!
//! Structured variants keep the exact algebra of the infinite models they
//! stand in for: the cyclic shift is exactly unitary, the truncated
//! forward shift is isometric except on the top boundary sample, and the
//! truncated backward shift is co-isometric except on the bottom sample.
//! Every representation carries a `boundary_radius`, the width of the
//! sample band a single application can contaminate; compositions add the
//! radii of their children.

use crate::error::{OperError, Result};
use crate::opcore::linalg::{cr, CMatrix, CVector, C64};

/// Operator on a finite coordinate space, in one of several carriers.
#[derive(Debug, Clone)]
pub enum OperatorRep {
    /// Dense matrix with an optional declared contamination radius.
    Dense { matrix: CMatrix, boundary_radius: usize },
    /// Exact cyclic block shift on `blocks` blocks of `block_size`
    /// coordinates: block b of the output is block b + power (mod blocks)
    /// of the input.
    CyclicShift {
        blocks: usize,
        block_size: usize,
        power: i64,
    },
    /// Truncated forward shift e_j -> e_{j+1}, top sample annihilated.
    TruncShiftFwd { dim: usize },
    /// Truncated backward shift e_j -> e_{j-1}, bottom sample annihilated.
    TruncShiftBwd { dim: usize },
    /// Pointwise multiplication by a sampled matrix symbol on stacked grid
    /// vectors (point-major layout, fiber `block_size`).
    MulSymbol { symbols: Vec<CMatrix> },
    /// Sum of operators of equal dimension.
    Sum(Vec<OperatorRep>),
    /// Composition, applied right to left.
    Compose(Vec<OperatorRep>),
}

impl OperatorRep {
    pub fn dense(matrix: CMatrix) -> Self {
        OperatorRep::Dense {
            matrix,
            boundary_radius: 0,
        }
    }

    pub fn identity(dim: usize) -> Self {
        OperatorRep::dense(CMatrix::identity(dim, dim))
    }

    /// Scalar cyclic shift by one step on `n` coordinates.
    pub fn cyclic_shift(n: usize) -> Self {
        OperatorRep::CyclicShift {
            blocks: n,
            block_size: 1,
            power: 1,
        }
    }

    /// Diagonal multiplication operator from scalar samples.
    pub fn diagonal(values: &[C64]) -> Self {
        OperatorRep::MulSymbol {
            symbols: values
                .iter()
                .map(|&v| CMatrix::from_element(1, 1, v))
                .collect(),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            OperatorRep::Dense { matrix, .. } => matrix.nrows(),
            OperatorRep::CyclicShift {
                blocks, block_size, ..
            } => blocks * block_size,
            OperatorRep::TruncShiftFwd { dim } | OperatorRep::TruncShiftBwd { dim } => *dim,
            OperatorRep::MulSymbol { symbols } => {
                symbols.len() * symbols.first().map_or(0, |s| s.nrows())
            }
            OperatorRep::Sum(children) | OperatorRep::Compose(children) => {
                children.first().map_or(0, |c| c.dim())
            }
        }
    }

    /// Width of the boundary band one application can contaminate.
    /// Compositions accumulate the radii of their children.
    pub fn boundary_radius(&self) -> usize {
        match self {
            OperatorRep::Dense {
                boundary_radius, ..
            } => *boundary_radius,
            OperatorRep::CyclicShift { .. } => 0,
            OperatorRep::TruncShiftFwd { .. } | OperatorRep::TruncShiftBwd { .. } => 1,
            OperatorRep::MulSymbol { .. } => 0,
            OperatorRep::Sum(children) => children
                .iter()
                .map(OperatorRep::boundary_radius)
                .max()
                .unwrap_or(0),
            OperatorRep::Compose(children) => {
                children.iter().map(OperatorRep::boundary_radius).sum()
            }
        }
    }

    pub fn apply(&self, v: &CVector) -> Result<CVector> {
        let n = self.dim();
        if v.len() != n {
            return Err(OperError::DimensionMismatch {
                expected: n,
                got: v.len(),
            });
        }
        Ok(match self {
            OperatorRep::Dense { matrix, .. } => matrix * v,
            OperatorRep::CyclicShift {
                blocks,
                block_size,
                power,
            } => {
                let mut out = CVector::zeros(n);
                let b = *blocks as i64;
                for blk in 0..*blocks {
                    let src = ((blk as i64 + power).rem_euclid(b)) as usize;
                    for k in 0..*block_size {
                        out[blk * block_size + k] = v[src * block_size + k];
                    }
                }
                out
            }
            OperatorRep::TruncShiftFwd { dim } => {
                let mut out = CVector::zeros(*dim);
                for j in 1..*dim {
                    out[j] = v[j - 1];
                }
                out
            }
            OperatorRep::TruncShiftBwd { dim } => {
                let mut out = CVector::zeros(*dim);
                for j in 0..dim - 1 {
                    out[j] = v[j + 1];
                }
                out
            }
            OperatorRep::MulSymbol { symbols } => {
                let d = symbols[0].nrows();
                let mut out = CVector::zeros(n);
                for (p, s) in symbols.iter().enumerate() {
                    let chunk = v.rows(p * d, d).into_owned();
                    let res = s * chunk;
                    for k in 0..d {
                        out[p * d + k] = res[k];
                    }
                }
                out
            }
            OperatorRep::Sum(children) => {
                let mut out = CVector::zeros(n);
                for ch in children {
                    out += ch.apply(v)?;
                }
                out
            }
            OperatorRep::Compose(children) => {
                let mut cur = v.clone();
                for ch in children.iter().rev() {
                    cur = ch.apply(&cur)?;
                }
                cur
            }
        })
    }

    /// Adjoint representation.
    pub fn adjoint(&self) -> OperatorRep {
        match self {
            OperatorRep::Dense {
                matrix,
                boundary_radius,
            } => OperatorRep::Dense {
                matrix: matrix.adjoint(),
                boundary_radius: *boundary_radius,
            },
            OperatorRep::CyclicShift {
                blocks,
                block_size,
                power,
            } => OperatorRep::CyclicShift {
                blocks: *blocks,
                block_size: *block_size,
                power: -power,
            },
            OperatorRep::TruncShiftFwd { dim } => OperatorRep::TruncShiftBwd { dim: *dim },
            OperatorRep::TruncShiftBwd { dim } => OperatorRep::TruncShiftFwd { dim: *dim },
            OperatorRep::MulSymbol { symbols } => OperatorRep::MulSymbol {
                symbols: symbols.iter().map(CMatrix::adjoint).collect(),
            },
            OperatorRep::Sum(children) => {
                OperatorRep::Sum(children.iter().map(OperatorRep::adjoint).collect())
            }
            OperatorRep::Compose(children) => OperatorRep::Compose(
                children.iter().rev().map(OperatorRep::adjoint).collect(),
            ),
        }
    }

    /// Materialize as a dense matrix (column by column).
    pub fn to_dense(&self) -> Result<CMatrix> {
        if let OperatorRep::Dense { matrix, .. } = self {
            return Ok(matrix.clone());
        }
        let n = self.dim();
        let mut m = CMatrix::zeros(n, n);
        let mut e = CVector::zeros(n);
        for j in 0..n {
            e[j] = cr(1.0);
            let col = self.apply(&e)?;
            m.set_column(j, &col);
            e[j] = cr(0.0);
        }
        Ok(m)
    }

    /// Operator norm (via the dense carrier).
    pub fn operator_norm(&self) -> Result<f64> {
        match self {
            OperatorRep::CyclicShift { .. } => Ok(1.0),
            OperatorRep::TruncShiftFwd { .. } | OperatorRep::TruncShiftBwd { .. } => Ok(1.0),
            _ => Ok(crate::opcore::linalg::operator_norm(&self.to_dense()?)),
        }
    }

    /// Structural exact unitarity; dense carriers are tested numerically.
    pub fn is_exactly_unitary(&self, tol: f64) -> bool {
        match self {
            OperatorRep::CyclicShift { .. } => true,
            OperatorRep::TruncShiftFwd { .. } | OperatorRep::TruncShiftBwd { .. } => false,
            OperatorRep::MulSymbol { symbols } => symbols
                .iter()
                .all(|s| crate::opcore::linalg::unitary_defect(s) <= tol),
            _ => match self.to_dense() {
                Ok(m) => crate::opcore::linalg::unitary_defect(&m) <= tol,
                Err(_) => false,
            },
        }
    }

    /// Guard used by the dilation-theoretic constructions.
    pub fn require_contraction(&self, slack: f64) -> Result<()> {
        let norm = self.operator_norm()?;
        if norm > 1.0 + slack {
            Err(OperError::NotAContraction { norm })
        } else {
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opcore::linalg::{c, max_abs, unitary_defect};

    #[test]
    fn cyclic_shift_is_exactly_unitary() {
        let s = OperatorRep::cyclic_shift(6);
        let m = s.to_dense().unwrap();
        assert_eq!(unitary_defect(&m), 0.0);
        // adjoint undoes the shift exactly
        let v = CVector::from_fn(6, |i, _| c(i as f64, -(i as f64)));
        let w = s.adjoint().apply(&s.apply(&v).unwrap()).unwrap();
        assert_eq!((w - v).norm(), 0.0);
    }

    #[test]
    fn truncated_shifts_have_one_defect_sample() {
        let fwd = OperatorRep::TruncShiftFwd { dim: 5 };
        let m = fwd.to_dense().unwrap();
        let g = m.adjoint() * &m;
        // isometric except the top basis vector
        let mut expected = CMatrix::identity(5, 5);
        expected[(4, 4)] = cr(0.0);
        assert!(max_abs(&(g - expected)) < 1e-15);

        let bwd = OperatorRep::TruncShiftBwd { dim: 5 };
        let m = bwd.to_dense().unwrap();
        let g = &m * m.adjoint();
        let mut expected = CMatrix::identity(5, 5);
        expected[(4, 4)] = cr(0.0);
        assert!(max_abs(&(g - expected)) < 1e-15);
        // co-isometric defect lives on the bottom sample: m^* m = I - e0 e0^H
        let g2 = m.adjoint() * &m;
        let mut expected2 = CMatrix::identity(5, 5);
        expected2[(0, 0)] = cr(0.0);
        assert!(max_abs(&(g2 - expected2)) < 1e-15);
    }

    #[test]
    fn composition_accumulates_boundary_radius() {
        let op = OperatorRep::Compose(vec![
            OperatorRep::TruncShiftFwd { dim: 8 },
            OperatorRep::TruncShiftBwd { dim: 8 },
        ]);
        assert_eq!(op.boundary_radius(), 2);
        let sum = OperatorRep::Sum(vec![
            OperatorRep::TruncShiftFwd { dim: 8 },
            OperatorRep::identity(8),
        ]);
        assert_eq!(sum.boundary_radius(), 1);
    }

    #[test]
    fn block_cyclic_shift_moves_fibers_together() {
        let s = OperatorRep::CyclicShift {
            blocks: 3,
            block_size: 2,
            power: 1,
        };
        let v = CVector::from_vec(vec![
            cr(0.0),
            cr(1.0),
            cr(2.0),
            cr(3.0),
            cr(4.0),
            cr(5.0),
        ]);
        let w = s.apply(&v).unwrap();
        // block b of output = block b+1 of input
        assert_eq!(w[0].re, 2.0);
        assert_eq!(w[1].re, 3.0);
        assert_eq!(w[4].re, 0.0);
        assert_eq!(w[5].re, 1.0);
    }

    #[test]
    fn mul_symbol_acts_pointwise() {
        let symbols = vec![
            CMatrix::from_row_slice(2, 2, &[cr(1.0), cr(0.0), cr(0.0), cr(2.0)]),
            CMatrix::from_row_slice(2, 2, &[cr(0.0), cr(1.0), cr(1.0), cr(0.0)]),
        ];
        let op = OperatorRep::MulSymbol { symbols };
        let v = CVector::from_vec(vec![cr(1.0), cr(1.0), cr(3.0), cr(4.0)]);
        let w = op.apply(&v).unwrap();
        assert_eq!(w[0].re, 1.0);
        assert_eq!(w[1].re, 2.0);
        assert_eq!(w[2].re, 4.0);
        assert_eq!(w[3].re, 3.0);
    }

    #[test]
    fn sum_and_compose_agree_with_dense_algebra() {
        let a = OperatorRep::TruncShiftFwd { dim: 4 };
        let b = OperatorRep::cyclic_shift(4);
        let sum = OperatorRep::Sum(vec![a.clone(), b.clone()]);
        let comp = OperatorRep::Compose(vec![a.clone(), b.clone()]);
        let da = a.to_dense().unwrap();
        let db = b.to_dense().unwrap();
        assert!(max_abs(&(sum.to_dense().unwrap() - (&da + &db))) < 1e-15);
        assert!(max_abs(&(comp.to_dense().unwrap() - (&da * &db))) < 1e-15);
    }
}
