//! Shared numerical substrate: complex dense linear algebra, grids and
//! Fourier transforms, tagged operator representations, subspace
//! arithmetic, and range functions.
//!
//! All values are immutable after construction and all operations are pure
//! functions, so grid points and probes can be evaluated in parallel.

pub mod grid;
pub mod linalg;
pub mod operator;
pub mod range;
pub mod subspace;

pub use grid::{fourier, Domain, FourierDirection, GridFunction, LineWeight};
pub use linalg::{C64, CMatrix, CVector};
pub use operator::OperatorRep;
pub use range::RangeFunction;
pub use subspace::{orthonormalize, orthonormalize_columns, project, SubspaceBasis};
