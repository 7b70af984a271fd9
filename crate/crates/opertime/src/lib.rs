//! Numerical operator-theory laboratory for time operators.
//!
//! The crate implements, at desk scale, the operator-theoretic machinery
//! connecting selfadjoint time operators with invariant subspaces and
//! dilation theory: Cayley cogenerator calculus and C-class
//! classification, defect operators and characteristic functions,
//! circle and half-plane functional models, Beurling / Halmos-Helson
//! invariant-subspace decompositions, Weyl commutation-relation checkers,
//! time operators from nested projection families, outgoing subspaces
//! with translation and spectral representations, and the selfadjoint
//! extension of the Aharonov-Bohm time-of-arrival operator.
//!
//! Everything runs on concrete finite grids: the circle is sampled at
//! roots of unity (a Z_N Fourier model), the line on uniform grids with
//! explicit spacing. Truncation artifacts are first-class: operators and
//! sampled functions carry boundary margins, and every comparison excludes
//! the contaminated bands instead of pretending they are clean.
//!
//! Entry points:
//! - [`opcore`]: grids, Fourier transforms, operators, subspaces.
//! - [`cogen`]: semigroup/cogenerator Cayley calculus, C-class reports.
//! - [`charfun`]: defect operators, characteristic function, functional
//!   models, isometric dilation, residual part, quasi-affinity.
//! - [`invsub`]: invariant subspaces on coefficient windows, innovation
//!   bases, rigid and range functions, Beurling recovery.
//! - [`timeop`]: Weyl pairs and commutation-relation checkers, time
//!   operators from nested projections, Sinai representations.
//! - [`abclock`]: the arrival-time operator in momentum and energy
//!   representations, Werner dilation, arrival densities.
//! - [`suites`]: named batch experiments with machine-readable reports.

pub mod abclock;
pub mod charfun;
pub mod cogen;
pub mod error;
pub mod invsub;
pub mod opcore;
pub mod report;
pub mod suites;
pub mod timeop;

pub use error::{OperError, Result};
