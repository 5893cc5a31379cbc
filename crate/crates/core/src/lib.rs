//! Numerical kernels for real-analytic automorphic objects on `PSL2(Z)` and
//! `Gamma0(N)`: Niebur-Poincare series, parabolic Eisenstein series,
//! automorphic Green's functions, their generating functions, and the
//! Rogers-dilogarithm point-pair kernel.
//!
//! Everything is plain `f64` arithmetic. Truncated sums return a
//! [`SeriesResult`] carrying the value, an empirical tail estimate, the term
//! count and a convergence flag, so callers can decide whether a number is
//! usable at their tolerance.

pub mod arith;
pub mod derivgen;
pub mod eisenstein;
pub mod error;
pub mod genfun;
pub mod greens;
pub mod halfplane;
pub mod kloosterman;
pub mod modgroup;
pub mod niebur;
pub mod policy;
pub mod series;
pub mod specfun;

pub use error::Error;
pub use halfplane::{HalfPlanePoint, PointPairArgument};
pub use modgroup::{CosetRep, GroupSpec, UnimodularMap};
pub use policy::TruncationPolicy;
pub use series::SeriesResult;

pub type Complex = num_complex::Complex64;

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
