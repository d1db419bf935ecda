//! Boundary dynamics of finite Blaschke products and the Jacobson radical of
//! the semicrossed product of the disk algebra they induce.
//!
//! The crate is organised bottom-up:
//!
//! - [`poly`] and [`blaschke`]: polynomials, the root finder, and the map
//!   `phi(z) = u prod (z - a_i) / (1 - conj(a_i) z)` itself.
//! - [`classify`]: fixed points, the Denjoy-Wolff point, the
//!   elliptic / hyperbolic / parabolic trichotomy and the hyperbolic step.
//! - [`dynamics`]: Julia-set sampling, periodic points, recurrent-set models
//!   and ergodic statistics on the circle.
//! - [`semicrossed`]: elements `sum U^k f_k`, their products, norm bounds,
//!   spectral-radius estimates and radical diagnostics.

pub mod blaschke;
pub mod circle;
pub mod classify;
pub mod dynamics;
pub mod error;
pub mod mobius;
pub mod poly;
pub mod semicrossed;

pub use num_complex::Complex64 as Complex;

pub use blaschke::FiniteBlaschkeProduct;
pub use classify::{Classification, FixedPointRecord, Kind, Location, Step};
pub use error::{Error, Result};
pub use mobius::MobiusTransform;
pub use poly::{ComplexPolynomial, Root};
