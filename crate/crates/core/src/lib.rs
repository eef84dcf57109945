//! Poincaré polynomials of moduli spaces of flat SU(2) connections on
//! punctured surfaces, computed from the perfect Morse function
//! `f = ½ tr A_g`, plus a numerical engine that checks regularity, the
//! critical sets and their Morse indices on explicit quaternion tuples.
//!
//! The group numerics ([`su2`]) are generic over the float type and the
//! polynomial arithmetic ([`poly`]) over the coefficient ring; the aliases
//! below fix the concrete types used everywhere else.

pub mod betti;
pub mod error;
pub mod poly;
pub mod report;
pub mod scalar;
pub mod selftest;
pub mod su2;
pub mod verify;
pub mod weights;

pub use error::{Error, Result};
pub use scalar::{Real, Tolerances};
pub use weights::{Mode, Subset, WeightConfig};

/// Unit quaternion in double precision.
pub type Su2 = su2::SU2Element<f64>;
/// Unit quaternion in single precision.
pub type Su2F32 = su2::SU2Element<f32>;
/// su(2) vector in double precision.
pub type Algebra = su2::AlgebraVector<f64>;
/// Integer polynomial with arbitrary-precision coefficients.
pub type IntPolynomial = poly::Polynomial<num_bigint::BigInt>;
/// Exact puncture weight.
pub type Weight = num_rational::BigRational;
