use thiserror::Error;

use crate::weights::Subset;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("logarithm undefined at -I (half trace {half_trace})")]
    AntipodalLog { half_trace: f64 },

    #[error("weight `{0}` is not an exact rational (use p/q)")]
    FloatWeight(String),
    #[error("could not parse weight `{0}`")]
    WeightParse(String),
    #[error("weight {0} lies outside [0, 1]")]
    WeightOutOfRange(String),
    #[error("weight configuration is not normalized")]
    NotNormalized,
    #[error("{n} punctures exceed the subset enumeration bound of {max}")]
    SubsetOverflow { n: usize, max: usize },
    #[error("odd number of weights equal to 1 but no interior weight to flip")]
    NoInteriorWeight,
    #[error("classic configuration must have exactly one weight equal to 1")]
    NotClassic,

    #[error("weights are irregular: kappa is an integer for J = {witness}")]
    IrregularWeights { witness: Subset },
    #[error("genus 0 has no handle to carry the Morse function")]
    GenusZero,
    #[error("polynomial division left a nonzero remainder")]
    InexactDivision,
    #[error("base case polynomial has a negative coefficient")]
    InvalidBaseCase,
    #[error(
        "base case asserted empty but the numeric probe found a witness (residual {residual:e})"
    )]
    UnresolvedBaseCase { residual: f64 },
    #[error("negative exponent {0} in the closed-form sum")]
    NegativeExponent(i64),

    #[error("Newton solve did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("tuple shape does not match its weight configuration")]
    ShapeMismatch,
    #[error("tuple is not a critical point (mu residual {mu_residual:e}, gradient residual {gradient_residual:e})")]
    NotCritical {
        mu_residual: f64,
        gradient_residual: f64,
    },
    #[error("slice dimension {found} differs from the moduli dimension {expected}")]
    SliceDimensionMismatch { expected: i64, found: usize },
    #[error("Hessian nullity {found} differs from the torus dimension {expected}")]
    DegenerateHessian { expected: usize, found: usize },
    #[error("circle action undefined where A_g = ±I")]
    ActionUndefined,
    #[error("torus census mismatch: {0}")]
    CensusMismatch(String),
    #[error("operation needs a parabolic configuration")]
    NotParabolic,
    #[error("operation needs genus 0")]
    NotGenusZero,
    #[error("sign vector length {found} differs from genus {expected}")]
    SignLength { expected: usize, found: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
