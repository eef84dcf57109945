//! Numerical checks on the representation variety.

pub mod actions;
pub mod critical;
pub mod probe;
pub mod solve;
pub mod tuple;

use serde::{Deserialize, Serialize};

pub use actions::{half_twist, phi_from, sign_action, u1_action, CircleSubgroup};
pub use critical::{
    census_report, critical_tuple, critical_tuple_on_torus, fingerprint, hessian_index,
    hessian_report, torus_census, Census, CensusClass, HessianConfig, HessianReport,
};
pub use probe::{nonempty_probe, ProbeConfig, ProbeOutcome};
pub use solve::{sample_fiber, solve_to_fiber, SolverConfig};
pub use tuple::{dmu_apply, mu_eval, rank_dmu, Chart, RepTuple, TangentVector};

/// Every numerical threshold used by the verification suites.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerifyConfig {
    /// Accepted `|log μ|` after a Newton solve.
    pub residual_tol: f64,
    /// Accepted `|log μ|` at constructed critical tuples.
    pub critical_tol: f64,
    /// Central-difference step for the derivative check.
    pub fd_step: f64,
    /// Relative error allowed between `dmu_apply` and finite differences.
    pub fd_rel_tol: f64,
    /// Tolerance for the splitting identity at `A_g = ±I`.
    pub split_tol: f64,
    /// Pointwise tolerance for `f` and `μ` under the symmetries.
    pub symmetry_tol: f64,
    /// Singular values below this fraction of the largest are zero.
    pub rank_threshold: f64,
    /// Random points per sampled suite.
    pub samples: usize,
    pub solver: SolverConfig,
    pub hessian: HessianConfig,
    pub probe: ProbeConfig,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            residual_tol: 1e-10,
            critical_tol: 1e-12,
            fd_step: 1e-5,
            fd_rel_tol: 1e-6,
            split_tol: 1e-10,
            symmetry_tol: 1e-12,
            rank_threshold: 1e-8,
            samples: 100,
            solver: SolverConfig::default(),
            hessian: HessianConfig::default(),
            probe: ProbeConfig::default(),
        }
    }
}
