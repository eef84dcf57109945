//! Multi-start search for a point of the genus-0 fiber.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::verify::solve::{sample_fiber, SolverConfig};
use crate::verify::tuple::RepTuple;
use crate::weights::WeightConfig;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProbeConfig {
    pub starts: usize,
    pub seed: u64,
    pub solver: SolverConfig,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        Self {
            starts: 64,
            seed: 0,
            solver: SolverConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum ProbeOutcome {
    Witness {
        tuple: RepTuple,
        residual: f64,
        start: usize,
    },
    /// No start converged. Not a proof of emptiness.
    ProbablyEmpty { best_residual: f64, starts: usize },
}

/// Looks for a solution of `C_1 ⋯ C_n = I` with `C_j` in the prescribed classes.
pub fn nonempty_probe(cfg: &WeightConfig, probe: &ProbeConfig) -> Result<ProbeOutcome> {
    if cfg.genus() != 0 {
        return Err(Error::NotGenusZero);
    }
    let results = sample_fiber(cfg, probe.starts, probe.seed, &probe.solver);
    if let Some((start, p)) = results
        .iter()
        .enumerate()
        .find_map(|(k, r)| r.as_ref().ok().map(|p| (k, p)))
    {
        return Ok(ProbeOutcome::Witness {
            residual: p.mu_residual(),
            tuple: p.clone(),
            start,
        });
    }
    let best_residual = results
        .par_iter()
        .map(|r| match r {
            Err(Error::NoConvergence { residual, .. }) => *residual,
            _ => f64::INFINITY,
        })
        .reduce(|| f64::INFINITY, f64::min);
    Ok(ProbeOutcome::ProbablyEmpty {
        best_residual,
        starts: probe.starts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn para(w: &[(i64, i64)]) -> WeightConfig {
        WeightConfig::parabolic(
            0,
            w.iter()
                .map(|&(p, q)| BigRational::new(p.into(), q.into()))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn probe_examples() {
        let probe = ProbeConfig::default();
        assert!(matches!(
            nonempty_probe(&para(&[(1, 2), (1, 2)]), &probe).unwrap(),
            ProbeOutcome::Witness { .. }
        ));
        match nonempty_probe(&para(&[(9, 10), (1, 10)]), &probe).unwrap() {
            ProbeOutcome::ProbablyEmpty { best_residual, .. } => assert!(best_residual > 0.1),
            other => panic!("unexpected witness {other:?}"),
        }
        assert!(matches!(
            nonempty_probe(&para(&[(1, 3), (1, 3), (1, 3)]), &probe).unwrap(),
            ProbeOutcome::Witness { .. }
        ));
        assert_eq!(
            nonempty_probe(&WeightConfig::classic(1), &probe),
            Err(Error::NotGenusZero)
        );
    }
}
