//! Gauss–Newton projection onto the fiber `μ⁻¹(I)`.

use nalgebra::{DVector, Matrix3, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::verify::tuple::{mu_eval, Chart, RepTuple};
use crate::weights::WeightConfig;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub max_iterations: usize,
    /// Target `|log μ|`.
    pub tolerance: f64,
    /// Levenberg damping added to `J Jᵀ`, relative to its trace.
    pub damping: f64,
    /// Restarts from a perturbed point when `μ` lands on `-I`.
    pub max_restarts: usize,
    pub seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            max_iterations: 100,
            tolerance: 1e-13,
            damping: 1e-12,
            max_restarts: 4,
            seed: 0,
        }
    }
}

/// `log μ(p)` as a 3-vector.
fn residual(p: &RepTuple) -> Result<Vector3<f64>> {
    let r = mu_eval(p).log()?;
    Ok(Vector3::from(r.to_array()))
}

/// Moves `initial` onto `μ⁻¹(I)`, keeping every `C_j` in its class.
pub fn solve_to_fiber(initial: &RepTuple, cfg: &SolverConfig) -> Result<RepTuple> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut start = initial.clone();
    let mut last_err = None;
    for _ in 0..=cfg.max_restarts {
        match newton(&start, cfg) {
            Ok(p) => return Ok(p),
            Err(e @ Error::AntipodalLog { .. }) => {
                last_err = Some(e);
                start = perturb(&start, 0.3, &mut rng);
            }
            Err(e) => return Err(e),
        }
    }
    Err(last_err.expect("at least one attempt"))
}

fn perturb<R: Rng>(p: &RepTuple, size: f64, rng: &mut R) -> RepTuple {
    let chart = Chart::at(p);
    let x: Vec<f64> = (0..chart.dim())
        .map(|_| size * (rng.random::<f64>() - 0.5))
        .collect();
    chart.retract(p, &x)
}

fn newton(initial: &RepTuple, cfg: &SolverConfig) -> Result<RepTuple> {
    let mut p = initial.clone();
    let mut r = residual(&p)?;
    let mut norm = r.norm();
    for _ in 0..cfg.max_iterations {
        if norm < cfg.tolerance {
            return Ok(p);
        }
        let chart = Chart::at(&p);
        if chart.dim() == 0 {
            break;
        }
        let j = chart.jacobian(&p);
        let jjt: Matrix3<f64> = (&j * j.transpose()).fixed_view::<3, 3>(0, 0).into_owned();
        let reg = cfg.damping * jjt.trace().max(f64::MIN_POSITIVE);
        let Some(inv) = (jjt + Matrix3::identity() * reg).try_inverse() else {
            break;
        };
        let step: DVector<f64> =
            -(j.transpose() * DVector::from_column_slice((inv * r).as_slice()));

        // backtracking on |log μ|
        let mut alpha = 1.0;
        let mut accepted = None;
        for _ in 0..30 {
            let x: Vec<f64> = step.iter().map(|s| alpha * s).collect();
            let q = chart.retract(&p, &x);
            if let Ok(rq) = residual(&q) {
                if rq.norm() < norm {
                    accepted = Some((q, rq));
                    break;
                }
            }
            alpha *= 0.5;
        }
        match accepted {
            Some((q, rq)) => {
                p = q;
                r = rq;
                norm = r.norm();
            }
            None => break,
        }
    }
    if norm < cfg.tolerance {
        Ok(p)
    } else {
        Err(Error::NoConvergence {
            iterations: cfg.max_iterations,
            residual: norm,
        })
    }
}

/// Solves from `count` Haar-random starts; start `k` uses seed `seed + k`.
///
/// Results come back in start order.
pub fn sample_fiber(
    cfg: &WeightConfig,
    count: usize,
    seed: u64,
    solver: &SolverConfig,
) -> Vec<Result<RepTuple>> {
    (0..count)
        .into_par_iter()
        .map(|k| {
            let task_seed = seed.wrapping_add(k as u64);
            let mut rng = ChaCha8Rng::seed_from_u64(task_seed);
            let start = RepTuple::random(cfg, &mut rng);
            solve_to_fiber(
                &start,
                &SolverConfig {
                    seed: task_seed,
                    ..*solver
                },
            )
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::tuple::rank_dmu;
    use crate::Su2;
    use num_rational::BigRational;

    fn rat(p: i64, q: i64) -> BigRational {
        BigRational::new(p.into(), q.into())
    }

    #[test]
    fn already_on_fiber_is_unchanged() {
        let cfg = WeightConfig::classic(1);
        let p = RepTuple::new(
            cfg,
            vec![Su2::i()],
            vec![Su2::j()],
            vec![Su2::minus_identity()],
        )
        .unwrap();
        let q = solve_to_fiber(&p, &SolverConfig::default()).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn classic_genus_two_starts_converge() {
        let cfg = WeightConfig::classic(2);
        let pts = sample_fiber(&cfg, 20, 77, &SolverConfig::default());
        for p in pts {
            let p = p.unwrap();
            assert!(p.mu_residual() < 1e-10);
            assert_eq!(rank_dmu(&p, 1e-8), 3);
        }
    }

    #[test]
    fn parabolic_starts_keep_classes() {
        let cfg = WeightConfig::parabolic(1, vec![rat(1, 3), rat(2, 5)]).unwrap();
        for p in sample_fiber(&cfg, 10, 5, &SolverConfig::default()) {
            let p = p.unwrap();
            assert!(p.mu_residual() < 1e-10);
            assert!(p.class_deviation() < 1e-12);
        }
    }

    #[test]
    fn inverse_pair_in_one_class_is_found() {
        // C₂ = C₁⁻¹ lies in the same class, so the fiber is nonempty
        let cfg = WeightConfig::parabolic(0, vec![rat(1, 3), rat(1, 3)]).unwrap();
        let ok = sample_fiber(&cfg, 8, 1, &SolverConfig::default())
            .into_iter()
            .filter(|r| r.is_ok())
            .count();
        assert!(ok > 0);
    }

    #[test]
    fn sampling_is_deterministic() {
        let cfg = WeightConfig::parabolic(1, vec![rat(1, 2)]).unwrap();
        let a = sample_fiber(&cfg, 4, 3, &SolverConfig::default());
        let b = sample_fiber(&cfg, 4, 3, &SolverConfig::default());
        assert_eq!(a, b);
    }
}
