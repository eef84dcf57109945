//! Desk-scale run of the acceptance checks, one group per criterion.
//!
//! Every stochastic check draws from `seed + offset` with a fixed offset per
//! group, so a report depends only on the seed and the [`VerifyConfig`].

use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use crate::betti::{consistency_report, hn_poincare, poincare, u2_poincare, BaseCaseProvider};
use crate::error::Result;
use crate::report::{CheckResult, SCHEMA_VERSION};
use crate::verify::{
    critical_tuple, dmu_apply, half_twist, hessian_report, mu_eval, rank_dmu, sample_fiber,
    sign_action, torus_census, u1_action, Chart, RepTuple, VerifyConfig,
};
use crate::weights::{is_regular, normalize, Regularity, Subset, WeightConfig};
use crate::{Algebra, IntPolynomial, Su2};

pub const CRITERIA: usize = 10;

#[derive(Debug, Clone, Serialize)]
pub struct SelftestReport {
    pub schema: u32,
    pub seed: u64,
    pub config: VerifyConfig,
    pub checks: Vec<CheckResult>,
    pub passed: bool,
}

pub fn run(seed: u64, vc: &VerifyConfig) -> SelftestReport {
    let checks: Vec<CheckResult> = (1..=CRITERIA)
        .flat_map(|k| criterion(k, seed, vc))
        .collect();
    SelftestReport {
        schema: SCHEMA_VERSION,
        seed,
        config: *vc,
        passed: checks.iter().all(|c| c.passed),
        checks,
    }
}

/// Checks for criterion `k` in `1..=CRITERIA`. Errors become failed checks.
pub fn criterion(k: usize, seed: u64, vc: &VerifyConfig) -> Vec<CheckResult> {
    let seed = seed.wrapping_add(1000 * k as u64);
    let out = match k {
        1 => hn_values(),
        2 => hn_recursion(),
        3 => palindromy(),
        4 => parabolic_values(),
        5 => regularity(),
        6 => derivative(seed, vc),
        7 => sampling(seed, vc),
        8 => critical_suite(vc),
        9 => symmetries(seed, vc),
        10 => u2_extension(),
        _ => return vec![CheckResult::new(format!("criterion {k}"), false, "unknown")],
    };
    out.unwrap_or_else(|e| {
        vec![CheckResult::new(
            format!("criterion {k}"),
            false,
            e.to_string(),
        )]
    })
}

fn poly(c: &[i64]) -> IntPolynomial {
    IntPolynomial::new(c.iter().map(|&x| BigInt::from(x)).collect())
}

fn para(g: u32, w: &str) -> Result<WeightConfig> {
    normalize(&WeightConfig::parse(g, w)?).map(|n| n.config)
}

fn exact(name: &str, got: &IntPolynomial, want: &IntPolynomial) -> CheckResult {
    CheckResult::new(name, got == want, got.to_string()).with_detail(format!("expected {want}"))
}

fn hn_values() -> Result<Vec<CheckResult>> {
    Ok(vec![
        exact("hn(0)", &hn_poincare(0)?, &IntPolynomial::zero()),
        exact("hn(1)", &hn_poincare(1)?, &IntPolynomial::one()),
        exact("hn(2)", &hn_poincare(2)?, &poly(&[1, 0, 1, 4, 1, 0, 1])),
    ])
}

fn hn_recursion() -> Result<Vec<CheckResult>> {
    let cube = IntPolynomial::one_plus_t_pow(3).pow(2);
    let mut bad = Vec::new();
    let mut prev = hn_poincare(0)?;
    for g in 1..=20u32 {
        let cur = hn_poincare(g)?;
        let tail = IntPolynomial::one_plus_t_pow(1)
            .pow(2 * g - 2)
            .shift(2 * g as usize - 2);
        if cur != &(&cube * &prev) + &tail {
            bad.push(g);
        }
        prev = cur;
    }
    Ok(vec![CheckResult::new(
        "hn recursion g = 1..20",
        bad.is_empty(),
        json!(bad),
    )])
}

fn palindromy_configs() -> Result<Vec<(WeightConfig, BaseCaseProvider)>> {
    let empty = BaseCaseProvider::EmptyAsserted;
    Ok(vec![
        (para(1, "1/2")?, empty.clone()),
        (para(2, "1/2")?, empty.clone()),
        (para(1, "9/10,1/10")?, empty.clone()),
        (para(2, "9/10,1/10")?, empty),
        (
            para(1, "1/3,1/3,1/3")?,
            BaseCaseProvider::UserSupplied(IntPolynomial::one()),
        ),
    ])
}

fn palindromy() -> Result<Vec<CheckResult>> {
    let mut bad = Vec::new();
    for g in 1..=10 {
        let p = hn_poincare(g)?;
        if p.reflect(6 * g as usize - 6).as_ref() != Some(&p) {
            bad.push(g);
        }
    }
    let mut out = vec![CheckResult::new(
        "classic palindromy g = 1..10",
        bad.is_empty(),
        json!(bad),
    )];
    for (cfg, base) in palindromy_configs()? {
        let report = consistency_report(&cfg, &base)?;
        for c in report.checks {
            let name = format!("{} {}", cfg, c.name);
            out.push(CheckResult { name, ..c });
        }
    }
    for g in 2..=10 {
        let chi = hn_poincare(g)?.eval(&BigInt::from(-1));
        if !chi.is_zero() {
            out.push(CheckResult::new(
                format!("classic euler characteristic g = {g}"),
                false,
                chi.to_string(),
            ));
        }
    }
    Ok(out)
}

fn parabolic_cases() -> Result<Vec<(WeightConfig, IntPolynomial)>> {
    Ok(vec![
        (para(1, "1/2")?, poly(&[1, 0, 1])),
        (para(1, "9/10,1/10")?, poly(&[1, 0, 2, 0, 1])),
        (para(2, "1/2")?, poly(&[1, 0, 2, 4, 2, 4, 2, 0, 1])),
    ])
}

fn parabolic_values() -> Result<Vec<CheckResult>> {
    let base = BaseCaseProvider::EmptyAsserted;
    let mut out = Vec::new();
    for (cfg, want) in parabolic_cases()? {
        out.push(exact(
            &format!("poincare {cfg}"),
            &poincare(&cfg, &base)?,
            &want,
        ));
    }
    // small weights beside a t = 1 puncture: a (CP¹)^{n-1}-bundle over the classic space
    let bundle = para(1, "1/10,1/10,1")?;
    out.push(exact(
        "bundle over the classic space",
        &poincare(&bundle, &base)?,
        &(&IntPolynomial::one_plus_t_pow(2).pow(2) * &hn_poincare(1)?),
    ));
    Ok(out)
}

fn regularity() -> Result<Vec<CheckResult>> {
    let classic = normalize(&WeightConfig::parse(1, "1")?)?.config;
    let v = |r: &Regularity| serde_json::to_value(r).unwrap_or_default();
    let mut out = Vec::new();
    let r = is_regular(&classic)?;
    out.push(CheckResult::new("t = (1) regular", r.is_regular(), v(&r)));
    let r = is_regular(&para(1, "1/2,1/2")?)?;
    out.push(CheckResult::new(
        "t = (1/2, 1/2) irregular with witness",
        r == Regularity::Irregular {
            witness: Subset::from_labels(&[1]),
        },
        v(&r),
    ));
    let r = is_regular(&WeightConfig::parabolic(1, Vec::new())?)?;
    out.push(CheckResult::new("n = 0 irregular", !r.is_regular(), v(&r)));
    Ok(out)
}

fn fiber_points(cfg: &WeightConfig, seed: u64, vc: &VerifyConfig) -> Result<Vec<RepTuple>> {
    sample_fiber(cfg, vc.samples, seed, &vc.solver)
        .into_iter()
        .collect()
}

fn derivative(seed: u64, vc: &VerifyConfig) -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    let configs = [para(1, "1/3")?, para(2, "1/3")?, para(1, "1/3,1/5")?];
    for (k, cfg) in configs.iter().enumerate() {
        let task = seed.wrapping_add(100 * k as u64);
        let mut rng = ChaCha8Rng::seed_from_u64(task);
        let mut worst = 0.0f64;
        for p in fiber_points(cfg, task, vc)? {
            let chart = Chart::at(&p);
            let x: Vec<f64> = (0..chart.dim())
                .map(|_| rng.random::<f64>() * 2.0 - 1.0)
                .collect();
            let exact = dmu_apply(&p, &chart.tangent(&x));
            let h = vc.fd_step;
            let mu0 = mu_eval(&p).inverse();
            let side = |s: f64| -> Result<Algebra> {
                let xs: Vec<f64> = x.iter().map(|v| s * v).collect();
                mu0.multiply(&mu_eval(&chart.retract(&p, &xs))).log()
            };
            let fd = (side(h)? - side(-h)?).scale(0.5 / h);
            worst = worst.max((fd - exact).norm() / exact.norm().max(1e-300));
        }
        out.push(CheckResult::below(
            format!(
                "dmu vs finite differences g={} n={}",
                cfg.genus(),
                cfg.punctures()
            ),
            worst,
            vc.fd_rel_tol,
        ));
    }

    // splitting at A_g = ±I
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(999));
    let mut worst = 0.0f64;
    for cfg in [para(2, "1/3,1/5")?, WeightConfig::classic(3)] {
        for k in 0..vc.samples {
            let mut p = RepTuple::random(&cfg, &mut rng);
            let g = p.genus();
            p.a[g - 1] = if k % 2 == 0 {
                Su2::identity()
            } else {
                Su2::minus_identity()
            };
            let chart = Chart::at(&p);
            let x: Vec<f64> = (0..chart.dim())
                .map(|_| rng.random::<f64>() * 2.0 - 1.0)
                .collect();
            let v = chart.tangent(&x);
            let mut rest = v.clone();
            rest.a.pop();
            rest.b.pop();
            let mut last = v.clone();
            last.a = vec![v.a[g - 1]];
            last.b = vec![v.b[g - 1]];
            last.c.clear();
            let prod_c = p.c.iter().fold(Su2::identity(), |acc, c| acc.multiply(c));
            let split = dmu_apply(&p.drop_last_handle(), &rest)
                + prod_c.adjoint_inverse(dmu_apply(&p.handle(g - 1), &last));
            worst = worst.max((dmu_apply(&p, &v) - split).norm());
        }
    }
    out.push(CheckResult::below(
        "dmu splitting at A_g = ±I",
        worst,
        vc.split_tol,
    ));
    Ok(out)
}

fn sampling(seed: u64, vc: &VerifyConfig) -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    for (k, cfg) in [
        WeightConfig::classic(2),
        para(2, "1/2")?,
        para(1, "1/3,1/5")?,
    ]
    .iter()
    .enumerate()
    {
        let results = sample_fiber(
            cfg,
            vc.samples,
            seed.wrapping_add(100 * k as u64),
            &vc.solver,
        );
        let mut converged = 0;
        let mut full_rank = 0;
        let mut worst = 0.0f64;
        for p in results.iter().flatten() {
            let r = p.mu_residual();
            worst = worst.max(r);
            if r < vc.residual_tol {
                converged += 1;
            }
            if rank_dmu(p, vc.rank_threshold) == 3 {
                full_rank += 1;
            }
        }
        let n = results.len();
        out.push(
            CheckResult::new(
                format!("newton solves {cfg}"),
                converged == n && full_rank == n && n > 0,
                json!({ "converged": converged, "full_rank": full_rank, "starts": n, "max_residual": worst }),
            )
            .with_tolerance(vc.residual_tol),
        );
    }

    let diag = |theta: f64| Su2::exp(Algebra::i().scale(theta));
    let half = WeightConfig::parse(0, "1/2,1/2")?;
    let pair = RepTuple::new(half, vec![], vec![], vec![Su2::i(), -Su2::i()])?;
    let one = WeightConfig::parse(1, "1/2")?;
    let commuting = RepTuple::new(one, vec![diag(0.3)], vec![diag(0.7)], vec![Su2::i()])?;
    for (name, p) in [
        ("commuting classes g=0", pair),
        ("commuting diagonal tuple g=1", commuting),
    ] {
        let r = rank_dmu(&p, vc.rank_threshold);
        out.push(CheckResult::new(format!("rank {name} ≤ 2"), r <= 2, r));
    }
    Ok(out)
}

fn critical_suite(vc: &VerifyConfig) -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    let configs = [para(1, "1/2")?, para(1, "9/10,1/10")?, para(2, "1/2")?];
    let mut worst = 0.0f64;
    for cfg in &configs {
        for j in Subset::all(cfg.punctures()) {
            for lift in 0..2 {
                worst = worst.max(critical_tuple(cfg, j, lift)?.mu_residual());
            }
        }
    }
    out.push(CheckResult::below(
        "critical tuples on the fiber",
        worst,
        vc.critical_tol,
    ));

    for cfg in &configs {
        let name = format!("census {cfg}");
        out.push(match torus_census(cfg, &vc.hessian) {
            Ok(c) => CheckResult::new(
                name,
                true,
                json!({ "classes": c.classes.len(), "indices": c.indices, "nullity": c.expected_nullity }),
            ),
            Err(e) => CheckResult::new(name, false, e.to_string()),
        });
    }

    let s2 = critical_tuple(&WeightConfig::classic(2), Subset::empty(), 0)?;
    let r = hessian_report(&s2, &vc.hessian)?;
    out.push(CheckResult::new(
        "classic g=2 middle critical set",
        r.index == 2 && r.nullity == 2,
        json!({ "index": r.index, "nullity": r.nullity, "slice_dim": r.slice_dim }),
    ));
    Ok(out)
}

fn symmetries(seed: u64, vc: &VerifyConfig) -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    for (k, cfg) in [para(2, "1/3")?, WeightConfig::classic(2)]
        .iter()
        .enumerate()
    {
        let task = seed.wrapping_add(100 * k as u64);
        let mut rng = ChaCha8Rng::seed_from_u64(task);
        let g = cfg.genus() as usize;
        let mut e_g = vec![false; g];
        e_g[g - 1] = true;
        let (mut f_u1, mut f_tw, mut f_sign, mut mu_err) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
        for p in fiber_points(cfg, task, vc)? {
            let mu = mu_eval(&p);
            let theta = rng.random::<f64>() * std::f64::consts::TAU;
            let lambda = num_complex::Complex64::from_polar(1.0, theta);
            let u = u1_action(lambda, &p)?;
            let t = half_twist(&p);
            let delta: Vec<bool> = (0..g).map(|_| rng.random()).collect();
            let eps: Vec<bool> = (0..g).map(|_| rng.random()).collect();
            let s = sign_action(&e_g, &vec![false; g], &p)?;
            let r = sign_action(&delta, &eps, &p)?;
            f_u1 = f_u1.max((u.f_value() - p.f_value()).abs());
            f_tw = f_tw.max((t.f_value() - p.f_value()).abs());
            f_sign = f_sign.max((s.f_value() + p.f_value()).abs());
            for q in [&u, &t, &s, &r] {
                mu_err = mu_err.max(mu_eval(q).distance_max(&mu));
            }
        }
        let tol = vc.symmetry_tol;
        out.push(CheckResult::below(
            format!("f under circle action {cfg}"),
            f_u1,
            tol,
        ));
        out.push(CheckResult::below(
            format!("f under half twist {cfg}"),
            f_tw,
            tol,
        ));
        out.push(CheckResult::below(
            format!("f under last sign flip {cfg}"),
            f_sign,
            tol,
        ));
        out.push(CheckResult::below(
            format!("mu under symmetries {cfg}"),
            mu_err,
            tol,
        ));
    }
    Ok(out)
}

fn u2_extension() -> Result<Vec<CheckResult>> {
    let base = BaseCaseProvider::EmptyAsserted;
    let mut out = Vec::new();
    for (cfg, p) in parabolic_cases()? {
        let want = &IntPolynomial::one_plus_t_pow(1).pow(2 * cfg.genus()) * &p;
        out.push(exact(
            &format!("u2 {cfg}"),
            &u2_poincare(&cfg, &base)?,
            &want,
        ));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_run_passes() {
        let report = run(0, &VerifyConfig::default());
        for c in report.checks.iter().filter(|c| !c.passed) {
            eprintln!("{}", c.line());
        }
        assert!(report.passed);
    }

    #[test]
    fn zero_tolerance_fails() {
        let vc = VerifyConfig {
            fd_rel_tol: 0.0,
            symmetry_tol: 0.0,
            ..VerifyConfig::default()
        };
        let six = criterion(6, 0, &vc);
        assert!(six.iter().any(|c| !c.passed));
        let nine = criterion(9, 0, &vc);
        assert!(nine.iter().any(|c| !c.passed));
    }
}
