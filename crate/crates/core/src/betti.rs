//! Critical strata of `f = ½ tr A_g` and the Poincaré polynomials they add up to.
//!
//! Perfection of `f` means the Poincaré polynomial equals the Morse
//! polynomial `Σ t^{index} P_t(stratum)`. The strata are
//!
//! * `f⁻¹(-1)` and `f⁻¹(1)`: SU(2)-bundles with vanishing Euler class over
//!   the genus `g - 1` space, of index 0 and 3;
//! * the interior tori, one per subset `J` (a single one in classic mode).
//!
//! The genus-0 spaces are not computed here; they come from a
//! [`BaseCaseProvider`].

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::report::CheckResult;
use crate::verify::probe::{nonempty_probe, ProbeConfig, ProbeOutcome};
use crate::weights::{floor_kappa, kappa, require_regular, KappaValue, Mode, Subset, WeightConfig};
use crate::IntPolynomial;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StratumKind {
    EndMin,
    EndMax,
    InteriorTorus,
}

/// One critical submanifold of `f`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriticalStratum {
    pub kind: StratumKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub subset: Option<Subset>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappa: Option<KappaValue>,
    pub index: u32,
    pub poincare: IntPolynomial,
    pub dim: i64,
}

/// Source of `P_t(M_{0,n})`.
#[derive(Debug, Clone, PartialEq)]
pub enum BaseCaseProvider {
    /// The genus-0 space is taken to be empty.
    EmptyAsserted,
    /// A known polynomial; coefficients must be nonnegative.
    UserSupplied(IntPolynomial),
    /// Empty, confirmed by a multi-start search for a point of the fiber.
    NumericProbe(ProbeConfig),
}

impl BaseCaseProvider {
    /// `P_t(M_{0,n})` for the weights of `cfg` (its genus is ignored).
    pub fn resolve(&self, cfg: &WeightConfig) -> Result<IntPolynomial> {
        match self {
            BaseCaseProvider::EmptyAsserted => Ok(IntPolynomial::zero()),
            BaseCaseProvider::UserSupplied(p) => {
                if p.has_nonnegative_coeffs() {
                    Ok(p.clone())
                } else {
                    Err(Error::InvalidBaseCase)
                }
            }
            BaseCaseProvider::NumericProbe(probe) => {
                match nonempty_probe(&cfg.with_genus(0), probe)? {
                    ProbeOutcome::Witness { residual, .. } => {
                        Err(Error::UnresolvedBaseCase { residual })
                    }
                    ProbeOutcome::ProbablyEmpty { .. } => Ok(IntPolynomial::zero()),
                }
            }
        }
    }
}

fn one_plus_t(k: usize) -> IntPolynomial {
    IntPolynomial::one_plus_t_pow(k)
}

/// `(1 - t²)(1 - t⁴)`.
fn hn_denominator() -> IntPolynomial {
    let one = IntPolynomial::one();
    &(&one - &IntPolynomial::t_pow(2)) * &(&one - &IntPolynomial::t_pow(4))
}

/// Closed form `((1+t³)^{2g} − t^{2g}(1+t)^{2g}) / ((1−t²)(1−t⁴))` for the
/// one-puncture space with holonomy `-I`.
pub fn hn_poincare(g: u32) -> Result<IntPolynomial> {
    let numerator = &one_plus_t(3).pow(2 * g) - &one_plus_t(1).pow(2 * g).shift(2 * g as usize);
    numerator.div_exact(&hn_denominator())
}

/// Dimension of the moduli space: `6g − 6` (classic) or `6g − 6 + 2n`.
pub fn dimension(cfg: &WeightConfig) -> i64 {
    let base = 6 * cfg.genus() as i64 - 6;
    match cfg.mode() {
        Mode::Classic => base,
        // classes of ±I are points and contribute nothing
        _ => {
            base + 2 * cfg
                .weights()
                .iter()
                .filter(|t| !t.is_zero() && !t.is_one())
                .count() as i64
        }
    }
}

/// Morse index `2g + 2n − 2|J| + 4⌊κ_J⌋` of the torus labelled by `J`.
pub fn torus_index(cfg: &WeightConfig, subset: Subset) -> Result<u32> {
    let k = kappa(cfg, subset);
    let idx: BigInt =
        BigInt::from(2 * cfg.genus() as i64 + 2 * cfg.punctures() as i64 - 2 * subset.len() as i64)
            + floor_kappa(&k) * BigInt::from(4);
    idx.to_u32()
        .ok_or_else(|| Error::NegativeExponent(idx.to_i64().unwrap_or(i64::MIN)))
}

/// Critical strata of `f`, omitting the end strata when they are empty.
pub fn strata(cfg: &WeightConfig, base: &BaseCaseProvider) -> Result<Vec<CriticalStratum>> {
    require_regular(cfg)?;
    let g = cfg.genus();
    if g == 0 {
        return Err(Error::GenusZero);
    }
    let lower_cfg = cfg.with_genus(g - 1);
    let lower = poincare(&lower_cfg, base)?;
    let mut out = Vec::new();
    if !lower.is_zero() {
        let end = &one_plus_t(3) * &lower;
        let dim = dimension(&lower_cfg) + 3;
        out.push(CriticalStratum {
            kind: StratumKind::EndMin,
            subset: None,
            kappa: None,
            index: 0,
            poincare: end.clone(),
            dim,
        });
        out.push(CriticalStratum {
            kind: StratumKind::EndMax,
            subset: None,
            kappa: None,
            index: 3,
            poincare: end,
            dim,
        });
    }
    let torus = one_plus_t(1).pow(2 * g - 2);
    let torus_dim = 2 * g as i64 - 2;
    match cfg.mode() {
        Mode::Classic => out.push(CriticalStratum {
            kind: StratumKind::InteriorTorus,
            subset: None,
            kappa: None,
            index: 2 * g - 2,
            poincare: torus,
            dim: torus_dim,
        }),
        _ => {
            for j in Subset::all(cfg.punctures()) {
                out.push(CriticalStratum {
                    kind: StratumKind::InteriorTorus,
                    subset: Some(j),
                    kappa: Some(kappa(cfg, j)),
                    index: torus_index(cfg, j)?,
                    poincare: torus.clone(),
                    dim: torus_dim,
                });
            }
        }
    }
    Ok(out)
}

/// `Σ t^{index} P_t(S)` over the strata `S`.
pub fn morse_polynomial(strata: &[CriticalStratum]) -> IntPolynomial {
    strata.iter().fold(IntPolynomial::zero(), |acc, s| {
        &acc + &s.poincare.shift(s.index as usize)
    })
}

/// Poincaré polynomial of the moduli space. Genus 0 comes from `base`
/// (classic genus 0 is empty).
pub fn poincare(cfg: &WeightConfig, base: &BaseCaseProvider) -> Result<IntPolynomial> {
    require_regular(cfg)?;
    if cfg.genus() == 0 {
        return match cfg.mode() {
            Mode::Classic => Ok(IntPolynomial::zero()),
            _ => base.resolve(cfg),
        };
    }
    Ok(morse_polynomial(&strata(cfg, base)?))
}

/// `P_t = coefficient · P_t(M_{0,n}) + explicit`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SymbolicPoincare {
    pub base_coefficient: IntPolynomial,
    pub explicit: IntPolynomial,
}

impl SymbolicPoincare {
    pub fn substitute(&self, base: &IntPolynomial) -> IntPolynomial {
        &(&self.base_coefficient * base) + &self.explicit
    }
}

/// Closed form in the genus:
/// `(1+t³)^{2g} P₀ + ((1+t³)^{2g} − (t+t²)^{2g}) / ((1−t²)(1−t⁴)) · Σ_J t^{2(n+1−|J|+2⌊κ_J⌋)}`.
pub fn symbolic_poincare(cfg: &WeightConfig) -> Result<SymbolicPoincare> {
    require_regular(cfg)?;
    if cfg.mode() != Mode::Parabolic {
        return Err(Error::NotParabolic);
    }
    let g = cfg.genus();
    let n = cfg.punctures() as i64;
    let coefficient = one_plus_t(3).pow(2 * g);
    let t_plus_t2 = IntPolynomial::new(vec![BigInt::zero(), BigInt::one(), BigInt::one()]);
    let factor = (&coefficient - &t_plus_t2.pow(2 * g)).div_exact(&hn_denominator())?;
    let mut sum = IntPolynomial::zero();
    for j in Subset::all(cfg.punctures()) {
        let e: BigInt = BigInt::from(2 * (n + 1 - j.len() as i64))
            + floor_kappa(&kappa(cfg, j)) * BigInt::from(4);
        let e = e
            .to_usize()
            .ok_or_else(|| Error::NegativeExponent(e.to_i64().unwrap_or(i64::MIN)))?;
        sum = &sum + &IntPolynomial::t_pow(e);
    }
    Ok(SymbolicPoincare {
        base_coefficient: coefficient,
        explicit: &factor * &sum,
    })
}

/// Poincaré polynomial of the U(2) moduli space: `(1+t)^{2g} P_t`.
pub fn u2_poincare(cfg: &WeightConfig, base: &BaseCaseProvider) -> Result<IntPolynomial> {
    Ok(&one_plus_t(1).pow(2 * cfg.genus()) * &poincare(cfg, base)?)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConsistencyReport {
    pub config: WeightConfig,
    pub dimension: i64,
    pub poincare: IntPolynomial,
    pub euler_characteristic: String,
    pub checks: Vec<CheckResult>,
}

impl ConsistencyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Sanity checks from compact orientable manifold topology.
pub fn consistency_report(
    cfg: &WeightConfig,
    base: &BaseCaseProvider,
) -> Result<ConsistencyReport> {
    let p = poincare(cfg, base)?;
    let dim = dimension(cfg);
    let mut checks = Vec::new();

    checks.push(CheckResult::new(
        "nonnegative coefficients",
        p.has_nonnegative_coeffs(),
        p.to_string(),
    ));

    let palindromic = p.is_zero()
        || usize::try_from(dim)
            .ok()
            .and_then(|d| p.reflect(d))
            .is_some_and(|r| r == p);
    checks.push(
        CheckResult::new("poincare duality", palindromic, p.to_string())
            .with_detail(format!("t^{dim} P(1/t) = P(t)")),
    );

    let chi = p.eval(&BigInt::from(-1));
    let strata_list = if cfg.genus() >= 1 {
        strata(cfg, base)?
    } else {
        Vec::new()
    };
    let tori = strata_list
        .iter()
        .filter(|s| s.kind == StratumKind::InteriorTorus)
        .count();
    let expected_chi = match cfg.genus() {
        0 => None,
        // ends and tori of positive dimension contribute 0; point tori contribute 1
        1 => Some(BigInt::from(tori)),
        _ => Some(BigInt::zero()),
    };
    if let Some(expected) = expected_chi {
        checks.push(
            CheckResult::new("euler characteristic", chi == expected, chi.to_string())
                .with_detail(format!("expected {expected}")),
        );
    }

    let worst = strata_list.iter().map(|s| s.index as i64 + s.dim).max();
    if let Some(worst) = worst {
        checks.push(
            CheckResult::new("index + stratum dimension bounded", worst <= dim, worst)
                .with_detail(format!("dimension {dim}")),
        );
    }

    if let Some(top) = p.degree() {
        let top_ok = dim >= 0 && top as i64 == dim && p.coeff(top).is_one() && p.coeff(0).is_one();
        checks.push(
            CheckResult::new("connected and orientable", top_ok, top as i64)
                .with_detail("b_0 = b_dim = 1"),
        );
    }

    Ok(ConsistencyReport {
        config: cfg.clone(),
        dimension: dim,
        poincare: p,
        euler_characteristic: chi.to_string(),
        checks,
    })
}
