//! Exact puncture weights: the signed half sums κ_J, the regularity test and
//! the reduction to weights strictly inside (0, 1).

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest puncture count for which subsets are enumerated.
pub const MAX_PUNCTURES: usize = 30;

/// A subset of punctures `{1, …, n}` as a bitmask; bit `j` is puncture `j + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Subset(pub u32);

impl Subset {
    pub fn empty() -> Self {
        Subset(0)
    }

    /// Subset from 1-based puncture labels.
    pub fn from_labels(labels: &[usize]) -> Self {
        Subset(labels.iter().fold(0, |m, &j| m | (1 << (j - 1))))
    }

    /// Whether the 0-based puncture `j` belongs to the subset.
    pub fn contains(self, j: usize) -> bool {
        self.0 >> j & 1 == 1
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn complement(self, n: usize) -> Self {
        Subset(!self.0 & full_mask(n))
    }

    /// 1-based labels in increasing order.
    pub fn labels(self) -> Vec<usize> {
        (0..32)
            .filter(|&j| self.contains(j))
            .map(|j| j + 1)
            .collect()
    }

    /// All `2ⁿ` subsets of `{1, …, n}` in bitmask order.
    pub fn all(n: usize) -> impl Iterator<Item = Subset> {
        assert!(n <= MAX_PUNCTURES);
        (0..=full_mask(n)).map(Subset)
    }
}

fn full_mask(n: usize) -> u32 {
    if n == 0 {
        0
    } else {
        u32::MAX >> (32 - n)
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<String> = self.labels().iter().map(|j| j.to_string()).collect();
        write!(f, "{{{}}}", labels.join(","))
    }
}

impl Serialize for Subset {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.labels().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Subset {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let labels = Vec::<usize>::deserialize(d)?;
        if labels.iter().any(|&j| j == 0 || j > MAX_PUNCTURES) {
            return Err(serde::de::Error::custom(
                "puncture labels are 1-based and at most 30",
            ));
        }
        Ok(Subset::from_labels(&labels))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// One puncture with weight 1, holonomy `-I`.
    Classic,
    /// Every weight strictly inside (0, 1).
    Parabolic,
    /// Not yet normalized.
    Raw,
}

/// Genus plus exact puncture weights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightConfig {
    genus: u32,
    weights: Vec<BigRational>,
    mode: Mode,
}

/// Parses a weight written as `p/q` or an integer. Decimal notation is rejected.
pub fn parse_weight(s: &str) -> Result<BigRational> {
    let s = s.trim();
    if s.contains(['.', 'e', 'E']) {
        return Err(Error::FloatWeight(s.to_string()));
    }
    let r = BigRational::from_str(s).map_err(|_| Error::WeightParse(s.to_string()))?;
    check_range(&r)?;
    Ok(r)
}

/// Parses a comma-separated weight list; the empty string gives no weights.
pub fn parse_weights(s: &str) -> Result<Vec<BigRational>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(parse_weight).collect()
}

fn check_range(r: &BigRational) -> Result<()> {
    if r.is_negative() || *r > BigRational::one() {
        Err(Error::WeightOutOfRange(r.to_string()))
    } else {
        Ok(())
    }
}

fn is_interior(r: &BigRational) -> bool {
    r.is_positive() && *r < BigRational::one()
}

impl WeightConfig {
    /// Unnormalized weights in `[0, 1]`.
    pub fn raw(genus: u32, weights: Vec<BigRational>) -> Result<Self> {
        weights.iter().try_for_each(check_range)?;
        Ok(Self {
            genus,
            weights,
            mode: Mode::Raw,
        })
    }

    /// The single puncture with holonomy `-I`.
    pub fn classic(genus: u32) -> Self {
        Self {
            genus,
            weights: vec![BigRational::one()],
            mode: Mode::Classic,
        }
    }

    /// Weights that must all lie strictly inside (0, 1).
    pub fn parabolic(genus: u32, weights: Vec<BigRational>) -> Result<Self> {
        weights.iter().try_for_each(check_range)?;
        if !weights.iter().all(is_interior) {
            return Err(Error::NotNormalized);
        }
        Ok(Self {
            genus,
            weights,
            mode: Mode::Parabolic,
        })
    }

    /// Parses `p/q` strings; the result is raw.
    pub fn parse(genus: u32, weights: &str) -> Result<Self> {
        Self::raw(genus, parse_weights(weights)?)
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn weights(&self) -> &[BigRational] {
        &self.weights
    }

    pub fn punctures(&self) -> usize {
        self.weights.len()
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn is_normalized(&self) -> bool {
        self.mode != Mode::Raw
    }

    /// Same weights with a different genus.
    pub fn with_genus(&self, genus: u32) -> Self {
        Self {
            genus,
            ..self.clone()
        }
    }

    /// Weights rendered as `p/q` strings.
    pub fn weight_strings(&self) -> Vec<String> {
        self.weights.iter().map(|w| w.to_string()).collect()
    }
}

impl fmt::Display for WeightConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "g={} t=({}) [{:?}]",
            self.genus,
            self.weight_strings().join(", "),
            self.mode
        )
    }
}

#[derive(Serialize, Deserialize)]
struct WeightConfigRepr {
    genus: u32,
    weights: Vec<String>,
    mode: Mode,
}

impl Serialize for WeightConfig {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        WeightConfigRepr {
            genus: self.genus,
            weights: self.weight_strings(),
            mode: self.mode,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for WeightConfig {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = WeightConfigRepr::deserialize(d)?;
        let weights = repr
            .weights
            .iter()
            .map(|w| parse_weight(w))
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        let cfg = match repr.mode {
            Mode::Raw => WeightConfig::raw(repr.genus, weights),
            Mode::Parabolic => WeightConfig::parabolic(repr.genus, weights),
            Mode::Classic if weights == [BigRational::one()] => {
                Ok(WeightConfig::classic(repr.genus))
            }
            Mode::Classic => Err(Error::NotClassic),
        };
        cfg.map_err(D::Error::custom)
    }
}

/// `κ_J` together with the subset it was computed for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KappaValue {
    pub value: BigRational,
    pub subset: Subset,
}

impl Serialize for KappaValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("KappaValue", 2)?;
        st.serialize_field("value", &self.value.to_string())?;
        st.serialize_field("subset", &self.subset)?;
        st.end()
    }
}

/// `κ_J = ½(Σ_{j∈J} t_j − Σ_{j∉J} t_j)`.
pub fn kappa(cfg: &WeightConfig, subset: Subset) -> KappaValue {
    let sum = cfg
        .weights
        .iter()
        .enumerate()
        .fold(BigRational::zero(), |acc, (j, t)| {
            if subset.contains(j) {
                acc + t
            } else {
                acc - t
            }
        });
    KappaValue {
        value: sum / BigRational::from_integer(2.into()),
        subset,
    }
}

/// Greatest integer not exceeding `κ`.
pub fn floor_kappa(k: &KappaValue) -> BigInt {
    k.value.numer().div_floor(k.value.denom())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Regularity {
    Regular,
    Irregular { witness: Subset },
}

impl Regularity {
    pub fn is_regular(&self) -> bool {
        matches!(self, Regularity::Regular)
    }
}

/// Exhaustive test of whether `I` is a regular value: no `κ_J` is an integer.
///
/// An irregular verdict carries the least witness, ordering subsets
/// lexicographically by their sorted label lists.
pub fn is_regular(cfg: &WeightConfig) -> Result<Regularity> {
    if !cfg.is_normalized() {
        return Err(Error::NotNormalized);
    }
    let n = cfg.punctures();
    if n > MAX_PUNCTURES {
        return Err(Error::SubsetOverflow {
            n,
            max: MAX_PUNCTURES,
        });
    }
    let witness = Subset::all(n)
        .filter(|&j| kappa(cfg, j).value.is_integer())
        .min_by_key(|j| j.labels());
    Ok(match witness {
        None => Regularity::Regular,
        Some(witness) => Regularity::Irregular { witness },
    })
}

/// Errors with `IrregularWeights` unless `cfg` is normalized and regular.
pub fn require_regular(cfg: &WeightConfig) -> Result<()> {
    match is_regular(cfg)? {
        Regularity::Regular => Ok(()),
        Regularity::Irregular { witness } => Err(Error::IrregularWeights { witness }),
    }
}

/// Result of [`normalize`]: the reduced configuration and what was done.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Normalized {
    pub config: WeightConfig,
    pub transcript: Vec<String>,
}

/// Removes weights 0 and 1; an odd number of 1s is absorbed by replacing
/// the first surviving weight `t` with `1 - t` (the holonomy picks up `-I`).
pub fn normalize(cfg: &WeightConfig) -> Result<Normalized> {
    let mut transcript = Vec::new();
    let classic_shape = |w: &[BigRational]| w.len() == 1 && w[0].is_one();

    if classic_shape(&cfg.weights) {
        transcript.push("single puncture with t = 1: classic configuration".to_string());
        return Ok(Normalized {
            config: WeightConfig::classic(cfg.genus),
            transcript,
        });
    }

    let zeros = cfg.weights.iter().filter(|t| t.is_zero()).count();
    let ones = cfg.weights.iter().filter(|t| t.is_one()).count();
    let mut survivors: Vec<BigRational> = cfg
        .weights
        .iter()
        .filter(|t| is_interior(t))
        .cloned()
        .collect();

    if zeros > 0 {
        transcript.push(format!("dropped {zeros} puncture(s) with t = 0"));
    }
    if ones % 2 == 1 {
        if survivors.is_empty() {
            if ones == 1 {
                transcript.push("only a t = 1 puncture remains: classic configuration".to_string());
                return Ok(Normalized {
                    config: WeightConfig::classic(cfg.genus),
                    transcript,
                });
            }
            return Err(Error::NoInteriorWeight);
        }
        let old = survivors[0].clone();
        survivors[0] = BigRational::one() - &old;
        transcript.push(format!("dropped {ones} puncture(s) with t = 1 (odd count)"));
        transcript.push(format!(
            "multiplied the first remaining holonomy by -I: t = {} -> {}",
            old, survivors[0]
        ));
    } else if ones > 0 {
        transcript.push(format!(
            "dropped {ones} puncture(s) with t = 1 (even count)"
        ));
    }
    if transcript.is_empty() {
        transcript.push("all weights already interior".to_string());
    }
    Ok(Normalized {
        config: WeightConfig::parabolic(cfg.genus, survivors)?,
        transcript,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(p: i64, q: i64) -> BigRational {
        BigRational::new(p.into(), q.into())
    }

    fn para(g: u32, w: &[(i64, i64)]) -> WeightConfig {
        WeightConfig::parabolic(g, w.iter().map(|&(p, q)| rat(p, q)).collect()).unwrap()
    }

    #[test]
    fn kappa_examples() {
        let c = para(1, &[(1, 2), (1, 2)]);
        assert_eq!(kappa(&c, Subset::from_labels(&[1])).value, rat(0, 1));
        let classic = WeightConfig::classic(2);
        assert_eq!(kappa(&classic, Subset::empty()).value, rat(-1, 2));
        assert_eq!(kappa(&classic, Subset::from_labels(&[1])).value, rat(1, 2));
    }

    #[test]
    fn floor_examples() {
        let k = |v| KappaValue {
            value: v,
            subset: Subset::empty(),
        };
        assert_eq!(floor_kappa(&k(rat(-1, 4))), BigInt::from(-1));
        assert_eq!(floor_kappa(&k(rat(1, 4))), BigInt::from(0));
        assert_eq!(floor_kappa(&k(rat(-1, 1))), BigInt::from(-1));
        assert_eq!(floor_kappa(&k(rat(-7, 2))), BigInt::from(-4));
    }

    #[test]
    fn regularity_examples() {
        assert_eq!(
            is_regular(&WeightConfig::classic(1)).unwrap(),
            Regularity::Regular
        );
        assert_eq!(
            is_regular(&para(1, &[(1, 2), (1, 2)])).unwrap(),
            Regularity::Irregular {
                witness: Subset::from_labels(&[1])
            }
        );
        assert_eq!(
            is_regular(&para(1, &[])).unwrap(),
            Regularity::Irregular {
                witness: Subset::empty()
            }
        );
        let raw = WeightConfig::parse(1, "1/2").unwrap();
        assert_eq!(is_regular(&raw), Err(Error::NotNormalized));
        let many = WeightConfig::parabolic(1, vec![rat(1, 3); 31]).unwrap();
        assert!(matches!(
            is_regular(&many),
            Err(Error::SubsetOverflow { n: 31, .. })
        ));
    }

    #[test]
    fn witness_is_lexicographically_least() {
        // κ_{2} = κ_{1,3} = 0; {1,3} precedes {2} although its bitmask is larger
        let c = para(0, &[(1, 4), (1, 2), (1, 4)]);
        assert_eq!(
            is_regular(&c).unwrap(),
            Regularity::Irregular {
                witness: Subset::from_labels(&[1, 3])
            }
        );
    }

    #[test]
    fn normalize_examples() {
        let n = normalize(&WeightConfig::parse(1, "1/3,1").unwrap()).unwrap();
        assert_eq!(n.config.weights(), &[rat(2, 3)]);
        assert_eq!(n.config.mode(), Mode::Parabolic);

        let n = normalize(&WeightConfig::parse(1, "0,1/2").unwrap()).unwrap();
        assert_eq!(n.config.weights(), &[rat(1, 2)]);

        let n = normalize(&WeightConfig::parse(3, "1").unwrap()).unwrap();
        assert_eq!(n.config, WeightConfig::classic(3));

        let n = normalize(&WeightConfig::parse(1, "1/10,1/10,1").unwrap()).unwrap();
        assert_eq!(n.config.weights(), &[rat(9, 10), rat(1, 10)]);

        let n = normalize(&WeightConfig::parse(1, "0,1").unwrap()).unwrap();
        assert_eq!(n.config.mode(), Mode::Classic);

        assert_eq!(
            normalize(&WeightConfig::parse(1, "1,1,1").unwrap()),
            Err(Error::NoInteriorWeight)
        );
        let even = normalize(&WeightConfig::parse(1, "1,1/3,1").unwrap()).unwrap();
        assert_eq!(even.config.weights(), &[rat(1, 3)]);
    }

    #[test]
    fn parsing() {
        assert_eq!(parse_weight("3/6").unwrap(), rat(1, 2));
        assert_eq!(parse_weight("1").unwrap(), rat(1, 1));
        assert!(matches!(parse_weight("0.5"), Err(Error::FloatWeight(_))));
        assert!(matches!(
            parse_weight("3/2"),
            Err(Error::WeightOutOfRange(_))
        ));
        assert!(matches!(
            parse_weight("-1/2"),
            Err(Error::WeightOutOfRange(_))
        ));
        assert!(matches!(parse_weight("x"), Err(Error::WeightParse(_))));
        assert!(parse_weights("").unwrap().is_empty());
    }

    #[test]
    fn config_json_uses_strings() {
        let c = para(2, &[(9, 10), (1, 10)]);
        let j = serde_json::to_value(&c).unwrap();
        assert_eq!(j["weights"], serde_json::json!(["9/10", "1/10"]));
        let back: WeightConfig = serde_json::from_value(j).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn subset_display_and_complement() {
        let s = Subset::from_labels(&[1, 3]);
        assert_eq!(s.to_string(), "{1,3}");
        assert_eq!(s.complement(3), Subset::from_labels(&[2]));
        assert_eq!(Subset::all(3).count(), 8);
        assert_eq!(Subset::all(0).collect::<Vec<_>>(), vec![Subset::empty()]);
    }
}
