//! Dense univariate polynomials in `t` over a coefficient ring.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Coefficients indexed by degree, with no trailing zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Polynomial<C> {
    coeffs: Vec<C>,
}

impl<C: Clone + Zero> Polynomial<C> {
    pub fn new(mut coeffs: Vec<C>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    /// Coefficient of `t^k` (zero past the degree).
    pub fn coeff(&self, k: usize) -> C {
        self.coeffs.get(k).cloned().unwrap_or_else(C::zero)
    }

    /// `c · t^k`.
    pub fn monomial(c: C, k: usize) -> Self {
        let mut coeffs = vec![C::zero(); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    /// Multiplies by `t^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![C::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Self { coeffs }
    }

    /// `t^d · P(1/t)` truncated to degrees `0..=d`; `None` if `deg P > d`.
    pub fn reflect(&self, d: usize) -> Option<Self> {
        if self.degree().is_some_and(|deg| deg > d) {
            return None;
        }
        Some(Self::new((0..=d).map(|k| self.coeff(d - k)).collect()))
    }
}

impl<C: Clone + Zero + One> Polynomial<C> {
    pub fn one() -> Self {
        Self::constant(C::one())
    }

    pub fn constant(c: C) -> Self {
        Self::new(vec![c])
    }

    /// `t^k`.
    pub fn t_pow(k: usize) -> Self {
        Self::monomial(C::one(), k)
    }

    /// `1 + t^k`.
    pub fn one_plus_t_pow(k: usize) -> Self {
        if k == 0 {
            return Self::constant(C::one() + C::one());
        }
        let mut coeffs = vec![C::zero(); k + 1];
        coeffs[0] = C::one();
        coeffs[k] = C::one();
        Self::new(coeffs)
    }
}

impl<C> Polynomial<C>
where
    C: Clone + Zero + One + Add<Output = C> + Mul<Output = C>,
{
    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &C) -> C {
        self.coeffs
            .iter()
            .rev()
            .fold(C::zero(), |acc, c| acc * x.clone() + c.clone())
    }
}

impl<C> Polynomial<C>
where
    C: Clone + Zero + One + Integer + Signed,
{
    /// Division by a divisor whose leading coefficient is `±1`, or whose
    /// leading coefficient divides each intermediate leading term.
    ///
    /// Returns `(quotient, remainder)`; `None` if a leading term does not divide.
    pub fn div_rem(&self, divisor: &Self) -> Option<(Self, Self)> {
        let dd = divisor.degree()?;
        let lead = divisor.coeffs[dd].clone();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Some((Self::zero(), self.clone()));
        }
        let mut quot = vec![C::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let top = rem[k + dd].clone();
            if top.is_zero() {
                continue;
            }
            let (q, r) = top.div_rem(&lead);
            if !r.is_zero() {
                return None;
            }
            for (i, d) in divisor.coeffs.iter().enumerate() {
                rem[k + i] = rem[k + i].clone() - q.clone() * d.clone();
            }
            quot[k] = q;
        }
        Some((Self::new(quot), Self::new(rem)))
    }

    /// Quotient of an exact division; `InexactDivision` otherwise.
    pub fn div_exact(&self, divisor: &Self) -> Result<Self> {
        match self.div_rem(divisor) {
            Some((q, r)) if r.is_zero() => Ok(q),
            _ => Err(Error::InexactDivision),
        }
    }

    pub fn has_nonnegative_coeffs(&self) -> bool {
        self.coeffs.iter().all(|c| !c.is_negative())
    }
}

impl<C: Clone + Zero + Add<Output = C>> Add for &Polynomial<C> {
    type Output = Polynomial<C>;
    fn add(self, rhs: Self) -> Polynomial<C> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let get = |p: &Polynomial<C>, k: usize| p.coeffs.get(k).cloned().unwrap_or_else(C::zero);
        Polynomial::new((0..n).map(|k| get(self, k) + get(rhs, k)).collect())
    }
}

impl<C: Clone + Zero + Sub<Output = C>> Sub for &Polynomial<C> {
    type Output = Polynomial<C>;
    fn sub(self, rhs: Self) -> Polynomial<C> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let get = |p: &Polynomial<C>, k: usize| p.coeffs.get(k).cloned().unwrap_or_else(C::zero);
        Polynomial::new((0..n).map(|k| get(self, k) - get(rhs, k)).collect())
    }
}

impl<C: Clone + Zero + Add<Output = C> + Mul<Output = C>> Mul for &Polynomial<C> {
    type Output = Polynomial<C>;
    fn mul(self, rhs: Self) -> Polynomial<C> {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![C::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Polynomial::new(out)
    }
}

impl<C: Clone + Zero + Neg<Output = C>> Neg for &Polynomial<C> {
    type Output = Polynomial<C>;
    fn neg(self) -> Polynomial<C> {
        Polynomial::new(self.coeffs.iter().cloned().map(Neg::neg).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident, $($bound:tt)+) => {
        impl<C: Clone + Zero + $($bound)+> $tr for Polynomial<C> {
            type Output = Polynomial<C>;
            fn $m(self, rhs: Self) -> Polynomial<C> {
                (&self).$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add, Add<Output = C>);
forward_owned!(Sub, sub, Sub<Output = C>);
forward_owned!(Mul, mul, Add<Output = C> + Mul<Output = C>);

/// Renders as `1 + t^2 + 4t^3 - t^5`; the zero polynomial renders as `0`.
impl<C> fmt::Display for Polynomial<C>
where
    C: Clone + Zero + One + PartialEq + Signed + fmt::Display,
{
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if c.is_negative() { " - " } else { " + " })?;
            }
            first = false;
            match (k, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "t")?,
                (1, false) => write!(f, "{mag}t")?,
                (_, true) => write!(f, "t^{k}")?,
                (_, false) => write!(f, "{mag}t^{k}")?,
            }
        }
        Ok(())
    }
}

/// JSON form: decimal-string coefficients, lowest degree first.
impl<C: fmt::Display> Serialize for Polynomial<C> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.coeffs.iter().map(|c| c.to_string()))
    }
}

impl<'de, C> Deserialize<'de> for Polynomial<C>
where
    C: Clone + Zero + std::str::FromStr,
{
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        let coeffs = raw
            .iter()
            .map(|s| {
                s.parse::<C>()
                    .map_err(|_| serde::de::Error::custom(format!("bad coefficient `{s}`")))
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(Polynomial::new(coeffs))
    }
}

impl<C: Clone + Zero + std::str::FromStr> std::str::FromStr for Polynomial<C> {
    type Err = String;

    /// Comma-separated coefficients, lowest degree first (`1,0,1` is `1 + t^2`).
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Self::zero());
        }
        s.split(',')
            .map(|c| {
                c.trim()
                    .parse::<C>()
                    .map_err(|_| format!("bad coefficient `{c}`"))
            })
            .collect::<std::result::Result<Vec<_>, _>>()
            .map(Self::new)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    type P = Polynomial<BigInt>;

    fn p(c: &[i64]) -> P {
        P::new(c.iter().map(|&x| BigInt::from(x)).collect())
    }

    #[test]
    fn trailing_zeros_trimmed() {
        assert_eq!(p(&[1, 2, 0, 0]).coeffs().len(), 2);
        assert!(p(&[0, 0]).is_zero());
        assert_eq!(p(&[0]).degree(), None);
    }

    #[test]
    fn display() {
        assert_eq!(
            p(&[1, 0, 1, 4, 1, 0, 1]).to_string(),
            "1 + t^2 + 4t^3 + t^4 + t^6"
        );
        assert_eq!(p(&[0, -1, 0, 2]).to_string(), "-t + 2t^3");
        assert_eq!(p(&[3, 1]).to_string(), "3 + t");
        assert_eq!(P::zero().to_string(), "0");
    }

    #[test]
    fn exact_division() {
        // (1 - t^2)(1 - t^4) = 1 - t^2 - t^4 + t^6
        let d = p(&[1, 0, -1, 0, -1, 0, 1]);
        let q = p(&[2, 1, 0, 3]);
        assert_eq!((&q * &d).div_exact(&d).unwrap(), q);
        assert_eq!(
            p(&[1, 1]).div_exact(&p(&[0, 1])),
            Err(Error::InexactDivision)
        );
        // non-unit leading coefficient that divides
        assert_eq!(p(&[2, 4]).div_exact(&p(&[1, 2])).unwrap(), p(&[2]));
        assert!(p(&[1, 3]).div_rem(&p(&[1, 2])).is_none());
    }

    #[test]
    fn reflect_and_eval() {
        let x = p(&[1, 0, 1, 4, 1, 0, 1]);
        assert_eq!(x.reflect(6).unwrap(), x);
        assert_eq!(p(&[1, 2]).reflect(2).unwrap(), p(&[0, 2, 1]));
        assert!(p(&[1, 2, 3]).reflect(1).is_none());
        assert_eq!(x.eval(&BigInt::from(-1)), BigInt::from(0));
        assert_eq!(x.eval(&BigInt::from(1)), BigInt::from(8));
    }

    #[test]
    fn json_and_parse() {
        let x = p(&[1, 0, 12345678901234]);
        let j = serde_json::to_string(&x).unwrap();
        assert_eq!(j, r#"["1","0","12345678901234"]"#);
        let back: P = serde_json::from_str(&j).unwrap();
        assert_eq!(back, x);
        assert_eq!("1, 0, 1".parse::<P>().unwrap(), p(&[1, 0, 1]));
        assert!("1,x".parse::<P>().is_err());
    }

    #[test]
    fn pow_matches_repeated_product() {
        let b = p(&[1, 0, 0, 1]);
        let mut acc = P::one();
        for _ in 0..7 {
            acc = &acc * &b;
        }
        assert_eq!(b.pow(7), acc);
        // binomial growth past 64 bits
        let big = p(&[1, 1]).pow(80);
        assert_eq!(big.coeff(40).to_string(), "107507208733336176461620");
    }

    #[test]
    fn generic_over_i64_coefficients() {
        let x = Polynomial::<i64>::new(vec![1, 1]).pow(3);
        assert_eq!(x.coeffs(), &[1, 3, 3, 1]);
        assert_eq!(x.to_string(), "1 + 3t + 3t^2 + t^3");
    }

    proptest! {
        #[test]
        fn multiply_then_divide(a in prop::collection::vec(-20i64..20, 0..8),
                                b in prop::collection::vec(-20i64..20, 1..6)) {
            let mut b = b;
            *b.last_mut().unwrap() = 1;
            let (a, b) = (p(&a), p(&b));
            prop_assert_eq!((&a * &b).div_exact(&b).unwrap(), a);
        }

        #[test]
        fn eval_is_a_ring_homomorphism(a in prop::collection::vec(-9i64..9, 0..6),
                                       b in prop::collection::vec(-9i64..9, 0..6),
                                       x in -5i64..5) {
            let (a, b, x) = (p(&a), p(&b), BigInt::from(x));
            prop_assert_eq!((&a * &b).eval(&x), a.eval(&x) * b.eval(&x));
            prop_assert_eq!((&a + &b).eval(&x), a.eval(&x) + b.eval(&x));
        }
    }
}
