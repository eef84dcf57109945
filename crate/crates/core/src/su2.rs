//! SU(2) as unit quaternions and su(2) as purely imaginary quaternions.
//!
//! The matrix identification is fixed once:
//!
//! ```text
//! w + x i + y j + z k  <->  [[ w + x i,  y + z i],
//!                            [-y + z i,  w - x i]]
//! ```
//!
//! so `tr q = 2w`, `diag(e^{iθ}, e^{-iθ}) <-> cos θ + sin θ i` and
//! `[[0, 1], [-1, 0]] <-> j`.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::scalar::{Real, Tolerances};

/// A point of SU(2), stored as a unit quaternion.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SU2Element<T> {
    w: T,
    x: T,
    y: T,
    z: T,
}

/// An element `x i + y j + z k` of su(2).
#[derive(Debug, Clone, Copy, PartialEq, Default, serde::Serialize, serde::Deserialize)]
pub struct AlgebraVector<T> {
    pub x: T,
    pub y: T,
    pub z: T,
}

impl<T: Real> AlgebraVector<T> {
    pub fn new(x: T, y: T, z: T) -> Self {
        Self { x, y, z }
    }

    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero(), T::zero())
    }

    pub fn i() -> Self {
        Self::new(T::one(), T::zero(), T::zero())
    }

    pub fn j() -> Self {
        Self::new(T::zero(), T::one(), T::zero())
    }

    pub fn k() -> Self {
        Self::new(T::zero(), T::zero(), T::one())
    }

    /// Standard basis vector `i`, `j` or `k` for `axis` 0, 1, 2.
    pub fn basis(axis: usize) -> Self {
        match axis {
            0 => Self::i(),
            1 => Self::j(),
            2 => Self::k(),
            _ => panic!("su(2) has three basis vectors, got index {axis}"),
        }
    }

    pub fn from_array(v: [T; 3]) -> Self {
        Self::new(v[0], v[1], v[2])
    }

    pub fn to_array(self) -> [T; 3] {
        [self.x, self.y, self.z]
    }

    pub fn scale(self, s: T) -> Self {
        Self::new(self.x * s, self.y * s, self.z * s)
    }

    /// Euclidean dot product of coefficient vectors; equals `-½ tr(ab)`.
    pub fn dot(self, other: Self) -> T {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn cross(self, o: Self) -> Self {
        Self::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    pub fn norm(self) -> T {
        self.dot(self).sqrt()
    }

    /// Lie bracket `ab - ba` of purely imaginary quaternions, which is `2 a × b`.
    pub fn bracket(self, other: Self) -> Self {
        self.cross(other).scale(T::lit(2.0))
    }

    /// `-½ tr(ab)` computed through the quaternion product.
    pub fn trace_pairing(self, other: Self) -> T {
        let a = SU2Element::raw(T::zero(), self.x, self.y, self.z);
        let b = SU2Element::raw(T::zero(), other.x, other.y, other.z);
        -a.raw_mul(&b).w
    }

    /// Unit vector along `self`, or `None` for (numerically) zero vectors.
    pub fn normalized(self) -> Option<Self> {
        let n = self.norm();
        (n > T::epsilon()).then(|| self.scale(T::one() / n))
    }

    /// Some unit vector orthogonal to `self`, chosen deterministically.
    pub fn orthogonal_unit(self) -> Self {
        let a = self.to_array().map(|v| v.abs());
        let reference = if a[0] <= a[1] && a[0] <= a[2] {
            Self::i()
        } else if a[1] <= a[2] {
            Self::j()
        } else {
            Self::k()
        };
        self.cross(reference).normalized().unwrap_or_else(Self::j)
    }
}

impl<T: Real> Add for AlgebraVector<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl<T: Real> Sub for AlgebraVector<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl<T: Real> Neg for AlgebraVector<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y, -self.z)
    }
}

impl<T: Real> SU2Element<T> {
    fn raw(w: T, x: T, y: T, z: T) -> Self {
        Self { w, x, y, z }
    }

    /// Builds an element from quaternion components, projecting onto the unit sphere.
    ///
    /// The zero quaternion maps to the identity.
    pub fn new(w: T, x: T, y: T, z: T) -> Self {
        Self::raw(w, x, y, z).renormalized()
    }

    pub fn identity() -> Self {
        Self::raw(T::one(), T::zero(), T::zero(), T::zero())
    }

    pub fn minus_identity() -> Self {
        Self::raw(-T::one(), T::zero(), T::zero(), T::zero())
    }

    pub fn i() -> Self {
        Self::raw(T::zero(), T::one(), T::zero(), T::zero())
    }

    pub fn j() -> Self {
        Self::raw(T::zero(), T::zero(), T::one(), T::zero())
    }

    pub fn k() -> Self {
        Self::raw(T::zero(), T::zero(), T::zero(), T::one())
    }

    /// `cos θ + sin θ i`, i.e. `diag(e^{iθ}, e^{-iθ})`.
    pub fn diagonal(theta: T) -> Self {
        Self::raw(theta.cos(), theta.sin(), T::zero(), T::zero())
    }

    pub fn w(&self) -> T {
        self.w
    }

    pub fn x(&self) -> T {
        self.x
    }

    pub fn y(&self) -> T {
        self.y
    }

    pub fn z(&self) -> T {
        self.z
    }

    pub fn components(&self) -> [T; 4] {
        [self.w, self.x, self.y, self.z]
    }

    /// Imaginary part as an algebra vector.
    pub fn vector_part(&self) -> AlgebraVector<T> {
        AlgebraVector::new(self.x, self.y, self.z)
    }

    pub fn norm(&self) -> T {
        (self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    fn renormalized(self) -> Self {
        let n = self.norm();
        if n <= T::min_positive_value() {
            return Self::identity();
        }
        Self::raw(self.w / n, self.x / n, self.y / n, self.z / n)
    }

    fn raw_mul(&self, q: &Self) -> Self {
        let p = self;
        Self::raw(
            p.w * q.w - p.x * q.x - p.y * q.y - p.z * q.z,
            p.w * q.x + p.x * q.w + p.y * q.z - p.z * q.y,
            p.w * q.y - p.x * q.z + p.y * q.w + p.z * q.x,
            p.w * q.z + p.x * q.y - p.y * q.x + p.z * q.w,
        )
    }

    /// Group product, renormalized.
    pub fn multiply(&self, q: &Self) -> Self {
        self.raw_mul(q).renormalized()
    }

    pub fn inverse(&self) -> Self {
        Self::raw(self.w, -self.x, -self.y, -self.z)
    }

    /// `a b a⁻¹ b⁻¹`.
    pub fn commutator(&self, b: &Self) -> Self {
        self.multiply(b)
            .multiply(&self.inverse())
            .multiply(&b.inverse())
    }

    /// `½ tr q`, which is the real part.
    pub fn half_trace(&self) -> T {
        self.w
    }

    /// `g q g⁻¹`.
    pub fn conjugate_by(&self, g: &Self) -> Self {
        g.multiply(self).multiply(&g.inverse())
    }

    /// `Ad_g v = g v g⁻¹` as an algebra vector (a rotation of the coefficient vector).
    pub fn adjoint(&self, v: AlgebraVector<T>) -> AlgebraVector<T> {
        // v + 2w (u × v) + 2 u × (u × v), u the vector part
        let u = self.vector_part();
        let uv = u.cross(v);
        let two = T::lit(2.0);
        v + uv.scale(two * self.w) + u.cross(uv).scale(two)
    }

    /// `Ad_{g⁻¹} v`.
    pub fn adjoint_inverse(&self, v: AlgebraVector<T>) -> AlgebraVector<T> {
        self.inverse().adjoint(v)
    }

    /// Group exponential of `v`: `cos|v| + sin|v| v/|v|`.
    pub fn exp(v: AlgebraVector<T>) -> Self {
        let theta = v.norm();
        // sin θ / θ, with a series near zero
        let sinc = if theta < T::lit(1e-4) {
            let t2 = theta * theta;
            T::one() - t2 / T::lit(6.0) + t2 * t2 / T::lit(120.0)
        } else {
            theta.sin() / theta
        };
        Self::raw(theta.cos(), v.x * sinc, v.y * sinc, v.z * sinc).renormalized()
    }

    /// Principal logarithm, `|v| ∈ [0, π)`; fails within `tol.antipode` of `-I`.
    pub fn log_with(&self, tol: &Tolerances) -> Result<AlgebraVector<T>> {
        if self.w + T::one() < T::lit(tol.antipode) {
            return Err(Error::AntipodalLog {
                half_trace: self.w.to_f64().unwrap_or(f64::NAN),
            });
        }
        let u = self.vector_part();
        let s = u.norm();
        let theta = s.atan2(self.w);
        // θ / sin θ
        let factor = if s < T::lit(1e-8) && self.w > T::zero() {
            T::one() + s * s / T::lit(6.0)
        } else {
            theta / s
        };
        Ok(u.scale(factor))
    }

    pub fn log(&self) -> Result<AlgebraVector<T>> {
        self.log_with(&Tolerances::default())
    }

    /// Haar-distributed sample: a normalized vector of four standard Gaussians.
    pub fn haar_sample<R: Rng + ?Sized>(rng: &mut R) -> Self
    where
        StandardNormal: Distribution<T>,
    {
        loop {
            let c: [T; 4] = std::array::from_fn(|_| StandardNormal.sample(rng));
            let q = Self::raw(c[0], c[1], c[2], c[3]);
            if q.norm() > T::lit(1e-6) {
                return q.renormalized();
            }
        }
    }

    /// `g · (cos πt + sin πt · i) · g⁻¹`, the conjugacy class with half trace `cos πt`.
    pub fn class_element(t: &BigRational, conjugator: &Self) -> Self {
        let rep = Self::class_representative(t);
        if rep.vector_part().norm() == T::zero() {
            // ±1 is central
            return rep;
        }
        rep.conjugate_by(conjugator)
    }

    /// `cos πt + sin πt · n` for a unit axis `n`.
    pub fn class_element_axis(t: &BigRational, axis: AlgebraVector<T>) -> Self {
        let (c, s) = cos_sin_pi(t);
        let n = axis.normalized().unwrap_or_else(AlgebraVector::i);
        Self::raw(c, s * n.x, s * n.y, s * n.z).renormalized()
    }

    /// `diag(e^{iπt}, e^{-iπt})`.
    pub fn class_representative(t: &BigRational) -> Self {
        Self::class_element_axis(t, AlgebraVector::i())
    }

    /// The 2×2 complex matrix of this element under the fixed identification.
    pub fn to_matrix(&self) -> [[Complex<T>; 2]; 2] {
        [
            [Complex::new(self.w, self.x), Complex::new(self.y, self.z)],
            [Complex::new(-self.y, self.z), Complex::new(self.w, -self.x)],
        ]
    }

    /// Largest absolute component difference.
    pub fn distance_max(&self, other: &Self) -> T {
        self.components()
            .iter()
            .zip(other.components().iter())
            .map(|(a, b)| (*a - *b).abs())
            .fold(T::zero(), T::max)
    }

    /// Distance to the identity measured through the principal log; `π` at `-I`.
    pub fn angle_from_identity(&self) -> T {
        self.vector_part().norm().atan2(self.w)
    }
}

impl<T: Real> Mul for SU2Element<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.multiply(&rhs)
    }
}

impl<T: Real> Neg for SU2Element<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::raw(-self.w, -self.x, -self.y, -self.z)
    }
}

/// `(cos πt, sin πt)` with exact values at multiples of ½.
pub fn cos_sin_pi<T: Real>(t: &BigRational) -> (T, T) {
    let two = BigRational::from_integer(2.into());
    // reduce into [0, 2)
    let r = t - (t / &two).floor() * &two;
    let half = BigRational::new(1.into(), 2.into());
    if r.is_zero() {
        (T::one(), T::zero())
    } else if r == half {
        (T::zero(), T::one())
    } else if r.is_one() {
        (-T::one(), T::zero())
    } else if r == BigRational::new(3.into(), 2.into()) {
        (T::zero(), -T::one())
    } else {
        let angle = T::PI() * T::lit(r.to_f64().expect("finite rational"));
        (angle.cos(), angle.sin())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    type Q = SU2Element<f64>;
    type V = AlgebraVector<f64>;

    fn rat(p: i64, q: i64) -> BigRational {
        BigRational::new(p.into(), q.into())
    }

    fn close(a: &Q, b: &Q, tol: f64) -> bool {
        a.distance_max(b) < tol
    }

    #[test]
    fn quaternion_relations() {
        let q = Q::new(0.3, -0.1, 0.7, 0.2);
        assert!(close(&Q::identity().multiply(&q), &q, 1e-15));
        assert!(close(&Q::i().multiply(&Q::j()), &Q::k(), 1e-15));
        assert!(close(&Q::j().multiply(&Q::i()), &-Q::k(), 1e-15));
    }

    #[test]
    fn matrix_identification() {
        let m = Q::i().to_matrix();
        assert_eq!(m[0][0], Complex::new(0.0, 1.0));
        assert_eq!(m[1][1], Complex::new(0.0, -1.0));
        let jm = Q::j().to_matrix();
        assert_eq!(jm[0][1], Complex::new(1.0, 0.0));
        assert_eq!(jm[1][0], Complex::new(-1.0, 0.0));

        // the product of matrices matches the quaternion product
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let p = Q::haar_sample(&mut rng);
        let q = Q::haar_sample(&mut rng);
        let (a, b) = (p.to_matrix(), q.to_matrix());
        let pq = p.multiply(&q).to_matrix();
        for r in 0..2 {
            for c in 0..2 {
                let e = a[r][0] * b[0][c] + a[r][1] * b[1][c];
                assert!((e - pq[r][c]).norm() < 1e-14);
            }
        }
        let tr = pq[0][0] + pq[1][1];
        assert!((tr.re / 2.0 - p.multiply(&q).half_trace()).abs() < 1e-15);
        assert!(tr.im.abs() < 1e-15);

        let theta = 0.37;
        let d = Q::diagonal(theta).to_matrix();
        assert!((d[0][0] - Complex::from_polar(1.0, theta)).norm() < 1e-15);
    }

    #[test]
    fn commutator_examples() {
        assert!(close(
            &Q::i().commutator(&Q::j()),
            &Q::minus_identity(),
            1e-15
        ));
        let q = Q::new(0.1, 0.2, 0.3, 0.4);
        assert!(close(&q.commutator(&Q::identity()), &Q::identity(), 1e-15));
        assert!(close(&Q::i().commutator(&Q::i()), &Q::identity(), 1e-15));
    }

    #[test]
    fn half_trace_examples() {
        assert_eq!(Q::i().half_trace(), 0.0);
        assert_eq!(Q::identity().half_trace(), 1.0);
        assert_eq!(Q::minus_identity().half_trace(), -1.0);
        let q = Q::diagonal(std::f64::consts::FRAC_PI_4);
        assert!((q.half_trace() - 2f64.sqrt() / 2.0).abs() < 1e-15);
    }

    #[test]
    fn adjoint_examples() {
        let v = V::new(0.3, -1.2, 0.5);
        assert_eq!(Q::identity().adjoint(v), v);
        let r = Q::i().adjoint(V::j());
        assert!((r - (-V::j())).norm() < 1e-15);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let g = Q::haar_sample(&mut rng);
            let h = Q::haar_sample(&mut rng);
            assert!((g.adjoint(v).norm() - v.norm()).abs() < 1e-12);
            let lhs = g.multiply(&h).adjoint(v);
            let rhs = g.adjoint(h.adjoint(v));
            assert!((lhs - rhs).norm() < 1e-12);
        }
    }

    #[test]
    fn exp_log_examples() {
        assert_eq!(Q::exp(V::zero()), Q::identity());
        let q = Q::exp(V::i().scale(std::f64::consts::FRAC_PI_2));
        assert!(close(&q, &Q::i(), 1e-15));
        assert!(matches!(
            Q::minus_identity().log(),
            Err(Error::AntipodalLog { .. })
        ));
        let near = Q::new(-1.0, 1e-3, 0.0, 0.0);
        assert!(near.log().is_ok());
        let l = Q::new(1.0, 1e-12, 0.0, 0.0).log().unwrap();
        assert!((l.x - 1e-12).abs() < 1e-24);
    }

    #[test]
    fn exp_log_round_trip_on_haar_samples() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        for _ in 0..1000 {
            let q = Q::haar_sample(&mut rng);
            let v = q.log().unwrap();
            assert!(v.norm() < std::f64::consts::PI);
            assert!(close(&Q::exp(v), &q, 1e-10));
        }
    }

    #[test]
    fn haar_is_reproducible_and_centered() {
        let a = Q::haar_sample(&mut ChaCha8Rng::seed_from_u64(5));
        let b = Q::haar_sample(&mut ChaCha8Rng::seed_from_u64(5));
        assert_eq!(a, b);

        let n = 100_000;
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let fixed = Q::new(0.6, 0.0, 0.8, 0.0);
        let (mut mean_w, mut mean_conj) = (0.0, 0.0);
        for _ in 0..n {
            let g = Q::haar_sample(&mut rng);
            mean_w += g.w();
            mean_conj += fixed.conjugate_by(&g).half_trace();
        }
        mean_w /= n as f64;
        mean_conj /= n as f64;
        let sigma = 0.5 / (n as f64).sqrt();
        assert!(mean_w.abs() < 3.0 * sigma, "mean w = {mean_w}");
        assert!((mean_conj - fixed.half_trace()).abs() < 1e-12);
    }

    #[test]
    fn class_element_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let g = Q::haar_sample(&mut rng);
        assert!(close(
            &Q::class_element(&rat(1, 1), &g),
            &Q::minus_identity(),
            1e-15
        ));
        assert!(close(
            &Q::class_element(&rat(1, 2), &Q::identity()),
            &Q::i(),
            1e-15
        ));
        let c = Q::class_element(&rat(1, 3), &g);
        assert!((c.half_trace() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn pairing_matches_dot() {
        let a = V::new(0.3, 1.1, -0.4);
        let b = V::new(-2.0, 0.5, 0.25);
        assert!((a.trace_pairing(b) - a.dot(b)).abs() < 1e-15);
        // bracket via quaternion products
        let qa = SU2Element::raw(0.0, a.x, a.y, a.z);
        let qb = SU2Element::raw(0.0, b.x, b.y, b.z);
        let ab = qa.raw_mul(&qb);
        let ba = qb.raw_mul(&qa);
        let br = a.bracket(b);
        assert!((ab.x - ba.x - br.x).abs() < 1e-15);
        assert!((ab.y - ba.y - br.y).abs() < 1e-15);
        assert!((ab.z - ba.z - br.z).abs() < 1e-15);
    }

    #[test]
    fn works_in_single_precision() {
        let q = SU2Element::<f32>::i().multiply(&SU2Element::j());
        assert!(q.distance_max(&SU2Element::k()) < 1e-6);
        let c = SU2Element::<f32>::class_representative(&rat(1, 3));
        assert!((c.half_trace() - 0.5).abs() < 1e-6);
    }
}
