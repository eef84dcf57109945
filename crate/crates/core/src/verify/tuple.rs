//! Points of the representation variety, the product map `μ` and its derivative.
//!
//! Tangent conventions: `A_i`, `B_i` move as `X exp(s x)`, a class element
//! moves by conjugation `exp(-s d) C exp(s d)` with body velocity
//! `c = (1 - Ad_{C⁻¹}) d`, and derivatives of `μ` are left-trivialized
//! (`μ⁻¹ dμ`).

use nalgebra::{DMatrix, DVector, Matrix2, Vector2};
use num_traits::{One, Zero};
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::weights::WeightConfig;
use crate::{Algebra, Su2};

/// A tuple `(A_1, B_1, …, A_g, B_g, C_1, …, C_n)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RepTuple {
    pub a: Vec<Su2>,
    pub b: Vec<Su2>,
    pub c: Vec<Su2>,
    pub cfg: WeightConfig,
}

/// Largest allowed deviation of `½ tr C_j` from `cos πt_j`.
pub const CLASS_TOLERANCE: f64 = 1e-10;

impl RepTuple {
    /// Checks lengths and class membership of every `C_j`.
    pub fn new(cfg: WeightConfig, a: Vec<Su2>, b: Vec<Su2>, c: Vec<Su2>) -> Result<Self> {
        let p = Self { a, b, c, cfg };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let g = self.cfg.genus() as usize;
        if self.a.len() != g || self.b.len() != g || self.c.len() != self.cfg.punctures() {
            return Err(Error::ShapeMismatch);
        }
        if self.class_deviation() > CLASS_TOLERANCE {
            return Err(Error::ShapeMismatch);
        }
        Ok(())
    }

    /// `max_j |½ tr C_j − cos πt_j|`.
    pub fn class_deviation(&self) -> f64 {
        self.c
            .iter()
            .zip(self.cfg.weights())
            .map(|(c, t)| {
                let (cos, _) = crate::su2::cos_sin_pi::<f64>(t);
                (c.half_trace() - cos).abs()
            })
            .fold(0.0, f64::max)
    }

    pub fn genus(&self) -> usize {
        self.a.len()
    }

    pub fn punctures(&self) -> usize {
        self.c.len()
    }

    /// Random tuple: Haar `A_i`, `B_i` and Haar-conjugated class representatives.
    pub fn random<R: Rng + ?Sized>(cfg: &WeightConfig, rng: &mut R) -> Self {
        let g = cfg.genus() as usize;
        let mut a = Vec::with_capacity(g);
        let mut b = Vec::with_capacity(g);
        for _ in 0..g {
            a.push(Su2::haar_sample(rng));
            b.push(Su2::haar_sample(rng));
        }
        let c = cfg
            .weights()
            .iter()
            .map(|t| Su2::class_element(t, &Su2::haar_sample(rng)))
            .collect();
        Self {
            a,
            b,
            c,
            cfg: cfg.clone(),
        }
    }

    /// `½ tr A_g`.
    pub fn f_value(&self) -> f64 {
        self.a.last().map_or(f64::NAN, Su2::half_trace)
    }

    /// Conjugates every entry by `h`.
    pub fn conjugate(&self, h: &Su2) -> Self {
        let conj = |v: &[Su2]| v.iter().map(|x| x.conjugate_by(h)).collect();
        Self {
            a: conj(&self.a),
            b: conj(&self.b),
            c: conj(&self.c),
            cfg: self.cfg.clone(),
        }
    }

    /// The tuple without its last handle (genus `g - 1`, same punctures).
    pub fn drop_last_handle(&self) -> Self {
        let g = self.genus().saturating_sub(1);
        Self {
            a: self.a[..g].to_vec(),
            b: self.b[..g].to_vec(),
            c: self.c.clone(),
            cfg: self.cfg.with_genus(g as u32),
        }
    }

    /// Handle `i` alone as a genus-one tuple without punctures.
    pub fn handle(&self, i: usize) -> Self {
        Self {
            a: vec![self.a[i]],
            b: vec![self.b[i]],
            c: Vec::new(),
            cfg: WeightConfig::raw(1, Vec::new()).expect("no weights"),
        }
    }

    /// `|log μ(p)|`, or `π` at the antipode.
    pub fn mu_residual(&self) -> f64 {
        mu_eval(self).angle_from_identity()
    }

    /// Whether puncture `j` lies in a point class (`±I`), which has no tangent directions.
    pub fn is_frozen(&self, j: usize) -> bool {
        let t = &self.cfg.weights()[j];
        t.is_zero() || t.is_one()
    }
}

/// `(∏ [A_i, B_i]) (∏ C_j)`, multiplied left to right.
pub fn mu_eval(p: &RepTuple) -> Su2 {
    let mut acc = Su2::identity();
    for (a, b) in p.a.iter().zip(&p.b) {
        acc = acc.multiply(&a.commutator(b));
    }
    for c in &p.c {
        acc = acc.multiply(c);
    }
    acc
}

/// Tangent vector at a tuple, with body velocities `c_j` tangent to the classes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TangentVector {
    pub a: Vec<Algebra>,
    pub b: Vec<Algebra>,
    pub c: Vec<Algebra>,
}

impl TangentVector {
    pub fn zero(g: usize, n: usize) -> Self {
        Self {
            a: vec![Algebra::zero(); g],
            b: vec![Algebra::zero(); g],
            c: vec![Algebra::zero(); n],
        }
    }

    /// Class directions given by conjugators: `c_j = (1 − Ad_{C_j⁻¹}) d_j`.
    pub fn from_conjugators(p: &RepTuple, a: Vec<Algebra>, b: Vec<Algebra>, d: &[Algebra]) -> Self {
        let c =
            p.c.iter()
                .zip(d)
                .map(|(cj, dj)| *dj - cj.adjoint_inverse(*dj))
                .collect();
        Self { a, b, c }
    }

    pub fn scale(&self, s: f64) -> Self {
        let sc = |v: &[Algebra]| v.iter().map(|x| x.scale(s)).collect();
        Self {
            a: sc(&self.a),
            b: sc(&self.b),
            c: sc(&self.c),
        }
    }
}

/// `Dμ(a, b, c)`, term by term:
///
/// `Σ_i Ad(∏_{k>i}[A_k,B_k] ∏_j C_j)⁻¹ Ad(B_i A_i)((Ad_{B_i⁻¹} − 1) a_i + (1 − Ad_{A_i⁻¹}) b_i)
///  + Σ_j Ad(∏_{ℓ>j} C_ℓ)⁻¹ c_j`.
pub fn dmu_apply(p: &RepTuple, v: &TangentVector) -> Algebra {
    let g = p.genus();
    let n = p.punctures();

    // suffix products of the class elements: tail[j] = ∏_{ℓ≥j} C_ℓ
    let mut tail = vec![Su2::identity(); n + 1];
    for j in (0..n).rev() {
        tail[j] = p.c[j].multiply(&tail[j + 1]);
    }
    let mut out = Algebra::zero();
    for j in 0..n {
        out = out + tail[j + 1].adjoint_inverse(v.c[j]);
    }

    // suffix products of commutators followed by all class elements
    let mut suffix = tail[0];
    for i in (0..g).rev() {
        let (a, b) = (p.a[i], p.b[i]);
        let inner = (b.adjoint_inverse(v.a[i]) - v.a[i]) + (v.b[i] - a.adjoint_inverse(v.b[i]));
        out = out + suffix.adjoint_inverse(b.multiply(&a).adjoint(inner));
        suffix = a.commutator(&b).multiply(&suffix);
    }
    out
}

/// Coordinates on the tangent space of `SU(2)^{2g} × ∏ Γ_j` at a tuple:
/// three per `a_i` and `b_i`, two per non-point class.
#[derive(Debug, Clone)]
pub struct Chart {
    genus: usize,
    /// Orthonormal basis of the plane orthogonal to the axis of `C_j`.
    planes: Vec<Option<(Algebra, Algebra)>>,
}

impl Chart {
    pub fn at(p: &RepTuple) -> Self {
        let planes = (0..p.punctures())
            .map(|j| {
                if p.is_frozen(j) {
                    return None;
                }
                let axis = p.c[j].vector_part().normalized().unwrap_or_else(Algebra::i);
                let e1 = axis.orthogonal_unit();
                Some((e1, axis.cross(e1)))
            })
            .collect();
        Self {
            genus: p.genus(),
            planes,
        }
    }

    pub fn dim(&self) -> usize {
        6 * self.genus + 2 * self.planes.iter().flatten().count()
    }

    /// Offset of `a_g` (the last handle's `A`) in the coordinate vector.
    pub fn last_a_offset(&self) -> Option<usize> {
        self.genus.checked_sub(1).map(|i| 6 * i)
    }

    pub fn tangent(&self, x: &[f64]) -> TangentVector {
        assert_eq!(x.len(), self.dim());
        let vec3 = |o: usize| Algebra::new(x[o], x[o + 1], x[o + 2]);
        let mut a = Vec::with_capacity(self.genus);
        let mut b = Vec::with_capacity(self.genus);
        for i in 0..self.genus {
            a.push(vec3(6 * i));
            b.push(vec3(6 * i + 3));
        }
        let mut o = 6 * self.genus;
        let mut c = Vec::with_capacity(self.planes.len());
        for plane in &self.planes {
            match plane {
                Some((e1, e2)) => {
                    c.push(e1.scale(x[o]) + e2.scale(x[o + 1]));
                    o += 2;
                }
                None => c.push(Algebra::zero()),
            }
        }
        TangentVector { a, b, c }
    }

    /// Inverse of [`Chart::tangent`] for class-tangent vectors.
    pub fn coords(&self, v: &TangentVector) -> Vec<f64> {
        let mut x = Vec::with_capacity(self.dim());
        for i in 0..self.genus {
            x.extend(v.a[i].to_array());
            x.extend(v.b[i].to_array());
        }
        for (plane, c) in self.planes.iter().zip(&v.c) {
            if let Some((e1, e2)) = plane {
                x.push(c.dot(*e1));
                x.push(c.dot(*e2));
            }
        }
        x
    }

    /// Moves `p` along coordinates `x`: `X exp(x)` for handles and
    /// `exp(-d) C exp(d)` for classes, with `(1 - Ad_{C⁻¹}) d` the class velocity.
    pub fn retract(&self, p: &RepTuple, x: &[f64]) -> RepTuple {
        let v = self.tangent(x);
        let mut q = p.clone();
        for i in 0..self.genus {
            q.a[i] = p.a[i].multiply(&Su2::exp(v.a[i]));
            q.b[i] = p.b[i].multiply(&Su2::exp(v.b[i]));
        }
        for (j, plane) in self.planes.iter().enumerate() {
            if let Some((e1, e2)) = plane {
                let d = conjugator_for(&p.c[j], *e1, *e2, v.c[j]);
                let h = Su2::exp(d);
                q.c[j] = h.inverse().multiply(&p.c[j]).multiply(&h);
            }
        }
        q
    }

    /// `3 × dim` matrix of `Dμ` in these coordinates.
    pub fn jacobian(&self, p: &RepTuple) -> DMatrix<f64> {
        let n = self.dim();
        let mut j = DMatrix::zeros(3, n);
        let mut e = vec![0.0; n];
        for k in 0..n {
            e[k] = 1.0;
            let col = dmu_apply(p, &self.tangent(&e)).to_array();
            e[k] = 0.0;
            for r in 0..3 {
                j[(r, k)] = col[r];
            }
        }
        j
    }

    /// Coordinates of the infinitesimal conjugation by `ξ`.
    pub fn orbit_direction(&self, p: &RepTuple, xi: Algebra) -> Vec<f64> {
        let ad = |x: &Su2| x.adjoint_inverse(xi) - xi;
        let v = TangentVector {
            a: p.a.iter().map(ad).collect(),
            b: p.b.iter().map(ad).collect(),
            c: p.c.iter().map(ad).collect(),
        };
        self.coords(&v)
    }

    /// Gradient of `f = ½ tr A_g` in these coordinates.
    pub fn f_gradient(&self, p: &RepTuple) -> DVector<f64> {
        let mut grad = DVector::zeros(self.dim());
        if let Some(o) = self.last_a_offset() {
            // d/ds Re(A exp(s a)) = −vec(A)·a
            let u = p.a[self.genus - 1].vector_part().to_array();
            for r in 0..3 {
                grad[o + r] = -u[r];
            }
        }
        grad
    }
}

/// Solves `(1 − Ad_{C⁻¹}) d = c` for `d` in the plane spanned by `e1`, `e2`.
fn conjugator_for(cj: &Su2, e1: Algebra, e2: Algebra, c: Algebra) -> Algebra {
    let img = |e: Algebra| e - cj.adjoint_inverse(e);
    let (m1, m2) = (img(e1), img(e2));
    let m = Matrix2::new(m1.dot(e1), m2.dot(e1), m1.dot(e2), m2.dot(e2));
    let rhs = Vector2::new(c.dot(e1), c.dot(e2));
    let sol = m
        .try_inverse()
        .map(|inv| inv * rhs)
        .unwrap_or_else(Vector2::zeros);
    e1.scale(sol[0]) + e2.scale(sol[1])
}

/// Numerical rank of `Dμ`: singular values above `threshold · σ_max`.
pub fn rank_dmu(p: &RepTuple, threshold: f64) -> usize {
    let chart = Chart::at(p);
    if chart.dim() == 0 {
        return 0;
    }
    let sv = chart.jacobian(p).singular_values();
    let max = sv.max();
    if max <= 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > threshold * max).count()
}
