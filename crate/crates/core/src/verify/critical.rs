//! Explicit critical tuples of `f` and their Morse indices.
//!
//! The interior critical points are conjugate to
//! `A_g = cos πκ − sin πκ·i`, `B_g = j`, diagonal `A_i, B_i` for `i < g`
//! and `C_j = cos πt_j ± sin πt_j·i` (plus sign for `j ∈ J`), where
//! `κ ≡ κ_J (mod 1)`. The two lifts `κ_J` and `κ_J + 1` give distinct
//! tuples; `(J, κ)` and `(J^c, −κ)` are conjugate under `j`.
//!
//! The Hessian of `f` on the fiber is taken as the Hessian of the
//! Lagrangian `f − λ·log μ` on the ambient product, restricted to the
//! slice `ker Dμ ∩ (orbit directions)^⊥`.

use nalgebra::{DMatrix, DVector, Matrix3, SymmetricEigen, Vector3};
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::betti::{dimension, torus_index};
use crate::error::{Error, Result};
use crate::verify::tuple::{mu_eval, Chart, RepTuple};
use crate::weights::{kappa, require_regular, Mode, Subset, WeightConfig};
use crate::{Algebra, Su2};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HessianConfig {
    /// Central-difference step along chart curves.
    pub step: f64,
    /// Eigenvalues with `|λ| ≤ zero_threshold · max|λ|` count as zero.
    pub zero_threshold: f64,
    /// Largest `|log μ|` and multiplier residual accepted at a critical point.
    pub critical_tolerance: f64,
}

impl Default for HessianConfig {
    fn default() -> Self {
        Self {
            step: 1e-4,
            zero_threshold: 1e-3,
            critical_tolerance: 1e-8,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HessianReport {
    pub index: usize,
    pub nullity: usize,
    pub positive: usize,
    /// Ascending.
    pub spectrum: Vec<f64>,
    pub slice_dim: usize,
    pub f_value: f64,
}

/// The critical tuple for subset `J` and `κ = κ_J + lift`, with the other
/// handles at the identity.
pub fn critical_tuple(cfg: &WeightConfig, subset: Subset, lift: i64) -> Result<RepTuple> {
    let g = cfg.genus() as usize;
    critical_tuple_on_torus(cfg, subset, lift, &vec![(0.0, 0.0); g.saturating_sub(1)])
}

/// As [`critical_tuple`], placing handle `i < g` at
/// `(A_i, B_i) = (exp(α_i i), exp(β_i i))` for `angles[i] = (α_i, β_i)`.
pub fn critical_tuple_on_torus(
    cfg: &WeightConfig,
    subset: Subset,
    lift: i64,
    angles: &[(f64, f64)],
) -> Result<RepTuple> {
    require_regular(cfg)?;
    let g = cfg.genus() as usize;
    if g == 0 {
        return Err(Error::GenusZero);
    }
    if angles.len() != g - 1 {
        return Err(Error::ShapeMismatch);
    }
    let k = kappa(cfg, subset).value + BigRational::from_integer(lift.into());
    let diag = |theta: f64| Su2::exp(Algebra::i().scale(theta));

    let mut a: Vec<Su2> = angles.iter().map(|&(al, _)| diag(al)).collect();
    let mut b: Vec<Su2> = angles.iter().map(|&(_, be)| diag(be)).collect();
    a.push(Su2::class_element_axis(&k, -Algebra::i()));
    b.push(Su2::j());
    let c = cfg
        .weights()
        .iter()
        .enumerate()
        .map(|(j, t)| {
            let axis = if subset.contains(j) {
                Algebra::i()
            } else {
                -Algebra::i()
            };
            Su2::class_element_axis(t, axis)
        })
        .collect();
    RepTuple::new(cfg.clone(), a, b, c)
}

/// Half traces of `A_g, B_g, A_g B_g, C_j, A_g C_j`: conjugation invariants.
pub fn fingerprint(p: &RepTuple) -> Vec<f64> {
    let (Some(ag), Some(bg)) = (p.a.last(), p.b.last()) else {
        return p.c.iter().map(Su2::half_trace).collect();
    };
    let mut out = vec![
        ag.half_trace(),
        bg.half_trace(),
        ag.multiply(bg).half_trace(),
    ];
    out.extend(p.c.iter().map(Su2::half_trace));
    out.extend(p.c.iter().map(|c| ag.multiply(c).half_trace()));
    out
}

fn same_fingerprint(x: &[f64], y: &[f64]) -> bool {
    x.len() == y.len() && x.iter().zip(y).all(|(u, v)| (u - v).abs() < 1e-9)
}

/// Orthonormal basis (columns) of `ker Dμ ∩ (orbit directions)^⊥`.
fn slice_basis(p: &RepTuple, chart: &Chart, jac: &DMatrix<f64>) -> DMatrix<f64> {
    let n = chart.dim();
    let mut m = DMatrix::zeros(6, n);
    m.view_mut((0, 0), (3, n)).copy_from(jac);
    for axis in 0..3 {
        let o = chart.orbit_direction(p, Algebra::basis(axis));
        for (k, v) in o.into_iter().enumerate() {
            m[(3 + axis, k)] = v;
        }
    }
    let gram = m.transpose() * &m;
    let eig = SymmetricEigen::new(gram);
    let max = eig.eigenvalues.iter().cloned().fold(0.0, f64::max);
    let cols: Vec<DVector<f64>> = eig
        .eigenvalues
        .iter()
        .enumerate()
        .filter(|(_, &e)| e <= 1e-10 * max.max(1.0))
        .map(|(k, _)| eig.eigenvectors.column(k).into_owned())
        .collect();
    if cols.is_empty() {
        DMatrix::zeros(n, 0)
    } else {
        DMatrix::from_columns(&cols)
    }
}

/// Morse data of `f` on the fiber at a critical tuple, without the nullity check.
pub fn hessian_report(p: &RepTuple, hc: &HessianConfig) -> Result<HessianReport> {
    p.validate()?;
    if p.genus() == 0 {
        return Err(Error::GenusZero);
    }
    let chart = Chart::at(p);
    let jac = chart.jacobian(p);
    let grad = chart.f_gradient(p);

    let jjt: Matrix3<f64> = (&jac * jac.transpose())
        .fixed_view::<3, 3>(0, 0)
        .into_owned();
    let jg = &jac * &grad;
    let lambda = jjt
        .try_inverse()
        .map(|inv| inv * Vector3::new(jg[0], jg[1], jg[2]))
        .unwrap_or_else(Vector3::zeros);
    let lam = DVector::from_column_slice(lambda.as_slice());
    let gradient_residual = (&grad - jac.transpose() * &lam).norm();
    let mu_residual = p.mu_residual();
    if mu_residual > hc.critical_tolerance || gradient_residual > hc.critical_tolerance {
        return Err(Error::NotCritical {
            mu_residual,
            gradient_residual,
        });
    }

    let basis = slice_basis(p, &chart, &jac);
    let slice_dim = basis.ncols();
    let expected = dimension(&p.cfg);
    if expected != slice_dim as i64 {
        return Err(Error::SliceDimensionMismatch {
            expected,
            found: slice_dim,
        });
    }

    let lagrangian = |x: &DVector<f64>| -> Result<f64> {
        let q = chart.retract(p, x.as_slice());
        let r = mu_eval(&q).log()?;
        Ok(q.f_value() - (lambda[0] * r.x + lambda[1] * r.y + lambda[2] * r.z))
    };
    let h = hc.step;
    let l0 = lagrangian(&DVector::zeros(chart.dim()))?;
    let mut hess = DMatrix::zeros(slice_dim, slice_dim);
    for k in 0..slice_dim {
        let vk = basis.column(k).into_owned();
        let plus = lagrangian(&(&vk * h))?;
        let minus = lagrangian(&(&vk * -h))?;
        hess[(k, k)] = (plus - 2.0 * l0 + minus) / (h * h);
        for l in 0..k {
            let vl = basis.column(l).into_owned();
            let s = &vk + &vl;
            let d = &vk - &vl;
            let v = (lagrangian(&(&s * h))? - lagrangian(&(&d * h))? - lagrangian(&(&d * -h))?
                + lagrangian(&(&s * -h))?)
                / (4.0 * h * h);
            hess[(k, l)] = v;
            hess[(l, k)] = v;
        }
    }

    let mut spectrum: Vec<f64> = if slice_dim == 0 {
        Vec::new()
    } else {
        SymmetricEigen::new(hess)
            .eigenvalues
            .iter()
            .cloned()
            .collect()
    };
    spectrum.sort_by(f64::total_cmp);
    let scale = spectrum.iter().fold(0.0f64, |m, e| m.max(e.abs()));
    let zero = hc.zero_threshold * scale;
    let index = spectrum.iter().filter(|&&e| e < -zero).count();
    let positive = spectrum.iter().filter(|&&e| e > zero).count();
    Ok(HessianReport {
        index,
        nullity: slice_dim - index - positive,
        positive,
        spectrum,
        slice_dim,
        f_value: p.f_value(),
    })
}

/// Morse index at an interior critical tuple; the nullity must equal the
/// torus dimension `2g − 2`.
pub fn hessian_index(p: &RepTuple, hc: &HessianConfig) -> Result<HessianReport> {
    let report = hessian_report(p, hc)?;
    let expected = 2 * p.genus() - 2;
    if report.nullity != expected {
        return Err(Error::DegenerateHessian {
            expected,
            found: report.nullity,
        });
    }
    Ok(report)
}

/// One conjugacy class of interior critical tuples.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CensusClass {
    /// `(J, lift)` pairs whose tuples land in this class.
    pub members: Vec<(Subset, i64)>,
    pub fingerprint: Vec<f64>,
    pub hessian: HessianReport,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Census {
    pub classes: Vec<CensusClass>,
    pub expected_classes: usize,
    /// Ascending multiset of measured indices.
    pub indices: Vec<usize>,
    /// Ascending multiset `{2g + 2n − 2|J| + 4⌊κ_J⌋}`.
    pub expected_indices: Vec<usize>,
    pub expected_nullity: usize,
}

impl Census {
    pub fn mismatch(&self) -> Option<String> {
        if self.classes.len() != self.expected_classes {
            return Some(format!(
                "{} distinct classes, expected {}",
                self.classes.len(),
                self.expected_classes
            ));
        }
        if self.indices != self.expected_indices {
            return Some(format!(
                "indices {:?}, expected {:?}",
                self.indices, self.expected_indices
            ));
        }
        if let Some(c) = self
            .classes
            .iter()
            .find(|c| c.hessian.nullity != self.expected_nullity)
        {
            return Some(format!(
                "nullity {} at {:?}, expected {}",
                c.hessian.nullity, c.members, self.expected_nullity
            ));
        }
        None
    }
}

/// Builds every `(J, lift ∈ {0, 1})` tuple, groups them by fingerprint and
/// measures one Hessian per class. Mismatches are recorded, not raised.
pub fn census_report(cfg: &WeightConfig, hc: &HessianConfig) -> Result<Census> {
    require_regular(cfg)?;
    if cfg.mode() != Mode::Parabolic {
        return Err(Error::NotParabolic);
    }
    let n = cfg.punctures();
    // (fingerprint, members, representative)
    type Group = (Vec<f64>, Vec<(Subset, i64)>, RepTuple);
    let mut groups: Vec<Group> = Vec::new();
    for j in Subset::all(n) {
        for lift in 0..2 {
            let p = critical_tuple(cfg, j, lift)?;
            let fp = fingerprint(&p);
            match groups.iter_mut().find(|(f, _, _)| same_fingerprint(f, &fp)) {
                Some(group) => group.1.push((j, lift)),
                None => groups.push((fp, vec![(j, lift)], p)),
            }
        }
    }
    let classes = groups
        .into_iter()
        .map(|(fingerprint, members, p)| {
            Ok(CensusClass {
                members,
                fingerprint,
                hessian: hessian_report(&p, hc)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut indices: Vec<usize> = classes.iter().map(|c| c.hessian.index).collect();
    indices.sort_unstable();
    let mut expected_indices = Subset::all(n)
        .map(|j| torus_index(cfg, j).map(|i| i as usize))
        .collect::<Result<Vec<_>>>()?;
    expected_indices.sort_unstable();
    Ok(Census {
        classes,
        expected_classes: 1 << n,
        indices,
        expected_indices,
        expected_nullity: 2 * cfg.genus() as usize - 2,
    })
}

/// [`census_report`] that fails with `CensusMismatch` on any disagreement.
pub fn torus_census(cfg: &WeightConfig, hc: &HessianConfig) -> Result<Census> {
    let census = census_report(cfg, hc)?;
    match census.mismatch() {
        Some(msg) => Err(Error::CensusMismatch(msg)),
        None => Ok(census),
    }
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
    fn critical_tuple_examples() {
        let p = critical_tuple(&para(1, &[(1, 2)]), Subset::from_labels(&[1]), 0).unwrap();
        let a = Su2::exp(Algebra::i().scale(-std::f64::consts::FRAC_PI_4));
        assert!(p.a[0].distance_max(&a) < 1e-15);
        assert_eq!(p.b[0], Su2::j());
        assert!(p.c[0].distance_max(&Su2::i()) < 1e-15);
        assert!(p.mu_residual() < 1e-12);
        assert!((p.f_value() - 2f64.sqrt() / 2.0).abs() < 1e-15);

        let s2 = critical_tuple(&WeightConfig::classic(2), Subset::empty(), 0).unwrap();
        assert_eq!(s2.a[1], Su2::i());
        assert_eq!(s2.f_value(), 0.0);
        assert!(s2.mu_residual() < 1e-12);

        let cfg = para(2, &[(1, 3), (2, 7), (4, 5)]);
        for j in Subset::all(3) {
            for lift in 0..2 {
                let p = critical_tuple_on_torus(&cfg, j, lift, &[(0.3, -1.2)]).unwrap();
                assert!(p.mu_residual() < 1e-12);
            }
        }
        assert!(matches!(
            critical_tuple(&para(1, &[(1, 2), (1, 2)]), Subset::empty(), 0),
            Err(Error::IrregularWeights { .. })
        ));
    }

    #[test]
    fn j_conjugation_pairs_labels() {
        let cfg = para(1, &[(1, 3), (1, 5)]);
        let p = critical_tuple(&cfg, Subset::from_labels(&[1]), 0).unwrap();
        let q = critical_tuple(&cfg, Subset::from_labels(&[2]), 0).unwrap();
        // κ_{2} = −κ_{1}
        let pj = p.conjugate(&Su2::j());
        assert!(pj.a[0].distance_max(&q.a[0]) < 1e-14);
        assert!(pj.c[1].distance_max(&q.c[1]) < 1e-14);
    }

    #[test]
    fn hessian_genus_one_half() {
        let cfg = para(1, &[(1, 2)]);
        let hc = HessianConfig::default();
        let mut found: Vec<(usize, usize)> = Subset::all(1)
            .flat_map(|j| (0..2).map(move |l| (j, l)))
            .map(|(j, l)| {
                let r = hessian_index(&critical_tuple(&cfg, j, l).unwrap(), &hc).unwrap();
                (r.index, r.nullity)
            })
            .collect();
        found.sort();
        found.dedup();
        assert_eq!(found, vec![(0, 0), (2, 0)]);
    }

    #[test]
    fn classic_s2_index() {
        let p = critical_tuple(&WeightConfig::classic(2), Subset::empty(), 0).unwrap();
        let r = hessian_index(&p, &HessianConfig::default()).unwrap();
        assert_eq!((r.index, r.nullity, r.slice_dim), (2, 2, 6));
    }

    #[test]
    fn census_examples() {
        let hc = HessianConfig::default();
        let c = torus_census(&para(1, &[(1, 2)]), &hc).unwrap();
        assert_eq!(c.classes.len(), 2);
        assert_eq!(c.indices, vec![0, 2]);

        let c = torus_census(&para(1, &[(9, 10), (1, 10)]), &hc).unwrap();
        assert_eq!(c.classes.len(), 4);
        assert_eq!(c.indices, vec![0, 2, 2, 4]);

        let c = torus_census(&para(2, &[(1, 2)]), &hc).unwrap();
        assert_eq!(c.indices, vec![2, 4]);
        assert!(c.classes.iter().all(|k| k.hessian.nullity == 2));

        assert_eq!(
            torus_census(&WeightConfig::classic(2), &hc).unwrap_err(),
            Error::NotParabolic
        );
    }

    #[test]
    fn not_critical_is_rejected() {
        let cfg = WeightConfig::classic(2);
        let pts = crate::verify::solve::sample_fiber(&cfg, 1, 3, &Default::default());
        let p = pts.into_iter().next().unwrap().unwrap();
        assert!(matches!(
            hessian_report(&p, &HessianConfig::default()),
            Err(Error::NotCritical { .. })
        ));
    }
}
