//! Symmetries of the fiber: the circle action, the half twist of the last
//! handle and the sign action of `(ℤ/2)^{2g}`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::verify::tuple::RepTuple;
use crate::{Algebra, Su2};

/// The one-parameter subgroup `e^{iθ} ↦ cos θ + sin θ·u`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CircleSubgroup {
    pub axis: Algebra,
}

impl CircleSubgroup {
    pub fn at(&self, lambda: Complex64) -> Su2 {
        let theta = lambda.arg();
        Su2::new(
            theta.cos(),
            theta.sin() * self.axis.x,
            theta.sin() * self.axis.y,
            theta.sin() * self.axis.z,
        )
    }
}

/// The unique homomorphism `φ: U(1) → SU(2)` with `A_g ∈ φ({Im z > 0})`.
///
/// Writing `A_g = cos α + sin α·u` with `α ∈ (0, π)` gives `φ(e^{iθ}) = cos θ + sin θ·u`.
pub fn phi_from(a_g: &Su2) -> Result<CircleSubgroup> {
    a_g.vector_part()
        .normalized()
        .filter(|_| a_g.vector_part().norm() > 1e-12)
        .map(|axis| CircleSubgroup { axis })
        .ok_or(Error::ActionUndefined)
}

/// `λ · (…, A_g, B_g, …) = (…, A_g, B_g φ(λ), …)`.
pub fn u1_action(lambda: Complex64, p: &RepTuple) -> Result<RepTuple> {
    let g = p.genus();
    if g == 0 {
        return Err(Error::ActionUndefined);
    }
    let phi = phi_from(&p.a[g - 1])?;
    let mut q = p.clone();
    q.b[g - 1] = p.b[g - 1].multiply(&phi.at(lambda));
    Ok(q)
}

/// Half twist of the last handle:
/// `A_g ↦ A_g B_g A_g⁻¹ B_g⁻¹ A_g⁻¹`, `B_g ↦ A_g B_g⁻¹ A_g⁻¹`.
pub fn half_twist(p: &RepTuple) -> RepTuple {
    let mut q = p.clone();
    if let (Some(a), Some(b)) = (p.a.last().copied(), p.b.last().copied()) {
        let g = p.genus();
        q.a[g - 1] = a.commutator(&b).multiply(&a.inverse());
        q.b[g - 1] = a.multiply(&b.inverse()).multiply(&a.inverse());
    }
    q
}

/// `((-1)^{δ_i} A_i, (-1)^{ε_i} B_i, C_j)`.
pub fn sign_action(delta: &[bool], epsilon: &[bool], p: &RepTuple) -> Result<RepTuple> {
    let g = p.genus();
    for v in [delta, epsilon] {
        if v.len() != g {
            return Err(Error::SignLength {
                expected: g,
                found: v.len(),
            });
        }
    }
    let flip = |x: &Su2, s: bool| if s { -*x } else { *x };
    let mut q = p.clone();
    for i in 0..g {
        q.a[i] = flip(&p.a[i], delta[i]);
        q.b[i] = flip(&p.b[i], epsilon[i]);
    }
    Ok(q)
}
