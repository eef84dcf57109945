use std::fmt::Debug;

use num_traits::{Float, FloatConst, FromPrimitive};

/// Floating-point scalar used by the group numerics: `f32` or `f64`.
pub trait Real: Float + FloatConst + FromPrimitive + Debug + Send + Sync + 'static {
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("f64 literal representable")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Tolerance constants shared by the group code and its tests.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Tolerances {
    /// Unit-norm and identity checks.
    pub structural: f64,
    /// exp/log round trips.
    pub round_trip: f64,
    /// Distance of the half trace from -1 below which `log` refuses.
    pub antipode: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            structural: 1e-12,
            round_trip: 1e-10,
            antipode: 1e-9,
        }
    }
}
