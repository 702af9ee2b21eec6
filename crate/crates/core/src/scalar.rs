//! Scalar abstraction: the geometry core is generic over the coordinate type.

use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive};

/// Coordinate scalar: f32 or f64.
pub trait Scalar:
    Float + FromPrimitive + Display + Debug + Send + Sync + 'static
{
    /// sqrt(3), the cube space-diagonal factor.
    fn sqrt_3() -> Self {
        Self::from_f64(3.0).unwrap().sqrt()
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
