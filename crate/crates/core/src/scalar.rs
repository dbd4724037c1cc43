//! Scalar abstractions.
//!
//! Real-valued data (cochain values, log-moduli, angles) is generic over
//! [`Real`]; exact integer algebra (boundary matrices, Smith normal form) is
//! generic over [`Ring`].

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, Signed, ToPrimitive};

/// Floating point scalar: `f32` or `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + NumAssign + Debug + Display + Default + Send + Sync + 'static
{
    fn from_f64_lossy(x: f64) -> Self {
        Self::from_f64(x).expect("finite f64 converts to every Real")
    }

    fn two_pi() -> Self {
        Self::TAU()
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Euclidean ring of exact integers used for boundary matrices.
pub trait Ring: Integer + Signed + Clone + Debug + Display + FromPrimitive + ToPrimitive {}

impl Ring for i64 {}
impl Ring for i128 {}
impl Ring for BigInt {}
