//! Scalar abstractions.
//!
//! Tensor construction and contraction only need ring arithmetic plus
//! division, so they work over exact rationals as well as floats. Everything
//! that normalizes onto the sphere needs [`Real`].

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, Num, NumAssign};

/// Field-like scalar usable for exact tensor algebra (e.g. `Ratio<i64>`).
pub trait Scalar: Num + Copy + Debug + Send + Sync + 'static {
    /// Embeds a small nonnegative integer by repeated addition of one.
    fn from_count(k: u64) -> Self {
        let mut acc = Self::zero();
        for _ in 0..k {
            acc = acc + Self::one();
        }
        acc
    }
}

impl<T: Num + Copy + Debug + Send + Sync + 'static> Scalar for T {}

/// Floating point scalar for the solvers: `f32` or `f64`.
pub trait Real:
    Scalar + Float + FromPrimitive + NumAssign + Sum + Display + LowerExp + Default
{
    /// Converts an `f64` literal. Infallible for the supported float types.
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("f64 literal representable")
    }

    /// Tolerance used to accept a vector as unit norm.
    fn unit_tol() -> Self {
        Self::lit(1e-12).max(Self::epsilon() * Self::lit(64.0))
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Factorial as an exact scalar.
pub(crate) fn factorial<S: Scalar>(k: usize) -> S {
    let mut acc = S::one();
    for i in 2..=k as u64 {
        acc = acc * S::from_count(i);
    }
    acc
}
