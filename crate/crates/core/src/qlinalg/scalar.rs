use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive, NumAssign};

/// Real floating-point scalar the linear algebra is generic over.
pub trait RealScalar:
    Float + FromPrimitive + NumAssign + Debug + Display + Default + Send + Sync + 'static
{
    /// Lossless-enough conversion from an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    /// Tolerance floor for relative checks: `max(tol, 100 eps)`, so that
    /// `f64`-oriented tolerances stay meaningful for `f32`.
    #[inline]
    fn tol(tol: f64) -> Self {
        Self::lit(tol).max(Self::epsilon() * Self::lit(100.0))
    }
}

impl RealScalar for f32 {}
impl RealScalar for f64 {}
