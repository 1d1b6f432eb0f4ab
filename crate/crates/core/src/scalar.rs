//! Scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display};

use nalgebra::RealField;
use num_traits::{FromPrimitive, ToPrimitive};

/// Real floating-point scalar (`f32` or `f64`).
///
/// All tolerances in the crate are written in double-precision terms and
/// passed through [`Real::tol`], which raises them to a floor the scalar type
/// can actually resolve.
pub trait Real:
    RealField + Copy + FromPrimitive + ToPrimitive + Debug + Display + Send + Sync + 'static
{
    /// Smallest tolerance this scalar type can meaningfully honor.
    const TOL_FLOOR: f64;

    /// Converts a literal.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    /// A double-precision tolerance, floored for low-precision scalars.
    #[inline]
    fn tol(t: f64) -> Self {
        Self::lit(t.max(Self::TOL_FLOOR))
    }

    /// Validity tolerance for states (Hermiticity, positivity, trace).
    #[inline]
    fn state_tol() -> Self {
        Self::tol(1e-10)
    }

    /// Eigenvalue cutoff for entropy and support decisions.
    #[inline]
    fn eig_cutoff() -> Self {
        Self::tol(1e-12)
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    #[inline]
    fn infinity() -> Self {
        Self::lit(f64::INFINITY)
    }

    #[inline]
    fn is_finite_real(self) -> bool {
        self.as_f64().is_finite()
    }
}

impl Real for f64 {
    const TOL_FLOOR: f64 = 0.0;
}

impl Real for f32 {
    const TOL_FLOOR: f64 = 1e-5;
}
