//! Scalar abstraction for the numeric kernels.
//!
//! Everything downstream of the config is generic over [`Real`] so the same
//! shooting/quadrature/root-finding code runs at `f64` (the default used by
//! the CLI) or `f32`. The crate root exports `f64` aliases for the main types.

use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive};

/// Floating-point scalar usable by the solvers.
pub trait Real: Float + FromPrimitive + Debug + Display + Send + Sync + 'static {}

impl<T> Real for T where T: Float + FromPrimitive + Debug + Display + Send + Sync + 'static {}

/// Converts an `f64` constant into the working scalar type.
#[inline]
pub(crate) fn cst<F: Real>(x: f64) -> F {
    F::from_f64(x).unwrap_or_else(|| {
        if x > 0.0 {
            F::max_value()
        } else {
            -F::max_value()
        }
    })
}

/// Lossy view of a scalar as `f64`, for diagnostics and error messages.
#[inline]
pub(crate) fn as_f64<F: Real>(x: F) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}
