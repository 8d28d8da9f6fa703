//! Composite Simpson quadrature on the integrator's own uniform grids.
//!
//! Working on the stored nodes avoids re-interpolation and keeps the O(h^4)
//! order of the RK4 paths. Cumulative integrals patch odd endpoints with a
//! single three-point panel, which preserves the fourth-order accuracy.

use crate::error::{Error, Result};
use crate::real::{cst, Real};

/// Integral over the whole uniform grid (panel count must be even).
pub fn simpson<F: Real>(h: F, f: &[F]) -> Result<F> {
    let n = f.len().saturating_sub(1);
    if n == 0 {
        return Ok(F::zero());
    }
    if n % 2 != 0 {
        return Err(Error::OddSteps { n });
    }
    let four = cst::<F>(4.0);
    let two = cst::<F>(2.0);
    let mut acc = f[0] + f[n];
    let mut i = 1;
    while i < n {
        acc = acc + four * f[i];
        if i + 1 < n {
            acc = acc + two * f[i + 1];
        }
        i += 2;
    }
    Ok(h / cst::<F>(3.0) * acc)
}

/// Cumulative integral at every node: `out[i] = integral from x0 to xi`.
///
/// Even nodes use plain composite Simpson; odd nodes add the half-panel
/// `h/12 (5 f_{i-1} + 8 f_i - f_{i+1})`, the integral of the quadratic
/// through the three surrounding nodes over the last subinterval.
pub fn simpson_cumulative<F: Real>(h: F, f: &[F]) -> Result<Vec<F>> {
    let n = f.len().saturating_sub(1);
    if n == 0 {
        return Ok(vec![F::zero(); f.len()]);
    }
    if n % 2 != 0 {
        return Err(Error::OddSteps { n });
    }
    let three = cst::<F>(3.0);
    let four = cst::<F>(4.0);
    let five = cst::<F>(5.0);
    let eight = cst::<F>(8.0);
    let twelve = cst::<F>(12.0);
    let mut out = vec![F::zero(); f.len()];
    let mut i = 0;
    while i + 2 <= n {
        out[i + 2] = out[i] + h / three * (f[i] + four * f[i + 1] + f[i + 2]);
        i += 2;
    }
    let mut i = 1;
    while i < n {
        out[i] = out[i - 1] + h / twelve * (five * f[i - 1] + eight * f[i] - f[i + 1]);
        i += 2;
    }
    Ok(out)
}
