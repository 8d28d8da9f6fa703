//! Brent's method on a sign-change bracket.

use crate::error::Result;
use crate::real::{cst, Real};

const MAX_ITER: usize = 200;

/// Refined root with its function value.
#[derive(Debug, Clone, Copy)]
pub struct BracketedRoot<F> {
    pub x: F,
    pub fx: F,
}

/// Classic Brent-Dekker iteration. `fa`, `fb` are the (already computed)
/// values at the bracket ends and must not share a sign. Terminates when the
/// bracket shrinks below `tol` (plus the unavoidable machine-epsilon term).
///
/// The function is fallible so integration failures inside the evaluation
/// propagate out.
pub fn brent<F: Real>(
    f: &mut dyn FnMut(F) -> Result<F>,
    a0: F,
    b0: F,
    fa0: F,
    fb0: F,
    tol: F,
) -> Result<BracketedRoot<F>> {
    debug_assert!(!(fa0 > F::zero() && fb0 > F::zero()));
    debug_assert!(!(fa0 < F::zero() && fb0 < F::zero()));
    let two = cst::<F>(2.0);
    let three = cst::<F>(3.0);
    let half = cst::<F>(0.5);

    let (mut a, mut b, mut fa, mut fb) = (a0, b0, fa0, fb0);
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;

    for _ in 0..MAX_ITER {
        if (fb > F::zero() && fc > F::zero()) || (fb < F::zero() && fc < F::zero()) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = two * F::epsilon() * b.abs() + half * tol;
        let xm = half * (c - b);
        if xm.abs() <= tol1 || fb == F::zero() {
            return Ok(BracketedRoot { x: b, fx: fb });
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            // inverse quadratic interpolation (secant when a == c)
            let s = fb / fa;
            let (mut p, mut q) = if a == c {
                (two * xm * s, F::one() - s)
            } else {
                let q = fa / fc;
                let r = fb / fc;
                (
                    s * (two * xm * q * (q - r) - (b - a) * (r - F::one())),
                    (q - F::one()) * (r - F::one()) * (s - F::one()),
                )
            };
            if p > F::zero() {
                q = -q;
            }
            p = p.abs();
            let min1 = three * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if two * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        if d.abs() > tol1 {
            b = b + d;
        } else {
            b = b + if xm > F::zero() { tol1 } else { -tol1 };
        }
        fb = f(b)?;
    }
    Ok(BracketedRoot { x: b, fx: fb })
}
