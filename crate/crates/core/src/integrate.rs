//! Fixed-step initial-value integration of `-p y'' + q y = lambda y` on one
//! subinterval, in either direction, with dense output.
//!
//! The equation is integrated as the first-order system `y' = v`,
//! `v' = ((q(x) - lambda)/p) * y` with classical RK4. Node positions are the
//! canonical uniform grid of the subinterval, so every path produced for a
//! given configuration shares its abscissas bitwise with
//! [`ProblemConfig::side_nodes`], regardless of integration direction.

use crate::error::{Error, Result};
use crate::problem::{ProblemConfig, Side};
use crate::real::{as_f64, cst, Real};

/// Divergence guard: integration aborts when |y| or |y'| exceeds this.
const OVERFLOW_LIMIT: f64 = 1e300;

/// One dense-output node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathNode<F> {
    pub x: F,
    pub y: F,
    pub yp: F,
}

/// Trajectory of one solution on one subinterval at fixed lambda.
///
/// Nodes are stored in ascending x order regardless of the direction the
/// shot was taken in.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionPath<F> {
    pub lambda: F,
    pub side: Side,
    pub nodes: Vec<PathNode<F>>,
}

impl<F: Real> SolutionPath<F> {
    /// Assembles a path from parallel node arrays (used by the resolvent,
    /// whose output is produced on the canonical grid rather than shot).
    pub fn from_nodes(lambda: F, side: Side, xs: &[F], ys: &[F], yps: &[F]) -> Self {
        let nodes = xs
            .iter()
            .zip(ys)
            .zip(yps)
            .map(|((&x, &y), &yp)| PathNode { x, y, yp })
            .collect();
        SolutionPath { lambda, side, nodes }
    }

    pub fn span(&self) -> (F, F) {
        (self.nodes[0].x, self.nodes[self.nodes.len() - 1].x)
    }

    /// First stored node (smallest x).
    pub fn first(&self) -> PathNode<F> {
        self.nodes[0]
    }

    /// Last stored node (largest x).
    pub fn last(&self) -> PathNode<F> {
        self.nodes[self.nodes.len() - 1]
    }

    /// Cubic Hermite dense output; exact at the nodes.
    pub fn eval(&self, x: F) -> Result<(F, F)> {
        let (lo, hi) = self.span();
        let tol = cst::<F>(1e-12) * (hi - lo);
        if x < lo - tol || x > hi + tol {
            return Err(Error::OutOfSpan {
                x: as_f64(x),
                lo: as_f64(lo),
                hi: as_f64(hi),
            });
        }
        let x = if x < lo { lo } else if x > hi { hi } else { x };
        // first node with node.x >= x
        let idx = self.nodes.partition_point(|n| n.x < x);
        if idx < self.nodes.len() && self.nodes[idx].x == x {
            let n = self.nodes[idx];
            return Ok((n.y, n.yp));
        }
        let n0 = self.nodes[idx - 1];
        let n1 = self.nodes[idx];
        let h = n1.x - n0.x;
        let t = (x - n0.x) / h;
        let t2 = t * t;
        let t3 = t2 * t;
        let two = cst::<F>(2.0);
        let three = cst::<F>(3.0);
        let six = cst::<F>(6.0);
        let four = cst::<F>(4.0);
        let h00 = two * t3 - three * t2 + F::one();
        let h10 = t3 - two * t2 + t;
        let h01 = -two * t3 + three * t2;
        let h11 = t3 - t2;
        let y = h00 * n0.y + h10 * h * n0.yp + h01 * n1.y + h11 * h * n1.yp;
        let d00 = six * t2 - six * t;
        let d10 = three * t2 - four * t + F::one();
        let d01 = -d00;
        let d11 = three * t2 - two * t;
        let yp = (d00 * n0.y + d01 * n1.y) / h + d10 * n0.yp + d11 * n1.yp;
        Ok((y, yp))
    }
}

fn rhs_factor<F: Real>(config: &ProblemConfig<F>, side: Side, lambda: F, x: F) -> Result<F> {
    let q = config.q(side).eval(x)?;
    Ok((q - lambda) / config.p(side))
}

/// One classical RK4 step from `(x0, y, v)` to `x1` for the system
/// `y' = v`, `v' = w(x) y`.
fn rk4_step<F: Real>(
    config: &ProblemConfig<F>,
    side: Side,
    lambda: F,
    x0: F,
    x1: F,
    y: F,
    v: F,
) -> Result<(F, F)> {
    let two = cst::<F>(2.0);
    let six = cst::<F>(6.0);
    let h = x1 - x0;
    let xm = (x0 + x1) / two;
    let w0 = rhs_factor(config, side, lambda, x0)?;
    let wm = rhs_factor(config, side, lambda, xm)?;
    let w1 = rhs_factor(config, side, lambda, x1)?;

    let k1y = v;
    let k1v = w0 * y;
    let k2y = v + h / two * k1v;
    let k2v = wm * (y + h / two * k1y);
    let k3y = v + h / two * k2v;
    let k3v = wm * (y + h / two * k2y);
    let k4y = v + h * k3v;
    let k4v = w1 * (y + h * k3y);

    let yn = y + h / six * (k1y + two * k2y + two * k3y + k4y);
    let vn = v + h / six * (k1v + two * k2v + two * k3v + k4v);
    Ok((yn, vn))
}

fn check_span<F: Real>(
    config: &ProblemConfig<F>,
    side: Side,
    from_x: F,
    to_x: F,
) -> Result<()> {
    let (lo, hi) = config.side_interval(side);
    let (mn, mx) = if from_x < to_x { (from_x, to_x) } else { (to_x, from_x) };
    if mn != lo || mx != hi {
        return Err(Error::PathMismatch {
            what: format!(
                "integration span [{}, {}] does not cover the side interval [{}, {}]",
                as_f64(mn),
                as_f64(mx),
                as_f64(lo),
                as_f64(hi)
            ),
        });
    }
    Ok(())
}

fn guard<F: Real>(lambda: F, y: F, v: F) -> Result<()> {
    let lim = cst::<F>(OVERFLOW_LIMIT);
    if !(y.abs() <= lim) || !(v.abs() <= lim) {
        return Err(Error::Diverged { lambda: as_f64(lambda) });
    }
    Ok(())
}

/// Integrates one initial-value shot across a subinterval and stores dense
/// output at the canonical nodes.
///
/// `from_x`/`to_x` must be the two endpoints of the side's subinterval, in
/// either order; integration runs from `from_x` to `to_x` and the returned
/// path stores nodes ascending.
pub fn integrate<F: Real>(
    config: &ProblemConfig<F>,
    side: Side,
    lambda: F,
    from_x: F,
    to_x: F,
    init: (F, F),
) -> Result<SolutionPath<F>> {
    check_span(config, side, from_x, to_x)?;
    let xs = config.side_nodes(side);
    let n = config.steps_per_side;
    let forward = from_x < to_x;

    let (mut y, mut v) = init;
    guard(lambda, y, v)?;
    let mut out = vec![PathNode { x: F::zero(), y: F::zero(), yp: F::zero() }; n + 1];
    let index = |k: usize| if forward { k } else { n - k };
    out[index(0)] = PathNode { x: xs[index(0)], y, yp: v };
    for k in 0..n {
        let x0 = xs[index(k)];
        let x1 = xs[index(k + 1)];
        let (yn, vn) = rk4_step(config, side, lambda, x0, x1, y, v)?;
        guard(lambda, yn, vn)?;
        y = yn;
        v = vn;
        out[index(k + 1)] = PathNode { x: x1, y, yp: v };
    }
    Ok(SolutionPath { lambda, side, nodes: out })
}

/// Same shot as [`integrate`] but keeps only the terminal values; used by
/// the characteristic-function scan where dense output would be wasted.
pub(crate) fn integrate_terminal<F: Real>(
    config: &ProblemConfig<F>,
    side: Side,
    lambda: F,
    from_x: F,
    to_x: F,
    init: (F, F),
) -> Result<(F, F)> {
    check_span(config, side, from_x, to_x)?;
    let xs = config.side_nodes(side);
    let n = config.steps_per_side;
    let forward = from_x < to_x;
    let index = |k: usize| if forward { k } else { n - k };
    let (mut y, mut v) = init;
    guard(lambda, y, v)?;
    for k in 0..n {
        let (yn, vn) = rk4_step(config, side, lambda, xs[index(k)], xs[index(k + 1)], y, v)?;
        guard(lambda, yn, vn)?;
        y = yn;
        v = vn;
    }
    Ok((y, v))
}

/// Wronskian `W(f, g; x) = f g' - f' g` from dense output.
pub fn wronskian<F: Real>(f: &SolutionPath<F>, g: &SolutionPath<F>, x: F) -> Result<F> {
    if f.side != g.side {
        return Err(Error::PathMismatch { what: "paths live on different sides".into() });
    }
    if f.lambda != g.lambda {
        return Err(Error::PathMismatch {
            what: format!(
                "paths have different lambda ({} vs {})",
                as_f64(f.lambda),
                as_f64(g.lambda)
            ),
        });
    }
    let (fy, fp) = f.eval(x)?;
    let (gy, gp) = g.eval(x)?;
    Ok(fy * gp - fp * gy)
}

/// Sup over interior nodes of the centered-difference residual
/// `|-p D2[y] + (q - lambda) y|`. Diagnostic only; the expected size is
/// O(h^2) times the local solution scale.
pub fn ode_residual_sup<F: Real>(
    config: &ProblemConfig<F>,
    path: &SolutionPath<F>,
) -> Result<F> {
    let p = config.p(path.side);
    let mut worst = F::zero();
    for w in path.nodes.windows(3) {
        let h = w[1].x - w[0].x;
        let d2 = (w[2].y - w[1].y - w[1].y + w[0].y) / (h * h);
        let q = config.q(path.side).eval(w[1].x)?;
        let r = (-p) * d2 + (q - path.lambda) * w[1].y;
        worst = worst.max(r.abs());
    }
    Ok(worst)
}
