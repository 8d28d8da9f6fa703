//! Modified inner products, eigenfunction-expansion coefficients, and the
//! Parseval/uniform-convergence diagnostics.
//!
//! The function-space product weighs the left subinterval by `d12/p-` and
//! the right by `d34/p+`; the full product adds `d12/(p- theta1) f1 g1` and
//! `d34/(p+ theta2) f2 g2` for the active boundary components. With
//! negative thetas the form is indefinite and the Bessel/Parseval ratios
//! lose meaning; reports carry a flag instead of failing.

use crate::error::{Error, Result};
use crate::greens::{FunctionPart, HVector};
use crate::problem::{ProblemConfig, Side};
use crate::quad::simpson;
use crate::real::Real;
use crate::spectrum::Eigenpair;

/// `[f, g]` over the two subintervals, weighted Simpson on the canonical
/// grids.
pub fn inner_product_h1<F: Real>(
    config: &ProblemConfig<F>,
    f: &FunctionPart<F>,
    g: &FunctionPart<F>,
) -> Result<F> {
    let n = config.steps_per_side;
    let nf = F::from_usize(n).unwrap();
    let m = config.minors();
    let mut total = F::zero();
    for (side, weight) in [
        (Side::Left, m.d12 / config.p_minus),
        (Side::Right, m.d34 / config.p_plus),
    ] {
        let (lo, hi) = config.side_interval(side);
        let h = (hi - lo) / nf;
        let fv = f.samples(config, side)?;
        let gv = g.samples(config, side)?;
        let prod: Vec<F> = fv.iter().zip(&gv).map(|(&a, &b)| a * b).collect();
        total = total + weight * simpson(h, &prod)?;
    }
    Ok(total)
}

fn component_term<F: Real>(
    name: &str,
    active: bool,
    weight_num: F,
    p: F,
    theta: F,
    a: Option<F>,
    b: Option<F>,
) -> Result<F> {
    match (active, a, b) {
        (false, None, None) => Ok(F::zero()),
        (true, Some(x), Some(y)) => {
            if theta == F::zero() {
                return Err(Error::ComponentMismatch {
                    what: format!("{name} component active but theta = 0"),
                });
            }
            Ok(weight_num / (p * theta) * x * y)
        }
        _ => Err(Error::ComponentMismatch {
            what: format!(
                "{name} component presence does not match the configuration (active = {active})"
            ),
        }),
    }
}

/// Full modified inner product `[F, G]_H`.
///
/// Component activity of both arguments must match the configuration's
/// degeneracy flags.
pub fn inner_product_h<F: Real>(
    config: &ProblemConfig<F>,
    fv: &HVector<F>,
    gv: &HVector<F>,
) -> Result<F> {
    let m = config.minors();
    let base = inner_product_h1(config, &fv.f, &gv.f)?;
    let left = component_term(
        "left",
        config.left_component_active(),
        m.d12,
        config.p_minus,
        config.theta1(),
        fv.f1,
        gv.f1,
    )?;
    let right = component_term(
        "right",
        config.right_component_active(),
        m.d34,
        config.p_plus,
        config.theta2(),
        fv.f2,
        gv.f2,
    )?;
    Ok(base + left + right)
}

/// Expansion coefficients `c_n = [F, Psi_n]_H` against normalized
/// eigenpairs.
pub fn coefficients<F: Real>(
    config: &ProblemConfig<F>,
    pairs: &[Eigenpair<F>],
    f: &HVector<F>,
    n: usize,
) -> Result<Vec<F>> {
    pairs
        .iter()
        .take(n)
        .map(|p| inner_product_h(config, f, &p.h_vector()))
        .collect()
}

/// Parseval diagnostics for one element.
#[derive(Debug, Clone)]
pub struct ParsevalReport<F> {
    /// `[F, F]_H`.
    pub norm_sq: F,
    /// `partial_sums[k] = sum of c_n^2, n <= k+1`.
    pub partial_sums: Vec<F>,
    /// `1 - partial_sums.last() / norm_sq`.
    pub deficit: F,
    /// Set when a negative theta makes the form indefinite.
    pub indefinite: bool,
}

/// Squared-coefficient partial sums against the squared H-norm.
pub fn parseval_report<F: Real>(
    config: &ProblemConfig<F>,
    pairs: &[Eigenpair<F>],
    f: &HVector<F>,
    n: usize,
) -> Result<ParsevalReport<F>> {
    let norm_sq = inner_product_h(config, f, f)?;
    let coeffs = coefficients(config, pairs, f, n)?;
    let mut acc = F::zero();
    let partial_sums: Vec<F> = coeffs
        .iter()
        .map(|c| {
            acc = acc + *c * *c;
            acc
        })
        .collect();
    let deficit = if norm_sq != F::zero() {
        F::one() - *partial_sums.last().unwrap_or(&F::zero()) / norm_sq
    } else {
        F::zero()
    };
    Ok(ParsevalReport {
        norm_sq,
        partial_sums,
        deficit,
        indefinite: config.theta1() < F::zero() || config.theta2() < F::zero(),
    })
}

/// Log-spaced truncation orders `1, 2, 4, ... , n`.
pub fn log_spaced_orders(n: usize) -> Vec<usize> {
    let mut ks = Vec::new();
    let mut k = 1;
    while k < n {
        ks.push(k);
        k *= 2;
    }
    if n > 0 {
        ks.push(n);
    }
    ks
}

/// Sup-norm error of the truncated expansion on a uniform probe grid.
///
/// Returns `(k, e_k)` for `k` in the log-spaced subset of `1..=n`, where
/// `e_k = max over the grid of |f(x) - sum_{m <= k} c_m psi_m(x)|`.
pub fn expansion_error<F: Real>(
    config: &ProblemConfig<F>,
    pairs: &[Eigenpair<F>],
    f: &HVector<F>,
    n: usize,
    grid_m: usize,
) -> Result<Vec<(usize, F)>> {
    let n = n.min(pairs.len());
    let coeffs = coefficients(config, pairs, f, n)?;
    let ks = log_spaced_orders(n);
    let mf = F::from_usize(grid_m.max(2)).unwrap();
    let mut errors = vec![F::zero(); ks.len()];
    for i in 0..=grid_m.max(2) {
        let x = config.a + (config.b - config.a) * (F::from_usize(i).unwrap() / mf);
        let side = if x <= config.c { Side::Left } else { Side::Right };
        let fx = f.f.eval_side(config, side, x)?;
        let mut sum = F::zero();
        let mut next = 0;
        for (m, pair) in pairs.iter().take(n).enumerate() {
            let branch = match side {
                Side::Left => &pair.left,
                Side::Right => &pair.right,
            };
            sum = sum + coeffs[m] * branch.eval(x)?.0;
            while next < ks.len() && ks[next] == m + 1 {
                errors[next] = errors[next].max((fx - sum).abs());
                next += 1;
            }
        }
    }
    Ok(ks.into_iter().zip(errors).collect())
}

/// Everything the expand command reports for one element: normalized pairs,
/// coefficients, Parseval partial sums, and the sup-error table.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition<F> {
    pub pairs: Vec<Eigenpair<F>>,
    pub coefficients: Vec<F>,
    pub parseval: ParsevalReport<F>,
    pub sup_errors: Vec<(usize, F)>,
}

/// Assembles the full decomposition of `f` against `pairs`.
pub fn decompose<F: Real>(
    config: &ProblemConfig<F>,
    pairs: Vec<Eigenpair<F>>,
    f: &HVector<F>,
    grid_m: usize,
) -> Result<SpectralDecomposition<F>> {
    let n = pairs.len();
    let coefficients = coefficients(config, &pairs, f, n)?;
    let parseval = parseval_report(config, &pairs, f, n)?;
    let sup_errors = expansion_error(config, &pairs, f, n, grid_m)?;
    Ok(SpectralDecomposition { pairs, coefficients, parseval, sup_errors })
}
