//! Eigenvalue location, eigenfunction assembly, and spectral diagnostics.
//!
//! Eigenvalues are the real zeros of omega(lambda). The scan samples omega
//! on a uniform lambda grid (in parallel), refines every sign-change cell
//! with Brent's method, and attaches a central-difference omega' to each
//! root. Cells where |omega| dips deep without changing sign are flagged:
//! simple-zero theory says they should not occur for sign-definite
//! configurations.

use rayon::prelude::*;

use crate::basis::{fundamental_system, jump_backward, jump_forward, omega};
use crate::error::{Error, Result};
use crate::expansion::inner_product_h;
use crate::greens::{FunctionPart, HVector};
use crate::problem::ProblemConfig;
use crate::real::{as_f64, cst, Real};
use crate::roots::brent;

/// Dip threshold for the suspect-multiple warning, relative to the median
/// grid |omega|.
const DIP_FRACTION: f64 = 1e-3;
/// |omega'| at or below this flags a refined root as suspect.
const SIMPLE_DERIVATIVE_FLOOR: f64 = 1e-6;

/// The four boundary functionals evaluated on endpoint traces.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryFunctionals<F> {
    pub b_a: F,
    pub bp_a: F,
    pub b_b: F,
    pub bp_b: F,
}

/// `Ba[f] = a10 f(a) - a11 f'(a)` and friends.
pub fn boundary_functionals<F: Real>(
    config: &ProblemConfig<F>,
    f_a: F,
    fp_a: F,
    f_b: F,
    fp_b: F,
) -> BoundaryFunctionals<F> {
    let l = &config.left;
    let r = &config.right;
    BoundaryFunctionals {
        b_a: l.alpha0 * f_a - l.alpha1 * fp_a,
        bp_a: l.alpha0p * f_a - l.alpha1p * fp_a,
        b_b: r.alpha0 * f_b - r.alpha1 * fp_b,
        bp_b: r.alpha0p * f_b - r.alpha1p * fp_b,
    }
}

/// Classification of a refined zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EigenvalueFlag {
    Simple,
    SuspectMultiple,
}

/// A refined zero of the characteristic function.
#[derive(Debug, Clone, Copy)]
pub struct Eigenvalue<F> {
    pub lambda: F,
    /// `|omega(lambda)|` at the refined point.
    pub residual: F,
    /// Central-difference `d omega / d lambda`.
    pub omega_derivative: F,
    /// Sign-change bracket the root was refined from.
    pub bracket: (F, F),
    pub flag: EigenvalueFlag,
}

/// Non-fatal scan events.
#[derive(Debug, Clone)]
pub enum ScanWarning {
    /// |omega| dipped below the threshold inside a cell without a sign
    /// change; a multiple zero (or a near-tangency) may hide there.
    SuspectDip {
        lambda_lo: f64,
        lambda_hi: f64,
        min_abs_omega: f64,
    },
    /// omega evaluation failed at a grid point; adjacent cells skipped.
    PointSkipped { lambda: f64, reason: String },
}

/// Scan outcome: refined eigenvalues plus warnings.
#[derive(Debug, Clone)]
pub struct ScanResult<F> {
    pub eigenvalues: Vec<Eigenvalue<F>>,
    pub warnings: Vec<ScanWarning>,
}

/// Samples omega on `grid_n + 1` uniform points of `[lo, hi]`, refines each
/// sign-change cell to `tol`, and returns the ascending, deduplicated list.
pub fn scan<F: Real>(
    config: &ProblemConfig<F>,
    lo: F,
    hi: F,
    grid_n: usize,
    tol: F,
) -> Result<ScanResult<F>> {
    if !(lo < hi) || grid_n < 2 || !(tol > F::zero()) {
        return Err(Error::InvalidConfig {
            failures: vec![format!(
                "scan needs lo < hi, grid_n >= 2, tol > 0 (got lo = {}, hi = {}, grid_n = {grid_n})",
                as_f64(lo),
                as_f64(hi)
            )],
        });
    }
    let nf = F::from_usize(grid_n).unwrap();
    let grid: Vec<F> = (0..=grid_n)
        .map(|i| {
            if i == grid_n {
                hi
            } else {
                lo + (hi - lo) * (F::from_usize(i).unwrap() / nf)
            }
        })
        .collect();

    let sampled: Vec<std::result::Result<F, Error>> = grid
        .par_iter()
        .map(|&lam| omega(config, lam))
        .collect();

    let mut warnings = Vec::new();
    let mut values: Vec<Option<F>> = Vec::with_capacity(sampled.len());
    for (i, r) in sampled.into_iter().enumerate() {
        match r {
            Ok(v) => values.push(Some(v)),
            Err(e) => {
                warnings.push(ScanWarning::PointSkipped {
                    lambda: as_f64(grid[i]),
                    reason: e.to_string(),
                });
                values.push(None);
            }
        }
    }

    let mut magnitudes: Vec<F> = values.iter().flatten().map(|v| v.abs()).collect();
    magnitudes.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let median = if magnitudes.is_empty() {
        F::zero()
    } else {
        magnitudes[magnitudes.len() / 2]
    };
    let dip = cst::<F>(DIP_FRACTION) * median;

    let mut found: Vec<Eigenvalue<F>> = Vec::new();
    let mut eval = |lam: F| omega(config, lam);

    for i in 0..grid_n {
        let (Some(fa), Some(fb)) = (values[i], values[i + 1]) else { continue };
        let (la, lb) = (grid[i], grid[i + 1]);
        if fa == F::zero() {
            found.push(make_eigenvalue(config, la, F::zero(), (la, lb)));
            continue;
        }
        if i + 1 == grid_n && fb == F::zero() {
            found.push(make_eigenvalue(config, lb, F::zero(), (la, lb)));
            continue;
        }
        if fa * fb < F::zero() {
            let root = brent(&mut eval, la, lb, fa, fb, tol)?;
            found.push(make_eigenvalue(config, root.x, root.fx.abs(), (la, lb)));
        } else if fa.abs().min(fb.abs()) < dip {
            warnings.push(ScanWarning::SuspectDip {
                lambda_lo: as_f64(la),
                lambda_hi: as_f64(lb),
                min_abs_omega: as_f64(fa.abs().min(fb.abs())),
            });
        }
    }

    found.sort_by(|x, y| x.lambda.partial_cmp(&y.lambda).unwrap());
    let merge_width = cst::<F>(10.0) * tol;
    let mut eigenvalues: Vec<Eigenvalue<F>> = Vec::with_capacity(found.len());
    for ev in found {
        match eigenvalues.last_mut() {
            Some(prev) if (ev.lambda - prev.lambda).abs() <= merge_width => {
                if ev.residual < prev.residual {
                    *prev = ev;
                }
            }
            _ => eigenvalues.push(ev),
        }
    }

    Ok(ScanResult { eigenvalues, warnings })
}

fn make_eigenvalue<F: Real>(
    config: &ProblemConfig<F>,
    lambda: F,
    residual: F,
    bracket: (F, F),
) -> Eigenvalue<F> {
    let h = cst::<F>(1e-6) * F::one().max(lambda.abs());
    let derivative = match (omega(config, lambda + h), omega(config, lambda - h)) {
        (Ok(p), Ok(m)) => (p - m) / (h + h),
        _ => F::nan(),
    };
    let flag = if derivative.is_finite()
        && derivative.abs() > cst::<F>(SIMPLE_DERIVATIVE_FLOOR)
    {
        EigenvalueFlag::Simple
    } else {
        EigenvalueFlag::SuspectMultiple
    };
    Eigenvalue { lambda, residual, omega_derivative: derivative, bracket, flag }
}

/// A normalized eigenpair: refined eigenvalue plus the piecewise
/// eigenfunction taken from the phi branch.
#[derive(Debug, Clone)]
pub struct Eigenpair<F> {
    pub eigenvalue: Eigenvalue<F>,
    /// Normalized eigenfunction, left subinterval.
    pub left: SolutionBranch<F>,
    /// Normalized eigenfunction, right subinterval.
    pub right: SolutionBranch<F>,
    /// `B'a[f]` after normalization, when the component is active.
    pub f1: Option<F>,
    /// `-B'b[f]` after normalization, when the component is active.
    pub f2: Option<F>,
    /// `[F, F]_H` recomputed after normalization; +1 up to rounding for
    /// definite configurations, -1 when the indefinite metric makes the
    /// square negative.
    pub h_norm: F,
    /// `k` with `psi ~ k * phi` at the eigenvalue.
    pub dependency_coefficient: F,
    /// `sup |psi - k phi| / sup |psi|` over the stored nodes.
    pub dependency_residual: F,
    /// `|Bb[f] + lambda B'b[f]|` of the normalized eigenfunction; how well
    /// the phi branch meets the right condition it was not shot from.
    pub right_bc_residual: F,
}

type SolutionBranch<F> = crate::integrate::SolutionPath<F>;

impl<F: Real> Eigenpair<F> {
    pub fn lambda(&self) -> F {
        self.eigenvalue.lambda
    }

    /// The eigenpair as an element of the modified space.
    pub fn h_vector(&self) -> HVector<F> {
        HVector {
            f: FunctionPart::Paths { left: self.left.clone(), right: self.right.clone() },
            f1: self.f1,
            f2: self.f2,
        }
    }
}

/// Builds and normalizes the eigenpair at a refined eigenvalue.
///
/// The eigenfunction is the phi branch (it satisfies the left condition
/// exactly; the right one holds because omega vanishes). It is scaled to
/// unit H-norm and its sign is fixed so the first extremum from `a` is
/// positive.
pub fn eigenpair<F: Real>(
    config: &ProblemConfig<F>,
    ev: &Eigenvalue<F>,
) -> Result<Eigenpair<F>> {
    let lambda = ev.lambda;
    let fs = fundamental_system(config, lambda)?;

    // linear-dependency witness on the raw branches
    let phi_nodes = || fs.phi_minus.nodes.iter().chain(&fs.phi_plus.nodes);
    let psi_nodes = || fs.psi_minus.nodes.iter().chain(&fs.psi_plus.nodes);
    let mut best = (F::zero(), 0usize);
    for (i, n) in phi_nodes().enumerate() {
        if n.y.abs() > best.0 {
            best = (n.y.abs(), i);
        }
    }
    let scale_floor = cst::<F>(1e-12) * (F::one() + lambda.abs());
    if best.0 < scale_floor {
        return Err(Error::DegenerateEigenfunction { lambda: as_f64(lambda) });
    }
    let phi_star = phi_nodes().nth(best.1).unwrap().y;
    let psi_star = psi_nodes().nth(best.1).unwrap().y;
    let k = psi_star / phi_star;
    let mut dep_num = F::zero();
    let mut psi_sup = F::zero();
    for (p, q) in phi_nodes().zip(psi_nodes()) {
        dep_num = dep_num.max((q.y - k * p.y).abs());
        psi_sup = psi_sup.max(q.y.abs());
    }
    let dependency_residual = if psi_sup > F::zero() { dep_num / psi_sup } else { F::zero() };

    // raw boundary entries and H-norm
    let fa = fs.phi_minus.first();
    let fb = fs.phi_plus.last();
    let bf = boundary_functionals(config, fa.y, fa.yp, fb.y, fb.yp);
    let raw = HVector {
        f: FunctionPart::Paths { left: fs.phi_minus.clone(), right: fs.phi_plus.clone() },
        f1: config.left_component_active().then_some(bf.bp_a),
        f2: config.right_component_active().then_some(-bf.bp_b),
    };
    let norm_sq = inner_product_h(config, &raw, &raw)?;
    if norm_sq.abs() < cst::<F>(1e-280) {
        return Err(Error::DegenerateEigenfunction { lambda: as_f64(lambda) });
    }

    // positive first lobe: first derivative sign change from a, else the
    // largest-magnitude node
    let combined: Vec<(F, F)> = phi_nodes().map(|n| (n.y, n.yp)).collect();
    let mut lobe_value = combined[best.1].0;
    for w in combined.windows(2) {
        if w[0].1 * w[1].1 <= F::zero() {
            lobe_value = if w[0].0.abs() > w[1].0.abs() { w[0].0 } else { w[1].0 };
            if lobe_value != F::zero() {
                break;
            }
        }
    }
    if lobe_value == F::zero() {
        lobe_value = combined[best.1].0;
    }
    let mut scale = F::one() / norm_sq.abs().sqrt();
    if lobe_value < F::zero() {
        scale = -scale;
    }

    let mut left = fs.phi_minus.clone();
    let mut right = fs.phi_plus.clone();
    for n in left.nodes.iter_mut().chain(right.nodes.iter_mut()) {
        n.y = n.y * scale;
        n.yp = n.yp * scale;
    }
    let f1 = raw.f1.map(|v| v * scale);
    let f2 = raw.f2.map(|v| v * scale);

    let normalized = HVector {
        f: FunctionPart::Paths { left: left.clone(), right: right.clone() },
        f1,
        f2,
    };
    let h_norm = inner_product_h(config, &normalized, &normalized)?;

    let nb = right.last();
    let nbf = boundary_functionals(config, F::zero(), F::zero(), nb.y, nb.yp);
    let right_bc_residual = (nbf.b_b + lambda * nbf.bp_b).abs();

    Ok(Eigenpair {
        eigenvalue: *ev,
        left,
        right,
        f1,
        f2,
        h_norm,
        dependency_coefficient: k,
        dependency_residual,
        right_bc_residual,
    })
}

/// Gram matrix of eigenpairs in the full modified inner product.
#[derive(Debug, Clone)]
pub struct GramReport<F> {
    pub gram: Vec<Vec<F>>,
    pub max_off_diagonal: F,
    pub max_diagonal_deviation: F,
}

/// Computes `G_ij = [F_i, F_j]_H` and the worst deviations from identity.
pub fn orthogonality_check<F: Real>(
    config: &ProblemConfig<F>,
    pairs: &[Eigenpair<F>],
) -> Result<GramReport<F>> {
    let vectors: Vec<HVector<F>> = pairs.iter().map(|p| p.h_vector()).collect();
    let n = vectors.len();
    let mut gram = vec![vec![F::zero(); n]; n];
    for i in 0..n {
        for j in i..n {
            let v = inner_product_h(config, &vectors[i], &vectors[j])?;
            gram[i][j] = v;
            gram[j][i] = v;
        }
    }
    let mut max_off = F::zero();
    let mut max_diag = F::zero();
    for i in 0..n {
        max_diag = max_diag.max((gram[i][i] - F::one()).abs());
        for j in 0..n {
            if i != j {
                max_off = max_off.max(gram[i][j].abs());
            }
        }
    }
    Ok(GramReport { gram, max_off_diagonal: max_off, max_diagonal_deviation: max_diag })
}

/// Interface-trace residuals of a normalized eigenpair under the jump maps
/// (forward on the left traces, backward on the right ones).
pub fn eigenpair_jump_residual<F: Real>(
    config: &ProblemConfig<F>,
    pair: &Eigenpair<F>,
) -> Result<F> {
    let lc = pair.left.last();
    let rc = pair.right.first();
    let fwd = jump_forward(config.minors(), (lc.y, lc.yp))?;
    let bwd = jump_backward(config.minors(), (rc.y, rc.yp))?;
    let r1 = (rc.y - fwd.0).abs().max((rc.yp - fwd.1).abs());
    let r2 = (lc.y - bwd.0).abs().max((lc.yp - bwd.1).abs());
    Ok(r1.max(r2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;

    #[test]
    fn boundary_functional_examples() {
        let d = presets::dirichlet::<f64>();
        let bf = boundary_functionals(&d, 0.0, 1.0, 0.3, -0.7);
        assert_eq!(bf.b_a, 0.0);
        assert_eq!(bf.bp_a, 0.0);

        let p = presets::paper_example::<f64>();
        let bf = boundary_functionals(&p, 2.0, 3.0, 0.0, 0.0);
        assert_eq!(bf.b_a, 2.0);
        assert_eq!(bf.bp_a, -3.0);
    }

    #[test]
    fn phi_initial_data_annihilates_left_condition() {
        // Ba[phi] - lambda B'a[phi] = 0 algebraically for any lambda
        let p = presets::paper_example::<f64>();
        for lam in [-3.0, 0.0, 0.7, 12.345, 100.0] {
            let (y, yp) = crate::basis::initial_left(&p, lam);
            let bf = boundary_functionals(&p, y, yp, 0.0, 0.0);
            assert_eq!(bf.b_a - lam * bf.bp_a, 0.0, "lambda = {lam}");
        }
    }

    #[test]
    fn dirichlet_scan_finds_squares() {
        let cfg = presets::dirichlet::<f64>();
        let out = scan(&cfg, 0.5, 30.0, 600, 1e-10).unwrap();
        let lambdas: Vec<f64> = out.eigenvalues.iter().map(|e| e.lambda).collect();
        assert_eq!(lambdas.len(), 5, "got {lambdas:?}");
        for (l, expect) in lambdas.iter().zip([1.0, 4.0, 9.0, 16.0, 25.0]) {
            assert!(
                ((l - expect) / expect).abs() <= 1e-7,
                "lambda {l} vs {expect}"
            );
        }
        for ev in &out.eigenvalues {
            assert_eq!(ev.flag, EigenvalueFlag::Simple);
            assert!(ev.residual <= 1e-7);
            assert!(ev.bracket.0 < ev.lambda && ev.lambda < ev.bracket.1);
        }
    }

    #[test]
    fn interface_placement_is_invisible_with_identity_jump() {
        let mut cfg = presets::dirichlet::<f64>();
        cfg.c = 1.0;
        let out = scan(&cfg, 0.5, 30.0, 600, 1e-10).unwrap();
        let lambdas: Vec<f64> = out.eigenvalues.iter().map(|e| e.lambda).collect();
        assert_eq!(lambdas.len(), 5);
        for (l, expect) in lambdas.iter().zip([1.0, 4.0, 9.0, 16.0, 25.0]) {
            assert!(((l - expect) / expect).abs() <= 1e-7);
        }
    }

    #[test]
    fn scan_rejects_bad_arguments() {
        let cfg = presets::dirichlet::<f64>();
        assert!(scan(&cfg, 2.0, 1.0, 10, 1e-9).is_err());
        assert!(scan(&cfg, 0.0, 1.0, 1, 1e-9).is_err());
        assert!(scan(&cfg, 0.0, 1.0, 10, 0.0).is_err());
    }

    #[test]
    fn dirichlet_eigenpair_is_normalized_sine() {
        let cfg = presets::dirichlet::<f64>();
        let out = scan(&cfg, 0.5, 2.0, 60, 1e-10).unwrap();
        let pair = eigenpair(&cfg, &out.eigenvalues[0]).unwrap();
        assert!((pair.h_norm - 1.0).abs() < 1e-10);
        // normalized eigenfunction is sqrt(2/pi) sin(x)
        let amp = (2.0 / std::f64::consts::PI).sqrt();
        for n in pair.left.nodes.iter().chain(&pair.right.nodes) {
            assert!(
                (n.y - amp * n.x.sin()).abs() < 1e-6,
                "x = {}: {} vs {}",
                n.x,
                n.y,
                amp * n.x.sin()
            );
        }
        assert!(pair.dependency_residual <= 1e-6);
        assert!(pair.right_bc_residual < 1e-6);
        assert!(pair.f1.is_none() && pair.f2.is_none());
    }

    #[test]
    fn dependency_residual_small_at_second_eigenvalue() {
        let cfg = presets::dirichlet::<f64>();
        let out = scan(&cfg, 3.0, 5.0, 80, 1e-10).unwrap();
        let pair = eigenpair(&cfg, &out.eigenvalues[0]).unwrap();
        assert!((pair.lambda() - 4.0).abs() < 1e-7);
        assert!(pair.dependency_residual <= 1e-6, "{}", pair.dependency_residual);
    }

    #[test]
    fn first_lobe_positive_convention() {
        // Dirichlet eigenfunctions ~ sin(n x): genuine interior extrema
        let cfg = presets::dirichlet::<f64>();
        let out = scan(&cfg, 0.5, 30.0, 600, 1e-10).unwrap();
        assert_eq!(out.eigenvalues.len(), 5);
        for ev in &out.eigenvalues {
            let pair = eigenpair(&cfg, ev).unwrap();
            let nodes: Vec<_> = pair.left.nodes.iter().chain(&pair.right.nodes).collect();
            let mut lobe = None;
            for w in nodes.windows(2) {
                if w[0].yp * w[1].yp <= 0.0 {
                    let v = if w[0].y.abs() > w[1].y.abs() { w[0].y } else { w[1].y };
                    if v != 0.0 {
                        lobe = Some(v);
                        break;
                    }
                }
            }
            let v = lobe.expect("sine eigenfunction has an interior extremum");
            assert!(v > 0.0, "lambda {} first lobe {v}", ev.lambda);
        }

        // the lowest mode of the lambda-dependent config is a constant: no
        // interior extremum, the sign falls back to the largest node value
        let cfg = presets::lambda_dependent::<f64>();
        let out = scan(&cfg, -0.5, 1.0, 100, 1e-10).unwrap();
        let ground = eigenpair(&cfg, &out.eigenvalues[0]).unwrap();
        assert!(ground.lambda().abs() < 1e-7);
        let expect = 1.0 / (std::f64::consts::PI + 2.0).sqrt();
        for n in ground.left.nodes.iter().chain(&ground.right.nodes) {
            assert!((n.y - expect).abs() < 1e-8, "constant mode: {} vs {expect}", n.y);
        }
    }

    #[test]
    fn gram_of_single_pair_is_identity() {
        let cfg = presets::dirichlet::<f64>();
        let out = scan(&cfg, 0.5, 2.0, 60, 1e-10).unwrap();
        let pair = eigenpair(&cfg, &out.eigenvalues[0]).unwrap();
        let gram = orthogonality_check(&cfg, &[pair]).unwrap();
        assert!(gram.max_diagonal_deviation < 1e-10);
        assert_eq!(gram.max_off_diagonal, 0.0);
    }

    #[test]
    fn dirichlet_gram_first_six() {
        let cfg = presets::dirichlet::<f64>();
        let out = scan(&cfg, 0.5, 40.0, 1600, 1e-10).unwrap();
        let pairs: Vec<_> = out.eigenvalues[..6]
            .iter()
            .map(|ev| eigenpair(&cfg, ev).unwrap())
            .collect();
        let gram = orthogonality_check(&cfg, &pairs).unwrap();
        assert!(gram.max_off_diagonal <= 1e-6, "{}", gram.max_off_diagonal);
        assert!(gram.max_diagonal_deviation <= 1e-8);
    }

    #[test]
    fn refinement_is_stable_under_tol_halving() {
        let cfg = presets::dirichlet::<f64>();
        let tol = 1e-9;
        let a = scan(&cfg, 0.5, 10.0, 300, tol).unwrap();
        let b = scan(&cfg, 0.5, 10.0, 300, tol / 2.0).unwrap();
        assert_eq!(a.eigenvalues.len(), b.eigenvalues.len());
        for (x, y) in a.eigenvalues.iter().zip(&b.eigenvalues) {
            assert!((x.lambda - y.lambda).abs() <= 10.0 * tol);
        }
    }
}
