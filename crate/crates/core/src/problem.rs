//! Problem definition: domain, coefficients, transmission matrix, derived
//! quantities, and validation of the standing sign assumptions.

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::real::{as_f64, Real};

/// The two subintervals split by the interior interface point `c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// `[a, c)`
    Left,
    /// `(c, b]`
    Right,
}

/// Validation strictness.
///
/// The sign assumptions (positive transmission minors, positive theta) are
/// failures in strict mode and warnings in lenient mode. Lenient is the
/// default so that configurations violating them still run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mode {
    Strict,
    #[default]
    Lenient,
}

/// Boundary-condition coefficients for one endpoint.
///
/// The condition at the left endpoint reads
/// `alpha0*y(a) - alpha1*y'(a) - lambda*(alpha0p*y(a) - alpha1p*y'(a)) = 0`,
/// and at the right endpoint the lambda term enters with a plus sign.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryCoeffs<F> {
    pub side: Side,
    /// Coefficient of `y` in the lambda-free row.
    pub alpha0: F,
    /// Coefficient of `y'` in the lambda-free row.
    pub alpha1: F,
    /// Coefficient of `y` in the lambda row.
    pub alpha0p: F,
    /// Coefficient of `y'` in the lambda row.
    pub alpha1p: F,
}

impl<F: Real> BoundaryCoeffs<F> {
    pub fn left(alpha0: F, alpha1: F, alpha0p: F, alpha1p: F) -> Self {
        Self { side: Side::Left, alpha0, alpha1, alpha0p, alpha1p }
    }

    pub fn right(alpha0: F, alpha1: F, alpha0p: F, alpha1p: F) -> Self {
        Self { side: Side::Right, alpha0, alpha1, alpha0p, alpha1p }
    }

    /// `theta = alpha1*alpha0p - alpha0*alpha1p`, the 2x2 determinant of the
    /// coefficient rows. Zero exactly when the lambda row is proportional to
    /// the lambda-free row (in particular when it vanishes).
    pub fn theta(&self) -> F {
        self.alpha1 * self.alpha0p - self.alpha0 * self.alpha1p
    }

    /// True when the lambda row is identically zero, i.e. the condition does
    /// not involve the eigenparameter at all.
    pub fn lambda_row_zero(&self) -> bool {
        self.alpha0p == F::zero() && self.alpha1p == F::zero()
    }

    fn all_zero(&self) -> bool {
        self.alpha0 == F::zero()
            && self.alpha1 == F::zero()
            && self.lambda_row_zero()
    }
}

/// The six 2x2 column minors of the 2x4 transmission matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Minors<F> {
    pub d12: F,
    pub d13: F,
    pub d14: F,
    pub d23: F,
    pub d24: F,
    pub d34: F,
}

impl<F: Real> Minors<F> {
    /// Computes the minors of a 2x4 matrix: `d_ij` is the determinant of
    /// columns `i` and `j` (1-based).
    pub fn of(beta: &[[F; 4]; 2]) -> Self {
        let m = |i: usize, j: usize| beta[0][i] * beta[1][j] - beta[0][j] * beta[1][i];
        Minors {
            d12: m(0, 1),
            d13: m(0, 2),
            d14: m(0, 3),
            d23: m(1, 2),
            d24: m(1, 3),
            d34: m(2, 3),
        }
    }

    /// `d13*d24 - d14*d23 - d12*d34`; identically zero in exact arithmetic.
    pub fn plucker_residual(&self) -> F {
        self.d13 * self.d24 - self.d14 * self.d23 - self.d12 * self.d34
    }
}

/// Transmission conditions at the interface, given as the 2x4 coefficient
/// matrix with columns ordered (value-, derivative-, value+, derivative+).
/// The minors are computed once at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct TransmissionSpec<F> {
    pub beta: [[F; 4]; 2],
    pub minors: Minors<F>,
}

impl<F: Real> TransmissionSpec<F> {
    pub fn new(beta: [[F; 4]; 2]) -> Self {
        let minors = Minors::of(&beta);
        Self { beta, minors }
    }

    /// The identity interface: value and derivative continuous across `c`.
    pub fn identity() -> Self {
        let one = F::one();
        let zero = F::zero();
        Self::new([[one, zero, -one, zero], [zero, one, zero, -one]])
    }
}

/// Full problem definition on `[a, c) U (c, b]`.
#[derive(Debug, Clone)]
pub struct ProblemConfig<F> {
    pub a: F,
    pub c: F,
    pub b: F,
    pub p_minus: F,
    pub p_plus: F,
    pub q_minus: Expr,
    pub q_plus: Expr,
    pub left: BoundaryCoeffs<F>,
    pub right: BoundaryCoeffs<F>,
    pub transmission: TransmissionSpec<F>,
    pub mode: Mode,
    /// RK4 steps per subinterval; must be even and positive.
    pub steps_per_side: usize,
}

impl<F: Real> ProblemConfig<F> {
    pub fn theta1(&self) -> F {
        self.left.theta()
    }

    pub fn theta2(&self) -> F {
        self.right.theta()
    }

    pub fn minors(&self) -> &Minors<F> {
        &self.transmission.minors
    }

    /// Whether the left boundary contributes a scalar component to the
    /// modified space (disabled in the degenerate theta1 = 0 mode).
    pub fn left_component_active(&self) -> bool {
        self.theta1() != F::zero()
    }

    pub fn right_component_active(&self) -> bool {
        self.theta2() != F::zero()
    }

    pub fn side_interval(&self, side: Side) -> (F, F) {
        match side {
            Side::Left => (self.a, self.c),
            Side::Right => (self.c, self.b),
        }
    }

    pub fn p(&self, side: Side) -> F {
        match side {
            Side::Left => self.p_minus,
            Side::Right => self.p_plus,
        }
    }

    pub fn q(&self, side: Side) -> &Expr {
        match side {
            Side::Left => &self.q_minus,
            Side::Right => &self.q_plus,
        }
    }

    /// The canonical uniform node grid on one side (N+1 points, endpoints
    /// exact). All stored paths and quadratures share this grid.
    pub fn side_nodes(&self, side: Side) -> Vec<F> {
        let (lo, hi) = self.side_interval(side);
        let n = self.steps_per_side;
        let nf = F::from_usize(n).unwrap();
        let span = hi - lo;
        (0..=n)
            .map(|i| {
                if i == n {
                    hi
                } else {
                    lo + span * (F::from_usize(i).unwrap() / nf)
                }
            })
            .collect()
    }

    /// Checks every standing assumption and returns the full report.
    pub fn validate(&self) -> ValidationReport<F> {
        let mut checks = Vec::new();
        let strict = self.mode == Mode::Strict;
        let m = *self.minors();
        let theta1 = self.theta1();
        let theta2 = self.theta2();

        let ordered = self.a < self.c && self.c < self.b;
        checks.push(Check::gate(
            "a < c < b",
            ordered,
            format!("a = {}, c = {}, b = {}", self.a, self.c, self.b),
        ));
        checks.push(Check::gate(
            "p- > 0",
            self.p_minus > F::zero(),
            format!("p- = {}", self.p_minus),
        ));
        checks.push(Check::gate(
            "p+ > 0",
            self.p_plus > F::zero(),
            format!("p+ = {}", self.p_plus),
        ));
        checks.push(Check::gate(
            "steps_per_side even and positive",
            self.steps_per_side > 0 && self.steps_per_side % 2 == 0,
            format!("steps_per_side = {}", self.steps_per_side),
        ));
        checks.push(Check::gate(
            "left boundary row nonzero",
            !self.left.all_zero(),
            String::new(),
        ));
        checks.push(Check::gate(
            "right boundary row nonzero",
            !self.right.all_zero(),
            String::new(),
        ));
        checks.push(Check::gate(
            "Delta12 != 0",
            m.d12 != F::zero(),
            if m.d12 == F::zero() {
                "transmission matrix left block singular".into()
            } else {
                format!("Delta12 = {}", m.d12)
            },
        ));
        checks.push(Check::gate(
            "Delta34 != 0",
            m.d34 != F::zero(),
            if m.d34 == F::zero() {
                "transmission matrix right block singular".into()
            } else {
                format!("Delta34 = {}", m.d34)
            },
        ));
        checks.push(Check::sign("Delta12 > 0", m.d12, strict));
        checks.push(Check::sign("Delta34 > 0", m.d34, strict));
        checks.push(Self::theta_check("theta1", theta1, &self.left, strict));
        checks.push(Self::theta_check("theta2", theta2, &self.right, strict));

        ValidationReport { checks, theta1, theta2, minors: m }
    }

    fn theta_check(name: &str, theta: F, coeffs: &BoundaryCoeffs<F>, strict: bool) -> Check {
        if theta > F::zero() {
            Check {
                name: format!("{name} > 0"),
                status: CheckStatus::Pass,
                detail: format!("{name} = {theta}"),
            }
        } else if theta == F::zero() && coeffs.lambda_row_zero() {
            let side = match coeffs.side {
                Side::Left => "left",
                Side::Right => "right",
            };
            Check {
                name: format!("{name} > 0"),
                status: CheckStatus::Warn,
                detail: format!("{name} = 0 (degenerate {side} boundary mode)"),
            }
        } else if theta == F::zero() {
            // lambda row nonzero but proportional to the other row: the
            // scalar-component weight 1/theta is undefined and the condition
            // is not genuinely lambda-dependent
            Check {
                name: format!("{name} > 0"),
                status: CheckStatus::Fail,
                detail: format!("{name} = 0 with a nonzero lambda row (unsupported)"),
            }
        } else {
            Check {
                name: format!("{name} > 0"),
                status: if strict { CheckStatus::Fail } else { CheckStatus::Warn },
                detail: format!("{name} = {theta} < 0"),
            }
        }
    }

    /// Validates and errors out on hard failures.
    pub fn validated(&self) -> Result<ValidationReport<F>> {
        let report = self.validate();
        if report.is_rejected() {
            Err(Error::InvalidConfig {
                failures: report
                    .failures()
                    .map(|chk| format!("{}: {}", chk.name, chk.detail))
                    .collect(),
            })
        } else {
            Ok(report)
        }
    }
}

/// Outcome of one validation check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    Warn,
    Fail,
}

/// One named assumption with its outcome and a human-readable detail line.
#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub status: CheckStatus,
    pub detail: String,
}

impl Check {
    fn gate(name: &str, ok: bool, detail: String) -> Self {
        Check {
            name: name.into(),
            status: if ok { CheckStatus::Pass } else { CheckStatus::Fail },
            detail,
        }
    }

    fn sign<F: Real>(name: &str, value: F, strict: bool) -> Self {
        let status = if value > F::zero() {
            CheckStatus::Pass
        } else if value == F::zero() {
            // already a hard failure in the != 0 gate; do not double-report
            CheckStatus::Fail
        } else if strict {
            CheckStatus::Fail
        } else {
            CheckStatus::Warn
        };
        Check {
            name: name.into(),
            status,
            detail: format!("value = {}", as_f64(value)),
        }
    }
}

/// Assumption report produced by [`ProblemConfig::validate`].
#[derive(Debug, Clone)]
pub struct ValidationReport<F> {
    pub checks: Vec<Check>,
    pub theta1: F,
    pub theta2: F,
    pub minors: Minors<F>,
}

impl<F> ValidationReport<F> {
    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == CheckStatus::Fail)
    }

    pub fn warnings(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == CheckStatus::Warn)
    }

    pub fn is_rejected(&self) -> bool {
        self.failures().next().is_some()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;

    #[test]
    fn minors_of_identity_transmission() {
        let m = TransmissionSpec::<f64>::identity().minors;
        assert_eq!(m.d12, 1.0);
        assert_eq!(m.d13, 0.0);
        assert_eq!(m.d14, -1.0);
        assert_eq!(m.d23, 1.0);
        assert_eq!(m.d24, 0.0);
        assert_eq!(m.d34, 1.0);
        assert_eq!(m.plucker_residual(), 0.0);
    }

    #[test]
    fn minors_of_paper_example_matrix() {
        let t = TransmissionSpec::new([[1.0, 0.0, -1.0, 0.0], [0.0, 1.0, 0.0, -0.5]]);
        let m = t.minors;
        assert_eq!(m.d12, 1.0);
        assert_eq!(m.d13, 0.0);
        assert_eq!(m.d14, -0.5);
        assert_eq!(m.d23, 1.0);
        assert_eq!(m.d24, 0.0);
        assert_eq!(m.d34, 0.5);
    }

    #[test]
    fn dirichlet_config_warns_degenerate_thetas() {
        let report = presets::dirichlet::<f64>().validate();
        assert!(!report.is_rejected());
        assert_eq!(report.theta1, 0.0);
        assert_eq!(report.theta2, 0.0);
        let warns: Vec<_> = report.warnings().map(|c| c.detail.clone()).collect();
        assert!(warns.iter().any(|w| w.contains("theta1 = 0 (degenerate left boundary mode)")));
        assert!(warns.iter().any(|w| w.contains("theta2 = 0 (degenerate right boundary mode)")));
    }

    #[test]
    fn paper_example_lenient_warns_negative_thetas() {
        let cfg = presets::paper_example::<f64>();
        let report = cfg.validate();
        assert!(!report.is_rejected());
        assert_eq!(report.theta1, -1.0);
        assert_eq!(report.theta2, -1.0);
        assert_eq!(report.warnings().count(), 2);
    }

    #[test]
    fn paper_example_rejected_in_strict_mode() {
        let mut cfg = presets::paper_example::<f64>();
        cfg.mode = Mode::Strict;
        assert!(cfg.validate().is_rejected());
    }

    #[test]
    fn singular_right_block_rejected() {
        let mut cfg = presets::dirichlet::<f64>();
        cfg.transmission =
            TransmissionSpec::new([[1.0, 0.0, 0.0, 0.0], [0.0, 1.0, 0.0, 0.0]]);
        let report = cfg.validate();
        assert!(report.is_rejected());
        let msgs: Vec<_> = report.failures().map(|c| c.detail.clone()).collect();
        assert!(msgs.iter().any(|m| m.contains("right block singular")));
        assert!(matches!(cfg.validated(), Err(Error::InvalidConfig { .. })));
    }

    #[test]
    fn validate_is_pure() {
        let cfg = presets::paper_example::<f64>();
        let r1 = format!("{:?}", cfg.validate().checks);
        let r2 = format!("{:?}", cfg.validate().checks);
        assert_eq!(r1, r2);
    }

    #[test]
    fn node_grid_hits_endpoints_exactly() {
        let cfg = presets::dirichlet::<f64>();
        let xs = cfg.side_nodes(Side::Left);
        assert_eq!(xs.len(), cfg.steps_per_side + 1);
        assert_eq!(xs[0], cfg.a);
        assert_eq!(*xs.last().unwrap(), cfg.c);
        assert!(xs.windows(2).all(|w| w[0] < w[1]));
    }
}
