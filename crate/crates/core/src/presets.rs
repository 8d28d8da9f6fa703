//! Built-in problem configurations used by the CLI examples and the test
//! suite.

use crate::expr::parse;
use crate::problem::{BoundaryCoeffs, Mode, ProblemConfig, TransmissionSpec};
use crate::real::{cst, Real};

/// Classical Dirichlet problem recovered in the degenerate boundary mode:
/// `-y'' = lambda*y` on `[0, pi]`, `y(0) = y(pi) = 0`, identity interface at
/// `pi/2`. Spectrum `lambda_n = n^2`.
pub fn dirichlet<F: Real>() -> ProblemConfig<F> {
    ProblemConfig {
        a: F::zero(),
        c: cst(std::f64::consts::FRAC_PI_2),
        b: cst(std::f64::consts::PI),
        p_minus: F::one(),
        p_plus: F::one(),
        q_minus: parse("0").unwrap(),
        q_plus: parse("0").unwrap(),
        left: BoundaryCoeffs::left(F::one(), F::zero(), F::zero(), F::zero()),
        right: BoundaryCoeffs::right(F::one(), F::zero(), F::zero(), F::zero()),
        transmission: TransmissionSpec::identity(),
        mode: Mode::Lenient,
        steps_per_side: 2000,
    }
}

/// The worked example: `-y'' = lambda*y` on `[-1, 1]`, interface at 0,
/// boundary conditions `y(-1) + lambda*y'(-1) = 0` and
/// `lambda*y(1) + y'(1) = 0`, interface map `(u, v) -> (u, v/2)`.
///
/// Both theta determinants are negative, so this configuration only passes
/// validation in lenient mode and the modified inner product is indefinite.
pub fn paper_example<F: Real>() -> ProblemConfig<F> {
    ProblemConfig {
        a: -F::one(),
        c: F::zero(),
        b: F::one(),
        p_minus: F::one(),
        p_plus: F::one(),
        q_minus: parse("0").unwrap(),
        q_plus: parse("0").unwrap(),
        left: BoundaryCoeffs::left(F::one(), F::zero(), F::zero(), F::one()),
        right: BoundaryCoeffs::right(F::zero(), -F::one(), F::one(), F::zero()),
        transmission: TransmissionSpec::new([
            [F::one(), F::zero(), -F::one(), F::zero()],
            [F::zero(), F::one(), F::zero(), cst(-0.5)],
        ]),
        mode: Mode::Lenient,
        steps_per_side: 2000,
    }
}

/// A configuration with genuinely eigenparameter-dependent conditions at
/// both ends and positive thetas: `y'(0) = -lambda*y(0)`,
/// `y'(pi) = lambda*y(pi)`, identity interface at `pi/2`. theta1 = theta2 = 1,
/// so it passes strict validation and the modified inner product is positive
/// definite. lambda = 0 is its lowest eigenvalue (constant eigenfunction).
pub fn lambda_dependent<F: Real>() -> ProblemConfig<F> {
    ProblemConfig {
        a: F::zero(),
        c: cst(std::f64::consts::FRAC_PI_2),
        b: cst(std::f64::consts::PI),
        p_minus: F::one(),
        p_plus: F::one(),
        q_minus: parse("0").unwrap(),
        q_plus: parse("0").unwrap(),
        left: BoundaryCoeffs::left(F::zero(), F::one(), F::one(), F::zero()),
        right: BoundaryCoeffs::right(F::zero(), F::one(), F::one(), F::zero()),
        transmission: TransmissionSpec::identity(),
        mode: Mode::Strict,
        steps_per_side: 2000,
    }
}
