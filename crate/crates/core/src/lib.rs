//! Sturm-Liouville boundary-value-transmission problems on a split interval
//! `[a, c) U (c, b]` with eigenparameter-dependent endpoint conditions.
//!
//! The pipeline: shoot the four basic solutions across the interface
//! ([`basis`]), find eigenvalues as zeros of the characteristic function
//! ([`spectrum`]), evaluate the Green's kernel and apply the resolvent to
//! inhomogeneous data ([`greens`]), and expand elements of the modified
//! space in normalized eigenfunctions ([`expansion`]).
//!
//! All numeric kernels are generic over the scalar type through
//! [`real::Real`]; the aliases at the crate root fix `f64`, which is what
//! the CLI and the verification suites run.

pub mod basis;
pub mod error;
pub mod expansion;
pub mod expr;
pub mod greens;
pub mod integrate;
pub mod presets;
pub mod problem;
pub mod real;
pub mod spectrum;

mod quad;
mod roots;

pub use error::{Error, Result};
pub use real::Real;

pub use basis::{
    fundamental_system, initial_left, initial_right, jump_backward, jump_forward, omega,
    transmission_residual_printed, transmission_residual_swapped, FundamentalSystem,
};
pub use expansion::{
    coefficients, decompose, expansion_error, inner_product_h, inner_product_h1,
    parseval_report, ParsevalReport, SpectralDecomposition,
};
pub use expr::{parse, Expr};
pub use greens::{
    green_eval, green_grid, resolve, verify_resolvent, FunctionPart, GreenGrid, HVector,
    ResidualReport,
};
pub use integrate::{integrate, ode_residual_sup, wronskian, PathNode, SolutionPath};
pub use problem::{
    BoundaryCoeffs, Check, CheckStatus, Minors, Mode, ProblemConfig, Side, TransmissionSpec,
    ValidationReport,
};
pub use spectrum::{
    boundary_functionals, eigenpair, orthogonality_check, scan, BoundaryFunctionals, Eigenpair,
    Eigenvalue, EigenvalueFlag, GramReport, ScanResult, ScanWarning,
};

/// `f64` instantiations of the main types.
pub type Config = problem::ProblemConfig<f64>;
pub type Path64 = integrate::SolutionPath<f64>;
pub type Fundamental64 = basis::FundamentalSystem<f64>;
pub type Eigenvalue64 = spectrum::Eigenvalue<f64>;
pub type Eigenpair64 = spectrum::Eigenpair<f64>;
pub type HVector64 = greens::HVector<f64>;
pub type GreenGrid64 = greens::GreenGrid<f64>;
pub type ScanResult64 = spectrum::ScanResult<f64>;
