//! Solver toolkit for semilinear integro-differential equations with memory:
//!
//! ```text
//!     u'(t) + int_0^t K(t - s) A u(s) ds = f(u(t)),   u(0) = u0,
//! ```
//!
//! posed on the unit interval with homogeneous Dirichlet conditions, where
//! `-A` is the 1-D Laplacian and `K` is a positive-definite memory kernel
//! (a weakly singular power kernel or a decaying exponential).
//!
//! The discretization is spectral Galerkin in space (sine basis, where `A`
//! diagonalizes) and an exponential integrator in time built on the resolvent
//! family `S(t)` of the linear problem: per mode, scalar relaxation functions
//! `s_k(t)` and their exact cell integrals form quadrature weights for the
//! variation-of-constants formula. Two schemes are provided: an implicit
//! exponential trapezoidal rule (second order) and an explicit exponential
//! Euler rule (first order).
//!
//! Module map:
//! - [`gamma`]: scalar gamma function (Lanczos).
//! - [`mittag_leffler`]: two-parameter Mittag-Leffler function on the
//!   negative real axis, the scalar engine behind power-kernel resolvents.
//! - [`kernels`]: memory kernel definitions and a positive-definiteness
//!   diagnostic.
//! - [`spectral`]: sine transforms, eigenvalues, projections, norms.
//! - [`resolvent`]: per-mode relaxation functions, cell integrals, tables.
//! - [`integrator`]: the two time-stepping schemes plus the fixed-point
//!   kernel of the implicit step.
//! - [`convergence`]: self-convergence sweeps and order fitting.
//! - [`config`], [`output`]: CLI-facing run descriptions and artifact
//!   emission (CSV/SVG).

pub mod config;
pub mod convergence;
mod dd;
pub mod gamma;
pub mod integrator;
pub mod kernels;
pub mod mittag_leffler;
pub mod output;
pub mod resolvent;
pub mod spectral;

pub use integrator::{run_exponential_euler, run_trapezoidal, SolverConfig, Trajectory};
pub use kernels::KernelSpec;
pub use mittag_leffler::{ml, ml_e1, MLParams};
pub use resolvent::{build_resolvent_table, s_cell_integral, s_eval, ResolventTable};
pub use spectral::{
    discrete_l2_error, eigenvalue, project_initial, ModalField, NodalField, SineTransform,
};

/// Crate-wide error type.
///
/// Variants map onto the CLI's exit codes: configuration problems exit 2,
/// solver failures exit 3, and check failures exit 4.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A parameter is outside the range the algorithms support.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    /// An argument is outside a function's mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),
    /// Run description (flags or config file) is malformed or inconsistent.
    #[error("configuration error: {0}")]
    Config(String),
    /// The implicit step's fixed-point iteration failed to contract.
    #[error(
        "fixed-point iteration failed at step {step}: update {update:.3e} \
         after {iters} iterations (tol {tol:.3e})"
    )]
    FixedPointDivergence {
        step: usize,
        iters: usize,
        update: f64,
        tol: f64,
    },
    /// Two fields that must share a grid have different lengths.
    #[error("length mismatch: {0}")]
    LengthMismatch(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
