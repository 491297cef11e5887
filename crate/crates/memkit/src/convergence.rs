//! Convergence-order verification by dyadic refinement.
//!
//! A study runs one scheme over a ladder of step counts, measures each
//! final-time state against a same-scheme reference on a much finer grid
//! (eight times the finest ladder rung), and reports per-rung errors,
//! pairwise observed orders, and a least-squares slope of
//! `log(error)` against `log(h)`.
//!
//! Errors are Euclidean norms of modal coefficient differences, which by
//! Parseval equal the discrete L2 distance of the fields. Rungs whose error
//! has fallen to the fixed-point noise floor (below `100 * fp_tol`) are
//! excluded from the fit so the slope reflects the discretization error,
//! not iteration noise.

use crate::integrator::{run_exponential_euler, run_trapezoidal, SolverConfig, Trajectory};
use crate::spectral::ModalField;
use crate::{Error, Result};

/// Time-stepping scheme selector.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scheme {
    /// Second-order implicit exponential trapezoidal rule.
    Trapezoidal,
    /// First-order explicit exponential Euler rule.
    ExponentialEuler,
}

impl Scheme {
    pub fn run<F: Fn(f64) -> f64>(
        &self,
        config: &SolverConfig,
        u0: &ModalField,
        f: F,
    ) -> Result<Trajectory> {
        match self {
            Scheme::Trapezoidal => run_trapezoidal(config, u0, f),
            Scheme::ExponentialEuler => run_exponential_euler(config, u0, f),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Scheme::Trapezoidal => "trapezoidal",
            Scheme::ExponentialEuler => "exponential-euler",
        }
    }
}

/// One rung of the refinement ladder.
#[derive(Clone, Copy, Debug)]
pub struct ConvergenceRow {
    pub steps: usize,
    pub h: f64,
    /// Modal L2 distance to the reference final state.
    pub error: f64,
    /// Order estimate against the previous rung; `None` on the first rung.
    pub observed_order: Option<f64>,
}

/// Outcome of a refinement study.
#[derive(Clone, Debug)]
pub struct ConvergenceReport {
    pub scheme: Scheme,
    pub rows: Vec<ConvergenceRow>,
    /// Least-squares slope of log error vs log h over trusted rungs.
    pub fitted_slope: f64,
    pub reference_steps: usize,
}

/// Runs `scheme` for every step count in `m_values` (strictly increasing)
/// and compares final states against a same-scheme reference using
/// `8 * m_values.last()` steps. `base.steps` is overridden per rung.
pub fn convergence_study<F: Fn(f64) -> f64>(
    base: &SolverConfig,
    u0: &ModalField,
    f: F,
    scheme: Scheme,
    m_values: &[usize],
) -> Result<ConvergenceReport> {
    if m_values.is_empty() {
        return Err(Error::InvalidParameter(
            "refinement ladder must contain at least one step count".into(),
        ));
    }
    if m_values.windows(2).any(|w| w[0] >= w[1]) || m_values[0] == 0 {
        return Err(Error::InvalidParameter(
            "step counts must be positive and strictly increasing".into(),
        ));
    }
    let reference_steps = 8 * m_values[m_values.len() - 1];

    let mut config = base.clone();
    config.steps = reference_steps;
    config.validate()?;
    let reference = scheme.run(&config, u0, &f)?;
    let ref_final = reference.final_state();

    let mut rows: Vec<ConvergenceRow> = Vec::with_capacity(m_values.len());
    for &m in m_values {
        config.steps = m;
        let traj = scheme.run(&config, u0, &f)?;
        let err = modal_distance(traj.final_state(), ref_final)?;
        let h = config.step_size();
        let observed_order = rows.last().map(|prev: &ConvergenceRow| {
            (prev.error / err).ln() / (prev.h / h).ln()
        });
        rows.push(ConvergenceRow {
            steps: m,
            h,
            error: err,
            observed_order,
        });
    }

    let floor = 100.0 * config.fp_tol;
    let trusted: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.error > floor)
        .map(|r| (r.h.ln(), r.error.ln()))
        .collect();
    if trusted.len() < 2 {
        return Err(Error::Domain(format!(
            "only {} rung(s) exceed the noise floor {floor:.1e}; \
             cannot fit a convergence slope",
            trusted.len()
        )));
    }
    let xbar = trusted.iter().map(|p| p.0).sum::<f64>() / trusted.len() as f64;
    let ybar = trusted.iter().map(|p| p.1).sum::<f64>() / trusted.len() as f64;
    let mut num = 0.0;
    let mut den = 0.0;
    for (x, y) in &trusted {
        num += (x - xbar) * (y - ybar);
        den += (x - xbar) * (x - xbar);
    }
    Ok(ConvergenceReport {
        scheme,
        rows,
        fitted_slope: num / den,
        reference_steps,
    })
}

fn modal_distance(a: &ModalField, b: &ModalField) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch(format!(
            "cannot compare states of {} and {} modes",
            a.len(),
            b.len()
        )));
    }
    let mut acc = 0.0;
    for (x, y) in a.0.iter().zip(&b.0) {
        let d = x - y;
        acc += d * d;
    }
    Ok(acc.sqrt())
}
