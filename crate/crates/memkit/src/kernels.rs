//! Memory kernels and their structural checks.
//!
//! Two completely monotone kernel families drive the memory term:
//!
//! - power law (Riesz) `K(t) = t^{rho-2} / Gamma(rho - 1)` with
//!   `rho in (1, 2)`: singular at the origin, algebraic tail;
//! - exponential `K(t) = exp(-decay * t)` with `decay > 0`: bounded,
//!   integrable tail.
//!
//! Both are positive definite: the quadratic form
//! `Q[phi] = int_0^T phi(t) int_0^t K(t-s) phi(s) ds dt` is nonnegative for
//! every continuous `phi`. `positive_definiteness_residual` evaluates `Q`
//! for the piecewise-linear interpolant of sampled data — exactly, by
//! integrating the kernel against the per-cell-pair correlation polynomials
//! in closed form (exponential) or with spectrally convergent panel
//! quadrature away from the integrable singularity (power law). Exactness
//! matters: an outer quadrature of the inner integral can report spurious
//! negative values for highly oscillatory samples, while the exact form is
//! nonnegative up to rounding.

use crate::gamma::gamma;
use crate::{Error, Result};

/// Validated description of a memory kernel.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum KernelSpec {
    /// `K(t) = t^{rho-2} / Gamma(rho - 1)`, `rho in (1, 2)`.
    Riesz { rho: f64 },
    /// `K(t) = exp(-decay * t)`, `decay > 0`.
    Exponential { decay: f64 },
}

impl KernelSpec {
    pub fn riesz(rho: f64) -> Result<KernelSpec> {
        let k = KernelSpec::Riesz { rho };
        k.validate()?;
        Ok(k)
    }

    pub fn exponential(decay: f64) -> Result<KernelSpec> {
        let k = KernelSpec::Exponential { decay };
        k.validate()?;
        Ok(k)
    }

    /// Checks the parameter ranges; entry points call this so that directly
    /// constructed variants are vetted too.
    pub fn validate(&self) -> Result<()> {
        match *self {
            KernelSpec::Riesz { rho } => {
                if !rho.is_finite() || rho <= 1.0 || rho >= 2.0 {
                    return Err(Error::InvalidParameter(format!(
                        "power-law exponent rho must lie in (1, 2), got {rho}"
                    )));
                }
            }
            KernelSpec::Exponential { decay } => {
                if !decay.is_finite() || decay <= 0.0 {
                    return Err(Error::InvalidParameter(format!(
                        "exponential decay rate must be positive, got {decay}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Pointwise kernel value. The power-law kernel is undefined at `t = 0`
    /// (integrable singularity); both reject negative times.
    pub fn eval(&self, t: f64) -> Result<f64> {
        self.validate()?;
        if !t.is_finite() {
            return Err(Error::Domain(format!("kernel argument must be finite, got {t}")));
        }
        match *self {
            KernelSpec::Riesz { rho } => {
                if t <= 0.0 {
                    return Err(Error::Domain(format!(
                        "power-law kernel is singular at the origin; need t > 0, got {t}"
                    )));
                }
                Ok(t.powf(rho - 2.0) / gamma(rho - 1.0))
            }
            KernelSpec::Exponential { decay } => {
                if t < 0.0 {
                    return Err(Error::Domain(format!(
                        "kernel is defined for t >= 0, got {t}"
                    )));
                }
                Ok((-decay * t).exp())
            }
        }
    }

    /// Evaluates `Q[phi] = int_0^T phi int_0^t K(t-s) phi(s) ds dt` for the
    /// piecewise-linear interpolant of `phi` sampled uniformly on `[0, T]`
    /// (`phi.len() - 1` cells). The double integral is computed exactly per
    /// cell pair, so for these positive definite kernels the result is
    /// nonnegative up to rounding — a structural check on kernel data.
    pub fn positive_definiteness_residual(&self, phi: &[f64], t_final: f64) -> Result<f64> {
        self.validate()?;
        if phi.len() < 2 {
            return Err(Error::InvalidParameter(format!(
                "need at least two samples of phi, got {}",
                phi.len()
            )));
        }
        if phi.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("phi samples must be finite".into()));
        }
        if !t_final.is_finite() || t_final <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "final time must be positive, got {t_final}"
            )));
        }
        let n = phi.len() - 1;
        let h = t_final / n as f64;

        // Per-band moments mu_j = int_0^1 v^j K(h(l +/- v)) dv, scaled by a
        // kernel-dependent prefactor collected at the end. The minus-side
        // moments for band l fold in one decay step so nothing overflows.
        let (prefactor, plus, minus): (
            f64,
            Box<dyn Fn(usize) -> [f64; 4]>,
            Box<dyn Fn(usize) -> [f64; 4]>,
        ) = match *self {
            KernelSpec::Riesz { rho } => (
                h.powf(rho - 2.0) / gamma(rho - 1.0),
                Box::new(move |l| {
                    if l == 0 {
                        // int v^{j+rho-2} dv
                        [0, 1, 2, 3].map(|j| 1.0 / (j as f64 + rho - 1.0))
                    } else {
                        power_moments(rho, l as f64, 1.0)
                    }
                }),
                Box::new(move |l| {
                    if l == 1 {
                        // int v^j (1-v)^{rho-2} dv = j! Gamma(rho-1)/Gamma(j+rho)
                        let mut out = [0.0; 4];
                        let mut fact = 1.0;
                        for (j, o) in out.iter_mut().enumerate() {
                            if j > 0 {
                                fact *= j as f64;
                            }
                            *o = fact * gamma(rho - 1.0) / gamma(j as f64 + rho);
                        }
                        out
                    } else {
                        power_moments(rho, l as f64, -1.0)
                    }
                }),
            ),
            KernelSpec::Exponential { decay } => {
                let c = decay * h;
                let fwd = exp_moments_decaying(c); // int v^j e^{-cv} dv
                let rev = exp_moments_reversed(c); // int v^j e^{-c(1-v)} dv
                (
                    1.0,
                    Box::new(move |l| fwd.map(|m| m * (-c * l as f64).exp())),
                    Box::new(move |l| rev.map(|m| m * (-c * (l as f64 - 1.0)).exp())),
                )
            }
        };

        // Correlation polynomials of the unit hat overlaps, as moment combos:
        // same-slope pairs share (2 - 3v + v^3)/6; the cross terms are
        // (1 + 3v - 3v^2 - v^3)/6 and (1 - v)^3/6, which swap roles between
        // the v > 0 and v < 0 half-bands.
        let same = |m: [f64; 4]| (2.0 * m[0] - 3.0 * m[1] + m[3]) / 6.0;
        let cross_near = |m: [f64; 4]| (m[0] + 3.0 * m[1] - 3.0 * m[2] - m[3]) / 6.0;
        let cross_far = |m: [f64; 4]| (m[0] - 3.0 * m[1] + 3.0 * m[2] - m[3]) / 6.0;

        let mut q = 0.0;
        for l in 1..n {
            let mp = plus(l);
            let mn = minus(l);
            let i_same = same(mp) + same(mn);
            let i_qp = cross_near(mp) + cross_far(mn);
            let i_pq = cross_far(mp) + cross_near(mn);
            let mut s_same = 0.0;
            let mut s_qp = 0.0;
            let mut s_pq = 0.0;
            for c in 0..(n - l) {
                let d = c + l;
                s_same += phi[d] * phi[c] + phi[d + 1] * phi[c + 1];
                s_qp += phi[d + 1] * phi[c];
                s_pq += phi[d] * phi[c + 1];
            }
            q += i_same * s_same + i_qp * s_qp + i_pq * s_pq;
        }
        // Diagonal cells: the triangle s <= t is the v >= 0 half only.
        let m0 = plus(0);
        let t_same = same(m0);
        let t_cross = cross_near(m0) + cross_far(m0);
        for c in 0..n {
            q += t_same * (phi[c] * phi[c] + phi[c + 1] * phi[c + 1])
                + t_cross * phi[c] * phi[c + 1];
        }
        Ok(q * h * h * prefactor)
    }
}

// Gauss-Legendre 4-point rule on [-1, 1] (shared with the projection in
// `spectral`, duplicated to keep the modules dependency-free of each other).
const GL4_NODES: [f64; 4] = [
    -0.8611363115940526,
    -0.3399810435848563,
    0.3399810435848563,
    0.8611363115940526,
];
const GL4_WEIGHTS: [f64; 4] = [
    0.3478548451374538,
    0.6521451548625461,
    0.6521451548625461,
    0.3478548451374538,
];

/// `int_0^1 v^j (l + sign*v)^{rho-2} dv` for `l >= 1` (analytic integrand;
/// for sign = -1 the call sites guarantee `l >= 2`). Sixteen Gauss-Legendre
/// panels put the error near rounding.
pub(crate) fn power_moments(rho: f64, l: f64, sign: f64) -> [f64; 4] {
    const PANELS: usize = 16;
    let h = 1.0 / PANELS as f64;
    let mut out = [0.0; 4];
    for p in 0..PANELS {
        let mid = (p as f64 + 0.5) * h;
        for (node, weight) in GL4_NODES.iter().zip(GL4_WEIGHTS) {
            let v = mid + 0.5 * h * node;
            let kv = 0.5 * h * weight * (l + sign * v).powf(rho - 2.0);
            let mut vp = 1.0;
            for o in &mut out {
                *o += kv * vp;
                vp *= v;
            }
        }
    }
    out
}

/// `m_j = int_0^1 v^j e^{-c v} dv`, `c >= 0`.
pub(crate) fn exp_moments_decaying(c: f64) -> [f64; 4] {
    if c < 0.5 {
        return exp_moment_series(-c, 1.0);
    }
    let e = (-c).exp();
    let mut out = [0.0; 4];
    out[0] = -f64::exp_m1(-c) / c;
    for j in 1..4 {
        out[j] = (j as f64 * out[j - 1] - e) / c;
    }
    out
}

/// `m_j = int_0^1 v^j e^{-c(1-v)} dv`, `c >= 0`; never forms e^{+c}.
fn exp_moments_reversed(c: f64) -> [f64; 4] {
    if c < 0.5 {
        return exp_moment_series(c, (-c).exp());
    }
    let mut out = [0.0; 4];
    out[0] = -f64::exp_m1(-c) / c;
    for j in 1..4 {
        out[j] = (1.0 - j as f64 * out[j - 1]) / c;
    }
    out
}

/// `scale * sum_i s^i / (i! (i+j+1))` — the small-|c| Taylor form of the
/// moments above (s = -c decaying, s = +c reversed with scale e^{-c}).
fn exp_moment_series(s: f64, scale: f64) -> [f64; 4] {
    let mut out = [0.0; 4];
    for (j, o) in out.iter_mut().enumerate() {
        let mut term = 1.0;
        let mut acc = 1.0 / (j as f64 + 1.0);
        for i in 1..30 {
            term *= s / i as f64;
            let add = term / (i + j + 1) as f64;
            acc += add;
            if add.abs() < 1e-18 * acc.abs() {
                break;
            }
        }
        *o = scale * acc;
    }
    out
}
