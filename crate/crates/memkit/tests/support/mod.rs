//! Shared test-side numerics: quadrature and independent reference solvers
//! for the scalar relaxation equation. Nothing here calls into the library's
//! numeric paths; the only shared vocabulary is `f64`.

#![allow(dead_code)]

/// Adaptive Simpson quadrature with Richardson correction. `tol` is an
/// absolute target for the whole interval; the recursion splits it in half
/// per subdivision, so the final error is comfortably below `tol`.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
        (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: usize,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        let left = simpson(a, m, fa, flm, fm);
        let right = simpson(m, b, fm, frm, fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
    if a == b {
        return 0.0;
    }
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = simpson(a, b, fa, fm, fb);
    recurse(f, a, b, fa, fm, fb, whole, tol, 48)
}

/// Reference solution for the exponential-kernel relaxation equation
///
/// ```text
/// s'(t) + lambda int_0^t e^{-decay (t-tau)} s(tau) dtau = 0,  s(0) = 1,
/// ```
///
/// obtained WITHOUT the closed form: the memory term `v(t)` obeys the local
/// ODE `v' = s - decay * v`, so the pair `(s, v)` — augmented with the
/// running integral `F' = s` — is integrated by classical RK4 with step at
/// most `dt`. Returns `(s(t), F(t))` at each requested time; `times` must be
/// nondecreasing and nonnegative.
pub fn exponential_relaxation_by_ode(
    decay: f64,
    lambda: f64,
    times: &[f64],
    dt: f64,
) -> Vec<(f64, f64)> {
    let deriv = |y: [f64; 3]| [-lambda * y[1], y[0] - decay * y[1], y[0]];
    let mut y = [1.0, 0.0, 0.0];
    let mut t = 0.0;
    let mut out = Vec::with_capacity(times.len());
    for &target in times {
        assert!(target >= t, "times must be nondecreasing");
        let span = target - t;
        if span > 0.0 {
            let n = (span / dt).ceil() as usize;
            let h = span / n as f64;
            for _ in 0..n {
                let k1 = deriv(y);
                let k2 = deriv(step(y, k1, 0.5 * h));
                let k3 = deriv(step(y, k2, 0.5 * h));
                let k4 = deriv(step(y, k3, h));
                for i in 0..3 {
                    y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
                }
            }
        }
        t = target;
        out.push((y[0], y[2]));
    }
    out
}

fn step(y: [f64; 3], k: [f64; 3], h: f64) -> [f64; 3] {
    [y[0] + h * k[0], y[1] + h * k[1], y[2] + h * k[2]]
}

/// Reference solution for the power-kernel relaxation equation in its
/// integrated (second-kind Volterra) form
///
/// ```text
/// s(t) = 1 - lambda int_0^t (t - tau)^{rho-1} / Gamma(rho) s(tau) dtau,
/// ```
///
/// by product integration: `s` is piecewise linear on the uniform grid
/// `t_j = j T / n` and the continuous kernel factor is integrated against
/// each hat pair by 16-point Gauss-Legendre (the lag-zero cell in closed
/// form). Second-order accurate in `T/n`. `gamma_rho` must be `Gamma(rho)`,
/// supplied by the caller so this routine owns no gamma evaluation. Returns
/// `s` at all grid points `0..=n`.
pub fn power_relaxation_by_volterra(
    rho: f64,
    gamma_rho: f64,
    lambda: f64,
    t_final: f64,
    n: usize,
) -> Vec<f64> {
    let h = t_final / n as f64;
    let rule = gauss_legendre_unit(16);

    // Hat moments of (l + phi)^{rho-1} over phi in [0,1]:
    //   m0[l] = int (l+phi)^{rho-1} dphi,  m1[l] = int (l+phi)^{rho-1} phi dphi.
    // The integrand is analytic for l >= 1 (nearest singularity at phi = -l),
    // so the 16-point rule is exact to rounding; l = 0 has closed forms.
    let mut m0 = Vec::with_capacity(n);
    let mut m1 = Vec::with_capacity(n);
    m0.push(1.0 / rho);
    m1.push(1.0 / (rho + 1.0));
    for l in 1..n {
        let (mut a0, mut a1) = (0.0, 0.0);
        for &(x, w) in &rule {
            let k = (l as f64 + x).powf(rho - 1.0);
            a0 += w * k;
            a1 += w * x * k;
        }
        m0.push(a0);
        m1.push(a1);
    }

    // In the memory sum the cell at lag l contributes
    //   (m0[l] - m1[l]) * s_near + m1[l] * s_far
    // (near = sample closer to the current time). Lag 0 makes the step
    // implicit through its near weight; the update is linear, so solve
    // directly.
    let scale = lambda * h.powf(rho) / gamma_rho;
    let diag = scale * (m0[0] - m1[0]);
    let mut s = Vec::with_capacity(n + 1);
    s.push(1.0);
    for step in 1..=n {
        let mut acc = m1[0] * s[step - 1];
        for l in 1..step {
            acc += (m0[l] - m1[l]) * s[step - l] + m1[l] * s[step - 1 - l];
        }
        s.push((1.0 - scale * acc) / (1.0 + diag));
    }
    s
}

/// Reference solution of the sine-Galerkin SEMIDISCRETE system for the
/// exponential kernel, `u_k' + lambda_k v_k = g_k(u)` with memory state
/// `v_k' = u_k - decay * v_k`, `g = P_N f(u)`, integrated by classical RK4
/// with step at most `dt`. Returns the modal state at `t_final`.
///
/// Everything is built locally: eigenvalues `(k pi)^2` and a dense sine
/// transform from `f64::sin`, so no library numerics are reused.
pub fn exponential_semidiscrete_by_ode(
    decay: f64,
    u0: &[f64],
    f: &dyn Fn(f64) -> f64,
    t_final: f64,
    dt: f64,
) -> Vec<f64> {
    let n = u0.len();
    let pi = std::f64::consts::PI;
    let lambdas: Vec<f64> = (1..=n).map(|k| (k as f64 * pi).powi(2)).collect();
    let denom = (n + 1) as f64;
    let matrix: Vec<f64> = (0..n * n)
        .map(|i| {
            let (j, k) = (i / n, i % n);
            std::f64::consts::SQRT_2 * (((j + 1) * (k + 1)) as f64 * pi / denom).sin()
        })
        .collect();
    let apply = |v: &[f64], scale: f64| -> Vec<f64> {
        (0..n)
            .map(|row| {
                matrix[row * n..(row + 1) * n]
                    .iter()
                    .zip(v)
                    .map(|(m, x)| m * x)
                    .sum::<f64>()
                    * scale
            })
            .collect()
    };
    let project = |modal: &[f64]| -> Vec<f64> {
        let nodal = apply(modal, 1.0);
        let mapped: Vec<f64> = nodal.iter().map(|&v| f(v)).collect();
        apply(&mapped, 1.0 / denom)
    };
    // State layout: y[0..n] = u, y[n..2n] = v.
    let deriv = |y: &[f64]| -> Vec<f64> {
        let g = project(&y[..n]);
        let mut d = vec![0.0; 2 * n];
        for k in 0..n {
            d[k] = -lambdas[k] * y[n + k] + g[k];
            d[n + k] = y[k] - decay * y[n + k];
        }
        d
    };
    let mut y = vec![0.0; 2 * n];
    y[..n].copy_from_slice(u0);
    let steps = (t_final / dt).ceil() as usize;
    let h = t_final / steps as f64;
    let shift = |y: &[f64], k: &[f64], c: f64| -> Vec<f64> {
        y.iter().zip(k).map(|(a, b)| a + c * b).collect()
    };
    for _ in 0..steps {
        let k1 = deriv(&y);
        let k2 = deriv(&shift(&y, &k1, 0.5 * h));
        let k3 = deriv(&shift(&y, &k2, 0.5 * h));
        let k4 = deriv(&shift(&y, &k3, h));
        for i in 0..2 * n {
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    }
    y.truncate(n);
    y
}

/// Gauss-Legendre nodes and weights transplanted to [0, 1], computed by
/// Newton iteration on the Legendre recurrence.
pub fn gauss_legendre_unit(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..60 {
            let (p, dp) = legendre_pair(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre_pair(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out.push((0.5 * (x + 1.0), 0.5 * w));
    }
    out
}

/// Legendre polynomial `P_n(x)` and its derivative via the three-term
/// recurrence.
fn legendre_pair(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}
