//! Output serialization: CSV tables and the convergence plot.
//!
//! Every file starts with the resolved configuration echoed as sorted
//! `# key=value` comment lines, so outputs are self-describing and any
//! header can be pasted back as an INI config to reproduce the run.
//! Numbers are written with `{:.16e}` (17 significant digits), which
//! round-trips f64 exactly; all writers build the full byte string
//! deterministically before touching the filesystem.

use std::path::Path;

use crate::convergence::ConvergenceReport;
use crate::integrator::Trajectory;
use crate::spectral::SineTransform;
use crate::Result;

fn write_file(path: &Path, content: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    std::fs::write(path, content)?;
    Ok(())
}

/// Solution values on the interior grid, one row per time step:
/// `t, u(x_1), ..., u(x_N)` with `x_j = j/(N+1)`.
pub fn render_solution_csv(echo: &[String], traj: &Trajectory) -> Result<String> {
    let n = traj.states[0].len();
    let transform = SineTransform::new(n)?;
    let mut out = String::new();
    for line in echo {
        out.push_str(line);
        out.push('\n');
    }
    out.push_str("# columns: t, u(x_j) for x_j = j/(N+1), j = 1..N\n");
    out.push('t');
    for j in 1..=n {
        out.push_str(&format!(",u_{j}"));
    }
    out.push('\n');
    for (i, state) in traj.states.iter().enumerate() {
        let nodal = transform.synthesize(state)?;
        out.push_str(&format!("{:.16e}", traj.times[i]));
        for v in &nodal.0 {
            out.push_str(&format!(",{v:.16e}"));
        }
        out.push('\n');
    }
    Ok(out)
}

pub fn write_solution_csv(path: &Path, echo: &[String], traj: &Trajectory) -> Result<()> {
    write_file(path, &render_solution_csv(echo, traj)?)
}

/// Per-step solver diagnostics: iteration counts, update sizes, residuals.
pub fn render_diagnostics_csv(echo: &[String], traj: &Trajectory) -> String {
    let mut out = String::new();
    for line in echo {
        out.push_str(line);
        out.push('\n');
    }
    out.push_str("step,t,iterations,last_update,residual\n");
    for d in &traj.diagnostics {
        out.push_str(&format!(
            "{},{:.16e},{},{:.16e},{:.16e}\n",
            d.step, traj.times[d.step], d.iterations, d.last_update, d.residual
        ));
    }
    out
}

pub fn write_diagnostics_csv(path: &Path, echo: &[String], traj: &Trajectory) -> Result<()> {
    write_file(path, &render_diagnostics_csv(echo, traj))
}

/// Refinement table: `h, error, observed_order` (order blank on the first
/// rung, which has no coarser neighbour).
pub fn render_convergence_csv(echo: &[String], report: &ConvergenceReport) -> String {
    let mut out = String::new();
    for line in echo {
        out.push_str(line);
        out.push('\n');
    }
    out.push_str(&format!("# fitted-slope={:.16e}\n", report.fitted_slope));
    out.push_str("h,error,observed_order\n");
    for row in &report.rows {
        match row.observed_order {
            Some(o) => out.push_str(&format!(
                "{:.16e},{:.16e},{o:.16e}\n",
                row.h, row.error
            )),
            None => out.push_str(&format!("{:.16e},{:.16e},\n", row.h, row.error)),
        }
    }
    out
}

pub fn write_convergence_csv(
    path: &Path,
    echo: &[String],
    report: &ConvergenceReport,
) -> Result<()> {
    write_file(path, &render_convergence_csv(echo, report))
}

/// Log-log convergence plot as a standalone SVG 1.1 document: error against
/// step size, decade grid lines on both axes, data polyline with markers,
/// and a dashed slope-2 reference guide.
pub fn render_convergence_svg(report: &ConvergenceReport) -> String {
    const W: f64 = 640.0;
    const H: f64 = 480.0;
    const L: f64 = 80.0; // left margin
    const R: f64 = 610.0;
    const T: f64 = 30.0;
    const B: f64 = 420.0;

    let pts: Vec<(f64, f64)> = report
        .rows
        .iter()
        .filter(|r| r.error > 0.0 && r.h > 0.0)
        .map(|r| (r.h.log10(), r.error.log10()))
        .collect();

    let mut svg = String::new();
    svg.push_str(&format!(
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#
    ));
    svg.push('\n');
    svg.push_str(&format!(
        r#"<rect x="0" y="0" width="{W}" height="{H}" fill="white"/>"#
    ));
    svg.push('\n');

    if pts.is_empty() {
        svg.push_str(
            r#"<text x="320" y="240" text-anchor="middle" font-family="sans-serif" font-size="14">no positive error data</text>"#,
        );
        svg.push_str("\n</svg>\n");
        return svg;
    }

    // Pad both ranges out to whole decades so the grid covers the data.
    let (mut x0, mut x1) = decade_bounds(pts.iter().map(|p| p.0));
    let (mut y0, mut y1) = decade_bounds(pts.iter().map(|p| p.1));
    if x1 - x0 < 1.0 {
        x0 -= 1.0;
        x1 += 1.0;
    }
    if y1 - y0 < 1.0 {
        y0 -= 1.0;
        y1 += 1.0;
    }
    let px = |lx: f64| L + (lx - x0) / (x1 - x0) * (R - L);
    let py = |ly: f64| B - (ly - y0) / (y1 - y0) * (B - T);

    // Decade grid and tick labels.
    let mut e = x0.ceil() as i64;
    while e as f64 <= x1 {
        let x = px(e as f64);
        svg.push_str(&format!(
            r##"<line x1="{x:.2}" y1="{T}" x2="{x:.2}" y2="{B}" stroke="#cccccc" stroke-width="1"/>"##
        ));
        svg.push('\n');
        svg.push_str(&format!(
            r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle" font-family="sans-serif" font-size="12">1e{e}</text>"#,
            B + 18.0
        ));
        svg.push('\n');
        e += 1;
    }
    let mut e = y0.ceil() as i64;
    while e as f64 <= y1 {
        let y = py(e as f64);
        svg.push_str(&format!(
            r##"<line x1="{L}" y1="{y:.2}" x2="{R}" y2="{y:.2}" stroke="#cccccc" stroke-width="1"/>"##
        ));
        svg.push('\n');
        svg.push_str(&format!(
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end" font-family="sans-serif" font-size="12">1e{e}</text>"#,
            L - 6.0,
            y + 4.0
        ));
        svg.push('\n');
        e += 1;
    }

    // Axes frame and titles.
    svg.push_str(&format!(
        r#"<rect x="{L}" y="{T}" width="{:.2}" height="{:.2}" fill="none" stroke="black" stroke-width="1"/>"#,
        R - L,
        B - T
    ));
    svg.push('\n');
    svg.push_str(&format!(
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" font-family="sans-serif" font-size="13">step size h</text>"#,
        (L + R) / 2.0,
        B + 40.0
    ));
    svg.push('\n');
    svg.push_str(&format!(
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" font-family="sans-serif" font-size="13" transform="rotate(-90 {:.2} {:.2})">error</text>"#,
        L - 50.0,
        (T + B) / 2.0,
        L - 50.0,
        (T + B) / 2.0
    ));
    svg.push('\n');
    svg.push_str(&format!(
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" font-family="sans-serif" font-size="13">{} refinement, fitted slope {:.3}</text>"#,
        (L + R) / 2.0,
        T - 10.0,
        report.scheme.name(),
        report.fitted_slope
    ));
    svg.push('\n');

    // Slope-2 reference guide anchored half a decade under the coarsest
    // point.
    let (ax, ay) = *pts.last().unwrap();
    let (cx, cy) = *pts.first().unwrap();
    let anchor_y = ay.max(cy) - 0.5;
    let anchor_x = if ax > cx { ax } else { cx };
    let gx0 = pts.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let guide = |lx: f64| anchor_y + 2.0 * (lx - anchor_x);
    svg.push_str(&format!(
        r##"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="#888888" stroke-width="1.5" stroke-dasharray="6 4"/>"##,
        px(gx0),
        py(guide(gx0)),
        px(anchor_x),
        py(guide(anchor_x))
    ));
    svg.push('\n');
    svg.push_str(&format!(
        r##"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="12" fill="#555555">slope 2</text>"##,
        px(anchor_x) - 60.0,
        py(guide(anchor_x)) + 16.0
    ));
    svg.push('\n');

    // Data polyline and markers.
    let path: Vec<String> = pts
        .iter()
        .map(|(lx, ly)| format!("{:.2},{:.2}", px(*lx), py(*ly)))
        .collect();
    svg.push_str(&format!(
        r##"<polyline points="{}" fill="none" stroke="#1f77b4" stroke-width="2"/>"##,
        path.join(" ")
    ));
    svg.push('\n');
    for (lx, ly) in &pts {
        svg.push_str(&format!(
            r##"<circle cx="{:.2}" cy="{:.2}" r="3.5" fill="#1f77b4"/>"##,
            px(*lx),
            py(*ly)
        ));
        svg.push('\n');
    }
    svg.push_str("</svg>\n");
    svg
}

pub fn write_convergence_svg(path: &Path, report: &ConvergenceReport) -> Result<()> {
    write_file(path, &render_convergence_svg(report))
}

fn decade_bounds(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for v in values {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    (lo.floor(), hi.ceil())
}
