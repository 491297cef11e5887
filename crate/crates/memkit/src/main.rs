use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use memkit::config::{Overrides, Settings};
use memkit::convergence::convergence_study;
use memkit::kernels::KernelSpec;
use memkit::mittag_leffler::{ml, MLParams};
use memkit::output;
use memkit::resolvent::volterra_residual;
use memkit::Error;

/// Spectral solver for semilinear evolution equations with memory kernels.
#[derive(Parser)]
#[command(name = "memkit", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate one problem and write solution.csv + diagnostics.csv.
    Run(RunArgs),
    /// Run a dyadic refinement study and write convergence.csv + .svg.
    Converge(ConvergeArgs),
    /// Evaluate the two-parameter Mittag-Leffler function E_{a,b}(z).
    Ml(MlArgs),
    /// Verify relaxation closed forms and kernel positivity.
    ResolventCheck(ResolventCheckArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Kernel family: riesz | exponential.
    #[arg(long)]
    kernel: Option<String>,
    /// Power-law exponent in (1, 2) for the riesz kernel.
    #[arg(long)]
    rho: Option<f64>,
    /// Decay rate for the exponential kernel.
    #[arg(long)]
    decay: Option<f64>,
    /// Number of retained sine modes.
    #[arg(long = "N")]
    n_modes: Option<usize>,
    /// Final time.
    #[arg(long = "T")]
    t_final: Option<f64>,
    /// Number of time steps.
    #[arg(long = "M")]
    steps: Option<usize>,
    /// Nonlinearity: sin | zero | const:<c> | cubic.
    #[arg(long = "f")]
    forcing: Option<String>,
    /// Initial profile: poly4x1mx | mode:<k> | coeffs:<c1,c2,...>.
    #[arg(long = "u0")]
    initial: Option<String>,
    /// Fixed-point stopping tolerance.
    #[arg(long = "fp-tol")]
    fp_tol: Option<f64>,
    /// Fixed-point iteration cap.
    #[arg(long = "fp-max-iters")]
    fp_max_iters: Option<usize>,
    /// Time integrator: trapezoidal | euler.
    #[arg(long)]
    method: Option<String>,
    /// Config file (INI key=value or JSON); flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
}

impl CommonArgs {
    fn overrides(&self, m_min: Option<usize>, m_max: Option<usize>) -> Overrides {
        Overrides {
            kernel: self.kernel.clone(),
            rho: self.rho,
            decay: self.decay,
            n_modes: self.n_modes,
            t_final: self.t_final,
            steps: self.steps,
            forcing: self.forcing.clone(),
            initial: self.initial.clone(),
            fp_tol: self.fp_tol,
            fp_max_iters: self.fp_max_iters,
            method: self.method.clone(),
            m_min,
            m_max,
        }
    }

    fn settings(&self, m_min: Option<usize>, m_max: Option<usize>) -> memkit::Result<Settings> {
        let file = match &self.config {
            Some(path) => Some(Overrides::from_file(path)?),
            None => None,
        };
        Settings::resolve(self.overrides(m_min, m_max), file)
    }
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Args)]
struct ConvergeArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Coarsest rung of the dyadic ladder.
    #[arg(long = "m-min")]
    m_min: Option<usize>,
    /// Finest rung of the dyadic ladder.
    #[arg(long = "m-max")]
    m_max: Option<usize>,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Args)]
struct MlArgs {
    /// First parameter, in (0, 2].
    #[arg(long, allow_negative_numbers = true)]
    a: f64,
    /// Second parameter, positive.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    b: f64,
    /// Argument, z <= 0.
    #[arg(long, allow_negative_numbers = true)]
    z: f64,
}

#[derive(Args)]
struct ResolventCheckArgs {
    /// Kernel family: riesz | exponential.
    #[arg(long, default_value = "riesz")]
    kernel: String,
    /// Power-law exponent for the riesz kernel.
    #[arg(long, default_value_t = 1.5)]
    rho: f64,
    /// Decay rate for the exponential kernel.
    #[arg(long, default_value_t = 2.0)]
    decay: f64,
    /// Eigenvalue of the checked mode (default: first sine mode, pi^2).
    #[arg(long)]
    lambda: Option<f64>,
    /// Final time of the check window.
    #[arg(long = "T", default_value_t = 1.0)]
    t_final: f64,
    /// Fine grid step of the product-integration quadrature.
    #[arg(long, default_value_t = 1e-4)]
    step: f64,
    /// Residual tolerance; defaults to 1e-3 * lambda.
    #[arg(long)]
    tol: Option<f64>,
}

fn exit_code_for(err: &Error) -> ExitCode {
    match err {
        Error::Config(_)
        | Error::InvalidParameter(_)
        | Error::Domain(_)
        | Error::LengthMismatch(_) => ExitCode::from(2),
        Error::FixedPointDivergence { .. } | Error::Io(_) => ExitCode::from(3),
    }
}

fn setup_threads() -> Result<(), String> {
    match std::env::var("MEMKIT_THREADS") {
        Err(_) => Ok(()),
        Ok(raw) => {
            let n: usize = raw
                .parse()
                .map_err(|_| format!("MEMKIT_THREADS must be a positive integer, got {raw:?}"))?;
            if n == 0 {
                return Err("MEMKIT_THREADS must be at least 1".into());
            }
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global()
                .map_err(|e| format!("cannot size the thread pool: {e}"))
        }
    }
}

fn cmd_run(args: &RunArgs) -> memkit::Result<ExitCode> {
    let settings = args.common.settings(None, None)?;
    let config = settings.solver_config();
    let u0 = settings.initial_modal()?;
    let forcing = settings.forcing;
    let traj = settings.method.run(&config, &u0, move |v| forcing.eval(v))?;
    let echo = settings.echo_lines();
    let solution = args.out.join("solution.csv");
    let diagnostics = args.out.join("diagnostics.csv");
    output::write_solution_csv(&solution, &echo, &traj)?;
    output::write_diagnostics_csv(&diagnostics, &echo, &traj)?;
    println!("wrote {}", solution.display());
    println!("wrote {}", diagnostics.display());
    Ok(ExitCode::SUCCESS)
}

fn cmd_converge(args: &ConvergeArgs) -> memkit::Result<ExitCode> {
    let settings = args.common.settings(args.m_min, args.m_max)?;
    let config = settings.solver_config();
    let u0 = settings.initial_modal()?;
    let ladder = settings.ladder()?;
    let forcing = settings.forcing;
    let report = convergence_study(
        &config,
        &u0,
        move |v| forcing.eval(v),
        settings.method,
        &ladder,
    )?;
    let echo = settings.echo_lines();
    let csv = args.out.join("convergence.csv");
    let svg = args.out.join("convergence.svg");
    output::write_convergence_csv(&csv, &echo, &report)?;
    output::write_convergence_svg(&svg, &report)?;
    println!("wrote {}", csv.display());
    println!("wrote {}", svg.display());
    println!("fitted slope: {:.3}", report.fitted_slope);
    Ok(ExitCode::SUCCESS)
}

fn cmd_ml(args: &MlArgs) -> memkit::Result<ExitCode> {
    let value = ml(MLParams::new(args.a, args.b)?, args.z)?;
    println!("{value:.16e}");
    Ok(ExitCode::SUCCESS)
}

fn cmd_resolvent_check(args: &ResolventCheckArgs) -> memkit::Result<ExitCode> {
    let kernel = match args.kernel.as_str() {
        "riesz" => KernelSpec::riesz(args.rho),
        "exponential" => KernelSpec::exponential(args.decay),
        other => Err(Error::Config(format!(
            "unknown kernel {other:?}; choose riesz or exponential"
        ))),
    }?;
    let lambda = args
        .lambda
        .unwrap_or(std::f64::consts::PI * std::f64::consts::PI);
    let tol = args.tol.unwrap_or(1e-3 * lambda);

    let residual = volterra_residual(&kernel, lambda, args.t_final, args.step)?;
    let residual_ok = residual <= tol;
    println!(
        "volterra residual: {residual:.3e} (tolerance {tol:.3e}) {}",
        if residual_ok { "PASS" } else { "FAIL" }
    );

    // Positivity probe: the exact quadratic form of an alternating profile
    // must stay nonnegative up to rounding for these kernels.
    let probe: Vec<f64> = (0..=64)
        .map(|i| if i % 2 == 0 { 1.0 } else { -1.0 })
        .collect();
    let q = kernel.positive_definiteness_residual(&probe, args.t_final)?;
    let q_floor = -1e-8 * args.t_final * args.t_final;
    let q_ok = q >= q_floor;
    println!(
        "positivity probe: {q:.3e} (floor {q_floor:.3e}) {}",
        if q_ok { "PASS" } else { "FAIL" }
    );

    Ok(if residual_ok && q_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(4)
    })
}

fn main() -> ExitCode {
    if let Err(msg) = setup_threads() {
        eprintln!("error: {msg}");
        return ExitCode::from(2);
    }
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Converge(args) => cmd_converge(args),
        Command::Ml(args) => cmd_ml(args),
        Command::ResolventCheck(args) => cmd_resolvent_check(args),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    }
}
