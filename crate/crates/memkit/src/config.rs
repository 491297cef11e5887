//! Run configuration: defaults, config files, and command-line overrides.
//!
//! Resolution precedence is flags > file > defaults. Config files come in
//! two self-detecting formats: JSON objects (first non-space byte `{`) and
//! INI-style `key = value` lines with `#` comments. Both use identical keys,
//! which are also the names echoed into output headers, so a header can be
//! pasted back as a config file to reproduce a run.
//!
//! The pointwise nonlinearity and the initial profile are picked from small
//! menus. Every forcing choice carries the Lipschitz bound the implicit
//! solver's contraction guard relies on.

use std::path::Path;

use crate::convergence::Scheme;
use crate::integrator::SolverConfig;
use crate::kernels::KernelSpec;
use crate::spectral::{project_initial, ModalField};
use crate::{Error, Result};

/// Pointwise nonlinearity `f(u)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ForcingChoice {
    /// `f(u) = sin(u)`; Lipschitz bound 1.
    Sin,
    /// `f(u) = 0`.
    Zero,
    /// `f(u) = c`.
    Const(f64),
    /// Bistable `f(u) = u - u^3`; Lipschitz bound 4 on the unit ball.
    Cubic,
}

impl ForcingChoice {
    pub fn parse(text: &str) -> Result<ForcingChoice> {
        match text {
            "sin" => Ok(ForcingChoice::Sin),
            "zero" => Ok(ForcingChoice::Zero),
            "cubic" => Ok(ForcingChoice::Cubic),
            other => {
                if let Some(v) = other.strip_prefix("const:") {
                    let c: f64 = v.parse().map_err(|_| {
                        Error::Config(format!("cannot parse constant forcing value {v:?}"))
                    })?;
                    if !c.is_finite() {
                        return Err(Error::Config(format!(
                            "constant forcing value must be finite, got {c}"
                        )));
                    }
                    Ok(ForcingChoice::Const(c))
                } else {
                    Err(Error::Config(format!(
                        "unknown forcing {other:?}; choose sin, zero, const:<c>, or cubic"
                    )))
                }
            }
        }
    }

    pub fn eval(&self, v: f64) -> f64 {
        match *self {
            ForcingChoice::Sin => v.sin(),
            ForcingChoice::Zero => 0.0,
            ForcingChoice::Const(c) => c,
            ForcingChoice::Cubic => v - v * v * v,
        }
    }

    pub fn lipschitz(&self) -> f64 {
        match self {
            ForcingChoice::Sin => 1.0,
            ForcingChoice::Zero | ForcingChoice::Const(_) => 0.0,
            ForcingChoice::Cubic => 4.0,
        }
    }

    pub fn label(&self) -> String {
        match *self {
            ForcingChoice::Sin => "sin".into(),
            ForcingChoice::Zero => "zero".into(),
            ForcingChoice::Const(c) => format!("const:{c}"),
            ForcingChoice::Cubic => "cubic".into(),
        }
    }
}

/// Initial profile `u(0)`.
#[derive(Clone, Debug, PartialEq)]
pub enum InitialChoice {
    /// Parabola `4x(1-x)` (unit peak, Dirichlet-compatible).
    Poly4x1mx,
    /// Single sine mode `k` with unit coefficient.
    Mode(usize),
    /// Explicit leading coefficients; the rest are zero.
    Coeffs(Vec<f64>),
}

impl InitialChoice {
    pub fn parse(text: &str) -> Result<InitialChoice> {
        if text == "poly4x1mx" {
            return Ok(InitialChoice::Poly4x1mx);
        }
        if let Some(v) = text.strip_prefix("mode:") {
            let k: usize = v.parse().map_err(|_| {
                Error::Config(format!("cannot parse mode index {v:?}"))
            })?;
            if k == 0 {
                return Err(Error::Config("mode index starts at 1".into()));
            }
            return Ok(InitialChoice::Mode(k));
        }
        if let Some(list) = text.strip_prefix("coeffs:") {
            let coeffs: std::result::Result<Vec<f64>, _> =
                list.split(',').map(|p| p.trim().parse::<f64>()).collect();
            let coeffs = coeffs.map_err(|_| {
                Error::Config(format!("cannot parse coefficient list {list:?}"))
            })?;
            if coeffs.is_empty() || coeffs.iter().any(|c| !c.is_finite()) {
                return Err(Error::Config(
                    "coefficient list must be nonempty and finite".into(),
                ));
            }
            return Ok(InitialChoice::Coeffs(coeffs));
        }
        Err(Error::Config(format!(
            "unknown initial profile {text:?}; choose poly4x1mx, mode:<k>, or coeffs:<c1,c2,...>"
        )))
    }

    /// Expands the choice into `n` modal coefficients.
    pub fn to_modal(&self, n: usize) -> Result<ModalField> {
        match self {
            InitialChoice::Poly4x1mx => Ok(project_initial(|x| 4.0 * x * (1.0 - x), n)),
            InitialChoice::Mode(k) => {
                if *k > n {
                    return Err(Error::Config(format!(
                        "initial mode {k} exceeds the {n} retained modes"
                    )));
                }
                let mut c = vec![0.0; n];
                c[k - 1] = 1.0;
                Ok(ModalField(c))
            }
            InitialChoice::Coeffs(coeffs) => {
                if coeffs.len() > n {
                    return Err(Error::Config(format!(
                        "{} coefficients given but only {n} modes retained",
                        coeffs.len()
                    )));
                }
                let mut c = coeffs.clone();
                c.resize(n, 0.0);
                Ok(ModalField(c))
            }
        }
    }

    pub fn label(&self) -> String {
        match self {
            InitialChoice::Poly4x1mx => "poly4x1mx".into(),
            InitialChoice::Mode(k) => format!("mode:{k}"),
            InitialChoice::Coeffs(c) => {
                let parts: Vec<String> = c.iter().map(|v| format!("{v}")).collect();
                format!("coeffs:{}", parts.join(","))
            }
        }
    }
}

/// Unresolved option set; `None` means "not specified at this layer".
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub kernel: Option<String>,
    pub rho: Option<f64>,
    pub decay: Option<f64>,
    pub n_modes: Option<usize>,
    pub t_final: Option<f64>,
    pub steps: Option<usize>,
    pub forcing: Option<String>,
    pub initial: Option<String>,
    pub fp_tol: Option<f64>,
    pub fp_max_iters: Option<usize>,
    pub method: Option<String>,
    pub m_min: Option<usize>,
    pub m_max: Option<usize>,
}

impl Overrides {
    /// Loads a config file, auto-detecting JSON vs INI.
    pub fn from_file(path: &Path) -> Result<Overrides> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            Error::Config(format!("cannot read config file {}: {e}", path.display()))
        })?;
        if text.trim_start().starts_with('{') {
            Overrides::from_json(&text)
        } else {
            Overrides::from_ini(&text)
        }
    }

    fn from_ini(text: &str) -> Result<Overrides> {
        let mut o = Overrides::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!("line {}: expected key = value, got {line:?}", lineno + 1))
            })?;
            o.set(key.trim(), value.trim())?;
        }
        Ok(o)
    }

    fn from_json(text: &str) -> Result<Overrides> {
        let value: serde_json::Value = serde_json::from_str(text)
            .map_err(|e| Error::Config(format!("invalid JSON config: {e}")))?;
        let obj = value
            .as_object()
            .ok_or_else(|| Error::Config("JSON config must be an object".into()))?;
        let mut o = Overrides::default();
        for (key, v) in obj {
            let text_value = match v {
                serde_json::Value::String(s) => s.clone(),
                serde_json::Value::Number(n) => n.to_string(),
                other => {
                    return Err(Error::Config(format!(
                        "config key {key:?} has unsupported value {other}"
                    )))
                }
            };
            o.set(key, &text_value)?;
        }
        Ok(o)
    }

    fn set(&mut self, key: &str, value: &str) -> Result<()> {
        fn float(key: &str, value: &str) -> Result<f64> {
            value.parse().map_err(|_| {
                Error::Config(format!("key {key:?}: cannot parse {value:?} as a number"))
            })
        }
        fn count(key: &str, value: &str) -> Result<usize> {
            value.parse().map_err(|_| {
                Error::Config(format!("key {key:?}: cannot parse {value:?} as a count"))
            })
        }
        match key {
            "kernel" => self.kernel = Some(value.to_string()),
            "rho" => self.rho = Some(float(key, value)?),
            "decay" => self.decay = Some(float(key, value)?),
            "n" => self.n_modes = Some(count(key, value)?),
            "t" => self.t_final = Some(float(key, value)?),
            "m" => self.steps = Some(count(key, value)?),
            "f" => self.forcing = Some(value.to_string()),
            "u0" => self.initial = Some(value.to_string()),
            "fp-tol" => self.fp_tol = Some(float(key, value)?),
            "fp-max-iters" => self.fp_max_iters = Some(count(key, value)?),
            "method" => self.method = Some(value.to_string()),
            "m-min" => self.m_min = Some(count(key, value)?),
            "m-max" => self.m_max = Some(count(key, value)?),
            other => {
                return Err(Error::Config(format!("unknown config key {other:?}")));
            }
        }
        Ok(())
    }

    /// Overlays `self` (stronger) on `weaker`.
    fn merge(self, weaker: Overrides) -> Overrides {
        Overrides {
            kernel: self.kernel.or(weaker.kernel),
            rho: self.rho.or(weaker.rho),
            decay: self.decay.or(weaker.decay),
            n_modes: self.n_modes.or(weaker.n_modes),
            t_final: self.t_final.or(weaker.t_final),
            steps: self.steps.or(weaker.steps),
            forcing: self.forcing.or(weaker.forcing),
            initial: self.initial.or(weaker.initial),
            fp_tol: self.fp_tol.or(weaker.fp_tol),
            fp_max_iters: self.fp_max_iters.or(weaker.fp_max_iters),
            method: self.method.or(weaker.method),
            m_min: self.m_min.or(weaker.m_min),
            m_max: self.m_max.or(weaker.m_max),
        }
    }
}

/// Fully resolved run settings.
#[derive(Clone, Debug)]
pub struct Settings {
    pub kernel: KernelSpec,
    pub n_modes: usize,
    pub t_final: f64,
    pub steps: usize,
    pub forcing: ForcingChoice,
    pub initial: InitialChoice,
    pub fp_tol: f64,
    pub fp_max_iters: usize,
    pub method: Scheme,
    pub m_min: usize,
    pub m_max: usize,
}

impl Settings {
    /// Applies precedence flags > file > defaults and validates choices.
    pub fn resolve(flags: Overrides, file: Option<Overrides>) -> Result<Settings> {
        let merged = match file {
            Some(f) => flags.merge(f),
            None => flags,
        };
        let kernel_name = merged.kernel.as_deref().unwrap_or("riesz");
        let kernel = match kernel_name {
            "riesz" => KernelSpec::Riesz {
                rho: merged.rho.unwrap_or(1.5),
            },
            "exponential" => KernelSpec::Exponential {
                decay: merged.decay.unwrap_or(2.0),
            },
            other => {
                return Err(Error::Config(format!(
                    "unknown kernel {other:?}; choose riesz or exponential"
                )))
            }
        };
        kernel
            .validate()
            .map_err(|e| Error::Config(e.to_string()))?;
        let method = match merged.method.as_deref().unwrap_or("trapezoidal") {
            "trapezoidal" => Scheme::Trapezoidal,
            "euler" | "exponential-euler" => Scheme::ExponentialEuler,
            other => {
                return Err(Error::Config(format!(
                    "unknown method {other:?}; choose trapezoidal or euler"
                )))
            }
        };
        let settings = Settings {
            kernel,
            n_modes: merged.n_modes.unwrap_or(32),
            t_final: merged.t_final.unwrap_or(1.0),
            steps: merged.steps.unwrap_or(256),
            forcing: ForcingChoice::parse(merged.forcing.as_deref().unwrap_or("sin"))?,
            initial: InitialChoice::parse(merged.initial.as_deref().unwrap_or("poly4x1mx"))?,
            fp_tol: merged.fp_tol.unwrap_or(1e-12),
            fp_max_iters: merged.fp_max_iters.unwrap_or(50),
            method,
            m_min: merged.m_min.unwrap_or(16),
            m_max: merged.m_max.unwrap_or(1024),
        };
        settings
            .solver_config()
            .validate()
            .map_err(|e| Error::Config(e.to_string()))?;
        Ok(settings)
    }

    pub fn solver_config(&self) -> SolverConfig {
        let mut c = SolverConfig::new(
            self.kernel,
            self.n_modes,
            self.t_final,
            self.steps,
            self.forcing.lipschitz(),
        );
        c.fp_tol = self.fp_tol;
        c.fp_max_iters = self.fp_max_iters;
        c
    }

    pub fn initial_modal(&self) -> Result<ModalField> {
        self.initial.to_modal(self.n_modes)
    }

    /// Dyadic refinement ladder for convergence studies: `m-min` doubled up
    /// to `m-max`.
    pub fn ladder(&self) -> Result<Vec<usize>> {
        if self.m_min == 0 || self.m_min > self.m_max {
            return Err(Error::Config(format!(
                "ladder bounds must satisfy 1 <= m-min <= m-max, got {} and {}",
                self.m_min, self.m_max
            )));
        }
        let mut out = Vec::new();
        let mut m = self.m_min;
        while m <= self.m_max {
            out.push(m);
            m *= 2;
        }
        if out.len() < 2 {
            return Err(Error::Config(format!(
                "ladder {}..{} holds fewer than two rungs",
                self.m_min, self.m_max
            )));
        }
        Ok(out)
    }

    /// Resolved configuration as sorted `# key=value` lines for output
    /// headers. Pasting the uncommented lines back as an INI config
    /// reproduces the run.
    pub fn echo_lines(&self) -> Vec<String> {
        let mut pairs: Vec<(String, String)> = vec![
            ("f".into(), self.forcing.label()),
            ("fp-max-iters".into(), format!("{}", self.fp_max_iters)),
            ("fp-tol".into(), format!("{:e}", self.fp_tol)),
            ("m".into(), format!("{}", self.steps)),
            ("m-max".into(), format!("{}", self.m_max)),
            ("m-min".into(), format!("{}", self.m_min)),
            ("method".into(), self.method.name().into()),
            ("n".into(), format!("{}", self.n_modes)),
            ("t".into(), format!("{}", self.t_final)),
            ("u0".into(), self.initial.label()),
        ];
        match self.kernel {
            KernelSpec::Riesz { rho } => {
                pairs.push(("kernel".into(), "riesz".into()));
                pairs.push(("rho".into(), format!("{rho}")));
            }
            KernelSpec::Exponential { decay } => {
                pairs.push(("kernel".into(), "exponential".into()));
                pairs.push(("decay".into(), format!("{decay}")));
            }
        }
        let mut lines: Vec<String> = pairs
            .into_iter()
            .map(|(k, v)| format!("# {k}={v}"))
            .collect();
        // Sort the rendered strings, not the key/value pairs: "m-max" orders
        // before "m" as a line ('-' < '='), and byte-determinism checks
        // compare whole headers.
        lines.sort();
        lines
    }
}
