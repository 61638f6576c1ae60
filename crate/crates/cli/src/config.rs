//! Run configuration: built-in defaults, then a `key = value` file, then
//! command-line flags, each layer overriding the one before.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::path::PathBuf;
use std::str::FromStr;

use qdent_core::basis::BasisSpec;
use qdent_core::confinement::PotentialParams;
use qdent_core::oracle_grid::MAX_POINTS;
use qdent_core::sweep::{r_grid, DEFAULT_DERIVATIVE_STEP};
use qdent_core::InteractionKind;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Solve,
    Sweep,
    Cuts,
    Wavefunction,
    Converge,
    QptScan,
    Classify,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Solve => "solve",
            Command::Sweep => "sweep",
            Command::Cuts => "cuts",
            Command::Wavefunction => "wavefunction",
            Command::Converge => "converge",
            Command::QptScan => "qpt-scan",
            Command::Classify => "classify",
        }
    }

    /// File written when `--out` is not given, for commands that write tables.
    pub fn default_output(self) -> Option<&'static str> {
        match self {
            Command::Sweep => Some("sweep.csv"),
            Command::Cuts => Some("cuts.csv"),
            Command::Wavefunction => Some("wavefunction.csv"),
            Command::Converge => Some("converge.csv"),
            Command::QptScan => Some("qpt_scan.csv"),
            Command::Solve | Command::Classify => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DerivativeChoice {
    Off,
    Auxiliary,
    Grid,
}

impl fmt::Display for DerivativeChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DerivativeChoice::Off => "off",
            DerivativeChoice::Auxiliary => "auxiliary",
            DerivativeChoice::Grid => "grid",
        })
    }
}

impl FromStr for DerivativeChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "off" => Ok(DerivativeChoice::Off),
            "auxiliary" => Ok(DerivativeChoice::Auxiliary),
            "grid" => Ok(DerivativeChoice::Grid),
            other => Err(format!("unknown derivative mode {other:?} (off | auxiliary | grid)")),
        }
    }
}

/// Every setting as optional; one of these comes from the file, one from flags.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RawConfig {
    pub v0: Option<f64>,
    pub d: Option<f64>,
    pub r: Option<f64>,
    pub p: Option<f64>,
    pub interaction: Option<InteractionKind>,
    pub n_basis: Option<usize>,
    pub omega: Option<f64>,
    pub threads: Option<usize>,
    pub out: Option<PathBuf>,
    pub r_min: Option<f64>,
    pub r_max: Option<f64>,
    pub r_step: Option<f64>,
    pub refine: Option<bool>,
    pub p_values: Option<Vec<f64>>,
    pub derivative: Option<DerivativeChoice>,
    pub derivative_step: Option<f64>,
    pub one_sided_edges: Option<bool>,
    pub n_values: Option<Vec<usize>>,
    pub omega_values: Option<Vec<f64>>,
    pub axis_half_width: Option<f64>,
    pub axis_points: Option<usize>,
    pub with_oracle: Option<bool>,
    pub oracle_points: Option<usize>,
}

/// Fully resolved and validated settings for one command.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub v0: f64,
    pub d: f64,
    pub r: f64,
    pub p: f64,
    pub interaction: InteractionKind,
    pub n_basis: usize,
    pub omega: f64,
    pub threads: Option<usize>,
    pub out: Option<PathBuf>,
    pub r_min: f64,
    pub r_max: f64,
    pub r_step: f64,
    pub refine: bool,
    pub p_values: Vec<f64>,
    pub derivative: DerivativeChoice,
    pub derivative_step: f64,
    pub one_sided_edges: bool,
    pub n_values: Vec<usize>,
    pub omega_values: Vec<f64>,
    pub axis_half_width: f64,
    pub axis_points: usize,
    pub with_oracle: bool,
    pub oracle_points: usize,
}

fn parse_value<T: FromStr>(key: &str, raw: &str) -> Result<T, CliError> {
    raw.trim().parse().map_err(|_| CliError::Validation(format!("{key}: cannot parse {raw:?}")))
}

fn parse_list<T: FromStr>(key: &str, raw: &str) -> Result<Vec<T>, CliError> {
    raw.split(',').map(|s| parse_value(key, s)).collect()
}

fn parse_bool(key: &str, raw: &str) -> Result<bool, CliError> {
    match raw.trim() {
        "true" => Ok(true),
        "false" => Ok(false),
        other => Err(CliError::Validation(format!("{key}: expected true or false, got {other:?}"))),
    }
}

impl RawConfig {
    /// Parses flat `key = value` text; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut seen = BTreeMap::new();
        let mut cfg = RawConfig::default();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::Validation(format!("config line {}: expected key = value", lineno + 1)));
            };
            let (key, value) = (key.trim(), value.trim());
            if seen.insert(key.to_string(), lineno).is_some() {
                return Err(CliError::Validation(format!("config line {}: duplicate key {key}", lineno + 1)));
            }
            cfg.set(key, value)?;
        }
        Ok(cfg)
    }

    fn set(&mut self, key: &str, v: &str) -> Result<(), CliError> {
        match key {
            "v0" => self.v0 = Some(parse_value(key, v)?),
            "d" => self.d = Some(parse_value(key, v)?),
            "R" => self.r = Some(parse_value(key, v)?),
            "p" => self.p = Some(parse_value(key, v)?),
            "interaction" => {
                self.interaction = Some(v.parse().map_err(|e: qdent_core::Error| CliError::Validation(e.to_string()))?)
            }
            "n_basis" => self.n_basis = Some(parse_value(key, v)?),
            "omega" => self.omega = Some(parse_value(key, v)?),
            "threads" => self.threads = Some(parse_value(key, v)?),
            "out" => self.out = Some(PathBuf::from(v)),
            "r_min" => self.r_min = Some(parse_value(key, v)?),
            "r_max" => self.r_max = Some(parse_value(key, v)?),
            "r_step" => self.r_step = Some(parse_value(key, v)?),
            "refine" => self.refine = Some(parse_bool(key, v)?),
            "p_values" => self.p_values = Some(parse_list(key, v)?),
            "derivative" => self.derivative = Some(v.parse().map_err(CliError::Validation)?),
            "derivative_step" => self.derivative_step = Some(parse_value(key, v)?),
            "one_sided_edges" => self.one_sided_edges = Some(parse_bool(key, v)?),
            "n_values" => self.n_values = Some(parse_list(key, v)?),
            "omega_values" => self.omega_values = Some(parse_list(key, v)?),
            "axis_half_width" => self.axis_half_width = Some(parse_value(key, v)?),
            "axis_points" => self.axis_points = Some(parse_value(key, v)?),
            "with_oracle" => self.with_oracle = Some(parse_bool(key, v)?),
            "oracle_points" => self.oracle_points = Some(parse_value(key, v)?),
            other => return Err(CliError::Validation(format!("unknown config key {other:?}"))),
        }
        Ok(())
    }

    /// Values set here win; unset ones fall back to `base`.
    pub fn over(self, base: RawConfig) -> RawConfig {
        RawConfig {
            v0: self.v0.or(base.v0),
            d: self.d.or(base.d),
            r: self.r.or(base.r),
            p: self.p.or(base.p),
            interaction: self.interaction.or(base.interaction),
            n_basis: self.n_basis.or(base.n_basis),
            omega: self.omega.or(base.omega),
            threads: self.threads.or(base.threads),
            out: self.out.or(base.out),
            r_min: self.r_min.or(base.r_min),
            r_max: self.r_max.or(base.r_max),
            r_step: self.r_step.or(base.r_step),
            refine: self.refine.or(base.refine),
            p_values: self.p_values.or(base.p_values),
            derivative: self.derivative.or(base.derivative),
            derivative_step: self.derivative_step.or(base.derivative_step),
            one_sided_edges: self.one_sided_edges.or(base.one_sided_edges),
            n_values: self.n_values.or(base.n_values),
            omega_values: self.omega_values.or(base.omega_values),
            axis_half_width: self.axis_half_width.or(base.axis_half_width),
            axis_points: self.axis_points.or(base.axis_points),
            with_oracle: self.with_oracle.or(base.with_oracle),
            oracle_points: self.oracle_points.or(base.oracle_points),
        }
    }

    /// Fills defaults for `command` and validates everything.
    pub fn resolve(self, command: Command) -> Result<RunConfig, CliError> {
        let interaction = self.interaction.unwrap_or(InteractionKind::Contact);
        let (r_min, r_max, r_step) = match command {
            Command::QptScan => (7.5, 9.5, 0.01),
            _ => (0.1, 30.0, 0.1),
        };
        let p_values = match command {
            Command::QptScan => vec![2.0, 7.0, 50.0, 200.0],
            _ => vec![2.0, 7.0, 200.0],
        };
        let n_values = match interaction {
            InteractionKind::Contact => vec![10, 20, 30, 40, 50],
            InteractionKind::SoftCoulomb => vec![10, 20, 30],
        };
        let axis_points = if command == Command::Wavefunction { 201 } else { 801 };
        let cfg = RunConfig {
            v0: self.v0.unwrap_or(PotentialParams::DEFAULT_V0),
            d: self.d.unwrap_or(PotentialParams::DEFAULT_D),
            r: self.r.unwrap_or(4.0),
            p: self.p.unwrap_or(200.0),
            interaction,
            n_basis: self.n_basis.unwrap_or(interaction.default_basis_size()),
            omega: self.omega.unwrap_or(BasisSpec::DEFAULT_OMEGA),
            threads: self.threads,
            out: self.out,
            r_min: self.r_min.unwrap_or(r_min),
            r_max: self.r_max.unwrap_or(r_max),
            r_step: self.r_step.unwrap_or(r_step),
            refine: self.refine.unwrap_or(false),
            p_values: self.p_values.unwrap_or(p_values),
            derivative: self.derivative.unwrap_or(DerivativeChoice::Grid),
            derivative_step: self.derivative_step.unwrap_or(DEFAULT_DERIVATIVE_STEP),
            one_sided_edges: self.one_sided_edges.unwrap_or(false),
            n_values: self.n_values.unwrap_or(n_values),
            omega_values: self.omega_values.unwrap_or_else(|| vec![BasisSpec::DEFAULT_OMEGA]),
            axis_half_width: self.axis_half_width.unwrap_or(20.0),
            axis_points: self.axis_points.unwrap_or(axis_points),
            with_oracle: self.with_oracle.unwrap_or(false),
            oracle_points: self.oracle_points.unwrap_or(MAX_POINTS),
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        self.params()?;
        self.basis()?;
        for &p in &self.p_values {
            PotentialParams::new(self.v0, self.d, self.r, p)?;
        }
        if self.p_values.is_empty() {
            return Err(CliError::Validation("p_values must not be empty".into()));
        }
        r_grid(self.r_min, self.r_max, self.r_step)?;
        if self.r_min <= 0.0 {
            return Err(CliError::Validation("r_min must be positive".into()));
        }
        if !(self.derivative_step > 0.0 && self.derivative_step.is_finite()) {
            return Err(CliError::Validation("derivative_step must be positive".into()));
        }
        if self.threads == Some(0) {
            return Err(CliError::Validation("threads must be at least 1".into()));
        }
        if self.n_values.is_empty() || self.omega_values.is_empty() {
            return Err(CliError::Validation("n_values and omega_values must not be empty".into()));
        }
        for &n in &self.n_values {
            for &w in &self.omega_values {
                BasisSpec::new(n, w, self.d)?;
            }
        }
        if !(self.axis_half_width > 0.0 && self.axis_half_width.is_finite()) || self.axis_points < 2 {
            return Err(CliError::Validation("axis needs a positive half width and at least 2 points".into()));
        }
        if self.oracle_points < 3 || self.oracle_points.is_multiple_of(2) || self.oracle_points > MAX_POINTS {
            return Err(CliError::Validation(format!("oracle_points must be odd in 3..={MAX_POINTS}")));
        }
        Ok(())
    }

    pub fn params(&self) -> Result<PotentialParams, CliError> {
        Ok(PotentialParams::new(self.v0, self.d, self.r, self.p)?)
    }

    pub fn basis(&self) -> Result<BasisSpec, CliError> {
        Ok(BasisSpec::new(self.n_basis, self.omega, self.d)?)
    }

    /// `R` grid for sweeps, with the optional fine band around the
    /// hard-wall minimum.
    pub fn r_values(&self) -> Result<Vec<f64>, CliError> {
        let mut r = r_grid(self.r_min, self.r_max, self.r_step)?;
        if self.refine {
            let (lo, hi) = (7.5f64.max(self.r_min), 9.5f64.min(self.r_max));
            if lo < hi {
                r.retain(|&x| !(lo..=hi).contains(&x));
                r.extend(r_grid(lo, hi, 0.01)?);
                r.sort_by(f64::total_cmp);
                r.dedup();
            }
        }
        Ok(r)
    }

    /// Text that [`RawConfig::parse`] turns back into this configuration.
    pub fn dump(&self) -> String {
        fn list<T: fmt::Display>(v: &[T]) -> String {
            v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
        }
        let mut s = String::new();
        let mut kv = |k: &str, v: String| {
            let _ = writeln!(s, "{k} = {v}");
        };
        kv("v0", self.v0.to_string());
        kv("d", self.d.to_string());
        kv("R", self.r.to_string());
        kv("p", self.p.to_string());
        kv("interaction", self.interaction.to_string());
        kv("n_basis", self.n_basis.to_string());
        kv("omega", self.omega.to_string());
        if let Some(t) = self.threads {
            kv("threads", t.to_string());
        }
        if let Some(out) = &self.out {
            kv("out", out.display().to_string());
        }
        kv("r_min", self.r_min.to_string());
        kv("r_max", self.r_max.to_string());
        kv("r_step", self.r_step.to_string());
        kv("refine", self.refine.to_string());
        kv("p_values", list(&self.p_values));
        kv("derivative", self.derivative.to_string());
        kv("derivative_step", self.derivative_step.to_string());
        kv("one_sided_edges", self.one_sided_edges.to_string());
        kv("n_values", list(&self.n_values));
        kv("omega_values", list(&self.omega_values));
        kv("axis_half_width", self.axis_half_width.to_string());
        kv("axis_points", self.axis_points.to_string());
        kv("with_oracle", self.with_oracle.to_string());
        kv("oracle_points", self.oracle_points.to_string());
        s
    }
}
