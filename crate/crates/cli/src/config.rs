//! Command-line flags, the JSON config file, and their merge into a
//! [`RunConfig`]. Precedence: defaults, then the file, then flags.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Debug, Parser)]
#[command(name = "zbw", version, about = "Two-time pilot-wave model of the free-particle Zitterbewegung")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CommandKind {
    Profile,
    Trajectory,
    Uncertainty,
    Verify,
    Sweep,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate R, V_Q, H and β along ℓ ≥ 0.
    Profile(CommonArgs),
    /// Integrate the intrinsic motion in τ.
    Trajectory(CommonArgs),
    /// Uncertainty products of the intrinsic motion.
    Uncertainty(CommonArgs),
    /// Certify a profile and run the non-relativistic and no-go checks.
    Verify(CommonArgs),
    /// Uncertainty products over ranges of v_o and θ.
    Sweep(CommonArgs),
}

impl Command {
    pub fn parts(&self) -> (CommandKind, &CommonArgs) {
        match self {
            Command::Profile(a) => (CommandKind::Profile, a),
            Command::Trajectory(a) => (CommandKind::Trajectory, a),
            Command::Uncertainty(a) => (CommandKind::Uncertainty, a),
            Command::Verify(a) => (CommandKind::Verify, a),
            Command::Sweep(a) => (CommandKind::Sweep, a),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// Rest mass, natural units.
    #[arg(long)]
    pub m: Option<f64>,
    /// Particle speed as a fraction of c; `a:b:step` or `a,b,c` for sweep.
    #[arg(long = "v-o", allow_hyphen_values = true)]
    pub v_o: Option<String>,
    /// Angle between the wave direction and the motion, degrees; ranges as for --v-o.
    #[arg(long, allow_hyphen_values = true)]
    pub theta: Option<String>,
    /// Shape constant.
    #[arg(long, allow_hyphen_values = true)]
    pub f: Option<f64>,
    /// Solve f √(2(f+2)) = target for the shape constant.
    #[arg(long, allow_hyphen_values = true)]
    pub target: Option<f64>,
    /// Number of profile samples.
    #[arg(long)]
    pub grid: Option<usize>,
    /// Lowest sampled amplitude as a fraction of R_M.
    #[arg(long = "r-floor")]
    pub r_floor: Option<f64>,
    /// Fixed τ step; defaults to the harmonic period over 50000.
    #[arg(long)]
    pub dtau: Option<f64>,
    #[arg(long)]
    pub periods: Option<usize>,
    /// Launch speed of the intrinsic motion as a fraction of c.
    #[arg(long)]
    pub vi0: Option<f64>,
    #[arg(long = "drift-tol")]
    pub drift_tol: Option<f64>,
    #[arg(long = "tail-tol")]
    pub tail_tol: Option<f64>,
    /// Rescale the profile so that ∫R² dℓ = 1.
    #[arg(long)]
    pub normalize: bool,
    /// Keep every n-th trajectory step.
    #[arg(long = "sample-every")]
    pub sample_every: Option<usize>,
    /// Multiply sampled amplitudes before certification (verify only).
    #[arg(long)]
    pub perturb: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// JSON config file, or a manifest written by an earlier run.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

/// A value given either as a number or as range text.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ParamInput {
    Value(f64),
    Text(String),
}

impl ParamInput {
    fn from_flag(s: &str) -> Self {
        match s.trim().parse::<f64>() {
            Ok(v) => ParamInput::Value(v),
            Err(_) => ParamInput::Text(s.trim().to_string()),
        }
    }

    pub fn single(&self, name: &str) -> CliResult<f64> {
        match self {
            ParamInput::Value(v) => Ok(*v),
            ParamInput::Text(t) => Err(CliError::usage(format!("--{name} expects a number here, got '{t}'"))),
        }
    }

    pub fn values(&self, name: &str) -> CliResult<Vec<f64>> {
        match self {
            ParamInput::Value(v) => Ok(vec![*v]),
            ParamInput::Text(t) => parse_range(t).map_err(|e| CliError::usage(format!("--{name}: {e}"))),
        }
    }
}

/// `a:b:step` (inclusive of `b` up to rounding) or a comma list.
pub fn parse_range(text: &str) -> Result<Vec<f64>, String> {
    let num = |s: &str| s.trim().parse::<f64>().map_err(|_| format!("'{}' is not a number", s.trim()));
    let values = if text.contains(':') {
        let parts: Vec<&str> = text.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("range '{text}' must look like start:stop:step"));
        }
        let (a, b, step) = (num(parts[0])?, num(parts[1])?, num(parts[2])?);
        if step <= 0.0 || !step.is_finite() {
            return Err(format!("step must be positive, got {step}"));
        }
        if b < a {
            return Err(format!("range '{text}' is empty"));
        }
        let count = ((b - a) / step * (1.0 + 1e-12) + 1e-9).floor() as usize + 1;
        if count > 1_000_000 {
            return Err(format!("range '{text}' has too many points"));
        }
        // Snap to 12 decimals so 0.1:0.9:0.1 yields 0.3 rather than 0.30000000000000004.
        (0..count).map(|i| ((a + i as f64 * step) * 1e12).round() / 1e12).collect()
    } else {
        text.split(',')
            .filter(|s| !s.trim().is_empty())
            .map(num)
            .collect::<Result<Vec<_>, _>>()?
    };
    if values.is_empty() {
        return Err("empty range".into());
    }
    Ok(values)
}

/// Keys accepted in a config file; every field optional.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    command: Option<CommandKind>,
    m: Option<f64>,
    v_o: Option<ParamInput>,
    theta_deg: Option<ParamInput>,
    f: Option<f64>,
    target: Option<f64>,
    grid: Option<usize>,
    r_floor: Option<f64>,
    dtau: Option<f64>,
    periods: Option<usize>,
    vi0: Option<f64>,
    drift_tol: Option<f64>,
    tail_tol: Option<f64>,
    normalize: Option<bool>,
    sample_every: Option<usize>,
    perturb: Option<f64>,
    out: Option<PathBuf>,
    format: Option<Format>,
}

/// Shape constant input: given directly or as a target of `f √(2(f+2))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelInput {
    F(f64),
    Target(f64),
}

/// Fully resolved run parameters; recorded verbatim in the manifest.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: CommandKind,
    pub m: f64,
    pub v_o: ParamInput,
    pub theta_deg: ParamInput,
    pub f: Option<f64>,
    pub target: Option<f64>,
    pub grid: usize,
    pub r_floor: f64,
    pub dtau: Option<f64>,
    pub periods: usize,
    pub vi0: f64,
    pub drift_tol: f64,
    pub tail_tol: f64,
    pub normalize: bool,
    pub sample_every: usize,
    pub perturb: Option<f64>,
    pub out: PathBuf,
    pub format: Format,
}

pub const DEFAULT_V_O: f64 = 1e-3;
pub const DEFAULT_TARGET: f64 = 2.0;

impl RunConfig {
    pub fn model(&self) -> ModelInput {
        match (self.f, self.target) {
            (Some(f), _) => ModelInput::F(f),
            (None, Some(t)) => ModelInput::Target(t),
            (None, None) => ModelInput::Target(DEFAULT_TARGET),
        }
    }
}

fn load_file(path: &Path) -> CliResult<FileConfig> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
    // A manifest carries the run's parameters under "parameters".
    let value = match value.get("parameters") {
        Some(p) if value.get("tool").and_then(|t| t.as_str()) == Some("zbw") => p.clone(),
        _ => value,
    };
    serde_json::from_value(value).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
}

fn default_format(command: CommandKind) -> Format {
    match command {
        CommandKind::Profile | CommandKind::Trajectory => Format::Csv,
        _ => Format::Json,
    }
}

pub fn resolve(command: CommandKind, args: &CommonArgs) -> CliResult<RunConfig> {
    let file = match &args.config {
        Some(p) => load_file(p)?,
        None => FileConfig::default(),
    };
    if let Some(c) = file.command {
        if c != command {
            log::warn!("config file was written for {c:?}; running {command:?}");
        }
    }
    if args.f.is_some() && args.target.is_some() {
        return Err(CliError::usage("give either --f or --target, not both"));
    }
    // A model flag replaces the file's model choice entirely.
    let (f, target) = if args.f.is_some() || args.target.is_some() {
        (args.f, args.target)
    } else {
        if file.f.is_some() && file.target.is_some() {
            return Err(CliError::usage("config file sets both f and target"));
        }
        (file.f, file.target)
    };

    let out_given = args.out.clone().or(file.out);
    let format = match args.format.or(file.format) {
        Some(fmt) => fmt,
        None => match out_given.as_ref().and_then(|p| p.extension()).and_then(|e| e.to_str()) {
            Some("json") => Format::Json,
            Some("csv") => Format::Csv,
            _ => default_format(command),
        },
    };
    let name = format!("{command:?}").to_lowercase();
    let out = out_given.unwrap_or_else(|| PathBuf::from(format!("{name}.{}", format.extension())));

    let cfg = RunConfig {
        command,
        m: args.m.or(file.m).unwrap_or(1.0),
        v_o: args
            .v_o
            .as_deref()
            .map(ParamInput::from_flag)
            .or(file.v_o)
            .unwrap_or(ParamInput::Value(DEFAULT_V_O)),
        theta_deg: args
            .theta
            .as_deref()
            .map(ParamInput::from_flag)
            .or(file.theta_deg)
            .unwrap_or(ParamInput::Value(0.0)),
        f,
        target,
        grid: args.grid.or(file.grid).unwrap_or(zbw_core::profile::DEFAULT_GRID_POINTS),
        r_floor: args.r_floor.or(file.r_floor).unwrap_or(zbw_core::profile::DEFAULT_R_FLOOR),
        dtau: args.dtau.or(file.dtau),
        periods: args.periods.or(file.periods).unwrap_or(10),
        vi0: args.vi0.or(file.vi0).unwrap_or(1.0),
        drift_tol: args.drift_tol.or(file.drift_tol).unwrap_or(zbw_core::dynamics::DEFAULT_DRIFT_TOL),
        tail_tol: args.tail_tol.or(file.tail_tol).unwrap_or(zbw_core::profile::DEFAULT_TAIL_TOLERANCE),
        normalize: args.normalize || file.normalize.unwrap_or(false),
        sample_every: args.sample_every.or(file.sample_every).unwrap_or(100),
        perturb: args.perturb.or(file.perturb),
        out,
        format,
    };
    validate(&cfg)?;
    Ok(cfg)
}

fn validate(cfg: &RunConfig) -> CliResult<()> {
    let positive = |name: &str, v: f64| {
        if v > 0.0 && v.is_finite() {
            Ok(())
        } else {
            Err(CliError::usage(format!("{name} must be positive, got {v}")))
        }
    };
    positive("m", cfg.m)?;
    positive("r-floor", cfg.r_floor)?;
    positive("vi0", cfg.vi0)?;
    positive("drift-tol", cfg.drift_tol)?;
    positive("tail-tol", cfg.tail_tol)?;
    if let Some(f) = cfg.f {
        positive("f", f)?;
    }
    if let Some(t) = cfg.target {
        positive("target", t)?;
    }
    if let Some(d) = cfg.dtau {
        positive("dtau", d)?;
    }
    if let Some(p) = cfg.perturb {
        positive("perturb", p)?;
    }
    if cfg.r_floor >= 1.0 {
        return Err(CliError::usage(format!("r-floor must lie below 1, got {}", cfg.r_floor)));
    }
    if cfg.vi0 > 1.0 {
        return Err(CliError::usage(format!("vi0 is a fraction of c and may not exceed 1, got {}", cfg.vi0)));
    }
    if cfg.grid < 16 {
        return Err(CliError::usage(format!("grid needs at least 16 points, got {}", cfg.grid)));
    }
    if cfg.periods == 0 || cfg.sample_every == 0 {
        return Err(CliError::usage("periods and sample-every must be at least 1"));
    }
    if cfg.command == CommandKind::Verify && cfg.format == Format::Csv {
        return Err(CliError::usage("verify writes JSON only"));
    }
    let sweep = cfg.command == CommandKind::Sweep;
    for v in if sweep { cfg.v_o.values("v-o")? } else { vec![cfg.v_o.single("v-o")?] } {
        check_speed(v)?;
    }
    for t in if sweep { cfg.theta_deg.values("theta")? } else { vec![cfg.theta_deg.single("theta")?] } {
        if !(0.0..=90.0).contains(&t) {
            return Err(CliError::usage(format!("theta must lie in [0, 90] degrees, got {t}")));
        }
    }
    Ok(())
}

pub fn check_speed(v: f64) -> CliResult<()> {
    if v == 0.0 {
        return Err(CliError::usage(
            "singular configuration: v_o = 0 makes H and V_Q constant, so there is no intrinsic oscillation",
        ));
    }
    if !(v > 0.0 && v < 1.0) {
        return Err(CliError::usage(format!("v-o is a fraction of c in (0, 1), got {v}")));
    }
    Ok(())
}
