//! Run configuration: command-line flags, optional `key = value` files and
//! JSON sidecars, merged and resolved against defaults.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use clap::{Args, ValueEnum};
use dd_discord::optimize::linspace;
use dd_discord::{NoiseSide, DEFAULT_HORIZON};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Decoherence,
    Trajectory,
    PhaseDiagram,
    Boundary,
    Transition,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Decoherence => "decoherence",
            Command::Trajectory => "trajectory",
            Command::PhaseDiagram => "phase-diagram",
            Command::Boundary => "boundary",
            Command::Transition => "transition",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    One,
    Two,
}

impl From<Side> for NoiseSide {
    fn from(side: Side) -> Self {
        match side {
            Side::One => NoiseSide::OneSided,
            Side::Two => NoiseSide::TwoSided,
        }
    }
}

impl FromStr for Side {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "one" | "one-sided" | "onesided" => Ok(Side::One),
            "two" | "two-sided" | "twosided" => Ok(Side::Two),
            other => Err(format!("expected `one` or `two`, got `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl GridSpec {
    pub fn points(&self) -> Vec<f64> {
        linspace(self.min, self.max, self.steps)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
}

/// Fully resolved configuration; this is what the JSON sidecar records.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: Command,
    pub s: Option<f64>,
    pub omega_c: f64,
    /// Empty means free evolution.
    pub pulse_intervals: Vec<f64>,
    pub side: Side,
    pub c: Option<f64>,
    pub horizon: f64,
    pub tau: Option<f64>,
    pub time_step: Option<f64>,
    pub s_grid: GridSpec,
    pub c_grid: GridSpec,
    pub tolerances: Tolerances,
    pub oracle: bool,
    pub output: String,
}

/// Flags shared by every subcommand. Every field is optional so that
/// values from a configuration file can fill the gaps.
#[derive(Debug, Clone, Default, Args)]
pub struct RunArgs {
    /// Ohmicity parameter s
    #[arg(long = "s")]
    pub s: Option<f64>,
    /// Cutoff frequency (labels the unit system only)
    #[arg(long)]
    pub omega_c: Option<f64>,
    /// Pulse interval(s) in 1/omega_c; comma-separated for `boundary`
    #[arg(long = "dt", value_delimiter = ',')]
    pub dt: Vec<f64>,
    /// Free evolution (no pulses)
    #[arg(long)]
    pub free: bool,
    /// Noise on one qubit or on both
    #[arg(long, value_enum)]
    pub side: Option<Side>,
    /// Bell-mixing parameter c
    #[arg(long = "c")]
    pub c: Option<f64>,
    /// Evaluation window in 1/omega_c
    #[arg(long)]
    pub horizon: Option<f64>,
    /// Single evaluation time (decoherence)
    #[arg(long)]
    pub tau: Option<f64>,
    /// Time-grid step override
    #[arg(long)]
    pub t_step: Option<f64>,
    #[arg(long)]
    pub s_min: Option<f64>,
    #[arg(long)]
    pub s_max: Option<f64>,
    #[arg(long)]
    pub s_steps: Option<usize>,
    #[arg(long)]
    pub c_min: Option<f64>,
    #[arg(long)]
    pub c_max: Option<f64>,
    #[arg(long)]
    pub c_steps: Option<usize>,
    #[arg(long)]
    pub rel_tol: Option<f64>,
    #[arg(long)]
    pub abs_tol: Option<f64>,
    #[arg(long)]
    pub max_subdivisions: Option<usize>,
    /// Evaluate Γ by filter-function quadrature instead of the closed form
    #[arg(long)]
    pub oracle: bool,
    /// Output CSV path, or `-` for standard output
    #[arg(long, short = 'o')]
    pub output: Option<String>,
    /// `key = value` configuration file or JSON sidecar; flags take precedence
    #[arg(long)]
    pub config: Option<std::path::PathBuf>,
    /// Worker threads (overrides DD_DISCORD_THREADS)
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
enum Schedule {
    Free,
    Periodic(Vec<f64>),
}

/// Partially specified configuration.
#[derive(Debug, Clone, Default, PartialEq)]
struct Partial {
    s: Option<f64>,
    omega_c: Option<f64>,
    schedule: Option<Schedule>,
    side: Option<Side>,
    c: Option<f64>,
    horizon: Option<f64>,
    tau: Option<f64>,
    t_step: Option<f64>,
    s_min: Option<f64>,
    s_max: Option<f64>,
    s_steps: Option<usize>,
    c_min: Option<f64>,
    c_max: Option<f64>,
    c_steps: Option<usize>,
    rel_tol: Option<f64>,
    abs_tol: Option<f64>,
    max_subdivisions: Option<usize>,
    oracle: Option<bool>,
    output: Option<String>,
}

macro_rules! overlay {
    ($base:expr, $top:expr, $($field:ident),*) => {
        $( if $top.$field.is_some() { $base.$field = $top.$field.clone(); } )*
    };
}

impl Partial {
    fn overlay(&mut self, top: &Partial) {
        overlay!(
            self,
            top,
            s,
            omega_c,
            schedule,
            side,
            c,
            horizon,
            tau,
            t_step,
            s_min,
            s_max,
            s_steps,
            c_min,
            c_max,
            c_steps,
            rel_tol,
            abs_tol,
            max_subdivisions,
            oracle,
            output
        );
    }

    fn from_args(args: &RunArgs) -> Result<Self, CliError> {
        let schedule = match (args.free, args.dt.is_empty()) {
            (true, false) => {
                return Err(CliError::config(
                    "dt",
                    "`--dt` and `--free` are mutually exclusive",
                ))
            }
            (true, true) => Some(Schedule::Free),
            (false, false) => Some(Schedule::Periodic(args.dt.clone())),
            (false, true) => None,
        };
        Ok(Self {
            s: args.s,
            omega_c: args.omega_c,
            schedule,
            side: args.side,
            c: args.c,
            horizon: args.horizon,
            tau: args.tau,
            t_step: args.t_step,
            s_min: args.s_min,
            s_max: args.s_max,
            s_steps: args.s_steps,
            c_min: args.c_min,
            c_max: args.c_max,
            c_steps: args.c_steps,
            rel_tol: args.rel_tol,
            abs_tol: args.abs_tol,
            max_subdivisions: args.max_subdivisions,
            oracle: args.oracle.then_some(true),
            output: args.output.clone(),
        })
    }

    fn from_resolved(cfg: &RunConfig) -> Self {
        Self {
            s: cfg.s,
            omega_c: Some(cfg.omega_c),
            schedule: Some(if cfg.pulse_intervals.is_empty() {
                Schedule::Free
            } else {
                Schedule::Periodic(cfg.pulse_intervals.clone())
            }),
            side: Some(cfg.side),
            c: cfg.c,
            horizon: Some(cfg.horizon),
            tau: cfg.tau,
            t_step: cfg.time_step,
            s_min: Some(cfg.s_grid.min),
            s_max: Some(cfg.s_grid.max),
            s_steps: Some(cfg.s_grid.steps),
            c_min: Some(cfg.c_grid.min),
            c_max: Some(cfg.c_grid.max),
            c_steps: Some(cfg.c_grid.steps),
            rel_tol: Some(cfg.tolerances.rel_tol),
            abs_tol: Some(cfg.tolerances.abs_tol),
            max_subdivisions: Some(cfg.tolerances.max_subdivisions),
            oracle: Some(cfg.oracle),
            output: Some(cfg.output.clone()),
        }
    }

    fn from_key_values(text: &str) -> Result<Self, CliError> {
        let mut map = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::config(
                    "config",
                    format!("line {}: expected `key = value`", lineno + 1),
                )
            })?;
            map.insert(key.trim().replace('-', "_"), value.trim().to_string());
        }
        let mut p = Partial::default();
        let mut free = false;
        let mut dt = None;
        for (key, value) in &map {
            match key.as_str() {
                "s" => p.s = Some(parse(key, value)?),
                "omega_c" => p.omega_c = Some(parse(key, value)?),
                "dt" | "pulse_interval" | "pulse_intervals" => {
                    let list = value
                        .split(',')
                        .map(|v| parse::<f64>(key, v.trim()))
                        .collect::<Result<Vec<_>, _>>()?;
                    dt = Some(list);
                }
                "free" => free = parse(key, value)?,
                "side" => {
                    p.side = Some(
                        value
                            .parse()
                            .map_err(|e: String| CliError::config("side", e))?,
                    )
                }
                "c" => p.c = Some(parse(key, value)?),
                "horizon" => p.horizon = Some(parse(key, value)?),
                "tau" => p.tau = Some(parse(key, value)?),
                "t_step" | "time_step" => p.t_step = Some(parse(key, value)?),
                "s_min" => p.s_min = Some(parse(key, value)?),
                "s_max" => p.s_max = Some(parse(key, value)?),
                "s_steps" => p.s_steps = Some(parse(key, value)?),
                "c_min" => p.c_min = Some(parse(key, value)?),
                "c_max" => p.c_max = Some(parse(key, value)?),
                "c_steps" => p.c_steps = Some(parse(key, value)?),
                "rel_tol" => p.rel_tol = Some(parse(key, value)?),
                "abs_tol" => p.abs_tol = Some(parse(key, value)?),
                "max_subdivisions" => p.max_subdivisions = Some(parse(key, value)?),
                "oracle" => p.oracle = Some(parse(key, value)?),
                "output" => p.output = Some(value.clone()),
                other => return Err(CliError::config("config", format!("unknown key `{other}`"))),
            }
        }
        p.schedule = match (free, dt) {
            (true, Some(_)) => {
                return Err(CliError::config(
                    "dt",
                    "`dt` and `free` are mutually exclusive",
                ))
            }
            (true, None) => Some(Schedule::Free),
            (false, Some(list)) => Some(Schedule::Periodic(list)),
            (false, None) => None,
        };
        Ok(p)
    }
}

fn parse<V: FromStr>(key: &str, value: &str) -> Result<V, CliError> {
    value
        .parse()
        .map_err(|_| CliError::config(key.to_string(), format!("cannot parse `{value}`")))
}

/// JSON sidecar written next to every output file.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Sidecar {
    pub generator: String,
    pub units: String,
    pub columns: Vec<String>,
    pub config: RunConfig,
}

fn load_file(path: &Path, command: Command) -> Result<Partial, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    if text.trim_start().starts_with('{') {
        let sidecar: Sidecar = serde_json::from_str(&text)
            .map_err(|e| CliError::config("config", format!("{}: {e}", path.display())))?;
        if sidecar.config.command != command {
            return Err(CliError::config(
                "command",
                format!(
                    "sidecar records `{}` but `{}` was requested",
                    sidecar.config.command, command
                ),
            ));
        }
        Ok(Partial::from_resolved(&sidecar.config))
    } else {
        Partial::from_key_values(&text)
    }
}

pub const DEFAULT_S_GRID: GridSpec = GridSpec {
    min: 0.1,
    max: 6.0,
    steps: 60,
};
pub const DEFAULT_C_GRID: GridSpec = GridSpec {
    min: 0.0,
    max: 0.999,
    steps: 50,
};

/// Merges the optional file with the flags (flags win), fills defaults and
/// validates the result for `command`.
pub fn resolve(command: Command, args: &RunArgs) -> Result<RunConfig, CliError> {
    let mut merged = match &args.config {
        Some(path) => load_file(path, command)?,
        None => Partial::default(),
    };
    merged.overlay(&Partial::from_args(args)?);

    let output = merged
        .output
        .clone()
        .unwrap_or_else(|| default_output(command));
    let cfg = RunConfig {
        command,
        s: merged.s,
        omega_c: merged.omega_c.unwrap_or(1.0),
        pulse_intervals: match merged.schedule {
            Some(Schedule::Periodic(list)) => list,
            _ => Vec::new(),
        },
        side: merged.side.unwrap_or(Side::Two),
        c: merged.c,
        horizon: merged.horizon.unwrap_or(DEFAULT_HORIZON),
        tau: merged.tau,
        time_step: merged.t_step,
        s_grid: GridSpec {
            min: merged.s_min.unwrap_or(DEFAULT_S_GRID.min),
            max: merged.s_max.unwrap_or(DEFAULT_S_GRID.max),
            steps: merged.s_steps.unwrap_or(DEFAULT_S_GRID.steps),
        },
        c_grid: GridSpec {
            min: merged.c_min.unwrap_or(DEFAULT_C_GRID.min),
            max: merged.c_max.unwrap_or(DEFAULT_C_GRID.max),
            steps: merged.c_steps.unwrap_or(DEFAULT_C_GRID.steps),
        },
        tolerances: Tolerances {
            rel_tol: merged.rel_tol.unwrap_or(1e-10),
            abs_tol: merged.abs_tol.unwrap_or(1e-12),
            max_subdivisions: merged.max_subdivisions.unwrap_or(10_000),
        },
        oracle: merged.oracle.unwrap_or(false),
        output,
    };
    cfg.validate()?;
    Ok(cfg)
}

fn default_output(command: Command) -> String {
    let stamp = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    format!("./out/{}-{}.csv", command.name(), stamp)
}

fn positive(field: &'static str, v: f64) -> Result<(), CliError> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(CliError::config(
            field,
            format!("must be finite and > 0, got {v}"),
        ))
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        positive("omega_c", self.omega_c)?;
        positive("horizon", self.horizon)?;
        positive("rel_tol", self.tolerances.rel_tol)?;
        positive("abs_tol", self.tolerances.abs_tol)?;
        if self.tolerances.max_subdivisions < 1 {
            return Err(CliError::config("max_subdivisions", "must be >= 1"));
        }
        for &dt in &self.pulse_intervals {
            positive("dt", dt)?;
        }
        if let Some(step) = self.time_step {
            positive("t_step", step)?;
        }
        if let Some(s) = self.s {
            positive("s", s)?;
        }
        if let Some(c) = self.c {
            if !(0.0..1.0).contains(&c) {
                return Err(CliError::config(
                    "c",
                    format!("must lie in [0, 1), got {c}"),
                ));
            }
        }
        if let Some(tau) = self.tau {
            if !(0.0..=self.horizon).contains(&tau) {
                return Err(CliError::config(
                    "tau",
                    format!("must lie in [0, horizon], got {tau}"),
                ));
            }
        }
        if self.output.trim().is_empty() {
            return Err(CliError::config("output", "empty path"));
        }

        let needs_s = matches!(
            self.command,
            Command::Decoherence | Command::Trajectory | Command::Transition
        );
        if needs_s && self.s.is_none() {
            return Err(CliError::config(
                "s",
                format!("`{}` requires --s", self.command),
            ));
        }
        if matches!(self.command, Command::Trajectory | Command::Transition) && self.c.is_none() {
            return Err(CliError::config(
                "c",
                format!("`{}` requires --c", self.command),
            ));
        }
        if self.command != Command::Boundary && self.pulse_intervals.len() > 1 {
            return Err(CliError::config(
                "dt",
                format!("`{}` takes a single pulse interval", self.command),
            ));
        }
        if self.oracle && self.command != Command::Decoherence {
            return Err(CliError::config(
                "oracle",
                "only `decoherence` supports --oracle",
            ));
        }
        if matches!(self.command, Command::PhaseDiagram | Command::Boundary) {
            check_grid("s_grid", &self.s_grid, |v| v > 0.0)?;
        }
        if self.command == Command::PhaseDiagram {
            check_grid("c_grid", &self.c_grid, |v| (0.0..1.0).contains(&v))?;
        }
        Ok(())
    }

    pub fn noise_side(&self) -> NoiseSide {
        self.side.into()
    }
}

fn check_grid(field: &'static str, g: &GridSpec, ok: impl Fn(f64) -> bool) -> Result<(), CliError> {
    if g.steps == 0 {
        return Err(CliError::config(field, "needs at least one point"));
    }
    if g.steps > 1 && g.max <= g.min {
        return Err(CliError::config(
            field,
            format!("max ({}) must exceed min ({})", g.max, g.min),
        ));
    }
    if !ok(g.min) || !ok(g.max) {
        return Err(CliError::config(
            field,
            format!("range [{}, {}] out of bounds", g.min, g.max),
        ));
    }
    Ok(())
}
