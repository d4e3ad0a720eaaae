//! Dataset assembly for each subcommand.

use dd_discord::{
    controlled_gamma_oracle, decoherence_factor, default_time_grid, phase_diagram, trajectory,
    uniform_grid_with_pulses, BellDiagonalState, ControlledDecoherence, DecoherenceProfile,
    OhmicSpectrum, PhaseDiagram, PulseSchedule, QuadratureConfig, ScheduleSpec,
};
use rayon::prelude::*;

use crate::config::{Command, RunConfig};
use crate::emit::{format_g, opt, Table};
use crate::error::CliError;

pub const DECOHERENCE_COLUMNS: [&str; 3] = ["tau", "gamma", "factor"];
pub const TRAJECTORY_COLUMNS: [&str; 7] = [
    "tau",
    "gamma",
    "factor",
    "mutual_info",
    "classical",
    "discord",
    "concurrence",
];
pub const PHASE_COLUMNS: [&str; 5] = ["s", "c", "regime", "min_factor", "transition_time"];
pub const BOUNDARY_COLUMNS: [&str; 3] = ["s", "min_factor", "dt"];
pub const TRANSITION_COLUMNS: [&str; 6] =
    ["s", "c", "dt", "regime", "min_factor", "transition_time"];

/// Everything a run produces, before it touches the file system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dataset {
    pub table: Table,
    /// Free-evolution reference for pulsed phase diagrams.
    pub companion: Option<Table>,
}

fn schedule_spec(cfg: &RunConfig) -> ScheduleSpec<f64> {
    match cfg.pulse_intervals.first() {
        Some(&dt) => ScheduleSpec::Periodic(dt),
        None => ScheduleSpec::Free,
    }
}

fn quadrature(cfg: &RunConfig) -> Result<QuadratureConfig<f64>, CliError> {
    let t = &cfg.tolerances;
    Ok(QuadratureConfig::new(
        t.rel_tol,
        t.abs_tol,
        t.max_subdivisions,
    )?)
}

fn spectrum(cfg: &RunConfig, s: f64) -> Result<OhmicSpectrum<f64>, CliError> {
    Ok(OhmicSpectrum::with_cutoff(s, cfg.omega_c)?)
}

fn required(v: Option<f64>, field: &str) -> Result<f64, CliError> {
    v.ok_or_else(|| CliError::config(field, "missing"))
}

fn time_grid(cfg: &RunConfig, sched: &PulseSchedule<f64>) -> Vec<f64> {
    match cfg.time_step {
        Some(step) => uniform_grid_with_pulses(sched, cfg.horizon, step),
        None => default_time_grid(sched, cfg.horizon),
    }
}

/// Computes the dataset for a validated configuration. Parallel sections
/// run on the caller's rayon pool; rows always come out in grid order.
pub fn compute(cfg: &RunConfig) -> Result<Dataset, CliError> {
    cfg.validate()?;
    let table = match cfg.command {
        Command::Decoherence => decoherence(cfg)?,
        Command::Trajectory => trajectory_table(cfg)?,
        Command::PhaseDiagram => {
            let pulsed = phase(cfg, schedule_spec(cfg))?;
            let companion = match schedule_spec(cfg) {
                ScheduleSpec::Periodic(_) => Some(phase(cfg, ScheduleSpec::Free)?),
                ScheduleSpec::Free => None,
            };
            return Ok(Dataset {
                table: pulsed,
                companion,
            });
        }
        Command::Boundary => boundary(cfg)?,
        Command::Transition => transition(cfg)?,
    };
    Ok(Dataset {
        table,
        companion: None,
    })
}

fn decoherence(cfg: &RunConfig) -> Result<Table, CliError> {
    let s = required(cfg.s, "s")?;
    let spec = spectrum(cfg, s)?;
    let sched = schedule_spec(cfg).build(cfg.horizon)?;
    let times = match cfg.tau {
        Some(tau) => vec![tau],
        None => time_grid(cfg, &sched),
    };
    let gamma: Vec<f64> = if cfg.oracle {
        let q = quadrature(cfg)?;
        times
            .par_iter()
            .map(|&t| controlled_gamma_oracle(&spec, &sched, t, &q))
            .collect::<Result<_, _>>()?
    } else {
        let ev = ControlledDecoherence::new(spec, sched);
        times
            .iter()
            .map(|&t| ev.eval(t))
            .collect::<Result<_, _>>()?
    };
    let mut table = Table::new(&DECOHERENCE_COLUMNS);
    for (&t, &g) in times.iter().zip(&gamma) {
        let f = decoherence_factor(g, cfg.noise_side())?;
        table.push(vec![format_g(t), format_g(g), format_g(f)]);
    }
    Ok(table)
}

fn trajectory_table(cfg: &RunConfig) -> Result<Table, CliError> {
    let s = required(cfg.s, "s")?;
    let state = BellDiagonalState::new(required(cfg.c, "c")?)?;
    let spec = spectrum(cfg, s)?;
    let sched = schedule_spec(cfg).build(cfg.horizon)?;
    let grid = time_grid(cfg, &sched);
    let tr = trajectory(
        &spec,
        &sched,
        &state,
        cfg.noise_side(),
        &grid,
        &quadrature(cfg)?,
    )?;
    let mut table = Table::new(&TRAJECTORY_COLUMNS);
    for i in 0..tr.len() {
        table.push(vec![
            format_g(tr.times[i]),
            format_g(tr.gamma[i]),
            format_g(tr.factor[i]),
            format_g(tr.mutual_info[i]),
            format_g(tr.classical[i]),
            format_g(tr.discord[i]),
            opt(tr.concurrence.as_ref().map(|c| c[i])),
        ]);
    }
    Ok(table)
}

/// Phase diagram for an explicit schedule, as used by the `phase-diagram`
/// command and its free-evolution companion.
pub fn diagram(
    cfg: &RunConfig,
    schedule: ScheduleSpec<f64>,
) -> Result<PhaseDiagram<f64>, CliError> {
    Ok(phase_diagram(
        &cfg.s_grid.points(),
        &cfg.c_grid.points(),
        schedule,
        cfg.noise_side(),
        cfg.horizon,
        &quadrature(cfg)?,
    )?)
}

fn phase(cfg: &RunConfig, schedule: ScheduleSpec<f64>) -> Result<Table, CliError> {
    let pd = diagram(cfg, schedule)?;
    let mut table = Table::new(&PHASE_COLUMNS);
    for (s, c, label, min_factor) in pd.cells() {
        table.push(vec![
            format_g(s),
            format_g(c),
            label.regime.as_str().to_string(),
            format_g(min_factor),
            opt(label.transition_time),
        ]);
    }
    Ok(table)
}

fn boundary(cfg: &RunConfig) -> Result<Table, CliError> {
    let specs: Vec<ScheduleSpec<f64>> = if cfg.pulse_intervals.is_empty() {
        vec![ScheduleSpec::Free]
    } else {
        cfg.pulse_intervals
            .iter()
            .map(|&dt| ScheduleSpec::Periodic(dt))
            .collect()
    };
    let q = quadrature(cfg)?;
    let s_grid = cfg.s_grid.points();
    let mut table = Table::new(&BOUNDARY_COLUMNS);
    for spec in specs {
        let curve = dd_discord::boundary_curve(&s_grid, spec, cfg.noise_side(), cfg.horizon, &q)?;
        for (s, m) in curve {
            table.push(vec![format_g(s), format_g(m), opt(spec.interval())]);
        }
    }
    Ok(table)
}

fn transition(cfg: &RunConfig) -> Result<Table, CliError> {
    let s = required(cfg.s, "s")?;
    let state = BellDiagonalState::new(required(cfg.c, "c")?)?;
    let spec = schedule_spec(cfg);
    let profile = DecoherenceProfile::new(
        spectrum(cfg, s)?,
        spec.build(cfg.horizon)?,
        cfg.noise_side(),
        cfg.horizon,
    )?;
    let label = profile.label(&state);
    let mut table = Table::new(&TRANSITION_COLUMNS);
    table.push(vec![
        format_g(s),
        format_g(state.c()),
        opt(spec.interval()),
        label.regime.as_str().to_string(),
        format_g(profile.min_factor()),
        opt(label.transition_time),
    ]);
    Ok(table)
}
