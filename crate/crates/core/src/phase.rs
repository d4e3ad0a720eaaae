//! Regime classification: time-invariant discord versus a sudden transition
//! between classical and quantum decoherence, and the (s, c) maps built on it.
//!
//! Discord stays frozen at its initial value for the whole window exactly
//! when `|c|` never exceeds the decoherence factor, so every question here
//! reduces to the minimum of `e^{-kΓ(τ)}` over `[0, horizon]`.

use rayon::prelude::*;

use crate::correlations::{
    default_time_step, factor_unchecked, uniform_grid_with_pulses, BellDiagonalState, NoiseSide,
};
use crate::error::{domain, Result};
use crate::optimize::{bisect, golden_max, linspace};
use crate::pulse::{ControlledDecoherence, PulseSchedule};
use crate::quadrature::QuadratureConfig;
use crate::scalar::{lit, to_f64, Real};
use crate::spectral::OhmicSpectrum;

/// Default evaluation window, in units of `1/ω_c`.
pub const DEFAULT_HORIZON: f64 = 25.0;

/// Pulse intervals of the boundary-curve family.
pub const BOUNDARY_INTERVALS: [f64; 7] = [0.3, 0.4, 0.5, 0.6, 1.0, 1.5, 2.0];

const REFINE_TOL: f64 = 1e-4;
const TRANSITION_TOL: f64 = 1e-6;

/// How pulses are laid out for a sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScheduleSpec<T> {
    Free,
    Periodic(T),
}

impl<T: Real> ScheduleSpec<T> {
    pub fn build(&self, horizon: T) -> Result<PulseSchedule<T>> {
        match *self {
            ScheduleSpec::Free => PulseSchedule::free(horizon),
            ScheduleSpec::Periodic(dt) => PulseSchedule::periodic(dt, horizon),
        }
    }

    pub fn interval(&self) -> Option<T> {
        match *self {
            ScheduleSpec::Free => None,
            ScheduleSpec::Periodic(dt) => Some(dt),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    TimeInvariant,
    SuddenTransition,
}

impl Regime {
    pub fn as_str(self) -> &'static str {
        match self {
            Regime::TimeInvariant => "time_invariant",
            Regime::SuddenTransition => "sudden_transition",
        }
    }
}

/// Regime of one parameter point; `transition_time` is present iff the
/// regime is [`Regime::SuddenTransition`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegimeLabel<T> {
    pub regime: Regime,
    pub transition_time: Option<T>,
}

impl<T> RegimeLabel<T> {
    pub fn is_invariant(&self) -> bool {
        self.regime == Regime::TimeInvariant
    }
}

/// `TimeInvariant` iff `|c| <= min_factor`.
pub fn classify<T: Real>(state: &BellDiagonalState<T>, min_factor: T) -> Regime {
    if state.c().abs() <= min_factor {
        Regime::TimeInvariant
    } else {
        Regime::SuddenTransition
    }
}

/// Sampled Γ(τ) over `[0, horizon]` with its refined maximum.
///
/// Built once per (spectrum, schedule, side); every threshold `c` is then
/// answered from the cached samples.
#[derive(Debug, Clone)]
pub struct DecoherenceProfile<T> {
    evaluator: ControlledDecoherence<T>,
    side: NoiseSide,
    horizon: T,
    times: Vec<T>,
    gamma: Vec<T>,
    peak_time: T,
    peak_gamma: T,
}

impl<T: Real> DecoherenceProfile<T> {
    pub fn new(
        spec: OhmicSpectrum<T>,
        schedule: PulseSchedule<T>,
        side: NoiseSide,
        horizon: T,
    ) -> Result<Self> {
        if !(horizon > T::zero()) || !horizon.is_finite() {
            return domain("horizon", to_f64(horizon), "must be finite and > 0");
        }
        if horizon > schedule.horizon() {
            return domain("horizon", to_f64(horizon), "exceeds the schedule horizon");
        }
        let times = uniform_grid_with_pulses(&schedule, horizon, default_time_step(&schedule));
        let evaluator = ControlledDecoherence::new(spec, schedule);
        let gamma: Vec<T> = times.iter().map(|&t| evaluator.eval_unchecked(t)).collect();

        let mut best = 0;
        for (i, &g) in gamma.iter().enumerate() {
            if g > gamma[best] {
                best = i;
            }
        }
        let lo = times[best.saturating_sub(1)];
        let hi = times[(best + 1).min(times.len() - 1)];
        let (mut peak_time, mut peak_gamma) = (times[best], gamma[best]);
        if hi > lo {
            let (t, g) = golden_max(|t| evaluator.eval_unchecked(t), lo, hi, lit(REFINE_TOL));
            if g > peak_gamma {
                peak_time = t;
                peak_gamma = g;
            }
        }
        Ok(Self {
            evaluator,
            side,
            horizon,
            times,
            gamma,
            peak_time,
            peak_gamma,
        })
    }

    pub fn side(&self) -> NoiseSide {
        self.side
    }

    pub fn horizon(&self) -> T {
        self.horizon
    }

    pub fn times(&self) -> &[T] {
        &self.times
    }

    pub fn gamma(&self) -> &[T] {
        &self.gamma
    }

    /// Largest Γ on the window and where it occurs.
    pub fn peak(&self) -> (T, T) {
        (self.peak_time, self.peak_gamma)
    }

    pub fn min_factor(&self) -> T {
        factor_unchecked(self.peak_gamma, self.side)
    }

    pub fn factor_at(&self, tau: T) -> Result<T> {
        if tau > self.horizon {
            return domain("tau", to_f64(tau), "time beyond the evaluation window");
        }
        Ok(factor_unchecked(self.evaluator.eval(tau)?, self.side))
    }

    pub fn label(&self, state: &BellDiagonalState<T>) -> RegimeLabel<T> {
        let regime = classify(state, self.min_factor());
        RegimeLabel {
            regime,
            transition_time: match regime {
                Regime::TimeInvariant => None,
                Regime::SuddenTransition => Some(self.crossing(state.c().abs())),
            },
        }
    }

    /// Earliest τ with factor below `c`, assuming the minimum is below `c`.
    fn crossing(&self, c: T) -> T {
        let below = |t: T| factor_unchecked(self.evaluator.eval_unchecked(t), self.side) < c;
        let first = self
            .gamma
            .iter()
            .position(|&g| factor_unchecked(g, self.side) < c);
        let (lo, hi) = match first {
            Some(i) => (self.times[i.saturating_sub(1)], self.times[i]),
            None => {
                // Only the refined peak dips below c.
                let j = self.times.partition_point(|&t| t < self.peak_time);
                (self.times[j.saturating_sub(1)], self.peak_time)
            }
        };
        let (lo, hi) = bisect(below, lo, hi, lit(TRANSITION_TOL));
        lit::<T>(0.5) * (lo + hi)
    }
}

/// Minimum of the decoherence factor over `[0, horizon]`.
pub fn min_decoherence_factor<T: Real>(
    spec: &OhmicSpectrum<T>,
    sched: &PulseSchedule<T>,
    side: NoiseSide,
    horizon: T,
    cfg: &QuadratureConfig<T>,
) -> Result<T> {
    cfg.validate()?;
    Ok(DecoherenceProfile::new(*spec, sched.clone(), side, horizon)?.min_factor())
}

/// Time after which discord starts to decay, or `None` when it stays
/// frozen over the whole window.
pub fn transition_time<T: Real>(
    spec: &OhmicSpectrum<T>,
    sched: &PulseSchedule<T>,
    state: &BellDiagonalState<T>,
    side: NoiseSide,
    horizon: T,
    cfg: &QuadratureConfig<T>,
) -> Result<Option<T>> {
    cfg.validate()?;
    let profile = DecoherenceProfile::new(*spec, sched.clone(), side, horizon)?;
    Ok(profile.label(state).transition_time)
}

/// Regime labels over an (s, c) grid.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseDiagram<T> {
    pub s_grid: Vec<T>,
    pub c_grid: Vec<T>,
    /// Minimum decoherence factor per `s`.
    pub min_factor: Vec<T>,
    /// `labels[i][j]` belongs to `(s_grid[i], c_grid[j])`.
    pub labels: Vec<Vec<RegimeLabel<T>>>,
    pub side: NoiseSide,
    pub schedule: ScheduleSpec<T>,
    pub horizon: T,
}

impl<T: Real> PhaseDiagram<T> {
    pub fn label(&self, s_index: usize, c_index: usize) -> &RegimeLabel<T> {
        &self.labels[s_index][c_index]
    }

    pub fn is_invariant(&self, s_index: usize, c_index: usize) -> bool {
        self.label(s_index, c_index).is_invariant()
    }

    pub fn invariant_count(&self) -> usize {
        self.labels
            .iter()
            .flatten()
            .filter(|l| l.is_invariant())
            .count()
    }

    /// Iterates `(s, c, label, min_factor)` in row-major grid order.
    pub fn cells(&self) -> impl Iterator<Item = (T, T, &RegimeLabel<T>, T)> + '_ {
        self.s_grid.iter().enumerate().flat_map(move |(i, &s)| {
            self.c_grid
                .iter()
                .zip(&self.labels[i])
                .map(move |(&c, l)| (s, c, l, self.min_factor[i]))
        })
    }
}

/// Default Ohmicity grid: 60 points on `[0.1, 6]`.
pub fn default_s_grid<T: Real>() -> Vec<T> {
    linspace(lit(0.1), lit(6.0), 60)
}

/// Default state grid: 50 points on `[0, 0.999]`.
pub fn default_c_grid<T: Real>() -> Vec<T> {
    linspace(T::zero(), lit(0.999), 50)
}

fn check_s_grid<T: Real>(s_grid: &[T]) -> Result<()> {
    for (i, &s) in s_grid.iter().enumerate() {
        if !(s > T::zero()) {
            return domain("s_grid", to_f64(s), "Ohmicity values must be > 0");
        }
        if i > 0 && !(s > s_grid[i - 1]) {
            return domain("s_grid", to_f64(s), "grid must be strictly ascending");
        }
    }
    Ok(())
}

fn check_c_grid<T: Real>(c_grid: &[T]) -> Result<()> {
    for (i, &c) in c_grid.iter().enumerate() {
        if !(c >= T::zero() && c < T::one()) {
            return domain("c_grid", to_f64(c), "state parameters must lie in [0, 1)");
        }
        if i > 0 && !(c > c_grid[i - 1]) {
            return domain("c_grid", to_f64(c), "grid must be strictly ascending");
        }
    }
    Ok(())
}

/// Profiles for every `s`, computed in parallel and returned in grid order.
fn profiles<T: Real>(
    s_grid: &[T],
    schedule: ScheduleSpec<T>,
    side: NoiseSide,
    horizon: T,
) -> Result<Vec<DecoherenceProfile<T>>> {
    let sched = schedule.build(horizon)?;
    s_grid
        .par_iter()
        .map(|&s| DecoherenceProfile::new(OhmicSpectrum::new(s)?, sched.clone(), side, horizon))
        .collect()
}

pub fn phase_diagram<T: Real>(
    s_grid: &[T],
    c_grid: &[T],
    schedule: ScheduleSpec<T>,
    side: NoiseSide,
    horizon: T,
    cfg: &QuadratureConfig<T>,
) -> Result<PhaseDiagram<T>> {
    cfg.validate()?;
    check_s_grid(s_grid)?;
    check_c_grid(c_grid)?;
    let states = c_grid
        .iter()
        .map(|&c| BellDiagonalState::new(c))
        .collect::<Result<Vec<_>>>()?;
    let rows = profiles(s_grid, schedule, side, horizon)?;
    let labels = rows
        .par_iter()
        .map(|p| states.iter().map(|st| p.label(st)).collect())
        .collect();
    Ok(PhaseDiagram {
        s_grid: s_grid.to_vec(),
        c_grid: c_grid.to_vec(),
        min_factor: rows.iter().map(|p| p.min_factor()).collect(),
        labels,
        side,
        schedule,
        horizon,
    })
}

/// `(s, min_factor)` pairs; below the curve discord is time-invariant.
pub fn boundary_curve<T: Real>(
    s_grid: &[T],
    schedule: ScheduleSpec<T>,
    side: NoiseSide,
    horizon: T,
    cfg: &QuadratureConfig<T>,
) -> Result<Vec<(T, T)>> {
    cfg.validate()?;
    check_s_grid(s_grid)?;
    let rows = profiles(s_grid, schedule, side, horizon)?;
    Ok(s_grid
        .iter()
        .zip(&rows)
        .map(|(&s, p)| (s, p.min_factor()))
        .collect())
}

/// Minimum factor as the window grows, for one spectrum.
pub fn min_factor_trend<T: Real>(
    spec: &OhmicSpectrum<T>,
    schedule: ScheduleSpec<T>,
    side: NoiseSide,
    horizons: &[T],
    cfg: &QuadratureConfig<T>,
) -> Result<Vec<(T, T)>> {
    cfg.validate()?;
    horizons
        .par_iter()
        .map(|&h| {
            let p = DecoherenceProfile::new(*spec, schedule.build(h)?, side, h)?;
            Ok((h, p.min_factor()))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(s: f64) -> OhmicSpectrum<f64> {
        OhmicSpectrum::new(s).unwrap()
    }

    fn st(c: f64) -> BellDiagonalState<f64> {
        BellDiagonalState::new(c).unwrap()
    }

    fn cfg() -> QuadratureConfig<f64> {
        QuadratureConfig::default()
    }

    #[test]
    fn min_factor_free_super_ohmic() {
        let free = PulseSchedule::free(25.0).unwrap();
        let m =
            min_decoherence_factor(&spec(4.0), &free, NoiseSide::TwoSided, 25.0, &cfg()).unwrap();
        assert!((m - (-5.0f64).exp()).abs() < 1e-8);
    }

    #[test]
    fn min_factor_free_ohmic_at_horizon() {
        let free = PulseSchedule::free(25.0).unwrap();
        let m =
            min_decoherence_factor(&spec(1.0), &free, NoiseSide::OneSided, 25.0, &cfg()).unwrap();
        assert!((m - 626f64.powf(-0.5)).abs() < 1e-12);
    }

    #[test]
    fn min_factor_short_window() {
        let free = PulseSchedule::free(1e-9).unwrap();
        for s in [0.3, 1.0, 5.0] {
            let m =
                min_decoherence_factor(&spec(s), &free, NoiseSide::TwoSided, 1e-9, &cfg()).unwrap();
            assert!((m - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn min_factor_rejects_bad_horizon() {
        let free = PulseSchedule::free(5.0).unwrap();
        assert!(
            min_decoherence_factor(&spec(1.0), &free, NoiseSide::OneSided, 0.0, &cfg()).is_err()
        );
        assert!(
            min_decoherence_factor(&spec(1.0), &free, NoiseSide::OneSided, 6.0, &cfg()).is_err()
        );
    }

    #[test]
    fn classify_examples() {
        for m in [1e-6, 0.5, 1.0] {
            assert_eq!(classify(&st(0.0), m), Regime::TimeInvariant);
        }
        assert_eq!(classify(&st(0.5), 0.006_738), Regime::SuddenTransition);
        assert_eq!(classify(&st(0.25), 0.25), Regime::TimeInvariant);
    }

    #[test]
    fn transition_time_free_ohmic() {
        let free = PulseSchedule::free(25.0).unwrap();
        let one = transition_time(
            &spec(1.0),
            &free,
            &st(0.5),
            NoiseSide::OneSided,
            25.0,
            &cfg(),
        )
        .unwrap()
        .unwrap();
        assert!((one - 3f64.sqrt()).abs() < 1e-6);
        let two = transition_time(
            &spec(1.0),
            &free,
            &st(0.5),
            NoiseSide::TwoSided,
            25.0,
            &cfg(),
        )
        .unwrap()
        .unwrap();
        assert!((two - 1.0).abs() < 1e-6);
        assert!(transition_time(
            &spec(1.0),
            &free,
            &st(0.0),
            NoiseSide::TwoSided,
            25.0,
            &cfg()
        )
        .unwrap()
        .is_none());
    }

    #[test]
    fn transition_time_brackets_the_crossing() {
        let sched = PulseSchedule::periodic(3.0, 25.0).unwrap();
        let p = DecoherenceProfile::new(spec(4.0), sched, NoiseSide::OneSided, 25.0).unwrap();
        let label = p.label(&st(0.5));
        assert_eq!(label.regime, Regime::SuddenTransition);
        let t = label.transition_time.unwrap();
        assert!(t > 0.0 && t <= 25.0);
        assert!(p.factor_at(t - 1e-4).unwrap() >= 0.5);
        assert!(p.factor_at(t + 1e-4).unwrap() < 0.5);
    }

    #[test]
    fn diagram_with_only_product_states() {
        let d = phase_diagram(
            &[0.5, 2.0, 4.0],
            &[0.0],
            ScheduleSpec::Free,
            NoiseSide::TwoSided,
            25.0,
            &cfg(),
        )
        .unwrap();
        assert_eq!(d.invariant_count(), 3);
        assert!(d.cells().all(|(_, _, l, _)| l.transition_time.is_none()));
    }

    #[test]
    fn diagram_rejects_bad_grids() {
        let free = ScheduleSpec::Free;
        assert!(
            phase_diagram(&[1.0, 0.5], &[0.0], free, NoiseSide::OneSided, 5.0, &cfg()).is_err()
        );
        assert!(phase_diagram(&[0.0], &[0.0], free, NoiseSide::OneSided, 5.0, &cfg()).is_err());
        assert!(phase_diagram(&[1.0], &[1.0], free, NoiseSide::OneSided, 5.0, &cfg()).is_err());
        assert!(
            phase_diagram(&[1.0], &[0.2, 0.1], free, NoiseSide::OneSided, 5.0, &cfg()).is_err()
        );
    }

    #[test]
    fn boundary_matches_closed_form() {
        let b = boundary_curve(
            &[1.0],
            ScheduleSpec::Free,
            NoiseSide::OneSided,
            25.0,
            &cfg(),
        )
        .unwrap();
        assert!((b[0].1 - 0.039_968_038_348_871_575).abs() < 1e-12);
    }

    #[test]
    fn zeno_limit_approaches_unity() {
        let mut prev = 0.0;
        for dt in [0.4, 0.2, 0.1, 0.05] {
            let b = boundary_curve(
                &[1.0],
                ScheduleSpec::Periodic(dt),
                NoiseSide::OneSided,
                25.0,
                &cfg(),
            )
            .unwrap();
            assert!(b[0].1 > prev, "dt = {dt}: {} <= {prev}", b[0].1);
            prev = b[0].1;
        }
        assert!(prev > 0.9);
    }

    #[test]
    fn trend_is_monotone_for_free_ohmic() {
        let hs = [5.0, 10.0, 25.0, 50.0];
        let t = min_factor_trend(
            &spec(1.0),
            ScheduleSpec::Free,
            NoiseSide::OneSided,
            &hs,
            &cfg(),
        )
        .unwrap();
        assert!(t.windows(2).all(|w| w[1].1 < w[0].1));
    }
}
