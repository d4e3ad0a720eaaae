//! Correlations of the Bell-diagonal family
//! `ρ = (1+c)/2 |Φ⟩⟨Φ| + (1-c)/2 |Ψ⟩⟨Ψ|` under local dephasing.
//!
//! All information quantities are in bits.

use crate::error::{domain, Result};
use crate::pulse::{ControlledDecoherence, PulseSchedule};
use crate::quadrature::QuadratureConfig;
use crate::scalar::{half_xlog2x, lit, to_f64, Real};
use crate::spectral::OhmicSpectrum;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BellDiagonalState<T> {
    c: T,
}

impl<T: Real> BellDiagonalState<T> {
    pub fn new(c: T) -> Result<Self> {
        if !(c.abs() < T::one()) {
            return domain("c", to_f64(c), "Bell mixing parameter must satisfy |c| < 1");
        }
        Ok(Self { c })
    }

    pub fn c(&self) -> T {
        self.c
    }
}

/// Whether dephasing (and pulsing) acts on one qubit or on both.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NoiseSide {
    OneSided,
    TwoSided,
}

impl NoiseSide {
    /// Exponent multiplier `k` in the decoherence factor `e^{-kΓ}`.
    pub fn multiplicity(self) -> u32 {
        match self {
            NoiseSide::OneSided => 1,
            NoiseSide::TwoSided => 2,
        }
    }
}

/// `e^{-Γ}` (one-sided) or `e^{-2Γ}` (two-sided).
pub fn decoherence_factor<T: Real>(gamma_value: T, side: NoiseSide) -> Result<T> {
    if !(gamma_value >= T::zero()) {
        return domain(
            "gamma",
            to_f64(gamma_value),
            "decoherence exponent must be >= 0",
        );
    }
    Ok(factor_unchecked(gamma_value, side))
}

#[inline]
pub(crate) fn factor_unchecked<T: Real>(gamma_value: T, side: NoiseSide) -> T {
    (-lit::<T>(side.multiplicity() as f64) * gamma_value).exp()
}

/// `Σ_± (1±v)/2 · log₂(1±v)`.
#[inline]
pub(crate) fn binary_term<T: Real>(v: T) -> T {
    half_xlog2x(T::one() + v) + half_xlog2x(T::one() - v)
}

fn check_factor<T: Real>(factor: T) -> Result<()> {
    if !(factor > T::zero() && factor <= T::one()) {
        return domain(
            "factor",
            to_f64(factor),
            "decoherence factor must lie in (0, 1]",
        );
    }
    Ok(())
}

pub fn mutual_information<T: Real>(state: &BellDiagonalState<T>, factor: T) -> Result<T> {
    check_factor(factor)?;
    Ok(binary_term(state.c) + binary_term(factor))
}

/// Classical correlations, `χ = max{factor, |c|}`.
pub fn classical_correlations<T: Real>(state: &BellDiagonalState<T>, factor: T) -> Result<T> {
    check_factor(factor)?;
    Ok(binary_term(factor.max(state.c.abs())))
}

pub fn discord<T: Real>(state: &BellDiagonalState<T>, factor: T) -> Result<T> {
    Ok(mutual_information(state, factor)? - classical_correlations(state, factor)?)
}

/// Discord value while it is frozen: `[(1+c)log₂(1+c) + (1-c)log₂(1-c)]/2`.
pub fn invariant_discord_value<T: Real>(state: &BellDiagonalState<T>) -> T {
    binary_term(state.c)
}

/// One-sided concurrence
/// `½·max{0, |e^{-Γ}(1-c)| - 1 - c, |e^{-Γ}(1+c)| - 1 + c}`.
pub fn concurrence<T: Real>(state: &BellDiagonalState<T>, gamma_value: T) -> Result<T> {
    if !(gamma_value >= T::zero()) {
        return domain(
            "gamma",
            to_f64(gamma_value),
            "decoherence exponent must be >= 0",
        );
    }
    let c = state.c;
    if c < T::zero() {
        return domain("c", to_f64(c), "concurrence requires c in [0, 1)");
    }
    let e = (-gamma_value).exp();
    let one = T::one();
    let first = (e * (one - c)).abs() - one - c;
    let second = (e * (one + c)).abs() - one + c;
    Ok(T::zero().max(first).max(second) / lit(2.0))
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationTrajectory<T> {
    pub times: Vec<T>,
    pub gamma: Vec<T>,
    pub factor: Vec<T>,
    pub mutual_info: Vec<T>,
    pub classical: Vec<T>,
    pub discord: Vec<T>,
    /// Present only for one-sided noise.
    pub concurrence: Option<Vec<T>>,
}

impl<T> CorrelationTrajectory<T> {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

/// Default sampling step: `min(Δτ/20, 0.05)`, or `0.05` for free evolution.
pub fn default_time_step<T: Real>(schedule: &PulseSchedule<T>) -> T {
    let base = lit::<T>(0.05);
    match schedule.instants().first() {
        // Periodic schedules start at Δτ.
        Some(&first) => base.min(first / lit(20.0)),
        None => base,
    }
}

/// Uniform grid on `[0, horizon]` with step `min(Δτ/20, 0.05)`, plus every
/// pulse instant and a point just after it so both branches are sampled.
pub fn default_time_grid<T: Real>(schedule: &PulseSchedule<T>, horizon: T) -> Vec<T> {
    uniform_grid_with_pulses(schedule, horizon, default_time_step(schedule))
}

/// Uniform grid with an explicit step, augmented like [`default_time_grid`].
pub fn uniform_grid_with_pulses<T: Real>(
    schedule: &PulseSchedule<T>,
    horizon: T,
    step: T,
) -> Vec<T> {
    let steps = (horizon / step).ceil().to_usize().unwrap_or(0).max(1);
    let mut grid: Vec<T> = (0..=steps)
        .map(|i| (lit::<T>(i as f64) * step).min(horizon))
        .collect();
    for &t in schedule.instants() {
        if t <= horizon {
            grid.push(t);
            let after = t + t * T::epsilon() * lit(8.0);
            if after <= horizon {
                grid.push(after);
            }
        }
    }
    grid.sort_by(|a, b| a.partial_cmp(b).expect("finite grid"));
    grid.dedup();
    grid
}

/// Correlation dynamics sampled on `grid`.
pub fn trajectory<T: Real>(
    spec: &OhmicSpectrum<T>,
    sched: &PulseSchedule<T>,
    state: &BellDiagonalState<T>,
    side: NoiseSide,
    grid: &[T],
    cfg: &QuadratureConfig<T>,
) -> Result<CorrelationTrajectory<T>> {
    cfg.validate()?;
    let mut prev = T::neg_infinity();
    for &t in grid {
        if !(t >= prev) {
            return domain("grid", to_f64(t), "time grid must be ascending");
        }
        prev = t;
    }
    let evaluator = ControlledDecoherence::new(*spec, sched.clone());
    let gamma = grid
        .iter()
        .map(|&t| evaluator.eval(t))
        .collect::<Result<Vec<T>>>()?;
    trajectory_from_gamma(state, side, grid.to_vec(), gamma)
}

pub(crate) fn trajectory_from_gamma<T: Real>(
    state: &BellDiagonalState<T>,
    side: NoiseSide,
    times: Vec<T>,
    gamma: Vec<T>,
) -> Result<CorrelationTrajectory<T>> {
    let n = times.len();
    let mut out = CorrelationTrajectory {
        times,
        gamma: Vec::with_capacity(n),
        factor: Vec::with_capacity(n),
        mutual_info: Vec::with_capacity(n),
        classical: Vec::with_capacity(n),
        discord: Vec::with_capacity(n),
        concurrence: match side {
            NoiseSide::OneSided => Some(Vec::with_capacity(n)),
            NoiseSide::TwoSided => None,
        },
    };
    for g in gamma {
        let f = decoherence_factor(g, side)?;
        let mi = mutual_information(state, f)?;
        let cc = classical_correlations(state, f)?;
        out.gamma.push(g);
        out.factor.push(f);
        out.mutual_info.push(mi);
        out.classical.push(cc);
        out.discord.push(mi - cc);
        if let Some(conc) = out.concurrence.as_mut() {
            conc.push(concurrence(state, g)?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn st(c: f64) -> BellDiagonalState<f64> {
        BellDiagonalState::new(c).unwrap()
    }

    const Q_HALF: f64 = 0.188_721_875_540_867;

    #[test]
    fn factor_examples() {
        assert_eq!(decoherence_factor(0.0, NoiseSide::OneSided).unwrap(), 1.0);
        assert_eq!(decoherence_factor(0.0, NoiseSide::TwoSided).unwrap(), 1.0);
        assert!(
            (decoherence_factor(1.0_f64, NoiseSide::TwoSided).unwrap() - 0.135_335_283_236_612_7)
                .abs()
                < 1e-15
        );
        assert!(
            (decoherence_factor(1.0_f64, NoiseSide::OneSided).unwrap() - 0.367_879_441_171_442_3)
                .abs()
                < 1e-15
        );
        assert!(decoherence_factor(-1e-3, NoiseSide::OneSided).is_err());
    }

    #[test]
    fn state_bounds() {
        assert!(BellDiagonalState::new(1.0).is_err());
        assert!(BellDiagonalState::new(-1.0).is_err());
        assert!(BellDiagonalState::new(-0.5).is_ok());
    }

    #[test]
    fn mutual_information_examples() {
        assert!((mutual_information(&st(0.5), 1.0).unwrap() - (Q_HALF + 1.0)).abs() < 1e-12);
        assert!((mutual_information(&st(0.0), 0.3).unwrap() - 0.065_931_944_624_509).abs() < 1e-12);
        assert!((mutual_information(&st(0.5), 1e-12).unwrap() - Q_HALF).abs() < 1e-12);
        assert!(mutual_information(&st(0.5), 0.0).is_err());
        assert!(mutual_information(&st(0.5), 1.1).is_err());
    }

    #[test]
    fn classical_examples() {
        assert!((classical_correlations(&st(0.5), 1.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((classical_correlations(&st(0.5), 0.3).unwrap() - Q_HALF).abs() < 1e-12);
        assert!(
            (classical_correlations(&st(0.0), 0.7).unwrap() - 0.390_159_695_283_6).abs() < 1e-12
        );
    }

    #[test]
    fn discord_examples() {
        for f in [1e-6, 0.2, 0.9, 1.0] {
            assert!(discord(&st(0.0), f).unwrap().abs() < 1e-15);
        }
        assert!((discord(&st(0.5), 0.8).unwrap() - Q_HALF).abs() < 1e-12);
        assert!((discord(&st(0.5), 0.3).unwrap() - 0.065_931_944_624_509).abs() < 1e-12);
        // Negative c behaves like |c|.
        assert!((discord(&st(-0.5), 0.8).unwrap() - Q_HALF).abs() < 1e-12);
    }

    #[test]
    fn invariant_value_examples() {
        assert_eq!(invariant_discord_value(&st(0.0)), 0.0);
        assert!((invariant_discord_value(&st(1.0 - 1e-15)) - 1.0).abs() < 1e-12);
        assert!((invariant_discord_value(&st(0.5)) - Q_HALF).abs() < 1e-12);
        assert!(
            (invariant_discord_value(&st(0.5)) - discord(&st(0.5), 1.0).unwrap()).abs() < 1e-15
        );
    }

    #[test]
    fn concurrence_examples() {
        assert!((concurrence(&st(0.5), 0.0).unwrap() - 0.5).abs() < 1e-15);
        assert!((concurrence(&st(0.5), 2f64.ln()).unwrap() - 0.125).abs() < 1e-15);
        assert_eq!(concurrence(&st(0.5), 5f64.ln()).unwrap(), 0.0);
        assert!(concurrence(&st(0.5), -1.0).is_err());
        assert!(concurrence(&st(-0.5), 0.0).is_err());
    }

    #[test]
    fn grid_includes_both_sides_of_pulses() {
        let sched = PulseSchedule::periodic(1.0, 3.0).unwrap();
        let grid = default_time_grid(&sched, 3.0);
        assert_eq!(grid[0], 0.0);
        assert_eq!(*grid.last().unwrap(), 3.0);
        assert!(grid.windows(2).all(|w| w[0] < w[1]));
        for t in [1.0, 2.0] {
            let i = grid.iter().position(|&g| g == t).unwrap();
            assert!(grid[i + 1] > t && grid[i + 1] - t < 1e-12);
        }
        assert!(
            (default_time_step(&PulseSchedule::periodic(0.3_f64, 25.0).unwrap()) - 0.015).abs()
                < 1e-15
        );
        assert_eq!(
            default_time_step(&PulseSchedule::<f64>::free(25.0).unwrap()),
            0.05
        );
    }

    #[test]
    fn product_family_trajectory() {
        let sp = OhmicSpectrum::new(1.0).unwrap();
        let sched = PulseSchedule::free(5.0).unwrap();
        let grid = default_time_grid(&sched, 5.0);
        let tr = trajectory(
            &sp,
            &sched,
            &st(0.0),
            NoiseSide::OneSided,
            &grid,
            &Default::default(),
        )
        .unwrap();
        assert!(tr.discord.iter().all(|d| d.abs() < 1e-15));
        assert!(tr.concurrence.as_ref().unwrap().iter().all(|&c| c == 0.0));
        assert_eq!(tr.factor[0], 1.0);
        let two = trajectory(
            &sp,
            &sched,
            &st(0.0),
            NoiseSide::TwoSided,
            &grid,
            &Default::default(),
        )
        .unwrap();
        assert!(two.concurrence.is_none());
    }

    #[test]
    fn trajectory_rejects_unsorted_grid() {
        let sp = OhmicSpectrum::new(1.0).unwrap();
        let sched = PulseSchedule::free(5.0).unwrap();
        let r = trajectory(
            &sp,
            &sched,
            &st(0.5),
            NoiseSide::OneSided,
            &[0.0, 2.0, 1.0],
            &Default::default(),
        );
        assert!(r.is_err());
    }
}
