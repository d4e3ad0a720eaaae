//! Pure-dephasing dynamics of one and two qubits under periodic
//! dynamical-decoupling pulses, and the resulting correlations of
//! Bell-diagonal states.
//!
//! The numerics are generic over [`Real`] (`f32`, `f64`); the `*F64`
//! aliases below name the double-precision instantiations used by the
//! command-line runner.
//!
//! Units: times are measured in `1/ω_c`, frequencies in `ω_c`.

// `!(x > 0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod correlations;
pub mod error;
pub mod optimize;
pub mod phase;
pub mod pulse;
pub mod quadrature;
pub mod scalar;
pub mod special;
pub mod spectral;

pub use correlations::{
    classical_correlations, concurrence, decoherence_factor, default_time_grid, default_time_step,
    discord, invariant_discord_value, mutual_information, trajectory, uniform_grid_with_pulses,
    BellDiagonalState, CorrelationTrajectory, NoiseSide,
};
pub use error::{Error, Result};
pub use phase::{
    boundary_curve, classify, default_c_grid, default_s_grid, min_decoherence_factor,
    min_factor_trend, phase_diagram, transition_time, DecoherenceProfile, PhaseDiagram, Regime,
    RegimeLabel, ScheduleSpec, BOUNDARY_INTERVALS, DEFAULT_HORIZON,
};
pub use pulse::{
    controlled_gamma, controlled_gamma_oracle, filter_function_sq, periodic_schedule,
    ControlledDecoherence, PulseSchedule,
};
pub use quadrature::QuadratureConfig;
pub use scalar::Real;
pub use special::gamma;
pub use spectral::{gamma0, gamma0_rate, recoherence_onset, spectral_density, OhmicSpectrum};

pub type OhmicSpectrumF64 = OhmicSpectrum<f64>;
pub type OhmicSpectrumF32 = OhmicSpectrum<f32>;
pub type QuadratureConfigF64 = QuadratureConfig<f64>;
pub type QuadratureConfigF32 = QuadratureConfig<f32>;
pub type PulseScheduleF64 = PulseSchedule<f64>;
pub type PulseScheduleF32 = PulseSchedule<f32>;
pub type BellDiagonalStateF64 = BellDiagonalState<f64>;
pub type BellDiagonalStateF32 = BellDiagonalState<f32>;
pub type CorrelationTrajectoryF64 = CorrelationTrajectory<f64>;
pub type ScheduleSpecF64 = ScheduleSpec<f64>;
pub type RegimeLabelF64 = RegimeLabel<f64>;
pub type PhaseDiagramF64 = PhaseDiagram<f64>;
