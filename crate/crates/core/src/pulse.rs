//! Instantaneous π-pulse schedules and the controlled decoherence function.

use std::collections::HashMap;

use crate::error::{domain, Result};
use crate::quadrature::{integrate, QuadratureConfig};
use crate::scalar::{lit, to_f64, Real};
use crate::spectral::{check_time, tail_cutoff, OhmicSpectrum};

/// Strictly increasing pulse instants inside `(0, horizon]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PulseSchedule<T> {
    instants: Vec<T>,
    horizon: T,
}

impl<T: Real> PulseSchedule<T> {
    pub fn new(instants: Vec<T>, horizon: T) -> Result<Self> {
        if !(horizon > T::zero()) || !horizon.is_finite() {
            return domain("horizon", to_f64(horizon), "must be finite and > 0");
        }
        let mut prev = T::zero();
        for &t in &instants {
            if !(t > prev) {
                return domain(
                    "instant",
                    to_f64(t),
                    "instants must be strictly increasing and > 0",
                );
            }
            if t > horizon {
                return domain("instant", to_f64(t), "instant lies beyond the horizon");
            }
            prev = t;
        }
        Ok(Self { instants, horizon })
    }

    /// Free evolution: no pulses.
    pub fn free(horizon: T) -> Result<Self> {
        Self::new(Vec::new(), horizon)
    }

    /// Pulses at `n·Δτ` for `n = 1..=⌊horizon/Δτ⌋`.
    pub fn periodic(delta_tau: T, horizon: T) -> Result<Self> {
        if !(delta_tau > T::zero()) || !delta_tau.is_finite() {
            return domain(
                "delta_tau",
                to_f64(delta_tau),
                "pulse interval must be finite and > 0",
            );
        }
        if !(horizon > T::zero()) || !horizon.is_finite() {
            return domain("horizon", to_f64(horizon), "must be finite and > 0");
        }
        // Guard ⌊T/Δτ⌋ against representation error (25/0.3 = 83.333.., 24/3 = 8).
        let ratio = horizon / delta_tau;
        let mut count = ratio.round().to_usize().unwrap_or(0);
        if lit::<T>(count as f64) * delta_tau > horizon * (T::one() + T::epsilon() * lit(4.0)) {
            count = ratio.floor().to_usize().unwrap_or(0);
        }
        let instants = (1..=count)
            .map(|n| (lit::<T>(n as f64) * delta_tau).min(horizon))
            .collect();
        Self::new(instants, horizon)
    }

    pub fn instants(&self) -> &[T] {
        &self.instants
    }

    pub fn horizon(&self) -> T {
        self.horizon
    }

    pub fn len(&self) -> usize {
        self.instants.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instants.is_empty()
    }

    /// Final pulse instant, if any.
    pub fn last(&self) -> Option<T> {
        self.instants.last().copied()
    }

    /// Number of pulses strictly before `tau`: the branch index of the
    /// piecewise decoherence function (`t_n < τ <= t_{n+1}`).
    pub fn branch(&self, tau: T) -> usize {
        self.instants.partition_point(|&t| t < tau)
    }
}

pub fn periodic_schedule<T: Real>(delta_tau: T, horizon: T) -> Result<PulseSchedule<T>> {
    PulseSchedule::periodic(delta_tau, horizon)
}

/// Controlled decoherence Γ(τ) for a fixed spectrum and schedule.
///
/// Pulse-only terms of the iterated expansion are accumulated once per
/// schedule, so each evaluation costs `O(n)` free-decoherence calls with
/// `n` the branch index.
#[derive(Debug, Clone)]
pub struct ControlledDecoherence<T> {
    spectrum: OhmicSpectrum<T>,
    schedule: PulseSchedule<T>,
    // prefix[n] = 2Σ_{m<=n}(-1)^{m+1}Γ₀(t_m) + 4Σ_{m<=n}Σ_{j<m}(-1)^{m-1+j}Γ₀(t_m - t_j)
    prefix: Vec<T>,
}

impl<T: Real> ControlledDecoherence<T> {
    pub fn new(spectrum: OhmicSpectrum<T>, schedule: PulseSchedule<T>) -> Self {
        let t = schedule.instants();
        let mut memo: HashMap<(u64, i16, i8), T> = HashMap::new();
        let mut g0 = |x: T| {
            *memo
                .entry(x.integer_decode())
                .or_insert_with(|| spectrum.gamma0_closed(x))
        };
        let two = lit::<T>(2.0);
        let four = lit::<T>(4.0);
        let mut prefix = Vec::with_capacity(t.len() + 1);
        prefix.push(T::zero());
        let mut acc = T::zero();
        for m in 1..=t.len() {
            let tm = t[m - 1];
            acc = acc + two * sign::<T>(m + 1) * g0(tm);
            let mut cross = T::zero();
            for j in 1..m {
                cross = cross + sign::<T>(m - 1 + j) * g0(tm - t[j - 1]);
            }
            acc = acc + four * cross;
            prefix.push(acc);
        }
        Self {
            spectrum,
            schedule,
            prefix,
        }
    }

    pub fn spectrum(&self) -> &OhmicSpectrum<T> {
        &self.spectrum
    }

    pub fn schedule(&self) -> &PulseSchedule<T> {
        &self.schedule
    }

    /// Γ(τ) for `0 <= τ <= horizon`.
    pub fn eval(&self, tau: T) -> Result<T> {
        check_time(tau)?;
        if tau > self.schedule.horizon() {
            return domain("tau", to_f64(tau), "time beyond the schedule horizon");
        }
        Ok(self.eval_unchecked(tau))
    }

    pub(crate) fn eval_unchecked(&self, tau: T) -> T {
        let n = self.schedule.branch(tau);
        let t = self.schedule.instants();
        let two = lit::<T>(2.0);
        let mut tail = T::zero();
        for m in 1..=n {
            tail = tail + sign::<T>(m + n) * self.spectrum.gamma0_closed(tau - t[m - 1]);
        }
        let value = self.prefix[n] + two * tail + sign::<T>(n) * self.spectrum.gamma0_closed(tau);
        // Exact value is a nonnegative integral; clip roundoff below zero.
        value.max(T::zero())
    }
}

#[inline]
fn sign<T: Real>(k: usize) -> T {
    if k.is_multiple_of(2) {
        T::one()
    } else {
        -T::one()
    }
}

/// Controlled decoherence Γ(τ) via the iterated closed-form expansion.
pub fn controlled_gamma<T: Real>(
    spec: &OhmicSpectrum<T>,
    sched: &PulseSchedule<T>,
    tau: T,
    cfg: &QuadratureConfig<T>,
) -> Result<T> {
    cfg.validate()?;
    ControlledDecoherence::new(*spec, sched.clone()).eval(tau)
}

/// Filter function `|y_n(z)|²` for pulses at `sched_prefix` observed at `tau`.
pub fn filter_function_sq<T: Real>(sched_prefix: &[T], tau: T, z: T) -> Result<T> {
    if !(z >= T::zero()) {
        return domain("z", to_f64(z), "phase variable must be >= 0");
    }
    if !(tau > T::zero()) {
        if sched_prefix.is_empty() {
            return Ok(T::zero());
        }
        return domain("tau", to_f64(tau), "must be > 0 when pulses are present");
    }
    let mut fractions = Vec::with_capacity(sched_prefix.len());
    for &t in sched_prefix {
        let d = t / tau;
        if !(d > T::zero() && d < T::one()) {
            return domain("delta", to_f64(d), "pulse fraction must lie in (0, 1)");
        }
        fractions.push(d);
    }
    Ok(filter_sq_unchecked(&fractions, z))
}

// y_n(z) = Σ a_k e^{i z d_k} with Σ a_k = 0, evaluated as Σ a_k (e^{i z d_k} - 1)
// to keep the small-z cancellation exact.
fn filter_sq_unchecked<T: Real>(fractions: &[T], z: T) -> T {
    let two = lit::<T>(2.0);
    let n = fractions.len();
    let mut re = T::zero();
    let mut im = T::zero();
    let mut add = |a: T, d: T| {
        let phase = z * d;
        let h = (phase / two).sin();
        re = re - a * two * h * h;
        im = im + a * phase.sin();
    };
    add(sign::<T>(n + 1), T::one());
    for (m, &d) in fractions.iter().enumerate() {
        add(two * sign::<T>(m + 1), d);
    }
    re * re + im * im
}

/// Γ(τ) by direct quadrature of `I(ω)/(2ω²)·|y_n(ωτ)|²`.
pub fn controlled_gamma_oracle<T: Real>(
    spec: &OhmicSpectrum<T>,
    sched: &PulseSchedule<T>,
    tau: T,
    cfg: &QuadratureConfig<T>,
) -> Result<T> {
    check_time(tau)?;
    cfg.validate()?;
    if tau > sched.horizon() {
        return domain("tau", to_f64(tau), "time beyond the schedule horizon");
    }
    if tau == T::zero() {
        return Ok(T::zero());
    }
    let n = sched.branch(tau);
    let fractions: Vec<T> = sched.instants()[..n].iter().map(|&t| t / tau).collect();
    let two = lit::<T>(2.0);
    let a = spec.s() - two;
    let integrand = |x: T| x.powf(a) * (-x).exp() * filter_sq_unchecked(&fractions, x * tau) / two;
    // |y_n| <= 2n + 2
    let peak = lit::<T>(2.0 * n as f64 + 2.0);
    let upper = tail_cutoff(a, peak * peak / two, cfg.abs_tol);
    integrate(integrand, T::zero(), upper, Some(T::PI() / tau), cfg)
        .map_err(|e| spec.convergence(tau, e.subdivisions, to_f64(e.abs_error)))
}
