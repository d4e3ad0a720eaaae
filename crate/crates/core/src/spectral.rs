//! Ohmic-family spectral densities and the free (uncontrolled) decoherence
//! function.
//!
//! Times are in units of `1/ω_c` and frequencies in units of `ω_c`, so the
//! integrals below run over the reduced frequency `x = ω/ω_c`.

use crate::error::{domain, Error, Result};
use crate::quadrature::{integrate, QuadratureConfig};
use crate::scalar::{lit, to_f64, Real};
use crate::special::gamma;

/// Bath spectral density `I(ω) = ω^s ω_c^{1-s} e^{-ω/ω_c}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OhmicSpectrum<T> {
    s: T,
    omega_c: T,
}

impl<T: Real> OhmicSpectrum<T> {
    /// Spectrum with unit cutoff.
    pub fn new(s: T) -> Result<Self> {
        Self::with_cutoff(s, T::one())
    }

    /// `omega_c` only labels the unit system; every interface works in
    /// reduced units.
    pub fn with_cutoff(s: T, omega_c: T) -> Result<Self> {
        if !(s > T::zero()) || !s.is_finite() {
            return domain("s", to_f64(s), "Ohmicity must be finite and > 0");
        }
        if !(omega_c > T::zero()) || !omega_c.is_finite() {
            return domain("omega_c", to_f64(omega_c), "cutoff must be finite and > 0");
        }
        Ok(Self { s, omega_c })
    }

    pub fn s(&self) -> T {
        self.s
    }

    pub fn omega_c(&self) -> T {
        self.omega_c
    }

    /// `I(ω)/ω_c` at reduced frequency `x`.
    pub fn density(&self, x: T) -> Result<T> {
        if !(x >= T::zero()) {
            return domain("omega", to_f64(x), "frequency must be >= 0");
        }
        if x == T::zero() {
            return Ok(T::zero());
        }
        Ok(x.powf(self.s) * (-x).exp())
    }

    /// Free decoherence function Γ₀(τ), closed form.
    pub fn gamma0(&self, tau: T) -> Result<T> {
        check_time(tau)?;
        Ok(self.gamma0_closed(tau))
    }

    /// Γ₀(τ) by direct quadrature of `x^{s-2} e^{-x} (1 - cos τx)`.
    pub fn gamma0_quadrature(&self, tau: T, cfg: &QuadratureConfig<T>) -> Result<T> {
        check_time(tau)?;
        cfg.validate()?;
        if tau == T::zero() {
            return Ok(T::zero());
        }
        let two = lit::<T>(2.0);
        let a = self.s - two;
        let integrand = |x: T| {
            let h = (tau * x / two).sin();
            x.powf(a) * (-x).exp() * two * h * h
        };
        let upper = tail_cutoff(a, two, cfg.abs_tol);
        integrate(integrand, T::zero(), upper, Some(T::PI() / tau), cfg)
            .map_err(|e| self.convergence(tau, e.subdivisions, to_f64(e.abs_error)))
    }

    /// Rate γ₀(τ) = dΓ₀/dτ = Γ(s) sin(s·atan τ) / (1+τ²)^{s/2}.
    pub fn gamma0_rate(&self, tau: T) -> Result<T> {
        check_time(tau)?;
        let s = self.s;
        let theta = tau.atan();
        Ok(gamma(s) * (s * theta).sin() * (-(s / lit(2.0)) * (tau * tau).ln_1p()).exp())
    }

    /// First zero of γ₀ for super-Ohmic baths with `s > 2`, `tan(π/s)`.
    /// For `s <= 2` the rate never turns negative and `None` is returned.
    pub fn recoherence_onset(&self) -> Option<T> {
        if self.s > lit(2.0) {
            Some((T::PI() / self.s).tan())
        } else {
            None
        }
    }

    pub(crate) fn gamma0_closed(&self, tau: T) -> T {
        if tau == T::zero() {
            return T::zero();
        }
        let a = self.s - T::one();
        let log_half = (tau * tau).ln_1p() / lit(2.0);
        if a.abs() < lit(1e-6) {
            return log_half;
        }
        // 1 - cos(aθ)(1+τ²)^{-a/2} = -expm1(-aL) + e^{-aL}·2sin²(aθ/2), L = ln(1+τ²)/2
        let theta = tau.atan();
        let half_angle = (a * theta / lit(2.0)).sin();
        let damp = -a * log_half;
        let bracket = -damp.exp_m1() + damp.exp() * lit(2.0) * half_angle * half_angle;
        gamma(a) * bracket
    }

    pub(crate) fn convergence(&self, tau: T, subdivisions: usize, abs_error: f64) -> Error {
        Error::Convergence {
            s: to_f64(self.s),
            tau: to_f64(tau),
            subdivisions,
            abs_error,
        }
    }
}

/// Spectral density at reduced frequency `omega`.
pub fn spectral_density<T: Real>(spec: &OhmicSpectrum<T>, omega: T) -> Result<T> {
    spec.density(omega)
}

/// Free decoherence function Γ₀(τ).
///
/// The configuration is accepted for interface symmetry with the quadrature
/// path; the closed form does not consult it.
pub fn gamma0<T: Real>(spec: &OhmicSpectrum<T>, tau: T, cfg: &QuadratureConfig<T>) -> Result<T> {
    cfg.validate()?;
    spec.gamma0(tau)
}

pub fn gamma0_rate<T: Real>(
    spec: &OhmicSpectrum<T>,
    tau: T,
    cfg: &QuadratureConfig<T>,
) -> Result<T> {
    cfg.validate()?;
    spec.gamma0_rate(tau)
}

pub fn recoherence_onset<T: Real>(spec: &OhmicSpectrum<T>) -> Option<T> {
    spec.recoherence_onset()
}

pub(crate) fn check_time<T: Real>(tau: T) -> Result<()> {
    if !(tau >= T::zero()) || !tau.is_finite() {
        return domain("tau", to_f64(tau), "time must be finite and >= 0");
    }
    Ok(())
}

/// Upper limit `X` such that `bound · ∫_X^∞ x^a e^{-x} dx` stays below a
/// tenth of `abs_tol`.
pub(crate) fn tail_cutoff<T: Real>(a: T, bound: T, abs_tol: T) -> T {
    let target = abs_tol / lit(10.0);
    let mut x = (a + T::one()).max(T::one()) + T::one();
    loop {
        let tail = if a > T::zero() {
            x.powf(a) * (-x).exp() / (T::one() - a / x)
        } else {
            x.powf(a) * (-x).exp()
        };
        if bound * tail < target || x > lit(1e4) {
            return x;
        }
        x = x + T::one();
    }
}
