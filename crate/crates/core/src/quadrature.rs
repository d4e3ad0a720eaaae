//! Globally adaptive Gauss–Kronrod (7/15) quadrature on finite intervals.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{domain, Result};
use crate::scalar::{lit, to_f64, Real};

/// Tolerances for the quadrature paths.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig<T> {
    pub rel_tol: T,
    pub abs_tol: T,
    pub max_subdivisions: usize,
}

impl<T: Real> Default for QuadratureConfig<T> {
    fn default() -> Self {
        Self {
            rel_tol: lit(1e-10),
            abs_tol: lit(1e-12),
            max_subdivisions: 10_000,
        }
    }
}

impl<T: Real> QuadratureConfig<T> {
    pub fn new(rel_tol: T, abs_tol: T, max_subdivisions: usize) -> Result<Self> {
        let cfg = Self {
            rel_tol,
            abs_tol,
            max_subdivisions,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > T::zero()) {
            return domain("rel_tol", to_f64(self.rel_tol), "must be > 0");
        }
        if !(self.abs_tol > T::zero()) {
            return domain("abs_tol", to_f64(self.abs_tol), "must be > 0");
        }
        if self.max_subdivisions < 1 {
            return domain("max_subdivisions", 0.0, "must be >= 1");
        }
        Ok(())
    }
}

#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
// Gauss weights for the odd-indexed Kronrod nodes (XGK[1], XGK[3], XGK[5], XGK[7]).
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Outcome of an integration that failed to meet its tolerance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NotConverged<T> {
    pub estimate: T,
    pub abs_error: T,
    pub subdivisions: usize,
}

#[derive(Debug, Clone, Copy)]
struct Panel<T> {
    a: T,
    b: T,
    value: T,
    error: T,
}

impl<T: Real> PartialEq for Panel<T> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl<T: Real> Eq for Panel<T> {}
impl<T: Real> PartialOrd for Panel<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T: Real> Ord for Panel<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .partial_cmp(&other.error)
            .unwrap_or(Ordering::Equal)
            .then_with(|| other.a.partial_cmp(&self.a).unwrap_or(Ordering::Equal))
    }
}

fn kronrod15<T: Real, F: Fn(T) -> T>(f: &F, a: T, b: T) -> Panel<T> {
    let half = lit::<T>(0.5);
    let center = half * (a + b);
    let half_len = half * (b - a);
    let fc = f(center);
    let mut kron = fc * lit(WGK[7]);
    let mut gauss = fc * lit(WG[3]);
    for j in 0..7 {
        let dx = half_len * lit(XGK[j]);
        let pair = f(center - dx) + f(center + dx);
        kron = kron + pair * lit(WGK[j]);
        if j % 2 == 1 {
            gauss = gauss + pair * lit(WG[j / 2]);
        }
    }
    Panel {
        a,
        b,
        value: kron * half_len,
        error: ((kron - gauss) * half_len).abs(),
    }
}

/// Integrates `f` over `[a, b]`.
///
/// The interval is first cut into equal panels no wider than `max_panel`
/// (pass `None` for a single panel); the panel with the largest error
/// estimate is then bisected until the summed error is below
/// `max(abs_tol, rel_tol * |I|)`.
pub fn integrate<T, F>(
    f: F,
    a: T,
    b: T,
    max_panel: Option<T>,
    cfg: &QuadratureConfig<T>,
) -> std::result::Result<T, NotConverged<T>>
where
    T: Real,
    F: Fn(T) -> T,
{
    if !(b > a) {
        return Ok(T::zero());
    }
    let initial = match max_panel {
        Some(w) if w > T::zero() => ((b - a) / w).ceil().to_usize().unwrap_or(1).max(1),
        _ => 1,
    };
    let width = (b - a) / lit(initial as f64);
    let mut heap = BinaryHeap::with_capacity(initial * 2);
    for i in 0..initial {
        let lo = a + width * lit(i as f64);
        let hi = if i + 1 == initial {
            b
        } else {
            a + width * lit((i + 1) as f64)
        };
        heap.push(kronrod15(&f, lo, hi));
    }
    let mut count = initial;
    let totals = |heap: &BinaryHeap<Panel<T>>| {
        heap.iter().fold((T::zero(), T::zero()), |(v, e), p| {
            (v + p.value, e + p.error)
        })
    };
    let (mut value, mut error) = totals(&heap);

    loop {
        let target = cfg.abs_tol.max(cfg.rel_tol * value.abs());
        if error <= target {
            // Running sums drift; confirm with a fresh summation.
            let (v, e) = totals(&heap);
            if e <= cfg.abs_tol.max(cfg.rel_tol * v.abs()) {
                return Ok(v);
            }
            value = v;
            error = e;
        }
        if count >= cfg.max_subdivisions {
            return Err(NotConverged {
                estimate: value,
                abs_error: error,
                subdivisions: count,
            });
        }
        let worst = heap.pop().expect("nonempty panel set");
        let mid = lit::<T>(0.5) * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b) {
            // Panel cannot be split further in this precision.
            return Err(NotConverged {
                estimate: value,
                abs_error: error,
                subdivisions: count,
            });
        }
        let left = kronrod15(&f, worst.a, mid);
        let right = kronrod15(&f, mid, worst.b);
        value = value - worst.value + left.value + right.value;
        error = error - worst.error + left.error + right.error;
        heap.push(left);
        heap.push(right);
        count += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_for_low_degree_polynomials() {
        let cfg = QuadratureConfig::<f64>::default();
        for k in 0..=22 {
            let got = integrate(|x: f64| x.powi(k), -1.0, 1.0, None, &cfg).unwrap();
            let want = if k % 2 == 0 {
                2.0 / (k as f64 + 1.0)
            } else {
                0.0
            };
            assert!((got - want).abs() < 1e-14, "degree {k}: {got} vs {want}");
        }
    }

    #[test]
    fn oscillatory_integrand_with_panel_cap() {
        let cfg = QuadratureConfig::<f64>::default();
        let w = 40.0;
        let got = integrate(
            |x: f64| (w * x).cos() * (-x).exp(),
            0.0,
            50.0,
            Some(std::f64::consts::PI / w),
            &cfg,
        )
        .unwrap();
        // ∫₀^∞ e^{-x} cos(wx) dx = 1/(1+w²); tail beyond 50 is below 1e-21.
        let want = 1.0 / (1.0 + w * w);
        assert!((got - want).abs() < 1e-12);
    }

    #[test]
    fn sqrt_endpoint_behaviour() {
        let cfg = QuadratureConfig::<f64>::default();
        let got = integrate(|x: f64| x.sqrt(), 0.0, 1.0, None, &cfg).unwrap();
        assert!((got - 2.0 / 3.0).abs() < 1e-11);
    }

    #[test]
    fn reports_non_convergence() {
        let cfg = QuadratureConfig::new(1e-15, 1e-30, 3).unwrap();
        let err = integrate(|x: f64| (1.0 / x).sin(), 1e-3, 1.0, None, &cfg).unwrap_err();
        assert_eq!(err.subdivisions, 3);
    }

    #[test]
    fn rejects_bad_config() {
        assert!(QuadratureConfig::new(0.0, 1e-12, 10).is_err());
        assert!(QuadratureConfig::new(1e-10, -1.0, 10).is_err());
        assert!(QuadratureConfig::new(1e-10, 1e-12, 0).is_err());
    }
}
