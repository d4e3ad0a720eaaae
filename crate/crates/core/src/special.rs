//! Euler gamma function.

use crate::scalar::{lit, Real};

const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Gamma function on the real line, analytically continued to negative
/// non-integer arguments by reflection. Returns NaN at the poles.
pub fn gamma<T: Real>(x: T) -> T {
    let half = lit::<T>(0.5);
    if x < half {
        if x == x.floor() {
            return T::nan();
        }
        // Γ(x)Γ(1-x) = π / sin(πx)
        let pi = T::PI();
        return pi / ((pi * x).sin() * gamma(T::one() - x));
    }
    let x = x - T::one();
    let mut acc = lit::<T>(LANCZOS_COEF[0]);
    for (i, &c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        acc = acc + lit::<T>(c) / (x + lit(i as f64));
    }
    let t = x + lit(LANCZOS_G + 0.5);
    (lit::<T>(2.0) * T::PI()).sqrt() * t.powf(x + half) * (-t).exp() * acc
}
