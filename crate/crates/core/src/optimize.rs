//! One-dimensional search helpers.

use crate::scalar::{lit, Real};

/// Golden-section search for a maximum of `f` on `[a, b]`, stopping once the
/// bracket is narrower than `tol`. Returns the best point seen and its value.
pub fn golden_max<T: Real, F: FnMut(T) -> T>(mut f: F, a: T, b: T, tol: T) -> (T, T) {
    let inv_phi = lit::<T>(0.618_033_988_749_894_9);
    let (mut lo, mut hi) = if a <= b { (a, b) } else { (b, a) };
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > tol {
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        }
    }
    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Bisection for the switch point of a predicate with `!pred(lo)` and
/// `pred(hi)`. Returns the final bracket.
pub fn bisect<T: Real, P: FnMut(T) -> bool>(mut pred: P, mut lo: T, mut hi: T, tol: T) -> (T, T) {
    let half = lit::<T>(0.5);
    while hi - lo > tol {
        let mid = half * (lo + hi);
        if !(mid > lo && mid < hi) {
            break;
        }
        if pred(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    (lo, hi)
}

/// `n` evenly spaced points from `a` to `b` inclusive.
pub fn linspace<T: Real>(a: T, b: T, n: usize) -> Vec<T> {
    match n {
        0 => Vec::new(),
        1 => vec![a],
        _ => {
            let step = (b - a) / lit((n - 1) as f64);
            (0..n)
                .map(|i| {
                    if i + 1 == n {
                        b
                    } else {
                        a + step * lit(i as f64)
                    }
                })
                .collect()
        }
    }
}
