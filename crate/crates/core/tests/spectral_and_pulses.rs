use dd_discord::optimize::bisect;
use dd_discord::{
    controlled_gamma_oracle, ControlledDecoherence, OhmicSpectrum, PulseSchedule, QuadratureConfig,
};
use proptest::prelude::*;

const S_SET: [f64; 6] = [0.5, 1.0, 1.01, 2.0, 3.0, 4.0];
const TAU_SET: [f64; 6] = [0.1, 0.5, 1.0, 3.0, 10.0, 25.0];

fn spec(s: f64) -> OhmicSpectrum<f64> {
    OhmicSpectrum::new(s).unwrap()
}

#[test]
fn closed_form_matches_quadrature() {
    let cfg = QuadratureConfig::default();
    for s in S_SET {
        for tau in TAU_SET {
            let closed = spec(s).gamma0(tau).unwrap();
            let quad = spec(s).gamma0_quadrature(tau, &cfg).unwrap();
            let tol = 1e-8_f64.max(1e-8 * closed.abs());
            assert!(
                (closed - quad).abs() <= tol,
                "s={s} τ={tau}: {closed} vs {quad}"
            );
        }
    }
}

#[test]
fn monotone_below_two_and_peaked_above() {
    let n = 1000;
    let h = 25.0 / n as f64;
    let grid: Vec<f64> = (0..=n).map(|i| i as f64 * h).collect();
    for s in [0.3, 0.5, 1.0, 1.5, 2.0] {
        let g: Vec<f64> = grid.iter().map(|&t| spec(s).gamma0(t).unwrap()).collect();
        assert!(g.windows(2).all(|w| w[1] >= w[0]), "s={s} not monotone");
    }
    for s in [2.5, 3.0, 4.0, 6.0] {
        let g: Vec<f64> = grid.iter().map(|&t| spec(s).gamma0(t).unwrap()).collect();
        let argmax = (0..g.len())
            .max_by(|&a, &b| g[a].partial_cmp(&g[b]).unwrap())
            .unwrap();
        let onset = spec(s).recoherence_onset().unwrap();
        assert!(
            (grid[argmax] - onset).abs() <= h,
            "s={s}: argmax {} vs {onset}",
            grid[argmax]
        );
    }
}

#[test]
fn rate_matches_finite_differences() {
    let h = 1e-5;
    for s in S_SET {
        for tau in TAU_SET {
            let sp = spec(s);
            let fd = (sp.gamma0(tau + h).unwrap() - sp.gamma0(tau - h).unwrap()) / (2.0 * h);
            let rate = sp.gamma0_rate(tau).unwrap();
            assert!((fd - rate).abs() < 1e-6, "s={s} τ={tau}: {rate} vs {fd}");
        }
    }
}

#[test]
fn onset_is_first_sign_change_of_rate() {
    for s in [2.5, 3.0, 4.0, 6.0] {
        let sp = spec(s);
        let negative = |t: f64| sp.gamma0_rate(t).unwrap() < 0.0;
        let first = (1..=2500)
            .map(|i| i as f64 * 0.01)
            .find(|&t| negative(t))
            .unwrap();
        let (lo, hi) = bisect(negative, first - 0.01, first, 1e-9);
        let root = 0.5 * (lo + hi);
        assert!(
            (root - sp.recoherence_onset().unwrap()).abs() < 1e-8,
            "s={s}"
        );
    }
}

proptest! {
    #[test]
    fn gamma0_nonnegative(s in 0.05f64..8.0, tau in 0.0f64..100.0) {
        prop_assert!(spec(s).gamma0(tau).unwrap() >= 0.0);
    }

    #[test]
    fn controlled_gamma_nonnegative_and_continuous(
        s in 0.2f64..6.0,
        dt in 0.1f64..4.0,
        frac in 0.0f64..1.0,
    ) {
        let sched = PulseSchedule::periodic(dt, 25.0).unwrap();
        let ev = ControlledDecoherence::new(spec(s), sched.clone());
        let tau = frac * 25.0;
        prop_assert!(ev.eval(tau).unwrap() >= 0.0);
        for &t in sched.instants() {
            let at = ev.eval(t).unwrap();
            let after = ev.eval((t * (1.0 + 4.0 * f64::EPSILON)).min(25.0)).unwrap();
            prop_assert!((at - after).abs() < 1e-10, "jump at t={}: {} vs {}", t, at, after);
        }
    }
}

#[test]
fn branch_continuity_is_exact_in_the_limit() {
    // Evaluate the n-th branch formula directly at τ = t_n and compare with
    // the (n-1)-th branch the evaluator selects there.
    for s in [0.5, 1.0, 4.0] {
        let sp = spec(s);
        let sched = PulseSchedule::periodic(0.7, 10.0).unwrap();
        let t = sched.instants().to_vec();
        let ev = ControlledDecoherence::new(sp, sched);
        let g = |x: f64| sp.gamma0(x).unwrap();
        for n in 1..=t.len() {
            let tau = t[n - 1];
            let mut v = 0.0;
            for m in 1..=n {
                let sgn = if (m + 1) % 2 == 0 { 1.0 } else { -1.0 };
                v += 2.0 * sgn * g(t[m - 1]);
                for j in 1..m {
                    let sgn = if (m - 1 + j) % 2 == 0 { 1.0 } else { -1.0 };
                    v += 4.0 * sgn * g(t[m - 1] - t[j - 1]);
                }
                let sgn = if (m + n) % 2 == 0 { 1.0 } else { -1.0 };
                v += 2.0 * sgn * g(tau - t[m - 1]);
            }
            v += if n % 2 == 0 { g(tau) } else { -g(tau) };
            assert!((v - ev.eval(tau).unwrap()).abs() < 1e-10, "s={s} n={n}");
        }
    }
}

#[test]
fn oracle_agrees_on_sparse_schedules() {
    let cfg = QuadratureConfig::default();
    for s in [0.5, 1.0, 4.0] {
        let sched = PulseSchedule::new(vec![0.4, 1.1, 2.5, 2.6], 4.0).unwrap();
        let ev = ControlledDecoherence::new(spec(s), sched.clone());
        for tau in [0.2, 0.4, 0.9, 2.55, 2.6, 3.9] {
            let oracle = controlled_gamma_oracle(&spec(s), &sched, tau, &cfg).unwrap();
            assert!(
                (oracle - ev.eval(tau).unwrap()).abs() < 1e-6,
                "s={s} τ={tau}"
            );
        }
    }
}

#[test]
fn single_precision_pipeline() {
    let sp = OhmicSpectrum::<f32>::new(1.0).unwrap();
    let sched = PulseSchedule::<f32>::periodic(0.5, 5.0).unwrap();
    let ev = ControlledDecoherence::new(sp, sched);
    let exact = ControlledDecoherence::new(spec(1.0), PulseSchedule::periodic(0.5, 5.0).unwrap());
    for tau in [0.3_f32, 1.2, 4.9] {
        let lo = ev.eval(tau).unwrap() as f64;
        let hi = exact.eval(tau as f64).unwrap();
        assert!((lo - hi).abs() < 1e-4);
    }
}
