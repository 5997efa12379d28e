mod common;

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use common::simpson_pieces;
use dqdgate::error::Error;
use dqdgate::harness::linspace;
use dqdgate::inverse_engineering::ExchangeProfile;
use dqdgate::pulse_designs::{
    bgate_rectangular, fsim_geometric, fsim_polynomial, fsim_rectangular, optimize_eta, polynomial_coefficients,
    PolynomialLayout, PulseSchedule,
};
use proptest::prelude::*;

const PANELS: usize = 4000;

fn integral(s: &PulseSchedule, f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    simpson_pieces(f, a, b, &s.breakpoints(), PANELS)
}

fn fsim_residual(s: &PulseSchedule, swap: f64, phase: f64, n: u32) -> f64 {
    let t = s.duration;
    let w = 2.0 * n as f64 * PI / t;
    let flat = integral(s, |x| s.sample(x).envelope, 0.0, t);
    let cosine = integral(s, |x| s.sample(x).envelope * (w * x).cos(), 0.0, t);
    (flat - 2.0 * swap).abs().max((cosine + phase / 2.0).abs())
}

#[test]
fn fsim_constraints_on_grid() {
    let t = 45e-9;
    for swap in linspace(-FRAC_PI_2, FRAC_PI_2, 5) {
        for phase in linspace(-PI, PI, 5) {
            for n in [1, 2, 5] {
                let rect = fsim_rectangular(swap, phase, t, n).unwrap();
                assert!(fsim_residual(&rect, swap, phase, n) < 1e-8);
                for layout in [PolynomialLayout::Repeated, PolynomialLayout::SingleSpan] {
                    match fsim_polynomial(swap, phase, t, n, -1.0 / 3.0, layout) {
                        Ok(p) => assert!(fsim_residual(&p, swap, phase, n) < 1e-8, "{swap} {phase} {n} {layout:?}"),
                        Err(Error::Singular(_)) => {}
                        Err(e) => panic!("{e}"),
                    }
                }
            }
        }
    }
}

#[test]
fn geometric_constraints_on_grid() {
    let t = 158e-9;
    for swap in linspace(-FRAC_PI_2, FRAC_PI_2, 5) {
        for phase in linspace(-PI, PI, 5) {
            let s = match fsim_geometric(swap, phase, t) {
                Ok(s) => s,
                Err(_) => {
                    assert!(swap.cos().abs() < 1e-12, "only cos(vartheta) = 0 may fail");
                    continue;
                }
            };
            let j = |x: f64| s.sample(x).envelope;
            let parts = [
                integral(&s, j, 0.0, t / 4.0),
                integral(&s, j, t / 4.0, 3.0 * t / 4.0),
                integral(&s, j, 3.0 * t / 4.0, t),
            ];
            for (got, want) in parts.iter().zip([FRAC_PI_2, PI, FRAC_PI_2]) {
                assert!((got - want).abs() < 1e-8, "{swap} {phase}: {got} vs {want}");
            }
            let total_exchange = integral(&s, |x| s.sample(x).exchange, 0.0, t);
            assert!((total_exchange + phase).abs() < 1e-8, "{total_exchange} vs {}", -phase);
            let psi: Vec<f64> = s.segments.iter().map(|g| g.phase).collect();
            assert_eq!(psi, vec![FRAC_PI_2, swap - FRAC_PI_2, swap - FRAC_PI_2, FRAC_PI_2]);
        }
    }
}

#[test]
fn bgate_windows_carry_minus_four_gamma() {
    let t = 76e-9;
    let s = bgate_rectangular(t, 2.0 * PI * 20.5e9, 2.0 * PI * 20.7e9).unwrap();
    let j = |x: f64| s.schedule.sample(x).envelope;
    let first = integral(&s.schedule, j, 0.0, s.split);
    let second = integral(&s.schedule, j, s.split, t);
    assert!((first + 4.0 * FRAC_PI_4).abs() < 1e-8);
    assert!((second + 4.0 * PI / 8.0).abs() < 1e-8);
    assert!((s.split - 2.0 * t / 3.0).abs() < 1e-20);
}

#[test]
fn polynomial_reference_coefficients() {
    let (a, b) = polynomial_coefficients(FRAC_PI_4, FRAC_PI_2, 1, -1.0 / 3.0).unwrap();
    assert!((a + 226.19058956449632).abs() < 1e-9 * a.abs());
    assert!((b + 1.1277812864287293).abs() < 1e-12);
    assert!(matches!(polynomial_coefficients(FRAC_PI_4, FRAC_PI_2, 1, 0.0), Err(Error::Singular(_))));
}

#[test]
fn sensitivity_minimum_near_minus_one_third() {
    let scan = optimize_eta(FRAC_PI_4, FRAC_PI_2, &linspace(-1.0, 1.0, 201)).unwrap();
    assert!((scan.best_eta + 1.0 / 3.0).abs() <= 0.01, "{}", scan.best_eta);
    // q_s falls towards the minimum from both grid ends
    let finite: Vec<(f64, f64)> =
        scan.etas.iter().zip(&scan.sensitivity).filter_map(|(e, q)| q.map(|q| (*e, q))).collect();
    let left: Vec<f64> = finite.iter().filter(|p| p.0 < -0.5).map(|p| p.1).collect();
    assert!(left.windows(2).all(|w| w[1] <= w[0]));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rectangular_exact_integrals(swap in -1.5f64..1.5, phase in -3.1f64..3.1, n in 1u32..8, t in 1e-8f64..1e-6) {
        let s = fsim_rectangular(swap, phase, t, n).unwrap();
        prop_assert!((s.envelope_integral(t) - 2.0 * swap).abs() < 1e-10);
        prop_assert!((s.exchange_integral(t) + phase).abs() < 1e-10);
        prop_assert!((s.segments.first().unwrap().start).abs() == 0.0);
        prop_assert!(s.segments.windows(2).all(|w| (w[0].end - w[1].start).abs() <= 1e-12 * t));
        prop_assert!((s.segments.last().unwrap().end - t).abs() <= 1e-15 * t);
    }

    #[test]
    fn exchange_limit_scales_duration(swap in 0.1f64..1.5, phase in -3.0f64..3.0, jmax in 1e6f64..1e9) {
        let unit = fsim_rectangular(swap, phase, 1.0, 1).unwrap();
        let t = unit.duration_for_exchange_limit(jmax);
        let s = fsim_rectangular(swap, phase, t, 1).unwrap();
        prop_assert!((2.0 * s.peak_envelope() - jmax).abs() < 1e-9 * jmax);
    }

    #[test]
    fn polynomial_constraints_random(swap in 0.2f64..1.5, phase in -3.0f64..3.0, eta in -0.9f64..-0.1, n in 1u32..4) {
        if let Ok(s) = fsim_polynomial(swap, phase, 1.0, n, eta, PolynomialLayout::Repeated) {
            prop_assert!(fsim_residual(&s, swap, phase, n) < 1e-8);
        }
    }
}
