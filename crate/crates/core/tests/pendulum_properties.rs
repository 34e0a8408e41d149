mod common;

use std::f64::consts::PI;

use common::*;
use pendulum_core::pendulum::wrap_angle;
use pendulum_core::{
    build_curve, classify, energy, jacobi_solution, residual_check, Error, PendulumConfig, Regime,
};
use proptest::prelude::*;

/// Configs with `c ∈ [−3, −0.1] ∪ [0.1, 3]` kept away from the critical energies.
fn generic_config() -> impl Strategy<Value = PendulumConfig> {
    let c = prop_oneof![-3.0f64..-0.1, 0.1f64..3.0];
    (c, -PI..PI, -6.0f64..6.0).prop_map(|(c, th, om)| PendulumConfig::new(c, th, om)).prop_filter(
        "near a critical energy",
        |cfg| {
            let e = energy(cfg);
            (e * e - 16.0 * cfg.c * cfg.c).abs() > 1e-3 * (1.0 + e * e)
        },
    )
}

/// Same coupling range, velocity bounded in pendulum units: `|θ'₀|/√|c| ≤ 5.5`.
///
/// Past that the curve approaches the free-rotor degeneration (two roots merge)
/// and `b + c·℘` cancels most of `℘`, so θ carries rounding noise that the
/// `1/h²` of the finite-difference check amplifies beyond its tolerance.
fn moderate_config() -> impl Strategy<Value = PendulumConfig> {
    let c = prop_oneof![-3.0f64..-0.1, 0.1f64..3.0];
    (c, -PI..PI, -5.5f64..5.5)
        .prop_map(|(c, th, v)| PendulumConfig::new(c, th, v * c.abs().sqrt()))
        .prop_filter("near a critical energy", |cfg| {
            let e = energy(cfg);
            (e * e - 16.0 * cfg.c * cfg.c).abs() > 1e-3 * (1.0 + e * e)
        })
}

fn angle_diff(a: f64, b: f64) -> f64 {
    wrap_angle(a - b).abs()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn initial_condition_round_trip(cfg in generic_config()) {
        let curve = build_curve(&cfg).unwrap();
        let (th, om) = curve.eval_state(0.0).unwrap();
        prop_assert!(angle_diff(th, cfg.theta0) <= 1e-8, "{} vs {}", th, cfg.theta0);
        prop_assert!((om - cfg.omega0).abs() <= 1e-8 * (1.0 + cfg.omega0.abs()), "{} vs {}", om, cfg.omega0);
    }

    #[test]
    fn closed_form_satisfies_the_ode(cfg in moderate_config(), t in 0.0f64..50.0) {
        let curve = build_curve(&cfg).unwrap();
        let r = residual_check(|s| curve.eval_state(s).unwrap().0, t, 1e-4, cfg.c);
        prop_assert!(r <= 1e-5, "residual {} at t = {}", r, t);
    }

    #[test]
    fn regime_matches_discriminant_sign(cfg in generic_config()) {
        let curve = build_curve(&cfg).unwrap();
        let e = curve.energy();
        let d = curve.discriminant();
        prop_assert_eq!(d > 0.0, e * e > 16.0 * cfg.c * cfg.c);
        let expected = if e * e > 16.0 * cfg.c * cfg.c { Regime::Rotation } else { Regime::Libration };
        prop_assert_eq!(classify(&curve), expected);
    }

    #[test]
    fn energy_is_conserved(cfg in generic_config(), t in 0.0f64..1000.0) {
        let curve = build_curve(&cfg).unwrap();
        let e = curve.energy();
        let drift = (curve.energy_at(t).unwrap() - e).abs();
        prop_assert!(drift <= 1e-8 * (1.0 + e.abs()), "drift {}", drift);
    }

    #[test]
    fn motion_is_periodic(cfg in generic_config(), t in 0.0f64..20.0) {
        let curve = build_curve(&cfg).unwrap();
        let period = curve.real_period().unwrap();
        let (a, _) = curve.eval_state(t).unwrap();
        let (b, _) = curve.eval_state(t + period).unwrap();
        prop_assert!(angle_diff(a, b) <= 1e-8);
    }
}

#[test]
fn published_invariants() {
    // (θ'₀, g₂, g₃, Δ)
    let published = [
        (1.0, 0.0833333, 0.74537, -15.0),
        (2.0, -2.66667, 1.03704, -48.0),
        (3.0, -3.91667, -0.328704, -63.0),
        (3.9, 0.332008, -0.668123, -12.0159),
        (4.1, 2.46801, 0.229064, 13.6161),
        (5.0, 20.0833, 17.0787, 225.0),
    ];
    for (om, g2, g3, delta) in published {
        let curve = build_curve(&PendulumConfig::new(-1.0, 0.0, om)).unwrap();
        let inv = curve.invariants();
        assert!(inv.g2.im == 0.0 && inv.g3.im == 0.0);
        assert!((inv.g2.re - g2).abs() <= 1e-4 * g2.abs(), "{om}: g2 {}", inv.g2.re);
        assert!((inv.g3.re - g3).abs() <= 1e-4 * g3.abs(), "{om}: g3 {}", inv.g3.re);
        assert!((curve.discriminant() - delta).abs() <= 1e-4 * delta.abs(), "{om}: {}", curve.discriminant());
    }
}

#[test]
fn published_initial_point_is_a_representative() {
    // g₁ = 1.4006i up to lattice translation and negation
    let curve = build_curve(&PendulumConfig::new(-1.0, 0.0, 1.0)).unwrap();
    let lat = curve.lattice().unwrap();
    let g1 = curve.g1().unwrap();
    let expected = c(0.0, 1.4006);
    // the scale is q = c = −1, so the torus point is −g₁
    let point = curve.torus_point(0.0).unwrap();
    assert!(lat.contains(point - expected, 1e-4) || lat.contains(point + expected, 1e-4), "{g1}");
}

#[test]
fn published_periods_are_lattice_vectors() {
    // periods and initial points as printed, for all six reference configs
    let published = [
        (1.0, [c(3.19248, 0.0), c(1.59624, 2.80121)], Some(c(0.0, 1.4006))),
        (2.0, [c(1.68575, 2.15652), c(-1.68575, 2.15652)], Some(c(-1.68575, 1.07826))),
        (3.0, [c(1.91099, -1.80446), c(1.91099, 1.80446)], Some(c(0.0, -0.902231))),
        (3.9, [c(0.0, -3.18149), c(2.9144, -1.59074)], None),
        (4.1, [c(2.85478, 0.0), c(0.0, 3.10293)], None),
        (5.0, [c(1.59624, 0.0), c(0.0, 2.80121)], None),
    ];
    for (om, periods, g1) in published {
        let curve = build_curve(&PendulumConfig::new(-1.0, 0.0, om)).unwrap();
        let lat = curve.lattice().unwrap();
        for w in periods {
            assert!(lat.contains(w, 1e-4), "θ'₀ = {om}: {w} vs {} {}", lat.omega1(), lat.omega2());
        }
        // the published pair generates the whole lattice
        let area = |a: pendulum_core::Complex, b: pendulum_core::Complex| (a.re * b.im - a.im * b.re).abs();
        let ratio = area(periods[0], periods[1]) / area(lat.omega1(), lat.omega2());
        assert!((ratio - 1.0).abs() < 1e-4, "θ'₀ = {om}: covolume ratio {ratio}");
        if let Some(g1) = g1 {
            let p = curve.torus_point(0.0).unwrap();
            assert!(lat.contains(p - g1, 1e-4) || lat.contains(p + g1, 1e-4), "θ'₀ = {om}: {p}");
        }
    }
}

#[test]
fn separatrix_and_equilibria() {
    let sep = build_curve(&PendulumConfig::new(-1.0, 0.0, 4.0)).unwrap();
    assert_eq!(sep.regime(), Regime::Separatrix);
    assert!(sep.lattice().is_none() && sep.g1().is_none());
    assert_eq!(sep.eval_state(1.0), Err(Error::SeparatrixUnsupported));
    let rest = build_curve(&PendulumConfig::new(-1.0, 0.0, 0.0)).unwrap();
    assert_eq!(rest.regime(), Regime::Equilibrium);
    assert_eq!(rest.eval_state(3.0).unwrap(), (0.0, 0.0));
    assert_eq!(build_curve(&PendulumConfig::new(0.0, 0.0, 1.0)).unwrap_err(), Error::ZeroCoupling);
}

#[test]
fn periods() {
    let p1 = build_curve(&PendulumConfig::new(-1.0, 0.0, 1.0)).unwrap().real_period().unwrap();
    assert!((p1 - 3.19248).abs() < 1e-4, "{p1}");
    let p6 = build_curve(&PendulumConfig::new(-1.0, 0.0, 5.0)).unwrap().real_period().unwrap();
    assert!((p6 - 1.59624).abs() < 1e-4, "{p6}");
    let small = build_curve(&PendulumConfig::new(-1.0, 0.0, 0.01)).unwrap().real_period().unwrap();
    assert!((small - PI).abs() < 1e-3, "{small}");
}

#[test]
fn sampled_energy_is_flat() {
    let curve = build_curve(&PendulumConfig::new(-1.0, 0.0, 2.0)).unwrap();
    let tr = curve.sample_trajectory(0.0, 10.0, 1001).unwrap();
    assert_eq!(tr.len(), 1001);
    assert!(tr.energy_drift() <= 1e-9 * (1.0 + curve.energy().abs()));
    assert!(tr.samples.windows(2).all(|w| w[0].t < w[1].t));
    let two = curve.sample_trajectory(0.0, 10.0, 2).unwrap();
    assert_eq!((two.samples[0].t, two.samples[1].t), (0.0, 10.0));
}

#[test]
fn jacobi_matches_rotating_closed_form() {
    let cfg = PendulumConfig::new(-1.0, 0.0, 5.0);
    let curve = build_curve(&cfg).unwrap();
    for i in 0..=1000 {
        let t = 0.01 * i as f64;
        let (th, _) = curve.eval_state(t).unwrap();
        let j = jacobi_solution(&cfg, t).unwrap();
        assert!(angle_diff(th, j) <= 1e-6, "t = {t}: {th} vs {j}");
    }
    assert_eq!(jacobi_solution(&cfg, 0.0).unwrap(), 0.0);
    assert_eq!(
        jacobi_solution(&PendulumConfig::new(-1.0, 0.5, 1.0), 1.0),
        Err(Error::UnsupportedInitialAngle(0.5))
    );
}

#[test]
fn general_coupling_residual() {
    // c ≠ −1, both signs, both regimes
    for (c_, th, om) in [(2.5, 0.3, 1.0), (0.2, -2.0, 2.0), (-0.4, 1.0, -0.7), (-2.7, 3.0, 5.5)] {
        let curve = build_curve(&PendulumConfig::new(c_, th, om)).unwrap();
        for t in [0.3, 2.9, 17.0] {
            let r = residual_check(|s| curve.eval_state(s).unwrap().0, t, 1e-4, c_);
            assert!(r <= 1e-5, "({c_}, {th}, {om}) t={t}: {r}");
        }
    }
}
