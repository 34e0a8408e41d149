mod common;

use common::REFERENCE_OMEGAS;
use pendulum_core::ode::integrate_matrix;
use pendulum_core::pendulum::wrap_angle;
use pendulum_core::{
    build_curve, integrate_scalar, jacobi_solution, residual_check, solve_matrix_pendulum, CMatrix, Complex,
    HermitianMatrix, IntegratorSettings, PendulumConfig,
};

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
}

fn rotation(angle: f64) -> CMatrix {
    let (s, c) = angle.sin_cos();
    let r = |x: f64| Complex::new(x, 0.0);
    CMatrix::from_rows(2, vec![r(c), r(-s), r(s), r(c)]).unwrap()
}

#[test]
fn closed_form_matches_oracle_on_reference_configs() {
    let times = linspace(0.0, 100.0, 200);
    for om in REFERENCE_OMEGAS {
        let cfg = PendulumConfig::new(-1.0, 0.0, om);
        let curve = build_curve(&cfg).unwrap();
        let run = integrate_scalar(&cfg, 100.0, &IntegratorSettings::validation(), &times).unwrap();
        let worst = run
            .trajectory
            .samples
            .iter()
            .map(|s| wrap_angle(curve.eval_state(s.t).unwrap().0 - s.theta).abs())
            .fold(0.0, f64::max);
        assert!(worst <= 1e-6, "θ'₀ = {om}: {worst}");
    }
}

#[test]
fn lifted_angles_agree_for_rotation() {
    let cfg = PendulumConfig::new(-1.0, 0.0, 4.1);
    let curve = build_curve(&cfg).unwrap();
    let times = linspace(0.0, 50.0, 101);
    let run = integrate_scalar(&cfg, 50.0, &IntegratorSettings::validation(), &times).unwrap();
    for (t, lifted) in times.iter().zip(&run.lifted) {
        let (th, _) = curve.eval_lifted(*t).unwrap();
        assert!((th - lifted).abs() <= 1e-6, "t = {t}: {th} vs {lifted}");
    }
}

#[test]
fn general_coupling_against_oracle() {
    for (c, th, om) in [(2.0, 0.5, -1.0), (0.3, 2.0, 0.4), (-2.5, -1.0, 6.0), (1.5, -3.0, 0.1)] {
        let cfg = PendulumConfig::new(c, th, om);
        let curve = build_curve(&cfg).unwrap();
        let times = linspace(0.0, 20.0, 81);
        let run = integrate_scalar(&cfg, 20.0, &IntegratorSettings::validation(), &times).unwrap();
        for s in &run.trajectory.samples {
            let (a, w) = curve.eval_state(s.t).unwrap();
            assert!(wrap_angle(a - s.theta).abs() <= 1e-6, "{cfg:?} t = {}", s.t);
            assert!((w - s.omega).abs() <= 1e-6 * (1.0 + w.abs()), "{cfg:?} t = {}", s.t);
        }
    }
}

#[test]
fn second_reference_config_trajectory() {
    let cfg = PendulumConfig::new(-1.0, 0.0, 2.0);
    let curve = build_curve(&cfg).unwrap();
    let tr = curve.sample_trajectory(0.0, 10.0, 101).unwrap();
    let times: Vec<f64> = tr.samples.iter().map(|s| s.t).collect();
    let run = integrate_scalar(&cfg, 10.0, &IntegratorSettings::validation(), &times).unwrap();
    for (a, b) in tr.samples.iter().zip(&run.trajectory.samples) {
        assert!(wrap_angle(a.theta - b.theta).abs() <= 1e-6);
    }
}

#[test]
fn fifth_order_convergence() {
    let cfg = PendulumConfig::new(-1.0, 0.0, 1.0);
    let exact = build_curve(&cfg).unwrap().eval_state(10.0).unwrap().0;
    let runs: Vec<(f64, f64)> = [1e-6, 1e-8, 1e-10, 1e-12]
        .iter()
        .map(|&tol| {
            let s = IntegratorSettings::with_tolerances(tol, tol);
            let run = integrate_scalar(&cfg, 10.0, &s, &[10.0]).unwrap();
            let err = (run.trajectory.samples[0].theta - exact).abs();
            (run.steps_taken as f64, err)
        })
        .collect();
    for w in runs.windows(2) {
        let ((n0, e0), (n1, e1)) = (w[0], w[1]);
        let order = (e0 / e1).ln() / (n1 / n0).ln();
        assert!((3.5..=7.0).contains(&order), "observed order {order} from {runs:?}");
    }
    // pre-asymptotic at loose tolerances, close to five once the step is small
    let (n0, e0) = runs[runs.len() - 2];
    let (n1, e1) = runs[runs.len() - 1];
    let order = (e0 / e1).ln() / (n1 / n0).ln();
    assert!((4.5..=5.5).contains(&order), "asymptotic order {order}");
}

#[test]
fn time_reversal_returns_to_start() {
    // forward to T, then the reversed motion (θ, −ω) for another T
    let cfg = PendulumConfig::new(-1.0, 0.3, 1.2);
    let s = IntegratorSettings::validation();
    let fwd = integrate_scalar(&cfg, 10.0, &s, &[10.0]).unwrap();
    let end = fwd.trajectory.samples[0];
    let back =
        integrate_scalar(&PendulumConfig::new(-1.0, end.theta, -end.omega), 10.0, &s, &[10.0]).unwrap();
    let home = back.trajectory.samples[0];
    let tol = 10.0 * s.rel_tol;
    assert!((home.theta - cfg.theta0).abs() <= tol, "{}", home.theta - cfg.theta0);
    assert!((home.omega + cfg.omega0).abs() <= tol, "{}", home.omega + cfg.omega0);
}

#[test]
fn jacobi_matches_oracle_over_half_period() {
    let cfg = PendulumConfig::new(-1.0, 0.0, 1.0);
    let half = build_curve(&cfg).unwrap().real_period().unwrap() / 2.0;
    let times = linspace(0.0, half, 101);
    let run = integrate_scalar(&cfg, half, &IntegratorSettings::validation(), &times).unwrap();
    for s in &run.trajectory.samples {
        let j = jacobi_solution(&cfg, s.t).unwrap();
        assert!((j - s.theta).abs() <= 1e-6, "t = {}: {j} vs {}", s.t, s.theta);
    }
}

#[test]
fn residual_of_oracle_interpolant() {
    let cfg = PendulumConfig::new(-1.0, 0.0, 1.0);
    let (t, h) = (3.7, 1e-2);
    let run = integrate_scalar(&cfg, 5.0, &IntegratorSettings::validation(), &[t - h, t, t + h]).unwrap();
    let pick = |x: f64| {
        let i = [t - h, t, t + h].iter().position(|&y| y == x).unwrap();
        run.trajectory.samples[i].theta
    };
    // O(h²) truncation plus interpolation error amplified by 1/h²
    assert!(residual_check(pick, t, h, -1.0) <= 1e-3);
}

#[test]
fn matrix_oracle_matches_closed_form() {
    let r = rotation(0.6);
    let theta0 = HermitianMatrix::from_eigen(&r, &[0.3, -0.2]);
    let omega0 = HermitianMatrix::from_eigen(&r, &[1.0, 2.0]);
    let sol = solve_matrix_pendulum(&theta0, &omega0, -1.0, 1e-10).unwrap();
    let times = linspace(0.0, 50.0, 51);
    let run =
        integrate_matrix(&theta0, &omega0, -1.0, 50.0, &IntegratorSettings::validation(), &times).unwrap();
    for s in &run.samples {
        let (closed, _) = sol.theta_at(s.t).unwrap();
        let d = (closed.matrix() - s.theta.matrix()).frobenius();
        assert!(d <= 1e-6, "t = {}: {d}", s.t);
    }
    assert!(run.hermiticity_drift < 1e-12);
    assert!(run.energy_drift < 1e-7);
}

#[test]
fn matrix_oracle_diagonal_and_rest() {
    let zero = HermitianMatrix::zeros(3);
    let run = integrate_matrix(&zero, &zero, -1.0, 10.0, &IntegratorSettings::validation(), &[10.0]).unwrap();
    assert_eq!(run.samples[0].theta.frobenius(), 0.0);
    assert_eq!(run.samples[0].omega.frobenius(), 0.0);
}

#[test]
fn matrix_oracle_accepts_non_commuting_data() {
    let theta0 = HermitianMatrix::from_real_diag(&[0.1, -0.2]);
    let omega0 = HermitianMatrix::new(
        CMatrix::from_rows(
            2,
            vec![
                Complex::new(0.0, 0.0),
                Complex::new(0.3, 0.1),
                Complex::new(0.3, -0.1),
                Complex::new(0.5, 0.0),
            ],
        )
        .unwrap(),
        1e-12,
    )
    .unwrap();
    let run =
        integrate_matrix(&theta0, &omega0, -1.0, 5.0, &IntegratorSettings::validation(), &[5.0]).unwrap();
    assert!(run.samples[0].theta.frobenius().is_finite());
    assert!(solve_matrix_pendulum(&theta0, &omega0, -1.0, 1e-10).is_err());
}
