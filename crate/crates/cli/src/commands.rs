use std::path::Path;

use pendulum_core::ode::integrate_scalar;
use pendulum_core::pendulum::{jacobi_state, wrap_angle};
use pendulum_core::{
    build_curve, energy, residual_check, solve_matrix_pendulum, CMatrix, Complex, IntegratorSettings,
    PendulumConfig, PendulumCurve, Regime, Sample,
};
use serde::Serialize;
use serde_json::Value;

use crate::failure::{ExitKind, Failure};
use crate::matrix_input;
use crate::output::{to_csv, to_json, CurveRecord, Cx, Num, SampleRecord};
use crate::{Format, LatticeArgs, MatrixArgs, Method, TrajectoryArgs, ValidateArgs};

/// Step of the finite-difference residual reported by `validate`.
const RESIDUAL_H: f64 = 1e-4;

fn nonsingular(curve: PendulumCurve, hint: &str) -> Result<PendulumCurve, Failure> {
    match curve.regime() {
        Regime::Separatrix => Err(Failure::new(
            ExitKind::Degenerate,
            format!("configuration lies on the separatrix (E² = 16c², Δ = 0); {hint}"),
        )),
        _ => Ok(curve),
    }
}

fn times(t_max: f64, n: usize) -> Result<Vec<f64>, Failure> {
    if !(t_max > 0.0 && t_max.is_finite()) {
        return Err(Failure::usage("--t-max must be positive"));
    }
    if n < 2 {
        return Err(Failure::usage("--samples must be at least 2"));
    }
    let step = t_max / (n - 1) as f64;
    Ok((0..n).map(|i| if i == n - 1 { t_max } else { step * i as f64 }).collect())
}

fn oracle_settings(rtol: f64) -> Result<IntegratorSettings, Failure> {
    if !(rtol > 0.0) {
        return Err(Failure::usage("--oracle-rtol must be positive"));
    }
    let mut s = IntegratorSettings::with_tolerances(rtol, 1e-2 * rtol);
    s.max_steps = IntegratorSettings::moderate().max_steps;
    Ok(s)
}

pub fn curve(cfg: PendulumConfig) -> Result<String, Failure> {
    let curve = nonsingular(build_curve(&cfg)?, "no closed form exists there")?;
    Ok(to_json(&CurveRecord::new(&curve)))
}

/// Rebuilds the curve from `c, theta0, omega0` of a stored record and checks
/// every other field against the fresh computation.
pub fn replay(path: &Path) -> Result<String, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
    let stored: Value =
        serde_json::from_str(&text).map_err(|e| Failure::usage(format!("replay file is not JSON: {e}")))?;
    let field = |name: &str| {
        stored
            .get(name)
            .and_then(Value::as_f64)
            .ok_or_else(|| Failure::usage(format!("{name}: missing or not a number")))
    };
    let cfg = PendulumConfig::new(field("c")?, field("theta0")?, field("omega0")?);
    let out = curve(cfg)?;
    let fresh: Value = serde_json::from_str(&out).expect("own output parses");
    if let (Some(a), Some(b)) = (stored.as_object(), fresh.as_object()) {
        if let Some((key, _)) = b.iter().find(|(k, v)| a.get(*k) != Some(v)) {
            let mut f = Failure::new(ExitKind::Validation, format!("replay mismatch in field {key}"));
            f.stdout = Some(out);
            return Err(f);
        }
    }
    Ok(out)
}

pub fn trajectory(a: &TrajectoryArgs) -> Result<String, Failure> {
    let ts = times(a.t_max, a.samples)?;
    let cfg = PendulumConfig::new(a.cfg.c, a.cfg.theta0, a.cfg.omega0);
    let samples: Vec<Sample> = match a.method {
        Method::Weierstrass => {
            let curve = nonsingular(build_curve(&cfg)?, "use --method ode")?;
            ts.iter()
                .map(|&t| {
                    let (theta, omega) = curve.eval_state(t)?;
                    Ok(Sample { t, theta, omega, energy: state_energy(cfg.c, theta, omega) })
                })
                .collect::<Result<_, pendulum_core::Error>>()?
        }
        Method::Jacobi => ts
            .iter()
            .map(|&t| {
                let (theta, omega) = jacobi_state(&cfg, t)?;
                Ok(Sample { t, theta, omega, energy: state_energy(cfg.c, theta, omega) })
            })
            .collect::<Result<_, pendulum_core::Error>>()?,
        Method::Ode => {
            integrate_scalar(&cfg, a.t_max, &oracle_settings(a.oracle_rtol)?, &ts)?.trajectory.samples
        }
    };
    Ok(match a.format {
        Format::Csv => to_csv(&samples),
        Format::Json => to_json(&samples.iter().map(SampleRecord::from).collect::<Vec<_>>()),
    })
}

fn state_energy(c: f64, theta: f64, omega: f64) -> f64 {
    energy(&PendulumConfig::new(c, theta, omega))
}

#[derive(Debug, Serialize)]
struct ResidualStats {
    h: Num,
    max: Num,
    mean: Num,
}

#[derive(Debug, Serialize)]
struct ValidationReport {
    c: Num,
    theta0: Num,
    omega0: Num,
    t_max: Num,
    samples: usize,
    tol: Num,
    oracle_rtol: Num,
    max_deviation: Num,
    closed_form_energy_drift: Num,
    oracle_energy_drift: Num,
    oracle_steps: usize,
    oracle_rejected_steps: usize,
    residual: ResidualStats,
    passed: bool,
}

pub fn validate(a: &ValidateArgs) -> Result<String, Failure> {
    let ts = times(a.t_max, a.samples)?;
    let cfg = PendulumConfig::new(a.cfg.c, a.cfg.theta0, a.cfg.omega0);
    let curve = nonsingular(build_curve(&cfg)?, "only the oracle applies; use trajectory --method ode")?;
    let run = integrate_scalar(&cfg, a.t_max, &oracle_settings(a.oracle_rtol)?, &ts)?;

    let e0 = curve.energy();
    let mut deviation = 0.0f64;
    let mut closed_drift = 0.0f64;
    let (mut res_max, mut res_sum) = (0.0f64, 0.0);
    for s in &run.trajectory.samples {
        let (theta, omega) = curve.eval_state(s.t)?;
        deviation = deviation.max(wrap_angle(theta - s.theta).abs());
        closed_drift = closed_drift.max((state_energy(cfg.c, theta, omega) - e0).abs());
        let r =
            residual_check(|t| curve.eval_state(t).map(|x| x.0).unwrap_or(f64::NAN), s.t, RESIDUAL_H, cfg.c);
        res_max = res_max.max(r);
        res_sum += r;
    }
    let passed = deviation <= a.tol;
    let report = to_json(&ValidationReport {
        c: Num(cfg.c),
        theta0: Num(cfg.theta0),
        omega0: Num(cfg.omega0),
        t_max: Num(a.t_max),
        samples: a.samples,
        tol: Num(a.tol),
        oracle_rtol: Num(a.oracle_rtol),
        max_deviation: Num(deviation),
        closed_form_energy_drift: Num(closed_drift),
        oracle_energy_drift: Num(run.energy_drift),
        oracle_steps: run.steps_taken,
        oracle_rejected_steps: run.rejected_steps,
        residual: ResidualStats {
            h: Num(RESIDUAL_H),
            max: Num(res_max),
            mean: Num(res_sum / ts.len() as f64),
        },
        passed,
    });
    if passed {
        Ok(report)
    } else {
        let mut f = Failure::new(
            ExitKind::Validation,
            format!("max deviation {deviation:e} exceeds tolerance {:e}", a.tol),
        );
        f.stdout = Some(report);
        Err(f)
    }
}

fn flatten(m: &CMatrix) -> Vec<Cx> {
    m.as_slice().iter().copied().map(Cx).collect()
}

#[derive(Debug, Serialize)]
struct Eigenpair {
    index: usize,
    theta: Num,
    omega: Num,
    curve: CurveRecord,
}

#[derive(Debug, Serialize)]
struct MatrixSampleRecord {
    t: Num,
    /// `θ(t)`, row-major.
    theta: Vec<Cx>,
    /// `θ'(t)`, row-major.
    omega: Vec<Cx>,
    /// `exp(iθ(t))`, row-major.
    u: Vec<Cx>,
}

#[derive(Debug, Serialize)]
struct MatrixReport {
    n: usize,
    c: Num,
    commutator_norm: Num,
    periods: Vec<Num>,
    basis: Vec<Cx>,
    eigenpairs: Vec<Eigenpair>,
    samples: Vec<MatrixSampleRecord>,
}

pub fn matrix(a: &MatrixArgs) -> Result<String, Failure> {
    let text = std::fs::read_to_string(&a.input_file)
        .map_err(|e| Failure::usage(format!("cannot read {}: {e}", a.input_file.display())))?;
    let input = matrix_input::parse(&text).map_err(Failure::usage)?;
    let ts = times(a.t_max, a.samples)?;
    let sol = solve_matrix_pendulum(&input.theta0, &input.omega0, a.c, a.tol)?;
    let eigenpairs = sol
        .curves()
        .iter()
        .enumerate()
        .map(|(index, curve)| Eigenpair {
            index,
            theta: Num(curve.config().theta0),
            omega: Num(curve.config().omega0),
            curve: CurveRecord::new(curve),
        })
        .collect();
    let samples = ts
        .iter()
        .map(|&t| {
            let (theta, u) = sol.theta_at(t)?;
            let omega = sol.omega_at(t)?;
            Ok(MatrixSampleRecord {
                t: Num(t),
                theta: flatten(theta.matrix()),
                omega: flatten(omega.matrix()),
                u: flatten(&u),
            })
        })
        .collect::<Result<_, pendulum_core::Error>>()?;
    Ok(to_json(&MatrixReport {
        n: sol.dim(),
        c: Num(sol.c()),
        commutator_norm: Num(sol.commutator_norm()),
        periods: sol.periods().into_iter().map(Num).collect(),
        basis: flatten(sol.basis()),
        eigenpairs,
        samples,
    }))
}

#[derive(Debug, Serialize)]
struct PathPoint {
    t: Num,
    z: Cx,
}

#[derive(Debug, Serialize)]
struct LatticeReport {
    omega1: Cx,
    omega2: Cx,
    extent: u32,
    /// `nω₁ + mω₂`, `n` outer, `m` inner, both ascending.
    points: Vec<Cx>,
    /// `0, ω₁, ω₁ + ω₂, ω₂`.
    parallelogram: [Cx; 4],
    g1: Cx,
    period: Num,
    /// `z(t) = q(t + g₁)` over one real period.
    path: Vec<PathPoint>,
}

pub fn lattice(a: &LatticeArgs) -> Result<String, Failure> {
    let cfg = PendulumConfig::new(a.cfg.c, a.cfg.theta0, a.cfg.omega0);
    let curve = build_curve(&cfg)?;
    let lat = curve.require_nonsingular()?;
    let (w1, w2) = (lat.omega1(), lat.omega2());
    let period = curve.period().expect("non-singular curve has a period");
    let ts = times(period, a.samples)?;
    let e = a.extent as i64;
    let points = (-e..=e).flat_map(|n| (-e..=e).map(move |m| Cx(w1 * n as f64 + w2 * m as f64))).collect();
    let path = ts
        .iter()
        .map(|&t| PathPoint { t: Num(t), z: Cx(curve.torus_point(t).expect("non-singular")) })
        .collect();
    Ok(to_json(&LatticeReport {
        omega1: Cx(w1),
        omega2: Cx(w2),
        extent: a.extent,
        points,
        parallelogram: [Cx(Complex::new(0.0, 0.0)), Cx(w1), Cx(w1 + w2), Cx(w2)],
        g1: Cx(curve.g1().expect("non-singular")),
        period: Num(period),
        path,
    }))
}
