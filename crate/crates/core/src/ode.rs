//! Dormand–Prince 5(4) integrator used as an independent reference for the
//! closed-form solution.
//!
//! Step control is the PI controller of Hairer–Nørsett–Wanner (`β = 0.04`,
//! safety `0.9`, growth clamped to `[0.2, 10]`). Output at requested times
//! comes from the 4th-order continuous extension, so sample times never
//! constrain the step size.

use crate::elliptic::Complex;
use crate::error::{Error, Result};
use crate::matrix::{hermitian_eig, CMatrix, HermitianMatrix};
use crate::pendulum::{state_energy, wrap_angle, PendulumConfig, Sample, Trajectory};

/// Tolerances and budget for one integration run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorSettings {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_step: f64,
    pub max_steps: usize,
}

impl IntegratorSettings {
    /// Tight tolerances used for cross-validation (`1e-10` / `1e-12`).
    pub fn validation() -> Self {
        Self { rel_tol: 1e-10, abs_tol: 1e-12, max_step: f64::INFINITY, max_steps: 50_000_000 }
    }

    /// Moderate tolerances (`1e-6`) for long-horizon runs.
    pub fn moderate() -> Self {
        Self { rel_tol: 1e-6, abs_tol: 1e-6, max_step: f64::INFINITY, max_steps: 200_000_000 }
    }

    pub fn with_tolerances(rel_tol: f64, abs_tol: f64) -> Self {
        Self { rel_tol, abs_tol, ..Self::validation() }
    }

    fn check(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0 && self.max_step > 0.0) {
            return Err(Error::InvalidArgument("tolerances and max_step must be positive".into()));
        }
        Ok(())
    }
}

impl Default for IntegratorSettings {
    fn default() -> Self {
        Self::validation()
    }
}

/// Result of a scalar oracle run.
#[derive(Debug, Clone)]
pub struct OracleRun {
    /// Samples at the requested times, `θ` wrapped to `(−π, π]`.
    pub trajectory: Trajectory,
    /// Unwrapped `θ` at the same times.
    pub lifted: Vec<f64>,
    /// `max |E(t) − E(0)|` over all accepted steps.
    pub energy_drift: f64,
    pub steps_taken: usize,
    pub rejected_steps: usize,
}

/// Matrix state sampled by [`integrate_matrix`].
#[derive(Debug, Clone)]
pub struct MatrixSample {
    pub t: f64,
    pub theta: HermitianMatrix,
    pub omega: HermitianMatrix,
}

/// Result of a matrix oracle run.
#[derive(Debug, Clone)]
pub struct MatrixOracleRun {
    pub samples: Vec<MatrixSample>,
    /// `max ‖E(t) − E(0)‖_F` over accepted steps.
    pub energy_drift: f64,
    /// Largest anti-Hermitian part removed by the per-step symmetrisation.
    pub hermiticity_drift: f64,
    pub steps_taken: usize,
    pub rejected_steps: usize,
}

// Dormand–Prince tableau
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

const SAFETY: f64 = 0.9;
const BETA: f64 = 0.04;
const FAC_MIN: f64 = 0.2;
const FAC_MAX: f64 = 10.0;

/// Hooks called by [`dopri5`].
trait Observer {
    /// Dense output at the `index`-th requested time.
    fn sample(&mut self, index: usize, t: f64, y: &[f64]) -> Result<()>;
    /// After each accepted step. Returns `true` if `y` was changed in a way
    /// that invalidates the cached derivative.
    fn accepted(&mut self, t: f64, y: &mut [f64]) -> Result<bool>;
}

struct Stats {
    steps: usize,
    rejected: usize,
}

fn rms_norm(v: &[f64], y: &[f64], settings: &IntegratorSettings) -> f64 {
    let s: f64 = v
        .iter()
        .zip(y)
        .map(|(e, y)| {
            let sk = settings.abs_tol + settings.rel_tol * y.abs();
            (e / sk).powi(2)
        })
        .sum();
    (s / v.len() as f64).sqrt()
}

fn initial_step<F>(f: &mut F, t0: f64, y0: &[f64], f0: &[f64], dir: f64, s: &IntegratorSettings) -> f64
where
    F: FnMut(f64, &[f64], &mut [f64]),
{
    let d0 = rms_norm(y0, y0, s);
    let d1 = rms_norm(f0, y0, s);
    let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    let h0 = h0.min(s.max_step);
    let y1: Vec<f64> = y0.iter().zip(f0).map(|(y, k)| y + dir * h0 * k).collect();
    let mut f1 = vec![0.0; y0.len()];
    f(t0 + dir * h0, &y1, &mut f1);
    let diff: Vec<f64> = f1.iter().zip(f0).map(|(a, b)| a - b).collect();
    let d2 = rms_norm(&diff, y0, s) / h0;
    let h1 = if d1.max(d2) <= 1e-15 { (h0 * 1e-3).max(1e-6) } else { (0.01 / d1.max(d2)).powf(0.2) };
    (100.0 * h0).min(h1).min(s.max_step)
}

/// Integrates `y' = f(t, y)` from `t0` to `t_end` (either direction), emitting
/// dense samples at `times`, which must be ordered along the direction of integration.
fn dopri5<F, O>(
    mut f: F,
    t0: f64,
    y0: &[f64],
    t_end: f64,
    times: &[f64],
    settings: &IntegratorSettings,
    obs: &mut O,
) -> Result<Stats>
where
    F: FnMut(f64, &[f64], &mut [f64]),
    O: Observer,
{
    settings.check()?;
    let n = y0.len();
    let dir = if t_end >= t0 { 1.0 } else { -1.0 };
    let mut y = y0.to_vec();
    let mut t = t0;
    let mut next = 0;
    while next < times.len() && times[next] == t0 {
        obs.sample(next, t0, &y)?;
        next += 1;
    }
    let mut k: [Vec<f64>; 7] = std::array::from_fn(|_| vec![0.0; n]);
    f(t, &y, &mut k[0]);
    let mut stats = Stats { steps: 0, rejected: 0 };
    if t_end == t0 {
        return Ok(stats);
    }
    let mut h = dir * initial_step(&mut f, t0, &y, &k[0].clone(), dir, settings);
    let mut err_old: f64 = 1e-4;
    let mut tmp = vec![0.0; n];
    let mut y_new = vec![0.0; n];
    let mut err_vec = vec![0.0; n];
    loop {
        if stats.steps + stats.rejected >= settings.max_steps {
            return Err(Error::StepLimitExceeded(settings.max_steps));
        }
        if h.abs() > settings.max_step {
            h = dir * settings.max_step;
        }
        let last = (t + h - t_end) * dir >= 0.0;
        if last {
            h = t_end - t;
        }
        if h.abs() <= 1e-14 * t.abs().max(1.0) {
            return Err(Error::StepUnderflow(t));
        }
        for i in 0..n {
            tmp[i] = y[i] + h * A21 * k[0][i];
        }
        let (k1, rest) = k.split_at_mut(1);
        f(t + C2 * h, &tmp, &mut rest[0]);
        for i in 0..n {
            tmp[i] = y[i] + h * (A31 * k1[0][i] + A32 * rest[0][i]);
        }
        f(t + C3 * h, &tmp, &mut rest[1]);
        for i in 0..n {
            tmp[i] = y[i] + h * (A41 * k1[0][i] + A42 * rest[0][i] + A43 * rest[1][i]);
        }
        f(t + C4 * h, &tmp, &mut rest[2]);
        for i in 0..n {
            tmp[i] = y[i] + h * (A51 * k1[0][i] + A52 * rest[0][i] + A53 * rest[1][i] + A54 * rest[2][i]);
        }
        f(t + C5 * h, &tmp, &mut rest[3]);
        for i in 0..n {
            tmp[i] = y[i]
                + h * (A61 * k1[0][i]
                    + A62 * rest[0][i]
                    + A63 * rest[1][i]
                    + A64 * rest[2][i]
                    + A65 * rest[3][i]);
        }
        f(t + h, &tmp, &mut rest[4]);
        for i in 0..n {
            y_new[i] = y[i]
                + h * (A71 * k1[0][i]
                    + A73 * rest[1][i]
                    + A74 * rest[2][i]
                    + A75 * rest[3][i]
                    + A76 * rest[4][i]);
        }
        f(t + h, &y_new, &mut rest[5]);
        for i in 0..n {
            err_vec[i] = h
                * (E1 * k1[0][i]
                    + E3 * rest[1][i]
                    + E4 * rest[2][i]
                    + E5 * rest[3][i]
                    + E6 * rest[4][i]
                    + E7 * rest[5][i]);
        }
        let err = {
            let s: f64 = (0..n)
                .map(|i| {
                    let sk = settings.abs_tol + settings.rel_tol * y[i].abs().max(y_new[i].abs());
                    (err_vec[i] / sk).powi(2)
                })
                .sum();
            (s / n as f64).sqrt()
        };
        if err.is_finite() && err <= 1.0 {
            let t_new = if last { t_end } else { t + h };
            // continuous extension on [t, t_new]
            while next < times.len() && (times[next] - t_new) * dir <= 0.0 {
                let s = (times[next] - t) / h;
                let sm = 1.0 - s;
                for i in 0..n {
                    let ydiff = y_new[i] - y[i];
                    let r3 = h * k[0][i] - ydiff;
                    let r4 = ydiff - h * k[6][i] - r3;
                    let r5 = h
                        * (D1 * k[0][i]
                            + D3 * k[2][i]
                            + D4 * k[3][i]
                            + D5 * k[4][i]
                            + D6 * k[5][i]
                            + D7 * k[6][i]);
                    tmp[i] = y[i] + s * (ydiff + sm * (r3 + s * (r4 + sm * r5)));
                }
                obs.sample(next, times[next], &tmp)?;
                next += 1;
            }
            stats.steps += 1;
            t = t_new;
            std::mem::swap(&mut y, &mut y_new);
            let (first, rest) = k.split_at_mut(6);
            std::mem::swap(&mut first[0], &mut rest[0]);
            if obs.accepted(t, &mut y)? {
                f(t, &y, &mut k[0]);
            }
            if last {
                return Ok(stats);
            }
            let err_c = err.max(1e-10);
            let fac = SAFETY * err_c.powf(-(0.2 - 0.75 * BETA)) * err_old.powf(BETA);
            h *= fac.clamp(FAC_MIN, FAC_MAX);
            err_old = err.max(1e-4);
        } else {
            stats.rejected += 1;
            let fac = if err.is_finite() { (SAFETY * err.powf(-0.2)).max(FAC_MIN) } else { FAC_MIN };
            h *= fac;
        }
    }
}

fn check_times(times: &[f64], t_end: f64) -> Result<()> {
    if !(t_end > 0.0) || !t_end.is_finite() {
        return Err(Error::InvalidArgument("t_end must be positive".into()));
    }
    if times.iter().any(|&t| !(0.0..=t_end).contains(&t)) || times.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidArgument("sample times must be sorted within [0, t_end]".into()));
    }
    Ok(())
}

struct ScalarObserver {
    c: f64,
    energy0: f64,
    turns: f64,
    drift: f64,
    samples: Vec<Sample>,
    lifted: Vec<f64>,
}

impl Observer for ScalarObserver {
    fn sample(&mut self, _: usize, t: f64, y: &[f64]) -> Result<()> {
        let theta = wrap_angle(y[0]);
        self.samples.push(Sample { t, theta, omega: y[1], energy: state_energy(self.c, theta, y[1]) });
        self.lifted.push(y[0] + self.turns * std::f64::consts::TAU);
        Ok(())
    }

    fn accepted(&mut self, _: f64, y: &mut [f64]) -> Result<bool> {
        self.drift = self.drift.max((state_energy(self.c, y[0], y[1]) - self.energy0).abs());
        // keep θ bounded so the relative tolerance stays meaningful; sin is
        // 2π-periodic so the cached derivative stays valid
        if y[0].abs() > std::f64::consts::PI {
            let w = wrap_angle(y[0]);
            self.turns += ((y[0] - w) / std::f64::consts::TAU).round();
            y[0] = w;
        }
        Ok(false)
    }
}

/// Integrates `(θ, ω)' = (ω, 4c sin θ)` on `[0, t_end]` and samples at `times`.
pub fn integrate_scalar(
    cfg: &PendulumConfig,
    t_end: f64,
    settings: &IntegratorSettings,
    times: &[f64],
) -> Result<OracleRun> {
    check_times(times, t_end)?;
    let c = cfg.c;
    let energy0 = state_energy(c, cfg.theta0, cfg.omega0);
    let mut obs = ScalarObserver {
        c,
        energy0,
        turns: 0.0,
        drift: 0.0,
        samples: Vec::with_capacity(times.len()),
        lifted: Vec::with_capacity(times.len()),
    };
    let rhs = |_: f64, y: &[f64], dy: &mut [f64]| {
        dy[0] = y[1];
        dy[1] = 4.0 * c * y[0].sin();
    };
    let stats = dopri5(rhs, 0.0, &[cfg.theta0, cfg.omega0], t_end, times, settings, &mut obs)?;
    Ok(OracleRun {
        trajectory: Trajectory { samples: obs.samples },
        lifted: obs.lifted,
        energy_drift: obs.drift,
        steps_taken: stats.steps,
        rejected_steps: stats.rejected,
    })
}

/// `|(f(t+h) − 2f(t) + f(t−h))/h² − 4c·sin f(t)|`.
///
/// The differences `f(t±h) − f(t)` are taken modulo 2π, so `f` may return
/// wrapped angles; this also keeps the rounding of large unwrapped angles out
/// of the `1/h²` amplification.
pub fn residual_check(f: impl Fn(f64) -> f64, t: f64, h: f64, c: f64) -> f64 {
    let mid = f(t);
    let up = wrap_angle(f(t + h) - mid);
    let down = wrap_angle(f(t - h) - mid);
    ((up + down) / (h * h) - 4.0 * c * mid.sin()).abs()
}

fn pack(theta: &CMatrix, omega: &CMatrix) -> Vec<f64> {
    theta.as_slice().iter().chain(omega.as_slice()).flat_map(|z| [z.re, z.im]).collect()
}

fn unpack(y: &[f64], n: usize) -> (CMatrix, CMatrix) {
    let m = n * n;
    let get = |off: usize| {
        let v = (0..m).map(|i| Complex::new(y[2 * (off + i)], y[2 * (off + i) + 1])).collect();
        CMatrix::from_rows(n, v).expect("packed state has n² entries")
    };
    (get(0), get(m))
}

struct MatrixObserver {
    n: usize,
    c: f64,
    energy0: HermitianMatrix,
    drift: f64,
    herm_drift: f64,
    samples: Vec<MatrixSample>,
    failure: Option<Error>,
}

fn matrix_energy(theta: &HermitianMatrix, omega: &HermitianMatrix, c: f64) -> Result<HermitianMatrix> {
    let cos = theta.cos()?;
    let kinetic = (omega.matrix() * omega.matrix()).scale(0.5);
    Ok(HermitianMatrix::hermitian_part(&(&kinetic + &cos.matrix().scale(4.0 * c))))
}

impl Observer for MatrixObserver {
    fn sample(&mut self, _: usize, t: f64, y: &[f64]) -> Result<()> {
        let (th, om) = unpack(y, self.n);
        self.samples.push(MatrixSample {
            t,
            theta: HermitianMatrix::hermitian_part(&th),
            omega: HermitianMatrix::hermitian_part(&om),
        });
        Ok(())
    }

    fn accepted(&mut self, _: f64, y: &mut [f64]) -> Result<bool> {
        let (th, om) = unpack(y, self.n);
        self.herm_drift = self.herm_drift.max(th.anti_hermitian_norm()).max(om.anti_hermitian_norm());
        let th = HermitianMatrix::hermitian_part(&th);
        let om = HermitianMatrix::hermitian_part(&om);
        let e = matrix_energy(&th, &om, self.c)?;
        self.drift = self.drift.max((e.matrix() - self.energy0.matrix()).frobenius());
        y.copy_from_slice(&pack(th.matrix(), om.matrix()));
        Ok(true)
    }
}

/// Integrates the matrix system `θ'' = 4c·sin θ` directly, with `sin` by
/// functional calculus on the Hermitian part of `θ`. Commutation is not required.
pub fn integrate_matrix(
    theta0: &HermitianMatrix,
    omega0: &HermitianMatrix,
    c: f64,
    t_end: f64,
    settings: &IntegratorSettings,
    times: &[f64],
) -> Result<MatrixOracleRun> {
    check_times(times, t_end)?;
    let n = theta0.dim();
    if omega0.dim() != n {
        return Err(Error::DimensionMismatch(n, omega0.dim()));
    }
    let mut obs = MatrixObserver {
        n,
        c,
        energy0: matrix_energy(theta0, omega0, c)?,
        drift: 0.0,
        herm_drift: 0.0,
        samples: Vec::with_capacity(times.len()),
        failure: None,
    };
    let m = n * n;
    let mut failure = None;
    let rhs = |_: f64, y: &[f64], dy: &mut [f64]| {
        let (th, _) = unpack(y, n);
        dy[..2 * m].copy_from_slice(&y[2 * m..]);
        match hermitian_eig(&HermitianMatrix::hermitian_part(&th)) {
            Ok((u, l)) => {
                let d: Vec<Complex> = l.iter().map(|x| Complex::new(4.0 * c * x.sin(), 0.0)).collect();
                let acc = CMatrix::conjugate_diag(&u, &d);
                for (i, z) in acc.as_slice().iter().enumerate() {
                    dy[2 * m + 2 * i] = z.re;
                    dy[2 * m + 2 * i + 1] = z.im;
                }
            }
            Err(e) => {
                failure.get_or_insert(e);
                dy[2 * m..].fill(f64::NAN);
            }
        }
    };
    let y0 = pack(theta0.matrix(), omega0.matrix());
    let result = dopri5(rhs, 0.0, &y0, t_end, times, settings, &mut obs);
    if let Some(e) = failure.or(obs.failure.take()) {
        return Err(e);
    }
    let stats = result?;
    Ok(MatrixOracleRun {
        samples: obs.samples,
        energy_drift: obs.drift,
        hermiticity_drift: obs.herm_drift,
        steps_taken: stats.steps,
        rejected_steps: stats.rejected,
    })
}
