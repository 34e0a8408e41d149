//! Scalar pendulum `θ'' = 4c sin θ` solved through `℘`.
//!
//! With `u = e^{iθ}` the equation becomes `u'' = 6cu² − 2Eu + 2c`. Shifting by
//! `b = E/(6c)` removes the linear term, `w'' = 6cw² + a` with
//! `a = 2c − E²/(6c)`, and `w(t) = c·℘(c(t + g₁); G₂, G₃)` solves it for
//! `G₂ = −2a/c³`. `G₃` and `g₁` are fixed by the initial point. For `c = −1`
//! the invariants are exactly the pair `(−2a·c, g₃)` reported for the
//! reference configurations.

use std::f64::consts::{PI, TAU};

use crate::elliptic::{discriminant, half_periods, jacobi_am, Complex, Invariants, Lattice};
use crate::error::{Error, Result};

/// Relative tolerance on `|E² − 16c²|` for the critical energies.
pub const SEPARATRIX_TOL: f64 = 1e-9;

/// Initial data for `θ'' = 4c sin θ`. Physically `c = −g/(4l)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PendulumConfig {
    pub c: f64,
    pub theta0: f64,
    pub omega0: f64,
}

impl PendulumConfig {
    pub fn new(c: f64, theta0: f64, omega0: f64) -> Self {
        Self { c, theta0, omega0 }
    }
}

/// Qualitative type of motion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    /// Bounded oscillation around the stable equilibrium, `E² < 16c²`.
    Libration,
    /// Monotone winding around the cylinder, `E² > 16c²`.
    Rotation,
    /// Critical energy `E = 4|c|`; the curve is singular.
    Separatrix,
    /// Minimum energy `E = −4|c|`: rest (or a vanishing oscillation) at the stable point.
    /// The curve is singular here as well.
    Equilibrium,
}

impl Regime {
    pub fn as_str(&self) -> &'static str {
        match self {
            Regime::Libration => "libration",
            Regime::Rotation => "rotation",
            Regime::Separatrix => "separatrix",
            Regime::Equilibrium => "equilibrium",
        }
    }
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Closed-form solution record for one initial condition.
#[derive(Debug, Clone)]
pub struct PendulumCurve {
    config: PendulumConfig,
    energy: f64,
    shift: f64,
    depressed: f64,
    scale: f64,
    invariants: Invariants,
    discriminant: f64,
    regime: Regime,
    lattice: Option<Lattice>,
    g1: Option<Complex>,
    period: Option<f64>,
}

/// One trajectory sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub t: f64,
    /// Angle in `(−π, π]`.
    pub theta: f64,
    pub omega: f64,
    pub energy: f64,
}

/// Time-ordered samples with strictly increasing `t`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Trajectory {
    pub samples: Vec<Sample>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// `max |E(tᵢ) − E(t₀)|` over the samples.
    pub fn energy_drift(&self) -> f64 {
        let Some(first) = self.samples.first() else { return 0.0 };
        self.samples.iter().map(|s| (s.energy - first.energy).abs()).fold(0.0, f64::max)
    }
}

/// `E = θ'²/2 + 4c cos θ`.
pub fn energy(cfg: &PendulumConfig) -> f64 {
    state_energy(cfg.c, cfg.theta0, cfg.omega0)
}

pub(crate) fn state_energy(c: f64, theta: f64, omega: f64) -> f64 {
    0.5 * omega * omega + 4.0 * c * theta.cos()
}

/// Maps an angle to `(−π, π]`.
pub fn wrap_angle(theta: f64) -> f64 {
    let r = theta.rem_euclid(TAU);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

fn regime_of(c: f64, energy: f64) -> Regime {
    let gap = energy * energy - 16.0 * c * c;
    if gap.abs() <= SEPARATRIX_TOL * (1.0 + energy * energy) {
        // the two critical levels are E = ±4|c|; the lower one is the stable rest point
        if energy < 0.0 {
            Regime::Equilibrium
        } else {
            Regime::Separatrix
        }
    } else if gap > 0.0 {
        Regime::Rotation
    } else {
        Regime::Libration
    }
}

/// Regime from the energy: critical iff `|E² − 16c²| ≤ 1e-9·(1 + E²)`,
/// otherwise rotation iff `E² > 16c²`.
pub fn classify(curve: &PendulumCurve) -> Regime {
    regime_of(curve.config.c, curve.energy)
}

/// Builds the elliptic curve, lattice and initial point for `cfg`.
///
/// Critical energies are not an error: the record comes back with regime
/// [`Regime::Separatrix`] or [`Regime::Equilibrium`] and without lattice or `g₁`.
pub fn build_curve(cfg: &PendulumConfig) -> Result<PendulumCurve> {
    let PendulumConfig { c, theta0, omega0 } = *cfg;
    if !(c.is_finite() && theta0.is_finite() && omega0.is_finite()) {
        return Err(Error::InvalidArgument("non-finite pendulum configuration".into()));
    }
    if c == 0.0 {
        return Err(Error::ZeroCoupling);
    }
    let e = energy(cfg);
    let shift = e / (6.0 * c);
    let depressed = 2.0 * c - e * e / (6.0 * c);
    let q = c;

    let u0 = Complex::from_polar(1.0, theta0);
    let du0 = Complex::new(0.0, omega0) * u0;
    let w0 = u0 - shift;
    // ℘-frame initial point: w = q·℘, w' = q²·℘'
    let p0 = w0 / q;
    let dp0 = du0 / (q * q);
    let g2 = -2.0 * depressed / (q * q * q);
    let g3 = p0 * p0 * p0 * 4.0 - p0 * g2 - dp0 * dp0;
    // g₃ is a real conserved quantity; the imaginary part is rounding only
    debug_assert!(g3.im.abs() <= 1e-9 * (1.0 + g3.norm()), "g3 = {g3}");
    let invariants = Invariants::real(g2, g3.re);
    let disc = discriminant(&invariants).re;
    let regime = regime_of(c, e);

    let mut curve = PendulumCurve {
        config: *cfg,
        energy: e,
        shift,
        depressed,
        scale: q,
        invariants,
        discriminant: disc,
        regime,
        lattice: None,
        g1: None,
        period: None,
    };
    match regime {
        Regime::Separatrix => {}
        Regime::Equilibrium => curve.period = Some(PI / c.abs().sqrt()),
        Regime::Libration | Regime::Rotation => {
            let lattice = half_periods(&invariants)?;
            let start = lattice.wp_inverse(p0, dp0)?;
            let real = lattice
                .real_period()
                .ok_or(Error::NonConvergence { what: "real period search", limit: 1 })?;
            curve.g1 = Some(start / q);
            curve.period = Some(real / q.abs());
            curve.lattice = Some(lattice);
        }
    }
    Ok(curve)
}

impl PendulumCurve {
    pub fn config(&self) -> &PendulumConfig {
        &self.config
    }

    pub fn energy(&self) -> f64 {
        self.energy
    }

    /// `b = E/(6c)`, the shift removing the linear term.
    pub fn shift(&self) -> f64 {
        self.shift
    }

    /// `a = 2c − E²/(6c)` of `w'' = 6cw² + a`.
    pub fn depressed(&self) -> f64 {
        self.depressed
    }

    /// Amplitude and time scale `q` in `θ = arg(b + q·℘(q(t + g₁)))`; equals `c`.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn invariants(&self) -> &Invariants {
        &self.invariants
    }

    pub fn discriminant(&self) -> f64 {
        self.discriminant
    }

    pub fn regime(&self) -> Regime {
        self.regime
    }

    pub fn lattice(&self) -> Option<&Lattice> {
        self.lattice.as_ref()
    }

    /// Initial point in time units: `℘(q·g₁)` is the ℘-frame initial position.
    pub fn g1(&self) -> Option<Complex> {
        self.g1
    }

    /// Real period of the motion (of `e^{iθ}`), if the curve is non-singular.
    pub fn period(&self) -> Option<f64> {
        self.period
    }

    /// Err with [`Error::DegenerateCurve`] for the critical energies.
    pub fn require_nonsingular(&self) -> Result<&Lattice> {
        self.lattice.as_ref().ok_or(Error::DegenerateCurve { discriminant: self.discriminant })
    }

    /// Point `q(t + g₁)` of the straight-line path on the torus.
    pub fn torus_point(&self, t: f64) -> Option<Complex> {
        self.g1.map(|g1| (g1 + t) * self.scale)
    }

    /// `(θ(t), θ'(t))` with `θ ∈ (−π, π]`.
    pub fn eval_state(&self, t: f64) -> Result<(f64, f64)> {
        if !t.is_finite() {
            return Err(Error::InvalidArgument("non-finite time".into()));
        }
        match self.regime {
            Regime::Separatrix => Err(Error::SeparatrixUnsupported),
            Regime::Equilibrium => {
                let (theta, omega) = self.harmonic(t);
                Ok((wrap_angle(theta), omega))
            }
            Regime::Libration | Regime::Rotation => {
                let (lat, g1, period) = self.parts();
                let q = self.scale;
                let tau = t.rem_euclid(period);
                let (p, dp) = lat.wp_pair((g1 + tau) * q)?;
                let z = p * q + self.shift;
                let dz = dp * (q * q);
                let theta = wrap_angle(z.arg());
                let omega = (dz * z.conj()).im / z.norm_sqr();
                Ok((theta, omega))
            }
        }
    }

    /// `(θ(t), θ'(t))` with `θ` continuous in `t` and `θ(0) = θ₀`.
    pub fn eval_lifted(&self, t: f64) -> Result<(f64, f64)> {
        let theta0 = self.config.theta0;
        match self.regime {
            Regime::Separatrix => Err(Error::SeparatrixUnsupported),
            Regime::Equilibrium => Ok(self.harmonic(t)),
            Regime::Libration => {
                let (theta, omega) = self.eval_state(t)?;
                let center = self.stable_center();
                Ok((center + wrap_angle(theta - center), omega))
            }
            Regime::Rotation => {
                let (theta, omega) = self.eval_state(t)?;
                let period = self.period.unwrap_or(f64::NAN);
                let turns = (t / period).floor();
                let tau = t - turns * period;
                let sign = self.config.omega0.signum();
                let mut advance = (sign * (theta - theta0)).rem_euclid(TAU);
                // rounding at the ends of a period
                if advance > TAU - 1e-6 && tau < 0.5 * period {
                    advance -= TAU;
                } else if advance < 1e-6 && tau > 0.5 * period {
                    advance += TAU;
                }
                Ok((theta0 + sign * (turns * TAU + advance), omega))
            }
        }
    }

    /// Energy recomputed from the evaluated state.
    pub fn energy_at(&self, t: f64) -> Result<f64> {
        let (theta, omega) = self.eval_state(t)?;
        Ok(state_energy(self.config.c, theta, omega))
    }

    /// `n` uniform samples of [`eval_state`](Self::eval_state) on `[t0, t1]`.
    pub fn sample_trajectory(&self, t0: f64, t1: f64, n: usize) -> Result<Trajectory> {
        if !(t0 < t1) || n < 2 {
            return Err(Error::InvalidArgument("need t0 < t1 and at least two samples".into()));
        }
        let step = (t1 - t0) / (n - 1) as f64;
        let samples = (0..n)
            .map(|i| {
                let t = if i == n - 1 { t1 } else { t0 + step * i as f64 };
                let (theta, omega) = self.eval_state(t)?;
                Ok(Sample { t, theta, omega, energy: state_energy(self.config.c, theta, omega) })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Trajectory { samples })
    }

    /// Smallest `T > 0` with `θ(t + T) ≡ θ(t) (mod 2π)`.
    pub fn real_period(&self) -> Result<f64> {
        match self.regime {
            Regime::Separatrix => Err(Error::SeparatrixUnsupported),
            _ => Ok(self.period.unwrap_or(f64::NAN)),
        }
    }

    fn parts(&self) -> (&Lattice, Complex, f64) {
        match (&self.lattice, self.g1, self.period) {
            (Some(l), Some(g), Some(p)) => (l, g, p),
            _ => unreachable!("non-singular curve without lattice"),
        }
    }

    /// Stable equilibrium nearest to `θ₀`: `0` for `c < 0`, `π` for `c > 0` (mod 2π).
    fn stable_center(&self) -> f64 {
        let base = if self.config.c < 0.0 { 0.0 } else { PI };
        base + TAU * ((self.config.theta0 - base) / TAU).round()
    }

    /// Linearised motion about the stable point, used only at the minimum energy
    /// where the amplitude is below ~1e-4 and the cubic correction is negligible.
    fn harmonic(&self, t: f64) -> (f64, f64) {
        let center = self.stable_center();
        let freq = 2.0 * self.config.c.abs().sqrt();
        let d0 = self.config.theta0 - center;
        let v0 = self.config.omega0;
        let (s, c) = (freq * t).sin_cos();
        (center + d0 * c + v0 / freq * s, -d0 * freq * s + v0 * c)
    }
}

/// Reference solution `θ(t) = 2·am(θ'₀t/2 | m)`, `m = −16c/θ'₀²`, for `θ₀ = 0`.
///
/// For `m > 1` (libration) the reciprocal-parameter form
/// `2·arcsin(sn(√m·u | 1/m)/√m)` is used, which stays valid past the first half period.
pub fn jacobi_solution(cfg: &PendulumConfig, t: f64) -> Result<f64> {
    jacobi_state(cfg, t).map(|(theta, _)| theta)
}

/// `(θ, θ')` of the Jacobi-amplitude reference solution; `θ ∈ (−π, π]`.
pub fn jacobi_state(cfg: &PendulumConfig, t: f64) -> Result<(f64, f64)> {
    if cfg.theta0 != 0.0 {
        return Err(Error::UnsupportedInitialAngle(cfg.theta0));
    }
    if cfg.omega0 == 0.0 {
        return Err(Error::InvalidArgument("Jacobi reference solution requires omega0 != 0".into()));
    }
    if cfg.c == 0.0 {
        return Err(Error::ZeroCoupling);
    }
    let m = -16.0 * cfg.c / (cfg.omega0 * cfg.omega0);
    let u = 0.5 * cfg.omega0 * t;
    if (m - 1.0).abs() <= SEPARATRIX_TOL {
        return Err(Error::SeparatrixUnsupported);
    }
    if m < 1.0 {
        let phi = jacobi_am(u, m)?;
        let dn = (1.0 - m * phi.sin().powi(2)).sqrt();
        Ok((wrap_angle(2.0 * phi), cfg.omega0 * dn))
    } else {
        let k = 1.0 / m.sqrt();
        let phi = jacobi_am(u / k, k * k)?;
        let (sn, cn) = phi.sin_cos();
        Ok((wrap_angle(2.0 * (k * sn).asin()), cfg.omega0 * cn))
    }
}
