//! Fixed-format serialisation shared by every subcommand.
//!
//! Numbers are written as `{:.16e}` (17 significant digits, exact round trip)
//! so that goldens can be compared byte for byte. Complex values are `[re, im]`.

use pendulum_core::{Complex, PendulumCurve, Sample};
use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

/// `f64` serialised in scientific notation; non-finite values become `null`.
#[derive(Debug, Clone, Copy)]
pub struct Num(pub f64);

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return s.serialize_none();
        }
        let raw = RawValue::from_string(fmt_num(self.0)).map_err(serde::ser::Error::custom)?;
        raw.serialize(s)
    }
}

pub fn fmt_num(x: f64) -> String {
    // −0 prints as "-0e0" which reads back fine, but keep goldens free of it
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.16e}")
}

/// Complex value as `[re, im]`.
#[derive(Debug, Clone, Copy)]
pub struct Cx(pub Complex);

impl Serialize for Cx {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [Num(self.0.re), Num(self.0.im)].serialize(s)
    }
}

/// Everything `curve` prints, in output order.
#[derive(Debug, Serialize)]
pub struct CurveRecord {
    pub c: Num,
    pub theta0: Num,
    pub omega0: Num,
    pub energy: Num,
    pub g2: Num,
    pub g3: Num,
    pub delta: Num,
    pub omega1: Option<Cx>,
    pub omega2: Option<Cx>,
    pub g1: Option<Cx>,
    pub regime: &'static str,
    pub period: Option<Num>,
}

impl CurveRecord {
    pub fn new(curve: &PendulumCurve) -> Self {
        let cfg = curve.config();
        let inv = curve.invariants();
        Self {
            c: Num(cfg.c),
            theta0: Num(cfg.theta0),
            omega0: Num(cfg.omega0),
            energy: Num(curve.energy()),
            g2: Num(inv.g2.re),
            g3: Num(inv.g3.re),
            delta: Num(curve.discriminant()),
            omega1: curve.lattice().map(|l| Cx(l.omega1())),
            omega2: curve.lattice().map(|l| Cx(l.omega2())),
            g1: curve.g1().map(Cx),
            regime: curve.regime().as_str(),
            period: curve.period().map(Num),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct SampleRecord {
    pub t: Num,
    pub theta: Num,
    pub omega: Num,
    pub energy: Num,
}

impl From<&Sample> for SampleRecord {
    fn from(s: &Sample) -> Self {
        Self { t: Num(s.t), theta: Num(s.theta), omega: Num(s.omega), energy: Num(s.energy) }
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut out = serde_json::to_string_pretty(value).expect("records always serialise");
    out.push('\n');
    out
}

/// `t,theta,omega,energy` CSV with LF line endings.
pub fn to_csv(samples: &[Sample]) -> String {
    let mut out = String::from("t,theta,omega,energy\n");
    for s in samples {
        let row = [s.t, s.theta, s.omega, s.energy].map(fmt_num).join(",");
        out.push_str(&row);
        out.push('\n');
    }
    out
}
