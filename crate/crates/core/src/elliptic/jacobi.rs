use std::f64::consts::PI;

use crate::error::{Error, Result};

const MAX_AGM: usize = 64;

/// Jacobi amplitude `am(u | m)` in the parameter convention, unwrapped
/// (continuous and monotone in `u`, not reduced mod 2π).
///
/// `0 ≤ m < 1` uses the descending AGM directly. `m < 0` is first mapped to
/// `μ = −m/(1−m) ∈ (0, 1)` via `sn(u|m) = sd(u√(1−m) | μ)/√(1−m)`.
pub fn jacobi_am(u: f64, m: f64) -> Result<f64> {
    if !(m < 1.0) {
        return Err(Error::UnsupportedParameter(m));
    }
    if !u.is_finite() {
        return Err(Error::InvalidArgument("non-finite argument to am".into()));
    }
    if m >= 0.0 {
        return Ok(am_agm(u, m));
    }
    let k1p = 1.0 / (1.0 - m).sqrt();
    let mu = -m / (1.0 - m);
    let psi = am_agm(u / k1p, mu);
    // φ = atan2(k₁' sn, cn) on the branch continuing ψ
    let n = (psi / PI).round();
    let r = psi - n * PI;
    Ok(n * PI + (k1p * r.tan()).atan())
}

fn am_agm(u: f64, m: f64) -> f64 {
    if m == 0.0 {
        return u;
    }
    let mut a = 1.0;
    let mut b = (1.0 - m).sqrt();
    let mut ratios = Vec::with_capacity(16);
    let mut c = m.sqrt();
    for _ in 0..MAX_AGM {
        if c.abs() <= f64::EPSILON * a {
            break;
        }
        let an = 0.5 * (a + b);
        c = 0.5 * (a - b);
        b = (a * b).sqrt();
        a = an;
        ratios.push(c / a);
    }
    let mut phi = (1u64 << ratios.len()) as f64 * a * u;
    for ratio in ratios.iter().rev() {
        phi = 0.5 * (phi + (ratio * phi.sin()).asin());
    }
    phi
}
