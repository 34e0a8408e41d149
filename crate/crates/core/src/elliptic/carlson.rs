use super::Complex;
use crate::error::{Error, Result};

const MAX_ITER: usize = 100;
const SPREAD_TOL: f64 = 1e-14;

/// Carlson's symmetric integral `R_F(x, y, z) = ½∫₀^∞ dt / √((t+x)(t+y)(t+z))`
/// by the duplication theorem.
///
/// Square roots are principal, so the arguments should stay off the negative
/// real axis; on it the result is the limit from the upper half-plane.
/// At most one argument may be zero.
pub fn carlson_rf(x: Complex, y: Complex, z: Complex) -> Result<Complex> {
    if !(x.is_finite() && y.is_finite() && z.is_finite()) {
        return Err(Error::InvalidArgument("non-finite argument to R_F".into()));
    }
    let zeros = [x, y, z].iter().filter(|v| v.norm() == 0.0).count();
    if zeros > 1 {
        return Err(Error::InvalidArgument("R_F with two zero arguments diverges".into()));
    }

    let (mut x, mut y, mut z) = (x, y, z);
    for _ in 0..MAX_ITER {
        let a = (x + y + z) / 3.0;
        let spread = (x - y).norm().max((x - z).norm()).max((y - z).norm());
        if spread <= SPREAD_TOL * a.norm() {
            let dx = (a - x) / a;
            let dy = (a - y) / a;
            let dz = -(dx + dy);
            let e2 = dx * dy - dz * dz;
            let e3 = dx * dy * dz;
            let series = 1.0 - e2 / 10.0 + e3 / 14.0 + e2 * e2 / 24.0 - e2 * e3 * 3.0 / 44.0;
            return Ok(series / a.sqrt());
        }
        let (sx, sy, sz) = (x.sqrt(), y.sqrt(), z.sqrt());
        let lambda = sx * sy + sx * sz + sy * sz;
        x = (x + lambda) / 4.0;
        y = (y + lambda) / 4.0;
        z = (z + lambda) / 4.0;
    }
    Err(Error::NonConvergence { what: "Carlson R_F duplication", limit: MAX_ITER })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn re(x: f64) -> Complex {
        Complex::new(x, 0.0)
    }

    /// Adaptive Simpson on [a, b].
    fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
        #[allow(clippy::too_many_arguments)]
        fn rec<F: Fn(f64) -> f64>(
            f: &F,
            a: f64,
            b: f64,
            fa: f64,
            fm: f64,
            fb: f64,
            whole: f64,
            tol: f64,
            depth: u32,
        ) -> f64 {
            let m = 0.5 * (a + b);
            let lm = 0.5 * (a + m);
            let rm = 0.5 * (m + b);
            let flm = f(lm);
            let frm = f(rm);
            let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
            let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
            if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
                return left + right + (left + right - whole) / 15.0;
            }
            rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
                + rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
        }
        let fa = f(a);
        let fb = f(b);
        let fm = f(0.5 * (a + b));
        let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        rec(f, a, b, fa, fm, fb, whole, tol, 50)
    }

    #[test]
    fn unit_arguments() {
        let v = carlson_rf(re(1.0), re(1.0), re(1.0)).unwrap();
        assert!((v - re(1.0)).norm() < 1e-15);
    }

    #[test]
    fn equal_arguments_scale() {
        for x in [0.25, 2.0, 17.5] {
            let v = carlson_rf(re(x), re(x), re(x)).unwrap();
            assert!((v.re - x.powf(-0.5)).abs() < 1e-14 * x.powf(-0.5));
        }
        let z = Complex::new(0.3, 1.1);
        let v = carlson_rf(z, z, z).unwrap();
        assert!((v - z.sqrt().inv()).norm() < 1e-14);
    }

    #[test]
    fn matches_quadrature() {
        // R_F(0,1,2) = ∫₀^∞ ds / √((s²+1)(s²+2)) after t = s²; then s = u/(1-u).
        let f = |u: f64| {
            if u >= 1.0 {
                return 0.0;
            }
            let s = u / (1.0 - u);
            let ds = 1.0 / ((1.0 - u) * (1.0 - u));
            ds / ((s * s + 1.0) * (s * s + 2.0)).sqrt()
        };
        let quad = simpson(&f, 0.0, 1.0, 1e-13);
        let v = carlson_rf(re(0.0), re(1.0), re(2.0)).unwrap();
        assert!((v.re - quad).abs() < 1e-9, "{} vs {}", v.re, quad);
        assert!((v.re - 1.311_028_777_146_059_9).abs() < 1e-13);
    }

    #[test]
    fn symmetric_in_arguments() {
        let (a, b, c) = (Complex::new(0.5, 0.2), Complex::new(2.0, -1.0), Complex::new(1.0, 0.0));
        let v = carlson_rf(a, b, c).unwrap();
        for w in [carlson_rf(b, c, a).unwrap(), carlson_rf(c, a, b).unwrap(), carlson_rf(b, a, c).unwrap()] {
            assert!((v - w).norm() < 1e-14);
        }
    }

    #[test]
    fn two_zero_arguments_rejected() {
        assert!(carlson_rf(re(0.0), re(0.0), re(1.0)).is_err());
    }
}
