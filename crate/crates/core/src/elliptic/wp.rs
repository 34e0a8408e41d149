use super::lattice::LAURENT_RADIUS;
use super::{carlson_rf, reduce_to_fundamental, Complex, Lattice};
use crate::error::{Error, Result};

/// Arguments within this fraction of the shortest period from a lattice point are poles.
const POLE_TOL: f64 = 1e-8;

impl Lattice {
    /// `(℘(z), ℘'(z))`.
    ///
    /// `z` is first written as `h + z′` with `h` a half period and `z′` small;
    /// `℘(z′)` comes from the Laurent series near the origin plus duplication,
    /// and the shift by `h = ω/2` uses `℘(z′ + h) = e + (e − e′)(e − e″)/(℘(z′) − e)`.
    pub fn wp_pair(&self, z: Complex) -> Result<(Complex, Complex)> {
        if !z.is_finite() {
            return Err(Error::InvalidArgument("non-finite argument to ℘".into()));
        }
        let rho = self.shortest_period();
        if self.reduce_small(z).norm() <= POLE_TOL * rho {
            return Err(Error::PoleAtInput);
        }
        let (class, zs) = self.split_half_period(z);
        if class == 0 {
            return self.wp_direct(zs);
        }
        let roots = self.roots().as_array();
        let i = self.half_roots()[class - 1];
        let e = roots[i];
        let a =
            (0..3).filter(|&j| j != i).map(|j| e - roots[j]).fold(Complex::new(1.0, 0.0), |acc, d| acc * d);
        if zs.norm() <= POLE_TOL * rho {
            // ℘(z′) ≈ z′⁻² at the half period itself
            return Ok((e + a * zs * zs, a * zs * 2.0));
        }
        let (p, dp) = self.wp_direct(zs)?;
        let d = (p - e).inv();
        Ok((e + a * d, -a * dp * d * d))
    }

    /// Laurent series and duplication on the nearest representative of `z`.
    pub(crate) fn wp_direct(&self, z: Complex) -> Result<(Complex, Complex)> {
        let rho = self.shortest_period();
        let zr = self.reduce_small(z);
        if zr.norm() <= POLE_TOL * rho {
            return Err(Error::PoleAtInput);
        }
        let radius = LAURENT_RADIUS * rho;
        let mut halvings = 0;
        let mut s = zr;
        while s.norm() > radius {
            s /= 2.0;
            halvings += 1;
        }
        let (mut p, mut dp) = self.laurent_pair(s);
        let g2 = self.invariants().g2;
        for _ in 0..halvings {
            // ℘(2z) = −2℘ + (℘''/2℘')², ℘'(2z) = (−4℘'⁴ + 12℘℘'²℘'' − ℘''³) / 4℘'³
            let ddp = p * p * 6.0 - g2 / 2.0;
            let r = ddp / (dp * 2.0);
            let dp2 = dp * dp;
            let p_new = r * r - p * 2.0;
            let dp_new = -dp + r * (p * dp2 * 12.0 - ddp * ddp) / (dp2 * 2.0);
            p = p_new;
            dp = dp_new;
        }
        Ok((p, dp))
    }

    fn laurent_pair(&self, s: Complex) -> (Complex, Complex) {
        let s2 = s * s;
        let coeffs = self.laurent();
        // Horner in s² over c_k s^{2k−2} and (2k−2) c_k s^{2k−3}
        let mut acc = Complex::new(0.0, 0.0);
        let mut dacc = Complex::new(0.0, 0.0);
        for (i, &c) in coeffs.iter().enumerate().rev() {
            let k = (i + 2) as f64;
            acc = acc * s2 + c;
            dacc = dacc * s2 + c * (2.0 * k - 2.0);
        }
        let p = s2.inv() + acc * s2;
        let dp = -(s2 * s).inv() * 2.0 + dacc * s;
        (p, dp)
    }

    /// Solves `℘(z) = w` with `℘'(z)` matching `wprime` (see [`wp_inverse`]).
    pub fn wp_inverse(&self, w: Complex, wprime: Complex) -> Result<Complex> {
        wp_inverse(w, wprime, self)
    }
}

/// Weierstrass `℘(z)` on the lattice.
pub fn wp(z: Complex, lat: &Lattice) -> Result<Complex> {
    lat.wp_pair(z).map(|(p, _)| p)
}

/// Derivative `℘'(z)` on the lattice.
pub fn wp_prime(z: Complex, lat: &Lattice) -> Result<Complex> {
    lat.wp_pair(z).map(|(_, dp)| dp)
}

/// Inverse of `℘`: returns `z` in the fundamental domain of `(ω₁, ω₂)` with
/// `℘(z) = w` and `℘'(z) ≈ wprime`.
///
/// The candidate `z = R_F(w − e₁, w − e₂, w − e₃)` is refined by Newton's
/// method on `℘(z) − w` and then negated if that matches the target
/// derivative better, since `℘'` is odd.
pub fn wp_inverse(w: Complex, wprime: Complex, lat: &Lattice) -> Result<Complex> {
    let inv = lat.invariants();
    let residual = (wprime * wprime - inv.cubic(w)).norm();
    if !(residual <= 1e-6 * (1.0 + w.norm().powi(3))) {
        return Err(Error::NotOnCurve { residual });
    }
    let [e1, e2, e3] = lat.roots().as_array();
    let seed = carlson_rf(w - e1, w - e2, w - e3)?;
    let z = match newton(lat, seed, w) {
        Some(z) => z,
        None => grid_search(lat, w).ok_or(Error::NonConvergence { what: "℘ inversion", limit: 64 })?,
    };
    let (_, dp) = lat.wp_pair(z)?;
    let z = if (dp - wprime).norm() <= (dp + wprime).norm() { z } else { -z };
    Ok(reduce_to_fundamental(z, lat))
}

fn accept(p: Complex, w: Complex) -> bool {
    (p - w).norm() <= 1e-12 * (1.0 + w.norm())
}

fn newton(lat: &Lattice, mut z: Complex, w: Complex) -> Option<Complex> {
    for _ in 0..30 {
        let (p, dp) = lat.wp_pair(z).ok()?;
        if accept(p, w) {
            return Some(z);
        }
        if dp.norm() == 0.0 {
            return None;
        }
        z -= (p - w) / dp;
    }
    let (p, _) = lat.wp_pair(z).ok()?;
    // near a half-period Newton is only linearly convergent
    ((p - w).norm() <= 1e-10 * (1.0 + w.norm())).then_some(z)
}

fn grid_search(lat: &Lattice, w: Complex) -> Option<Complex> {
    let (a, b) = lat.reduced_basis();
    let n = 16;
    let mut seeds: Vec<(f64, Complex)> = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let z = a * ((i as f64 + 0.5) / n as f64 - 0.5) + b * ((j as f64 + 0.5) / n as f64 - 0.5);
            if let Ok((p, _)) = lat.wp_pair(z) {
                seeds.push(((p - w).norm(), z));
            }
        }
    }
    seeds.sort_by(|x, y| x.0.total_cmp(&y.0));
    seeds.iter().take(8).find_map(|&(_, z)| newton(lat, z, w))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elliptic::Invariants;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    fn reference_lattice() -> Lattice {
        Lattice::from_invariants(&Invariants::real(0.0833333, 0.74537)).unwrap()
    }

    #[test]
    fn small_argument_matches_laurent_head() {
        let lat = reference_lattice();
        let inv = *lat.invariants();
        for z in [c(0.05, 0.02), c(-0.03, 0.04), c(0.01, -0.06)] {
            let head = z.powi(-2) + inv.g2 / 20.0 * z * z + inv.g3 / 28.0 * z.powi(4);
            let err = (wp(z, &lat).unwrap() - head).norm();
            assert!(err < 1e-6 * z.norm().powi(6) * 100.0, "{err}");
        }
    }

    #[test]
    fn parity() {
        let lat = reference_lattice();
        for z in [c(0.7, 0.3), c(-1.2, 1.1), c(0.1, -1.3)] {
            let (p, dp) = lat.wp_pair(z).unwrap();
            let (pm, dpm) = lat.wp_pair(-z).unwrap();
            assert!((p - pm).norm() <= 1e-10 * p.norm());
            assert!((dp + dpm).norm() <= 1e-10 * dp.norm());
        }
    }

    #[test]
    fn half_period_is_critical() {
        let lat = reference_lattice();
        let (p, dp) = lat.wp_pair(lat.omega1() / 2.0).unwrap();
        assert!(dp.norm() < 1e-8, "{dp}");
        let e = lat.roots().as_array();
        assert!(e.iter().any(|&r| (r - p).norm() < 1e-8));
    }

    #[test]
    fn pole_rejected() {
        let lat = reference_lattice();
        assert_eq!(wp(lat.omega1() + lat.omega2(), &lat), Err(Error::PoleAtInput));
        assert_eq!(wp(c(0.0, 0.0), &lat), Err(Error::PoleAtInput));
    }

    #[test]
    fn inverse_of_root_is_half_period() {
        let lat = reference_lattice();
        let e1 = lat.roots().e1;
        let z = wp_inverse(e1, c(0.0, 0.0), &lat).unwrap();
        assert!((wp(z, &lat).unwrap() - e1).norm() < 1e-9);
        assert!(lat.contains(z * 2.0, 1e-8));
    }

    #[test]
    fn inverse_round_trip() {
        let lat = reference_lattice();
        for z0 in [c(0.4, 0.9), c(-1.1, 0.2), c(0.3, -1.2), c(1.5, 1.3)] {
            let (p, dp) = lat.wp_pair(z0).unwrap();
            let z = wp_inverse(p, dp, &lat).unwrap();
            assert!(lat.contains(z - z0, 1e-9), "{z0} -> {z}");
        }
    }

    #[test]
    fn off_curve_rejected() {
        let lat = reference_lattice();
        assert!(matches!(wp_inverse(c(1.0, 0.0), c(5.0, 0.0), &lat), Err(Error::NotOnCurve { .. })));
    }
}
