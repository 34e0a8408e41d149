#![allow(dead_code)]

use pendulum_core::{Complex, Invariants, Lattice};
use proptest::prelude::*;

pub fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

/// The six reference configurations: `c = −1`, `θ₀ = 0`.
pub const REFERENCE_OMEGAS: [f64; 6] = [1.0, 2.0, 3.0, 3.9, 4.1, 5.0];

/// Lattice generated by `ω₁ = r·e^{iα}` and `ω₂ = ω₁τ`.
pub fn lattice_from_shape(r: f64, alpha: f64, tau: Complex) -> Lattice {
    let w1 = Complex::from_polar(r, alpha);
    Lattice::from_periods(w1, w1 * tau).expect("independent periods")
}

/// Lattices with `τ` in the standard fundamental domain, `Im τ ≤ 2`.
pub fn any_lattice() -> impl Strategy<Value = Lattice> {
    let tau = (-0.5f64..0.5, 0.0f64..1.2).prop_map(|(x, y)| {
        let min_im = (1.0 - x * x).sqrt();
        c(x, min_im + y)
    });
    let generic =
        (0.4f64..3.0, 0.0f64..std::f64::consts::TAU, tau).prop_map(|(r, a, t)| lattice_from_shape(r, a, t));
    // rectangular and rhombic lattices carry real invariants
    let rect = (0.4f64..3.0, 1.0f64..2.0).prop_map(|(r, y)| lattice_from_shape(r, 0.0, c(0.0, y)));
    let rhomb = (0.4f64..3.0, 0.87f64..2.0).prop_map(|(r, y)| lattice_from_shape(r, 0.0, c(0.5, y)));
    prop_oneof![generic, rect, rhomb]
}

/// Point with lattice coordinates `(s, t)` kept at least `margin` (relative) away from poles.
pub fn point_in(lat: &Lattice, s: f64, t: f64) -> Option<Complex> {
    let (a, b) = lat.reduced_basis();
    let z = a * s + b * t;
    (z.norm() > 0.08 * lat.shortest_period()).then_some(z)
}

/// `(g₂, g₃) = (60·Σ'ω⁻⁴, 140·Σ'ω⁻⁶)` by direct summation over the square
/// `|n|, |m| ≤ N`, Richardson-extrapolated in `N` to cancel the `N⁻²` tail.
pub fn lattice_sum_invariants(w1: Complex, w2: Complex, n: i64) -> Invariants {
    let partial = |n: i64| {
        let mut s4 = c(0.0, 0.0);
        let mut s6 = c(0.0, 0.0);
        for i in -n..=n {
            for j in -n..=n {
                if i == 0 && j == 0 {
                    continue;
                }
                let w = w1 * i as f64 + w2 * j as f64;
                let inv2 = (w * w).inv();
                s4 += inv2 * inv2;
                s6 += inv2 * inv2 * inv2;
            }
        }
        (s4, s6)
    };
    let (a4, a6) = partial(n);
    let (b4, b6) = partial(2 * n);
    // tail ~ A/N² (+ B/N⁴); s6 converges faster but the same correction is harmless
    let g4 = (b4 * 4.0 - a4) / 3.0;
    let g6 = (b6 * 16.0 - a6) / 15.0;
    Invariants::new(g4 * 60.0, g6 * 140.0)
}

/// `℘(z)` by direct symmetric lattice summation, Richardson-extrapolated.
pub fn lattice_sum_wp(z: Complex, w1: Complex, w2: Complex, n: i64) -> Complex {
    let partial = |n: i64| {
        let mut s = (z * z).inv();
        for i in -n..=n {
            for j in -n..=n {
                if i == 0 && j == 0 {
                    continue;
                }
                let w = w1 * i as f64 + w2 * j as f64;
                s += ((z - w) * (z - w)).inv() - (w * w).inv();
            }
        }
        s
    };
    let a = partial(n);
    let b = partial(2 * n);
    (b * 4.0 - a) / 3.0
}

pub fn rel_err(a: Complex, b: Complex) -> f64 {
    (a - b).norm() / (1.0 + b.norm())
}
