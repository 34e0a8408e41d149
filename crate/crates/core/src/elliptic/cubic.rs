use std::cmp::Ordering;
use std::f64::consts::PI;

use super::{Complex, Invariants};

/// Roots of `4x³ − g₂x − g₃`, sorted by descending real part and then by
/// descending imaginary part.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CubicRoots {
    pub e1: Complex,
    pub e2: Complex,
    pub e3: Complex,
}

impl CubicRoots {
    pub fn as_array(&self) -> [Complex; 3] {
        [self.e1, self.e2, self.e3]
    }

    fn from_unordered(mut roots: [Complex; 3]) -> Self {
        let scale = roots.iter().map(|r| r.norm()).fold(0.0, f64::max);
        let tie = 1e-12 * scale.max(f64::MIN_POSITIVE);
        roots.sort_by(|a, b| {
            if (a.re - b.re).abs() > tie {
                b.re.partial_cmp(&a.re).unwrap_or(Ordering::Equal)
            } else {
                b.im.partial_cmp(&a.im).unwrap_or(Ordering::Equal)
            }
        });
        Self { e1: roots[0], e2: roots[1], e3: roots[2] }
    }
}

/// Solves `4x³ − g₂x − g₃ = 0`.
///
/// Real invariants go through the real cubic formulas so that the output is
/// exactly real or exactly conjugate; complex invariants use Cardano with the
/// cancellation-free branch. Each root gets a Newton polish.
pub fn solve_cubic(inv: &Invariants) -> CubicRoots {
    // depressed form x³ + px + q = 0
    if inv.is_real() {
        let p = -inv.g2.re / 4.0;
        let q = -inv.g3.re / 4.0;
        CubicRoots::from_unordered(real_depressed(p, q))
    } else {
        let p = -inv.g2 / 4.0;
        let q = -inv.g3 / 4.0;
        CubicRoots::from_unordered(complex_depressed(p, q))
    }
}

fn real_depressed(p: f64, q: f64) -> [Complex; 3] {
    let re = |x: f64| Complex::new(x, 0.0);
    if p == 0.0 && q == 0.0 {
        return [re(0.0); 3];
    }
    let disc = -(4.0 * p * p * p + 27.0 * q * q);
    if disc > 0.0 {
        // three distinct real roots, p < 0 here
        let m = 2.0 * (-p / 3.0).sqrt();
        let arg = (3.0 * q / (p * m)).clamp(-1.0, 1.0);
        let phi = arg.acos() / 3.0;
        let mut out = [0.0; 3];
        for (k, r) in out.iter_mut().enumerate() {
            *r = polish_real(m * (phi - 2.0 * PI * k as f64 / 3.0).cos(), p, q);
        }
        return out.map(re);
    }
    let s = (q * q / 4.0 + p * p * p / 27.0).max(0.0).sqrt();
    let u = (-q / 2.0 - q.signum() * s).cbrt();
    let v = if u != 0.0 { -p / (3.0 * u) } else { 0.0 };
    let r = polish_real(u + v, p, q);
    // remaining quadratic x² + rx + (r² + p)
    let im = (0.75 * r * r + p).max(0.0).sqrt();
    [re(r), Complex::new(-r / 2.0, im), Complex::new(-r / 2.0, -im)]
}

fn polish_real(mut x: f64, p: f64, q: f64) -> f64 {
    for _ in 0..3 {
        let f = (x * x + p) * x + q;
        let df = 3.0 * x * x + p;
        if df.abs() <= f64::EPSILON * (x * x).max(p.abs()) {
            break;
        }
        let step = f / df;
        x -= step;
        if step.abs() <= f64::EPSILON * x.abs() {
            break;
        }
    }
    x
}

fn complex_depressed(p: Complex, q: Complex) -> [Complex; 3] {
    let zero = Complex::new(0.0, 0.0);
    if p == zero && q == zero {
        return [zero; 3];
    }
    let s = (q * q / 4.0 + p * p * p / 27.0).sqrt();
    let a = -q / 2.0 + s;
    let b = -q / 2.0 - s;
    let u3 = if a.norm() >= b.norm() { a } else { b };
    let u = u3.powf(1.0 / 3.0);
    let omega = Complex::from_polar(1.0, 2.0 * PI / 3.0);
    let mut out = [zero; 3];
    let mut rot = Complex::new(1.0, 0.0);
    for r in out.iter_mut() {
        let uk = u * rot;
        let x = if uk.norm() > 0.0 { uk - p / (uk * 3.0) } else { zero };
        *r = polish_complex(x, p, q);
        rot *= omega;
    }
    out
}

fn polish_complex(mut x: Complex, p: Complex, q: Complex) -> Complex {
    for _ in 0..3 {
        let f = (x * x + p) * x + q;
        let df = x * x * 3.0 + p;
        if df.norm() <= f64::EPSILON * (x * x).norm().max(p.norm()) {
            break;
        }
        let step = f / df;
        x -= step;
        if step.norm() <= f64::EPSILON * x.norm() {
            break;
        }
    }
    x
}
