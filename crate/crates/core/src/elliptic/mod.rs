//! Double-precision machinery for Weierstrass elliptic functions.
//!
//! The curve is always written `y² = 4x³ − g₂x − g₃`. Periods are full periods:
//! a [`Lattice`] is generated by `ω₁, ω₂` and `℘` has its poles on
//! `{nω₁ + mω₂}`.

mod carlson;
mod cubic;
mod jacobi;
mod lattice;
mod wp;

pub use carlson::carlson_rf;
pub use cubic::{solve_cubic, CubicRoots};
pub use jacobi::jacobi_am;
pub use lattice::{half_periods, reduce_to_fundamental, Lattice};
pub use wp::{wp, wp_inverse, wp_prime};

/// Complex double; the ambient field of the curve and of `u = e^{iθ}`.
pub type Complex = num_complex::Complex64;

/// The pair `(g₂, g₃)` defining `y² = 4x³ − g₂x − g₃`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Invariants {
    pub g2: Complex,
    pub g3: Complex,
}

impl Invariants {
    pub fn new(g2: Complex, g3: Complex) -> Self {
        Self { g2, g3 }
    }

    pub fn real(g2: f64, g3: f64) -> Self {
        Self::new(Complex::new(g2, 0.0), Complex::new(g3, 0.0))
    }

    /// True when both invariants have an exactly zero imaginary part.
    pub fn is_real(&self) -> bool {
        self.g2.im == 0.0 && self.g3.im == 0.0
    }

    /// `g₂³ − 27g₃²`.
    pub fn discriminant(&self) -> Complex {
        discriminant(self)
    }

    /// Right-hand side of the curve, `4x³ − g₂x − g₃`.
    pub fn cubic(&self, x: Complex) -> Complex {
        (x * x * 4.0 - self.g2) * x - self.g3
    }

    /// Invariants of the lattice scaled by `lambda`: `(λ⁻⁴g₂, λ⁻⁶g₃)`.
    pub fn scaled(&self, lambda: Complex) -> Self {
        let l2 = (lambda * lambda).inv();
        Self::new(self.g2 * l2 * l2, self.g3 * l2 * l2 * l2)
    }

    /// Homogeneous size of the invariants, with the units of `℘`.
    pub(crate) fn scale(&self) -> f64 {
        self.g2.norm().sqrt().max(self.g3.norm().cbrt())
    }

    /// Degenerate when `|Δ| ≤ 1e-9·(1 + |g₂|³)`.
    pub fn is_degenerate(&self) -> bool {
        self.discriminant().norm() <= DEGENERACY_TOL * (1.0 + self.g2.norm().powi(3))
    }
}

/// Relative cutoff on `|Δ|` below which a curve counts as singular.
pub const DEGENERACY_TOL: f64 = 1e-9;

/// `Δ = g₂³ − 27g₃²`; zero exactly when the curve is singular.
pub fn discriminant(inv: &Invariants) -> Complex {
    inv.g2 * inv.g2 * inv.g2 - inv.g3 * inv.g3 * 27.0
}

/// `Im(conj(a)·b)`, the oriented area spanned by `a` and `b`.
#[inline]
pub(crate) fn cross(a: Complex, b: Complex) -> f64 {
    a.re * b.im - a.im * b.re
}
