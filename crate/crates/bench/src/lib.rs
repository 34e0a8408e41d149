//! Fixtures shared by the benchmarks.

use pendulum_core::{CMatrix, Complex, HermitianMatrix, PendulumConfig};

/// The six reference configurations, `c = −1`, `θ₀ = 0`.
pub fn reference_configs() -> Vec<PendulumConfig> {
    [1.0, 2.0, 3.0, 3.9, 4.1, 5.0].into_iter().map(|om| PendulumConfig::new(-1.0, 0.0, om)).collect()
}

/// `n` uniform times on `[0, t_end]`.
pub fn grid(t_end: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| t_end * i as f64 / (n - 1) as f64).collect()
}

/// Deterministic dense Hermitian matrix with a spread spectrum.
pub fn hermitian(n: usize) -> HermitianMatrix {
    let m = CMatrix::from_fn(n, |i, j| {
        let (a, b) = (i as f64, j as f64);
        Complex::new((a * 1.3 + b * 0.7).sin(), (a * 0.4 - b * 1.1).cos())
    });
    HermitianMatrix::hermitian_part(&m)
}
