//! Closed-form solution of the mathematical pendulum `θ'' = 4c sin θ` through the
//! Weierstrass elliptic function.
//!
//! Every non-critical initial condition `(θ₀, θ'₀)` determines an elliptic curve
//! `y² = 4x³ − g₂x − g₃` and a point on it; the motion is a straight-line
//! translation on the period torus, and `θ(t) = arg(b + c·℘(c(t + g₁)))`.
//!
//! * [`elliptic`]: cubic roots, Carlson `R_F`, lattices, `℘`, `℘'`, `℘⁻¹` and the Jacobi amplitude.
//! * [`pendulum`]: curve construction from initial data and trajectory evaluation.
//! * [`matrix`]: Hermitian functional calculus and the commuting matrix pendulum on `U(n)`.
//! * [`ode`]: adaptive Dormand–Prince oracle used to validate the closed form.

// `!(x < y)` guards are deliberate: they also reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod elliptic;
pub mod error;
pub mod matrix;
pub mod ode;
pub mod pendulum;

pub use elliptic::{
    carlson_rf, discriminant, half_periods, jacobi_am, reduce_to_fundamental, solve_cubic, wp, wp_inverse,
    wp_prime, Complex, CubicRoots, Invariants, Lattice,
};
pub use error::{Error, Result};
pub use matrix::{
    commutator_norm, hermitian_eig, simultaneous_diagonalize, solve_matrix_pendulum, CMatrix,
    HermitianMatrix, MatrixPendulumSolution,
};
pub use ode::{integrate_matrix, integrate_scalar, residual_check, IntegratorSettings, OracleRun};
pub use pendulum::{
    build_curve, classify, energy, jacobi_solution, PendulumConfig, PendulumCurve, Regime, Sample, Trajectory,
};
