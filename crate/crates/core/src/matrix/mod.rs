//! Matrix pendulum `θ'' = 4c·sin θ` on Hermitian matrices with commuting initial data.
//!
//! Commuting `(θ₀, θ'₀)` share an eigenbasis `U`; in that basis the system splits
//! into `n` scalar pendulums, one per joint eigenpair, and
//! `θ(t) = U·diag(θₖ(t))·U*`.

mod linalg;

pub use linalg::{commutator_norm, hermitian_eig, simultaneous_diagonalize, CMatrix, HermitianMatrix};

use crate::elliptic::Complex;
use crate::error::{Error, Result};
use crate::pendulum::{build_curve, PendulumConfig, PendulumCurve, Regime};

/// Closed-form solution of a commuting matrix pendulum.
#[derive(Debug, Clone)]
pub struct MatrixPendulumSolution {
    c: f64,
    basis: CMatrix,
    curves: Vec<PendulumCurve>,
    commutator: f64,
}

/// Diagonalises `(θ₀, θ'₀)` jointly and builds one scalar curve per eigenpair.
pub fn solve_matrix_pendulum(
    theta0: &HermitianMatrix,
    omega0: &HermitianMatrix,
    c: f64,
    tol: f64,
) -> Result<MatrixPendulumSolution> {
    let (basis, lambda, mu) = simultaneous_diagonalize(theta0, omega0, tol)?;
    let commutator = commutator_norm(theta0, omega0)?;
    let curves = lambda
        .iter()
        .zip(&mu)
        .enumerate()
        .map(|(index, (&theta, &omega))| {
            let curve = build_curve(&PendulumConfig::new(c, theta, omega))?;
            if curve.regime() == Regime::Separatrix {
                return Err(Error::DegenerateEigenpair { index, theta, omega });
            }
            Ok(curve)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MatrixPendulumSolution { c, basis, curves, commutator })
}

impl MatrixPendulumSolution {
    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn dim(&self) -> usize {
        self.curves.len()
    }

    /// Joint eigenbasis `U`.
    pub fn basis(&self) -> &CMatrix {
        &self.basis
    }

    /// Scalar curve for each joint eigenpair, in basis order.
    pub fn curves(&self) -> &[PendulumCurve] {
        &self.curves
    }

    /// `‖θ₀θ'₀ − θ'₀θ₀‖_F` of the input.
    pub fn commutator_norm(&self) -> f64 {
        self.commutator
    }

    /// Real period of each eigen-pendulum; the motion lives on a torus spanned by these.
    pub fn periods(&self) -> Vec<f64> {
        self.curves.iter().map(|c| c.period().unwrap_or(f64::NAN)).collect()
    }

    fn eigen_states(&self, t: f64) -> Result<Vec<(f64, f64)>> {
        if !t.is_finite() {
            return Err(Error::InvalidArgument("non-finite time".into()));
        }
        self.curves.iter().map(|c| c.eval_lifted(t)).collect()
    }

    /// `θ(t)` and `u(t) = exp(iθ(t))`.
    pub fn theta_at(&self, t: f64) -> Result<(HermitianMatrix, CMatrix)> {
        let states = self.eigen_states(t)?;
        let theta: Vec<f64> = states.iter().map(|s| s.0).collect();
        let phases: Vec<Complex> = theta.iter().map(|&x| Complex::from_polar(1.0, x)).collect();
        Ok((HermitianMatrix::from_eigen(&self.basis, &theta), CMatrix::conjugate_diag(&self.basis, &phases)))
    }

    /// `θ'(t)`.
    pub fn omega_at(&self, t: f64) -> Result<HermitianMatrix> {
        let omega: Vec<f64> = self.eigen_states(t)?.iter().map(|s| s.1).collect();
        Ok(HermitianMatrix::from_eigen(&self.basis, &omega))
    }

    /// `E(t) = θ'²/2 + 4c·cos θ`.
    pub fn energy_at(&self, t: f64) -> Result<HermitianMatrix> {
        let e: Vec<f64> =
            self.eigen_states(t)?.iter().map(|&(th, om)| 0.5 * om * om + 4.0 * self.c * th.cos()).collect();
        Ok(HermitianMatrix::from_eigen(&self.basis, &e))
    }
}
