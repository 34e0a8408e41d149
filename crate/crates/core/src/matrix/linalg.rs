use std::ops::{Add, Index, IndexMut, Mul, Sub};

use crate::elliptic::Complex;
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 100;

/// Dense square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    n: usize,
    data: Vec<Complex>,
}

impl CMatrix {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![Complex::new(0.0, 0.0); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_diag(&vec![Complex::new(1.0, 0.0); n])
    }

    pub fn from_diag(d: &[Complex]) -> Self {
        let mut m = Self::zeros(d.len());
        for (i, &v) in d.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Complex) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Self { n, data }
    }

    /// Row-major entries; fails unless there are exactly `n²` of them.
    pub fn from_rows(n: usize, data: Vec<Complex>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::DimensionMismatch(n * n, data.len()));
        }
        Ok(Self { n, data })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[Complex] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.n, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, s: f64) -> Self {
        Self { n: self.n, data: self.data.iter().map(|v| v * s).collect() }
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Frobenius norm of the strictly off-diagonal part.
    pub fn off_diagonal_norm(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..self.n {
            for j in 0..self.n {
                if i != j {
                    s += self[(i, j)].norm_sqr();
                }
            }
        }
        s.sqrt()
    }

    pub fn diagonal(&self) -> Vec<Complex> {
        (0..self.n).map(|i| self[(i, i)]).collect()
    }

    /// `‖M − M*‖_F / 2`.
    pub fn anti_hermitian_norm(&self) -> f64 {
        (self - &self.adjoint()).frobenius() / 2.0
    }

    /// `‖M*M − I‖_F`.
    pub fn unitarity_defect(&self) -> f64 {
        (&(&self.adjoint() * self) - &Self::identity(self.n)).frobenius()
    }

    /// Columns `cols` as an `n × cols.len()` block, stored column-major in a Vec of columns.
    pub(crate) fn columns(&self, cols: &[usize]) -> Vec<Vec<Complex>> {
        cols.iter().map(|&j| (0..self.n).map(|i| self[(i, j)]).collect()).collect()
    }

    pub(crate) fn set_column(&mut self, j: usize, col: &[Complex]) {
        for (i, &v) in col.iter().enumerate() {
            self[(i, j)] = v;
        }
    }

    /// `U·diag(d)·U*`.
    pub fn conjugate_diag(u: &CMatrix, d: &[Complex]) -> CMatrix {
        let n = u.n;
        CMatrix::from_fn(n, |i, j| {
            let mut s = Complex::new(0.0, 0.0);
            for k in 0..n {
                s += u[(i, k)] * d[k] * u[(j, k)].conj();
            }
            s
        })
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex;
    fn index(&self, (i, j): (usize, usize)) -> &Complex {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex {
        &mut self.data[i * self.n + j]
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        let n = self.n;
        let mut out = CMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == Complex::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        out
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;
    fn add(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        CMatrix { n: self.n, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;
    fn sub(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        CMatrix { n: self.n, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect() }
    }
}

/// Self-adjoint `n × n` complex matrix with an exactly real diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix(CMatrix);

impl HermitianMatrix {
    /// Accepts `m` if `‖m − m*‖` is within `tol` entrywise and stores its Hermitian part.
    pub fn new(m: CMatrix, tol: f64) -> Result<Self> {
        let n = m.dim();
        for i in 0..n {
            for j in 0..n {
                if (m[(i, j)] - m[(j, i)].conj()).norm() > tol {
                    return Err(Error::InvalidArgument(format!(
                        "matrix is not Hermitian at entry ({i}, {j})"
                    )));
                }
            }
        }
        Ok(Self::hermitian_part(&m))
    }

    /// `(m + m*)/2`, with the diagonal made exactly real.
    pub fn hermitian_part(m: &CMatrix) -> Self {
        let mut h = (m + &m.adjoint()).scale(0.5);
        for i in 0..h.dim() {
            h[(i, i)].im = 0.0;
        }
        Self(h)
    }

    pub fn from_real_diag(d: &[f64]) -> Self {
        Self(CMatrix::from_diag(&d.iter().map(|&x| Complex::new(x, 0.0)).collect::<Vec<_>>()))
    }

    pub fn zeros(n: usize) -> Self {
        Self(CMatrix::zeros(n))
    }

    /// `U·diag(d)·U*` for real `d`.
    pub fn from_eigen(u: &CMatrix, d: &[f64]) -> Self {
        let d: Vec<Complex> = d.iter().map(|&x| Complex::new(x, 0.0)).collect();
        Self::hermitian_part(&CMatrix::conjugate_diag(u, &d))
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> CMatrix {
        self.0
    }

    pub fn frobenius(&self) -> f64 {
        self.0.frobenius()
    }

    /// Functional calculus `f(A) = U·diag(f(λ))·U*`.
    pub fn apply(&self, f: impl Fn(f64) -> Complex) -> Result<CMatrix> {
        let (u, lambda) = hermitian_eig(self)?;
        let d: Vec<Complex> = lambda.into_iter().map(f).collect();
        Ok(CMatrix::conjugate_diag(&u, &d))
    }

    pub fn sin(&self) -> Result<HermitianMatrix> {
        self.apply(|x| Complex::new(x.sin(), 0.0)).map(|m| Self::hermitian_part(&m))
    }

    pub fn cos(&self) -> Result<HermitianMatrix> {
        self.apply(|x| Complex::new(x.cos(), 0.0)).map(|m| Self::hermitian_part(&m))
    }

    /// `exp(iA)`, unitary.
    pub fn exp_i(&self) -> Result<CMatrix> {
        self.apply(|x| Complex::from_polar(1.0, x))
    }
}

impl std::ops::Deref for HermitianMatrix {
    type Target = CMatrix;
    fn deref(&self) -> &CMatrix {
        &self.0
    }
}

/// Frobenius norm of `AB − BA`.
pub fn commutator_norm(a: &HermitianMatrix, b: &HermitianMatrix) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(a.dim(), b.dim()));
    }
    Ok((&(a.matrix() * b.matrix()) - &(b.matrix() * a.matrix())).frobenius())
}

/// Eigen-decomposition `A = U·diag(λ)·U*` by cyclic complex Jacobi rotations;
/// eigenvalues ascending.
pub fn hermitian_eig(a: &HermitianMatrix) -> Result<(CMatrix, Vec<f64>)> {
    let n = a.dim();
    let mut m = a.matrix().clone();
    let mut v = CMatrix::identity(n);
    let norm = m.frobenius();
    let mut converged = norm == 0.0;
    for _ in 0..MAX_SWEEPS {
        if converged || m.off_diagonal_norm() <= 1e-15 * norm {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut m, &mut v, p, q);
            }
        }
    }
    if !converged {
        return Err(Error::NonConvergence { what: "Hermitian Jacobi sweeps", limit: MAX_SWEEPS });
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].re.total_cmp(&m[(j, j)].re));
    let lambda = order.iter().map(|&i| m[(i, i)].re).collect();
    let u = CMatrix::from_fn(n, |i, j| v[(i, order[j])]);
    Ok((u, lambda))
}

/// Annihilates `m[p][q]` with the unitary `G = diag(1, e^{−iφ})·[[c, s], [−s, c]]`,
/// `M ← G*MG`, `V ← VG`.
fn rotate(m: &mut CMatrix, v: &mut CMatrix, p: usize, q: usize) {
    let apq = m[(p, q)];
    let abs = apq.norm();
    if abs == 0.0 {
        return;
    }
    let n = m.dim();
    let phase = apq / abs;
    let tau = (m[(q, q)].re - m[(p, p)].re) / (2.0 * abs);
    let t = if tau >= 0.0 { 1.0 } else { -1.0 } / (tau.abs() + (1.0 + tau * tau).sqrt());
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let cp = phase.conj();
    for k in 0..n {
        let (mkp, mkq) = (m[(k, p)], m[(k, q)]);
        m[(k, p)] = mkp * c - mkq * cp * s;
        m[(k, q)] = mkp * s + mkq * cp * c;
        let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
        v[(k, p)] = vkp * c - vkq * cp * s;
        v[(k, q)] = vkp * s + vkq * cp * c;
    }
    for k in 0..n {
        let (mpk, mqk) = (m[(p, k)], m[(q, k)]);
        m[(p, k)] = mpk * c - mqk * phase * s;
        m[(q, k)] = mpk * s + mqk * phase * c;
    }
    m[(p, q)] = Complex::new(0.0, 0.0);
    m[(q, p)] = Complex::new(0.0, 0.0);
    m[(p, p)].im = 0.0;
    m[(q, q)].im = 0.0;
}

/// One unitary diagonalising both commuting Hermitian matrices.
///
/// Returns `(U, λ, μ)` with `A = U·diag(λ)·U*` and `B = U·diag(μ)·U*`.
/// Clusters of `A`-eigenvalues closer than `1e-8·‖A‖` are split by
/// diagonalising `B` restricted to the cluster.
pub fn simultaneous_diagonalize(
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    tol: f64,
) -> Result<(CMatrix, Vec<f64>, Vec<f64>)> {
    let comm = commutator_norm(a, b)?;
    let scale = a.frobenius() + b.frobenius();
    if comm > tol * scale {
        return Err(Error::NonCommutingInput { norm: comm });
    }
    let n = a.dim();
    let (mut u, lambda) = hermitian_eig(a)?;
    let gap = 1e-8 * a.frobenius();
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && lambda[end] - lambda[end - 1] <= gap {
            end += 1;
        }
        if end - start > 1 {
            let idx: Vec<usize> = (start..end).collect();
            let cols = u.columns(&idx);
            let k = idx.len();
            // B restricted to the cluster: Vc* B Vc
            let bc = CMatrix::from_fn(k, |i, j| {
                let mut s = Complex::new(0.0, 0.0);
                for r in 0..n {
                    for t in 0..n {
                        s += cols[i][r].conj() * b.matrix()[(r, t)] * cols[j][t];
                    }
                }
                s
            });
            let (w, _) = hermitian_eig(&HermitianMatrix::hermitian_part(&bc))?;
            for (jj, &col) in idx.iter().enumerate() {
                let new: Vec<Complex> =
                    (0..n).map(|r| (0..k).map(|i| cols[i][r] * w[(i, jj)]).sum()).collect();
                u.set_column(col, &new);
            }
        }
        start = end;
    }
    let ua = &(&u.adjoint() * a.matrix()) * &u;
    let ub = &(&u.adjoint() * b.matrix()) * &u;
    let residual = ub.off_diagonal_norm().max(ua.off_diagonal_norm());
    if residual > 1e-8 * scale.max(1.0) {
        return Err(Error::NonCommutingInput { norm: comm });
    }
    let lambda = ua.diagonal().iter().map(|z| z.re).collect();
    let mu = ub.diagonal().iter().map(|z| z.re).collect();
    Ok((u, lambda, mu))
}
