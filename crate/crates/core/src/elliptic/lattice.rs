use std::f64::consts::PI;

use super::{carlson_rf, cross, discriminant, solve_cubic, Complex, CubicRoots, Invariants};
use crate::error::{Error, Result};

/// Invariants recomputed from the periods must agree to this relative tolerance.
const INVARIANT_CHECK_TOL: f64 = 1e-8;
/// Laurent series is summed for `|z| ≤ LAURENT_RADIUS · (shortest period)`.
pub(crate) const LAURENT_RADIUS: f64 = 0.4;
const MAX_LAURENT_TERMS: usize = 60;

/// Period lattice `Λ = {nω₁ + mω₂}` of a non-singular curve.
///
/// Besides the representative basis it keeps a Gauss-reduced basis for argument
/// reduction and the Laurent coefficients of `℘` at the origin.
#[derive(Debug, Clone)]
pub struct Lattice {
    omega1: Complex,
    omega2: Complex,
    invariants: Invariants,
    discriminant: Complex,
    roots: CubicRoots,
    reduced: (Complex, Complex),
    /// `c_k` for k = 2, 3, ... in `℘(z) = z⁻² + Σ c_k z^{2k−2}`.
    laurent: Vec<Complex>,
    /// Indices into `roots` of `℘(a/2)`, `℘(b/2)`, `℘((a+b)/2)` for the reduced basis `(a, b)`.
    half_roots: [usize; 3],
}

impl Lattice {
    /// Lattice whose `℘` has the given invariants (see [`half_periods`]).
    pub fn from_invariants(inv: &Invariants) -> Result<Self> {
        half_periods(inv)
    }

    /// Lattice generated by two full periods; invariants come from the Eisenstein series.
    pub fn from_periods(omega1: Complex, omega2: Complex) -> Result<Self> {
        check_independent(omega1, omega2)?;
        let omega2 = if (omega2 / omega1).im < 0.0 { -omega2 } else { omega2 };
        let inv = eisenstein_invariants(omega1, omega2);
        Ok(Self::assemble(omega1, omega2, inv))
    }

    fn assemble(omega1: Complex, omega2: Complex, invariants: Invariants) -> Self {
        let reduced = gauss_reduce(omega1, omega2);
        let rho = reduced.0.norm();
        let mut lat = Self {
            omega1,
            omega2,
            invariants,
            discriminant: discriminant(&invariants),
            roots: solve_cubic(&invariants),
            reduced,
            laurent: laurent_coefficients(&invariants, LAURENT_RADIUS * rho),
            half_roots: [0, 1, 2],
        };
        lat.half_roots = lat.match_half_periods();
        lat
    }

    /// Pairs each half-period class with its root `e_i = ℘(ω/2)`.
    fn match_half_periods(&self) -> [usize; 3] {
        let (a, b) = self.reduced;
        let roots = self.roots.as_array();
        let mut out = [0, 1, 2];
        let mut used = [false; 3];
        for (slot, h) in [a / 2.0, b / 2.0, (a + b) / 2.0].into_iter().enumerate() {
            let p = self.wp_direct(h).map(|(p, _)| p).unwrap_or(roots[slot]);
            let best = (0..3)
                .filter(|&i| !used[i])
                .min_by(|&i, &j| (roots[i] - p).norm().total_cmp(&(roots[j] - p).norm()))
                .unwrap_or(slot);
            used[best] = true;
            out[slot] = best;
        }
        out
    }

    pub(crate) fn half_roots(&self) -> [usize; 3] {
        self.half_roots
    }

    /// Splits `z ≡ h + z′ (mod Λ)` with `h` a half-period class (0 for the
    /// origin, 1..=3 for `a/2`, `b/2`, `(a+b)/2`) and `z′` of minimal size.
    pub(crate) fn split_half_period(&self, z: Complex) -> (usize, Complex) {
        let r = self.reduce_small(z * 2.0);
        let (a, b) = self.reduced;
        let (x, y) = coordinates(z * 2.0 - r, a, b);
        let parity = |v: f64| (v.round() as i64).rem_euclid(2) as usize;
        let class = match (parity(x), parity(y)) {
            (0, 0) => 0,
            (1, 0) => 1,
            (0, 1) => 2,
            _ => 3,
        };
        (class, r / 2.0)
    }

    pub fn omega1(&self) -> Complex {
        self.omega1
    }

    pub fn omega2(&self) -> Complex {
        self.omega2
    }

    pub fn invariants(&self) -> &Invariants {
        &self.invariants
    }

    pub fn discriminant(&self) -> Complex {
        self.discriminant
    }

    pub fn roots(&self) -> &CubicRoots {
        &self.roots
    }

    /// Gauss-reduced basis; the first vector is a shortest non-zero period.
    pub fn reduced_basis(&self) -> (Complex, Complex) {
        self.reduced
    }

    pub fn shortest_period(&self) -> f64 {
        self.reduced.0.norm()
    }

    pub(crate) fn laurent(&self) -> &[Complex] {
        &self.laurent
    }

    /// Real coordinates `(x, y)` of `z = x·ω₁ + y·ω₂`.
    pub fn coordinates(&self, z: Complex) -> (f64, f64) {
        coordinates(z, self.omega1, self.omega2)
    }

    /// Whether `w` is a period, i.e. both lattice coordinates are within `tol` of integers.
    pub fn contains(&self, w: Complex, tol: f64) -> bool {
        let (x, y) = self.coordinates(w);
        (x - x.round()).abs() <= tol && (y - y.round()).abs() <= tol
    }

    /// Whether both lattices are the same subgroup of ℂ.
    pub fn is_equivalent(&self, other: &Lattice, tol: f64) -> bool {
        self.contains(other.omega1, tol)
            && self.contains(other.omega2, tol)
            && other.contains(self.omega1, tol)
            && other.contains(self.omega2, tol)
    }

    /// Smallest positive real period, if the lattice has one.
    pub fn real_period(&self) -> Option<f64> {
        let (a, b) = self.reduced;
        let scale = self.shortest_period();
        // the shortest real period is n·a + m·b with small coefficients for a reduced basis
        let mut best: Option<f64> = None;
        for n in -4i32..=4 {
            for m in -4i32..=4 {
                let v = a * n as f64 + b * m as f64;
                if v.re > 0.0 && v.im.abs() <= 1e-9 * scale {
                    best = Some(best.map_or(v.re, |x: f64| x.min(v.re)));
                }
            }
        }
        best
    }

    /// Argument reduction with the reduced basis, returning the representative
    /// of smallest modulus among the neighbouring cells.
    pub(crate) fn reduce_small(&self, z: Complex) -> Complex {
        let (a, b) = self.reduced;
        let base = reduce_with(z, a, b);
        let mut best = base;
        for v in [a, -a, b, -b, a + b, -a - b, a - b, b - a] {
            let cand = base + v;
            if cand.norm() < best.norm() {
                best = cand;
            }
        }
        best
    }
}

/// Reduces `z` modulo the lattice so that its coordinates in the basis
/// `(ω₁, ω₂)` lie in `[−½, ½)`.
pub fn reduce_to_fundamental(z: Complex, lat: &Lattice) -> Complex {
    reduce_with(z, lat.omega1, lat.omega2)
}

fn reduce_with(z: Complex, w1: Complex, w2: Complex) -> Complex {
    let (x, y) = coordinates(z, w1, w2);
    let n = (x + 0.5).floor();
    let m = (y + 0.5).floor();
    z - w1 * n - w2 * m
}

fn coordinates(z: Complex, w1: Complex, w2: Complex) -> (f64, f64) {
    let area = cross(w1, w2);
    (cross(z, w2) / area, cross(w1, z) / area)
}

fn check_independent(w1: Complex, w2: Complex) -> Result<()> {
    if !(w1.is_finite() && w2.is_finite()) || w1.norm() == 0.0 || w2.norm() == 0.0 {
        return Err(Error::InvalidArgument("periods must be finite and non-zero".into()));
    }
    if (w2 / w1).im.abs() <= 1e-10 {
        return Err(Error::InvalidArgument("periods are linearly dependent over the reals".into()));
    }
    Ok(())
}

/// Lagrange–Gauss reduction of a planar basis; returns `(a, b)` with `|a| ≤ |b|`
/// and `|Re(b/a)| ≤ ½`.
pub(crate) fn gauss_reduce(mut a: Complex, mut b: Complex) -> (Complex, Complex) {
    if a.norm_sqr() > b.norm_sqr() {
        std::mem::swap(&mut a, &mut b);
    }
    for _ in 0..200 {
        let mu = (b * a.conj()).re / a.norm_sqr();
        b -= a * mu.round();
        if b.norm_sqr() >= a.norm_sqr() {
            break;
        }
        std::mem::swap(&mut a, &mut b);
    }
    (a, b)
}

/// `g₂, g₃` of the lattice `ω₁ℤ + ω₂ℤ` from the Eisenstein series `E₄`, `E₆`.
pub(crate) fn eisenstein_invariants(w1: Complex, w2: Complex) -> Invariants {
    let (a, mut b) = gauss_reduce(w1, w2);
    if (b / a).im < 0.0 {
        b = -b;
    }
    let tau = b / a;
    let q = (Complex::new(0.0, 2.0 * PI) * tau).exp();
    let (mut s3, mut s5) = (Complex::new(0.0, 0.0), Complex::new(0.0, 0.0));
    let mut qn = q;
    for n in 1..200 {
        let nf = n as f64;
        let lambert = qn / (1.0 - qn);
        let t3 = lambert * nf.powi(3);
        let t5 = lambert * nf.powi(5);
        s3 += t3;
        s5 += t5;
        if t5.norm() < 1e-18 * (1.0 + s5.norm()) && t3.norm() < 1e-18 {
            break;
        }
        qn *= q;
    }
    let e4 = 1.0 + s3 * 240.0;
    let e6 = 1.0 - s5 * 504.0;
    let a2 = a * a;
    let g2 = e4 * (4.0 * PI.powi(4) / 3.0) / (a2 * a2);
    let g3 = e6 * (8.0 * PI.powi(6) / 27.0) / (a2 * a2 * a2);
    Invariants::new(g2, g3)
}

fn laurent_coefficients(inv: &Invariants, radius: f64) -> Vec<Complex> {
    // c[0] = c_2, c[1] = c_3, c_k = 3/((2k+1)(k−3)) Σ_{m=2}^{k−2} c_m c_{k−m}
    let mut c = vec![inv.g2 / 20.0, inv.g3 / 28.0];
    let r2 = radius * radius;
    let mut rpow = r2 * r2 * r2;
    for k in 4..(MAX_LAURENT_TERMS + 2) {
        let mut sum = Complex::new(0.0, 0.0);
        for m in 2..=(k - 2) {
            sum += c[m - 2] * c[k - m - 2];
        }
        let ck = sum * (3.0 / (((2 * k + 1) * (k - 3)) as f64));
        c.push(ck);
        rpow *= r2;
        // term size relative to the leading 1/z² at |z| = radius
        if (ck * rpow).norm() < 1e-18 && k > 6 {
            break;
        }
    }
    c
}

fn invariants_agree(a: &Invariants, b: &Invariants, tol: f64) -> bool {
    let s = a.scale().max(b.scale()).max(f64::MIN_POSITIVE);
    (a.g2 - b.g2).norm() <= tol * s * s && (a.g3 - b.g3).norm() <= tol * s * s * s
}

/// Period lattice of the curve `y² = 4x³ − g₂x − g₃`.
///
/// Real invariants give the conventional representative: for `Δ > 0` a
/// rectangular basis (`ω₁` real, `ω₂` purely imaginary), for `Δ < 0` the
/// rhombic basis `ω₁` real, `ω₂ = ω₁/2 + iβ`. Complex invariants give a reduced
/// basis with `ω₁` a shortest period. Either way `Im(ω₂/ω₁) > 0`, and the
/// Eisenstein invariants of the result are checked against the input.
pub fn half_periods(inv: &Invariants) -> Result<Lattice> {
    let delta = discriminant(inv);
    if !(inv.g2.is_finite() && inv.g3.is_finite()) {
        return Err(Error::InvalidArgument("non-finite invariants".into()));
    }
    if inv.is_degenerate() {
        return Err(Error::DegenerateCurve { discriminant: delta.norm() });
    }
    let roots = solve_cubic(inv);
    let (w1, w2) =
        if inv.is_real() { real_periods(&roots, delta.re)? } else { complex_periods(inv, &roots)? };
    let lat = Lattice::assemble(w1, w2, *inv);
    if !invariants_agree(&eisenstein_invariants(w1, w2), inv, INVARIANT_CHECK_TOL) {
        return Err(Error::NonConvergence { what: "period lattice reconstruction", limit: 1 });
    }
    Ok(lat)
}

fn real_periods(roots: &CubicRoots, delta: f64) -> Result<(Complex, Complex)> {
    let zero = Complex::new(0.0, 0.0);
    let [e1, e2, e3] = roots.as_array();
    if delta > 0.0 {
        // e1 > e2 > e3, all real
        let w1 = carlson_rf(zero, e1 - e2, e1 - e3)? * 2.0;
        let w2 = carlson_rf(zero, e1 - e3, e2 - e3)? * 2.0;
        Ok((Complex::new(w1.re, 0.0), Complex::new(0.0, w2.re)))
    } else {
        let (er, ec) = if e1.im == 0.0 {
            (e1, if e2.im > 0.0 { e2 } else { e3 })
        } else if e2.im == 0.0 {
            (e2, if e1.im > 0.0 { e1 } else { e3 })
        } else {
            (e3, if e1.im > 0.0 { e1 } else { e2 })
        };
        let z = er - ec;
        let w1 = carlson_rf(zero, z, z.conj())?.re * 2.0;
        // imaginary half-period: real half-period of the reflected curve (g₂, −g₃)
        let beta = carlson_rf(zero, -z, -z.conj())?.re;
        Ok((Complex::new(w1, 0.0), Complex::new(w1 / 2.0, beta)))
    }
}

fn complex_periods(inv: &Invariants, roots: &CubicRoots) -> Result<(Complex, Complex)> {
    let zero = Complex::new(0.0, 0.0);
    let e = roots.as_array();
    // ℘⁻¹(e_i) = R_F(0, e_i − e_j, e_i − e_k) is a half-period for each i
    let mut cands = Vec::with_capacity(3);
    for i in 0..3 {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        cands.push(carlson_rf(zero, e[i] - e[j], e[i] - e[k])? * 2.0);
    }
    let scale = cands.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let (a, b) = basis_of(cands, 1e-9 * scale)
        .ok_or(Error::NonConvergence { what: "period basis extraction", limit: 64 })?;
    let (a, b) = repair_index(a, b, inv)
        .ok_or(Error::NonConvergence { what: "period lattice reconstruction", limit: 2 })?;
    Ok(canonical_basis(a, b))
}

/// Basis of the lattice generated by a finite set of periods.
fn basis_of(mut vs: Vec<Complex>, tol: f64) -> Option<(Complex, Complex)> {
    for _ in 0..64 {
        vs.retain(|v| v.norm() > tol);
        vs.sort_by(|x, y| x.norm().total_cmp(&y.norm()));
        if vs.len() < 2 {
            return None;
        }
        let a = vs[0];
        let Some(pos) =
            vs[1..].iter().position(|&b| cross(a, b).abs() > 1e-10 * a.norm() * b.norm()).map(|p| p + 1)
        else {
            // all collinear: one Euclid step along a
            let b = vs[1];
            vs[1] = b - a * ((b * a.conj()).re / a.norm_sqr()).round();
            continue;
        };
        let (a, b) = gauss_reduce(a, vs[pos]);
        let mut rest: Vec<Complex> = vs
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != 0 && i != pos)
            .map(|(_, &v)| reduce_with(v, a, b))
            .filter(|r| r.norm() > tol)
            .collect();
        if rest.is_empty() {
            return Some((a, b));
        }
        rest.push(a);
        rest.push(b);
        vs = rest;
    }
    None
}

/// If `(a, b)` spans a sublattice of small index, find the superlattice whose
/// invariants match.
fn repair_index(a: Complex, b: Complex, inv: &Invariants) -> Option<(Complex, Complex)> {
    let matches =
        |x: Complex, y: Complex| invariants_agree(&eisenstein_invariants(x, y), inv, INVARIANT_CHECK_TOL);
    if matches(a, b) {
        return Some((a, b));
    }
    for p in [2.0, 3.0] {
        for i in 0..(p as i32) {
            for j in 0..(p as i32) {
                if i == 0 && j == 0 {
                    continue;
                }
                let extra = (a * i as f64 + b * j as f64) / p;
                let tol = 1e-9 * b.norm();
                if let Some((x, y)) = basis_of(vec![a, b, extra], tol) {
                    if matches(x, y) {
                        return Some((x, y));
                    }
                }
            }
        }
    }
    None
}

fn canonical_basis(a: Complex, b: Complex) -> (Complex, Complex) {
    let (mut a, mut b) = gauss_reduce(a, b);
    if a.re < 0.0 || (a.re == 0.0 && a.im < 0.0) {
        a = -a;
    }
    if (b / a).im < 0.0 {
        b = -b;
    }
    (a, b)
}
