//! Harmonic analysis on SU(2) and SO(3).
//!
//! Group elements are unit quaternions `q = a + bi + cj + dk`, identified
//! with `U = [[a+bi, c+di], [−c+di, a−bi]]`. The spin-`j` representation
//! acts on homogeneous polynomials of degree `2j` by `f ↦ f((x,y)U)`, in the
//! orthonormal basis `x^{j+m} y^{j−m} / sqrt((j+m)!(j−m)!)`.
//!
//! Fourier convention: `f̂(j) = ∫ f(g) D_j(g) dg` for Haar probability,
//! inverted by `f(g) = Σ_j (2j+1) tr(f̂(j) D_j(g)†)`.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;

use nalgebra::DMatrix;
use num::Complex;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::Diagnostic;

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HarmError {
    #[error("weights do not form a probability vector (sum {sum})")]
    NotProbability { sum: f64 },
    #[error("quadrature did not stabilise: {coarse} vs {fine}")]
    QuadratureDivergence { coarse: f64, fine: f64 },
    #[error("δ = {0} is outside (0, π)")]
    DeltaOutOfRange(f64),
    #[error("half-integer spin {two_j}/2 is not a representation of SO(3)")]
    HalfIntegerOnSO3 { two_j: u32 },
    #[error("n must be at least 1")]
    ZeroPower,
}

impl Diagnostic for HarmError {
    fn module(&self) -> &'static str {
        "su2harm"
    }
    fn code(&self) -> &'static str {
        match self {
            HarmError::NotProbability { .. } => "NotProbability",
            HarmError::QuadratureDivergence { .. } => "QuadratureDivergence",
            HarmError::DeltaOutOfRange(_) => "DeltaOutOfRange",
            HarmError::HalfIntegerOnSO3 { .. } => "HalfIntegerOnSO3",
            HarmError::ZeroPower => "ZeroPower",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GroupKind {
    SU2,
    SO3,
}

impl fmt::Display for GroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupKind::SU2 => write!(f, "SU2"),
            GroupKind::SO3 => write!(f, "SO3"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitQuaternion {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl UnitQuaternion {
    pub const IDENTITY: UnitQuaternion = UnitQuaternion { a: 1.0, b: 0.0, c: 0.0, d: 0.0 };

    /// Normalises `(a, b, c, d)`.
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        let n = (a * a + b * b + c * c + d * d).sqrt();
        UnitQuaternion { a: a / n, b: b / n, c: c / n, d: d / n }
    }

    /// Rotation by `angle` about the unit vector `axis`.
    pub fn from_axis_angle(axis: [f64; 3], angle: f64) -> Self {
        let n = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
        let (s, c) = (angle / 2.0).sin_cos();
        UnitQuaternion { a: c, b: s * axis[0] / n, c: s * axis[1] / n, d: s * axis[2] / n }
    }

    /// Haar-random element (Shoemake's construction).
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let u1: f64 = rng.random();
        let u2: f64 = rng.random();
        let u3: f64 = rng.random();
        let (s1, s2) = ((1.0 - u1).sqrt(), u1.sqrt());
        let (t2, t3) = (2.0 * PI * u2, 2.0 * PI * u3);
        UnitQuaternion { a: s1 * t2.sin(), b: s1 * t2.cos(), c: s2 * t3.sin(), d: s2 * t3.cos() }
    }

    pub fn norm2(&self) -> f64 {
        self.a * self.a + self.b * self.b + self.c * self.c + self.d * self.d
    }

    pub fn mul(&self, o: &Self) -> Self {
        UnitQuaternion {
            a: self.a * o.a - self.b * o.b - self.c * o.c - self.d * o.d,
            b: self.a * o.b + self.b * o.a + self.c * o.d - self.d * o.c,
            c: self.a * o.c - self.b * o.d + self.c * o.a + self.d * o.b,
            d: self.a * o.d + self.b * o.c - self.c * o.b + self.d * o.a,
        }
    }

    pub fn inverse(&self) -> Self {
        UnitQuaternion { a: self.a, b: -self.b, c: -self.c, d: -self.d }
    }

    pub fn dot(&self, o: &Self) -> f64 {
        self.a * o.a + self.b * o.b + self.c * o.c + self.d * o.d
    }

    pub fn vector(&self) -> [f64; 3] {
        [self.b, self.c, self.d]
    }

    pub fn neg(&self) -> Self {
        UnitQuaternion { a: -self.a, b: -self.b, c: -self.c, d: -self.d }
    }

    /// Representative with `a > 0` (or the first nonzero coordinate
    /// positive), for hashing rotations.
    pub fn canonical_sign(&self) -> Self {
        let first = [self.a, self.b, self.c, self.d].into_iter().find(|x| *x != 0.0).unwrap_or(1.0);
        if first < 0.0 {
            self.neg()
        } else {
            *self
        }
    }

    pub fn to_su2(&self) -> [[C64; 2]; 2] {
        [
            [C64::new(self.a, self.b), C64::new(self.c, self.d)],
            [C64::new(-self.c, self.d), C64::new(self.a, -self.b)],
        ]
    }

    pub fn to_rotation(&self) -> [[f64; 3]; 3] {
        let (a, b, c, d) = (self.a, self.b, self.c, self.d);
        [
            [a * a + b * b - c * c - d * d, 2.0 * (b * c - a * d), 2.0 * (b * d + a * c)],
            [2.0 * (b * c + a * d), a * a - b * b + c * c - d * d, 2.0 * (c * d - a * b)],
            [2.0 * (b * d - a * c), 2.0 * (c * d + a * b), a * a - b * b - c * c + d * d],
        ]
    }

    /// One of the two quaternions covering the rotation `r`.
    pub fn from_rotation(r: &[[f64; 3]; 3]) -> Self {
        let tr = r[0][0] + r[1][1] + r[2][2];
        let q = if tr > 0.0 {
            let s = (tr + 1.0).sqrt() * 2.0;
            (0.25 * s, (r[2][1] - r[1][2]) / s, (r[0][2] - r[2][0]) / s, (r[1][0] - r[0][1]) / s)
        } else if r[0][0] > r[1][1] && r[0][0] > r[2][2] {
            let s = (1.0 + r[0][0] - r[1][1] - r[2][2]).sqrt() * 2.0;
            ((r[2][1] - r[1][2]) / s, 0.25 * s, (r[0][1] + r[1][0]) / s, (r[0][2] + r[2][0]) / s)
        } else if r[1][1] > r[2][2] {
            let s = (1.0 + r[1][1] - r[0][0] - r[2][2]).sqrt() * 2.0;
            ((r[0][2] - r[2][0]) / s, (r[0][1] + r[1][0]) / s, 0.25 * s, (r[1][2] + r[2][1]) / s)
        } else {
            let s = (1.0 + r[2][2] - r[0][0] - r[1][1]).sqrt() * 2.0;
            ((r[1][0] - r[0][1]) / s, (r[0][2] + r[2][0]) / s, (r[1][2] + r[2][1]) / s, 0.25 * s)
        };
        UnitQuaternion::new(q.0, q.1, q.2, q.3)
    }

    /// Rotation angle in `[0, π]` of the image in SO(3).
    pub fn rotation_angle(&self) -> f64 {
        2.0 * self.a.abs().min(1.0).acos()
    }
}

/// Bi-invariant distance: rotation angle of `x⁻¹y` on SO(3); on SU(2) the
/// angle `2 arccos <x, y>` ranges over `[0, 2π]`.
pub fn distance(kind: GroupKind, x: &UnitQuaternion, y: &UnitQuaternion) -> f64 {
    let d = x.dot(y).clamp(-1.0, 1.0);
    match kind {
        GroupKind::SO3 => 2.0 * d.abs().acos(),
        GroupKind::SU2 => 2.0 * d.acos(),
    }
}

/// Haar probability of a ball of radius `δ` (`δ ≤ π` on SO(3)).
pub fn ball_volume(kind: GroupKind, delta: f64) -> f64 {
    let v = (delta - delta.sin()) / PI;
    match kind {
        GroupKind::SO3 => v,
        GroupKind::SU2 => v / 2.0,
    }
}

/// A spin level `j`, stored as `2j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SpinLevel(pub u32);

impl SpinLevel {
    pub fn from_j(j: f64) -> Self {
        SpinLevel((2.0 * j).round() as u32)
    }
    pub fn j(&self) -> f64 {
        self.0 as f64 / 2.0
    }
    pub fn dim(&self) -> usize {
        self.0 as usize + 1
    }
    pub fn is_integer(&self) -> bool {
        self.0 % 2 == 0
    }
}

impl fmt::Display for SpinLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

fn ln_factorial(n: usize) -> f64 {
    (1..=n).map(|k| (k as f64).ln()).sum()
}

fn binomials(n: usize) -> Vec<f64> {
    let mut row = vec![1.0; n + 1];
    for k in 1..n {
        row[k] = row[k - 1] * (n - k + 1) as f64 / k as f64;
    }
    row
}

fn cpow(z: C64, k: usize) -> C64 {
    let mut acc = C64::new(1.0, 0.0);
    for _ in 0..k {
        acc *= z;
    }
    acc
}

/// `D_j(g)`, rows and columns indexed by `j + m` from 0 to `2j`.
pub fn wigner_matrix(g: &UnitQuaternion, j: SpinLevel) -> CMatrix {
    let n = j.0 as usize;
    let alpha = C64::new(g.a, g.b);
    let beta = C64::new(g.c, g.d);
    let mbc = -beta.conj();
    let ac = alpha.conj();
    let powers = |z: C64| -> Vec<C64> { (0..=n).map(|k| cpow(z, k)).collect() };
    let (pa, pmb, pb, pac) = (powers(alpha), powers(mbc), powers(beta), powers(ac));
    let lf: Vec<f64> = (0..=n).map(ln_factorial).collect();
    let binom: Vec<Vec<f64>> = (0..=n).map(binomials).collect();
    let mut d = CMatrix::zeros(n + 1, n + 1);
    for p in 0..=n {
        // column: e_m with j+m = p, expanding (αx − β̄y)^p (βx + ᾱy)^{n−p}
        let q = n - p;
        for pp in 0..=n {
            let mut s = C64::new(0.0, 0.0);
            for k in 0..=p {
                if pp < k || pp - k > q {
                    continue;
                }
                let l = pp - k;
                let coeff = binom[p][k] * binom[q][l];
                s += pa[k] * pmb[p - k] * pb[l] * pac[q - l] * coeff;
            }
            let norm = (0.5 * (lf[pp] + lf[n - pp] - lf[p] - lf[q])).exp();
            d[(pp, p)] = s * norm;
        }
    }
    d
}

/// Largest entry of `D_j(gh) − D_j(g)D_j(h)` in absolute value.
pub fn homomorphism_defect(g: &UnitQuaternion, h: &UnitQuaternion, j: SpinLevel) -> f64 {
    let d = wigner_matrix(&g.mul(h), j) - wigner_matrix(g, j) * wigner_matrix(h, j);
    d.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Character `tr D_j(g) = sin((2j+1)ψ)/sin ψ` with `a = cos ψ`.
pub fn character(g: &UnitQuaternion, j: SpinLevel) -> f64 {
    let psi = g.a.clamp(-1.0, 1.0).acos();
    let n = j.0 as f64 + 1.0;
    if psi.sin().abs() < 1e-12 {
        let sign = if g.a < 0.0 && j.0 % 2 == 1 { -1.0 } else { 1.0 };
        return n * sign;
    }
    (n * psi).sin() / psi.sin()
}

/// Finitely supported measure with float atoms.
#[derive(Debug, Clone, PartialEq)]
pub struct FloatMeasure {
    pub group: GroupKind,
    pub atoms: Vec<(UnitQuaternion, f64)>,
}

impl FloatMeasure {
    pub fn new(group: GroupKind, atoms: Vec<(UnitQuaternion, f64)>) -> Result<Self, HarmError> {
        let sum: f64 = atoms.iter().map(|(_, w)| w).sum();
        if (sum - 1.0).abs() > 1e-9 || atoms.iter().any(|(_, w)| *w < 0.0) {
            return Err(HarmError::NotProbability { sum });
        }
        Ok(FloatMeasure { group, atoms })
    }

    pub fn dirac(group: GroupKind) -> Self {
        FloatMeasure { group, atoms: vec![(UnitQuaternion::IDENTITY, 1.0)] }
    }

    /// Uniform on `{g, g⁻¹, ...}` for the given generators.
    pub fn symmetric(group: GroupKind, gens: &[UnitQuaternion]) -> Self {
        let w = 1.0 / (2 * gens.len()) as f64;
        let atoms = gens.iter().flat_map(|g| [(*g, w), (g.inverse(), w)]).collect();
        FloatMeasure { group, atoms }
    }

    pub fn convolve(&self, other: &Self) -> Self {
        let mut atoms = Vec::with_capacity(self.atoms.len() * other.atoms.len());
        for (g, w) in &self.atoms {
            for (h, v) in &other.atoms {
                atoms.push((g.mul(h), w * v));
            }
        }
        FloatMeasure { group: self.group, atoms }
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        self.atoms.iter().all(|(g, w)| {
            let inv = g.inverse();
            let mass: f64 = self
                .atoms
                .iter()
                .filter(|(h, _)| distance(self.group, h, &inv) < tol)
                .map(|(_, v)| v)
                .sum();
            let own: f64 = self.atoms.iter().filter(|(h, _)| distance(self.group, h, g) < tol).map(|(_, v)| v).sum();
            (mass - own).abs() < 1e-12 * own.max(1.0) + tol && *w >= 0.0
        })
    }
}

/// `μ̂(j) = Σ w_i D_j(g_i)`.
pub fn fourier_coefficient(mu: &FloatMeasure, j: SpinLevel) -> Result<CMatrix, HarmError> {
    let sum: f64 = mu.atoms.iter().map(|(_, w)| w).sum();
    if (sum - 1.0).abs() > 1e-9 || mu.atoms.iter().any(|(_, w)| *w < 0.0) {
        return Err(HarmError::NotProbability { sum });
    }
    if mu.group == GroupKind::SO3 && !j.is_integer() {
        return Err(HarmError::HalfIntegerOnSO3 { two_j: j.0 });
    }
    let mut out = CMatrix::zeros(j.dim(), j.dim());
    for (g, w) in &mu.atoms {
        out += wigner_matrix(g, j) * C64::new(*w, 0.0);
    }
    Ok(out)
}

pub fn operator_norm(m: &CMatrix) -> f64 {
    if m.nrows() == 0 {
        return 0.0;
    }
    m.clone().svd(false, false).singular_values.max()
}

pub fn hs_norm2(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum()
}

/// Gauss–Legendre nodes and weights on `[0, 1]`.
pub fn gauss_legendre_unit(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 0 { 1.0 } else if n == 1 { x } else { p1 };
            let pnm1 = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (x * pn - pnm1) / (x * x - 1.0);
            let dx = pn / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out.push(((1.0 - x) / 2.0, w / 2.0));
    }
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    out
}

/// Product grid in Hopf coordinates `α = sqrt(1−t) e^{iφ₁}`,
/// `β = sqrt(t) e^{iφ₂}`, where Haar measure is `dt dφ₁ dφ₂ / 4π²`.
/// Exact for polynomials in the matrix coefficients of total degree
/// at most `degree`.
pub fn haar_quadrature(degree: usize) -> Vec<(UnitQuaternion, f64)> {
    let nt = degree / 2 + 1;
    let nphi = degree + 1;
    let mut out = Vec::with_capacity(nt * nphi * nphi);
    for (t, wt) in gauss_legendre_unit(nt) {
        let (r1, r2) = ((1.0 - t).sqrt(), t.sqrt());
        for i in 0..nphi {
            let p1 = 2.0 * PI * i as f64 / nphi as f64;
            for k in 0..nphi {
                let p2 = 2.0 * PI * k as f64 / nphi as f64;
                let q = UnitQuaternion { a: r1 * p1.cos(), b: r1 * p1.sin(), c: r2 * p2.cos(), d: r2 * p2.sin() };
                out.push((q, wt / (nphi * nphi) as f64));
            }
        }
    }
    out
}

pub fn haar_measure(degree: usize) -> FloatMeasure {
    FloatMeasure { group: GroupKind::SU2, atoms: haar_quadrature(degree) }
}

/// Fourier blocks `f̂(j)` of a band-limited function.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierSpectrum {
    pub blocks: BTreeMap<SpinLevel, CMatrix>,
}

impl FourierSpectrum {
    pub fn j_max(&self) -> SpinLevel {
        self.blocks.keys().next_back().copied().unwrap_or(SpinLevel(0))
    }

    /// `f(g) = Σ (2j+1) tr(f̂(j) D_j(g)†)`.
    pub fn evaluate(&self, g: &UnitQuaternion) -> C64 {
        self.blocks
            .iter()
            .map(|(j, a)| {
                let d = wigner_matrix(g, *j);
                let tr: C64 = a.iter().zip(d.iter()).map(|(x, y)| x * y.conj()).sum();
                tr * (j.dim() as f64)
            })
            .sum()
    }

    /// Random complex blocks with entries uniform in the unit square.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, j_max: SpinLevel) -> Self {
        let blocks = (0..=j_max.0)
            .map(|tj| {
                let j = SpinLevel(tj);
                let m = CMatrix::from_fn(j.dim(), j.dim(), |_, _| {
                    C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
                });
                (j, m)
            })
            .collect();
        FourierSpectrum { blocks }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ParsevalResult {
    pub lhs: f64,
    pub rhs: f64,
    pub relative_error: f64,
    pub nodes: usize,
}

/// `‖f‖₂²` by quadrature against `Σ (2j+1)‖f̂(j)‖²_HS`.
pub fn parseval_check(spectrum: &FourierSpectrum) -> Result<ParsevalResult, HarmError> {
    let degree = 2 * spectrum.j_max().0 as usize;
    let integrate = |deg: usize| -> (f64, usize) {
        let grid = haar_quadrature(deg);
        let vals: Vec<f64> = grid.par_iter().map(|(g, w)| spectrum.evaluate(g).norm_sqr() * w).collect();
        (vals.iter().sum(), grid.len())
    };
    let (coarse, _) = integrate(degree);
    let (fine, nodes) = integrate(degree + 4);
    if (coarse - fine).abs() > 1e-10 * fine.abs().max(1e-300) {
        return Err(HarmError::QuadratureDivergence { coarse, fine });
    }
    let rhs: f64 = spectrum.blocks.iter().map(|(j, a)| j.dim() as f64 * hs_norm2(a)).sum();
    let relative_error = if rhs == 0.0 { fine.abs() } else { (fine - rhs).abs() / rhs };
    Ok(ParsevalResult { lhs: fine, rhs, relative_error, nodes })
}

fn sin_product_integral(n: f64, x: f64) -> f64 {
    // ∫_0^x sin(nψ) sin ψ dψ
    if (n - 1.0).abs() < 1e-12 {
        x / 2.0 - (2.0 * x).sin() / 4.0
    } else {
        0.5 * (((n - 1.0) * x).sin() / (n - 1.0) - ((n + 1.0) * x).sin() / (n + 1.0))
    }
}

/// Scalar value of `P̂_δ(j)` from the closed-form antiderivative.
pub fn smoothing_scalar_closed_form(delta: f64, j: SpinLevel) -> f64 {
    let n = j.0 as f64 + 1.0;
    let x = delta / 2.0;
    sin_product_integral(n, x) / (n * sin_product_integral(1.0, x))
}

/// Scalar value of `P̂_δ(j)` by Gauss–Legendre quadrature over the
/// half-angle `ψ ∈ [0, δ/2]` with Haar density `∝ sin²ψ`.
fn smoothing_scalar_quadrature(delta: f64, j: SpinLevel) -> f64 {
    let n = j.0 as f64 + 1.0;
    let x = delta / 2.0;
    let nodes = gauss_legendre_unit(32 + 2 * j.0 as usize);
    let (mut num, mut den) = (0.0, 0.0);
    for (t, w) in nodes {
        let psi = t * x;
        num += w * (n * psi).sin() * psi.sin();
        den += w * psi.sin() * psi.sin();
    }
    num / (n * den)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SmoothingBlock {
    pub block: CMatrix,
    pub distance_to_identity: f64,
}

/// `P̂_δ(j)`, the Fourier coefficient of the normalised indicator of the
/// δ-ball about the identity. It is scalar because the ball is
/// conjugation invariant.
pub fn smoothing_spectrum(delta: f64, j: SpinLevel) -> Result<SmoothingBlock, HarmError> {
    if !(delta > 0.0 && delta < PI) {
        return Err(HarmError::DeltaOutOfRange(delta));
    }
    let s = if j.0 == 0 { 1.0 } else { smoothing_scalar_quadrature(delta, j) };
    let block = CMatrix::identity(j.dim(), j.dim()) * C64::new(s, 0.0);
    Ok(SmoothingBlock { block, distance_to_identity: (1.0 - s).abs() })
}

/// Largest spin with `‖P̂_δ(j) − Id‖ ≤ 1/2` before the first violation,
/// stepping through half-integers (integers only when `integer_only`).
pub fn smoothing_threshold(delta: f64, integer_only: bool) -> Result<SpinLevel, HarmError> {
    let step = if integer_only { 2 } else { 1 };
    let mut last = SpinLevel(0);
    let mut tj = step;
    loop {
        let b = smoothing_spectrum(delta, SpinLevel(tj))?;
        if b.distance_to_identity > 0.5 {
            return Ok(last);
        }
        last = SpinLevel(tj);
        tj += step;
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThresholdFit {
    pub deltas: Vec<f64>,
    pub thresholds: Vec<f64>,
    /// Least squares slope of `j*` against `1/δ` through the origin.
    pub c: f64,
    /// Largest `|j*δ/c − 1|`.
    pub max_relative_deviation: f64,
}

pub fn fit_smoothing_threshold(deltas: &[f64]) -> Result<ThresholdFit, HarmError> {
    let thresholds: Vec<f64> =
        deltas.iter().map(|&d| smoothing_threshold(d, false).map(|s| s.j())).collect::<Result<_, _>>()?;
    let num: f64 = deltas.iter().zip(&thresholds).map(|(d, j)| j / d).sum();
    let den: f64 = deltas.iter().map(|d| 1.0 / (d * d)).sum();
    let c = num / den;
    let max_relative_deviation =
        deltas.iter().zip(&thresholds).map(|(d, j)| (j * d / c - 1.0).abs()).fold(0.0, f64::max);
    Ok(ThresholdFit { deltas: deltas.to_vec(), thresholds, c, max_relative_deviation })
}

pub fn matrix_power(m: &CMatrix, mut n: u64) -> CMatrix {
    let mut base = m.clone();
    let mut acc = CMatrix::identity(m.nrows(), m.ncols());
    while n > 0 {
        if n & 1 == 1 {
            acc = &acc * &base;
        }
        n >>= 1;
        if n > 0 {
            base = &base * &base;
        }
    }
    acc
}

/// Largest eigenvalue modulus: Hermitian solver when `m = m†`, Schur
/// form otherwise.
pub fn eigen_radius(m: &CMatrix) -> f64 {
    let herm = (m - m.adjoint()).iter().all(|z| z.norm() < 1e-13);
    if herm {
        m.clone().symmetric_eigen().eigenvalues.iter().map(|x| x.abs()).fold(0.0, f64::max)
    } else {
        let (_, t) = m.clone().schur().unpack();
        (0..t.nrows()).map(|i| t[(i, i)].norm()).fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralRow {
    pub two_j: u32,
    /// `‖μ̂(j)ⁿ‖^{1/n}`.
    pub gelfand: f64,
    /// Direct eigenvalue modulus when `2j+1 ≤ 64`.
    pub eigen: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralRadiusReport {
    pub n: u64,
    pub per_j: Vec<SpectralRow>,
    pub sup: f64,
    pub sup_eigen: Option<f64>,
}

/// Gelfand estimates `‖μ̂(j)ⁿ‖^{1/n}` for `1/2 ≤ j ≤ j_max` (integers
/// only on SO(3)), with eigenvalue cross-checks.
pub fn spectral_radius_estimate(mu: &FloatMeasure, j_max: SpinLevel, n: u64) -> Result<SpectralRadiusReport, HarmError> {
    if n == 0 {
        return Err(HarmError::ZeroPower);
    }
    let levels: Vec<SpinLevel> = (1..=j_max.0)
        .map(SpinLevel)
        .filter(|j| mu.group == GroupKind::SU2 || j.is_integer())
        .collect();
    let per_j: Vec<SpectralRow> = levels
        .par_iter()
        .map(|&j| {
            let c = fourier_coefficient(mu, j)?;
            let p = matrix_power(&c, n);
            let gelfand = operator_norm(&p).powf(1.0 / n as f64);
            let eigen = (j.dim() <= 64).then(|| eigen_radius(&c));
            Ok(SpectralRow { two_j: j.0, gelfand, eigen })
        })
        .collect::<Result<_, HarmError>>()?;
    let sup = per_j.iter().map(|r| r.gelfand).fold(0.0, f64::max);
    let sup_eigen = per_j.iter().map(|r| r.eigen).try_fold(0.0f64, |acc, e| e.map(|x| acc.max(x)));
    Ok(SpectralRadiusReport { n, per_j, sup, sup_eigen })
}
