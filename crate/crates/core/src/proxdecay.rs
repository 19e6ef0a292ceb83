//! Random matrix products over ℝ and ℚ_p: absolute values, expanding
//! places, proximality and the decay of hyperplane hitting probabilities.

use std::collections::HashMap;

use nalgebra::DMatrix;
use num::integer::Integer;
use num::traits::{Signed, ToPrimitive, Zero};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::exact::{is_prime, prime_factors, rational_to_f64, valuation, AlgebraicScalar, Rational};
use crate::linalg::{subsets, Matrix};
use crate::stats::{linear_fit, LinearFit};
use crate::walkdio::{block_rng, BLOCK};
use crate::Diagnostic;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProxError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("no place with |λ|_v > 1: λ is a root of unity")]
    NoExpandingPlace,
    #[error("product of length {n} is singular")]
    SingularProduct { n: usize },
    #[error("hyperplane must have codimension 1 (got dimension {dim} in {ambient})")]
    BadHyperplane { dim: usize, ambient: usize },
    #[error("matrix {index} is not invertible")]
    NotInvertible { index: usize },
    #[error("matrices and vectors must share dimension {expected}")]
    DimensionMismatch { expected: usize },
    #[error("weights must be positive and sum to 1")]
    NotProbability,
    #[error("entries exceed i128 during exact enumeration")]
    HeightOverflow,
    #[error("bad parameter: {0}")]
    BadParameter(String),
}

impl Diagnostic for ProxError {
    fn module(&self) -> &'static str {
        "proxdecay"
    }
    fn code(&self) -> &'static str {
        match self {
            ProxError::NotPrime(_) => "NotPrime",
            ProxError::NoExpandingPlace => "NoExpandingPlace",
            ProxError::SingularProduct { .. } => "SingularProduct",
            ProxError::BadHyperplane { .. } => "BadHyperplane",
            ProxError::NotInvertible { .. } => "NotInvertible",
            ProxError::DimensionMismatch { .. } => "DimensionMismatch",
            ProxError::NotProbability => "NotProbability",
            ProxError::HeightOverflow => "HeightOverflow",
            ProxError::BadParameter(_) => "BadParameter",
        }
    }
}

/// `|x|_p = p^{−v_p(x)}`, with `|0|_p = 0`.
pub fn padic_abs(x: &Rational, p: u64) -> Result<f64, ProxError> {
    if !is_prime(p) {
        return Err(ProxError::NotPrime(p));
    }
    if x.is_zero() {
        return Ok(0.0);
    }
    Ok((p as f64).powi(-valuation(x, p) as i32))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Place {
    /// Real or complex embedding `σ_index` (0: `a + b√d`, 1: `a − b√d`).
    Archimedean { embedding: usize, abs: f64 },
    /// A place above `p`, with the absolute value of the expanding root.
    PAdic { p: u64, abs: f64 },
}

fn min_root_valuation(trace: &Rational, norm: &Rational, p: u64) -> Option<f64> {
    // Newton polygon of t² − T t + N through (0, v(N)), (1, v(T)), (2, 0).
    let vn = valuation(norm, p) as f64;
    if trace.is_zero() {
        return Some(vn / 2.0);
    }
    let vt = valuation(trace, p) as f64;
    if vt < vn / 2.0 {
        Some(vt.min(vn - vt))
    } else {
        Some(vn / 2.0)
    }
}

/// A place `v` of `ℚ(λ)` with `|λ|_v > 1`. Archimedean places are tried
/// first, then the primes dividing the denominators of trace and norm.
pub fn find_expanding_place(lambda: &AlgebraicScalar) -> Result<Place, ProxError> {
    if lambda.is_zero() {
        return Err(ProxError::BadParameter("λ must be nonzero".into()));
    }
    if lambda.is_rational() {
        let x = lambda.rational_part();
        let a = rational_to_f64(x).abs();
        if x.abs() > Rational::from_integer(1.into()) {
            return Ok(Place::Archimedean { embedding: 0, abs: a });
        }
        return match prime_factors(x.denom()).first() {
            Some(&p) => Ok(Place::PAdic { p, abs: padic_abs(x, p)? }),
            None => Err(ProxError::NoExpandingPlace),
        };
    }
    let d = lambda.radicand().unwrap_or(0);
    if d > 0 {
        let [s0, s1] = lambda.real_embeddings().expect("real quadratic");
        for (i, s) in [s0, s1].into_iter().enumerate() {
            if s.abs() > 1.0 + 1e-12 {
                return Ok(Place::Archimedean { embedding: i, abs: s.abs() });
            }
        }
    } else {
        // Complex conjugate pair: |σ(λ)|² = N(λ).
        let n = lambda.norm();
        if n > Rational::from_integer(1.into()) {
            return Ok(Place::Archimedean { embedding: 0, abs: rational_to_f64(&n).sqrt() });
        }
    }
    let (t, n) = (lambda.trace(), lambda.norm());
    let mut primes = prime_factors(t.denom());
    primes.extend(prime_factors(n.denom()));
    primes.sort_unstable();
    primes.dedup();
    for p in primes {
        if let Some(v) = min_root_valuation(&t, &n, p) {
            if v < 0.0 {
                return Ok(Place::PAdic { p, abs: (p as f64).powf(-v) });
            }
        }
    }
    Err(ProxError::NoExpandingPlace)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LocalField {
    Real,
    PAdic(u64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProductEnsemble {
    pub field: LocalField,
    /// Exact matrices when available (required for ℚ_p).
    pub exact: Option<Vec<Matrix<Rational>>>,
    pub float: Vec<DMatrix<f64>>,
    pub weights: Vec<Rational>,
}

fn to_float(m: &Matrix<Rational>) -> DMatrix<f64> {
    DMatrix::from_fn(m.rows(), m.cols(), |i, j| rational_to_f64(&m[(i, j)]))
}

fn check_weights(w: &[Rational], count: usize) -> Result<(), ProxError> {
    let sum = w.iter().fold(Rational::zero(), |a, b| a + b);
    if w.len() != count || w.iter().any(|x| !x.is_positive()) || sum != Rational::from_integer(1.into()) {
        return Err(ProxError::NotProbability);
    }
    Ok(())
}

impl ProductEnsemble {
    pub fn rational(field: LocalField, mats: Vec<Matrix<Rational>>, weights: Vec<Rational>) -> Result<Self, ProxError> {
        if let LocalField::PAdic(p) = field {
            if !is_prime(p) {
                return Err(ProxError::NotPrime(p));
            }
        }
        let d = mats.first().ok_or(ProxError::BadParameter("empty ensemble".into()))?.rows();
        for (i, m) in mats.iter().enumerate() {
            if m.rows() != d || m.cols() != d {
                return Err(ProxError::DimensionMismatch { expected: d });
            }
            if m.determinant().is_zero() {
                return Err(ProxError::NotInvertible { index: i });
            }
        }
        check_weights(&weights, mats.len())?;
        Ok(ProductEnsemble { field, float: mats.iter().map(to_float).collect(), exact: Some(mats), weights })
    }

    /// Uniform weights on the matrices and their inverses.
    pub fn symmetric_rational(field: LocalField, gens: &[Matrix<Rational>]) -> Result<Self, ProxError> {
        let mut mats = Vec::new();
        for (i, g) in gens.iter().enumerate() {
            mats.push(g.clone());
            mats.push(g.inverse().ok_or(ProxError::NotInvertible { index: i })?);
        }
        let w = vec![Rational::new(1.into(), (mats.len() as i64).into()); mats.len()];
        Self::rational(field, mats, w)
    }

    pub fn real(mats: Vec<DMatrix<f64>>, weights: Vec<Rational>) -> Result<Self, ProxError> {
        let d = mats.first().ok_or(ProxError::BadParameter("empty ensemble".into()))?.nrows();
        for (i, m) in mats.iter().enumerate() {
            if m.nrows() != d || m.ncols() != d {
                return Err(ProxError::DimensionMismatch { expected: d });
            }
            if m.determinant().abs() < 1e-12 {
                return Err(ProxError::NotInvertible { index: i });
            }
        }
        check_weights(&weights, mats.len())?;
        Ok(ProductEnsemble { field: LocalField::Real, exact: None, float: mats, weights })
    }

    pub fn dim(&self) -> usize {
        self.float[0].nrows()
    }

    fn cumulative(&self) -> Vec<f64> {
        let mut acc = Rational::zero();
        self.weights
            .iter()
            .map(|w| {
                acc += w;
                rational_to_f64(&acc)
            })
            .collect()
    }
}

fn pick(cumulative: &[f64], u: f64) -> usize {
    cumulative.partition_point(|c| *c <= u).min(cumulative.len() - 1)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProximalityReport {
    /// `(n, median ln(σ₁/σ₂))`; in the p-adic case `σ` are p-adic
    /// singular values.
    pub rows: Vec<(usize, f64)>,
    /// Median `σ₁/σ₂` at the largest `n`.
    pub gap_ratio: f64,
    pub slope: f64,
    pub r2: f64,
    pub proximal: bool,
}

/// Slope below which the log-gap is considered flat.
pub const PROXIMAL_SLOPE_FLOOR: f64 = 1e-6;

fn real_log_gap(m: &DMatrix<f64>) -> f64 {
    let s = m.clone().svd(false, false).singular_values;
    let mut v: Vec<f64> = s.iter().cloned().collect();
    v.sort_by(|a, b| b.total_cmp(a));
    (v[0] / v[1]).ln()
}

/// `ln(σ₁/σ₂)` over ℚ_p: `(min v(2×2 minors) − 2·min v(entries))·ln p`.
fn padic_log_gap(m: &Matrix<Rational>, p: u64) -> Option<f64> {
    let d = m.rows();
    let min_entry = m.entries().iter().filter(|x| !x.is_zero()).map(|x| valuation(x, p)).min()?;
    let pairs = subsets(d, 2);
    let mut min_minor: Option<i64> = None;
    for r in &pairs {
        for c in &pairs {
            let x = m.minor(r, c);
            if !x.is_zero() {
                let v = valuation(&x, p);
                min_minor = Some(min_minor.map_or(v, |w: i64| w.min(v)));
            }
        }
    }
    Some((min_minor? - 2 * min_entry) as f64 * (p as f64).ln())
}

/// Median top-two gap of `n`-fold products for every `n` in the range and
/// a slope fit of the median log-gap against `n`.
pub fn proximality_check(
    ens: &ProductEnsemble,
    n_range: std::ops::RangeInclusive<usize>,
    samples: usize,
    seed: u64,
) -> Result<ProximalityReport, ProxError> {
    if ens.dim() < 2 {
        return Err(ProxError::BadParameter("dimension must be at least 2".into()));
    }
    if samples == 0 || n_range.is_empty() {
        return Err(ProxError::BadParameter("need samples ≥ 1 and a non-empty range".into()));
    }
    let cumulative = ens.cumulative();
    let n_max = *n_range.end();
    let per_sample: Vec<Result<Vec<f64>, ProxError>> = (0..samples)
        .into_par_iter()
        .map(|s| {
            let mut rng = block_rng(seed, s as u64);
            let mut gaps = vec![0.0; n_max + 1];
            match (ens.field, &ens.exact) {
                (LocalField::PAdic(p), Some(exact)) => {
                    let mut g = Matrix::<Rational>::identity(ens.dim());
                    for (n, gap) in gaps.iter_mut().enumerate().skip(1) {
                        g = &g * &exact[pick(&cumulative, rng.random())];
                        *gap = padic_log_gap(&g, p).ok_or(ProxError::SingularProduct { n })?;
                    }
                }
                (LocalField::PAdic(_), None) => return Err(ProxError::BadParameter("p-adic ensembles need exact entries".into())),
                (LocalField::Real, _) => {
                    let mut g = DMatrix::<f64>::identity(ens.dim(), ens.dim());
                    for (n, gap) in gaps.iter_mut().enumerate().skip(1) {
                        g = &g * &ens.float[pick(&cumulative, rng.random())];
                        let scale = g.amax();
                        if !(scale > 0.0) || !scale.is_finite() {
                            return Err(ProxError::SingularProduct { n });
                        }
                        g /= scale;
                        *gap = real_log_gap(&g);
                        if !gap.is_finite() {
                            return Err(ProxError::SingularProduct { n });
                        }
                    }
                }
            }
            Ok(gaps)
        })
        .collect();
    let per_sample = per_sample.into_iter().collect::<Result<Vec<_>, _>>()?;
    let rows: Vec<(usize, f64)> = n_range
        .map(|n| {
            let mut v: Vec<f64> = per_sample.iter().map(|g| g[n]).collect();
            v.sort_by(|a, b| a.total_cmp(b));
            let m = v.len();
            let med = if m % 2 == 1 { v[m / 2] } else { 0.5 * (v[m / 2 - 1] + v[m / 2]) };
            (n, med)
        })
        .collect();
    let fit = linear_fit(&rows.iter().map(|r| r.0 as f64).collect::<Vec<_>>(), &rows.iter().map(|r| r.1).collect::<Vec<_>>());
    let (slope, r2) = fit.map_or((0.0, 0.0), |f| (f.slope, f.r2));
    Ok(ProximalityReport {
        gap_ratio: rows.last().map_or(1.0, |r| r.1.exp()),
        rows,
        slope,
        r2,
        proximal: slope > PROXIMAL_SLOPE_FLOOR && r2 >= 0.9,
    })
}

/// A hyperplane given by a normal vector (exact when the spanning set is).
#[derive(Debug, Clone, PartialEq)]
pub struct Hyperplane {
    pub normal: Vec<f64>,
    pub exact_normal: Option<Vec<Rational>>,
}

impl Hyperplane {
    /// From `d − 1` spanning vectors.
    pub fn from_basis(basis: &[Vec<Rational>], ambient: usize) -> Result<Self, ProxError> {
        if basis.iter().any(|v| v.len() != ambient) {
            return Err(ProxError::DimensionMismatch { expected: ambient });
        }
        let m = if basis.is_empty() { Matrix::zeros(1, ambient) } else { Matrix::from_rows(basis.to_vec()) };
        let rank = if basis.is_empty() { 0 } else { m.rank() };
        if rank + 1 != ambient {
            return Err(ProxError::BadHyperplane { dim: rank, ambient });
        }
        let normal = m.nullspace().remove(0);
        Ok(Hyperplane { normal: normal.iter().map(rational_to_f64).collect(), exact_normal: Some(normal) })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecayRow {
    pub n: usize,
    pub hits: u64,
    pub probability: f64,
    /// Exact probability from word enumeration, when requested.
    pub exact: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecayReport {
    pub epsilon: f64,
    pub samples: usize,
    pub rows: Vec<DecayRow>,
    /// `−slope` of `ln p(n)` over rows with `n ≥ 1` and at least one hit,
    /// clamped at 0.
    pub kappa_hat: f64,
    pub fit: Option<LinearFit>,
}

/// Primitive integer vector spanning the same line (first nonzero entry
/// positive).
fn primitive(v: &mut [i128]) {
    let g = v.iter().fold(0i128, |g, x| g.gcd(x));
    if g > 1 {
        v.iter_mut().for_each(|x| *x /= g);
    }
    if let Some(first) = v.iter().find(|x| **x != 0) {
        if *first < 0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
    }
}

/// Integer matrices `D_i·A_i` with the same projective action.
fn integer_matrices(mats: &[Matrix<Rational>]) -> Result<Vec<Vec<i128>>, ProxError> {
    mats.iter()
        .map(|m| {
            let l = m.entries().iter().fold(num::BigInt::from(1), |l, x| l.lcm(x.denom()));
            m.entries()
                .iter()
                .map(|x| (x * Rational::from_integer(l.clone())).to_integer().to_i128().ok_or(ProxError::HeightOverflow))
                .collect()
        })
        .collect()
}

fn apply_int(m: &[i128], v: &[i128]) -> Result<Vec<i128>, ProxError> {
    let d = v.len();
    let mut out = vec![0i128; d];
    for (i, o) in out.iter_mut().enumerate() {
        for j in 0..d {
            let t = m[i * d + j].checked_mul(v[j]).ok_or(ProxError::HeightOverflow)?;
            *o = o.checked_add(t).ok_or(ProxError::HeightOverflow)?;
        }
    }
    primitive(&mut out);
    Ok(out)
}

struct HitTest {
    field: LocalField,
    epsilon: f64,
    normal: Vec<f64>,
    exact_normal: Option<Vec<i128>>,
}

impl HitTest {
    fn int(&self, w: &[i128]) -> bool {
        match (&self.exact_normal, self.field) {
            (Some(nu), LocalField::Real) if self.epsilon == 0.0 => w.iter().zip(nu).map(|(a, b)| a * b).sum::<i128>() == 0,
            (Some(nu), LocalField::PAdic(p)) => {
                let dot: i128 = w.iter().zip(nu).map(|(a, b)| a * b).sum();
                if dot == 0 {
                    return true;
                }
                // w and ν are primitive, so ‖w‖_p = ‖ν‖_p = 1.
                let abs = padic_abs(&Rational::from_integer(dot.into()), p).unwrap_or(0.0);
                abs <= self.epsilon
            }
            _ => self.float(&w.iter().map(|x| *x as f64).collect::<Vec<_>>()),
        }
    }

    fn float(&self, w: &[f64]) -> bool {
        let dot: f64 = w.iter().zip(&self.normal).map(|(a, b)| a * b).sum();
        let nw = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        let nn = self.normal.iter().map(|x| x * x).sum::<f64>().sqrt();
        dot.abs() <= self.epsilon * nw * nn
    }
}

fn exact_normal_int(h: &Hyperplane) -> Option<Vec<i128>> {
    let nu = h.exact_normal.as_ref()?;
    let l = nu.iter().fold(num::BigInt::from(1), |l, x| l.lcm(x.denom()));
    let mut v: Vec<i128> = nu.iter().map(|x| (x * Rational::from_integer(l.clone())).to_integer().to_i128()).collect::<Option<_>>()?;
    primitive(&mut v);
    Some(v)
}

/// Fraction of sampled products `g` with `g·v` within `ε` (projectively)
/// of `W`, for each `n`; optionally checked against exact enumeration.
#[allow(clippy::too_many_arguments)]
pub fn decay_estimate(
    ens: &ProductEnsemble,
    v: &[Rational],
    w: &Hyperplane,
    epsilon: f64,
    n_range: std::ops::RangeInclusive<usize>,
    samples: usize,
    seed: u64,
    enumerate_up_to: Option<usize>,
) -> Result<DecayReport, ProxError> {
    let d = ens.dim();
    if v.len() != d || w.normal.len() != d {
        return Err(ProxError::DimensionMismatch { expected: d });
    }
    if samples == 0 || n_range.is_empty() || !(epsilon >= 0.0) {
        return Err(ProxError::BadParameter("need samples ≥ 1, ε ≥ 0 and a non-empty range".into()));
    }
    let test = HitTest { field: ens.field, epsilon, normal: w.normal.clone(), exact_normal: exact_normal_int(w) };
    let n_max = *n_range.end();
    let cumulative = ens.cumulative();
    let int_mats = match &ens.exact {
        Some(m) => Some(integer_matrices(m)?),
        None => None,
    };
    let v_int: Option<Vec<i128>> = {
        let l = v.iter().fold(num::BigInt::from(1), |l, x| l.lcm(x.denom()));
        let mut out: Option<Vec<i128>> =
            v.iter().map(|x| (x * Rational::from_integer(l.clone())).to_integer().to_i128()).collect();
        if let Some(o) = out.as_mut() {
            primitive(o);
        }
        out
    };
    let v_f: Vec<f64> = v.iter().map(rational_to_f64).collect();
    let blocks = samples.div_ceil(BLOCK);
    let parts: Vec<Result<Vec<u64>, ProxError>> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = block_rng(seed, b as u64);
            let mut acc = vec![0u64; n_max + 1];
            for _ in 0..BLOCK.min(samples - b * BLOCK) {
                // g·v for g = s_1⋯s_n has the law of s_n⋯s_1·v.
                match (&int_mats, &v_int) {
                    (Some(ms), Some(v0)) => {
                        let mut x = v0.clone();
                        if test.int(&x) {
                            acc[0] += 1;
                        }
                        for slot in acc.iter_mut().skip(1) {
                            x = apply_int(&ms[pick(&cumulative, rng.random())], &x)?;
                            if test.int(&x) {
                                *slot += 1;
                            }
                        }
                    }
                    _ => {
                        let mut x = nalgebra::DVector::from_vec(v_f.clone());
                        if test.float(x.as_slice()) {
                            acc[0] += 1;
                        }
                        for slot in acc.iter_mut().skip(1) {
                            x = &ens.float[pick(&cumulative, rng.random())] * x;
                            let s = x.amax();
                            if s > 0.0 {
                                x /= s;
                            }
                            if test.float(x.as_slice()) {
                                *slot += 1;
                            }
                        }
                    }
                }
            }
            Ok(acc)
        })
        .collect();
    let mut counts = vec![0u64; n_max + 1];
    for p in parts {
        counts.iter_mut().zip(p?).for_each(|(c, x)| *c += x);
    }
    let exact = match enumerate_up_to {
        Some(m) => Some(exact_hit_probabilities(ens, v, w, epsilon, m.min(n_max))?),
        None => None,
    };
    let rows: Vec<DecayRow> = n_range
        .map(|n| DecayRow {
            n,
            hits: counts[n],
            probability: counts[n] as f64 / samples as f64,
            exact: exact.as_ref().and_then(|e| e.get(n).copied()),
        })
        .collect();
    let pts: Vec<&DecayRow> = rows.iter().filter(|r| r.n >= 1 && r.hits > 0).collect();
    let fit = linear_fit(&pts.iter().map(|r| r.n as f64).collect::<Vec<_>>(), &pts.iter().map(|r| r.probability.ln()).collect::<Vec<_>>());
    Ok(DecayReport { epsilon, samples, kappa_hat: fit.map_or(0.0, |f| (-f.slope).max(0.0)), fit, rows })
}

/// Exact `P(g·v hits W)` for `n = 0..=n_max`, by dynamic programming on
/// the projective orbit of `v` (primitive integer vectors). Weights are
/// brought to a common denominator so the masses stay integral.
pub fn exact_hit_probabilities(
    ens: &ProductEnsemble,
    v: &[Rational],
    w: &Hyperplane,
    epsilon: f64,
    n_max: usize,
) -> Result<Vec<f64>, ProxError> {
    let mats = integer_matrices(ens.exact.as_ref().ok_or(ProxError::BadParameter("exact enumeration needs exact entries".into()))?)?;
    let test = HitTest { field: ens.field, epsilon, normal: w.normal.clone(), exact_normal: exact_normal_int(w) };
    let den = ens.weights.iter().fold(num::BigInt::from(1), |l, x| l.lcm(x.denom()));
    let den_u = den.to_u128().ok_or(ProxError::HeightOverflow)?;
    let nums: Vec<u128> = ens
        .weights
        .iter()
        .map(|x| (x * Rational::from_integer(den.clone())).to_integer().to_u128().ok_or(ProxError::HeightOverflow))
        .collect::<Result<_, _>>()?;
    let l = v.iter().fold(num::BigInt::from(1), |l, x| l.lcm(x.denom()));
    let mut v0: Vec<i128> =
        v.iter().map(|x| (x * Rational::from_integer(l.clone())).to_integer().to_i128().ok_or(ProxError::HeightOverflow)).collect::<Result<_, _>>()?;
    primitive(&mut v0);
    let mut dist: HashMap<Vec<i128>, u128> = HashMap::from([(v0, 1u128)]);
    let mut total: u128 = 1;
    let mut out = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        if n > 0 {
            let mut next: HashMap<Vec<i128>, u128> = HashMap::with_capacity(dist.len() * mats.len());
            for (x, c) in &dist {
                for (m, k) in mats.iter().zip(&nums) {
                    let y = apply_int(m, x)?;
                    let add = c.checked_mul(*k).ok_or(ProxError::HeightOverflow)?;
                    let e = next.entry(y).or_insert(0);
                    *e = e.checked_add(add).ok_or(ProxError::HeightOverflow)?;
                }
            }
            dist = next;
            total = total.checked_mul(den_u).ok_or(ProxError::HeightOverflow)?;
        }
        let hit: u128 = dist.iter().filter(|(x, _)| test.int(x)).map(|(_, c)| *c).sum();
        out.push(hit as f64 / total as f64);
    }
    Ok(out)
}

/// `[[1,2],[0,1]]` and `[[1,0],[2,1]]` with inverses, uniformly.
pub fn sanov_ensemble(field: LocalField) -> ProductEnsemble {
    let r = |x: i64| Rational::from_integer(x.into());
    let a = Matrix::from_rows(vec![vec![r(1), r(2)], vec![r(0), r(1)]]);
    let b = Matrix::from_rows(vec![vec![r(1), r(0)], vec![r(2), r(1)]]);
    ProductEnsemble::symmetric_rational(field, &[a, b]).expect("Sanov generators are invertible")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn padic_examples() {
        assert_eq!(padic_abs(&rat(8, 1), 2).unwrap(), 0.125);
        assert_eq!(padic_abs(&rat(3, 4), 2).unwrap(), 4.0);
        assert_eq!(padic_abs(&rat(0, 1), 5).unwrap(), 0.0);
        assert_eq!(padic_abs(&rat(3, 4), 4), Err(ProxError::NotPrime(4)));
    }

    #[test]
    fn expanding_places() {
        let q = |n, d| AlgebraicScalar::rational(rat(n, d));
        assert_eq!(find_expanding_place(&q(3, 2)).unwrap(), Place::Archimedean { embedding: 0, abs: 1.5 });
        assert_eq!(find_expanding_place(&q(2, 3)).unwrap(), Place::PAdic { p: 3, abs: 3.0 });
        assert_eq!(find_expanding_place(&q(1, 1)), Err(ProxError::NoExpandingPlace));
        assert_eq!(find_expanding_place(&q(-1, 1)), Err(ProxError::NoExpandingPlace));
        // Golden ratio: expanding at the first real embedding.
        let phi = AlgebraicScalar::quadratic(rat(1, 2), rat(1, 2), 5).unwrap();
        assert!(matches!(find_expanding_place(&phi).unwrap(), Place::Archimedean { embedding: 0, .. }));
        // (3 + 4i)/5 has norm 1 and is not a root of unity: expanding at 5.
        let z = AlgebraicScalar::quadratic(rat(3, 5), rat(4, 5), -1).unwrap();
        assert!(matches!(find_expanding_place(&z).unwrap(), Place::PAdic { p: 5, .. }));
        // i is a root of unity.
        let i = AlgebraicScalar::quadratic(rat(0, 1), rat(1, 1), -1).unwrap();
        assert_eq!(find_expanding_place(&i), Err(ProxError::NoExpandingPlace));
    }

    #[test]
    fn sanov_exact_small_n() {
        let ens = sanov_ensemble(LocalField::Real);
        let w = Hyperplane::from_basis(&[vec![rat(1, 1), rat(0, 1)]], 2).unwrap();
        let p = exact_hit_probabilities(&ens, &[rat(1, 1), rat(0, 1)], &w, 0.0, 2).unwrap();
        // n = 1: A^{±1} fix the line; n = 2: the four words in A^{±1}, B B⁻¹, B⁻¹ B.
        assert_eq!(p, vec![1.0, 0.5, 6.0 / 16.0]);
    }
}
