//! Scale-δ geometry of finite point clouds on SU(2) / SO(3): covering
//! numbers, dyadic level sets, multiplicative energy, L² flattening and
//! subgroup-neighbourhood fitting.
//!
//! Neighbourhood queries go through a grid on ℝ⁴ ⊃ S³ (quaternion
//! coordinates); on SO(3) both lifts `±q` are queried.

use std::collections::HashMap;

use nalgebra::{Matrix3, SymmetricEigen, Vector3};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::stats::{linear_fit, LinearFit};
use crate::su2harm::{ball_volume, FloatMeasure, GroupKind, UnitQuaternion};
use crate::walkdio::{block_rng, distance_to_subgroup, SubgroupModel, BLOCK};
use crate::Diagnostic;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MultiscaleError {
    #[error("point cloud is empty")]
    EmptyCloud,
    #[error("too few samples: {0}")]
    TooFewSamples(usize),
    #[error("cloud sizes {na}×{nb} exceed the energy budget {budget}")]
    BudgetExceeded { na: usize, nb: usize, budget: usize },
    #[error("scale must be in (0, π/2], got {0}")]
    BadScale(f64),
    #[error("weights must be nonnegative with positive sum")]
    BadWeights,
}

impl Diagnostic for MultiscaleError {
    fn module(&self) -> &'static str {
        "multiscale"
    }
    fn code(&self) -> &'static str {
        match self {
            MultiscaleError::EmptyCloud => "EmptyCloud",
            MultiscaleError::TooFewSamples(_) => "TooFewSamples",
            MultiscaleError::BudgetExceeded { .. } => "BudgetExceeded",
            MultiscaleError::BadScale(_) => "BadScale",
            MultiscaleError::BadWeights => "BadWeights",
        }
    }
}

fn check_scale(delta: f64) -> Result<(), MultiscaleError> {
    if delta > 0.0 && delta <= std::f64::consts::FRAC_PI_2 {
        Ok(())
    } else {
        Err(MultiscaleError::BadScale(delta))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    pub kind: GroupKind,
    pub points: Vec<UnitQuaternion>,
    pub weights: Vec<f64>,
}

impl PointCloud {
    /// Uniform weights `1/len`.
    pub fn uniform(kind: GroupKind, points: Vec<UnitQuaternion>) -> Self {
        let w = if points.is_empty() { 0.0 } else { 1.0 / points.len() as f64 };
        PointCloud { kind, weights: vec![w; points.len()], points }
    }

    pub fn weighted(kind: GroupKind, points: Vec<UnitQuaternion>, weights: Vec<f64>) -> Result<Self, MultiscaleError> {
        if points.len() != weights.len() || weights.iter().any(|w| !(*w >= 0.0)) || weights.iter().sum::<f64>() <= 0.0 {
            return Err(MultiscaleError::BadWeights);
        }
        Ok(PointCloud { kind, points, weights })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }
}

/// Bi-invariant distance computed from the chord, accurate near 0.
pub fn metric(kind: GroupKind, x: &UnitQuaternion, y: &UnitQuaternion) -> f64 {
    let c = chord(kind, x, y);
    4.0 * (c / 2.0).min(1.0).asin()
}

fn chord(kind: GroupKind, x: &UnitQuaternion, y: &UnitQuaternion) -> f64 {
    let minus = ((x.a - y.a).powi(2) + (x.b - y.b).powi(2) + (x.c - y.c).powi(2) + (x.d - y.d).powi(2)).sqrt();
    match kind {
        GroupKind::SU2 => minus,
        GroupKind::SO3 => {
            let plus = ((x.a + y.a).powi(2) + (x.b + y.b).powi(2) + (x.c + y.c).powi(2) + (x.d + y.d).powi(2)).sqrt();
            minus.min(plus)
        }
    }
}

/// Chord length corresponding to metric radius `r`.
fn chord_of(r: f64) -> f64 {
    2.0 * (r / 4.0).sin()
}

/// Grid hash on quaternion coordinates for radius-`r` queries.
pub struct MetricHash {
    kind: GroupKind,
    cell: f64,
    radius: f64,
    cells: HashMap<[i32; 4], Vec<usize>>,
    points: Vec<UnitQuaternion>,
}

impl MetricHash {
    pub fn new(kind: GroupKind, points: &[UnitQuaternion], radius: f64) -> Self {
        let cell = chord_of(radius).max(1e-12);
        let mut cells: HashMap<[i32; 4], Vec<usize>> = HashMap::new();
        for (i, p) in points.iter().enumerate() {
            cells.entry(Self::key(cell, p)).or_default().push(i);
        }
        MetricHash { kind, cell, radius, cells, points: points.to_vec() }
    }

    fn key(cell: f64, p: &UnitQuaternion) -> [i32; 4] {
        [p.a, p.b, p.c, p.d].map(|x| (x / cell).floor() as i32)
    }

    /// Indices within metric distance `radius` of `q`, each reported once.
    pub fn query(&self, q: &UnitQuaternion) -> Vec<usize> {
        let mut out = Vec::new();
        self.visit(q, |i| out.push(i));
        out
    }

    pub fn visit<F: FnMut(usize)>(&self, q: &UnitQuaternion, mut f: F) {
        let lifts: &[f64] = match self.kind {
            GroupKind::SU2 => &[1.0],
            GroupKind::SO3 => &[1.0, -1.0],
        };
        let limit = chord_of(self.radius) * (1.0 + 1e-12) + 1e-15;
        for (li, &s) in lifts.iter().enumerate() {
            let lq = UnitQuaternion { a: s * q.a, b: s * q.b, c: s * q.c, d: s * q.d };
            let k = Self::key(self.cell, &lq);
            for da in -1..=1 {
                for db in -1..=1 {
                    for dc in -1..=1 {
                        for dd in -1..=1 {
                            let Some(list) = self.cells.get(&[k[0] + da, k[1] + db, k[2] + dc, k[3] + dd]) else {
                                continue;
                            };
                            for &i in list {
                                let p = &self.points[i];
                                let c = ((lq.a - p.a).powi(2) + (lq.b - p.b).powi(2) + (lq.c - p.c).powi(2) + (lq.d - p.d).powi(2))
                                    .sqrt();
                                // On SO(3) a point close to both lifts is reported once.
                                if c <= limit && !(li == 1 && chord(GroupKind::SU2, q, p) <= limit) {
                                    f(i);
                                }
                            }
                        }
                    }
                }
            }
        }
    }
}

/// Indices of a greedy `r`-separated subset which is also an `r`-net.
fn greedy_net(kind: GroupKind, points: &[UnitQuaternion], r: f64) -> Vec<usize> {
    let mut centers: Vec<usize> = Vec::new();
    let mut hash = MetricHash::new(kind, &[], r);
    for (i, p) in points.iter().enumerate() {
        if hash.query(p).is_empty() {
            let k = MetricHash::key(hash.cell, p);
            hash.points.push(*p);
            hash.cells.entry(k).or_default().push(hash.points.len() - 1);
            centers.push(i);
        }
    }
    centers
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CoveringBounds {
    /// Size of a `2δ`-separated subset: no δ-ball holds two of them.
    pub lower: usize,
    /// Size of a greedy δ-net.
    pub upper: usize,
}

/// Bounds on `N(A, δ)`, the least number of δ-balls covering `A`.
pub fn covering_number(a: &PointCloud, delta: f64) -> Result<CoveringBounds, MultiscaleError> {
    check_scale(delta)?;
    if a.is_empty() {
        return Err(MultiscaleError::EmptyCloud);
    }
    let upper = greedy_net(a.kind, &a.points, delta).len();
    let lower = greedy_net(a.kind, &a.points, 2.0 * delta * (1.0 + 1e-9)).len();
    Ok(CoveringBounds { lower, upper })
}

#[derive(Debug, Clone, PartialEq)]
pub struct DyadicLevel {
    pub i: i32,
    /// Centres of the δ-balls making up `A_i`.
    pub cloud: PointCloud,
    /// Mass of the sample points assigned to the level.
    pub mass: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DyadicLevels {
    pub delta: f64,
    pub levels: Vec<DyadicLevel>,
    /// Largest number of distinct levels whose balls contain one sample.
    pub overlap_multiplicity: usize,
    /// `max f_δ / Σ 2^i 1_{A_i}` over the samples.
    pub below_constant: f64,
    /// `max Σ 2^i 1_{A_i} / f_{4δ}` over the samples.
    pub above_constant: f64,
}

/// Empirical density `μ(B(x, r)) / |B(r)|` at every point.
fn local_density(cloud: &PointCloud, r: f64) -> Vec<f64> {
    let hash = MetricHash::new(cloud.kind, &cloud.points, r);
    let vol = ball_volume(cloud.kind, r);
    let total = cloud.total_weight();
    cloud
        .points
        .par_iter()
        .map(|p| {
            let mut m = 0.0;
            hash.visit(p, |j| m += cloud.weights[j]);
            m / total / vol
        })
        .collect()
}

/// Splits a sample of `μ_δ` into dyadic density levels: δ-net centres
/// `c` get level `⌊log₂(μ(B(c, 2δ)) / |B(2δ)|)⌋`, and `A_i` is the union
/// of δ-balls around level-`i` centres.
pub fn dyadic_decompose(samples: &PointCloud, delta: f64) -> Result<DyadicLevels, MultiscaleError> {
    check_scale(delta)?;
    if samples.is_empty() || samples.total_weight() <= 0.0 {
        return Err(MultiscaleError::TooFewSamples(samples.len()));
    }
    let kind = samples.kind;
    let total = samples.total_weight();
    let centers = greedy_net(kind, &samples.points, delta);
    let center_pts: Vec<UnitQuaternion> = centers.iter().map(|&i| samples.points[i]).collect();
    let hash2 = MetricHash::new(kind, &samples.points, 2.0 * delta);
    let vol2 = ball_volume(kind, 2.0 * delta);
    let center_level: Vec<i32> = center_pts
        .iter()
        .map(|c| {
            let mut m = 0.0;
            hash2.visit(c, |j| m += samples.weights[j]);
            (m / total / vol2).log2().floor() as i32
        })
        .collect();

    let mut by_level: std::collections::BTreeMap<i32, Vec<usize>> = std::collections::BTreeMap::new();
    for (k, &l) in center_level.iter().enumerate() {
        by_level.entry(l).or_default().push(k);
    }
    let center_hash = MetricHash::new(kind, &center_pts, delta);
    let f_delta = local_density(samples, delta);
    let f_4delta = local_density(samples, (4.0 * delta).min(std::f64::consts::PI));
    let mut mass: HashMap<i32, f64> = HashMap::new();
    let mut overlap = 0;
    let mut below: f64 = 0.0;
    let mut above: f64 = 0.0;
    for (x, p) in samples.points.iter().enumerate() {
        let near = center_hash.query(p);
        let mut levels: Vec<i32> = near.iter().map(|&k| center_level[k]).collect();
        levels.sort_unstable();
        levels.dedup();
        overlap = overlap.max(levels.len());
        let g: f64 = levels.iter().map(|&i| 2f64.powi(i)).sum();
        // Assign the sample to its nearest centre's level.
        if let Some(&k) = near.iter().min_by(|&&a, &&b| metric(kind, p, &center_pts[a]).total_cmp(&metric(kind, p, &center_pts[b]))) {
            *mass.entry(center_level[k]).or_insert(0.0) += samples.weights[x] / total;
        }
        if g > 0.0 {
            below = below.max(f_delta[x] / g);
            above = above.max(g / f_4delta[x]);
        }
    }
    let levels = by_level
        .into_iter()
        .map(|(i, ks)| DyadicLevel {
            i,
            cloud: PointCloud::uniform(kind, ks.iter().map(|&k| center_pts[k]).collect()),
            mass: mass.get(&i).copied().unwrap_or(0.0),
        })
        .collect();
    Ok(DyadicLevels { delta, levels, overlap_multiplicity: overlap, below_constant: below, above_constant: above })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnergyReport {
    pub delta: f64,
    /// Sizes of the greedy δ-nets standing in for `A` and `B`.
    pub n_a: usize,
    pub n_b: usize,
    /// Number of quadruples `(a, b, a′, b′)` of net points with
    /// `d(ab, a′b′) ≤ δ`.
    pub energy: u64,
    /// `E / (N_A N_B)^{3/2}`.
    pub normalized: f64,
}

pub const ENERGY_BUDGET: usize = 3000;

/// Multiplicative energy at scale δ, counted on δ-nets of `A` and `B`.
pub fn multiplicative_energy(a: &PointCloud, b: &PointCloud, delta: f64) -> Result<EnergyReport, MultiscaleError> {
    check_scale(delta)?;
    if a.is_empty() || b.is_empty() {
        return Err(MultiscaleError::EmptyCloud);
    }
    let kind = a.kind;
    let na_pts: Vec<UnitQuaternion> = greedy_net(kind, &a.points, delta).into_iter().map(|i| a.points[i]).collect();
    let nb_pts: Vec<UnitQuaternion> = greedy_net(kind, &b.points, delta).into_iter().map(|i| b.points[i]).collect();
    let (na, nb) = (na_pts.len(), nb_pts.len());
    if na > ENERGY_BUDGET || nb > ENERGY_BUDGET {
        return Err(MultiscaleError::BudgetExceeded { na, nb, budget: ENERGY_BUDGET });
    }
    let products: Vec<UnitQuaternion> = na_pts.iter().flat_map(|x| nb_pts.iter().map(move |y| x.mul(y))).collect();
    let hash = MetricHash::new(kind, &products, delta);
    let energy: u64 = products.par_iter().map(|p| hash.query(p).len() as u64).sum();
    Ok(EnergyReport { delta, n_a: na, n_b: nb, energy, normalized: energy as f64 / ((na * nb) as f64).powf(1.5) })
}

/// `|B(δ) ∩ B(x, δ)| / |B(δ)|²` for `d(e, x) = r`, using the flat
/// (small-δ) lens volume.
pub fn lens_kernel(kind: GroupKind, delta: f64, r: f64) -> f64 {
    let t = r / delta;
    if t >= 2.0 {
        return 0.0;
    }
    (1.0 - 0.75 * t + t.powi(3) / 16.0) / ball_volume(kind, delta)
}

/// `‖P_δ * ν‖₂²` estimated by weighted pair counting: samples at the
/// same point (to 1e-12) are merged first, and self-pairs are removed.
pub fn smoothed_l2_squared(kind: GroupKind, samples: &[UnitQuaternion], delta: f64) -> f64 {
    let n = samples.len();
    if n < 2 {
        return lens_kernel(kind, delta, 0.0);
    }
    let mut merged: HashMap<[i64; 4], (UnitQuaternion, f64)> = HashMap::new();
    for q in samples {
        let q = match kind {
            GroupKind::SO3 => q.canonical_sign(),
            GroupKind::SU2 => *q,
        };
        let key = [q.a, q.b, q.c, q.d].map(|x| (x * 1e10).round() as i64);
        merged.entry(key).or_insert((q, 0.0)).1 += 1.0;
    }
    let mut pts: Vec<(UnitQuaternion, f64)> = merged.into_values().collect();
    pts.sort_by(|x, y| [x.0.a, x.0.b, x.0.c, x.0.d].partial_cmp(&[y.0.a, y.0.b, y.0.c, y.0.d]).unwrap());
    let qs: Vec<UnitQuaternion> = pts.iter().map(|p| p.0).collect();
    let hash = MetricHash::new(kind, &qs, 2.0 * delta);
    // Collected first so the summation order, hence the result, is fixed.
    let terms: Vec<f64> = (0..pts.len())
        .into_par_iter()
        .map(|i| {
            let mut s = 0.0;
            hash.visit(&qs[i], |j| s += pts[j].1 * lens_kernel(kind, delta, metric(kind, &qs[i], &qs[j])));
            pts[i].1 * s
        })
        .collect();
    let sum: f64 = terms.iter().sum();
    let nf = n as f64;
    ((sum - nf * lens_kernel(kind, delta, 0.0)) / (nf * (nf - 1.0))).max(0.0)
}

/// Draws `samples` endpoints of walks of length `n`.
pub fn sample_float_walk(mu: &FloatMeasure, n: usize, samples: usize, seed: u64) -> Vec<UnitQuaternion> {
    let mut acc = 0.0;
    let total: f64 = mu.atoms.iter().map(|a| a.1).sum();
    let cumulative: Vec<f64> = mu
        .atoms
        .iter()
        .map(|a| {
            acc += a.1 / total;
            acc
        })
        .collect();
    let blocks = samples.div_ceil(BLOCK);
    (0..blocks)
        .into_par_iter()
        .flat_map_iter(|b| {
            let mut rng = block_rng(seed, b as u64);
            let count = BLOCK.min(samples - b * BLOCK);
            let cumulative = &cumulative;
            (0..count)
                .map(move |_| {
                    let mut g = UnitQuaternion::IDENTITY;
                    for _ in 0..n {
                        let u: f64 = rng.random();
                        let i = cumulative.partition_point(|c| *c <= u).min(cumulative.len() - 1);
                        g = g.mul(&mu.atoms[i].0);
                    }
                    g
                })
                .collect::<Vec<_>>()
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FlatteningRow {
    pub delta: f64,
    pub n: usize,
    /// `‖(μ^{*n})_δ‖₂`.
    pub l2_norm: f64,
    /// `‖(μ^{*2n})_δ‖₂`, the proxy for `‖(μ^{*n})_δ * (μ^{*n})_δ‖₂`.
    pub l2_conv: f64,
    pub ratio: f64,
    /// Fewer than `(1/δ)^{3/2}` samples.
    pub under_resolved: bool,
}

/// One row of the flattening experiment: `samples` walks of length `n`
/// and `samples` of length `2n` (from an independent stream).
pub fn flattening_ratio(mu: &FloatMeasure, delta: f64, n: usize, samples: usize, seed: u64) -> Result<FlatteningRow, MultiscaleError> {
    check_scale(delta)?;
    if samples < 2 {
        return Err(MultiscaleError::TooFewSamples(samples));
    }
    let x = sample_float_walk(mu, n, samples, seed);
    let y = sample_float_walk(mu, 2 * n, samples, seed.wrapping_add(0x5851_f42d_4c95_7f2d));
    let l2_norm = smoothed_l2_squared(mu.group, &x, delta).sqrt();
    let l2_conv = smoothed_l2_squared(mu.group, &y, delta).sqrt();
    Ok(FlatteningRow {
        delta,
        n,
        l2_norm,
        l2_conv,
        ratio: l2_conv / l2_norm,
        under_resolved: (samples as f64) < delta.recip().powf(1.5),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FlatteningSweep {
    pub c: f64,
    pub rows: Vec<FlatteningRow>,
    /// Slope of `ln ratio` against `ln δ`: `ratio ≈ δ^ε̂`.
    pub epsilon_hat: Option<f64>,
    pub fit: Option<LinearFit>,
}

/// Sweeps δ with `n = ⌈c·ln(1/δ)⌉`.
pub fn flattening_sweep(mu: &FloatMeasure, deltas: &[f64], c: f64, samples: usize, seed: u64) -> Result<FlatteningSweep, MultiscaleError> {
    let rows = deltas
        .iter()
        .map(|&d| flattening_ratio(mu, d, (c * d.recip().ln()).ceil().max(1.0) as usize, samples, seed))
        .collect::<Result<Vec<_>, _>>()?;
    let pts: Vec<&FlatteningRow> = rows.iter().filter(|r| r.ratio > 0.0 && r.ratio.is_finite()).collect();
    let fit = linear_fit(&pts.iter().map(|r| r.delta.ln()).collect::<Vec<_>>(), &pts.iter().map(|r| r.ratio.ln()).collect::<Vec<_>>());
    Ok(FlatteningSweep { c, rows, epsilon_hat: fit.map(|f| f.slope), fit })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SubgroupFit {
    pub subgroup: SubgroupModel,
    /// Smallest radius whose neighbourhood holds the coverage fraction.
    pub rho: f64,
    pub coverage: f64,
    pub rho_over_delta: f64,
    /// `(τ, ρ / δ^τ)`.
    pub tau_candidates: Vec<(f64, f64)>,
}

pub const FIT_COVERAGE: f64 = 0.99;

fn weighted_quantile(values: &[(f64, f64)], q: f64) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.0.total_cmp(&b.0));
    let total: f64 = v.iter().map(|x| x.1).sum();
    let mut acc = 0.0;
    for (x, w) in &v {
        acc += w;
        if acc >= q * total - 1e-12 {
            return *x;
        }
    }
    v.last().map(|x| x.0).unwrap_or(0.0)
}

/// Best of {e}, and a torus / normalizer on the principal axis of the
/// cloud's rotation axes, by the coverage-quantile radius.
pub fn subgroup_fit(a: &PointCloud, delta: f64) -> Result<SubgroupFit, MultiscaleError> {
    check_scale(delta)?;
    if a.is_empty() {
        return Err(MultiscaleError::EmptyCloud);
    }
    let kind = a.kind;
    let mut scatter = Matrix3::<f64>::zeros();
    for (p, w) in a.points.iter().zip(&a.weights) {
        let v = Vector3::from(p.vector());
        scatter += v * v.transpose() * *w;
    }
    let axis = if scatter.norm() > 1e-300 {
        let eig = SymmetricEigen::new(scatter);
        let c = eig.eigenvectors.column(eig.eigenvalues.imax());
        [c[0], c[1], c[2]]
    } else {
        [0.0, 0.0, 1.0]
    };
    let candidates = [SubgroupModel::trivial(kind), SubgroupModel::torus(axis), SubgroupModel::normalizer(axis)];
    let mut best: Option<(SubgroupModel, f64)> = None;
    for h in candidates {
        let d: Vec<(f64, f64)> = a.points.iter().zip(&a.weights).map(|(p, w)| (distance_to_subgroup(p, &h), *w)).collect();
        let rho = weighted_quantile(&d, FIT_COVERAGE);
        if best.as_ref().is_none_or(|(_, r)| rho < *r) {
            best = Some((h, rho));
        }
    }
    let (subgroup, rho) = best.unwrap();
    let total = a.total_weight();
    let coverage = a.points.iter().zip(&a.weights).filter(|(p, _)| distance_to_subgroup(p, &subgroup) <= rho).map(|x| x.1).sum::<f64>() / total;
    Ok(SubgroupFit {
        rho,
        coverage,
        rho_over_delta: rho / delta,
        tau_candidates: [0.25, 0.5, 0.75, 1.0].iter().map(|&t| (t, rho / delta.powf(t))).collect(),
        subgroup,
    })
}

/// Points spread uniformly on the torus about `axis` with spacing `step`.
pub fn torus_points(axis: [f64; 3], step: f64) -> Vec<UnitQuaternion> {
    let n = (2.0 * std::f64::consts::PI / step).ceil() as usize;
    (0..n).map(|k| UnitQuaternion::from_axis_angle(axis, k as f64 * 2.0 * std::f64::consts::PI / n as f64)).collect()
}

/// Haar-random points.
pub fn haar_points(count: usize, seed: u64) -> Vec<UnitQuaternion> {
    let mut rng = block_rng(seed, u64::MAX);
    (0..count).map(|_| UnitQuaternion::random(&mut rng)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hash_matches_brute_force() {
        let pts = haar_points(400, 3);
        let hash = MetricHash::new(GroupKind::SO3, &pts, 0.5);
        for p in pts.iter().take(50) {
            let mut got = hash.query(p);
            got.sort_unstable();
            let want: Vec<usize> = (0..pts.len()).filter(|&j| metric(GroupKind::SO3, p, &pts[j]) <= 0.5).collect();
            assert_eq!(got, want);
        }
    }

    #[test]
    fn single_point_covering() {
        let a = PointCloud::uniform(GroupKind::SO3, vec![UnitQuaternion::IDENTITY]);
        for d in [0.5, 0.1, 0.01] {
            assert_eq!(covering_number(&a, d).unwrap(), CoveringBounds { lower: 1, upper: 1 });
        }
        assert_eq!(covering_number(&PointCloud::uniform(GroupKind::SO3, vec![]), 0.1), Err(MultiscaleError::EmptyCloud));
    }

    #[test]
    fn identity_energy() {
        let a = PointCloud::uniform(GroupKind::SO3, vec![UnitQuaternion::IDENTITY]);
        let e = multiplicative_energy(&a, &a, 0.1).unwrap();
        assert_eq!(e.energy, 1);
    }

    #[test]
    fn lens_kernel_integrates_to_one_over_ball() {
        // ∫ K(|x|) dx over ℝ³ in units of |B(δ)| equals 1/|B| · |B| = 1 for the flat kernel.
        let n = 4000;
        let mut s = 0.0;
        for k in 0..n {
            let t = 2.0 * (k as f64 + 0.5) / n as f64;
            s += (1.0 - 0.75 * t + t.powi(3) / 16.0) * 3.0 * t * t * (2.0 / n as f64);
        }
        assert!((s - 1.0).abs() < 1e-6);
    }
}
