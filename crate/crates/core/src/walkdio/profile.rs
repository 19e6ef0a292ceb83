//! Empirical almost-Diophantine profiles and exact subgroup hitting
//! probabilities.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::measure::{ExactElement, MeasureSpec};
use super::subgroup::{standard_family, SubgroupModel};
use super::walk::{block_rng, pick, walk_fold, BLOCK};
use super::WalkError;
use crate::stats::{linear_fit, LinearFit};

#[derive(Debug, Clone, PartialEq)]
pub struct FamilyOptions {
    /// Axial clusters fitted from pilot samples.
    pub kmeans_k: usize,
    pub pilot_samples: usize,
    pub cyclic_orders: Vec<u32>,
    pub polyhedral: bool,
    /// Minimum hit count for a row to enter the decay fit.
    pub min_hits: u64,
}

impl Default for FamilyOptions {
    fn default() -> Self {
        FamilyOptions { kmeans_k: 4, pilot_samples: 2000, cyclic_orders: vec![2, 3, 4], polyhedral: true, min_hits: 30 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DioRow {
    pub n: usize,
    pub delta: f64,
    pub worst_probability: f64,
    pub worst_subgroup: String,
    pub hits: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DioProfile {
    pub c1: f64,
    pub seed: u64,
    pub samples: usize,
    pub family: Vec<String>,
    pub rows: Vec<DioRow>,
    /// Rows (by n) used for the decay fit.
    pub fit_window: Option<(usize, usize)>,
    pub fit: Option<LinearFit>,
    /// `−slope` of `ln worst_probability` against `n`.
    pub c2_hat: Option<f64>,
}

/// Estimates `sup_H μ^{*n}(H^{(δ_n)})`, `δ_n = e^{−C₁n}`, over `family`
/// (or the standard family when `None`) for every `n` in
/// `n_min..=n_max`. One streaming pass over the walks.
pub fn diophantine_profile(
    mu: &MeasureSpec,
    c1: f64,
    n_min: usize,
    n_max: usize,
    samples: usize,
    seed: u64,
    family: Option<Vec<SubgroupModel>>,
    opts: &FamilyOptions,
) -> Result<DioProfile, WalkError> {
    if !(c1 > 0.0) || !c1.is_finite() {
        return Err(WalkError::BadParameter(format!("C1 must be positive, got {c1}")));
    }
    if n_min < 1 || n_max < n_min || samples == 0 {
        return Err(WalkError::BadParameter("need 1 ≤ n_min ≤ n_max and samples ≥ 1".into()));
    }
    let family = match family {
        Some(f) => f,
        None => {
            // Pilot endpoints spread over the n-range, from an independent stream.
            let per = opts.pilot_samples.div_ceil(n_max - n_min + 1).max(1);
            let pilot = walk_fold(
                mu,
                n_max,
                per,
                seed ^ 0x9e37_79b9_7f4a_7c15,
                Vec::new,
                |acc, n, g| {
                    if n >= n_min {
                        acc.push(*g)
                    }
                },
                |mut a, b| {
                    a.extend(b);
                    a
                },
            );
            standard_family(mu, &pilot, opts.kmeans_k, &opts.cyclic_orders, opts.polyhedral)
        }
    };
    if family.is_empty() {
        return Err(WalkError::BadParameter("empty subgroup family".into()));
    }
    let deltas: Vec<f64> = (0..=n_max).map(|n| (-c1 * n as f64).exp()).collect();
    let nh = family.len();
    let counts = walk_fold(
        mu,
        n_max,
        samples,
        seed,
        || vec![0u64; (n_max + 1) * nh],
        |acc, n, g| {
            if n < n_min {
                return;
            }
            let d = deltas[n];
            for (h, model) in family.iter().enumerate() {
                if model.within(g, d) {
                    acc[n * nh + h] += 1;
                }
            }
        },
        |mut a, b| {
            a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
            a
        },
    );
    let rows: Vec<DioRow> = (n_min..=n_max)
        .map(|n| {
            let row = &counts[n * nh..(n + 1) * nh];
            // First maximum wins ties, so the order of the family is the tie-break.
            let (best, hits) = row.iter().enumerate().fold((0, 0u64), |acc, (i, &c)| if c > acc.1 { (i, c) } else { acc });
            DioRow {
                n,
                delta: deltas[n],
                worst_probability: hits as f64 / samples as f64,
                worst_subgroup: family[best].label(),
                hits,
            }
        })
        .collect();
    let window: Vec<&DioRow> = rows.iter().take_while(|r| r.hits >= opts.min_hits).collect();
    let fit = if window.len() >= 2 {
        let x: Vec<f64> = window.iter().map(|r| r.n as f64).collect();
        let y: Vec<f64> = window.iter().map(|r| r.worst_probability.ln()).collect();
        linear_fit(&x, &y)
    } else {
        None
    };
    Ok(DioProfile {
        c1,
        seed,
        samples,
        family: family.iter().map(SubgroupModel::label).collect(),
        fit_window: (window.len() >= 2).then(|| (window[0].n, window[window.len() - 1].n)),
        c2_hat: fit.map(|f| -f.slope),
        fit,
        rows,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HitRow {
    pub n: usize,
    pub hits: u64,
    pub probability: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HitCurve {
    pub subgroup: String,
    pub samples: usize,
    pub rows: Vec<HitRow>,
    /// `−slope` of `ln μ^{*n}(H)` over rows with at least one hit, `n ≥ 1`.
    pub kappa_hat: Option<f64>,
    pub fit: Option<LinearFit>,
}

/// Estimates `μ^{*n}(H)` for `n ∈ n_range` with exact membership tests.
pub fn subgroup_hit_probability(
    mu: &MeasureSpec,
    h: &SubgroupModel,
    n_range: std::ops::RangeInclusive<usize>,
    samples: usize,
    seed: u64,
) -> Result<HitCurve, WalkError> {
    if samples == 0 || n_range.is_empty() {
        return Err(WalkError::BadParameter("need samples ≥ 1 and a non-empty n range".into()));
    }
    let identity = ExactElement::identity(mu.group);
    let at_zero = h.contains_exact(&identity)?;
    let (n_min, n_max) = (*n_range.start(), *n_range.end());
    let cumulative = mu.cumulative();
    let blocks = samples.div_ceil(BLOCK);
    let parts: Vec<Result<Vec<u64>, WalkError>> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = block_rng(seed, b as u64);
            let mut acc = vec![0u64; n_max + 1];
            for _ in 0..BLOCK.min(samples - b * BLOCK) {
                let mut g = identity.clone();
                if at_zero {
                    acc[0] += 1;
                }
                for n in 1..=n_max {
                    let i = pick(&cumulative, rng.random::<f64>());
                    g = g.mul(&mu.atoms[i].element);
                    if n >= n_min && h.contains_exact(&g)? {
                        acc[n] += 1;
                    }
                }
            }
            Ok(acc)
        })
        .collect();
    let mut counts = vec![0u64; n_max + 1];
    for p in parts {
        counts.iter_mut().zip(p?).for_each(|(x, y)| *x += y);
    }
    let rows: Vec<HitRow> =
        n_range.map(|n| HitRow { n, hits: counts[n], probability: counts[n] as f64 / samples as f64 }).collect();
    let pts: Vec<&HitRow> = rows.iter().filter(|r| r.n >= 1 && r.hits > 0).collect();
    let fit = linear_fit(
        &pts.iter().map(|r| r.n as f64).collect::<Vec<_>>(),
        &pts.iter().map(|r| r.probability.ln()).collect::<Vec<_>>(),
    );
    Ok(HitCurve { subgroup: h.label(), samples, rows, kappa_hat: fit.map(|f| -f.slope), fit })
}
