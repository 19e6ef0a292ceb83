//! Return probabilities of the simple random walk on the free group `F_m`
//! and Kesten's spectral radius.

use num::traits::{One, Zero};
use serde::Serialize;

use super::WalkError;
use crate::exact::{rational_to_f64, Rational};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KestenReport {
    pub m: u32,
    pub n_max: usize,
    /// `√(2m−1)/m`.
    pub theory: f64,
    /// Perron root of the walk killed outside the word ball of radius
    /// `n_max`; increases to `theory`.
    pub empirical: f64,
    /// `max_{n ≤ n_max} p_{2n}(e)^{1/2n}`; converges slowly (polynomial
    /// prefactor).
    pub root_estimate: f64,
    /// `p_{2n}(e)` for `n = 1..=n_max`.
    pub return_probabilities: Vec<f64>,
}

/// Exact `p_t(e)` for `t = 0..=steps`, by dynamic programming on the word
/// length (a birth–death chain: 0 → 1 surely, ℓ → ℓ+1 w.p. (2m−1)/2m).
pub fn free_group_return_probabilities(m: u32, steps: usize) -> Vec<Rational> {
    let up = Rational::new((2 * m as i64 - 1).into(), (2 * m as i64).into());
    let down = Rational::new(1.into(), (2 * m as i64).into());
    let mut dist = vec![Rational::zero(); steps + 2];
    dist[0] = Rational::one();
    let mut out = vec![Rational::one()];
    for _ in 0..steps {
        let mut next = vec![Rational::zero(); steps + 2];
        for (l, p) in dist.iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            if l == 0 {
                next[1] += p;
            } else {
                next[l - 1] += p * &down;
                if l + 1 < next.len() {
                    next[l + 1] += p * &up;
                }
            }
        }
        dist = next;
        out.push(dist[0].clone());
    }
    out
}

/// Largest eigenvalue of the symmetric tridiagonal matrix with zero
/// diagonal and off-diagonal `off`, by Sturm-sequence bisection.
fn tridiagonal_top(off: &[f64]) -> f64 {
    let n = off.len() + 1;
    // Number of eigenvalues < x.
    let below = |x: f64| {
        let mut count = 0;
        let mut d = -x;
        if d < 0.0 {
            count += 1;
        }
        for e in off.iter() {
            let prev = if d == 0.0 { 1e-300 } else { d };
            d = -x - e * e / prev;
            if d < 0.0 {
                count += 1;
            }
        }
        count
    };
    let bound = 2.0 * off.iter().cloned().fold(0.0, f64::max);
    let (mut lo, mut hi) = (-bound - 1.0, bound + 1.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if below(mid) >= n {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo < 1e-15 {
            break;
        }
    }
    0.5 * (lo + hi)
}

pub fn kesten_baseline(m: u32, n_max: usize) -> Result<KestenReport, WalkError> {
    if m == 0 || n_max == 0 {
        return Err(WalkError::BadParameter("need m ≥ 1 and n_max ≥ 1".into()));
    }
    let k = m as f64;
    let theory = (2.0 * k - 1.0).sqrt() / k;
    let (up, down) = ((2.0 * k - 1.0) / (2.0 * k), 1.0 / (2.0 * k));
    // Radial chain on 0..=n_max, symmetrised.
    let off: Vec<f64> = (0..n_max).map(|l| if l == 0 { down.sqrt() } else { (up * down).sqrt() }).collect();
    let empirical = tridiagonal_top(&off);
    let probs = free_group_return_probabilities(m, 2 * n_max);
    let return_probabilities: Vec<f64> = (1..=n_max).map(|n| rational_to_f64(&probs[2 * n])).collect();
    let root_estimate = return_probabilities
        .iter()
        .enumerate()
        .map(|(i, p)| p.powf(1.0 / (2.0 * (i + 1) as f64)))
        .fold(0.0, f64::max);
    Ok(KestenReport { m, n_max, theory, empirical, root_estimate, return_probabilities })
}
