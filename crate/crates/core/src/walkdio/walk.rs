//! Sampling words from a measure. Samples are split into fixed blocks,
//! each with its own ChaCha stream, so results do not depend on the
//! number of worker threads.

use std::collections::HashMap;

use num::traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::measure::{ExactElement, MeasureSpec};
use crate::exact::Rational;
use crate::su2harm::UnitQuaternion;

pub const DEFAULT_HEIGHT_CAP: u64 = 4096;
/// Samples per RNG stream.
pub const BLOCK: usize = 4096;

pub fn block_rng(seed: u64, block: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(block);
    rng
}

pub(crate) fn pick(cumulative: &[f64], u: f64) -> usize {
    cumulative.partition_point(|c| *c <= u).min(cumulative.len() - 1)
}

/// Folds `step(acc, n, g_n)` over every prefix `g_n = s_1⋯s_n`,
/// `1 ≤ n ≤ n_max`, of `samples` independent words. Block accumulators
/// are merged in block order.
pub fn walk_fold<A, I, S, M>(
    mu: &MeasureSpec,
    n_max: usize,
    samples: usize,
    seed: u64,
    init: I,
    step: S,
    merge: M,
) -> A
where
    A: Send,
    I: Fn() -> A + Sync,
    S: Fn(&mut A, usize, &UnitQuaternion) + Sync,
    M: Fn(A, A) -> A,
{
    let atoms: Vec<UnitQuaternion> = mu.atoms.iter().map(|a| a.element.to_quaternion()).collect();
    let cumulative = mu.cumulative();
    let blocks = samples.div_ceil(BLOCK);
    let partial: Vec<A> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = block_rng(seed, b as u64);
            let mut acc = init();
            let count = BLOCK.min(samples - b * BLOCK);
            for _ in 0..count {
                let mut g = UnitQuaternion::IDENTITY;
                for n in 1..=n_max {
                    let s = &atoms[pick(&cumulative, rng.random::<f64>())];
                    g = g.mul(s);
                    step(&mut acc, n, &g);
                }
            }
            acc
        })
        .collect();
    let mut it = partial.into_iter();
    let first = it.next().unwrap_or_else(&init);
    it.fold(first, merge)
}

#[derive(Debug, Clone, PartialEq)]
pub struct WalkSample {
    pub n: usize,
    pub seed: u64,
    pub endpoints: Vec<UnitQuaternion>,
    /// Exact endpoints when requested; `None` entries overflowed the
    /// height budget and only have the float value.
    pub exact: Option<Vec<Option<ExactElement>>>,
    pub overflowed: usize,
}

/// `samples` independent draws from `μ^{*n}`.
pub fn sample_walk(mu: &MeasureSpec, n: usize, samples: usize, seed: u64, exact: bool, height_cap: u64) -> WalkSample {
    let cumulative = mu.cumulative();
    let floats: Vec<UnitQuaternion> = mu.atoms.iter().map(|a| a.element.to_quaternion()).collect();
    let blocks = samples.div_ceil(BLOCK);
    let parts: Vec<Vec<(UnitQuaternion, Option<Option<ExactElement>>)>> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = block_rng(seed, b as u64);
            let count = BLOCK.min(samples - b * BLOCK);
            (0..count)
                .map(|_| {
                    let mut g = UnitQuaternion::IDENTITY;
                    let mut e = exact.then(|| Some(ExactElement::identity(mu.group)));
                    for _ in 0..n {
                        let i = pick(&cumulative, rng.random::<f64>());
                        g = g.mul(&floats[i]);
                        if let Some(Some(x)) = &e {
                            let y = x.mul(&mu.atoms[i].element);
                            e = Some(if y.height_bits() > height_cap { None } else { Some(y) });
                        }
                    }
                    (g, e)
                })
                .collect()
        })
        .collect();
    let mut endpoints = Vec::with_capacity(samples);
    let mut exacts = Vec::new();
    for (g, e) in parts.into_iter().flatten() {
        endpoints.push(g);
        if let Some(e) = e {
            exacts.push(e);
        }
    }
    let overflowed = exacts.iter().filter(|e| e.is_none()).count();
    WalkSample { n, seed, endpoints, exact: exact.then_some(exacts), overflowed }
}

/// The law of `μ^{*n}` by exact convolution over distinct elements.
pub fn exact_distribution(mu: &MeasureSpec, n: usize) -> HashMap<ExactElement, Rational> {
    let mut dist: HashMap<ExactElement, Rational> = HashMap::new();
    dist.insert(ExactElement::identity(mu.group), Rational::from_integer(1.into()));
    for _ in 0..n {
        let mut next: HashMap<ExactElement, Rational> = HashMap::with_capacity(dist.len() * mu.atoms.len());
        for (g, p) in &dist {
            for a in &mu.atoms {
                *next.entry(g.mul(&a.element)).or_insert_with(Rational::zero) += p * &a.weight;
            }
        }
        dist = next;
    }
    dist
}
