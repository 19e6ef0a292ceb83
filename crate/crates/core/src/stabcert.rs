//! Word balls with exact entries, Plücker relations, the affine systems
//! `P_{I₀,g}(v) = (⋀^ℓ g)v ∓ v` and exact certification of subspaces
//! stabilised by every word close to `H_{L₀}`.

use std::collections::HashMap;

use num::bigint::BigInt;
use num::integer::Integer;
use num::traits::{One, Pow, ToPrimitive};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::exact::{Rational, Scalar};
use crate::linalg::{binomial, subsets, Matrix, SubspaceModel};
use crate::Diagnostic;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StabError {
    #[error("entries exceed the height budget of {bits} bits")]
    HeightOverflow { bits: u64 },
    #[error("no word of the ball is within the threshold of the stabiliser")]
    EmptyNearSet,
    #[error("generators must be square matrices of one size")]
    DimensionMismatch,
    #[error("generating set is not closed under inverses")]
    NotSymmetric,
    #[error("bad parameter: {0}")]
    BadParameter(String),
}

impl Diagnostic for StabError {
    fn module(&self) -> &'static str {
        "stabcert"
    }
    fn code(&self) -> &'static str {
        match self {
            StabError::HeightOverflow { .. } => "HeightOverflow",
            StabError::EmptyNearSet => "EmptyNearSet",
            StabError::DimensionMismatch => "DimensionMismatch",
            StabError::NotSymmetric => "NotSymmetric",
            StabError::BadParameter(_) => "BadParameter",
        }
    }
}

pub const DEFAULT_HEIGHT_BUDGET: u64 = 4096;

#[derive(Debug, Clone, PartialEq)]
pub struct WordBall<T> {
    pub generators: Vec<Matrix<T>>,
    pub radius: usize,
    /// Distinct elements with a shortest word, in order of word length.
    pub elements: Vec<(Matrix<T>, Vec<usize>)>,
}

impl<T: Scalar> WordBall<T> {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Number of elements whose shortest word has length exactly `n`.
    pub fn sphere_size(&self, n: usize) -> usize {
        self.elements.iter().filter(|(_, w)| w.len() == n).count()
    }
}

/// Ball size of a free group on `k` generators (`2k` symmetric letters).
pub fn free_ball_size(k: usize, n: usize) -> usize {
    if n == 0 {
        return 1;
    }
    1 + 2 * k * (0..n).map(|i| (2 * k - 1).pow(i as u32)).sum::<usize>()
}

/// All distinct products of at most `n` generators; words are read left
/// to right, `w = s_{w[0]} ⋯ s_{w[k]}`.
pub fn word_ball<T: Scalar + Send + Sync>(s: &[Matrix<T>], n: usize, height_budget: u64) -> Result<WordBall<T>, StabError> {
    let d = s.first().map_or(0, |m| m.rows());
    if s.iter().any(|m| m.rows() != d || m.cols() != d) {
        return Err(StabError::DimensionMismatch);
    }
    let id = Matrix::<T>::identity(d);
    let mut seen: HashMap<Matrix<T>, ()> = HashMap::from([(id.clone(), ())]);
    let mut elements = vec![(id, Vec::new())];
    let mut frontier = 0..1;
    for _ in 0..n {
        let layer: Vec<(Matrix<T>, Vec<usize>)> = elements[frontier.clone()]
            .par_iter()
            .flat_map_iter(|(m, w)| {
                s.iter().enumerate().map(move |(i, g)| {
                    let mut w2 = w.clone();
                    w2.push(i);
                    (m * g, w2)
                })
            })
            .collect();
        let start = elements.len();
        for (m, w) in layer {
            if seen.contains_key(&m) {
                continue;
            }
            if let Some(bits) = m.entries().iter().map(Scalar::height_bits).max() {
                if bits > height_budget {
                    return Err(StabError::HeightOverflow { bits: height_budget });
                }
            }
            seen.insert(m.clone(), ());
            elements.push((m, w));
        }
        frontier = start..elements.len();
    }
    Ok(WordBall { generators: s.to_vec(), radius: n, elements })
}

/// Checks that the inverse of every generator is a generator.
pub fn is_symmetric_set<T: Scalar>(s: &[Matrix<T>]) -> bool {
    s.iter().all(|g| g.inverse().is_some_and(|inv| s.contains(&inv)))
}

/// `Σ c · p_I · p_J` with `I, J` indices into [`subsets`]`(d, ℓ)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PluckerRelation {
    pub terms: Vec<(i64, usize, usize)>,
}

impl PluckerRelation {
    pub fn evaluate<T: Scalar>(&self, p: &[T]) -> T {
        self.terms.iter().fold(T::zero(), |acc, &(c, i, j)| {
            acc + T::from_rational(Rational::from_integer(c.into())) * p[i].clone() * p[j].clone()
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PluckerSystem {
    pub d: usize,
    pub l: usize,
    pub relations: Vec<PluckerRelation>,
}

impl PluckerSystem {
    pub fn is_pure<T: Scalar>(&self, p: &[T]) -> bool {
        self.relations.iter().all(|r| r.evaluate(p).is_zero())
    }
}

/// Sorted `set ∪ {j}` and the sign of the sorting permutation.
fn insert_sorted(set: &[usize], j: usize) -> Option<(Vec<usize>, i64)> {
    if set.contains(&j) {
        return None;
    }
    let after = set.iter().filter(|&&x| x > j).count();
    let mut v = set.to_vec();
    v.push(j);
    v.sort_unstable();
    Some((v, if after % 2 == 0 { 1 } else { -1 }))
}

/// Quadratic Plücker relations: for `|I| = ℓ−1`, `|J| = ℓ+1`,
/// `Σ_k (−1)^k p_{I ∪ j_k} p_{J ∖ j_k} = 0`. Trivial relations are
/// dropped and duplicates (up to sign) merged.
pub fn plucker_relations(d: usize, l: usize) -> Result<PluckerSystem, StabError> {
    if l == 0 || l > d {
        return Err(StabError::BadParameter(format!("need 1 ≤ ℓ ≤ d, got ℓ = {l}, d = {d}")));
    }
    let coords = subsets(d, l);
    let index: HashMap<&Vec<usize>, usize> = coords.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let mut relations: Vec<PluckerRelation> = Vec::new();
    if l >= 2 && l + 1 <= d {
        for i_set in subsets(d, l - 1) {
            for j_set in subsets(d, l + 1) {
                let mut acc: HashMap<(usize, usize), i64> = HashMap::new();
                for (k, &j) in j_set.iter().enumerate() {
                    let Some((a, sign)) = insert_sorted(&i_set, j) else { continue };
                    let b: Vec<usize> = j_set.iter().copied().filter(|&x| x != j).collect();
                    let (ia, ib) = (index[&a], index[&b]);
                    let key = (ia.min(ib), ia.max(ib));
                    *acc.entry(key).or_insert(0) += sign * if k % 2 == 0 { 1 } else { -1 };
                }
                let mut terms: Vec<(i64, usize, usize)> = acc.into_iter().filter(|(_, c)| *c != 0).map(|((a, b), c)| (c, a, b)).collect();
                if terms.is_empty() {
                    continue;
                }
                terms.sort_by_key(|t| (t.1, t.2));
                let g = terms.iter().fold(0i64, |g, t| g.gcd(&t.0));
                let s = if terms[0].0 < 0 { -g } else { g };
                terms.iter_mut().for_each(|t| t.0 /= s);
                let r = PluckerRelation { terms };
                if !relations.contains(&r) {
                    relations.push(r);
                }
            }
        }
    }
    Ok(PluckerSystem { d, l, relations })
}

/// `P(x) = linear · x + constant`, where `x` lists the coordinates
/// `v_I`, `I ≠ I₀`, in [`subsets`] order and `v_{I₀} = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineSystem<T> {
    pub pivot: usize,
    pub linear: Matrix<T>,
    pub constant: Vec<T>,
}

impl<T: Scalar> AffineSystem<T> {
    pub fn evaluate(&self, x: &[T]) -> Vec<T> {
        self.linear.mul_vec(x).into_iter().zip(&self.constant).map(|(a, b)| a + b.clone()).collect()
    }
}

/// Full coordinate vector from the free coordinates.
pub fn embed_coordinates<T: Scalar>(pivot: usize, x: &[T]) -> Vec<T> {
    let mut v = x.to_vec();
    v.insert(pivot, T::one());
    v
}

/// `P_{I₀,g}(v) = (⋀^ℓ g)v − sign·v` as an affine map of the free
/// coordinates. `sign` is `+1` or `−1`.
pub fn stabilizer_system<T: Scalar>(pivot: usize, g: &Matrix<T>, l: usize, sign: i32) -> AffineSystem<T> {
    let wedge = g.exterior_power(l);
    let n = wedge.rows();
    let s = if sign >= 0 { T::one() } else { -T::one() };
    let m = wedge.sub(&Matrix::identity(n).scale(&s));
    let rows: Vec<Vec<T>> = (0..n).map(|i| (0..n).filter(|&j| j != pivot).map(|j| m[(i, j)].clone()).collect()).collect();
    AffineSystem { pivot, linear: Matrix::from_rows(rows), constant: m.column(pivot) }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LedgerRow {
    pub n: usize,
    /// Distinct elements with shortest word length `n`.
    pub elements: usize,
    /// `max ln size(qⁿ P_{I₀,w})`, size = largest conjugate absolute value.
    pub log_size: f64,
    /// `ln q^{2n}`.
    pub log_bound: f64,
    pub integral: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HeightLedger {
    pub l: usize,
    pub q: u64,
    /// Least `D` making `D·(⋀^ℓ s)` integral for every generator.
    pub integrality_factor: u64,
    pub rows: Vec<LedgerRow>,
    /// `size(n+1) ≤ q²·size(n)` for every consecutive pair of rows.
    pub submultiplicative: bool,
}

impl HeightLedger {
    pub fn integral(&self) -> bool {
        self.rows.iter().all(|r| r.integral)
    }

    pub fn within_bound(&self) -> bool {
        self.rows.iter().all(|r| r.log_size <= r.log_bound + 1e-9)
    }
}

fn integrality_factor<T: Scalar>(entries: &[T]) -> Result<u64, StabError> {
    let l = entries.iter().fold(BigInt::one(), |acc, x| acc.lcm(&x.denominator_lcm()));
    let l = l.to_u64().ok_or(StabError::HeightOverflow { bits: 64 })?;
    for k in 1..=l {
        if l % k == 0 && entries.iter().all(|x| (T::from_rational(Rational::from_integer(k.into())) * x.clone()).is_algebraic_integer()) {
            return Ok(k);
        }
    }
    Ok(l)
}

/// `q = D·(⌈N·M⌉ + 1)`, where `D` clears denominators of the generators'
/// `ℓ`-th exterior powers (in the ring of integers), `N = C(d, ℓ)` and `M`
/// bounds their conjugate absolute values. Then `size(qⁿ P) ≤ q^{2n}` for
/// words of length `n`.
pub fn ledger_q<T: Scalar>(s: &[Matrix<T>], l: usize) -> Result<u64, StabError> {
    let wedges: Vec<Matrix<T>> = s.iter().map(|g| g.exterior_power(l)).collect();
    let entries: Vec<T> = wedges.iter().flat_map(|w| w.entries().to_vec()).collect();
    let dfac = integrality_factor(&entries)?;
    let n = binomial(s.first().map_or(0, |g| g.rows()), l) as f64;
    let m = entries.iter().map(Scalar::max_conjugate_abs).fold(0.0, f64::max);
    Ok(dfac * ((n * m - 1e-12).ceil().max(0.0) as u64 + 1))
}

/// Checks integrality of `qⁿ P_{I₀,w}` and the size bound on every element
/// of the ball of radius `n_max` (shortest word lengths).
pub fn verify_ledger<T: Scalar + Send + Sync>(
    s: &[Matrix<T>],
    l: usize,
    q: u64,
    n_max: usize,
    height_budget: u64,
) -> Result<HeightLedger, StabError> {
    if q == 0 {
        return Err(StabError::BadParameter("q must be positive".into()));
    }
    let ball = word_ball(s, n_max, height_budget)?;
    let wedges: Vec<Matrix<T>> = s.iter().map(|g| g.exterior_power(l)).collect();
    let dfac = integrality_factor(&wedges.iter().flat_map(|w| w.entries().to_vec()).collect::<Vec<_>>())?;
    let mut rows: Vec<LedgerRow> = (0..=n_max)
        .map(|n| LedgerRow { n, elements: 0, log_size: f64::NEG_INFINITY, log_bound: 2.0 * n as f64 * (q as f64).ln(), integral: true })
        .collect();
    let per: Vec<(usize, f64, bool)> = ball
        .elements
        .par_iter()
        .map(|(g, w)| {
            let n = w.len();
            let qn = T::from_rational(Rational::from_integer(BigInt::from(q).pow(n as u32)));
            let p = g.exterior_power(l).sub(&Matrix::identity(binomial(g.rows(), l)));
            let mut size: f64 = 0.0;
            let mut integral = true;
            for x in p.entries() {
                let y = qn.clone() * x.clone();
                integral &= y.is_algebraic_integer();
                size = size.max(x.max_conjugate_abs());
            }
            (n, size.ln() + n as f64 * (q as f64).ln(), integral)
        })
        .collect();
    for (n, ls, ok) in per {
        let r = &mut rows[n];
        r.elements += 1;
        r.log_size = r.log_size.max(ls);
        r.integral &= ok;
    }
    let lq2 = 2.0 * (q as f64).ln();
    let submultiplicative = rows.windows(2).all(|w| !w[0].log_size.is_finite() || w[1].log_size <= w[0].log_size + lq2 + 1e-9);
    Ok(HeightLedger { l, q, integrality_factor: dfac, rows, submultiplicative })
}

/// [`ledger_q`] followed by [`verify_ledger`].
pub fn height_ledger<T: Scalar + Send + Sync>(s: &[Matrix<T>], l: usize, n_max: usize) -> Result<HeightLedger, StabError> {
    let q = ledger_q(s, l)?;
    verify_ledger(s, l, q, n_max, DEFAULT_HEIGHT_BUDGET)
}

/// Subspace spanned by a pure tensor with `p[pivot] = 1`.
pub fn subspace_from_plucker<T: Scalar>(d: usize, l: usize, p: &[T], pivot: usize) -> Option<SubspaceModel<T>> {
    let coords = subsets(d, l);
    let i0 = &coords[pivot];
    let index: HashMap<&Vec<usize>, usize> = coords.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let mut basis = Vec::with_capacity(l);
    for (r, _) in i0.iter().enumerate() {
        let mut row = vec![T::zero(); d];
        for (j, slot) in row.iter_mut().enumerate() {
            // Replace the r-th pivot column by j.
            let mut set = i0.clone();
            set[r] = j;
            let mut sorted = set.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() < l {
                continue;
            }
            let inversions = (0..l).flat_map(|a| (a + 1..l).map(move |b| (a, b))).filter(|&(a, b)| set[a] > set[b]).count();
            let v = p[index[&sorted]].clone();
            *slot = if inversions % 2 == 0 { v } else { -v };
        }
        basis.push(row);
    }
    let model = SubspaceModel::from_basis(basis)?;
    let scale = model.plucker[pivot].clone();
    (0..p.len()).all(|i| model.plucker[i].clone() * scale.clone() == p[i].clone() * model.plucker[pivot].clone()).then_some(model)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Certificate<T> {
    pub subspace: SubspaceModel<T>,
    /// `+1`: `(⋀^ℓ g)u = u`; `−1`: `(⋀^ℓ g)u = −u` on the near set.
    pub sign: i32,
    pub near_set: usize,
    /// The near set is `{e}`, so every subspace qualifies.
    pub degenerate: bool,
    /// `"solver"` or `"u_prime"`.
    pub method: &'static str,
    /// Independent rank check of `g·L₁ = L₁` on the near set.
    pub verified: bool,
}

/// `max_I |((⋀^ℓ g)u′ − u′)_I|` in floating point.
pub fn wedge_defect<T: Scalar>(g: &Matrix<T>, u: &[T], l: usize) -> f64 {
    let w = g.exterior_power(l).mul_vec(u);
    w.iter().zip(u).map(|(a, b)| (a.clone() - b.clone()).to_complex().norm()).fold(0.0, f64::max)
}

fn grid_values<T: Scalar>() -> Vec<T> {
    [(0, 1), (1, 1), (-1, 1), (2, 1), (-2, 1), (1, 2), (-1, 2)]
        .iter()
        .map(|&(a, b)| T::from_rational(Rational::new(a.into(), b.into())))
        .collect()
}

/// Exact search for a pure tensor in `x₀ + span(null)`.
fn pure_point<T: Scalar>(sys: &PluckerSystem, pivot: usize, x0: &[T], null: &[Vec<T>]) -> Option<Vec<T>> {
    let point = |t: &[T]| -> Vec<T> {
        let mut x = x0.to_vec();
        for (tk, nk) in t.iter().zip(null) {
            for (xi, ni) in x.iter_mut().zip(nk) {
                *xi = xi.clone() + tk.clone() * ni.clone();
            }
        }
        embed_coordinates(pivot, &x)
    };
    let k = null.len();
    if k == 0 {
        let v = point(&[]);
        return sys.is_pure(&v).then_some(v);
    }
    // One parameter: the relations are quadratics in t; a linear one pins t.
    if k == 1 {
        let zero = point(&[T::zero()]);
        if sys.is_pure(&zero) {
            return Some(zero);
        }
        let one = point(&[T::one()]);
        let minus = point(&[-T::one()]);
        for r in &sys.relations {
            let (c, p1, m1) = (r.evaluate(&zero), r.evaluate(&one), r.evaluate(&minus));
            let two = T::from_rational(Rational::from_integer(2.into()));
            let a = (p1.clone() + m1.clone() - two.clone() * c.clone()) / two.clone();
            let b = (p1 - m1) / two;
            if a.is_zero() && !b.is_zero() {
                let t = -c / b;
                let v = point(&[t]);
                return sys.is_pure(&v).then_some(v);
            }
        }
    }
    let values = grid_values::<T>();
    let dims = k.min(3);
    let total = values.len().pow(dims as u32);
    for idx in 0..total {
        let mut t = vec![T::zero(); k];
        let mut r = idx;
        for slot in t.iter_mut().take(dims) {
            *slot = values[r % values.len()].clone();
            r /= values.len();
        }
        let v = point(&t);
        if sys.is_pure(&v) {
            return Some(v);
        }
    }
    None
}

/// Finds `L₁` with `g·L₁ = L₁` for every ball element within `threshold`
/// of `H_{L₀}` (measured by [`wedge_defect`] on the normalised Plücker
/// vector of `L₀`). Both signs are tried, `+1` first.
pub fn certify_common_invariant_subspace<T: Scalar>(
    ball: &WordBall<T>,
    l0: &SubspaceModel<T>,
    threshold: f64,
) -> Result<Option<Certificate<T>>, StabError> {
    if !(threshold > 0.0) {
        return Err(StabError::BadParameter("threshold must be positive".into()));
    }
    let (d, l) = (l0.ambient_dim, l0.dim());
    let u = &l0.plucker;
    let near: Vec<&Matrix<T>> = ball.elements.iter().map(|(g, _)| g).filter(|g| wedge_defect(g, u, l) <= threshold).collect();
    if near.is_empty() {
        return Err(StabError::EmptyNearSet);
    }
    let degenerate = near.iter().all(|g| g.is_identity());
    let sys = plucker_relations(d, l)?;
    let pivot = l0.pivot;
    let finish = |subspace: SubspaceModel<T>, sign: i32, method: &'static str| {
        let verified = near.iter().all(|g| {
            let w = g.exterior_power(l).mul_vec(&subspace.plucker);
            let s = if sign > 0 { T::one() } else { -T::one() };
            subspace.is_invariant_under(g) && w.iter().zip(&subspace.plucker).all(|(a, b)| *a == s.clone() * b.clone())
        });
        Certificate { subspace, sign, near_set: near.len(), degenerate, method, verified }
    };
    for sign in [1, -1] {
        let systems: Vec<AffineSystem<T>> = near.iter().map(|g| stabilizer_system(pivot, g, l, sign)).collect();
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        for s in &systems {
            for i in 0..s.linear.rows() {
                rows.push(s.linear.row(i));
                rhs.push(-s.constant[i].clone());
            }
        }
        let a = Matrix::from_rows(rows);
        if let Some((x0, null)) = a.solve_affine(&rhs) {
            if let Some(v) = pure_point(&sys, pivot, &x0, &null) {
                if let Some(sub) = subspace_from_plucker(d, l, &v, pivot) {
                    return Ok(Some(finish(sub, sign, "solver")));
                }
            }
        }
        let s = if sign > 0 { T::one() } else { -T::one() };
        if near.iter().all(|g| g.exterior_power(l).mul_vec(u).iter().zip(u).all(|(a, b)| *a == s.clone() * b.clone())) {
            return Ok(Some(finish(l0.clone(), sign, "u_prime")));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};
    use num::traits::Zero;

    fn m(rows: &[&[i64]]) -> Matrix<Rational> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect())
    }

    #[test]
    fn gr24_single_relation() {
        let sys = plucker_relations(4, 2).unwrap();
        assert_eq!(sys.relations.len(), 1);
        // Coordinates 12,13,14,23,24,34 ↦ 0..6.
        let mut terms = sys.relations[0].terms.clone();
        terms.sort_by_key(|t| (t.1, t.2));
        assert_eq!(terms, vec![(1, 0, 5), (-1, 1, 4), (1, 2, 3)]);
        assert!(plucker_relations(4, 1).unwrap().relations.is_empty());
        assert!(plucker_relations(4, 4).unwrap().relations.is_empty());
        assert!(plucker_relations(4, 3).unwrap().relations.is_empty());
    }

    #[test]
    fn diag_stabilizer_system() {
        let g = Matrix::diagonal(vec![rat(2, 1), rat(1, 2)]);
        let sys = stabilizer_system(0, &g, 1, 1);
        // v = (1, v₂): P = (2 − 1, (1/2 − 1) v₂).
        assert_eq!(sys.evaluate(&[rat(0, 1)]), vec![int(1), int(0)]);
        let e = stabilizer_system(0, &Matrix::<Rational>::identity(2), 1, 1);
        assert!(e.linear.is_zero() && e.constant.iter().all(Zero::is_zero));
    }

    #[test]
    fn ball_of_free_pair() {
        let a = m(&[&[1, 2], &[0, 1]]);
        let b = m(&[&[1, 0], &[2, 1]]);
        let s = vec![a.clone(), a.inverse().unwrap(), b.clone(), b.inverse().unwrap()];
        let ball = word_ball(&s, 4, DEFAULT_HEIGHT_BUDGET).unwrap();
        assert_eq!(ball.len(), free_ball_size(2, 4));
        let r = m(&[&[0, -1], &[1, 0]]);
        let torsion = vec![r.clone(), r.inverse().unwrap()];
        assert!(word_ball(&torsion, 4, DEFAULT_HEIGHT_BUDGET).unwrap().len() < free_ball_size(1, 4));
    }

    #[test]
    fn plucker_round_trip() {
        let b = vec![vec![int(1), int(2), int(0), int(3)], vec![int(0), int(1), int(1), int(-1)]];
        let sub = SubspaceModel::from_basis(b).unwrap();
        let back = subspace_from_plucker(4, 2, &sub.plucker, sub.pivot).unwrap();
        assert_eq!(back.plucker, sub.plucker);
    }
}
