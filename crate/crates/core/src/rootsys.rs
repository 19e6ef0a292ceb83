//! Irreducible reduced root systems in their standard Euclidean
//! realisations, with exact rational data throughout.
//!
//! Conventions: `cartan[i][j] = <α_i, α_j^∨> = 2(α_i, α_j)/(α_j, α_j)`.
//! Weights are stored both in ambient coordinates and in the basis of
//! fundamental weights; in the latter, a simple reflection acts by
//! `s_i(λ)_j = λ_j − λ_i · cartan[i][j]`, which is what the Weyl group
//! enumeration uses.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use num::bigint::{BigInt, BigUint};
use num::traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::exact::{int, rat, rational_to_f64, Rational};
use crate::linalg::Matrix;
use crate::Diagnostic;

/// Default bound on `|W|` for explicit enumeration.
pub const DEFAULT_WEYL_CAP: u128 = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RootSysError {
    #[error("inadmissible root system {family}{rank}")]
    InadmissibleSpec { family: Family, rank: usize },
    #[error("Weyl group of order {order} exceeds the enumeration cap {cap}")]
    GroupTooLarge { order: u128, cap: u128 },
    #[error("weight is not dominant integral: {0}")]
    NotDominant(String),
    #[error("vector does not lie in the span of the roots")]
    NotInRootSpan,
    #[error("weight has {got} coordinates, expected {expected}")]
    WrongLength { got: usize, expected: usize },
    #[error("highest root is neither fundamental nor of the form ω + ω*")]
    ClassificationFailure,
}

impl Diagnostic for RootSysError {
    fn module(&self) -> &'static str {
        "rootsys"
    }
    fn code(&self) -> &'static str {
        match self {
            RootSysError::InadmissibleSpec { .. } => "InadmissibleSpec",
            RootSysError::GroupTooLarge { .. } => "GroupTooLarge",
            RootSysError::NotDominant(_) => "NotDominant",
            RootSysError::NotInRootSpan => "NotInRootSpan",
            RootSysError::WrongLength { .. } => "WrongLength",
            RootSysError::ClassificationFailure => "ClassificationFailure",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Family {
    pub const ALL: [Family; 7] = [Family::A, Family::B, Family::C, Family::D, Family::E, Family::F, Family::G];
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for Family {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A" => Ok(Family::A),
            "B" => Ok(Family::B),
            "C" => Ok(Family::C),
            "D" => Ok(Family::D),
            "E" => Ok(Family::E),
            "F" => Ok(Family::F),
            "G" => Ok(Family::G),
            other => Err(format!("unknown family {other:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RootSystemSpec {
    pub family: Family,
    pub rank: usize,
}

impl RootSystemSpec {
    pub fn new(family: Family, rank: usize) -> Self {
        RootSystemSpec { family, rank }
    }

    /// `D_3` is rejected: it is `A_3` and would be double counted.
    pub fn is_admissible(&self) -> bool {
        match self.family {
            Family::A => self.rank >= 1,
            Family::B | Family::C => self.rank >= 2,
            Family::D => self.rank >= 4,
            Family::E => (6..=8).contains(&self.rank),
            Family::F => self.rank == 4,
            Family::G => self.rank == 2,
        }
    }

    /// All admissible types with `rank <= max_rank`, in family order.
    pub fn all_up_to(max_rank: usize) -> Vec<RootSystemSpec> {
        let mut out = Vec::new();
        for fam in Family::ALL {
            for r in 1..=max_rank {
                let s = RootSystemSpec::new(fam, r);
                if s.is_admissible() {
                    out.push(s);
                }
            }
        }
        out
    }
}

impl fmt::Display for RootSystemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family, self.rank)
    }
}

/// A weight in both coordinate systems.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Weight {
    pub coords: Vec<Rational>,
    pub fw_coords: Vec<Rational>,
}

impl Weight {
    pub fn is_zero(&self) -> bool {
        self.fw_coords.iter().all(|x| x.is_zero())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeylElement {
    pub matrix: Matrix<Rational>,
    /// `w = s_{word[0]} s_{word[1]} ⋯`.
    pub word: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HighestRootClass {
    /// `α̃ = ω_index`.
    Fundamental { index: usize },
    /// `α̃ = ω_omega + ω_omega_star` with `ω* = −w₀ω`; `omega <= omega_star`.
    SumDual { omega: usize, omega_star: usize },
}

impl HighestRootClass {
    pub fn has_distinct_dual(&self) -> bool {
        matches!(self, HighestRootClass::SumDual { omega, omega_star } if omega != omega_star)
    }
}

#[derive(Debug, Clone)]
pub struct RootSystem {
    pub spec: RootSystemSpec,
    pub ambient_dim: usize,
    /// Inner product is `scale` times the Euclidean dot product, chosen so
    /// long roots have squared length 2.
    pub scale: Rational,
    pub simple_roots: Vec<Vec<Rational>>,
    /// Positive roots first (by height, then coordinates), then their
    /// negatives in the same order.
    pub all_roots: Vec<Vec<Rational>>,
    /// Coordinates of each root in the simple-root basis.
    pub root_simple_coords: Vec<Vec<i64>>,
    /// Coordinates of each root in the fundamental-weight basis.
    pub root_fw_coords: Vec<Vec<i64>>,
    pub fundamental_weights: Vec<Vec<Rational>>,
    pub cartan_matrix: Vec<Vec<i64>>,
    pub highest_root: Vec<Rational>,
    pub highest_root_index: usize,
    pub rho: Vec<Rational>,
    index_of: HashMap<Vec<i64>, usize>,
    /// `reflection_perm[i][r]` = index of `s_i(root r)`.
    reflection_perm: Vec<Vec<usize>>,
}

fn e(dim: usize, i: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); dim];
    v[i] = int(1);
    v
}

fn vsub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn vadd(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn vscale(a: &[Rational], s: &Rational) -> Vec<Rational> {
    a.iter().map(|x| x * s).collect()
}

fn from_ints(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| int(x)).collect()
}

fn half(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| rat(x, 2)).collect()
}

/// Bourbaki simple roots in the standard realisation, with the scale factor.
fn simple_roots_for(spec: RootSystemSpec) -> (usize, Rational, Vec<Vec<Rational>>) {
    let n = spec.rank;
    let chain = |dim: usize, k: usize| -> Vec<Vec<Rational>> {
        (0..k).map(|i| vsub(&e(dim, i), &e(dim, i + 1))).collect()
    };
    match spec.family {
        Family::A => (n + 1, int(1), chain(n + 1, n)),
        Family::B => {
            let mut s = chain(n, n - 1);
            s.push(e(n, n - 1));
            (n, int(1), s)
        }
        Family::C => {
            let mut s = chain(n, n - 1);
            s.push(vscale(&e(n, n - 1), &int(2)));
            (n, rat(1, 2), s)
        }
        Family::D => {
            let mut s = chain(n, n - 1);
            s.push(vadd(&e(n, n - 2), &e(n, n - 1)));
            (n, int(1), s)
        }
        Family::E => {
            let all = vec![
                half(&[1, -1, -1, -1, -1, -1, -1, 1]),
                from_ints(&[1, 1, 0, 0, 0, 0, 0, 0]),
                from_ints(&[-1, 1, 0, 0, 0, 0, 0, 0]),
                from_ints(&[0, -1, 1, 0, 0, 0, 0, 0]),
                from_ints(&[0, 0, -1, 1, 0, 0, 0, 0]),
                from_ints(&[0, 0, 0, -1, 1, 0, 0, 0]),
                from_ints(&[0, 0, 0, 0, -1, 1, 0, 0]),
                from_ints(&[0, 0, 0, 0, 0, -1, 1, 0]),
            ];
            (8, int(1), all.into_iter().take(n).collect())
        }
        Family::F => (
            4,
            int(1),
            vec![
                from_ints(&[0, 1, -1, 0]),
                from_ints(&[0, 0, 1, -1]),
                from_ints(&[0, 0, 0, 1]),
                half(&[1, -1, -1, -1]),
            ],
        ),
        Family::G => (3, rat(1, 3), vec![from_ints(&[1, -1, 0]), from_ints(&[-2, 1, 1])]),
    }
}

impl RootSystem {
    pub fn build(spec: RootSystemSpec) -> Result<RootSystem, RootSysError> {
        if !spec.is_admissible() {
            return Err(RootSysError::InadmissibleSpec { family: spec.family, rank: spec.rank });
        }
        let r = spec.rank;
        let (ambient_dim, scale, simple) = simple_roots_for(spec);
        let dot = |a: &[Rational], b: &[Rational]| -> Rational {
            a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y) * &scale
        };
        let gram: Vec<Vec<Rational>> =
            (0..r).map(|i| (0..r).map(|j| dot(&simple[i], &simple[j])).collect()).collect();
        let cartan: Vec<Vec<i64>> = (0..r)
            .map(|i| {
                (0..r)
                    .map(|j| {
                        let q = int(2) * &gram[i][j] / &gram[j][j];
                        assert!(q.is_integer(), "non-integral Cartan entry");
                        q.to_integer().to_i64().unwrap()
                    })
                    .collect()
            })
            .collect();

        // Reflection closure of the simple roots in simple-root coordinates.
        let reflect = |c: &[i64], i: usize| -> Vec<i64> {
            let pairing: i64 = (0..r).map(|k| c[k] * cartan[k][i]).sum();
            let mut out = c.to_vec();
            out[i] -= pairing;
            out
        };
        let mut seen: HashSet<Vec<i64>> = HashSet::new();
        let mut queue: VecDeque<Vec<i64>> = VecDeque::new();
        for i in 0..r {
            let mut c = vec![0; r];
            c[i] = 1;
            if seen.insert(c.clone()) {
                queue.push_back(c);
            }
        }
        while let Some(c) = queue.pop_front() {
            for i in 0..r {
                let d = reflect(&c, i);
                if seen.insert(d.clone()) {
                    queue.push_back(d);
                }
            }
        }
        let mut positive: Vec<Vec<i64>> = seen.into_iter().filter(|c| c.iter().all(|&x| x >= 0)).collect();
        positive.sort_by(|a, b| {
            let ha: i64 = a.iter().sum();
            let hb: i64 = b.iter().sum();
            ha.cmp(&hb).then_with(|| b.cmp(a))
        });
        let np = positive.len();
        let mut root_simple_coords = positive.clone();
        root_simple_coords.extend(positive.iter().map(|c| c.iter().map(|x| -x).collect::<Vec<_>>()));

        let to_ambient = |c: &[i64]| -> Vec<Rational> {
            let mut v = vec![Rational::zero(); ambient_dim];
            for (k, &ck) in c.iter().enumerate() {
                if ck != 0 {
                    v = vadd(&v, &vscale(&simple[k], &int(ck)));
                }
            }
            v
        };
        let all_roots: Vec<Vec<Rational>> = root_simple_coords.iter().map(|c| to_ambient(c)).collect();
        let root_fw_coords: Vec<Vec<i64>> = root_simple_coords
            .iter()
            .map(|c| (0..r).map(|j| (0..r).map(|k| c[k] * cartan[k][j]).sum()).collect())
            .collect();
        let index_of: HashMap<Vec<i64>, usize> =
            root_simple_coords.iter().enumerate().map(|(i, c)| (c.clone(), i)).collect();
        let reflection_perm: Vec<Vec<usize>> = (0..r)
            .map(|i| root_simple_coords.iter().map(|c| index_of[&reflect(c, i)]).collect())
            .collect();

        // ω_i = Σ_k (A^{-1})_{ik} α_k.
        let a = Matrix::from_rows(cartan.iter().map(|row| from_ints(row)).collect());
        let ainv = a.inverse().expect("Cartan matrix is invertible");
        let fundamental_weights: Vec<Vec<Rational>> = (0..r)
            .map(|i| {
                let mut v = vec![Rational::zero(); ambient_dim];
                for k in 0..r {
                    v = vadd(&v, &vscale(&simple[k], &ainv[(i, k)]));
                }
                v
            })
            .collect();
        let rho = fundamental_weights
            .iter()
            .fold(vec![Rational::zero(); ambient_dim], |acc, w| vadd(&acc, w));
        let highest_root_index = np - 1;
        let highest_root = all_roots[highest_root_index].clone();

        Ok(RootSystem {
            spec,
            ambient_dim,
            scale,
            simple_roots: simple,
            all_roots,
            root_simple_coords,
            root_fw_coords,
            fundamental_weights,
            cartan_matrix: cartan,
            highest_root,
            highest_root_index,
            rho,
            index_of,
            reflection_perm,
        })
    }

    pub fn rank(&self) -> usize {
        self.spec.rank
    }

    pub fn num_roots(&self) -> usize {
        self.all_roots.len()
    }

    pub fn num_positive(&self) -> usize {
        self.all_roots.len() / 2
    }

    pub fn is_positive(&self, idx: usize) -> bool {
        idx < self.num_positive()
    }

    /// Index of `−α` for the root with index `idx`.
    pub fn negative_index(&self, idx: usize) -> usize {
        let np = self.num_positive();
        if idx < np {
            idx + np
        } else {
            idx - np
        }
    }

    pub fn height(&self, idx: usize) -> i64 {
        self.root_simple_coords[idx].iter().sum()
    }

    /// Index of the root with the given simple-root coordinates.
    pub fn root_index(&self, simple_coords: &[i64]) -> Option<usize> {
        self.index_of.get(simple_coords).copied()
    }

    pub fn simple_root_index(&self, i: usize) -> usize {
        let mut c = vec![0; self.rank()];
        c[i] = 1;
        self.index_of[&c]
    }

    /// The invariant inner product.
    pub fn inner(&self, a: &[Rational], b: &[Rational]) -> Rational {
        a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y) * &self.scale
    }

    pub fn norm(&self, a: &[Rational]) -> f64 {
        rational_to_f64(&self.inner(a, a)).sqrt()
    }

    /// Squared length of root `idx`.
    pub fn root_norm2(&self, idx: usize) -> Rational {
        self.inner(&self.all_roots[idx], &self.all_roots[idx])
    }

    /// `<v, α_i^∨>` for every simple root.
    pub fn coroot_pairings(&self, v: &[Rational]) -> Vec<Rational> {
        self.simple_roots
            .iter()
            .map(|a| int(2) * self.inner(v, a) / self.inner(a, a))
            .collect()
    }

    pub fn weight_from_fw(&self, fw: &[Rational]) -> Result<Weight, RootSysError> {
        if fw.len() != self.rank() {
            return Err(RootSysError::WrongLength { got: fw.len(), expected: self.rank() });
        }
        let mut coords = vec![Rational::zero(); self.ambient_dim];
        for (w, c) in self.fundamental_weights.iter().zip(fw) {
            if !c.is_zero() {
                coords = vadd(&coords, &vscale(w, c));
            }
        }
        Ok(Weight { coords, fw_coords: fw.to_vec() })
    }

    pub fn weight_from_fw_ints(&self, fw: &[i64]) -> Result<Weight, RootSysError> {
        self.weight_from_fw(&from_ints(fw))
    }

    /// Converts an ambient vector; it must lie in the span of the roots.
    pub fn weight_from_coords(&self, v: &[Rational]) -> Result<Weight, RootSysError> {
        if v.len() != self.ambient_dim {
            return Err(RootSysError::WrongLength { got: v.len(), expected: self.ambient_dim });
        }
        let fw = self.coroot_pairings(v);
        let w = self.weight_from_fw(&fw)?;
        if w.coords != v {
            return Err(RootSysError::NotInRootSpan);
        }
        Ok(w)
    }

    pub fn fundamental_weight(&self, i: usize) -> Weight {
        let mut fw = vec![Rational::zero(); self.rank()];
        fw[i] = int(1);
        self.weight_from_fw(&fw).expect("index in range")
    }

    pub fn rho_weight(&self) -> Weight {
        self.weight_from_fw(&vec![int(1); self.rank()]).expect("rank-length")
    }

    pub fn highest_root_weight(&self) -> Weight {
        self.weight_from_fw_ints(&self.root_fw_coords[self.highest_root_index]).expect("rank-length")
    }

    /// `s_i` on fundamental-weight coordinates.
    pub fn reflect_fw(&self, lambda: &[Rational], i: usize) -> Vec<Rational> {
        let li = lambda[i].clone();
        (0..self.rank()).map(|j| &lambda[j] - &li * int(self.cartan_matrix[i][j])).collect()
    }

    fn reflect_fw_int(&self, lambda: &[i64], i: usize) -> Vec<i64> {
        let li = lambda[i];
        (0..self.rank()).map(|j| lambda[j] - li * self.cartan_matrix[i][j]).collect()
    }

    /// The dominant element of the Weyl orbit of `λ` (fw coordinates).
    pub fn dominant_representative(&self, lambda: &[Rational]) -> Vec<Rational> {
        let mut v = lambda.to_vec();
        while let Some(i) = v.iter().position(|x| x.is_negative()) {
            v = self.reflect_fw(&v, i);
        }
        v
    }

    /// Index `j` with `ω_j = −w₀ ω_i`.
    pub fn dual_index(&self, i: usize) -> usize {
        let mut neg = vec![Rational::zero(); self.rank()];
        neg[i] = int(-1);
        let d = self.dominant_representative(&neg);
        d.iter().position(|x| x.is_one()).expect("dual of a fundamental weight is fundamental")
    }

    /// Order of the Weyl group from the exponents, which are read off from
    /// the dual of the partition of positive roots by height.
    pub fn weyl_order(&self) -> u128 {
        let max_h = (0..self.num_positive()).map(|i| self.height(i)).max().unwrap_or(0) as usize;
        let mut by_height = vec![0usize; max_h + 1];
        for i in 0..self.num_positive() {
            by_height[self.height(i) as usize] += 1;
        }
        let mut order: u128 = 1;
        for j in 1..=self.rank() {
            let exponent = (1..=max_h).filter(|&k| by_height[k] >= j).count() as u128;
            order *= exponent + 1;
        }
        order
    }

    pub fn reflection_matrix(&self, i: usize) -> Matrix<Rational> {
        let a = &self.simple_roots[i];
        let f = int(2) * &self.scale / self.inner(a, a);
        let n = self.ambient_dim;
        let mut m = Matrix::identity(n);
        for p in 0..n {
            for q in 0..n {
                if !a[p].is_zero() && !a[q].is_zero() {
                    m[(p, q)] = &m[(p, q)] - &f * &a[p] * &a[q];
                }
            }
        }
        m
    }

    pub fn word_matrix(&self, word: &[usize]) -> Matrix<Rational> {
        let mut m = Matrix::identity(self.ambient_dim);
        for &i in word {
            m = &m * &self.reflection_matrix(i);
        }
        m
    }

    /// Permutation of root indices induced by `s_{word[0]} ⋯ s_{word[k]}`.
    pub fn word_root_permutation(&self, word: &[usize]) -> Vec<usize> {
        (0..self.num_roots())
            .map(|mut r| {
                for &i in word.iter().rev() {
                    r = self.reflection_perm[i][r];
                }
                r
            })
            .collect()
    }

    /// Words of every Weyl element fixing `v` (fw coordinates), in BFS
    /// order from the identity. Words are shortest.
    pub fn stabilizer_words(&self, v: &[Rational], cap: u128) -> Result<Vec<Vec<usize>>, RootSysError> {
        let order = self.weyl_order();
        if order > cap {
            return Err(RootSysError::GroupTooLarge { order, cap });
        }
        let r = self.rank();
        let rho = vec![1i64; r];
        let mut seen: HashSet<Vec<i64>> = HashSet::with_capacity(order as usize);
        let mut queue: VecDeque<(Vec<i64>, Vec<Rational>, Vec<usize>)> = VecDeque::new();
        seen.insert(rho.clone());
        queue.push_back((rho, v.to_vec(), Vec::new()));
        let mut out = Vec::new();
        while let Some((wr, wv, word)) = queue.pop_front() {
            if wv == v {
                out.push(word.clone());
            }
            for i in 0..r {
                let nr = self.reflect_fw_int(&wr, i);
                if seen.insert(nr.clone()) {
                    let nv = self.reflect_fw(&wv, i);
                    let mut nw = Vec::with_capacity(word.len() + 1);
                    nw.push(i);
                    nw.extend_from_slice(&word);
                    queue.push_back((nr, nv, nw));
                }
            }
        }
        debug_assert_eq!(seen.len() as u128, order);
        Ok(out)
    }

    /// JSON export with rationals as `[num, den]` string pairs.
    pub fn to_json(&self) -> Value {
        let q = |x: &Rational| json!([x.numer().to_string(), x.denom().to_string()]);
        let vecs = |vs: &[Vec<Rational>]| -> Value {
            Value::Array(vs.iter().map(|v| Value::Array(v.iter().map(q).collect())).collect())
        };
        json!({
            "family": self.spec.family.to_string(),
            "rank": self.spec.rank,
            "ambient_dim": self.ambient_dim,
            "scale": q(&self.scale),
            "simple_roots": vecs(&self.simple_roots),
            "roots": vecs(&self.all_roots),
            "weights": vecs(&self.fundamental_weights),
            "cartan_matrix": self.cartan_matrix,
            "highest_root": self.root_fw_coords[self.highest_root_index],
        })
    }

    /// A `c > 0` with `dim V_λ ≥ c‖λ‖` for every dominant `λ`.
    ///
    /// Every factor of the product formula is at least 1, and the `α̃`
    /// factor is `1 + (λ, α̃)/(ρ, α̃)`; bounding `(λ, α̃)` below through the
    /// fundamental weights gives `c = min_i (ω_i, α̃) / (‖ω_i‖ (ρ, α̃))`.
    pub fn dimension_norm_constant(&self) -> f64 {
        let rho_a = rational_to_f64(&self.inner(&self.rho, &self.highest_root));
        self.fundamental_weights
            .iter()
            .map(|w| rational_to_f64(&self.inner(w, &self.highest_root)) / (self.norm(w) * rho_a))
            .fold(f64::INFINITY, f64::min)
    }
}

pub fn build_root_system(spec: RootSystemSpec) -> Result<RootSystem, RootSysError> {
    RootSystem::build(spec)
}

/// Decides which of the two shapes the highest root takes.
pub fn classify_highest_root(rs: &RootSystem) -> Result<HighestRootClass, RootSysError> {
    let hr = &rs.root_fw_coords[rs.highest_root_index];
    let r = rs.rank();
    let unit = |i: usize| -> Vec<i64> {
        let mut v = vec![0; r];
        v[i] = 1;
        v
    };
    if let Some(i) = (0..r).find(|&i| *hr == unit(i)) {
        return Ok(HighestRootClass::Fundamental { index: i });
    }
    for i in 0..r {
        let j = rs.dual_index(i);
        let mut sum = unit(i);
        sum[j] += 1;
        if *hr == sum {
            return Ok(HighestRootClass::SumDual { omega: i.min(j), omega_star: i.max(j) });
        }
    }
    Err(RootSysError::ClassificationFailure)
}

pub fn weyl_stabilizer(rs: &RootSystem, v: &Weight) -> Result<Vec<WeylElement>, RootSysError> {
    weyl_stabilizer_capped(rs, v, DEFAULT_WEYL_CAP)
}

pub fn weyl_stabilizer_capped(rs: &RootSystem, v: &Weight, cap: u128) -> Result<Vec<WeylElement>, RootSysError> {
    Ok(rs
        .stabilizer_words(&v.fw_coords, cap)?
        .into_iter()
        .map(|word| WeylElement { matrix: rs.word_matrix(&word), word })
        .collect())
}

/// `dim V_λ = ∏_{α>0} (λ+ρ, α)/(ρ, α)`.
pub fn weyl_dimension(rs: &RootSystem, lambda: &Weight) -> Result<BigUint, RootSysError> {
    if lambda.fw_coords.len() != rs.rank() {
        return Err(RootSysError::WrongLength { got: lambda.fw_coords.len(), expected: rs.rank() });
    }
    if let Some(x) = lambda.fw_coords.iter().find(|x| !x.is_integer() || x.is_negative()) {
        return Err(RootSysError::NotDominant(format!("coordinate {x}")));
    }
    // (μ, α) = Σ_k c_k μ_k (α_k, α_k)/2 in fw coordinates.
    let half_len: Vec<Rational> =
        rs.simple_roots.iter().map(|a| rs.inner(a, a) / int(2)).collect();
    let mut num = Rational::one();
    let mut den = Rational::one();
    for c in &rs.root_simple_coords[..rs.num_positive()] {
        let mut a = Rational::zero();
        let mut b = Rational::zero();
        for k in 0..rs.rank() {
            if c[k] != 0 {
                let w = int(c[k]) * &half_len[k];
                a += (&lambda.fw_coords[k] + int(1)) * &w;
                b += w;
            }
        }
        num *= a;
        den *= b;
    }
    let q = num / den;
    assert!(q.is_integer(), "Weyl dimension formula gave a non-integer");
    let n: BigInt = q.to_integer();
    Ok(n.to_biguint().expect("positive dimension"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rs(f: Family, r: usize) -> RootSystem {
        RootSystem::build(RootSystemSpec::new(f, r)).unwrap()
    }

    #[test]
    fn root_counts() {
        let expected = [
            (Family::A, 1, 2),
            (Family::A, 4, 20),
            (Family::B, 3, 18),
            (Family::C, 3, 18),
            (Family::D, 4, 24),
            (Family::D, 5, 40),
            (Family::E, 6, 72),
            (Family::E, 7, 126),
            (Family::E, 8, 240),
            (Family::F, 4, 48),
            (Family::G, 2, 12),
        ];
        for (f, r, n) in expected {
            assert_eq!(rs(f, r).num_roots(), n, "{f}{r}");
        }
    }

    #[test]
    fn weyl_orders() {
        let expected: [(Family, usize, u128); 7] = [
            (Family::A, 3, 24),
            (Family::B, 3, 48),
            (Family::D, 4, 192),
            (Family::E, 6, 51840),
            (Family::E, 8, 696_729_600),
            (Family::F, 4, 1152),
            (Family::G, 2, 12),
        ];
        for (f, r, n) in expected {
            assert_eq!(rs(f, r).weyl_order(), n, "{f}{r}");
        }
    }

    #[test]
    fn fundamental_weights_are_dual_to_coroots() {
        for spec in RootSystemSpec::all_up_to(8) {
            let s = RootSystem::build(spec).unwrap();
            for (i, w) in s.fundamental_weights.iter().enumerate() {
                let p = s.coroot_pairings(w);
                for (j, x) in p.iter().enumerate() {
                    assert_eq!(*x, if i == j { int(1) } else { int(0) }, "{spec}");
                }
            }
        }
    }

    #[test]
    fn long_roots_have_length_two() {
        for spec in RootSystemSpec::all_up_to(8) {
            let s = RootSystem::build(spec).unwrap();
            let max = (0..s.num_roots()).map(|i| s.root_norm2(i)).max().unwrap();
            assert_eq!(max, int(2), "{spec}");
            assert_eq!(s.root_norm2(s.highest_root_index), int(2));
        }
    }

    #[test]
    fn rejects_bad_ranks() {
        for (f, r) in [(Family::D, 3), (Family::E, 5), (Family::E, 9), (Family::F, 3), (Family::G, 3), (Family::A, 0)] {
            assert!(matches!(
                RootSystem::build(RootSystemSpec::new(f, r)),
                Err(RootSysError::InadmissibleSpec { .. })
            ));
        }
    }

    #[test]
    fn dimensions() {
        let a2 = rs(Family::A, 2);
        assert_eq!(weyl_dimension(&a2, &a2.fundamental_weight(0)).unwrap(), BigUint::from(3u32));
        let g2 = rs(Family::G, 2);
        assert_eq!(weyl_dimension(&g2, &g2.highest_root_weight()).unwrap(), BigUint::from(14u32));
        let e8 = rs(Family::E, 8);
        assert_eq!(weyl_dimension(&e8, &e8.highest_root_weight()).unwrap(), BigUint::from(248u32));
        let bad = a2.weight_from_fw(&[int(-1), int(0)]).unwrap();
        assert!(matches!(weyl_dimension(&a2, &bad), Err(RootSysError::NotDominant(_))));
    }

    #[test]
    fn classification() {
        assert_eq!(
            classify_highest_root(&rs(Family::A, 3)).unwrap(),
            HighestRootClass::SumDual { omega: 0, omega_star: 2 }
        );
        assert_eq!(
            classify_highest_root(&rs(Family::A, 1)).unwrap(),
            HighestRootClass::SumDual { omega: 0, omega_star: 0 }
        );
        assert!(matches!(
            classify_highest_root(&rs(Family::G, 2)).unwrap(),
            HighestRootClass::Fundamental { .. }
        ));
        // C_n: α̃ = 2ω_1 with ω_1 self-dual.
        assert_eq!(
            classify_highest_root(&rs(Family::C, 3)).unwrap(),
            HighestRootClass::SumDual { omega: 0, omega_star: 0 }
        );
    }

    #[test]
    fn stabilizer_of_zero_is_everything() {
        let b2 = rs(Family::B, 2);
        let zero = b2.weight_from_fw_ints(&[0, 0]).unwrap();
        assert_eq!(weyl_stabilizer(&b2, &zero).unwrap().len(), 8);
    }

    #[test]
    fn group_cap() {
        let e8 = rs(Family::E, 8);
        let w = e8.highest_root_weight();
        assert!(matches!(weyl_stabilizer(&e8, &w), Err(RootSysError::GroupTooLarge { .. })));
    }

    #[test]
    fn json_export_has_roots() {
        let v = rs(Family::G, 2).to_json();
        assert_eq!(v["roots"].as_array().unwrap().len(), 12);
        assert_eq!(v["family"], "G");
    }
}
