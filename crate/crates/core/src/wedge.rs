//! Chevalley bases, wedge powers of the adjoint representation, the
//! subrepresentation generated by a face monomial, and invariant
//! subspaces from commutants.

use std::collections::{BTreeMap, HashMap};

use num::bigint::BigInt;
use num::integer::Integer;
use num::traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::exact::{int, AlgebraicScalar, Rational, Scalar};
use crate::faces::FaceData;
use crate::linalg::{Matrix, SubspaceModel};
use crate::rootsys::{weyl_dimension, RootSysError, RootSystem, Weight};
use crate::Diagnostic;

pub const DEFAULT_RANK_CAP: usize = 4;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WedgeError {
    #[error("rank {rank} exceeds the cap {cap}")]
    RankTooLarge { rank: usize, cap: usize },
    #[error("vector is zero")]
    ZeroVector,
    #[error("vector is not a weight vector for the torus")]
    NotWeightVector,
    #[error("raising operator of simple root {simple} does not annihilate the vector")]
    NotHighestWeight { simple: usize },
    #[error("generated dimension {generated} disagrees with the Weyl dimension {expected}")]
    DimensionMismatch { generated: usize, expected: String },
    #[error("matrices have inconsistent sizes")]
    InconsistentSizes,
    #[error("eigenvalues need an extension of degree {degree}, beyond what is supported")]
    ExtensionTooLarge { degree: usize },
    #[error(transparent)]
    RootSys(#[from] RootSysError),
}

impl Diagnostic for WedgeError {
    fn module(&self) -> &'static str {
        match self {
            WedgeError::RootSys(e) => e.module(),
            _ => "wedge",
        }
    }
    fn code(&self) -> &'static str {
        match self {
            WedgeError::RankTooLarge { .. } => "RankTooLarge",
            WedgeError::ZeroVector => "ZeroVector",
            WedgeError::NotWeightVector => "NotWeightVector",
            WedgeError::NotHighestWeight { .. } => "NotHighestWeight",
            WedgeError::DimensionMismatch { .. } => "DimensionMismatch",
            WedgeError::InconsistentSizes => "InconsistentSizes",
            WedgeError::ExtensionTooLarge { .. } => "ExtensionTooLarge",
            WedgeError::RootSys(e) => e.code(),
        }
    }
}

/// Sparse combination of basis elements with integer coefficients.
pub type SparseInt = Vec<(usize, i64)>;

/// Chevalley basis `h_1..h_r, E_α` (roots in [`RootSystem`] order), with
/// `h_i = α_i^∨`.
#[derive(Debug, Clone)]
pub struct ChevalleyAlgebra {
    pub rs: RootSystem,
    /// `N_{α,β}` keyed by root indices, present only when `α+β` is a root.
    pub structure_constants: HashMap<(usize, usize), i64>,
    brackets: Vec<Vec<SparseInt>>,
}

impl ChevalleyAlgebra {
    pub fn rank(&self) -> usize {
        self.rs.rank()
    }

    pub fn dim(&self) -> usize {
        self.rs.rank() + self.rs.num_roots()
    }

    /// Basis index of `E_α` for root index `a`.
    pub fn root_basis(&self, a: usize) -> usize {
        self.rank() + a
    }

    pub fn h_basis(&self, i: usize) -> usize {
        i
    }

    pub fn label(&self, b: usize) -> String {
        let r = self.rank();
        if b < r {
            format!("h{}", b + 1)
        } else {
            let c = &self.rs.root_simple_coords[b - r];
            format!("E{:?}", c)
        }
    }

    /// Torus weight of a basis element in fundamental-weight coordinates.
    pub fn basis_weight(&self, b: usize) -> Vec<i64> {
        let r = self.rank();
        if b < r {
            vec![0; r]
        } else {
            self.rs.root_fw_coords[b - r].clone()
        }
    }

    pub fn n(&self, a: usize, b: usize) -> i64 {
        self.structure_constants.get(&(a, b)).copied().unwrap_or(0)
    }

    pub fn bracket(&self, x: usize, y: usize) -> &SparseInt {
        &self.brackets[x][y]
    }

    /// Bracket of arbitrary rational combinations.
    pub fn bracket_vec(&self, x: &[Rational], y: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.dim()];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                for &(k, c) in &self.brackets[i][j] {
                    out[k] += xi * yj * int(c);
                }
            }
        }
        out
    }

    /// Matrix of `ad x_b` in the Chevalley basis.
    pub fn ad_matrix(&self, b: usize) -> Matrix<Rational> {
        let n = self.dim();
        let mut m = Matrix::zeros(n, n);
        for j in 0..n {
            for &(k, c) in &self.brackets[b][j] {
                m[(k, j)] = int(c);
            }
        }
        m
    }

    /// Exhaustive Jacobi check over basis triples; the first failing
    /// triple, if any.
    pub fn jacobi_violation(&self) -> Option<(usize, usize, usize)> {
        let n = self.dim();
        let unit = |i: usize| {
            let mut v = vec![Rational::zero(); n];
            v[i] = int(1);
            v
        };
        for x in 0..n {
            for y in x + 1..n {
                let xy = self.bracket_vec(&unit(x), &unit(y));
                for z in y + 1..n {
                    let a = self.bracket_vec(&unit(x), &self.bracket_vec(&unit(y), &unit(z)));
                    let b = self.bracket_vec(&unit(y), &self.bracket_vec(&unit(z), &unit(x)));
                    let c = self.bracket_vec(&unit(z), &xy);
                    if a.iter().zip(&b).zip(&c).any(|((p, q), r)| !(p + q + r).is_zero()) {
                        return Some((x, y, z));
                    }
                }
            }
        }
        None
    }
}

struct ConstantSolver<'a> {
    rs: &'a RootSystem,
    memo: HashMap<(usize, usize), i64>,
}

impl ConstantSolver<'_> {
    fn sum(&self, a: usize, b: usize) -> Option<usize> {
        let c: Vec<i64> = self.rs.root_simple_coords[a]
            .iter()
            .zip(&self.rs.root_simple_coords[b])
            .map(|(x, y)| x + y)
            .collect();
        self.rs.root_index(&c)
    }

    fn diff(&self, a: usize, b: usize) -> Option<usize> {
        self.sum(a, self.rs.negative_index(b))
    }

    fn len2(&self, a: usize) -> Rational {
        self.rs.root_norm2(a)
    }

    /// Extraspecial pair of the positive non-simple root `xi`.
    fn extraspecial(&self, xi: usize) -> (usize, usize) {
        (0..xi)
            .find_map(|a| match self.diff(xi, a) {
                Some(b) if self.rs.is_positive(b) && a < b => Some((a, b)),
                _ => None,
            })
            .expect("non-simple positive root has a special pair")
    }

    /// `N_{a,b}`; zero when `a + b` is not a root.
    fn n(&mut self, a: usize, b: usize) -> i64 {
        let Some(c) = self.sum(a, b) else {
            return 0;
        };
        if let Some(&v) = self.memo.get(&(a, b)) {
            return v;
        }
        let pa = self.rs.is_positive(a);
        let pb = self.rs.is_positive(b);
        let v = if pa && pb {
            if a > b {
                -self.n(b, a)
            } else {
                self.special(a, b, c)
            }
        } else if !pa && !pb {
            -self.n(self.rs.negative_index(a), self.rs.negative_index(b))
        } else {
            // a + b + g = 0 with g = −(a+b):
            // N_{a,b}/(g,g) = N_{b,g}/(a,a) = N_{g,a}/(b,b).
            let g = self.rs.negative_index(c);
            let pg = self.rs.is_positive(g);
            let q = if pg == pb {
                int(self.n(b, g)) * self.len2(g) / self.len2(a)
            } else {
                debug_assert_eq!(pg, pa);
                int(self.n(g, a)) * self.len2(g) / self.len2(b)
            };
            assert!(q.is_integer(), "non-integral structure constant");
            q.to_integer().to_i64().unwrap()
        };
        self.memo.insert((a, b), v);
        v
    }

    /// `a < b` positive with `a + b = xi`.
    fn special(&mut self, a: usize, b: usize, xi: usize) -> i64 {
        let (ea, eb) = self.extraspecial(xi);
        if (a, b) == (ea, eb) {
            // p + 1 with p maximal such that b − p·a is a root.
            let mut p = 0;
            let mut cur = b;
            while let Some(next) = self.diff(cur, a) {
                p += 1;
                cur = next;
            }
            return p + 1;
        }
        let neg_ea = self.rs.negative_index(ea);
        let neg_eb = self.rs.negative_index(eb);
        let mut acc = Rational::zero();
        if let Some(d) = self.diff(b, ea) {
            let t = int(self.n(b, neg_ea) * self.n(a, neg_eb));
            acc += t / self.len2(d);
        }
        if let Some(d) = self.diff(a, ea) {
            let t = int(self.n(neg_ea, a) * self.n(b, neg_eb));
            acc += t / self.len2(d);
        }
        let q = self.len2(xi) / int(self.n(ea, eb)) * acc;
        assert!(q.is_integer() && !q.is_zero(), "inconsistent structure constant");
        q.to_integer().to_i64().unwrap()
    }
}

pub fn chevalley_basis(rs: &RootSystem) -> Result<ChevalleyAlgebra, WedgeError> {
    chevalley_basis_capped(rs, DEFAULT_RANK_CAP)
}

pub fn chevalley_basis_capped(rs: &RootSystem, cap: usize) -> Result<ChevalleyAlgebra, WedgeError> {
    if rs.rank() > cap {
        return Err(WedgeError::RankTooLarge { rank: rs.rank(), cap });
    }
    let nroots = rs.num_roots();
    let mut solver = ConstantSolver { rs, memo: HashMap::new() };
    let mut structure_constants = HashMap::new();
    for a in 0..nroots {
        for b in 0..nroots {
            let v = solver.n(a, b);
            if v != 0 {
                structure_constants.insert((a, b), v);
            }
        }
    }
    let r = rs.rank();
    let dim = r + nroots;
    let mut brackets = vec![vec![Vec::new(); dim]; dim];
    // Coroot of α in the h_i basis: α^∨ = Σ_k c_k (α_k,α_k)/(α,α) α_k^∨.
    let coroot = |a: usize| -> SparseInt {
        let l = rs.root_norm2(a);
        rs.root_simple_coords[a]
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(k, &c)| {
                let idx = rs.simple_root_index(k);
                let q = int(c) * rs.root_norm2(idx) / &l;
                (k, q.to_integer().to_i64().unwrap())
            })
            .collect()
    };
    for a in 0..nroots {
        let ea = r + a;
        for i in 0..r {
            let w = rs.root_fw_coords[a][i];
            if w != 0 {
                brackets[i][ea] = vec![(ea, w)];
                brackets[ea][i] = vec![(ea, -w)];
            }
        }
        for b in 0..nroots {
            let eb = r + b;
            if b == rs.negative_index(a) {
                let h = coroot(a);
                brackets[ea][eb] = h;
            } else if let Some(&v) = structure_constants.get(&(a, b)) {
                let c = solver.sum(a, b).unwrap();
                brackets[ea][eb] = vec![(r + c, v)];
            }
        }
    }
    Ok(ChevalleyAlgebra { rs: rs.clone(), structure_constants, brackets })
}

/// Element of `⋀^degree 𝔤` keyed by strictly increasing basis indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WedgeVector {
    pub degree: usize,
    pub coords: BTreeMap<Vec<usize>, Rational>,
}

impl WedgeVector {
    pub fn zero(degree: usize) -> Self {
        WedgeVector { degree, coords: BTreeMap::new() }
    }

    /// `e_{i_1} ∧ ⋯ ∧ e_{i_k}` in the given order, sign-normalised.
    pub fn monomial(indices: &[usize]) -> Self {
        let mut v = Self::zero(indices.len());
        if let Some((key, sign)) = sort_with_sign(indices.to_vec()) {
            v.coords.insert(key, int(sign));
        }
        v
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn add_term(&mut self, key: Vec<usize>, c: Rational) {
        if c.is_zero() {
            return;
        }
        let e = self.coords.entry(key.clone()).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.coords.remove(&key);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, v) in &other.coords {
            out.add_term(k.clone(), v.clone());
        }
        out
    }

    pub fn scale(&self, s: &Rational) -> Self {
        if s.is_zero() {
            return Self::zero(self.degree);
        }
        WedgeVector { degree: self.degree, coords: self.coords.iter().map(|(k, v)| (k.clone(), v * s)).collect() }
    }
}

/// Sorts indices, returning the permutation sign; `None` on repeats.
fn sort_with_sign(mut v: Vec<usize>) -> Option<(Vec<usize>, i64)> {
    let mut sign = 1;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some((v, sign))
    }
}

/// Derivation action of the basis element `x` on a wedge vector.
pub fn act(alg: &ChevalleyAlgebra, x: usize, v: &WedgeVector) -> WedgeVector {
    let mut out = WedgeVector::zero(v.degree);
    for (key, c) in &v.coords {
        for pos in 0..key.len() {
            for &(k, s) in alg.bracket(x, key[pos]) {
                let mut idx = key.clone();
                idx[pos] = k;
                if let Some((sorted, sign)) = sort_with_sign(idx) {
                    out.add_term(sorted, c * int(s * sign));
                }
            }
        }
    }
    out
}

/// Action of a rational combination `Σ x_b e_b`.
pub fn act_vec(alg: &ChevalleyAlgebra, x: &[Rational], v: &WedgeVector) -> WedgeVector {
    let mut out = WedgeVector::zero(v.degree);
    for (b, c) in x.iter().enumerate() {
        if !c.is_zero() {
            out = out.add(&act(alg, b, v).scale(c));
        }
    }
    out
}

/// `⋀_{α ∈ 𝓔_X} E_α`, factors in ascending root order.
pub fn xi_vector(alg: &ChevalleyAlgebra, face: &FaceData) -> WedgeVector {
    let idx: Vec<usize> = face.extremal_roots.iter().map(|&a| alg.root_basis(a)).collect();
    WedgeVector::monomial(&idx)
}

/// Torus weight of a weight vector (fw coordinates).
pub fn weight_of(alg: &ChevalleyAlgebra, v: &WedgeVector) -> Result<Vec<i64>, WedgeError> {
    let mut weights = v.coords.keys().map(|k| {
        k.iter().fold(vec![0i64; alg.rank()], |acc, &b| {
            acc.iter().zip(alg.basis_weight(b)).map(|(x, y)| x + y).collect()
        })
    });
    let first = weights.next().ok_or(WedgeError::ZeroVector)?;
    if weights.any(|w| w != first) {
        return Err(WedgeError::NotWeightVector);
    }
    Ok(first)
}

/// Checks that every simple raising operator kills `xi`; returns its weight.
pub fn check_highest_weight(alg: &ChevalleyAlgebra, xi: &WedgeVector) -> Result<Weight, WedgeError> {
    let w = weight_of(alg, xi)?;
    for i in 0..alg.rank() {
        let e = alg.root_basis(alg.rs.simple_root_index(i));
        if !act(alg, e, xi).is_zero() {
            return Err(WedgeError::NotHighestWeight { simple: i });
        }
    }
    Ok(alg.rs.weight_from_fw_ints(&w)?)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubRepresentation {
    pub degree: usize,
    /// Weight spaces in generation order, each echelonised.
    pub basis: Vec<WedgeVector>,
    pub highest_weight: Weight,
    /// `(weight, dimension)` per weight space.
    pub weight_multiplicities: Vec<(Vec<i64>, usize)>,
}

impl SubRepresentation {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// Row-reduced basis of a span of wedge vectors, canonical for the
/// subspace (columns ordered by key).
pub fn echelonize(vectors: &[WedgeVector]) -> Vec<WedgeVector> {
    let Some(first) = vectors.first() else {
        return Vec::new();
    };
    let degree = first.degree;
    let mut keys: Vec<Vec<usize>> = vectors.iter().flat_map(|v| v.coords.keys().cloned()).collect();
    keys.sort();
    keys.dedup();
    let col: HashMap<&Vec<usize>, usize> = keys.iter().enumerate().map(|(i, k)| (k, i)).collect();
    let rows: Vec<Vec<Rational>> = vectors
        .iter()
        .map(|v| {
            let mut row = vec![Rational::zero(); keys.len()];
            for (k, c) in &v.coords {
                row[col[k]] = c.clone();
            }
            row
        })
        .collect();
    crate::linalg::span_basis(&rows)
        .into_iter()
        .map(|row| WedgeVector {
            degree,
            coords: row.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (keys[i].clone(), c)).collect(),
        })
        .collect()
}

/// Closure of `xi` under the simple lowering operators, weight space by
/// weight space.
pub fn generate_subrep(alg: &ChevalleyAlgebra, xi: &WedgeVector) -> Result<SubRepresentation, WedgeError> {
    let highest_weight = check_highest_weight(alg, xi)?;
    let r = alg.rank();
    let lowering: Vec<usize> = (0..r).map(|i| alg.root_basis(alg.rs.negative_index(alg.rs.simple_root_index(i)))).collect();
    let mut spaces: BTreeMap<Vec<i64>, Vec<WedgeVector>> = BTreeMap::new();
    let top = weight_of(alg, xi)?;
    let mut frontier: Vec<(Vec<i64>, Vec<WedgeVector>)> = vec![(top.clone(), echelonize(&[xi.clone()]))];
    let mut order: Vec<Vec<i64>> = vec![top.clone()];
    spaces.insert(top, frontier[0].1.clone());
    while !frontier.is_empty() {
        let mut next: BTreeMap<Vec<i64>, Vec<WedgeVector>> = BTreeMap::new();
        for (w, basis) in &frontier {
            for (i, &f) in lowering.iter().enumerate() {
                let nw: Vec<i64> = (0..r).map(|j| w[j] - alg.rs.cartan_matrix[i][j]).collect();
                for v in basis {
                    let u = act(alg, f, v);
                    if !u.is_zero() {
                        next.entry(nw.clone()).or_default().push(u);
                    }
                }
            }
        }
        frontier = next
            .into_iter()
            .map(|(w, vs)| {
                let b = echelonize(&vs);
                order.push(w.clone());
                spaces.insert(w.clone(), b.clone());
                (w, b)
            })
            .collect();
    }
    let mut basis = Vec::new();
    let mut weight_multiplicities = Vec::new();
    for w in order {
        let b = &spaces[&w];
        weight_multiplicities.push((w, b.len()));
        basis.extend(b.iter().cloned());
    }
    let expected = weyl_dimension(&alg.rs, &highest_weight)?;
    if expected != num::BigUint::from(basis.len()) {
        return Err(WedgeError::DimensionMismatch { generated: basis.len(), expected: expected.to_string() });
    }
    Ok(SubRepresentation { degree: xi.degree, basis, highest_weight, weight_multiplicities })
}

/// Whether `v` lies in the span of `basis` (all of one weight or not).
pub fn in_span(basis: &[WedgeVector], v: &WedgeVector) -> bool {
    if v.is_zero() {
        return true;
    }
    let before = echelonize(basis).len();
    let mut all = basis.to_vec();
    all.push(v.clone());
    echelonize(&all).len() == before
}

/// Closure of a subrepresentation under every Chevalley basis element,
/// checked weight space by weight space.
pub fn is_closed(alg: &ChevalleyAlgebra, sub: &SubRepresentation) -> bool {
    let mut by_weight: HashMap<Vec<i64>, Vec<WedgeVector>> = HashMap::new();
    for v in &sub.basis {
        by_weight.entry(weight_of(alg, v).expect("weight vector")).or_default().push(v.clone());
    }
    for v in &sub.basis {
        for x in 0..alg.dim() {
            let u = act(alg, x, v);
            if u.is_zero() {
                continue;
            }
            let Ok(w) = weight_of(alg, &u) else { return false };
            match by_weight.get(&w) {
                Some(b) if in_span(b, &u) => {}
                _ => return false,
            }
        }
    }
    true
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantSubspace {
    pub subspace: SubspaceModel<AlgebraicScalar>,
    /// The commutant element whose eigenspace was taken, and the eigenvalue.
    pub element: Matrix<AlgebraicScalar>,
    pub eigenvalue: AlgebraicScalar,
    pub extension_degree: usize,
    pub commutant_dim: usize,
}

/// Basis of `{X : A X = X A for every A in matrices}`.
pub fn commutant_basis<T: Scalar>(matrices: &[Matrix<T>], n: usize) -> Vec<Matrix<T>> {
    let nn = n * n;
    let mut rows: Vec<Vec<T>> = Vec::new();
    for a in matrices {
        // (AX − XA)_{ij} = Σ_k A_ik X_kj − X_ik A_kj.
        for i in 0..n {
            for j in 0..n {
                let mut row = vec![T::zero(); nn];
                for k in 0..n {
                    row[k * n + j] = row[k * n + j].clone() + a[(i, k)].clone();
                    row[i * n + k] = row[i * n + k].clone() - a[(k, j)].clone();
                }
                if row.iter().any(|x| !x.is_zero()) {
                    rows.push(row);
                }
            }
        }
    }
    let ns = if rows.is_empty() {
        (0..nn)
            .map(|i| {
                let mut v = vec![T::zero(); nn];
                v[i] = T::one();
                v
            })
            .collect()
    } else {
        Matrix::from_rows(rows).nullspace()
    };
    ns.into_iter().map(|v| Matrix::from_rows(v.chunks(n).map(|c| c.to_vec()).collect())).collect()
}

/// Monic minimal polynomial, coefficients from constant term upward.
pub fn minimal_polynomial<T: Scalar>(x: &Matrix<T>) -> Vec<T> {
    let n = x.rows();
    let mut powers: Vec<Vec<T>> = vec![Matrix::identity(n).entries().to_vec()];
    let mut cur = Matrix::identity(n);
    loop {
        cur = &cur * x;
        let target = cur.entries().to_vec();
        let k = powers.len();
        let a = Matrix::from_rows((0..n * n).map(|r| (0..k).map(|c| powers[c][r].clone()).collect()).collect());
        if let Some((c, _)) = a.solve_affine(&target) {
            let mut poly: Vec<T> = c.into_iter().map(|v| -v).collect();
            poly.push(T::one());
            return poly;
        }
        powers.push(target);
    }
}

fn divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let n = n.abs().to_u64()?;
    if n > 1_000_000_000_000 {
        return None;
    }
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(BigInt::from(d));
            if d * d != n {
                out.push(BigInt::from(n / d));
            }
        }
        d += 1;
    }
    Some(out)
}

fn eval(poly: &[Rational], x: &Rational) -> Rational {
    poly.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
}

/// Rational roots of a rational polynomial (constant term first), or
/// `None` if the coefficients are too large to search.
pub fn rational_roots(poly: &[Rational]) -> Option<Vec<Rational>> {
    let mut p = poly.to_vec();
    let mut roots = Vec::new();
    while p.len() > 1 && p[0].is_zero() {
        p.remove(0);
        if !roots.contains(&Rational::zero()) {
            roots.push(Rational::zero());
        }
    }
    if p.len() <= 1 {
        return Some(roots);
    }
    let l = p.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = p.iter().map(|c| (c * Rational::from_integer(l.clone())).to_integer()).collect();
    let lead = divisors(ints.last().unwrap())?;
    let constant = divisors(&ints[0])?;
    for num in &constant {
        for den in &lead {
            for s in [1, -1] {
                let x = Rational::new(num * s, den.clone());
                if !roots.contains(&x) && eval(&p, &x).is_zero() {
                    roots.push(x);
                }
            }
        }
    }
    roots.sort();
    Some(roots)
}

fn squarefree_decomposition(n: &BigInt) -> Option<(BigInt, i64)> {
    // n = s^2 * d with d squarefree.
    let sign: i64 = if n.is_negative() { -1 } else { 1 };
    let mut m = n.abs().to_u64()?;
    let mut s = 1u64;
    let mut d = 1u64;
    let mut p = 2u64;
    while p * p <= m {
        let mut e = 0;
        while m % p == 0 {
            m /= p;
            e += 1;
        }
        s *= p.pow(e / 2);
        if e % 2 == 1 {
            d *= p;
        }
        p += 1;
    }
    d *= m;
    Some((BigInt::from(s), sign * d as i64))
}

fn to_alg(m: &Matrix<Rational>) -> Matrix<AlgebraicScalar> {
    m.map(|x| AlgebraicScalar::rational(x.clone()))
}

fn kernel_of_shift(x: &Matrix<AlgebraicScalar>, lambda: &AlgebraicScalar) -> Vec<Vec<AlgebraicScalar>> {
    let n = x.rows();
    let shifted = x.sub(&Matrix::identity(n).scale(lambda));
    crate::linalg::span_basis(&shifted.nullspace())
}

/// A proper nonzero subspace invariant under every matrix, found as an
/// eigenspace of a non-scalar commutant element, or `None` when the
/// commutant consists of scalars.
///
/// Supported: rational input with eigenvalues in `Q` or in a quadratic
/// extension. Among all candidate eigenspaces the smallest is returned,
/// ties broken by the earliest pivot columns.
pub fn commutant_invariant_subspace(matrices: &[Matrix<Rational>]) -> Result<Option<InvariantSubspace>, WedgeError> {
    let Some(n) = matrices.first().map(|m| m.rows()) else {
        return Err(WedgeError::InconsistentSizes);
    };
    if matrices.iter().any(|m| m.rows() != n || m.cols() != n) {
        return Err(WedgeError::InconsistentSizes);
    }
    let basis = commutant_basis(matrices, n);
    let commutant_dim = basis.len();
    if commutant_dim <= 1 {
        return Ok(None);
    }
    let mut best: Option<(usize, Vec<usize>, InvariantSubspace)> = None;
    let mut needed_degree = 0;
    for x in basis.iter().filter(|m| !m.is_scalar()) {
        let poly = minimal_polynomial(x);
        let xa = to_alg(x);
        let mut eigen: Vec<(AlgebraicScalar, usize)> = Vec::new();
        match rational_roots(&poly) {
            Some(rs) if !rs.is_empty() => {
                eigen.extend(rs.into_iter().map(|r| (AlgebraicScalar::rational(r), 1)));
            }
            _ if poly.len() == 3 => {
                // t² + b t + c with no rational root.
                let (b, c) = (&poly[1], &poly[0]);
                let disc = b * b - int(4) * c;
                let num = disc.numer() * disc.denom();
                let Some((s, d)) = squarefree_decomposition(&num) else {
                    needed_degree = needed_degree.max(2);
                    continue;
                };
                let root = Rational::new(s, disc.denom().clone()) / int(2);
                let lambda = AlgebraicScalar::quadratic(-b / int(2), root, d).expect("squarefree");
                eigen.push((lambda, 2));
            }
            _ => {
                needed_degree = needed_degree.max(poly.len() - 1);
                continue;
            }
        }
        for (lambda, deg) in eigen {
            let k = kernel_of_shift(&xa, &lambda);
            if k.is_empty() || k.len() == n {
                continue;
            }
            let pivots: Vec<usize> =
                k.iter().map(|row| row.iter().position(|c| !c.is_zero()).unwrap()).collect();
            let key = (k.len(), pivots.clone());
            let better = match &best {
                None => true,
                Some((d, p, _)) => (k.len(), &pivots) < (*d, p),
            };
            if better {
                let subspace = SubspaceModel::from_basis(k).expect("independent kernel basis");
                best = Some((
                    key.0,
                    key.1,
                    InvariantSubspace { subspace, element: xa.clone(), eigenvalue: lambda, extension_degree: deg, commutant_dim },
                ));
            }
        }
    }
    match best {
        Some((_, _, s)) => Ok(Some(s)),
        None => Err(WedgeError::ExtensionTooLarge { degree: needed_degree }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::faces::{enumerate_faces, face_of};
    use crate::rootsys::{Family, RootSystemSpec};

    fn alg(f: Family, r: usize) -> ChevalleyAlgebra {
        chevalley_basis(&RootSystem::build(RootSystemSpec::new(f, r)).unwrap()).unwrap()
    }

    #[test]
    fn sl2_relations() {
        let a = alg(Family::A, 1);
        // basis: h, E, F
        assert_eq!(a.bracket(1, 2), &vec![(0, 1)]);
        assert_eq!(a.bracket(0, 1), &vec![(1, 2)]);
        assert_eq!(a.bracket(0, 2), &vec![(2, -2)]);
    }

    #[test]
    fn a2_structure_constant() {
        let a = alg(Family::A, 2);
        let i = a.rs.simple_root_index(0);
        let j = a.rs.simple_root_index(1);
        assert_eq!(a.n(i, j).abs(), 1);
    }

    #[test]
    fn jacobi_small_types() {
        for (f, r) in [(Family::A, 2), (Family::B, 2), (Family::G, 2), (Family::A, 3), (Family::C, 3)] {
            assert_eq!(alg(f, r).jacobi_violation(), None, "{f}{r}");
        }
    }

    #[test]
    fn rank_cap() {
        let rs = RootSystem::build(RootSystemSpec::new(Family::A, 5)).unwrap();
        assert!(matches!(chevalley_basis(&rs), Err(WedgeError::RankTooLarge { .. })));
    }

    #[test]
    fn a2_face_subrep() {
        let a = alg(Family::A, 2);
        let d = face_of(&a.rs, &a.rs.fundamental_weight(0)).unwrap();
        let xi = xi_vector(&a, &d);
        assert_eq!(xi.degree, 2);
        let hw = check_highest_weight(&a, &xi).unwrap();
        assert_eq!(hw.fw_coords, vec![int(3), int(0)]);
        let sub = generate_subrep(&a, &xi).unwrap();
        assert_eq!(sub.dim(), 10);
        assert!(is_closed(&a, &sub));
        assert_eq!(generate_subrep(&a, &xi).unwrap(), sub);
    }

    #[test]
    fn lowest_vector_is_not_highest() {
        let a = alg(Family::A, 1);
        let f = WedgeVector::monomial(&[2]);
        assert!(matches!(check_highest_weight(&a, &f), Err(WedgeError::NotHighestWeight { .. })));
    }

    #[test]
    fn regular_faces_give_adjoint() {
        for (f, r) in [(Family::A, 2), (Family::B, 2), (Family::G, 2), (Family::A, 3)] {
            let a = alg(f, r);
            let faces = enumerate_faces(&a.rs);
            let reg = faces.last().unwrap();
            let d = face_of(&a.rs, &reg.canonical_x).unwrap();
            assert_eq!(d.m, 1);
            let sub = generate_subrep(&a, &xi_vector(&a, &d)).unwrap();
            assert_eq!(sub.dim(), a.dim());
        }
    }

    fn q(rows: &[&[i64]]) -> Matrix<Rational> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect())
    }

    #[test]
    fn commutant_cases() {
        let id = Matrix::<Rational>::identity(3);
        let s = commutant_invariant_subspace(&[id]).unwrap().unwrap();
        assert_eq!(s.subspace.dim(), 1);

        let a = q(&[&[1, 1], &[0, 1]]);
        let b = q(&[&[1, 0], &[1, 1]]);
        assert_eq!(commutant_invariant_subspace(&[a, b]).unwrap(), None);

        let r = q(&[&[0, -1, 0, 0], &[1, 0, 0, 0], &[0, 0, 1, 1], &[0, 0, 1, 2]]);
        let t = q(&[&[1, 1, 0, 0], &[0, 1, 0, 0], &[0, 0, 2, 1], &[0, 0, 1, 1]]);
        let s = commutant_invariant_subspace(&[r.clone(), t.clone()]).unwrap().unwrap();
        assert_eq!(s.subspace.pivot_set(), vec![0, 1]);
        assert_eq!(s.subspace.dim(), 2);
    }

    #[test]
    fn quadratic_eigenvalue() {
        // Commutant of a rotation by 90° is Q[r] ≅ Q(i).
        let r = q(&[&[0, -1], &[1, 0]]);
        let s = commutant_invariant_subspace(&[r]).unwrap().unwrap();
        assert_eq!(s.extension_degree, 2);
        assert_eq!(s.subspace.dim(), 1);
    }

    #[test]
    fn minimal_polynomials() {
        let x = q(&[&[2, 0, 0], &[0, 2, 0], &[0, 0, 3]]);
        assert_eq!(minimal_polynomial(&x), vec![int(6), int(-5), int(1)]);
        assert_eq!(rational_roots(&minimal_polynomial(&x)).unwrap(), vec![int(2), int(3)]);
    }
}
