//! Dense exact linear algebra over any [`Scalar`] field.

use std::ops::{Index, IndexMut, Mul};

use crate::exact::Scalar;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    /// Panics if the rows have unequal lengths.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged matrix rows");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn diagonal(entries: Vec<T>) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, e) in entries.into_iter().enumerate() {
            m[(i, i)] = e;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }
    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn row(&self, i: usize) -> Vec<T> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn scale(&self, s: &T) -> Self {
        self.map(|x| x.clone() * s.clone())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a.clone() + b.clone()).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a.clone() - b.clone()).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = T::zero();
                for (j, x) in v.iter().enumerate() {
                    let a = &self.data[i * self.cols + j];
                    if !a.is_zero() && !x.is_zero() {
                        acc = acc + a.clone() * x.clone();
                    }
                }
                acc
            })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let x = &self[(i, j)];
                    if i == j {
                        x.is_one()
                    } else {
                        x.is_zero()
                    }
                })
            })
    }

    pub fn is_scalar(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    if i == j {
                        self[(i, j)] == self[(0, 0)]
                    } else {
                        self[(i, j)].is_zero()
                    }
                })
            })
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(p, r);
            let inv = T::one() / m[(r, c)].clone();
            for j in c..m.cols {
                let v = m[(r, j)].clone() * inv.clone();
                m[(r, j)] = v;
            }
            for i in 0..m.rows {
                if i != r && !m[(i, c)].is_zero() {
                    let f = m[(i, c)].clone();
                    for j in c..m.cols {
                        if !m[(r, j)].is_zero() {
                            let v = m[(i, j)].clone() - f.clone() * m[(r, j)].clone();
                            m[(i, j)] = v;
                        }
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{x : self x = 0}`, one vector per free column, each with a
    /// 1 in its free column.
    pub fn nullspace(&self) -> Vec<Vec<T>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![T::zero(); self.cols];
                v[f] = T::one();
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = -r[(row, f)].clone();
                }
                v
            })
            .collect()
    }

    /// Solves `self x = b`. Returns a particular solution together with a
    /// nullspace basis, or `None` if inconsistent.
    pub fn solve_affine(&self, b: &[T]) -> Option<(Vec<T>, Vec<Vec<T>>)> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Self::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, self.cols)] = b[i].clone();
        }
        let (r, pivots) = aug.rref();
        if pivots.contains(&self.cols) {
            return None;
        }
        let mut x = vec![T::zero(); self.cols];
        for (row, &pc) in pivots.iter().enumerate() {
            x[pc] = r[(row, self.cols)].clone();
        }
        Some((x, self.nullspace()))
    }

    pub fn determinant(&self) -> T {
        assert!(self.is_square());
        let mut m = self.clone();
        let n = m.rows;
        let mut det = T::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m[(i, c)].is_zero()) else {
                return T::zero();
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let piv = m[(c, c)].clone();
            det = det * piv.clone();
            for i in c + 1..n {
                if !m[(i, c)].is_zero() {
                    let f = m[(i, c)].clone() / piv.clone();
                    for j in c..n {
                        let v = m[(i, j)].clone() - f.clone() * m[(c, j)].clone();
                        m[(i, j)] = v;
                    }
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Option<Self> {
        assert!(self.is_square());
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = T::one();
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        let mut inv = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = r[(i, n + j)].clone();
            }
        }
        Some(inv)
    }

    /// Minor with the given (sorted) row and column index sets.
    pub fn minor(&self, rows: &[usize], cols: &[usize]) -> T {
        let sub = Matrix::from_rows(
            rows.iter().map(|&i| cols.iter().map(|&j| self[(i, j)].clone()).collect()).collect(),
        );
        sub.determinant()
    }

    /// Matrix of the induced action on the `l`-th exterior power in the
    /// basis `e_I`, `I` running over [`subsets`] in lexicographic order.
    pub fn exterior_power(&self, l: usize) -> Self {
        assert!(self.is_square());
        let subs = subsets(self.rows, l);
        let k = subs.len();
        let mut out = Self::zeros(k, k);
        for (a, rows) in subs.iter().enumerate() {
            for (b, cols) in subs.iter().enumerate() {
                out[(a, b)] = self.minor(rows, cols);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::identity(self.rows);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Scalar> Mul for &Matrix<T> {
    type Output = Matrix<T>;
    fn mul(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in matrix product");
        let mut out = Matrix::<T>::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        let v = out[(i, j)].clone() + a.clone() * b.clone();
                        out[(i, j)] = v;
                    }
                }
            }
        }
        out
    }
}

/// All `l`-element subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, l: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, l: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == l {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < l - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, l, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if l <= n {
        rec(0, n, l, &mut Vec::new(), &mut out);
    }
    out
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: usize = 1;
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

/// Row-reduced basis of the span of `vectors` (nonzero rows only).
pub fn span_basis<T: Scalar>(vectors: &[Vec<T>]) -> Vec<Vec<T>> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let (r, pivots) = Matrix::from_rows(vectors.to_vec()).rref();
    (0..pivots.len()).map(|i| r.row(i)).collect()
}

/// An `ℓ`-dimensional subspace of `K^d`: a basis together with its
/// Plücker vector, normalised so that the pivot coordinate is 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubspaceModel<T> {
    pub ambient_dim: usize,
    pub basis: Vec<Vec<T>>,
    /// Indexed like [`subsets`]`(ambient_dim, basis.len())`.
    pub plucker: Vec<T>,
    pub pivot: usize,
}

impl<T: Scalar> SubspaceModel<T> {
    /// `None` if the vectors are linearly dependent or the list is empty.
    pub fn from_basis(basis: Vec<Vec<T>>) -> Option<Self> {
        let l = basis.len();
        let d = basis.first()?.len();
        let b = Matrix::from_rows(basis.clone());
        let raw: Vec<T> = subsets(d, l).iter().map(|cols| b.minor(&(0..l).collect::<Vec<_>>(), cols)).collect();
        let pivot = raw.iter().position(|x| !x.is_zero())?;
        let s = raw[pivot].clone();
        let plucker = raw.into_iter().map(|x| x / s.clone()).collect();
        Some(SubspaceModel { ambient_dim: d, basis, plucker, pivot })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn pivot_set(&self) -> Vec<usize> {
        subsets(self.ambient_dim, self.dim())[self.pivot].clone()
    }

    pub fn contains(&self, v: &[T]) -> bool {
        let mut rows = self.basis.clone();
        rows.push(v.to_vec());
        Matrix::from_rows(rows).rank() == self.dim()
    }

    /// `g L = L`, decided by rank.
    pub fn is_invariant_under(&self, g: &Matrix<T>) -> bool {
        self.basis.iter().all(|b| self.contains(&g.mul_vec(b)))
    }

    /// Same subspace with its basis in reduced row echelon form.
    pub fn canonical(&self) -> Self {
        let basis = span_basis(&self.basis);
        SubspaceModel { basis, ..self.clone() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, Rational};
    use num::traits::Zero;

    fn m(rows: &[&[i64]]) -> Matrix<Rational> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect())
    }

    #[test]
    fn determinant_and_inverse() {
        let a = m(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        assert_eq!(a.determinant(), int(18));
        let inv = a.inverse().unwrap();
        assert!((&a * &inv).is_identity());
        assert!(m(&[&[1, 2], &[2, 4]]).inverse().is_none());
    }

    #[test]
    fn nullspace_and_affine_solve() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6]]);
        let ns = a.nullspace();
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(a.mul_vec(v).iter().all(|x| x.is_zero()));
        }
        let (x, _) = a.solve_affine(&[int(1), int(2)]).unwrap();
        assert_eq!(a.mul_vec(&x), vec![int(1), int(2)]);
        assert!(a.solve_affine(&[int(1), int(3)]).is_none());
    }

    #[test]
    fn exterior_power_is_multiplicative() {
        let a = m(&[&[1, 2, 0, 1], &[0, 1, 3, 0], &[2, 0, 1, 1], &[1, 1, 0, 2]]);
        let b = m(&[&[0, 1, 0, 0], &[1, 0, 2, 0], &[0, 0, 1, 1], &[3, 0, 0, 1]]);
        for l in 1..=4 {
            let lhs = (&a * &b).exterior_power(l);
            let rhs = &a.exterior_power(l) * &b.exterior_power(l);
            assert_eq!(lhs, rhs);
        }
        assert_eq!(a.exterior_power(4)[(0, 0)], a.determinant());
    }

    #[test]
    fn subset_enumeration() {
        assert_eq!(subsets(4, 2).len(), 6);
        assert_eq!(subsets(4, 2)[0], vec![0, 1]);
        assert_eq!(subsets(4, 2)[5], vec![2, 3]);
        assert_eq!(binomial(14, 3), 364);
        assert_eq!(subsets(3, 0), vec![Vec::<usize>::new()]);
    }
}
