//! Exact rational vectors and matrices.
//!
//! Everything combinatorial in this crate (root systems, Weyl groups,
//! lattice canonical forms) runs on exact rational arithmetic so that
//! span, membership and equality tests carry no floating-point error.

use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Exact rational scalar. i64 components are ample at desk scale.
pub type Q = Ratio<i64>;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(n, d)
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(n)
}

/// Dense rational vector.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct QVec(pub Vec<Q>);

impl QVec {
    pub fn zeros(n: usize) -> Self {
        QVec(vec![Q::zero(); n])
    }

    pub fn from_ints(v: &[i64]) -> Self {
        QVec(v.iter().map(|&x| qi(x)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|x| x.is_zero())
    }

    pub fn dot(&self, other: &QVec) -> Q {
        assert_eq!(self.len(), other.len());
        self.0
            .iter()
            .zip(&other.0)
            .fold(Q::zero(), |acc, (a, b)| acc + *a * *b)
    }

    pub fn scale(&self, c: Q) -> QVec {
        QVec(self.0.iter().map(|x| *x * c).collect())
    }

    /// L1 norm (sum of absolute values); rational, unlike the L2 norm.
    pub fn l1_norm(&self) -> Q {
        self.0.iter().fold(Q::zero(), |acc, x| acc + x.abs())
    }

    /// Canonical representative of the positive ray through this vector:
    /// the vector scaled so its L1 norm is 1. Panics on the zero vector.
    pub fn ray_canonical(&self) -> QVec {
        let n = self.l1_norm();
        assert!(!n.is_zero(), "zero vector has no ray representative");
        self.scale(n.recip())
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.0
            .iter()
            .map(|x| *x.numer() as f64 / *x.denom() as f64)
            .collect()
    }
}

impl fmt::Display for QVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

impl Add for &QVec {
    type Output = QVec;
    fn add(self, rhs: &QVec) -> QVec {
        QVec(self.0.iter().zip(&rhs.0).map(|(a, b)| *a + *b).collect())
    }
}

impl Sub for &QVec {
    type Output = QVec;
    fn sub(self, rhs: &QVec) -> QVec {
        QVec(self.0.iter().zip(&rhs.0).map(|(a, b)| *a - *b).collect())
    }
}

impl Neg for &QVec {
    type Output = QVec;
    fn neg(self) -> QVec {
        QVec(self.0.iter().map(|a| -*a).collect())
    }
}

/// Dense rational matrix, row-major.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct QMat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Q>,
}

impl QMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMat {
            rows,
            cols,
            data: vec![Q::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Q::one();
        }
        m
    }

    pub fn from_rows(rows: &[QVec]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c);
            for j in 0..c {
                m[(i, j)] = row.0[j];
            }
        }
        m
    }

    pub fn from_cols(cols: &[QVec]) -> Self {
        let c = cols.len();
        let r = if c == 0 { 0 } else { cols[0].len() };
        let mut m = Self::zeros(r, c);
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), r);
            for i in 0..r {
                m[(i, j)] = col.0[i];
            }
        }
        m
    }

    pub fn col(&self, j: usize) -> QVec {
        QVec((0..self.rows).map(|i| self[(i, j)]).collect())
    }

    pub fn row(&self, i: usize) -> QVec {
        QVec((0..self.cols).map(|j| self[(i, j)]).collect())
    }

    pub fn transpose(&self) -> QMat {
        let mut m = QMat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(j, i)] = self[(i, j)];
            }
        }
        m
    }

    pub fn mul(&self, rhs: &QMat) -> QMat {
        assert_eq!(self.cols, rhs.rows);
        let mut m = QMat::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    m[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        m
    }

    pub fn mul_vec(&self, v: &QVec) -> QVec {
        assert_eq!(self.cols, v.len());
        QVec(
            (0..self.rows)
                .map(|i| {
                    (0..self.cols).fold(Q::zero(), |acc, j| acc + self[(i, j)] * v.0[j])
                })
                .collect(),
        )
    }

    pub fn scale_col(&mut self, j: usize, c: Q) {
        for i in 0..self.rows {
            self[(i, j)] *= c;
        }
    }

    /// col_j += c * col_k
    pub fn add_col(&mut self, j: usize, k: usize, c: Q) {
        for i in 0..self.rows {
            let v = self[(i, k)];
            self[(i, j)] += c * v;
        }
    }

    pub fn swap_cols(&mut self, j: usize, k: usize) {
        if j == k {
            return;
        }
        for i in 0..self.rows {
            let t = self[(i, j)];
            self[(i, j)] = self[(i, k)];
            self[(i, k)] = t;
        }
    }

    /// Rank by fraction-free-ish Gaussian elimination on a working copy.
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let mut rank = 0;
        let mut row = 0;
        for col in 0..m.cols {
            if row >= m.rows {
                break;
            }
            let pivot = (row..m.rows).find(|&i| !m[(i, col)].is_zero());
            let Some(p) = pivot else { continue };
            m.swap_rows(p, row);
            let pv = m[(row, col)];
            for i in (row + 1)..m.rows {
                let f = m[(i, col)] / pv;
                if f.is_zero() {
                    continue;
                }
                for j in col..m.cols {
                    let v = m[(row, j)];
                    m[(i, j)] -= f * v;
                }
            }
            row += 1;
            rank += 1;
        }
        rank
    }

    pub fn swap_rows(&mut self, i: usize, k: usize) {
        if i == k {
            return;
        }
        for j in 0..self.cols {
            let t = self[(i, j)];
            self[(i, j)] = self[(k, j)];
            self[(k, j)] = t;
        }
    }

    pub fn det(&self) -> Q {
        assert_eq!(self.rows, self.cols);
        let mut m = self.clone();
        let mut det = Q::one();
        for col in 0..m.cols {
            let pivot = (col..m.rows).find(|&i| !m[(i, col)].is_zero());
            let Some(p) = pivot else { return Q::zero() };
            if p != col {
                m.swap_rows(p, col);
                det = -det;
            }
            let pv = m[(col, col)];
            det *= pv;
            for i in (col + 1)..m.rows {
                let f = m[(i, col)] / pv;
                if f.is_zero() {
                    continue;
                }
                for j in col..m.cols {
                    let v = m[(col, j)];
                    m[(i, j)] -= f * v;
                }
            }
        }
        det
    }

    /// Solve `self * x = b`. Returns any solution (free variables set to 0)
    /// or None if inconsistent.
    pub fn solve(&self, b: &QVec) -> Option<QVec> {
        assert_eq!(self.rows, b.len());
        // Augmented RREF.
        let mut m = QMat::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(i, j)] = self[(i, j)];
            }
            m[(i, self.cols)] = b.0[i];
        }
        let mut pivots: Vec<(usize, usize)> = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row >= m.rows {
                break;
            }
            let pivot = (row..m.rows).find(|&i| !m[(i, col)].is_zero());
            let Some(p) = pivot else { continue };
            m.swap_rows(p, row);
            let pv = m[(row, col)];
            for j in col..=self.cols {
                m[(row, j)] /= pv;
            }
            for i in 0..m.rows {
                if i == row || m[(i, col)].is_zero() {
                    continue;
                }
                let f = m[(i, col)];
                for j in col..=self.cols {
                    let v = m[(row, j)];
                    m[(i, j)] -= f * v;
                }
            }
            pivots.push((row, col));
            row += 1;
        }
        // Inconsistency check.
        for i in row..m.rows {
            if !m[(i, self.cols)].is_zero() {
                return None;
            }
        }
        let mut x = QVec::zeros(self.cols);
        for (r, c) in pivots {
            x.0[c] = m[(r, self.cols)];
        }
        Some(x)
    }

    /// Inverse of a square matrix, or None if singular.
    pub fn inverse(&self) -> Option<QMat> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut m = QMat::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = self[(i, j)];
            }
            m[(i, n + i)] = Q::one();
        }
        for col in 0..n {
            let pivot = (col..n).find(|&i| !m[(i, col)].is_zero())?;
            m.swap_rows(pivot, col);
            let pv = m[(col, col)];
            for j in 0..2 * n {
                m[(col, j)] /= pv;
            }
            for i in 0..n {
                if i == col || m[(i, col)].is_zero() {
                    continue;
                }
                let f = m[(i, col)];
                for j in 0..2 * n {
                    let v = m[(col, j)];
                    m[(i, j)] -= f * v;
                }
            }
        }
        let mut inv = QMat::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = m[(i, n + j)];
            }
        }
        Some(inv)
    }

    /// Stable hashable key for dedup maps.
    pub fn key(&self) -> Vec<(i64, i64)> {
        self.data.iter().map(|x| (*x.numer(), *x.denom())).collect()
    }
}

impl std::ops::Index<(usize, usize)> for QMat {
    type Output = Q;
    fn index(&self, (i, j): (usize, usize)) -> &Q {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for QMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Q {
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &QMat {
    type Output = QMat;
    fn mul(self, rhs: &QMat) -> QMat {
        self.mul(rhs)
    }
}

/// True iff `v` lies in the rational span of `gens`.
pub fn in_span(gens: &[QVec], v: &QVec) -> bool {
    if v.is_zero() {
        return true;
    }
    if gens.is_empty() {
        return false;
    }
    let a = QMat::from_cols(gens);
    a.solve(v).is_some()
}

/// True iff `v` lies in the cone of nonnegative combinations of `gens`.
/// Requires the generators to be linearly independent.
pub fn in_nonneg_cone(gens: &[QVec], v: &QVec) -> bool {
    let a = QMat::from_cols(gens);
    match a.solve(v) {
        Some(c) => {
            // Solution unique by independence; verify and check signs.
            a.mul_vec(&c) == *v && c.0.iter().all(|x| !x.is_negative())
        }
        None => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solve_and_inverse_roundtrip() {
        let m = QMat::from_rows(&[
            QVec::from_ints(&[2, 1, 0]),
            QVec::from_ints(&[0, 1, -1]),
            QVec::from_ints(&[1, 0, 3]),
        ]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), QMat::identity(3));
        let b = QVec::from_ints(&[1, 2, 3]);
        let x = m.solve(&b).unwrap();
        assert_eq!(m.mul_vec(&x), b);
    }

    #[test]
    fn rank_detects_dependence() {
        let m = QMat::from_rows(&[
            QVec::from_ints(&[1, 2]),
            QVec::from_ints(&[2, 4]),
        ]);
        assert_eq!(m.rank(), 1);
        assert_eq!(m.det(), qi(0));
    }

    #[test]
    fn cone_membership() {
        let gens = vec![QVec::from_ints(&[1, 0]), QVec::from_ints(&[1, 1])];
        assert!(in_nonneg_cone(&gens, &QVec::from_ints(&[3, 1])));
        assert!(!in_nonneg_cone(&gens, &QVec::from_ints(&[0, -1])));
    }

    #[test]
    fn ray_canonical_identifies_positive_multiples() {
        let v = QVec::from_ints(&[2, -4, 6]);
        let w = v.scale(q(5, 3));
        assert_eq!(v.ray_canonical(), w.ray_canonical());
        assert_ne!(v.ray_canonical(), (-&v).ray_canonical());
    }
}
