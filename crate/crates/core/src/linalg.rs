//! Dense matrices over the rationals with exact elimination.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Coefficient field of every complex in this crate.
pub type Scalar = BigRational;

pub fn scalar(n: i64) -> Scalar {
    BigRational::from_integer(BigInt::from(n))
}

#[derive(Clone, PartialEq, Eq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one());
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, scalar(v));
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.data[r * self.cols + c] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn mul(&self, rhs: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in product");
        let mut out = QMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        let v = out.get(i, j) + a * b;
                        out.set(i, j, v);
                    }
                }
            }
        }
        out
    }

    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        if let Some(r) = self.small_integer_rank() {
            return r;
        }
        let mut m = self.clone();
        m.row_echelon().len()
    }

    /// Solves `self * x = rhs`. Pivots are taken in column order and free
    /// variables are set to zero, so the solution is deterministic.
    pub fn solve(&self, rhs: &[Scalar]) -> Option<Vec<Scalar>> {
        assert_eq!(rhs.len(), self.rows, "right-hand side has wrong length");
        let mut aug = QMatrix::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, rhs[i].clone());
        }
        let pivots = aug.reduced_row_echelon();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![Scalar::zero(); self.cols];
        for (row, &col) in pivots.iter().enumerate() {
            x[col] = aug.get(row, self.cols).clone();
        }
        Some(x)
    }

    /// Brings the matrix to row echelon form; returns the pivot columns.
    fn row_echelon(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&r| !self.get(r, col).is_zero()) else {
                continue;
            };
            self.swap_rows(row, p);
            let inv = self.get(row, col).recip();
            for r in row + 1..self.rows {
                if self.get(r, col).is_zero() {
                    continue;
                }
                let factor = self.get(r, col) * &inv;
                self.sub_row_multiple(r, row, &factor, col);
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    fn reduced_row_echelon(&mut self) -> Vec<usize> {
        let pivots = self.row_echelon();
        for (row, &col) in pivots.iter().enumerate().rev() {
            let inv = self.get(row, col).recip();
            for c in col..self.cols {
                let v = self.get(row, c) * &inv;
                self.set(row, c, v);
            }
            for r in 0..row {
                if self.get(r, col).is_zero() {
                    continue;
                }
                let factor = self.get(r, col).clone();
                self.sub_row_multiple(r, row, &factor, col);
            }
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn sub_row_multiple(&mut self, target: usize, source: usize, factor: &Scalar, from_col: usize) {
        for c in from_col..self.cols {
            let s = self.get(source, c);
            if s.is_zero() {
                continue;
            }
            let v = self.get(target, c) - factor * s;
            self.set(target, c, v);
        }
    }

    /// Fraction-free integer elimination for matrices with small integral
    /// entries; `None` when the fast path does not apply or would overflow.
    fn small_integer_rank(&self) -> Option<usize> {
        let mut m: Vec<i128> = Vec::with_capacity(self.data.len());
        for v in &self.data {
            if !v.is_integer() || v.abs() > scalar(1 << 20) {
                return None;
            }
            m.push(i128::try_from(v.to_integer()).ok()?);
        }
        let (rows, cols) = (self.rows, self.cols);
        let mut rank = 0;
        for col in 0..cols {
            if rank == rows {
                break;
            }
            let Some(p) = (rank..rows).find(|&r| m[r * cols + col] != 0) else {
                continue;
            };
            if p != rank {
                for c in 0..cols {
                    m.swap(p * cols + c, rank * cols + c);
                }
            }
            let piv = m[rank * cols + col];
            for r in rank + 1..rows {
                let f = m[r * cols + col];
                if f == 0 {
                    continue;
                }
                let mut g = 0i128;
                for c in col..cols {
                    let v = m[r * cols + c]
                        .checked_mul(piv)?
                        .checked_sub(f.checked_mul(m[rank * cols + c])?)?;
                    m[r * cols + c] = v;
                    g = gcd(g, v);
                }
                if g > 1 {
                    for c in col..cols {
                        m[r * cols + c] /= g;
                    }
                }
            }
            rank += 1;
        }
        Some(rank)
    }
}

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl fmt::Debug for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "QMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self.get(r, c).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_of_small_matrices() {
        assert_eq!(QMatrix::from_rows(&[vec![1, 2], vec![2, 4]]).rank(), 1);
        assert_eq!(QMatrix::identity(3).rank(), 3);
        assert_eq!(QMatrix::zeros(2, 3).rank(), 0);
        assert_eq!(QMatrix::zeros(0, 3).rank(), 0);
    }

    #[test]
    fn rational_and_integer_paths_agree() {
        let mut m = QMatrix::from_rows(&[vec![1, 1, 0], vec![0, 1, 1], vec![1, 2, 1]]);
        assert_eq!(m.rank(), 2);
        m.set(0, 0, Scalar::new(BigInt::from(1), BigInt::from(3)));
        assert_eq!(m.rank(), 3);
        let mut e = m.clone();
        assert_eq!(e.row_echelon().len(), 3);
    }

    #[test]
    fn solve_picks_zero_free_variables() {
        let m = QMatrix::from_rows(&[vec![1, 1, 0], vec![0, 0, 1]]);
        let x = m.solve(&[scalar(3), scalar(2)]).unwrap();
        assert_eq!(x, vec![scalar(3), scalar(0), scalar(2)]);
        let inconsistent = QMatrix::from_rows(&[vec![1, 1], vec![2, 2]]);
        assert!(inconsistent.solve(&[scalar(1), scalar(3)]).is_none());
    }

    #[test]
    fn product() {
        let a = QMatrix::from_rows(&[vec![1, 1, 1]]);
        let b = QMatrix::from_rows(&[vec![1, 0], vec![-1, 1], vec![0, -1]]);
        assert!(a.mul(&b).is_zero());
    }
}
