//! Sparse integer matrices with arbitrary-precision entries.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::bits::BitMatrix;

/// Sparse matrix over the integers. Absent entries are zero; stored entries are
/// never zero. Iteration order is row-major and deterministic.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SparseIntMatrix {
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), BigInt>,
}

impl SparseIntMatrix {
    pub fn new(rows: usize, cols: usize) -> Self {
        SparseIntMatrix {
            rows,
            cols,
            entries: BTreeMap::new(),
        }
    }

    pub fn from_triplets<I, V>(rows: usize, cols: usize, triplets: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize, V)>,
        V: Into<BigInt>,
    {
        let mut m = SparseIntMatrix::new(rows, cols);
        for (i, j, v) in triplets {
            m.set(i, j, v.into());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> BigInt {
        self.entries
            .get(&(i, j))
            .cloned()
            .unwrap_or_else(BigInt::zero)
    }

    pub fn set(&mut self, i: usize, j: usize, value: impl Into<BigInt>) {
        assert!(i < self.rows && j < self.cols);
        let value = value.into();
        if value.is_zero() {
            self.entries.remove(&(i, j));
        } else {
            self.entries.insert((i, j), value);
        }
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, &BigInt)> {
        self.entries.iter().map(|(&(i, j), v)| (i, j, v))
    }

    pub fn transpose(&self) -> SparseIntMatrix {
        let mut t = SparseIntMatrix::new(self.cols, self.rows);
        for (i, j, v) in self.iter() {
            t.set(j, i, v.clone());
        }
        t
    }

    /// The matrix reduced mod 2.
    pub fn to_bits(&self) -> BitMatrix {
        let mut m = BitMatrix::zeros(self.rows, self.cols);
        for (i, j, v) in self.iter() {
            if v.is_odd() {
                m.set(i, j, true);
            }
        }
        m
    }

    pub(crate) fn to_dense(&self) -> Vec<Vec<BigInt>> {
        let mut d = vec![vec![BigInt::zero(); self.cols]; self.rows];
        for (i, j, v) in self.iter() {
            d[i][j] = v.clone();
        }
        d
    }

    /// Matrix product; `self.cols` must equal `rhs.rows`.
    pub fn multiply(&self, rhs: &SparseIntMatrix) -> SparseIntMatrix {
        assert_eq!(self.cols, rhs.rows);
        let mut acc: BTreeMap<(usize, usize), BigInt> = BTreeMap::new();
        for (i, k, a) in self.iter() {
            for ((rk, j), b) in rhs.entries.range((k, 0)..(k + 1, 0)) {
                debug_assert_eq!(*rk, k);
                let e = acc.entry((i, *j)).or_insert_with(BigInt::zero);
                *e += a * b;
            }
        }
        let mut out = SparseIntMatrix::new(self.rows, rhs.cols);
        for ((i, j), v) in acc {
            out.set(i, j, v);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }
}

trait OddCheck {
    fn is_odd(&self) -> bool;
}

impl OddCheck for BigInt {
    fn is_odd(&self) -> bool {
        num_integer::Integer::is_odd(self)
    }
}

/// Rank over the rationals via fraction-free (Bareiss) elimination.
pub fn rank_q(m: &SparseIntMatrix) -> usize {
    let mut a = m.to_dense();
    let rows = m.rows();
    let cols = m.cols();
    let mut rank = 0;
    let mut prev = BigInt::from(1);
    let mut row = 0;
    for col in 0..cols {
        if row == rows {
            break;
        }
        // Any nonzero pivot works; take the absolutely smallest to slow entry growth.
        let pivot = (row..rows)
            .filter(|&i| !a[i][col].is_zero())
            .min_by_key(|&i| a[i][col].abs());
        let Some(p) = pivot else { continue };
        a.swap(row, p);
        for i in row + 1..rows {
            for j in col + 1..cols {
                let num = &a[row][col] * &a[i][j] - &a[i][col] * &a[row][j];
                a[i][j] = num / &prev;
            }
            a[i][col] = BigInt::zero();
        }
        prev = a[row][col].clone();
        row += 1;
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_entries_are_not_stored() {
        let mut m = SparseIntMatrix::new(2, 2);
        m.set(0, 0, 5);
        m.set(0, 0, 0);
        assert_eq!(m.nnz(), 0);
        assert_eq!(m.get(0, 0), BigInt::zero());
    }

    #[test]
    fn rank_q_matches_hand_values() {
        // [[1, 2], [2, 4]] has rank 1 over Q.
        let m = SparseIntMatrix::from_triplets(2, 2, [(0, 0, 1), (0, 1, 2), (1, 0, 2), (1, 1, 4)]);
        assert_eq!(rank_q(&m), 1);

        let id = SparseIntMatrix::from_triplets(3, 3, [(0, 0, 1), (1, 1, 1), (2, 2, 1)]);
        assert_eq!(rank_q(&id), 3);

        assert_eq!(rank_q(&SparseIntMatrix::new(4, 0)), 0);
    }

    #[test]
    fn multiply_small() {
        let a = SparseIntMatrix::from_triplets(2, 2, [(0, 0, 1), (0, 1, 2), (1, 1, 3)]);
        let b = SparseIntMatrix::from_triplets(2, 1, [(0, 0, 4), (1, 0, 5)]);
        let c = a.multiply(&b);
        assert_eq!(c.get(0, 0), BigInt::from(14));
        assert_eq!(c.get(1, 0), BigInt::from(15));
    }

    #[test]
    fn mod2_reduction_drops_even_entries() {
        let m = SparseIntMatrix::from_triplets(1, 3, [(0, 0, 2), (0, 1, -1), (0, 2, 3)]);
        let b = m.to_bits();
        assert!(!b.get(0, 0));
        assert!(b.get(0, 1));
        assert!(b.get(0, 2));
    }
}
