//! Smith normal form over the integers.
//!
//! Intermediate values can outgrow any fixed-width integer even for small inputs,
//! so the elimination runs on arbitrary-precision entries throughout.

#![allow(clippy::needless_range_loop)]

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::sparse::SparseIntMatrix;

/// Outcome of a Smith normal form computation.
///
/// `diagonal` holds the nonzero invariant factors `b_1 | b_2 | ... | b_l`, each
/// positive; `rank` equals their count. When requested, `row_transform` (U) and
/// `col_transform` (V) are unimodular with `U * A * V = D`.
#[derive(Clone, Debug)]
pub struct SnfResult {
    pub diagonal: Vec<BigInt>,
    pub rank: usize,
    pub row_transform: Option<SparseIntMatrix>,
    pub col_transform: Option<SparseIntMatrix>,
}

struct Elimination {
    a: Vec<Vec<BigInt>>,
    rows: usize,
    cols: usize,
    u: Option<Vec<Vec<BigInt>>>,
    v: Option<Vec<Vec<BigInt>>>,
}

fn identity(n: usize) -> Vec<Vec<BigInt>> {
    let mut m = vec![vec![BigInt::zero(); n]; n];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = BigInt::one();
    }
    m
}

impl Elimination {
    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.a.swap(i, j);
        if let Some(u) = &mut self.u {
            u.swap(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for row in &mut self.a {
            row.swap(i, j);
        }
        if let Some(v) = &mut self.v {
            for row in v.iter_mut() {
                row.swap(i, j);
            }
        }
    }

    /// row_i -= q * row_k
    fn row_sub(&mut self, i: usize, k: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let d = q * &self.a[k][j];
            self.a[i][j] -= d;
        }
        if let Some(u) = &mut self.u {
            for j in 0..self.rows {
                let d = q * &u[k][j];
                u[i][j] -= d;
            }
        }
    }

    /// row_i += row_k
    fn row_add(&mut self, i: usize, k: usize) {
        for j in 0..self.cols {
            let d = self.a[k][j].clone();
            self.a[i][j] += d;
        }
        if let Some(u) = &mut self.u {
            for j in 0..self.rows {
                let d = u[k][j].clone();
                u[i][j] += d;
            }
        }
    }

    /// col_j -= q * col_k
    fn col_sub(&mut self, j: usize, k: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for row in &mut self.a {
            let d = q * &row[k];
            row[j] -= d;
        }
        if let Some(v) = &mut self.v {
            for row in v.iter_mut() {
                let d = q * &row[k];
                row[j] -= d;
            }
        }
    }

    fn negate_row(&mut self, i: usize) {
        for e in &mut self.a[i] {
            *e = -std::mem::take(e);
        }
        if let Some(u) = &mut self.u {
            for e in &mut u[i] {
                *e = -std::mem::take(e);
            }
        }
    }

    /// Smallest nonzero entry by absolute value in the trailing submatrix.
    fn min_pivot(&self, k: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in k..self.rows {
            for j in k..self.cols {
                if self.a[i][j].is_zero() {
                    continue;
                }
                match best {
                    None => best = Some((i, j)),
                    Some((bi, bj)) => {
                        if self.a[i][j].abs() < self.a[bi][bj].abs() {
                            best = Some((i, j));
                        }
                    }
                }
            }
        }
        best
    }
}

/// Computes the Smith normal form of `m`.
///
/// Pivots are chosen by minimal absolute value; a trailing sweep restores the
/// divisibility chain whenever a submatrix entry resists the current pivot.
pub fn smith_normal_form(m: &SparseIntMatrix, keep_transforms: bool) -> SnfResult {
    let rows = m.rows();
    let cols = m.cols();
    let mut e = Elimination {
        a: m.to_dense(),
        rows,
        cols,
        u: keep_transforms.then(|| identity(rows)),
        v: keep_transforms.then(|| identity(cols)),
    };

    let n = rows.min(cols);
    let mut k = 0;
    while k < n {
        let Some((pi, pj)) = e.min_pivot(k) else {
            break;
        };
        e.swap_rows(k, pi);
        e.swap_cols(k, pj);
        loop {
            // Clear column k. Truncating division leaves |remainder| < |pivot|,
            // so any survivor is a strictly smaller pivot candidate.
            let mut reduced = false;
            for i in k + 1..rows {
                if e.a[i][k].is_zero() {
                    continue;
                }
                let q = &e.a[i][k] / &e.a[k][k];
                e.row_sub(i, k, &q);
                if !e.a[i][k].is_zero() {
                    reduced = true;
                }
            }
            if reduced {
                let (pi, pj) = e.min_pivot(k).expect("nonzero entry survives reduction");
                e.swap_rows(k, pi);
                e.swap_cols(k, pj);
                continue;
            }
            let mut reduced = false;
            for j in k + 1..cols {
                if e.a[k][j].is_zero() {
                    continue;
                }
                let q = &e.a[k][j] / &e.a[k][k];
                e.col_sub(j, k, &q);
                if !e.a[k][j].is_zero() {
                    reduced = true;
                }
            }
            if reduced {
                let (pi, pj) = e.min_pivot(k).expect("nonzero entry survives reduction");
                e.swap_rows(k, pi);
                e.swap_cols(k, pj);
                continue;
            }
            // Row and column are clear; force divisibility of the rest.
            let mut offender = None;
            'scan: for i in k + 1..rows {
                for j in k + 1..cols {
                    if !(&e.a[i][j] % &e.a[k][k]).is_zero() {
                        offender = Some(i);
                        break 'scan;
                    }
                }
            }
            match offender {
                Some(i) => e.row_add(k, i),
                None => break,
            }
        }
        k += 1;
    }

    let rank = k;
    for i in 0..rank {
        if e.a[i][i].is_negative() {
            e.negate_row(i);
        }
    }
    let diagonal: Vec<BigInt> = (0..rank).map(|i| e.a[i][i].clone()).collect();
    debug_assert!(diagonal.windows(2).all(|w| (&w[1] % &w[0]).is_zero()));

    let to_sparse = |d: Vec<Vec<BigInt>>, r: usize, c: usize| {
        SparseIntMatrix::from_triplets(
            r,
            c,
            d.into_iter().enumerate().flat_map(|(i, row)| {
                row.into_iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .map(move |(j, v)| (i, j, v))
            }),
        )
    };
    SnfResult {
        diagonal,
        rank,
        row_transform: e.u.map(|u| to_sparse(u, rows, rows)),
        col_transform: e.v.map(|v| to_sparse(v, cols, cols)),
    }
}
