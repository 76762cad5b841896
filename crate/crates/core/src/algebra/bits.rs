//! Bit-packed vectors and matrices over GF(2).

/// Dense bit vector. Backing words store bit `i` at `words[i / 64]`, bit `i % 64`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = BitVec::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    pub fn from_ones(len: usize, ones: &[usize]) -> Self {
        let mut v = BitVec::zeros(len);
        for &i in ones {
            v.set(i, true);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len);
        let mask = 1u64 << (i % 64);
        if value {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    /// In-place xor with another vector of the same length.
    pub fn xor_assign(&mut self, other: &BitVec) {
        assert_eq!(self.len, other.len);
        for (w, o) in self.words.iter_mut().zip(&other.words) {
            *w ^= o;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Indices of the set bits, ascending.
    pub fn ones(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (wi, &w) in self.words.iter().enumerate() {
            let mut w = w;
            while w != 0 {
                let b = w.trailing_zeros() as usize;
                out.push(wi * 64 + b);
                w &= w - 1;
            }
        }
        out
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Position of the highest set bit, if any.
    pub fn last_one(&self) -> Option<usize> {
        for (wi, &w) in self.words.iter().enumerate().rev() {
            if w != 0 {
                return Some(wi * 64 + 63 - w.leading_zeros() as usize);
            }
        }
        None
    }
}

/// Dense row-major matrix over GF(2).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BitVec>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        BitMatrix {
            rows,
            cols,
            data: vec![BitVec::zeros(cols); rows],
        }
    }

    /// Builds a matrix from column vectors, all of length `rows`.
    pub fn from_columns(rows: usize, columns: &[BitVec]) -> Self {
        let mut m = BitMatrix::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for i in col.ones() {
                m.set(i, j, true);
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

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.data[i].get(j)
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        self.data[i].set(j, value);
    }

    pub fn row(&self, i: usize) -> &BitVec {
        &self.data[i]
    }

    pub fn column(&self, j: usize) -> BitVec {
        let mut c = BitVec::zeros(self.rows);
        for i in 0..self.rows {
            if self.get(i, j) {
                c.set(i, true);
            }
        }
        c
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in self.data[i].ones() {
                t.set(j, i, true);
            }
        }
        t
    }

    /// Matrix product over GF(2); `self.cols` must equal `rhs.rows`.
    pub fn multiply(&self, rhs: &BitMatrix) -> BitMatrix {
        assert_eq!(self.cols, rhs.rows);
        let mut out = BitMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in self.data[i].ones() {
                out.data[i].xor_assign(&rhs.data[k]);
            }
        }
        out
    }

    pub fn apply(&self, v: &BitVec) -> BitVec {
        assert_eq!(self.cols, v.len());
        let mut out = BitVec::zeros(self.rows);
        for i in 0..self.rows {
            let mut acc = 0u64;
            for (w, o) in self.data[i].words.iter().zip(&v.words) {
                acc ^= w & o;
            }
            out.set(i, acc.count_ones() % 2 == 1);
        }
        out
    }

    fn echelon(mut self) -> (BitMatrix, Vec<usize>) {
        let mut pivots = Vec::new();
        let mut r = 0;
        for j in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| self.get(i, j)) else {
                continue;
            };
            self.data.swap(r, p);
            let pivot_row = self.data[r].clone();
            for i in 0..self.rows {
                if i != r && self.get(i, j) {
                    self.data[i].xor_assign(&pivot_row);
                }
            }
            pivots.push(j);
            r += 1;
        }
        (self, pivots)
    }
}

/// Rank over GF(2) by Gaussian elimination.
pub fn rank_gf2(m: &BitMatrix) -> usize {
    m.clone().echelon().1.len()
}

/// Solves `m x = b` over GF(2). Returns `None` when the system is inconsistent;
/// free variables are set to zero.
pub fn solve_gf2(m: &BitMatrix, b: &BitVec) -> Option<BitVec> {
    assert_eq!(m.rows(), b.len());
    // Eliminate on the augmented matrix [m | b].
    let mut aug = BitMatrix::zeros(m.rows, m.cols + 1);
    for i in 0..m.rows {
        for j in m.data[i].ones() {
            aug.set(i, j, true);
        }
        if b.get(i) {
            aug.set(i, m.cols, true);
        }
    }
    let mut r = 0;
    let mut pivots = Vec::new();
    for j in 0..m.cols {
        if r == aug.rows {
            break;
        }
        let Some(p) = (r..aug.rows).find(|&i| aug.get(i, j)) else {
            continue;
        };
        aug.data.swap(r, p);
        let pivot_row = aug.data[r].clone();
        for i in 0..aug.rows {
            if i != r && aug.get(i, j) {
                aug.data[i].xor_assign(&pivot_row);
            }
        }
        pivots.push(j);
        r += 1;
    }
    // A leftover row of the form 0 = 1 marks an inconsistent system.
    for i in r..aug.rows {
        if aug.get(i, m.cols) {
            return None;
        }
    }
    let mut x = BitVec::zeros(m.cols);
    for (row, &j) in pivots.iter().enumerate() {
        if aug.get(row, m.cols) {
            x.set(j, true);
        }
    }
    Some(x)
}

/// Basis of the null space of `m` over GF(2), one vector per free column.
pub fn kernel_basis_gf2(m: &BitMatrix) -> Vec<BitVec> {
    let (ech, pivots) = m.clone().echelon();
    let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
    let mut basis = Vec::new();
    for free in 0..m.cols {
        if pivot_set.contains(&free) {
            continue;
        }
        let mut v = BitVec::zeros(m.cols);
        v.set(free, true);
        for (row, &pj) in pivots.iter().enumerate() {
            if ech.get(row, free) {
                v.set(pj, true);
            }
        }
        basis.push(v);
    }
    basis
}
