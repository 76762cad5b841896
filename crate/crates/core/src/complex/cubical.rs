//! Elementary cubes: products of degenerate and unit integer intervals.

use std::fmt;

use super::ComplexError;

/// A product of intervals, each either degenerate `[a,a]` or unit `[a,a+1]`.
/// The dimension is the number of unit intervals.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct ElementaryCube {
    intervals: Vec<(i64, i64)>,
}

impl ElementaryCube {
    pub fn new(intervals: impl IntoIterator<Item = (i64, i64)>) -> Result<Self, ComplexError> {
        let intervals: Vec<(i64, i64)> = intervals.into_iter().collect();
        if intervals.is_empty() {
            return Err(ComplexError::EmptyCube);
        }
        for &(lo, hi) in &intervals {
            if hi != lo && hi != lo + 1 {
                return Err(ComplexError::BadInterval { lo, hi });
            }
        }
        Ok(ElementaryCube { intervals })
    }

    pub fn intervals(&self) -> &[(i64, i64)] {
        &self.intervals
    }

    pub fn dim(&self) -> usize {
        self.intervals.iter().filter(|&&(lo, hi)| hi != lo).count()
    }

    /// Embedding dimension: the number of interval factors.
    pub fn ambient_dim(&self) -> usize {
        self.intervals.len()
    }

    /// Corner vertices as coordinate tuples.
    pub fn corners(&self) -> Vec<Vec<i64>> {
        let mut out = vec![Vec::new()];
        for &(lo, hi) in &self.intervals {
            let mut next = Vec::new();
            for c in &out {
                let mut a = c.clone();
                a.push(lo);
                next.push(a);
                if hi != lo {
                    let mut b = c.clone();
                    b.push(hi);
                    next.push(b);
                }
            }
            out = next;
        }
        out
    }

    /// Signed boundary. The i-th unit interval (1-based, in ascending factor
    /// position) contributes (-1)^(i-1) * (top face - bottom face), where the top
    /// face fixes that interval at its upper endpoint.
    pub fn boundary(&self) -> Vec<(i8, ElementaryCube)> {
        let mut out = Vec::new();
        let mut unit_index = 0usize;
        for (pos, &(lo, hi)) in self.intervals.iter().enumerate() {
            if hi == lo {
                continue;
            }
            unit_index += 1;
            let sign = if unit_index % 2 == 1 { 1 } else { -1 };
            let mut top = self.intervals.clone();
            top[pos] = (hi, hi);
            let mut bottom = self.intervals.clone();
            bottom[pos] = (lo, lo);
            out.push((sign, ElementaryCube { intervals: top }));
            out.push((-sign, ElementaryCube { intervals: bottom }));
        }
        out
    }

    /// Codimension-one faces, unsigned.
    pub fn facets(&self) -> Vec<ElementaryCube> {
        self.boundary().into_iter().map(|(_, c)| c).collect()
    }

    /// All faces including the cube itself.
    pub fn faces(&self) -> Vec<ElementaryCube> {
        // Each unit interval independently stays, drops to bottom, or to top.
        let unit_positions: Vec<usize> = self
            .intervals
            .iter()
            .enumerate()
            .filter(|&(_, &(lo, hi))| hi != lo)
            .map(|(i, _)| i)
            .collect();
        let mut out = Vec::new();
        let n = unit_positions.len();
        let mut choice = vec![0u8; n];
        loop {
            let mut intervals = self.intervals.clone();
            for (ci, &pos) in unit_positions.iter().enumerate() {
                let (lo, hi) = intervals[pos];
                intervals[pos] = match choice[ci] {
                    0 => (lo, hi),
                    1 => (lo, lo),
                    _ => (hi, hi),
                };
            }
            out.push(ElementaryCube { intervals });
            // Advance the base-3 counter.
            let mut i = 0;
            loop {
                if i == n {
                    return out;
                }
                choice[i] += 1;
                if choice[i] < 3 {
                    break;
                }
                choice[i] = 0;
                i += 1;
            }
        }
    }
}

impl fmt::Display for ElementaryCube {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (lo, hi)) in self.intervals.iter().enumerate() {
            if i > 0 {
                write!(f, "x")?;
            }
            write!(f, "[{lo},{hi}]")?;
        }
        Ok(())
    }
}
