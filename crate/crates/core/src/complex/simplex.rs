//! Abstract simplices with canonical vertex order.

use std::fmt;

use super::ComplexError;

/// A simplex stored as a strictly increasing vertex list. The canonical order
/// fixes the orientation used by [`Simplex::boundary`].
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Simplex {
    vertices: Vec<usize>,
}

impl Simplex {
    /// Builds a simplex from vertices in any order; repeated vertices are rejected.
    pub fn new(vertices: impl IntoIterator<Item = usize>) -> Result<Simplex, ComplexError> {
        let mut vs: Vec<usize> = vertices.into_iter().collect();
        if vs.is_empty() {
            return Err(ComplexError::EmptySimplex);
        }
        vs.sort_unstable();
        for w in vs.windows(2) {
            if w[0] == w[1] {
                return Err(ComplexError::RepeatedVertex { vertex: w[0] });
            }
        }
        Ok(Simplex { vertices: vs })
    }

    /// Builds a simplex from an explicitly ordered vertex tuple and returns the
    /// sign of the permutation that sorts it, so `(simplex, sign)` carries the
    /// same orientation as the input.
    pub fn from_oriented(vertices: &[usize]) -> Result<(Simplex, i8), ComplexError> {
        let s = Simplex::new(vertices.iter().copied())?;
        let mut inversions = 0usize;
        for i in 0..vertices.len() {
            for j in i + 1..vertices.len() {
                if vertices[i] > vertices[j] {
                    inversions += 1;
                }
            }
        }
        let sign = if inversions.is_multiple_of(2) { 1 } else { -1 };
        Ok((s, sign))
    }

    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn has_vertex(&self, v: usize) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }

    /// True when every vertex of `other` is a vertex of `self`.
    pub fn contains(&self, other: &Simplex) -> bool {
        other.vertices.iter().all(|&v| self.has_vertex(v))
    }

    /// Codimension-one faces; empty for a vertex.
    pub fn facets(&self) -> Vec<Simplex> {
        if self.dim() == 0 {
            return Vec::new();
        }
        (0..self.vertices.len())
            .map(|skip| {
                let vs: Vec<usize> = self
                    .vertices
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != skip)
                    .map(|(_, &v)| v)
                    .collect();
                Simplex { vertices: vs }
            })
            .collect()
    }

    /// Signed boundary: dropping the i-th vertex contributes sign (-1)^i.
    /// The boundary of a vertex is empty.
    pub fn boundary(&self) -> Vec<(i8, Simplex)> {
        self.facets()
            .into_iter()
            .enumerate()
            .map(|(i, f)| (if i % 2 == 0 { 1 } else { -1 }, f))
            .collect()
    }

    /// All nonempty faces, including the simplex itself.
    pub fn faces(&self) -> Vec<Simplex> {
        let n = self.vertices.len();
        let mut out = Vec::with_capacity((1usize << n) - 1);
        for mask in 1u32..(1u32 << n) {
            let vs: Vec<usize> = (0..n)
                .filter(|&i| mask >> i & 1 == 1)
                .map(|i| self.vertices[i])
                .collect();
            out.push(Simplex { vertices: vs });
        }
        out
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.vertices.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashMap;

    #[test]
    fn vertices_are_sorted_and_duplicates_rejected() {
        let s = Simplex::new([2, 0, 1]).unwrap();
        assert_eq!(s.vertices(), &[0, 1, 2]);
        assert!(matches!(
            Simplex::new([1, 1]),
            Err(ComplexError::RepeatedVertex { vertex: 1 })
        ));
        assert!(matches!(Simplex::new([]), Err(ComplexError::EmptySimplex)));
    }

    #[test]
    fn triangle_boundary_signs() {
        // d(a,b,c) = (b,c) - (a,c) + (a,b) with a < b < c.
        let s = Simplex::new([0, 1, 2]).unwrap();
        let b = s.boundary();
        assert_eq!(b.len(), 3);
        assert_eq!(b[0], (1, Simplex::new([1, 2]).unwrap()));
        assert_eq!(b[1], (-1, Simplex::new([0, 2]).unwrap()));
        assert_eq!(b[2], (1, Simplex::new([0, 1]).unwrap()));
    }

    #[test]
    fn vertex_has_empty_boundary() {
        assert!(Simplex::new([7]).unwrap().boundary().is_empty());
    }

    fn boundary_coeffs(vertices: &[usize]) -> HashMap<Simplex, i32> {
        // Boundary of an ordered tuple: canonicalize each face with its sign.
        let (_, sign) = Simplex::from_oriented(vertices).unwrap();
        let mut out = HashMap::new();
        for skip in 0..vertices.len() {
            let face: Vec<usize> = vertices
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != skip)
                .map(|(_, &v)| v)
                .collect();
            let (canon, fsign) = Simplex::from_oriented(&face).unwrap();
            let term = if skip % 2 == 0 { 1 } else { -1 } * i32::from(fsign) * i32::from(sign);
            *out.entry(canon).or_insert(0) += term;
        }
        out.retain(|_, c| *c != 0);
        out
    }

    #[test]
    fn swapping_two_vertices_negates_the_boundary() {
        let ordered = [0, 1, 2, 3];
        let swapped = [0, 2, 1, 3];
        let b1 = boundary_coeffs(&ordered);
        // boundary_coeffs multiplies by the orientation sign, so the swapped tuple
        // must give the same canonical chain; without the sign it would negate.
        let b2 = boundary_coeffs(&swapped);
        assert_eq!(b1, b2);

        let (_, s1) = Simplex::from_oriented(&ordered).unwrap();
        let (_, s2) = Simplex::from_oriented(&swapped).unwrap();
        assert_eq!(s1, -s2);
    }

    #[test]
    fn faces_enumerates_the_full_closure() {
        let s = Simplex::new([0, 1, 2]).unwrap();
        let faces = s.faces();
        assert_eq!(faces.len(), 7);
        assert!(faces.contains(&Simplex::new([0]).unwrap()));
        assert!(faces.contains(&Simplex::new([0, 2]).unwrap()));
        assert!(faces.contains(&s));
    }
}
