//! Canonical sample complexes and seeded random generators.
//!
//! These are the spaces every textbook reaches for: spheres, the torus (two
//! triangulations), the projective plane, wedges. Tests, benchmarks, and docs
//! all share them, and the random generators are deterministic under a fixed
//! seed so failures replay.

use rand::seq::index::sample;
use rand::Rng;

use crate::complex::{Filtration, Simplex, SimplicialComplex};

fn build(cells: &[&[usize]]) -> SimplicialComplex {
    SimplicialComplex::from_cells(cells.iter().copied()).expect("fixture cells are valid")
}

/// One filled triangle: a 2-simplex with all faces.
pub fn triangle() -> SimplicialComplex {
    build(&[&[0, 1, 2]])
}

/// The boundary of a triangle: a circle with three edges.
pub fn hollow_triangle() -> SimplicialComplex {
    build(&[&[0, 1], &[1, 2], &[0, 2]])
}

/// Boundary of the tetrahedron: the smallest triangulated 2-sphere.
pub fn sphere2() -> SimplicialComplex {
    build(&[&[0, 1, 2], &[0, 1, 3], &[0, 2, 3], &[1, 2, 3]])
}

/// A circle triangulated with `n >= 3` edges.
pub fn circle(n: usize) -> SimplicialComplex {
    assert!(n >= 3);
    let cells: Vec<Vec<usize>> = (0..n).map(|i| vec![i, (i + 1) % n]).collect();
    SimplicialComplex::from_cells(cells).expect("circle cells are valid")
}

/// A path with `n` edges on `n + 1` vertices; a contractible tree.
pub fn path(n: usize) -> SimplicialComplex {
    let cells: Vec<Vec<usize>> = (0..n).map(|i| vec![i, i + 1]).collect();
    SimplicialComplex::from_cells(cells).expect("path cells are valid")
}

/// The 9-vertex triangulation of the torus: a 3x3 vertex grid with wraparound,
/// each grid square split along its main diagonal. Vertex (r, c) has id 3r + c.
pub fn torus9() -> SimplicialComplex {
    let v = |r: usize, c: usize| 3 * (r % 3) + (c % 3);
    let mut cells: Vec<Vec<usize>> = Vec::new();
    for r in 0..3 {
        for c in 0..3 {
            let p = v(r, c);
            let q = v(r, c + 1);
            let s = v(r + 1, c);
            let t = v(r + 1, c + 1);
            cells.push(vec![p, s, t]);
            cells.push(vec![p, q, t]);
        }
    }
    SimplicialComplex::from_cells(cells).expect("torus cells are valid")
}

/// The Csaszar torus: 7 vertices, complete 1-skeleton, 14 triangles.
pub fn torus7() -> SimplicialComplex {
    let mut cells: Vec<Vec<usize>> = Vec::new();
    for i in 0..7 {
        cells.push(vec![i, (i + 1) % 7, (i + 3) % 7]);
        cells.push(vec![i, (i + 2) % 7, (i + 3) % 7]);
    }
    SimplicialComplex::from_cells(cells).expect("torus cells are valid")
}

/// The 6-vertex projective plane, the antipodal quotient of the icosahedron.
/// Exactly one of each complementary triple of vertices is a face.
pub fn projective_plane() -> SimplicialComplex {
    build(&[
        &[0, 1, 2],
        &[0, 1, 3],
        &[0, 2, 4],
        &[0, 3, 5],
        &[0, 4, 5],
        &[1, 2, 5],
        &[1, 3, 4],
        &[1, 4, 5],
        &[2, 3, 4],
        &[2, 3, 5],
    ])
}

/// Wedge of two circles and a 2-sphere, all sharing vertex 0.
pub fn wedge_two_circles_sphere() -> SimplicialComplex {
    build(&[
        // tetrahedron boundary on 0..3
        &[0, 1, 2],
        &[0, 1, 3],
        &[0, 2, 3],
        &[1, 2, 3],
        // hollow triangles through vertex 0
        &[0, 4],
        &[4, 5],
        &[0, 5],
        &[0, 6],
        &[6, 7],
        &[0, 7],
    ])
}

/// Two disjoint filled triangles.
pub fn two_triangles() -> SimplicialComplex {
    build(&[&[0, 1, 2], &[3, 4, 5]])
}

/// Annular strip of the 9-vertex torus: the six squares between grid rows 0
/// and 2 (no wraparound), twelve triangles in all.
pub fn torus9_strip_x() -> SimplicialComplex {
    let v = |r: usize, c: usize| 3 * (r % 3) + (c % 3);
    let mut cells: Vec<Vec<usize>> = Vec::new();
    for r in 0..2 {
        for c in 0..3 {
            cells.push(vec![v(r, c), v(r + 1, c), v(r + 1, c + 1)]);
            cells.push(vec![v(r, c), v(r, c + 1), v(r + 1, c + 1)]);
        }
    }
    SimplicialComplex::from_cells(cells).expect("strip cells are valid")
}

/// The complementary strip: the three squares wrapping from grid row 2 back to
/// row 0. Its intersection with [`torus9_strip_x`] is two disjoint circles.
pub fn torus9_strip_y() -> SimplicialComplex {
    let v = |r: usize, c: usize| 3 * (r % 3) + (c % 3);
    let mut cells: Vec<Vec<usize>> = Vec::new();
    for c in 0..3 {
        cells.push(vec![v(2, c), v(3, c), v(3, c + 1)]);
        cells.push(vec![v(2, c), v(2, c + 1), v(3, c + 1)]);
    }
    SimplicialComplex::from_cells(cells).expect("strip cells are valid")
}

/// A perfect gradient field on [`torus9`]: 25 pairs leaving exactly four
/// critical cells, the textbook minimum-saddle-saddle-maximum picture. Critical:
/// vertex 0, edges (0 1) and (0 3), triangle (0 2 3). Morse homology (1, 2, 1).
pub fn torus9_gradient_field() -> crate::morse::DiscreteVectorField {
    let pairs: [(&[usize], &[usize]); 25] = [
        (&[0, 2], &[0, 2, 8]),
        (&[0, 6], &[0, 1, 6]),
        (&[0, 8], &[0, 6, 8]),
        (&[1], &[1, 2]),
        (&[1, 4], &[0, 1, 4]),
        (&[1, 5], &[1, 2, 5]),
        (&[1, 7], &[1, 2, 7]),
        (&[2], &[2, 8]),
        (&[2, 5], &[2, 3, 5]),
        (&[2, 7], &[2, 7, 8]),
        (&[3], &[2, 3]),
        (&[3, 4], &[0, 3, 4]),
        (&[3, 5], &[3, 5, 6]),
        (&[3, 6], &[3, 6, 7]),
        (&[3, 7], &[3, 4, 7]),
        (&[4], &[0, 4]),
        (&[4, 5], &[1, 4, 5]),
        (&[4, 8], &[4, 7, 8]),
        (&[5], &[5, 6]),
        (&[5, 8], &[4, 5, 8]),
        (&[6], &[1, 6]),
        (&[6, 7], &[1, 6, 7]),
        (&[6, 8], &[5, 6, 8]),
        (&[7], &[4, 7]),
        (&[8], &[7, 8]),
    ];
    let view = torus9().boundary_matrices();
    crate::morse::DiscreteVectorField::from_pairs(
        &view,
        pairs.iter().map(|(a, b)| {
            (
                crate::complex::Cell::Simplex(Simplex::new(a.iter().copied()).unwrap()),
                crate::complex::Cell::Simplex(Simplex::new(b.iter().copied()).unwrap()),
            )
        }),
    )
    .expect("frozen pairs form a valid field")
}

/// Random face-closed complex with at most `max_cells` cells in total. Top
/// cells are sampled uniformly from subsets of a small vertex pool.
pub fn random_complex(
    rng: &mut impl Rng,
    max_vertices: usize,
    max_dim: usize,
    max_cells: usize,
) -> SimplicialComplex {
    let n = rng.gen_range(1..=max_vertices.max(1));
    let mut c = SimplicialComplex::new();
    c.insert_closed(&[rng.gen_range(0..n)]).unwrap();
    for _ in 0..4 * max_cells {
        if c.total_cells() >= max_cells {
            break;
        }
        let k = rng.gen_range(0..=max_dim.min(n - 1));
        let closure_size = (1usize << (k + 1)) - 1;
        if c.total_cells() + closure_size > max_cells {
            continue;
        }
        let vs: Vec<usize> = sample(rng, n, k + 1).into_vec();
        c.insert_closed(&vs).unwrap();
    }
    c
}

/// Random filtration of `complex`: cells take the maximum of their faces plus
/// a fresh non-negative increment, so values are monotone and mostly tie-free.
pub fn random_filtration(rng: &mut impl Rng, complex: &SimplicialComplex) -> Filtration {
    let mut values: std::collections::HashMap<Simplex, f64> = std::collections::HashMap::new();
    for s in complex.iter_cells() {
        let floor = s.facets().iter().map(|f| values[f]).fold(0.0f64, f64::max);
        values.insert(s.clone(), floor + rng.gen_range(0.0..0.5));
    }
    complex
        .filtration_by(|s| values[s])
        .expect("values are monotone by construction")
}
