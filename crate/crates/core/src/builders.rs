//! Filtration builders from geometric and image data: Vietoris-Rips, Cech,
//! 2-D Delaunay and alpha complexes, and cubical lower-star filtrations.

#![allow(clippy::needless_range_loop)]

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::complex::{Cell, ComplexError, ElementaryCube, Filtration, Simplex, SimplicialComplex};

#[derive(Error, Debug, Clone, PartialEq)]
pub enum BuilderError {
    #[error("line {line}: {message}")]
    Csv { line: usize, message: String },
    #[error("point {index} has {got} coordinates, expected {expected}")]
    MixedDimensions {
        index: usize,
        expected: usize,
        got: usize,
    },
    #[error("point {index} has a non-finite coordinate")]
    NonFinite { index: usize },
    #[error("row {row} has {got} entries in a {rows}-row matrix")]
    NotSquare { row: usize, got: usize, rows: usize },
    #[error("matrix is asymmetric at ({i}, {j})")]
    Asymmetric { i: usize, j: usize },
    #[error("matrix diagonal must be zero at {i}")]
    NonzeroDiagonal { i: usize },
    #[error("distance ({i}, {j}) must be finite and non-negative")]
    BadDistance { i: usize, j: usize },
    #[error("ambient dimension {got} exceeds the supported bound {cap}")]
    AmbientDimension { got: usize, cap: usize },
    #[error("need at least {need} points, got {got}")]
    TooFewPoints { need: usize, got: usize },
    #[error("points {i} and {j} coincide")]
    DuplicatePoint { i: usize, j: usize },
    #[error("all points are collinear")]
    Collinear,
    #[error("pgm: {0}")]
    Pgm(String),
    #[error("stacked slice {slice} does not match the first slice's size")]
    StackMismatch { slice: usize },
    #[error("image has no pixels")]
    EmptyImage,
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// Points in a common ambient dimension, all coordinates finite.
#[derive(Clone, Debug, PartialEq)]
pub struct PointCloud {
    points: Vec<Vec<f64>>,
}

impl PointCloud {
    pub fn new(points: Vec<Vec<f64>>) -> Result<PointCloud, BuilderError> {
        if let Some(first) = points.first() {
            let expected = first.len();
            for (index, p) in points.iter().enumerate() {
                if p.len() != expected {
                    return Err(BuilderError::MixedDimensions {
                        index,
                        expected,
                        got: p.len(),
                    });
                }
                if p.iter().any(|x| !x.is_finite()) {
                    return Err(BuilderError::NonFinite { index });
                }
            }
        }
        Ok(PointCloud { points })
    }

    /// One point per row, comma-separated, no header unless `skip_header`.
    /// Blank lines and lines starting with '#' are ignored.
    pub fn from_csv(text: &str, skip_header: bool) -> Result<PointCloud, BuilderError> {
        let mut rows = Vec::new();
        let mut data_rows_seen = 0usize;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            data_rows_seen += 1;
            if skip_header && data_rows_seen == 1 {
                continue;
            }
            let mut row = Vec::new();
            for field in line.split(',') {
                let field = field.trim();
                let v: f64 = field.parse().map_err(|_| BuilderError::Csv {
                    line: lineno + 1,
                    message: format!("bad number '{field}'"),
                })?;
                row.push(v);
            }
            rows.push(row);
        }
        PointCloud::new(rows)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.points.first().map_or(0, |p| p.len())
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i]
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn distance(&self, i: usize, j: usize) -> f64 {
        self.points[i]
            .iter()
            .zip(&self.points[j])
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }

    pub fn distance_matrix(&self) -> DistanceMatrix {
        let n = self.len();
        let mut d = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in i + 1..n {
                let v = self.distance(i, j);
                d[i][j] = v;
                d[j][i] = v;
            }
        }
        DistanceMatrix { d }
    }

    fn planar(&self) -> Result<Vec<[f64; 2]>, BuilderError> {
        if self.dim() != 2 {
            return Err(BuilderError::AmbientDimension {
                got: self.dim(),
                cap: 2,
            });
        }
        Ok(self.points.iter().map(|p| [p[0], p[1]]).collect())
    }
}

/// Symmetric non-negative matrix with zero diagonal. The triangle inequality is
/// not assumed.
#[derive(Clone, Debug, PartialEq)]
pub struct DistanceMatrix {
    d: Vec<Vec<f64>>,
}

impl DistanceMatrix {
    pub fn new(d: Vec<Vec<f64>>) -> Result<DistanceMatrix, BuilderError> {
        let rows = d.len();
        for (row, r) in d.iter().enumerate() {
            if r.len() != rows {
                return Err(BuilderError::NotSquare {
                    row,
                    got: r.len(),
                    rows,
                });
            }
        }
        for i in 0..rows {
            if d[i][i] != 0.0 {
                return Err(BuilderError::NonzeroDiagonal { i });
            }
            for j in 0..rows {
                if !d[i][j].is_finite() || d[i][j] < 0.0 {
                    return Err(BuilderError::BadDistance { i, j });
                }
                if d[i][j] != d[j][i] {
                    return Err(BuilderError::Asymmetric { i, j });
                }
            }
        }
        Ok(DistanceMatrix { d })
    }

    /// Square CSV matrix; comments and blank lines as in point-cloud CSV.
    pub fn from_csv(text: &str) -> Result<DistanceMatrix, BuilderError> {
        let mut rows = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut row = Vec::new();
            for field in line.split(',') {
                let field = field.trim();
                let v: f64 = field.parse().map_err(|_| BuilderError::Csv {
                    line: lineno + 1,
                    message: format!("bad number '{field}'"),
                })?;
                row.push(v);
            }
            rows.push(row);
        }
        DistanceMatrix::new(rows)
    }

    pub fn len(&self) -> usize {
        self.d.len()
    }

    pub fn is_empty(&self) -> bool {
        self.d.is_empty()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.d[i][j]
    }
}

/// Vietoris-Rips filtration: vertices at 0, edges at their distance when within
/// `max_scale`, higher simplices by the clique rule at the max of their edges
/// (the diameter convention).
pub fn rips_filtration(d: &DistanceMatrix, max_dim: usize, max_scale: f64) -> Filtration {
    let n = d.len();
    let mut cells: Vec<(Cell, f64)> = (0..n)
        .map(|i| (Cell::Simplex(Simplex::new([i]).unwrap()), 0.0))
        .collect();
    if max_dim == 0 {
        return Filtration::from_unsorted(cells).expect("vertex filtration is monotone");
    }
    let mut frontier: Vec<(Vec<usize>, f64)> = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if d.get(i, j) <= max_scale {
                frontier.push((vec![i, j], d.get(i, j)));
            }
        }
    }
    for dim in 1..=max_dim {
        for (vs, value) in &frontier {
            cells.push((
                Cell::Simplex(Simplex::new(vs.iter().copied()).unwrap()),
                *value,
            ));
        }
        if dim == max_dim {
            break;
        }
        let mut next = Vec::new();
        for (vs, value) in &frontier {
            let last = *vs.last().unwrap();
            'cand: for v in last + 1..n {
                let mut new_value = *value;
                for &u in vs {
                    let duv = d.get(u, v);
                    if duv > max_scale {
                        continue 'cand;
                    }
                    new_value = new_value.max(duv);
                }
                let mut grown = vs.clone();
                grown.push(v);
                next.push((grown, new_value));
            }
        }
        frontier = next;
    }
    Filtration::from_unsorted(cells).expect("clique values are monotone")
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Gaussian elimination with partial pivoting for the tiny systems circumball
/// solving needs. None when the matrix is numerically singular.
fn solve_linear(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for k in 0..n {
        let pivot_row = (k..n).max_by(|&i, &j| a[i][k].abs().total_cmp(&a[j][k].abs()))?;
        if a[pivot_row][k].abs() < 1e-12 {
            return None;
        }
        a.swap(k, pivot_row);
        b.swap(k, pivot_row);
        for i in k + 1..n {
            let f = a[i][k] / a[k][k];
            for j in k..n {
                a[i][j] -= f * a[k][j];
            }
            b[i] -= f * b[k];
        }
    }
    let mut x = vec![0.0; n];
    for k in (0..n).rev() {
        let s: f64 = (k + 1..n).map(|j| a[k][j] * x[j]).sum();
        x[k] = (b[k] - s) / a[k][k];
    }
    Some(x)
}

/// Ball with the given points on its boundary and center in their affine hull.
/// None when the points are affinely dependent.
fn circumball(pts: &[&[f64]]) -> Option<(Vec<f64>, f64)> {
    let p0 = pts[0];
    let k = pts.len() - 1;
    if k == 0 {
        return Some((p0.to_vec(), 0.0));
    }
    let rel: Vec<Vec<f64>> = pts[1..].iter().map(|p| sub(p, p0)).collect();
    let gram: Vec<Vec<f64>> = (0..k)
        .map(|i| (0..k).map(|j| dot(&rel[i], &rel[j])).collect())
        .collect();
    let rhs: Vec<f64> = (0..k).map(|i| dot(&rel[i], &rel[i]) / 2.0).collect();
    let x = solve_linear(gram, rhs)?;
    let mut center = p0.to_vec();
    for (xi, r) in x.iter().zip(&rel) {
        for (c, rc) in center.iter_mut().zip(r) {
            *c += xi * rc;
        }
    }
    let radius = dot(&sub(&center, p0), &sub(&center, p0)).sqrt();
    Some((center, radius))
}

/// Exact minimal enclosing ball by exhausting support subsets of at most
/// ambient-dimension + 1 points. The true ball is the circumball of such a
/// subset, so the smallest candidate that still encloses everything is it.
fn min_enclosing_ball(pts: &[&[f64]]) -> (Vec<f64>, f64) {
    let n = pts.len();
    let ambient = pts[0].len();
    let cap = (ambient + 1).min(n);
    let mut best: Option<(Vec<f64>, f64)> = None;
    for mask in 1u32..1 << n {
        if (mask.count_ones() as usize) > cap {
            continue;
        }
        let subset: Vec<&[f64]> = (0..n)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| pts[i])
            .collect();
        let Some((center, radius)) = circumball(&subset) else {
            continue;
        };
        let tol = radius + 1e-9 * (1.0 + radius);
        let encloses = pts
            .iter()
            .all(|p| dot(&sub(p, &center), &sub(p, &center)).sqrt() <= tol);
        if encloses && best.as_ref().is_none_or(|(_, r)| radius < *r) {
            best = Some((center, radius));
        }
    }
    best.expect("singleton subsets always give a candidate")
}

const CECH_AMBIENT_CAP: usize = 3;

/// Cech filtration: a simplex enters at the radius of the minimal ball
/// enclosing its vertices, the smallest scale at which their balls share a
/// point. Ambient dimension capped at 3 by the enclosing-ball implementation.
pub fn cech_filtration(
    p: &PointCloud,
    max_dim: usize,
    max_radius: f64,
) -> Result<Filtration, BuilderError> {
    if p.dim() > CECH_AMBIENT_CAP {
        return Err(BuilderError::AmbientDimension {
            got: p.dim(),
            cap: CECH_AMBIENT_CAP,
        });
    }
    let n = p.len();
    let mut cells: Vec<(Cell, f64)> = (0..n)
        .map(|i| (Cell::Simplex(Simplex::new([i]).unwrap()), 0.0))
        .collect();
    if max_dim == 0 {
        return Ok(Filtration::from_unsorted(cells).expect("vertex filtration is monotone"));
    }
    let mut frontier: Vec<(Vec<usize>, f64)> = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let r = p.distance(i, j) / 2.0;
            if r <= max_radius {
                frontier.push((vec![i, j], r));
            }
        }
    }
    for dim in 1..=max_dim {
        for (vs, value) in &frontier {
            cells.push((
                Cell::Simplex(Simplex::new(vs.iter().copied()).unwrap()),
                *value,
            ));
        }
        if dim == max_dim {
            break;
        }
        let by_vertices: HashMap<&[usize], f64> =
            frontier.iter().map(|(vs, v)| (vs.as_slice(), *v)).collect();
        let mut next = Vec::new();
        for (vs, _) in &frontier {
            let last = *vs.last().unwrap();
            'cand: for v in last + 1..n {
                for &u in vs {
                    if p.distance(u, v) / 2.0 > max_radius {
                        continue 'cand;
                    }
                }
                let mut grown = vs.clone();
                grown.push(v);
                // Enclosing-ball radii are monotone under inclusion; clamping to
                // every facet guards against last-ulp inversions. A facet absent
                // from the frontier fell past max_radius, so the coface must go
                // too to keep the complex face-closed.
                let mut floor = f64::NEG_INFINITY;
                let mut facet = Vec::with_capacity(grown.len() - 1);
                for skip in 0..grown.len() {
                    facet.clear();
                    facet.extend(
                        grown
                            .iter()
                            .enumerate()
                            .filter(|&(i, _)| i != skip)
                            .map(|(_, &u)| u),
                    );
                    match by_vertices.get(facet.as_slice()) {
                        Some(&fv) => floor = floor.max(fv),
                        None => continue 'cand,
                    }
                }
                let pts: Vec<&[f64]> = grown.iter().map(|&i| p.point(i)).collect();
                let (_, radius) = min_enclosing_ball(&pts);
                if radius <= max_radius {
                    next.push((grown, radius.max(floor)));
                }
            }
        }
        frontier = next;
    }
    Ok(Filtration::from_unsorted(cells).expect("enclosing-ball radii are monotone"))
}

const PRED_TOL: f64 = 1e-10;

fn orient2d(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> f64 {
    (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
}

fn det3(m: [[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

fn det4(m: [[f64; 4]; 4]) -> f64 {
    let mut out = 0.0;
    for col in 0..4 {
        let mut minor = [[0.0; 3]; 3];
        for (mi, row) in m.iter().enumerate().skip(1) {
            let mut mj = 0;
            for (j, &v) in row.iter().enumerate() {
                if j != col {
                    minor[mi - 1][mj] = v;
                    mj += 1;
                }
            }
        }
        let sign = if col % 2 == 0 { 1.0 } else { -1.0 };
        out += sign * m[0][col] * det3(minor);
    }
    out
}

fn circumcenter2d(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> Option<[f64; 2]> {
    let d = 2.0 * (a[0] * (b[1] - c[1]) + b[0] * (c[1] - a[1]) + c[0] * (a[1] - b[1]));
    if d.abs() < 1e-12 {
        return None;
    }
    let na = a[0] * a[0] + a[1] * a[1];
    let nb = b[0] * b[0] + b[1] * b[1];
    let nc = c[0] * c[0] + c[1] * c[1];
    let ux = (na * (b[1] - c[1]) + nb * (c[1] - a[1]) + nc * (a[1] - b[1])) / d;
    let uy = (na * (c[0] - b[0]) + nb * (a[0] - c[0]) + nc * (b[0] - a[0])) / d;
    Some([ux, uy])
}

/// Is point `p` inside the circumcircle of triangle (a, b, c)?
///
/// Determinant test with absolute tolerance; within tolerance the
/// lexicographically smallest index among the four points is treated as pushed
/// infinitesimally outward (away from the circumcenter of the other three) and
/// the decision becomes the sign of the determinant's directional derivative.
fn in_circle(pts: &[[f64; 2]], a: usize, b: usize, c: usize, p: usize) -> bool {
    let (b, c) = if orient2d(pts[a], pts[b], pts[c]) < 0.0 {
        (c, b)
    } else {
        (b, c)
    };
    let row = |i: usize| -> [f64; 4] {
        let [x, y] = pts[i];
        [x, y, x * x + y * y, 1.0]
    };
    let order = [a, b, c, p];
    let d = det4([row(a), row(b), row(c), row(p)]);
    if d.abs() > PRED_TOL {
        return d > 0.0;
    }
    let q = *order.iter().min().unwrap();
    let others: Vec<usize> = order.iter().copied().filter(|&i| i != q).collect();
    let Some(center) = circumcenter2d(pts[others[0]], pts[others[1]], pts[others[2]]) else {
        return false;
    };
    let u = [pts[q][0] - center[0], pts[q][1] - center[1]];
    let mut m = [row(a), row(b), row(c), row(p)];
    let qi = order.iter().position(|&i| i == q).unwrap();
    m[qi] = [u[0], u[1], 2.0 * (pts[q][0] * u[0] + pts[q][1] * u[1]), 0.0];
    let dd = det4(m);
    if dd.abs() < 1e-14 {
        return false;
    }
    dd > 0.0
}

/// A Delaunay triangulation: positively oriented triangles, each rotated so its
/// smallest index leads, listed in lexicographic order.
#[derive(Clone, Debug, PartialEq)]
pub struct Triangulation2D {
    points: Vec<[f64; 2]>,
    triangles: Vec<[usize; 3]>,
}

impl Triangulation2D {
    pub fn points(&self) -> &[[f64; 2]] {
        &self.points
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    /// Sorted vertex pairs of all triangle edges, deduplicated.
    pub fn edges(&self) -> Vec<[usize; 2]> {
        let mut out = BTreeSet::new();
        for t in &self.triangles {
            for (u, v) in [(t[0], t[1]), (t[1], t[2]), (t[0], t[2])] {
                out.insert([u.min(v), u.max(v)]);
            }
        }
        out.into_iter().collect()
    }

    /// Sorted edge -> indices into `triangles` of its incident triangles.
    pub fn adjacency(&self) -> BTreeMap<[usize; 2], Vec<usize>> {
        let mut out: BTreeMap<[usize; 2], Vec<usize>> = BTreeMap::new();
        for (ti, t) in self.triangles.iter().enumerate() {
            for (u, v) in [(t[0], t[1]), (t[1], t[2]), (t[0], t[2])] {
                out.entry([u.min(v), u.max(v)]).or_default().push(ti);
            }
        }
        out
    }

    pub fn to_complex(&self) -> SimplicialComplex {
        let mut c = SimplicialComplex::new();
        for i in 0..self.points.len() {
            c.insert_closed(&[i]).expect("vertex");
        }
        for t in &self.triangles {
            let mut vs = *t;
            vs.sort_unstable();
            c.insert_closed(&vs).expect("triangle");
        }
        c
    }

    pub fn circumradius(&self, ti: usize) -> f64 {
        let [a, b, c] = self.triangles[ti];
        let center = circumcenter2d(self.points[a], self.points[b], self.points[c])
            .expect("mesh triangles are non-degenerate");
        let dx = self.points[a][0] - center[0];
        let dy = self.points[a][1] - center[1];
        (dx * dx + dy * dy).sqrt()
    }
}

/// Rotates so the smallest index leads without disturbing orientation.
fn canonical_rotation(t: [usize; 3]) -> [usize; 3] {
    let k = (0..3).min_by_key(|&i| t[i]).unwrap();
    [t[k], t[(k + 1) % 3], t[(k + 2) % 3]]
}

/// Bowyer-Watson with a far super-triangle. `seed` drives the insertion-order
/// shuffle; the result is deterministic for a fixed seed and, away from
/// cocircular ties, independent of it.
pub fn delaunay_2d(p: &PointCloud, seed: u64) -> Result<Triangulation2D, BuilderError> {
    let points = p.planar()?;
    let n = points.len();
    if n < 3 {
        return Err(BuilderError::TooFewPoints { need: 3, got: n });
    }
    let mut seen: HashMap<(u64, u64), usize> = HashMap::new();
    for (i, pt) in points.iter().enumerate() {
        if let Some(&j) = seen.get(&(pt[0].to_bits(), pt[1].to_bits())) {
            return Err(BuilderError::DuplicatePoint { i: j, j: i });
        }
        seen.insert((pt[0].to_bits(), pt[1].to_bits()), i);
    }
    if points
        .iter()
        .all(|&q| orient2d(points[0], points[1], q).abs() <= PRED_TOL)
    {
        return Err(BuilderError::Collinear);
    }

    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for pt in &points {
        for k in 0..2 {
            lo[k] = lo[k].min(pt[k]);
            hi[k] = hi[k].max(pt[k]);
        }
    }
    let cx = (lo[0] + hi[0]) / 2.0;
    let cy = (lo[1] + hi[1]) / 2.0;
    let span = (hi[0] - lo[0]).max(hi[1] - lo[1]).max(1.0);
    let m = 64.0 * span;
    let mut pts = points.clone();
    pts.push([cx - 3.0 * m, cy - m]);
    pts.push([cx + 3.0 * m, cy - m]);
    pts.push([cx, cy + 3.0 * m]);

    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));

    let mut tris: BTreeSet<[usize; 3]> = BTreeSet::new();
    tris.insert(canonical_rotation(
        if orient2d(pts[n], pts[n + 1], pts[n + 2]) > 0.0 {
            [n, n + 1, n + 2]
        } else {
            [n, n + 2, n + 1]
        },
    ));

    for &pi in &order {
        let bad: Vec<[usize; 3]> = tris
            .iter()
            .filter(|t| in_circle(&pts, t[0], t[1], t[2], pi))
            .copied()
            .collect();
        let mut edge_count: BTreeMap<[usize; 2], usize> = BTreeMap::new();
        for t in &bad {
            for (u, v) in [(t[0], t[1]), (t[1], t[2]), (t[0], t[2])] {
                *edge_count.entry([u.min(v), u.max(v)]).or_insert(0) += 1;
            }
        }
        for t in &bad {
            tris.remove(t);
        }
        for ([u, v], count) in edge_count {
            if count != 1 {
                continue;
            }
            let t = if orient2d(pts[u], pts[v], pts[pi]) > 0.0 {
                [u, v, pi]
            } else {
                [u, pi, v]
            };
            tris.insert(canonical_rotation(t));
        }
    }

    let triangles: Vec<[usize; 3]> = tris
        .into_iter()
        .filter(|t| t.iter().all(|&v| v < n))
        .collect();
    Ok(Triangulation2D { points, triangles })
}

/// Alpha filtration over the Delaunay triangulation. Vertices at 0; a triangle
/// at its circumradius; an edge at half its length when Gabriel (diametral
/// circle empty of opposite vertices) and otherwise at the smallest incident
/// triangle value. At full scale the complex is the whole triangulation.
pub fn alpha_filtration_2d(p: &PointCloud, seed: u64) -> Result<Filtration, BuilderError> {
    let tri = delaunay_2d(p, seed)?;
    let pts = tri.points();
    let tri_values: Vec<f64> = (0..tri.triangles().len())
        .map(|ti| tri.circumradius(ti))
        .collect();
    let mut cells: Vec<(Cell, f64)> = (0..pts.len())
        .map(|i| (Cell::Simplex(Simplex::new([i]).unwrap()), 0.0))
        .collect();
    for ([u, v], incident) in tri.adjacency() {
        let dx = pts[u][0] - pts[v][0];
        let dy = pts[u][1] - pts[v][1];
        let half = (dx * dx + dy * dy).sqrt() / 2.0;
        let mid = [(pts[u][0] + pts[v][0]) / 2.0, (pts[u][1] + pts[v][1]) / 2.0];
        let gabriel = incident.iter().all(|&ti| {
            let opp = *tri.triangles()[ti]
                .iter()
                .find(|w| **w != u && **w != v)
                .unwrap();
            let ox = pts[opp][0] - mid[0];
            let oy = pts[opp][1] - mid[1];
            (ox * ox + oy * oy).sqrt() >= half
        });
        let value = if gabriel {
            half
        } else {
            incident
                .iter()
                .map(|&ti| tri_values[ti])
                .fold(f64::INFINITY, f64::min)
        };
        cells.push((Cell::Simplex(Simplex::new([u, v]).unwrap()), value));
    }
    for (ti, t) in tri.triangles().iter().enumerate() {
        let mut vs = *t;
        vs.sort_unstable();
        // A chord's half-length never exceeds the circumradius; the max only
        // absorbs last-ulp inversions between the two formulas.
        let edge_max = [(vs[0], vs[1]), (vs[0], vs[2]), (vs[1], vs[2])]
            .iter()
            .map(|&(u, v)| {
                cells
                    .iter()
                    .find(|(c, _)| matches!(c, Cell::Simplex(s) if s.vertices() == [u, v]))
                    .map(|(_, val)| *val)
                    .unwrap()
            })
            .fold(0.0, f64::max);
        cells.push((
            Cell::Simplex(Simplex::new(vs).unwrap()),
            tri_values[ti].max(edge_max),
        ));
    }
    Ok(Filtration::from_unsorted(cells).expect("alpha values are monotone"))
}

/// A grayscale image, 2-D or stacked 3-D; values are kept as reals.
#[derive(Clone, Debug, PartialEq)]
pub struct GrayscaleImage {
    width: usize,
    height: usize,
    depth: usize,
    data: Vec<f64>,
}

impl GrayscaleImage {
    pub fn new(
        width: usize,
        height: usize,
        depth: usize,
        data: Vec<f64>,
    ) -> Result<GrayscaleImage, BuilderError> {
        if width == 0 || height == 0 || depth == 0 {
            return Err(BuilderError::EmptyImage);
        }
        if data.len() != width * height * depth {
            return Err(BuilderError::Pgm(format!(
                "expected {} values, got {}",
                width * height * depth,
                data.len()
            )));
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(BuilderError::Pgm("non-finite pixel value".into()));
        }
        Ok(GrayscaleImage {
            width,
            height,
            depth,
            data,
        })
    }

    /// Parses PGM, both P2 (ASCII) and P5 (binary, 1 or 2 bytes per pixel
    /// big-endian by maxval). Header comments with '#' are honored.
    pub fn from_pgm(bytes: &[u8]) -> Result<GrayscaleImage, BuilderError> {
        let mut pos = 0usize;
        let mut next_token = |bytes: &[u8]| -> Result<String, BuilderError> {
            loop {
                while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
                    pos += 1;
                }
                if pos < bytes.len() && bytes[pos] == b'#' {
                    while pos < bytes.len() && bytes[pos] != b'\n' {
                        pos += 1;
                    }
                    continue;
                }
                break;
            }
            if pos >= bytes.len() {
                return Err(BuilderError::Pgm("unexpected end of file".into()));
            }
            let start = pos;
            while pos < bytes.len() && !bytes[pos].is_ascii_whitespace() {
                pos += 1;
            }
            Ok(String::from_utf8_lossy(&bytes[start..pos]).into_owned())
        };
        let magic = next_token(bytes)?;
        if magic != "P2" && magic != "P5" {
            return Err(BuilderError::Pgm(format!("bad magic '{magic}'")));
        }
        let parse_num = |tok: String| -> Result<usize, BuilderError> {
            tok.parse()
                .map_err(|_| BuilderError::Pgm(format!("bad header number '{tok}'")))
        };
        let width = parse_num(next_token(bytes)?)?;
        let height = parse_num(next_token(bytes)?)?;
        let maxval = parse_num(next_token(bytes)?)?;
        if maxval == 0 || maxval > 65535 {
            return Err(BuilderError::Pgm(format!("maxval {maxval} out of range")));
        }
        let count = width
            .checked_mul(height)
            .ok_or_else(|| BuilderError::Pgm("image too large".into()))?;
        let mut data = Vec::with_capacity(count);
        if magic == "P2" {
            for _ in 0..count {
                let v = parse_num(next_token(bytes)?)?;
                if v > maxval {
                    return Err(BuilderError::Pgm(format!("pixel {v} exceeds maxval")));
                }
                data.push(v as f64);
            }
        } else {
            // One whitespace byte separates the header from binary data.
            pos += 1;
            let bytes_per = if maxval < 256 { 1 } else { 2 };
            let need = count * bytes_per;
            if bytes.len() < pos + need {
                return Err(BuilderError::Pgm("truncated pixel data".into()));
            }
            for i in 0..count {
                let v = if bytes_per == 1 {
                    bytes[pos + i] as usize
                } else {
                    (bytes[pos + 2 * i] as usize) << 8 | bytes[pos + 2 * i + 1] as usize
                };
                if v > maxval {
                    return Err(BuilderError::Pgm(format!("pixel {v} exceeds maxval")));
                }
                data.push(v as f64);
            }
        }
        GrayscaleImage::new(width, height, 1, data)
    }

    /// Stacks single-slice images of a common size into a 3-D image.
    pub fn stack(slices: &[GrayscaleImage]) -> Result<GrayscaleImage, BuilderError> {
        let first = slices.first().ok_or(BuilderError::EmptyImage)?;
        let mut data = Vec::with_capacity(first.width * first.height * slices.len());
        for (slice, img) in slices.iter().enumerate() {
            if img.width != first.width || img.height != first.height || img.depth != 1 {
                return Err(BuilderError::StackMismatch { slice });
            }
            data.extend_from_slice(&img.data);
        }
        GrayscaleImage::new(first.width, first.height, slices.len(), data)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn value(&self, x: usize, y: usize, z: usize) -> f64 {
        self.data[(z * self.height + y) * self.width + x]
    }
}

/// Lower-star filtration of the image grid: pixels are vertices carrying their
/// own value, and every higher cube enters at the max over its corner pixels.
pub fn cubical_lower_star(img: &GrayscaleImage) -> Filtration {
    let dims = if img.depth() > 1 { 3 } else { 2 };
    let extent = [img.width(), img.height(), img.depth()];
    let mut cells: Vec<(Cell, f64)> = Vec::new();
    let mut coord = [0usize; 3];
    for z in 0..extent[2] {
        for y in 0..extent[1] {
            for x in 0..extent[0] {
                coord[0] = x;
                coord[1] = y;
                coord[2] = z;
                // Each subset of axes extends the base pixel by one step; the
                // cube exists when the extension stays inside the grid.
                'spans: for mask in 0..1u32 << dims {
                    let mut intervals = Vec::with_capacity(dims);
                    for axis in 0..dims {
                        let lo = coord[axis] as i64;
                        if mask >> axis & 1 == 1 {
                            if coord[axis] + 1 >= extent[axis] {
                                continue 'spans;
                            }
                            intervals.push((lo, lo + 1));
                        } else {
                            intervals.push((lo, lo));
                        }
                    }
                    let cube = ElementaryCube::new(intervals).expect("grid cube");
                    let mut value = f64::NEG_INFINITY;
                    for corner in cube.corners() {
                        value = value.max(img.value(
                            corner[0] as usize,
                            corner[1] as usize,
                            if dims == 3 { corner[2] as usize } else { 0 },
                        ));
                    }
                    cells.push((Cell::Cube(cube), value));
                }
            }
        }
    }
    Filtration::from_unsorted(cells).expect("corner maxima are monotone")
}
