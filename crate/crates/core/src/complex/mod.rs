//! Complexes, chain-complex views, and filtrations.
//!
//! Simplicial and cubical complexes are face-closed by construction: inserting a
//! cell inserts its whole face closure, and the collections are immutable once
//! built up. Boundary matrices are indexed by the canonical per-dimension cell
//! order (ascending lexicographic).

mod cubical;
mod filtration;
mod simplex;
mod text;

use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

use crate::algebra::{BitMatrix, SparseIntMatrix};

pub use cubical::ElementaryCube;
pub use filtration::Filtration;
pub use simplex::Simplex;
pub use text::{
    parse_complex, parse_complex_with, parse_filtration, render_filtration, ParsedComplex,
    SymbolTable,
};

#[derive(Error, Debug, Clone, PartialEq)]
pub enum ComplexError {
    #[error("simplex has repeated vertex {vertex}")]
    RepeatedVertex { vertex: usize },
    #[error("a simplex needs at least one vertex")]
    EmptySimplex,
    #[error("interval [{lo},{hi}] is neither degenerate nor unit")]
    BadInterval { lo: i64, hi: i64 },
    #[error("a cube needs at least one interval")]
    EmptyCube,
    #[error("cube {cell} does not match the ambient dimension {expected}")]
    AmbientMismatch {
        cell: ElementaryCube,
        expected: usize,
    },
    #[error("cell {cell} has no filtration value")]
    MissingValue { cell: Cell },
    #[error("filtration value {value} of {cell} is not finite")]
    NonFiniteValue { cell: Cell, value: f64 },
    #[error("face {face} has value {low} but its coface {coface} has smaller value {high}")]
    NonMonotone {
        face: Cell,
        coface: Cell,
        low: f64,
        high: f64,
    },
    #[error("cell {cell} appears before its face {face}")]
    FaceAfterCoface { cell: Cell, face: Cell },
    #[error("cell {cell} appears twice")]
    DuplicateCell { cell: Cell },
    #[error("filtration values decrease at position {position}")]
    ValuesNotSorted { position: usize },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// A cell of either kind; the common currency of filtrations and chain views.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Cell {
    Simplex(Simplex),
    Cube(ElementaryCube),
}

impl Cell {
    pub fn dim(&self) -> usize {
        match self {
            Cell::Simplex(s) => s.dim(),
            Cell::Cube(c) => c.dim(),
        }
    }

    pub fn facets(&self) -> Vec<Cell> {
        match self {
            Cell::Simplex(s) => s.facets().into_iter().map(Cell::Simplex).collect(),
            Cell::Cube(c) => c.facets().into_iter().map(Cell::Cube).collect(),
        }
    }

    pub fn boundary(&self) -> Vec<(i8, Cell)> {
        match self {
            Cell::Simplex(s) => s
                .boundary()
                .into_iter()
                .map(|(sign, f)| (sign, Cell::Simplex(f)))
                .collect(),
            Cell::Cube(c) => c
                .boundary()
                .into_iter()
                .map(|(sign, f)| (sign, Cell::Cube(f)))
                .collect(),
        }
    }

    pub fn as_simplex(&self) -> Option<&Simplex> {
        match self {
            Cell::Simplex(s) => Some(s),
            Cell::Cube(_) => None,
        }
    }

    pub fn as_cube(&self) -> Option<&ElementaryCube> {
        match self {
            Cell::Cube(c) => Some(c),
            Cell::Simplex(_) => None,
        }
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Simplex(s) => s.fmt(f),
            Cell::Cube(c) => c.fmt(f),
        }
    }
}

impl From<Simplex> for Cell {
    fn from(s: Simplex) -> Cell {
        Cell::Simplex(s)
    }
}

impl From<ElementaryCube> for Cell {
    fn from(c: ElementaryCube) -> Cell {
        Cell::Cube(c)
    }
}

/// Face-closed simplicial complex with canonically ordered cells.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SimplicialComplex {
    dims: Vec<Vec<Simplex>>,
    members: HashSet<Simplex>,
}

impl SimplicialComplex {
    pub fn new() -> Self {
        SimplicialComplex::default()
    }

    /// Builds a complex from top cells given as vertex lists.
    pub fn from_cells<I, V>(cells: I) -> Result<Self, ComplexError>
    where
        I: IntoIterator<Item = V>,
        V: AsRef<[usize]>,
    {
        let mut c = SimplicialComplex::new();
        for cell in cells {
            c.insert_closed(cell.as_ref())?;
        }
        Ok(c)
    }

    /// Inserts a simplex together with its entire face closure. Re-inserting is a
    /// no-op, so the operation is idempotent.
    pub fn insert_closed(&mut self, vertices: &[usize]) -> Result<Simplex, ComplexError> {
        let s = Simplex::new(vertices.iter().copied())?;
        for face in s.faces() {
            self.insert_raw(face);
        }
        Ok(s)
    }

    pub fn insert_simplex(&mut self, s: &Simplex) {
        for face in s.faces() {
            self.insert_raw(face);
        }
    }

    fn insert_raw(&mut self, s: Simplex) {
        if self.members.contains(&s) {
            return;
        }
        let d = s.dim();
        while self.dims.len() <= d {
            self.dims.push(Vec::new());
        }
        let row = &mut self.dims[d];
        let at = row.binary_search(&s).unwrap_err();
        row.insert(at, s.clone());
        self.members.insert(s);
    }

    /// Top dimension; `None` for the empty complex.
    pub fn dim(&self) -> Option<usize> {
        self.dims.iter().rposition(|d| !d.is_empty())
    }

    /// Cells of dimension `k` in canonical (lexicographic) order.
    pub fn cells(&self, k: usize) -> &[Simplex] {
        self.dims.get(k).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn cell_count(&self, k: usize) -> usize {
        self.cells(k).len()
    }

    pub fn total_cells(&self) -> usize {
        self.dims.iter().map(Vec::len).sum()
    }

    pub fn contains(&self, s: &Simplex) -> bool {
        self.members.contains(s)
    }

    /// Ordinal of `s` among the cells of its dimension.
    pub fn position(&self, s: &Simplex) -> Option<usize> {
        self.cells(s.dim()).binary_search(s).ok()
    }

    /// All cells, dimension ascending, lexicographic within a dimension.
    pub fn iter_cells(&self) -> impl Iterator<Item = &Simplex> {
        self.dims.iter().flatten()
    }

    pub fn vertices(&self) -> impl Iterator<Item = usize> + '_ {
        self.cells(0).iter().map(|s| s.vertices()[0])
    }

    /// Cofacets (codimension-one cofaces) of `s` inside this complex.
    pub fn cofacets(&self, s: &Simplex) -> Vec<Simplex> {
        let mut out = Vec::new();
        for v in self.vertices() {
            if s.has_vertex(v) {
                continue;
            }
            let mut vs: Vec<usize> = s.vertices().to_vec();
            vs.push(v);
            if let Ok(candidate) = Simplex::new(vs) {
                if self.contains(&candidate) {
                    out.push(candidate);
                }
            }
        }
        out.sort();
        out
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.dims
            .iter()
            .enumerate()
            .map(|(k, cells)| {
                let count = cells.len() as i64;
                if k % 2 == 0 {
                    count
                } else {
                    -count
                }
            })
            .sum()
    }

    pub fn boundary_matrices(&self) -> ChainComplexView {
        let cells: Vec<Vec<Cell>> = self
            .dims
            .iter()
            .map(|row| row.iter().cloned().map(Cell::Simplex).collect())
            .collect();
        ChainComplexView::from_sorted_cells(cells)
    }

    pub fn is_subcomplex_of(&self, other: &SimplicialComplex) -> bool {
        self.iter_cells().all(|s| other.contains(s))
    }

    pub fn union(&self, other: &SimplicialComplex) -> SimplicialComplex {
        let mut out = self.clone();
        for s in other.iter_cells() {
            out.insert_raw(s.clone());
        }
        out
    }

    pub fn intersection(&self, other: &SimplicialComplex) -> SimplicialComplex {
        let mut out = SimplicialComplex::new();
        for s in self.iter_cells() {
            if other.contains(s) {
                out.insert_raw(s.clone());
            }
        }
        out
    }

    /// Filtration with per-cell values from `f`, ordered by the canonical
    /// tie-break (value, dimension, lexicographic cell).
    pub fn filtration_by(
        &self,
        mut f: impl FnMut(&Simplex) -> f64,
    ) -> Result<Filtration, ComplexError> {
        let cells: Vec<(Cell, f64)> = self
            .iter_cells()
            .map(|s| (Cell::Simplex(s.clone()), f(s)))
            .collect();
        Filtration::from_unsorted(cells)
    }
}

/// Face-closed cubical complex with canonically ordered cells.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CubicalComplex {
    dims: Vec<Vec<ElementaryCube>>,
    members: HashSet<ElementaryCube>,
    ambient: Option<usize>,
}

impl CubicalComplex {
    pub fn new() -> Self {
        CubicalComplex::default()
    }

    pub fn insert_closed(&mut self, cube: &ElementaryCube) -> Result<(), ComplexError> {
        match self.ambient {
            None => self.ambient = Some(cube.ambient_dim()),
            Some(a) => {
                if a != cube.ambient_dim() {
                    return Err(ComplexError::AmbientMismatch {
                        cell: cube.clone(),
                        expected: a,
                    });
                }
            }
        }
        for face in cube.faces() {
            self.insert_raw(face);
        }
        Ok(())
    }

    fn insert_raw(&mut self, c: ElementaryCube) {
        if self.members.contains(&c) {
            return;
        }
        let d = c.dim();
        while self.dims.len() <= d {
            self.dims.push(Vec::new());
        }
        let row = &mut self.dims[d];
        let at = row.binary_search(&c).unwrap_err();
        row.insert(at, c.clone());
        self.members.insert(c);
    }

    pub fn dim(&self) -> Option<usize> {
        self.dims.iter().rposition(|d| !d.is_empty())
    }

    pub fn cells(&self, k: usize) -> &[ElementaryCube] {
        self.dims.get(k).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn cell_count(&self, k: usize) -> usize {
        self.cells(k).len()
    }

    pub fn total_cells(&self) -> usize {
        self.dims.iter().map(Vec::len).sum()
    }

    pub fn contains(&self, c: &ElementaryCube) -> bool {
        self.members.contains(c)
    }

    pub fn iter_cells(&self) -> impl Iterator<Item = &ElementaryCube> {
        self.dims.iter().flatten()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.dims
            .iter()
            .enumerate()
            .map(|(k, cells)| {
                let count = cells.len() as i64;
                if k % 2 == 0 {
                    count
                } else {
                    -count
                }
            })
            .sum()
    }

    pub fn boundary_matrices(&self) -> ChainComplexView {
        let cells: Vec<Vec<Cell>> = self
            .dims
            .iter()
            .map(|row| row.iter().cloned().map(Cell::Cube).collect())
            .collect();
        ChainComplexView::from_sorted_cells(cells)
    }

    pub fn filtration_by(
        &self,
        mut f: impl FnMut(&ElementaryCube) -> f64,
    ) -> Result<Filtration, ComplexError> {
        let cells: Vec<(Cell, f64)> = self
            .iter_cells()
            .map(|c| (Cell::Cube(c.clone()), f(c)))
            .collect();
        Filtration::from_unsorted(cells)
    }
}

/// Per-dimension boundary matrices plus the cell labels indexing them.
///
/// `boundary(k)` is the matrix A_k of the boundary map from k-chains to
/// (k-1)-chains, with one column per k-cell and one row per (k-1)-cell, both in
/// canonical order.
#[derive(Clone, Debug)]
pub struct ChainComplexView {
    cells: Vec<Vec<Cell>>,
    boundaries: Vec<SparseIntMatrix>,
}

impl ChainComplexView {
    /// Builds the view from per-dimension cell lists that are already sorted and
    /// face-closed.
    pub(crate) fn from_sorted_cells(cells: Vec<Vec<Cell>>) -> ChainComplexView {
        let mut boundaries = Vec::new();
        for k in 1..cells.len() {
            let rows = cells[k - 1].len();
            let cols = cells[k].len();
            let mut m = SparseIntMatrix::new(rows, cols);
            for (j, cell) in cells[k].iter().enumerate() {
                for (sign, face) in cell.boundary() {
                    let i = cells[k - 1]
                        .binary_search(&face)
                        .expect("face closure guarantees the facet is present");
                    // Cubical top/bottom pairs never collide, and simplex facets
                    // are distinct, so plain set is safe here.
                    m.set(i, j, i64::from(sign));
                }
            }
            boundaries.push(m);
        }
        ChainComplexView { cells, boundaries }
    }

    /// Top dimension of the underlying complex; 0 for an empty view.
    pub fn top_dim(&self) -> usize {
        self.cells.len().saturating_sub(1)
    }

    pub fn cells(&self, k: usize) -> &[Cell] {
        self.cells.get(k).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn cell_count(&self, k: usize) -> usize {
        self.cells(k).len()
    }

    pub fn total_cells(&self) -> usize {
        self.cells.iter().map(Vec::len).sum()
    }

    /// Ordinal of a cell within its dimension's canonical order.
    pub fn position(&self, cell: &Cell) -> Option<usize> {
        self.cells.get(cell.dim())?.binary_search(cell).ok()
    }

    /// Boundary matrix A_k for 1 <= k <= top_dim.
    pub fn boundary(&self, k: usize) -> Option<&SparseIntMatrix> {
        if k == 0 {
            return None;
        }
        self.boundaries.get(k - 1)
    }

    /// A_k reduced mod 2; out-of-range dimensions give an all-zero matrix of the
    /// right shape so callers can treat the chain complex as extended by zeros.
    pub fn boundary_bits(&self, k: usize) -> BitMatrix {
        match self.boundary(k) {
            Some(m) => m.to_bits(),
            None => {
                if k == 0 {
                    BitMatrix::zeros(0, self.cell_count(0))
                } else {
                    BitMatrix::zeros(self.cell_count(k - 1), 0)
                }
            }
        }
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.cells
            .iter()
            .enumerate()
            .map(|(k, cells)| {
                let count = cells.len() as i64;
                if k % 2 == 0 {
                    count
                } else {
                    -count
                }
            })
            .sum()
    }

    /// Checks A_{k-1} * A_k = 0 for all k; returns the first failing k.
    pub fn verify_dd_zero(&self) -> Result<(), usize> {
        for k in 2..=self.top_dim() {
            let a = self.boundary(k - 1).unwrap();
            let b = self.boundary(k).unwrap();
            if !a.multiply(b).is_zero() {
                return Err(k);
            }
        }
        Ok(())
    }
}
