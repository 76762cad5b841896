//! Filtrations: totally ordered cells with non-decreasing values.

use std::collections::HashMap;

use super::{Cell, ChainComplexView, ComplexError};

/// A filtration of a face-closed complex. Invariants, enforced on construction:
/// every facet of a cell appears strictly earlier, values never decrease along
/// the order, and every value is finite.
#[derive(Clone, Debug, PartialEq)]
pub struct Filtration {
    cells: Vec<(Cell, f64)>,
    positions: HashMap<Cell, usize>,
}

impl Filtration {
    /// Validates an explicitly ordered sequence.
    pub fn new(cells: Vec<(Cell, f64)>) -> Result<Filtration, ComplexError> {
        let mut positions = HashMap::with_capacity(cells.len());
        for (i, (cell, value)) in cells.iter().enumerate() {
            if !value.is_finite() {
                return Err(ComplexError::NonFiniteValue {
                    cell: cell.clone(),
                    value: *value,
                });
            }
            if i > 0 && *value < cells[i - 1].1 {
                return Err(ComplexError::ValuesNotSorted { position: i });
            }
            for face in cell.facets() {
                if !positions.contains_key(&face) {
                    return Err(ComplexError::FaceAfterCoface {
                        cell: cell.clone(),
                        face,
                    });
                }
            }
            if positions.insert(cell.clone(), i).is_some() {
                return Err(ComplexError::DuplicateCell { cell: cell.clone() });
            }
        }
        Ok(Filtration { cells, positions })
    }

    /// Sorts cells by the canonical tie-break (value, dimension, lexicographic
    /// cell) and validates the result. The cell set must be face-closed and the
    /// values monotone under inclusion; violations are reported with the
    /// offending pair named.
    pub fn from_unsorted(mut cells: Vec<(Cell, f64)>) -> Result<Filtration, ComplexError> {
        for (cell, value) in &cells {
            if !value.is_finite() {
                return Err(ComplexError::NonFiniteValue {
                    cell: cell.clone(),
                    value: *value,
                });
            }
        }
        let values: HashMap<Cell, f64> = cells.iter().cloned().collect();
        for (cell, value) in &cells {
            for face in cell.facets() {
                match values.get(&face) {
                    None => {
                        return Err(ComplexError::FaceAfterCoface {
                            cell: cell.clone(),
                            face,
                        })
                    }
                    Some(&fv) if fv > *value => {
                        return Err(ComplexError::NonMonotone {
                            face,
                            coface: cell.clone(),
                            low: fv,
                            high: *value,
                        })
                    }
                    _ => {}
                }
            }
        }
        cells.sort_by(|(ca, va), (cb, vb)| {
            va.partial_cmp(vb)
                .expect("values are finite")
                .then_with(|| ca.dim().cmp(&cb.dim()))
                .then_with(|| ca.cmp(cb))
        });
        Filtration::new(cells)
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn cell(&self, i: usize) -> &Cell {
        &self.cells[i].0
    }

    pub fn value(&self, i: usize) -> f64 {
        self.cells[i].1
    }

    pub fn iter(&self) -> impl Iterator<Item = &(Cell, f64)> {
        self.cells.iter()
    }

    pub fn position(&self, cell: &Cell) -> Option<usize> {
        self.positions.get(cell).copied()
    }

    pub fn max_dim(&self) -> usize {
        self.cells.iter().map(|(c, _)| c.dim()).max().unwrap_or(0)
    }

    /// Positions of the facets of the i-th cell, ascending.
    pub fn facet_positions(&self, i: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self.cells[i]
            .0
            .facets()
            .iter()
            .map(|f| self.positions[f])
            .collect();
        out.sort_unstable();
        out
    }

    /// Re-values every cell through `f` and re-sorts canonically. Fails when the
    /// new values are not monotone under inclusion.
    pub fn reweighted(
        &self,
        mut f: impl FnMut(&Cell, f64) -> f64,
    ) -> Result<Filtration, ComplexError> {
        Filtration::from_unsorted(
            self.cells
                .iter()
                .map(|(c, v)| (c.clone(), f(c, *v)))
                .collect(),
        )
    }

    /// Like [`Filtration::reweighted`], but afterwards raises every cell to the
    /// maximum of its faces' values, which restores monotonicity. Cells are
    /// visited in dimension order so the adjustment propagates upward.
    pub fn reweighted_monotone(&self, mut f: impl FnMut(&Cell, f64) -> f64) -> Filtration {
        let mut by_dim: Vec<(Cell, f64)> = self
            .cells
            .iter()
            .map(|(c, v)| (c.clone(), f(c, *v)))
            .collect();
        by_dim.sort_by(|a, b| a.0.dim().cmp(&b.0.dim()).then_with(|| a.0.cmp(&b.0)));
        let mut values: HashMap<Cell, f64> = HashMap::with_capacity(by_dim.len());
        for (cell, v) in &mut by_dim {
            let floor = cell
                .facets()
                .iter()
                .map(|f| values[f])
                .fold(f64::NEG_INFINITY, f64::max);
            if floor > *v {
                *v = floor;
            }
            values.insert(cell.clone(), *v);
        }
        Filtration::from_unsorted(by_dim).expect("monotonized values sort cleanly")
    }

    /// Chain-complex view of the complete complex (the final sublevel set).
    pub fn to_view(&self) -> ChainComplexView {
        let top = self.max_dim();
        let mut cells: Vec<Vec<Cell>> = vec![Vec::new(); top + 1];
        for (c, _) in &self.cells {
            cells[c.dim()].push(c.clone());
        }
        for row in &mut cells {
            row.sort();
        }
        ChainComplexView::from_sorted_cells(cells)
    }
}
