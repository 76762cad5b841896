//! Discrete Morse theory after Forman: vector fields and gradient checks,
//! fields induced by functions, a greedy gradient builder, the Morse chain
//! complex with mod-2 V-path counting, and the Morse inequalities.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};

use serde::Serialize;
use thiserror::Error;

use crate::algebra::{rank_gf2, BitMatrix, BitVec};
use crate::complex::{Cell, ChainComplexView, Simplex, SymbolTable};

#[derive(Error, Debug, Clone, PartialEq)]
pub enum MorseError {
    #[error("field violations: {0:?}")]
    Invalid(Vec<FieldViolation>),
    #[error("closed V-path through {}", .0.describe())]
    NotGradient(VPath),
    #[error("no value assigned to cell {cell}")]
    MissingValue { cell: Cell },
    #[error("not a discrete Morse function at {cell}: {count} {kind} at or past its value")]
    NotMorse {
        cell: Cell,
        kind: &'static str,
        count: usize,
        offenders: Vec<Cell>,
    },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// One way a claimed vector field fails the definition.
#[derive(Debug, Clone, PartialEq)]
pub enum FieldViolation {
    /// A pair references a cell the complex does not contain.
    MissingCell { cell: Cell },
    /// The pair's face is not a codimension-1 face of its coface.
    NotFacet { face: Cell, coface: Cell },
    /// The cell occurs in more than one pair.
    Reused { cell: Cell },
}

/// A discrete vector field: a partial matching of cells with cofaces one
/// dimension up, each cell in at most one pair.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct DiscreteVectorField {
    pairs: BTreeMap<Cell, Cell>,
}

impl DiscreteVectorField {
    pub fn new() -> DiscreteVectorField {
        DiscreteVectorField::default()
    }

    /// Builds a field after checking it against the complex; the violation
    /// list, if any, comes back whole.
    pub fn from_pairs(
        view: &ChainComplexView,
        pairs: impl IntoIterator<Item = (Cell, Cell)>,
    ) -> Result<DiscreteVectorField, MorseError> {
        let field = DiscreteVectorField {
            pairs: pairs.into_iter().collect(),
        };
        let violations = validate_field(view, &field);
        if violations.is_empty() {
            Ok(field)
        } else {
            Err(MorseError::Invalid(violations))
        }
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Pairs in canonical (face-sorted) order.
    pub fn pairs(&self) -> impl Iterator<Item = (&Cell, &Cell)> {
        self.pairs.iter()
    }

    /// The coface this cell is pushed into, if it is a pair's source.
    pub fn image_of(&self, cell: &Cell) -> Option<&Cell> {
        self.pairs.get(cell)
    }

    pub fn is_source(&self, cell: &Cell) -> bool {
        self.pairs.contains_key(cell)
    }

    pub fn is_target(&self, cell: &Cell) -> bool {
        self.pairs.values().any(|c| c == cell)
    }

    /// Critical cells per dimension: everything not in any pair.
    pub fn critical_cells(&self, view: &ChainComplexView) -> Vec<Vec<Cell>> {
        let mut in_pair: HashSet<&Cell> = HashSet::new();
        for (a, b) in &self.pairs {
            in_pair.insert(a);
            in_pair.insert(b);
        }
        (0..=view.top_dim())
            .map(|k| {
                view.cells(k)
                    .iter()
                    .filter(|c| !in_pair.contains(c))
                    .cloned()
                    .collect()
            })
            .collect()
    }
}

/// An alternating cell sequence a0, b0, a1, b1, ..., closed when it returns to
/// its start.
#[derive(Debug, Clone, PartialEq)]
pub struct VPath {
    pub cells: Vec<Cell>,
}

impl VPath {
    fn describe(&self) -> String {
        self.cells
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(" -> ")
    }
}

/// Checks the two vector-field invariants, reporting every offending cell.
/// An empty list means the field is valid.
pub fn validate_field(view: &ChainComplexView, field: &DiscreteVectorField) -> Vec<FieldViolation> {
    let mut violations = Vec::new();
    let mut seen: HashMap<&Cell, usize> = HashMap::new();
    for (face, coface) in field.pairs() {
        for cell in [face, coface] {
            if view.position(cell).is_none() {
                violations.push(FieldViolation::MissingCell { cell: cell.clone() });
            }
            *seen.entry(cell).or_insert(0) += 1;
        }
        if coface.dim() != face.dim() + 1 || !coface.facets().contains(face) {
            violations.push(FieldViolation::NotFacet {
                face: face.clone(),
                coface: coface.clone(),
            });
        }
    }
    for (cell, count) in seen {
        if count > 1 {
            violations.push(FieldViolation::Reused { cell: cell.clone() });
        }
    }
    violations
}

/// Successors of k-cell `a` in the V-path digraph: the facets of V(a) other
/// than `a` itself.
fn vpath_successors(field: &DiscreteVectorField, a: &Cell) -> Vec<(Cell, Cell)> {
    match field.image_of(a) {
        None => Vec::new(),
        Some(b) => b
            .facets()
            .into_iter()
            .filter(|f| f != a)
            .map(|f| (b.clone(), f))
            .collect(),
    }
}

/// Theorem: a vector field is the gradient of some discrete Morse function
/// exactly when it has no nontrivial closed V-path. On failure the witness
/// path comes back in alternating face/coface order, first cell repeated last.
pub fn is_gradient(view: &ChainComplexView, field: &DiscreteVectorField) -> Result<(), VPath> {
    for k in 0..=view.top_dim() {
        // Iterative DFS with an explicit path so the witness falls out of the
        // stack when a back edge appears. 1 = in progress, 2 = done.
        let cells = view.cells(k);
        let index_of = |c: &Cell| view.position(c).expect("facet of a complex cell");
        let mut state = vec![0u8; cells.len()];
        for start in 0..cells.len() {
            if state[start] != 0 {
                continue;
            }
            // Stack entries: (cell index, unexplored successor indices).
            let succ = |i: usize| -> Vec<usize> {
                vpath_successors(field, &cells[i])
                    .into_iter()
                    .map(|(_, next)| index_of(&next))
                    .collect()
            };
            state[start] = 1;
            let mut stack: Vec<(usize, Vec<usize>)> = vec![(start, succ(start))];
            while let Some((_, succs)) = stack.last_mut() {
                let Some(next) = succs.pop() else {
                    let (i, _) = stack.pop().unwrap();
                    state[i] = 2;
                    continue;
                };
                match state[next] {
                    1 => {
                        // Back edge: unwind the stack into a closed V-path.
                        let from = stack.iter().position(|&(i, _)| i == next).unwrap();
                        let mut path = Vec::new();
                        for &(i, _) in &stack[from..] {
                            path.push(cells[i].clone());
                            path.push(
                                field
                                    .image_of(&cells[i])
                                    .expect("path cells are sources")
                                    .clone(),
                            );
                        }
                        path.push(cells[next].clone());
                        return Err(VPath { cells: path });
                    }
                    2 => continue,
                    _ => {
                        state[next] = 1;
                        let s = succ(next);
                        stack.push((next, s));
                    }
                }
            }
        }
    }
    Ok(())
}

/// The gradient field a discrete Morse function induces: pair a cell with the
/// unique coface whose value does not exceed it. Errors when either
/// discrete-Morse counting condition fails.
pub fn field_from_function(
    view: &ChainComplexView,
    f: &HashMap<Cell, f64>,
) -> Result<DiscreteVectorField, MorseError> {
    let value = |cell: &Cell| -> Result<f64, MorseError> {
        f.get(cell)
            .copied()
            .ok_or_else(|| MorseError::MissingValue { cell: cell.clone() })
    };
    // Facet -> cofaces adjacency, one pass over each dimension's boundary.
    let mut cofaces: HashMap<Cell, Vec<Cell>> = HashMap::new();
    for k in 0..=view.top_dim() {
        for cell in view.cells(k) {
            cofaces.entry(cell.clone()).or_default();
            for facet in cell.facets() {
                cofaces.entry(facet).or_default().push(cell.clone());
            }
        }
    }
    let mut pairs = Vec::new();
    for k in 0..=view.top_dim() {
        for cell in view.cells(k) {
            let fv = value(cell)?;
            let mut low_cofaces = Vec::new();
            for cand in cofaces.get(cell).into_iter().flatten() {
                if value(cand)? <= fv {
                    low_cofaces.push(cand.clone());
                }
            }
            if low_cofaces.len() > 1 {
                return Err(MorseError::NotMorse {
                    cell: cell.clone(),
                    kind: "cofaces with value at or below",
                    count: low_cofaces.len(),
                    offenders: low_cofaces,
                });
            }
            let mut high_faces = Vec::new();
            for facet in cell.facets() {
                if value(&facet)? >= fv {
                    high_faces.push(facet);
                }
            }
            if high_faces.len() > 1 {
                return Err(MorseError::NotMorse {
                    cell: cell.clone(),
                    kind: "faces with value at or above",
                    count: high_faces.len(),
                    offenders: high_faces,
                });
            }
            if let Some(coface) = low_cofaces.pop() {
                pairs.push((cell.clone(), coface));
            }
        }
    }
    DiscreteVectorField::from_pairs(view, pairs)
}

/// Greedy gradient construction: candidate (face, coface) pairs in ascending
/// (priority, face dimension, face, coface) order, accepting a pair when both
/// cells are free and acceptance keeps every V-path digraph acyclic. A pair's
/// priority is the larger of its cells' priorities; no map means all zero.
pub fn greedy_gradient(
    view: &ChainComplexView,
    priority: Option<&HashMap<Cell, f64>>,
) -> DiscreteVectorField {
    greedy_gradient_excluding(view, priority, &HashSet::new())
}

/// Greedy construction that additionally never pairs the given cells, leaving
/// them critical.
pub(crate) fn greedy_gradient_excluding(
    view: &ChainComplexView,
    priority: Option<&HashMap<Cell, f64>>,
    excluded: &HashSet<Cell>,
) -> DiscreteVectorField {
    let pri = |cell: &Cell| priority.and_then(|m| m.get(cell)).copied().unwrap_or(0.0);
    let mut candidates: Vec<(f64, usize, Cell, Cell)> = Vec::new();
    for k in 1..=view.top_dim() {
        for coface in view.cells(k) {
            if excluded.contains(coface) {
                continue;
            }
            for face in coface.facets() {
                if excluded.contains(&face) {
                    continue;
                }
                let p = pri(&face).max(pri(coface));
                candidates.push((p, k - 1, face, coface.clone()));
            }
        }
    }
    candidates.sort_by(|a, b| {
        a.0.total_cmp(&b.0)
            .then(a.1.cmp(&b.1))
            .then(a.2.cmp(&b.2))
            .then(a.3.cmp(&b.3))
    });

    let mut paired: HashSet<Cell> = HashSet::new();
    let mut pairs: BTreeMap<Cell, Cell> = BTreeMap::new();
    // Per-dimension digraph on face positions, grown a pair at a time; an
    // acceptance is rolled back if it closes a cycle.
    let mut edges: Vec<HashMap<usize, Vec<usize>>> = vec![HashMap::new(); view.top_dim() + 1];
    for (_, dim, face, coface) in candidates {
        if paired.contains(&face) || paired.contains(&coface) {
            continue;
        }
        let fi = view.position(&face).expect("facet of a complex cell");
        let outgoing: Vec<usize> = coface
            .facets()
            .into_iter()
            .filter(|f| *f != face)
            .map(|f| view.position(&f).expect("facet of a complex cell"))
            .collect();
        edges[dim].insert(fi, outgoing);
        if digraph_reaches(&edges[dim], fi, fi) {
            edges[dim].remove(&fi);
            continue;
        }
        paired.insert(face.clone());
        paired.insert(coface.clone());
        pairs.insert(face, coface);
    }
    DiscreteVectorField { pairs }
}

/// BFS reachability from -> to in the pair digraph, following the fixed
/// successor lists of accepted pairs.
fn digraph_reaches(edges: &HashMap<usize, Vec<usize>>, from: usize, to: usize) -> bool {
    let mut queue = VecDeque::from([from]);
    let mut seen = HashSet::from([from]);
    while let Some(v) = queue.pop_front() {
        for &w in edges.get(&v).into_iter().flatten() {
            if w == to {
                return true;
            }
            if seen.insert(w) {
                queue.push_back(w);
            }
        }
    }
    false
}

/// The Morse chain complex of a gradient field: critical cells generate, and
/// the boundary entry from critical coface to critical face is the mod-2 count
/// of V-paths between them.
#[derive(Clone, Debug)]
pub struct MorseComplexView {
    critical: Vec<Vec<Cell>>,
    boundaries: Vec<BitMatrix>,
}

impl MorseComplexView {
    pub fn top_dim(&self) -> usize {
        self.critical.len().saturating_sub(1)
    }

    pub fn critical(&self, k: usize) -> &[Cell] {
        self.critical.get(k).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn critical_counts(&self) -> Vec<usize> {
        self.critical.iter().map(Vec::len).collect()
    }

    /// Morse boundary matrix in dimension k, shaped like the chain view's.
    pub fn boundary_bits(&self, k: usize) -> BitMatrix {
        if k == 0 || k > self.top_dim() {
            let rows = if k == 0 {
                0
            } else {
                self.critical(k - 1).len()
            };
            let cols = if k == 0 { self.critical(0).len() } else { 0 };
            BitMatrix::zeros(rows, cols)
        } else {
            self.boundaries[k - 1].clone()
        }
    }

    pub fn homology_gf2(&self) -> Vec<usize> {
        let top = self.top_dim();
        let ranks: Vec<usize> = (0..=top + 1)
            .map(|k| {
                if k == 0 || k > top {
                    0
                } else {
                    rank_gf2(&self.boundaries[k - 1])
                }
            })
            .collect();
        (0..=top)
            .map(|k| self.critical(k).len() - ranks[k] - ranks[k + 1])
            .collect()
    }

    /// First dimension where the composite of consecutive boundaries is
    /// nonzero, if any.
    pub fn verify_dd_zero(&self) -> Result<(), usize> {
        for k in 2..=self.top_dim() {
            let a = &self.boundaries[k - 2];
            let b = &self.boundaries[k - 1];
            for j in 0..b.cols() {
                if !a.apply(&b.column(j)).is_zero() {
                    return Err(k);
                }
            }
        }
        Ok(())
    }
}

/// Builds the Morse complex. Rejects non-gradient fields with the witness.
pub fn morse_complex(
    view: &ChainComplexView,
    field: &DiscreteVectorField,
) -> Result<MorseComplexView, MorseError> {
    let violations = validate_field(view, field);
    if !violations.is_empty() {
        return Err(MorseError::Invalid(violations));
    }
    is_gradient(view, field).map_err(MorseError::NotGradient)?;
    let critical = field.critical_cells(view);
    let top = view.top_dim();

    let mut boundaries = Vec::new();
    for k in 1..=top {
        let crit_rows = &critical[k - 1];
        let row_index: HashMap<&Cell, usize> =
            crit_rows.iter().enumerate().map(|(i, c)| (c, i)).collect();
        // Parity vectors N(c): which critical (k-1)-cells the V-paths from c
        // reach, mod 2. Computed in dependency order over the gradient DAG.
        let cells = view.cells(k - 1);
        let index_of = |c: &Cell| view.position(c).expect("cell of the complex");
        let mut parity: Vec<Option<BitVec>> = vec![None; cells.len()];
        // Explicit work stack standing in for recursion.
        let mut work: Vec<usize> = (0..cells.len()).collect();
        while let Some(&ci) = work.last() {
            if parity[ci].is_some() {
                work.pop();
                continue;
            }
            let cell = &cells[ci];
            if let Some(&ri) = row_index.get(cell) {
                let mut v = BitVec::zeros(crit_rows.len());
                v.set(ri, true);
                parity[ci] = Some(v);
                work.pop();
                continue;
            }
            let succs = vpath_successors(field, cell);
            if succs.is_empty() {
                // Target cell: no V-path continues or ends here.
                parity[ci] = Some(BitVec::zeros(crit_rows.len()));
                work.pop();
                continue;
            }
            let pending: Vec<usize> = succs
                .iter()
                .map(|(_, next)| index_of(next))
                .filter(|&ni| parity[ni].is_none())
                .collect();
            if pending.is_empty() {
                let mut v = BitVec::zeros(crit_rows.len());
                for (_, next) in &succs {
                    v.xor_assign(parity[index_of(next)].as_ref().unwrap());
                }
                parity[ci] = Some(v);
                work.pop();
            } else {
                work.extend(pending);
            }
        }

        let crit_cols = &critical[k];
        let mut m = BitMatrix::zeros(crit_rows.len(), crit_cols.len());
        for (j, beta) in crit_cols.iter().enumerate() {
            let mut total = BitVec::zeros(crit_rows.len());
            for gamma in beta.facets() {
                total.xor_assign(parity[index_of(&gamma)].as_ref().unwrap());
            }
            for i in total.ones() {
                m.set(i, j, true);
            }
        }
        boundaries.push(m);
    }
    let out = MorseComplexView {
        critical,
        boundaries,
    };
    debug_assert_eq!(out.verify_dd_zero(), Ok(()));
    Ok(out)
}

/// The Morse inequality report: strong alternating inequalities in every
/// dimension plus the Euler characteristic identity.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MorseInequalityReport {
    pub critical_counts: Vec<usize>,
    pub betti_gf2: Vec<usize>,
    /// c_k >= beta_k per dimension.
    pub weak: Vec<bool>,
    /// c_k - c_{k-1} + ... >= beta_k - beta_{k-1} + ... per dimension.
    pub strong: Vec<bool>,
    /// Alternating sums of c and beta agree with chi.
    pub euler_matches: bool,
}

impl MorseInequalityReport {
    pub fn all_hold(&self) -> bool {
        self.euler_matches && self.weak.iter().all(|&b| b) && self.strong.iter().all(|&b| b)
    }
}

pub fn morse_inequalities(
    view: &ChainComplexView,
    field: &DiscreteVectorField,
) -> Result<MorseInequalityReport, MorseError> {
    let violations = validate_field(view, field);
    if !violations.is_empty() {
        return Err(MorseError::Invalid(violations));
    }
    is_gradient(view, field).map_err(MorseError::NotGradient)?;
    let critical_counts: Vec<usize> = field.critical_cells(view).iter().map(Vec::len).collect();
    let betti_gf2 = crate::homology::homology_gf2(view);
    let alt = |xs: &[usize], k: usize| -> i64 {
        (0..=k)
            .map(|i| {
                let sign = if (k - i).is_multiple_of(2) { 1 } else { -1 };
                sign * xs.get(i).copied().unwrap_or(0) as i64
            })
            .sum()
    };
    let top = view.top_dim();
    let weak = (0..=top)
        .map(|k| critical_counts[k] >= betti_gf2[k])
        .collect();
    let strong = (0..=top)
        .map(|k| alt(&critical_counts, k) >= alt(&betti_gf2, k))
        .collect();
    // alt(c, top) carries a global (-1)^top relative to the plain alternating
    // sum, so undo it before comparing with chi.
    let chi = view.euler_characteristic();
    let sign = if top.is_multiple_of(2) { 1 } else { -1 };
    let euler_matches = sign * alt(&critical_counts, top) == chi;
    Ok(MorseInequalityReport {
        critical_counts,
        betti_gf2,
        weak,
        strong,
        euler_matches,
    })
}

/// Parses the `face -> coface` pair-per-line field format. Cells use
/// simplex-list label syntax; '#' comments and blank lines are skipped.
pub fn parse_field_text(
    text: &str,
    symbols: &SymbolTable,
) -> Result<Vec<(Simplex, Simplex)>, MorseError> {
    let mut out = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let parse_err = |message: String| MorseError::Parse {
            line: lineno + 1,
            message,
        };
        let (lhs, rhs) = line
            .split_once("->")
            .ok_or_else(|| parse_err("expected 'face -> coface'".into()))?;
        let side = |s: &str| -> Result<Simplex, MorseError> {
            let ids: Vec<usize> = s
                .split_whitespace()
                .map(|label| {
                    symbols
                        .id(label)
                        .ok_or_else(|| parse_err(format!("unknown vertex '{label}'")))
                })
                .collect::<Result<_, _>>()?;
            if ids.is_empty() {
                return Err(parse_err("empty cell".into()));
            }
            Simplex::new(ids).map_err(|e| parse_err(e.to_string()))
        };
        out.push((side(lhs)?, side(rhs)?));
    }
    Ok(out)
}

/// Renders a field in the same format, pairs in canonical face order.
pub fn render_field_text(field: &DiscreteVectorField, symbols: &SymbolTable) -> String {
    let mut out = String::new();
    for (face, coface) in field.pairs() {
        let side = |c: &Cell| match c {
            Cell::Simplex(s) => s
                .vertices()
                .iter()
                .map(|&v| symbols.label(v))
                .collect::<Vec<_>>()
                .join(" "),
            Cell::Cube(q) => q.to_string(),
        };
        out.push_str(&side(face));
        out.push_str(" -> ");
        out.push_str(&side(coface));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn cell(vs: &[usize]) -> Cell {
        Cell::Simplex(Simplex::new(vs.iter().copied()).unwrap())
    }

    /// Exhaustive V-path oracle: enumerate every V-path by brute force up to
    /// length |cells| + 1 and report whether any is closed.
    fn has_closed_vpath_bruteforce(view: &ChainComplexView, field: &DiscreteVectorField) -> bool {
        for k in 0..=view.top_dim() {
            for start in view.cells(k) {
                // Walks of alternating cells; a repeat of the start closes.
                let mut frontier = vec![vec![start.clone()]];
                for _ in 0..view.cells(k).len() + 1 {
                    let mut next_frontier = Vec::new();
                    for path in &frontier {
                        let last = path.last().unwrap();
                        for (_, next) in vpath_successors(field, last) {
                            if next == *start && path.len() > 1 {
                                return true;
                            }
                            if next == *start {
                                continue;
                            }
                            let mut grown = path.clone();
                            grown.push(next);
                            next_frontier.push(grown);
                        }
                    }
                    if next_frontier.is_empty() {
                        break;
                    }
                    frontier = next_frontier;
                }
            }
        }
        false
    }

    #[test]
    fn validate_reports_each_violation() {
        let view = fixtures::hollow_triangle().boundary_matrices();
        let ok = DiscreteVectorField::from_pairs(&view, [(cell(&[0]), cell(&[0, 1]))]).unwrap();
        assert!(validate_field(&view, &ok).is_empty());

        // Reuse: vertex 0 in two pairs. BTreeMap collapses same-key pairs, so
        // reuse here means source of one and target of another's coface slot.
        let reused = DiscreteVectorField {
            pairs: [(cell(&[0]), cell(&[0, 1])), (cell(&[1]), cell(&[0, 1]))]
                .into_iter()
                .collect(),
        };
        let v = validate_field(&view, &reused);
        assert!(v
            .iter()
            .any(|x| matches!(x, FieldViolation::Reused { cell: c } if *c == cell(&[0, 1]))));

        let not_facet = DiscreteVectorField {
            pairs: [(cell(&[2]), cell(&[0, 1]))].into_iter().collect(),
        };
        let v = validate_field(&view, &not_facet);
        assert!(matches!(v.as_slice(), [FieldViolation::NotFacet { .. }]));

        let missing = DiscreteVectorField {
            pairs: [(cell(&[5]), cell(&[5, 6]))].into_iter().collect(),
        };
        let v = validate_field(&view, &missing);
        assert_eq!(
            v.iter()
                .filter(|x| matches!(x, FieldViolation::MissingCell { .. }))
                .count(),
            2
        );
    }

    #[test]
    fn gradient_detection_with_witness() {
        let view = fixtures::hollow_triangle().boundary_matrices();
        // Cyclic pairing around the triangle: 0->01, 1->12, 2->02 gives the
        // closed V-path 0 -> 1 -> 2 -> 0.
        let cyclic = DiscreteVectorField {
            pairs: [
                (cell(&[0]), cell(&[0, 1])),
                (cell(&[1]), cell(&[1, 2])),
                (cell(&[2]), cell(&[0, 2])),
            ]
            .into_iter()
            .collect(),
        };
        let witness = is_gradient(&view, &cyclic).unwrap_err();
        assert!(witness.cells.len() >= 6);
        assert_eq!(witness.cells.first(), witness.cells.last());
        assert!(has_closed_vpath_bruteforce(&view, &cyclic));

        let two = DiscreteVectorField {
            pairs: [(cell(&[0]), cell(&[0, 1])), (cell(&[1]), cell(&[1, 2]))]
                .into_iter()
                .collect(),
        };
        assert!(is_gradient(&view, &two).is_ok());
        assert!(!has_closed_vpath_bruteforce(&view, &two));
        let crit = two.critical_cells(&view);
        assert_eq!(crit[0], vec![cell(&[2])]);
        assert_eq!(crit[1], vec![cell(&[0, 2])]);

        assert!(is_gradient(&view, &DiscreteVectorField::new()).is_ok());
    }

    #[test]
    fn gradient_agrees_with_bruteforce_on_random_fields() {
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for trial in 0..60 {
            let complex = fixtures::random_complex(&mut rng, 6, 2, 12);
            let view = complex.boundary_matrices();
            // Random partial matching, not necessarily gradient.
            let mut pairs = Vec::new();
            let mut used: HashSet<Cell> = HashSet::new();
            for k in (1..=view.top_dim()).rev() {
                for coface in view.cells(k) {
                    if used.contains(coface) || rng.gen_bool(0.4) {
                        continue;
                    }
                    let facets = coface.facets();
                    let face = facets.choose(&mut rng).unwrap().clone();
                    if used.contains(&face) {
                        continue;
                    }
                    used.insert(coface.clone());
                    used.insert(face.clone());
                    pairs.push((face, coface.clone()));
                }
            }
            let field = DiscreteVectorField {
                pairs: pairs.into_iter().collect(),
            };
            assert!(validate_field(&view, &field).is_empty());
            let fast = is_gradient(&view, &field).is_ok();
            let slow = !has_closed_vpath_bruteforce(&view, &field);
            assert_eq!(fast, slow, "trial {trial}");
        }
    }

    #[test]
    fn function_induced_field() {
        let view = fixtures::hollow_triangle().boundary_matrices();
        // f = dim: nothing pairs.
        let by_dim: HashMap<Cell, f64> = (0..=view.top_dim())
            .flat_map(|k| view.cells(k).iter().map(move |c| (c.clone(), k as f64)))
            .collect();
        assert!(field_from_function(&view, &by_dim).unwrap().is_empty());

        // Worked values: pairs (1, 01) and (2, 12); 0 and 02 critical.
        let f: HashMap<Cell, f64> = [
            (cell(&[0]), 0.0),
            (cell(&[1]), 1.0),
            (cell(&[2]), 2.0),
            (cell(&[0, 1]), 0.5),
            (cell(&[1, 2]), 1.5),
            (cell(&[0, 2]), 3.0),
        ]
        .into_iter()
        .collect();
        let field = field_from_function(&view, &f).unwrap();
        assert_eq!(field.len(), 2);
        assert_eq!(field.image_of(&cell(&[1])), Some(&cell(&[0, 1])));
        assert_eq!(field.image_of(&cell(&[2])), Some(&cell(&[1, 2])));
        assert!(is_gradient(&view, &field).is_ok());

        // Two cofaces at or below one vertex: rejected.
        let mut bad = f.clone();
        bad.insert(cell(&[1, 2]), 0.5);
        bad.insert(cell(&[2]), 2.0);
        // vertex 2: cofaces 12 at 0.5 and 02 at 3.0 -> fine; vertex 1: cofaces
        // 01 at 0.5 and 12 at 0.5, both below 1.0 -> violation.
        let err = field_from_function(&view, &bad).unwrap_err();
        assert!(matches!(
            err,
            MorseError::NotMorse { cell: c, count: 2, .. } if c == cell(&[1])
        ));

        let mut missing = f;
        missing.remove(&cell(&[0, 2]));
        assert!(matches!(
            field_from_function(&view, &missing),
            Err(MorseError::MissingValue { .. })
        ));
    }

    #[test]
    fn greedy_on_small_complexes() {
        let tri = fixtures::triangle().boundary_matrices();
        let field = greedy_gradient(&tri, None);
        assert_eq!(field.len(), 3);
        assert!(is_gradient(&tri, &field).is_ok());
        let crit = field.critical_cells(&tri);
        assert_eq!(crit.iter().map(Vec::len).collect::<Vec<_>>(), vec![1, 0, 0]);

        let hollow = fixtures::hollow_triangle().boundary_matrices();
        let field = greedy_gradient(&hollow, None);
        assert_eq!(field.len(), 2);
        let crit = field.critical_cells(&hollow);
        assert_eq!(crit.iter().map(Vec::len).collect::<Vec<_>>(), vec![1, 1]);
    }

    #[test]
    fn greedy_always_gradient_on_corpus() {
        for complex in [
            fixtures::sphere2(),
            fixtures::torus9(),
            fixtures::projective_plane(),
            fixtures::wedge_two_circles_sphere(),
        ] {
            let view = complex.boundary_matrices();
            let field = greedy_gradient(&view, None);
            assert!(is_gradient(&view, &field).is_ok());
            let total: usize = field.critical_cells(&view).iter().map(Vec::len).sum();
            assert_eq!(total, view.total_cells() - 2 * field.len());
        }
    }

    #[test]
    fn morse_complex_empty_field_is_chain_complex() {
        let view = fixtures::projective_plane().boundary_matrices();
        let morse = morse_complex(&view, &DiscreteVectorField::new()).unwrap();
        assert_eq!(
            morse.critical_counts(),
            (0..=view.top_dim())
                .map(|k| view.cell_count(k))
                .collect::<Vec<_>>()
        );
        for k in 1..=view.top_dim() {
            let a = view.boundary_bits(k);
            let b = morse.boundary_bits(k);
            for i in 0..a.rows() {
                for j in 0..a.cols() {
                    assert_eq!(a.get(i, j), b.get(i, j));
                }
            }
        }
    }

    #[test]
    fn morse_homology_matches_simplicial() {
        for complex in [
            fixtures::sphere2(),
            fixtures::torus9(),
            fixtures::torus7(),
            fixtures::projective_plane(),
            fixtures::wedge_two_circles_sphere(),
            fixtures::circle(5),
        ] {
            let view = complex.boundary_matrices();
            let field = greedy_gradient(&view, None);
            let morse = morse_complex(&view, &field).unwrap();
            assert_eq!(morse.verify_dd_zero(), Ok(()));
            assert_eq!(
                morse.homology_gf2(),
                crate::homology::homology_gf2(&view),
                "complex with {} cells",
                view.total_cells()
            );
        }
    }

    #[test]
    fn hollow_triangle_two_pair_morse_complex() {
        let view = fixtures::hollow_triangle().boundary_matrices();
        let field = DiscreteVectorField {
            pairs: [(cell(&[0]), cell(&[0, 1])), (cell(&[1]), cell(&[1, 2]))]
                .into_iter()
                .collect(),
        };
        let morse = morse_complex(&view, &field).unwrap();
        assert_eq!(morse.critical_counts(), vec![1, 1]);
        // Two V-paths from the edge's endpoints both reach vertex 2: parity 0.
        assert!(!morse.boundary_bits(1).get(0, 0));
        assert_eq!(morse.homology_gf2(), vec![1, 1]);
    }

    #[test]
    fn inequalities_reports() {
        let hollow = fixtures::hollow_triangle().boundary_matrices();
        let report = morse_inequalities(&hollow, &DiscreteVectorField::new()).unwrap();
        assert_eq!(report.critical_counts, vec![3, 3]);
        assert_eq!(report.betti_gf2, vec![1, 1]);
        assert!(report.all_hold());

        let s2 = fixtures::sphere2().boundary_matrices();
        let field = greedy_gradient(&s2, None);
        let report = morse_inequalities(&s2, &field).unwrap();
        assert!(report.critical_counts[0] >= 1 && report.critical_counts[2] >= 1);
        assert!(report.all_hold());
        let alt: i64 = report
            .critical_counts
            .iter()
            .enumerate()
            .map(|(i, &c)| if i % 2 == 0 { c as i64 } else { -(c as i64) })
            .sum();
        assert_eq!(alt, 2);
    }

    #[test]
    fn field_text_round_trip() {
        let complex = fixtures::hollow_triangle();
        let view = complex.boundary_matrices();
        let symbols = SymbolTable::numeric(3);
        let text = "0 -> 0 1\n# comment\n1 -> 1 2\n";
        let pairs = parse_field_text(text, &symbols).unwrap();
        let field = DiscreteVectorField::from_pairs(
            &view,
            pairs
                .into_iter()
                .map(|(a, b)| (Cell::Simplex(a), Cell::Simplex(b))),
        )
        .unwrap();
        assert_eq!(field.len(), 2);
        let rendered = render_field_text(&field, &symbols);
        assert_eq!(rendered, "0 -> 0 1\n1 -> 1 2\n");
        assert!(matches!(
            parse_field_text("0 - 1", &symbols),
            Err(MorseError::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_field_text("z -> z w", &symbols),
            Err(MorseError::Parse { .. })
        ));
    }
}
