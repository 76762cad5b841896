//! Persistent homology over GF(2): matrix reduction in filtration order,
//! diagram queries, bottleneck distance, and diagram rendering.

use std::collections::HashMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::{Cell, Filtration, SymbolTable};

#[derive(Error, Debug, Clone, PartialEq)]
pub enum PersistenceError {
    #[error("query interval ({a}, {b}) is not ordered 0 <= a <= b <= {len}")]
    BadInterval { a: usize, b: usize, len: usize },
    #[error("bottleneck matching supports at most {cap} finite points per side, got {got}")]
    TooManyPoints { cap: usize, got: usize },
    #[error("diagram json: {0}")]
    Json(String),
}

/// One persistence pair. `death_index` is `None` for an essential class; the
/// interval is half-open, [birth_value, death_value).
#[derive(Clone, Debug, PartialEq)]
pub struct PersistencePair {
    pub dim: usize,
    pub birth_index: usize,
    pub death_index: Option<usize>,
    pub birth_value: f64,
    pub death_value: Option<f64>,
    pub creator: Cell,
    pub destroyer: Option<Cell>,
}

impl PersistencePair {
    pub fn is_essential(&self) -> bool {
        self.death_index.is_none()
    }

    /// Death minus birth; infinite for essential classes.
    pub fn persistence(&self) -> f64 {
        self.death_value
            .map_or(f64::INFINITY, |d| d - self.birth_value)
    }
}

/// All pairs of a filtration, sorted by (dim, birth_index).
#[derive(Clone, Debug, Default)]
pub struct Diagram {
    pub pairs: Vec<PersistencePair>,
}

impl Diagram {
    /// Pairs of a single dimension, in birth order.
    pub fn in_dim(&self, k: usize) -> Vec<&PersistencePair> {
        self.pairs.iter().filter(|p| p.dim == k).collect()
    }

    pub fn max_dim(&self) -> usize {
        self.pairs.iter().map(|p| p.dim).max().unwrap_or(0)
    }
}

/// Standard column reduction in filtration order.
///
/// Column j holds the facet positions of cell j; reduce by xoring the owner of
/// the current low until the low is unclaimed or the column dies. A column that
/// reduces to zero creates a class; a nonzero column kills the class created at
/// its final low.
pub fn compute_persistence(filtration: &Filtration) -> Diagram {
    let n = filtration.len();
    // Sorted facet-position lists; symmetric difference keeps them sorted.
    let mut columns: Vec<Vec<usize>> = (0..n).map(|j| filtration.facet_positions(j)).collect();
    let mut owner: Vec<Option<usize>> = vec![None; n];
    let mut death_of: Vec<Option<usize>> = vec![None; n];
    let mut positive: Vec<bool> = vec![false; n];
    for j in 0..n {
        loop {
            let Some(&low) = columns[j].last() else {
                positive[j] = true;
                break;
            };
            match owner[low] {
                None => {
                    owner[low] = Some(j);
                    death_of[low] = Some(j);
                    break;
                }
                Some(i) => {
                    let other = std::mem::take(&mut columns[i]);
                    columns[j] = symmetric_difference(&columns[j], &other);
                    columns[i] = other;
                }
            }
        }
    }
    let mut pairs = Vec::new();
    for j in 0..n {
        if !positive[j] {
            continue;
        }
        let creator = filtration.cell(j).clone();
        let birth_value = filtration.value(j);
        let (death_index, death_value, destroyer) = match death_of[j] {
            Some(d) => (
                Some(d),
                Some(filtration.value(d)),
                Some(filtration.cell(d).clone()),
            ),
            None => (None, None, None),
        };
        pairs.push(PersistencePair {
            dim: creator.dim(),
            birth_index: j,
            death_index,
            birth_value,
            death_value,
            creator,
            destroyer,
        });
    }
    pairs.sort_by_key(|p| (p.dim, p.birth_index));
    Diagram { pairs }
}

fn symmetric_difference(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Persistent Betti number beta_k(a, b): classes born within the first `a`
/// cells that are still alive after the first `b` cells. Prefix indices, so
/// 0 <= a <= b <= len.
pub fn persistent_betti(
    diagram: &Diagram,
    len: usize,
    a: usize,
    b: usize,
    k: usize,
) -> Result<usize, PersistenceError> {
    if a > b || b > len {
        return Err(PersistenceError::BadInterval { a, b, len });
    }
    Ok(diagram
        .pairs
        .iter()
        .filter(|p| p.dim == k && p.birth_index < a && p.death_index.is_none_or(|d| d >= b))
        .count())
}

const BOTTLENECK_CAP: usize = 12;

/// Bottleneck distance between two diagrams restricted to dimension `k`.
///
/// Finite points may match each other (infinity-norm cost) or their diagonal
/// projections (half persistence); essential points must match essential points
/// by birth. The distance is the smallest candidate cost at which a perfect
/// matching exists. Capped at 12 finite points per side.
pub fn bottleneck_distance(d1: &Diagram, d2: &Diagram, k: usize) -> Result<f64, PersistenceError> {
    let finite = |d: &Diagram| -> Vec<(f64, f64)> {
        d.pairs
            .iter()
            .filter(|p| p.dim == k && !p.is_essential())
            .map(|p| (p.birth_value, p.death_value.unwrap()))
            .collect()
    };
    let infinite = |d: &Diagram| -> Vec<f64> {
        d.pairs
            .iter()
            .filter(|p| p.dim == k && p.is_essential())
            .map(|p| p.birth_value)
            .collect()
    };
    let (p, q) = (finite(d1), finite(d2));
    let (mut pi, mut qi) = (infinite(d1), infinite(d2));
    if pi.len() != qi.len() {
        return Ok(f64::INFINITY);
    }
    for pts in [&p, &q] {
        if pts.len() > BOTTLENECK_CAP {
            return Err(PersistenceError::TooManyPoints {
                cap: BOTTLENECK_CAP,
                got: pts.len(),
            });
        }
    }
    // Essential classes pair off by sorted birth; with equal counts the optimal
    // matching of points on a line is order-preserving.
    pi.sort_by(f64::total_cmp);
    qi.sort_by(f64::total_cmp);
    let essential_cost = pi
        .iter()
        .zip(&qi)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);

    let inf_norm = |a: (f64, f64), b: (f64, f64)| (a.0 - b.0).abs().max((a.1 - b.1).abs());
    let diag_cost = |a: (f64, f64)| (a.1 - a.0) / 2.0;

    let mut candidates: Vec<f64> = vec![0.0, essential_cost];
    for &a in &p {
        candidates.push(diag_cost(a));
        for &b in &q {
            candidates.push(inf_norm(a, b));
        }
    }
    for &b in &q {
        candidates.push(diag_cost(b));
    }
    candidates.retain(|c| c.is_finite());
    candidates.sort_by(f64::total_cmp);
    candidates.dedup();

    for &delta in &candidates {
        if delta >= essential_cost && finite_matching_exists(&p, &q, delta, inf_norm, diag_cost) {
            return Ok(delta);
        }
    }
    Ok(f64::INFINITY)
}

/// Perfect matching on p union diag(q) versus q union diag(p): point i of the
/// left side may take point j of the right when the cost is within delta.
/// Hopcroft-Karp would be overkill at this size; plain augmenting paths.
fn finite_matching_exists(
    p: &[(f64, f64)],
    q: &[(f64, f64)],
    delta: f64,
    inf_norm: impl Fn((f64, f64), (f64, f64)) -> f64,
    diag_cost: impl Fn((f64, f64)) -> f64,
) -> bool {
    let n = p.len() + q.len();
    // Left nodes: p points then diagonal slots for q. Right nodes: q points
    // then diagonal slots for p.
    let eps = 1e-12;
    let allowed = |i: usize, j: usize| -> bool {
        match (i < p.len(), j < q.len()) {
            (true, true) => inf_norm(p[i], q[j]) <= delta + eps,
            (true, false) => j - q.len() == i && diag_cost(p[i]) <= delta + eps,
            (false, true) => i - p.len() == j && diag_cost(q[j]) <= delta + eps,
            (false, false) => true,
        }
    };
    let mut match_right: Vec<Option<usize>> = vec![None; n];
    fn augment(
        i: usize,
        n: usize,
        allowed: &dyn Fn(usize, usize) -> bool,
        match_right: &mut Vec<Option<usize>>,
        visited: &mut Vec<bool>,
    ) -> bool {
        for j in 0..n {
            if !visited[j] && allowed(i, j) {
                visited[j] = true;
                if match_right[j].is_none()
                    || augment(match_right[j].unwrap(), n, allowed, match_right, visited)
                {
                    match_right[j] = Some(i);
                    return true;
                }
            }
        }
        false
    }
    for i in 0..n {
        let mut visited = vec![false; n];
        if !augment(i, n, &allowed, &mut match_right, &mut visited) {
            return false;
        }
    }
    true
}

/// Serialized diagram: an array of per-dimension objects, each listing pairs
/// with "inf" standing in for an open death.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct DiagramDimJson {
    pub k: usize,
    pub pairs: Vec<DiagramPairJson>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct DiagramPairJson {
    pub birth: f64,
    pub death: serde_json::Value,
    pub birth_cell: Vec<String>,
    pub death_cell: Option<Vec<String>>,
}

fn cell_labels(cell: &Cell, symbols: &SymbolTable) -> Vec<String> {
    match cell {
        Cell::Simplex(s) => s.vertices().iter().map(|&v| symbols.label(v)).collect(),
        Cell::Cube(c) => vec![c.to_string()],
    }
}

pub fn diagram_to_json(diagram: &Diagram, symbols: &SymbolTable) -> Vec<DiagramDimJson> {
    let top = diagram.max_dim();
    (0..=top)
        .map(|k| DiagramDimJson {
            k,
            pairs: diagram
                .in_dim(k)
                .iter()
                .map(|p| DiagramPairJson {
                    birth: p.birth_value,
                    death: match p.death_value {
                        Some(d) => serde_json::json!(d),
                        None => serde_json::json!("inf"),
                    },
                    birth_cell: cell_labels(&p.creator, symbols),
                    death_cell: p.destroyer.as_ref().map(|c| cell_labels(c, symbols)),
                })
                .collect(),
        })
        .collect()
}

/// Reads back the JSON schema into bare (dim, birth, death) triples, enough for
/// distance computations on stored diagrams.
pub fn diagram_from_json(text: &str) -> Result<Diagram, PersistenceError> {
    let dims: Vec<DiagramDimJson> =
        serde_json::from_str(text).map_err(|e| PersistenceError::Json(e.to_string()))?;
    let mut pairs = Vec::new();
    for d in &dims {
        for p in &d.pairs {
            let death_value = match &p.death {
                serde_json::Value::String(s) if s == "inf" => None,
                serde_json::Value::Number(n) => Some(n.as_f64().unwrap()),
                other => {
                    return Err(PersistenceError::Json(format!(
                        "death must be a number or \"inf\", got {other}"
                    )))
                }
            };
            // Cells are not reconstructed from labels; a placeholder vertex
            // stands in. Distance queries only read dim/birth/death.
            let creator = Cell::Simplex(crate::complex::Simplex::new([0]).unwrap());
            pairs.push(PersistencePair {
                dim: d.k,
                birth_index: 0,
                death_index: death_value.map(|_| 0),
                birth_value: p.birth,
                death_value,
                creator: creator.clone(),
                destroyer: death_value.map(|_| creator.clone()),
            });
        }
    }
    Ok(Diagram { pairs })
}

fn format_value(v: f64) -> String {
    format!("{v}")
}

/// Text barcode: one block per dimension, one line per pair, longest-lived
/// first, ties broken by birth then the cell itself.
pub fn render_text(diagram: &Diagram, symbols: &SymbolTable, hide_zero: bool) -> String {
    let mut out = String::new();
    for k in 0..=diagram.max_dim() {
        let mut pairs = diagram.in_dim(k);
        if hide_zero {
            pairs.retain(|p| p.persistence() > 0.0);
        }
        let _ = writeln!(out, "dim {k}: {} pairs", pairs.len());
        pairs.sort_by(|a, b| {
            b.persistence()
                .total_cmp(&a.persistence())
                .then(a.birth_value.total_cmp(&b.birth_value))
                .then(a.birth_index.cmp(&b.birth_index))
        });
        for p in pairs {
            let death = match p.death_value {
                Some(d) => format_value(d),
                None => "inf".to_string(),
            };
            let cell = cell_labels(&p.creator, symbols).join(" ");
            let _ = writeln!(
                out,
                "  [{}, {}) <{}>",
                format_value(p.birth_value),
                death,
                cell
            );
        }
    }
    out
}

/// Minimal SVG scatter of the diagram: diagonal, axes, one circle per finite
/// pair, one triangle per essential class pinned to the top edge.
pub fn render_svg(diagram: &Diagram) -> String {
    let size = 400.0;
    let margin = 40.0;
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for p in &diagram.pairs {
        lo = lo.min(p.birth_value);
        hi = hi.max(p.birth_value);
        if let Some(d) = p.death_value {
            lo = lo.min(d);
            hi = hi.max(d);
        }
    }
    if !lo.is_finite() || !hi.is_finite() {
        lo = 0.0;
        hi = 1.0;
    }
    if hi - lo < 1e-9 {
        hi = lo + 1.0;
    }
    let span = hi - lo;
    let sx = |v: f64| margin + (v - lo) / span * (size - 2.0 * margin);
    let sy = |v: f64| size - margin - (v - lo) / span * (size - 2.0 * margin);
    let palette = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b"];
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">"#
    );
    let _ = writeln!(
        out,
        r##"  <line x1="{m}" y1="{e}" x2="{e}" y2="{m}" stroke="#999" stroke-dasharray="4"/>"##,
        m = margin,
        e = size - margin
    );
    let _ = writeln!(
        out,
        r##"  <line x1="{m}" y1="{e}" x2="{e}" y2="{e}" stroke="#000"/>"##,
        m = margin,
        e = size - margin
    );
    let _ = writeln!(
        out,
        r##"  <line x1="{m}" y1="{m}" x2="{m}" y2="{e}" stroke="#000"/>"##,
        m = margin,
        e = size - margin
    );
    for p in &diagram.pairs {
        let color = palette[p.dim % palette.len()];
        match p.death_value {
            Some(d) => {
                let _ = writeln!(
                    out,
                    r#"  <circle cx="{:.2}" cy="{:.2}" r="3" fill="{color}"><title>dim {} [{}, {})</title></circle>"#,
                    sx(p.birth_value),
                    sy(d),
                    p.dim,
                    format_value(p.birth_value),
                    format_value(d)
                );
            }
            None => {
                let x = sx(p.birth_value);
                let y = margin;
                let _ = writeln!(
                    out,
                    r#"  <path d="M {:.2} {:.2} l 4 7 l -8 0 z" fill="{color}"><title>dim {} [{}, inf)</title></path>"#,
                    x,
                    y - 4.0,
                    p.dim,
                    format_value(p.birth_value)
                );
            }
        }
    }
    out.push_str("</svg>\n");
    out
}

/// Multiplicity map of a diagram in one dimension, for exact equality checks in
/// tests: (birth, death-or-None) -> count.
pub fn diagram_multiset(diagram: &Diagram, k: usize) -> HashMap<(u64, Option<u64>), usize> {
    let mut out = HashMap::new();
    for p in diagram.in_dim(k) {
        let key = (p.birth_value.to_bits(), p.death_value.map(|d| d.to_bits()));
        *out.entry(key).or_insert(0) += 1;
    }
    out
}
