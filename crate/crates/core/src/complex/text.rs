//! Text formats: simplex-list complexes and filtrations, with a symbol table
//! mapping external vertex labels to dense identifiers.
//!
//! One cell per line, `#` starts a comment, an optional `: value` suffix carries
//! a filtration value. Simplex lines are whitespace-separated vertex labels;
//! cube lines are single tokens like `[0,1]x[2,2]`. A file holds one cell kind.

use std::collections::HashMap;

use super::{
    Cell, ComplexError, CubicalComplex, ElementaryCube, Filtration, Simplex, SimplicialComplex,
};

/// Maps external vertex labels to dense ids. Ids follow label order: numeric
/// order when every label is an unsigned integer, string order otherwise, so a
/// file re-emitted and re-parsed keeps its identifiers.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SymbolTable {
    labels: Vec<String>,
    ids: HashMap<String, usize>,
}

impl SymbolTable {
    pub fn from_labels<I, S>(labels: I) -> SymbolTable
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        labels.sort();
        labels.dedup();
        if labels.iter().all(|l| l.parse::<u64>().is_ok()) {
            labels.sort_by_key(|l| l.parse::<u64>().unwrap());
        }
        let ids = labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.clone(), i))
            .collect();
        SymbolTable { labels, ids }
    }

    /// Identity table with labels "0".."n-1".
    pub fn numeric(n: usize) -> SymbolTable {
        SymbolTable::from_labels((0..n).map(|i| i.to_string()))
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Label for an id; ids beyond the table render as their number, which keeps
    /// programmatically built complexes printable without a table.
    pub fn label(&self, id: usize) -> String {
        self.labels
            .get(id)
            .cloned()
            .unwrap_or_else(|| id.to_string())
    }

    pub fn id(&self, label: &str) -> Option<usize> {
        self.ids.get(label).copied()
    }

    pub fn simplex_labels(&self, s: &Simplex) -> Vec<String> {
        s.vertices().iter().map(|&v| self.label(v)).collect()
    }
}

/// A parsed complex file: the face closure of the listed cells, the label
/// table, and a total cell-value assignment (explicit values, or for implied
/// faces the minimum over the explicit cells containing them; unvalued lines
/// count as 0).
#[derive(Clone, Debug)]
pub struct ParsedComplex {
    pub complex: SimplicialComplex,
    pub symbols: SymbolTable,
    pub values: HashMap<Simplex, f64>,
    pub any_explicit_value: bool,
}

impl ParsedComplex {
    pub fn filtration(&self) -> Result<Filtration, ComplexError> {
        self.complex.filtration_by(|s| self.values[s])
    }
}

struct Line {
    number: usize,
    tokens: Vec<String>,
    value: Option<f64>,
}

fn split_lines(text: &str) -> Result<Vec<Line>, ComplexError> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let number = idx + 1;
        let body = raw.split('#').next().unwrap_or("");
        let (cells_part, value) = match body.split_once(':') {
            Some((left, right)) => {
                let v = right
                    .trim()
                    .parse::<f64>()
                    .map_err(|_| ComplexError::Parse {
                        line: number,
                        message: format!("cannot parse value {:?}", right.trim()),
                    })?;
                (left, Some(v))
            }
            None => (body, None),
        };
        let tokens: Vec<String> = cells_part.split_whitespace().map(String::from).collect();
        if tokens.is_empty() {
            if value.is_some() {
                return Err(ComplexError::Parse {
                    line: number,
                    message: "value without a cell".into(),
                });
            }
            continue;
        }
        out.push(Line {
            number,
            tokens,
            value,
        });
    }
    Ok(out)
}

/// Parses a simplex-list complex file.
pub fn parse_complex(text: &str) -> Result<ParsedComplex, ComplexError> {
    let lines = split_lines(text)?;
    let symbols = SymbolTable::from_labels(lines.iter().flat_map(|l| l.tokens.iter().cloned()));
    parse_complex_lines(lines, symbols)
}

/// Parses a complex file against an existing symbol table; labels missing from
/// the table are an error. Used when several files must agree on identifiers.
pub fn parse_complex_with(
    text: &str,
    symbols: &SymbolTable,
) -> Result<ParsedComplex, ComplexError> {
    let lines = split_lines(text)?;
    for line in &lines {
        for t in &line.tokens {
            if symbols.id(t).is_none() {
                return Err(ComplexError::Parse {
                    line: line.number,
                    message: format!("unknown vertex label {t:?}"),
                });
            }
        }
    }
    parse_complex_lines(lines, symbols.clone())
}

fn parse_complex_lines(
    lines: Vec<Line>,
    symbols: SymbolTable,
) -> Result<ParsedComplex, ComplexError> {
    let mut complex = SimplicialComplex::new();
    let mut explicit: HashMap<Simplex, f64> = HashMap::new();
    let mut any_explicit_value = false;
    for line in &lines {
        if line.tokens.iter().any(|t| t.starts_with('[')) {
            return Err(ComplexError::Parse {
                line: line.number,
                message: "cube cells are not allowed in a simplicial file".into(),
            });
        }
        let ids: Vec<usize> = line
            .tokens
            .iter()
            .map(|t| symbols.id(t).expect("token registered above"))
            .collect();
        let s = complex.insert_closed(&ids).map_err(|e| match e {
            ComplexError::RepeatedVertex { vertex } => ComplexError::Parse {
                line: line.number,
                message: format!("repeated vertex {:?}", symbols.label(vertex)),
            },
            other => other,
        })?;
        if explicit.contains_key(&s) {
            return Err(ComplexError::DuplicateCell {
                cell: Cell::Simplex(s),
            });
        }
        any_explicit_value |= line.value.is_some();
        explicit.insert(s, line.value.unwrap_or(0.0));
    }
    // Implied faces inherit the minimum value over explicit cells containing them.
    let mut values = explicit.clone();
    for (s, &v) in &explicit {
        for face in s.faces() {
            if explicit.contains_key(&face) {
                continue;
            }
            values
                .entry(face)
                .and_modify(|cur| *cur = cur.min(v))
                .or_insert(v);
        }
    }
    Ok(ParsedComplex {
        complex,
        symbols,
        values,
        any_explicit_value,
    })
}

fn parse_cube_token(token: &str, line: usize) -> Result<ElementaryCube, ComplexError> {
    let mut intervals = Vec::new();
    for part in token.split('x') {
        let inner = part
            .strip_prefix('[')
            .and_then(|p| p.strip_suffix(']'))
            .ok_or_else(|| ComplexError::Parse {
                line,
                message: format!("malformed interval {part:?}"),
            })?;
        let (lo, hi) = inner.split_once(',').ok_or_else(|| ComplexError::Parse {
            line,
            message: format!("malformed interval {part:?}"),
        })?;
        let lo: i64 = lo.trim().parse().map_err(|_| ComplexError::Parse {
            line,
            message: format!("bad interval endpoint {lo:?}"),
        })?;
        let hi: i64 = hi.trim().parse().map_err(|_| ComplexError::Parse {
            line,
            message: format!("bad interval endpoint {hi:?}"),
        })?;
        intervals.push((lo, hi));
    }
    ElementaryCube::new(intervals)
}

/// Parses a filtration file of either cell kind. Returns the canonical-order
/// filtration and the symbol table (empty for cubical files).
pub fn parse_filtration(text: &str) -> Result<(Filtration, SymbolTable), ComplexError> {
    let lines = split_lines(text)?;
    let has_cube = lines
        .iter()
        .any(|l| l.tokens.first().is_some_and(|t| t.starts_with('[')));
    let has_simplex = lines
        .iter()
        .any(|l| l.tokens.first().is_some_and(|t| !t.starts_with('[')));
    if has_cube && has_simplex {
        let offender = lines
            .iter()
            .find(|l| l.tokens.first().is_some_and(|t| t.starts_with('[')))
            .unwrap();
        return Err(ComplexError::Parse {
            line: offender.number,
            message: "cannot mix simplex and cube cells in one file".into(),
        });
    }
    if has_cube {
        let mut complex = CubicalComplex::new();
        let mut explicit: HashMap<ElementaryCube, f64> = HashMap::new();
        for line in &lines {
            if line.tokens.len() != 1 {
                return Err(ComplexError::Parse {
                    line: line.number,
                    message: "a cube line holds exactly one cell".into(),
                });
            }
            let cube = parse_cube_token(&line.tokens[0], line.number)?;
            complex.insert_closed(&cube)?;
            if explicit.contains_key(&cube) {
                return Err(ComplexError::DuplicateCell {
                    cell: Cell::Cube(cube),
                });
            }
            explicit.insert(cube, line.value.unwrap_or(0.0));
        }
        let mut values = explicit.clone();
        for (c, &v) in &explicit {
            for face in c.faces() {
                if explicit.contains_key(&face) {
                    continue;
                }
                values
                    .entry(face)
                    .and_modify(|cur| *cur = cur.min(v))
                    .or_insert(v);
            }
        }
        let filtration = complex.filtration_by(|c| values[c])?;
        Ok((filtration, SymbolTable::default()))
    } else {
        let parsed = parse_complex(text)?;
        let filtration = parsed.filtration()?;
        Ok((filtration, parsed.symbols))
    }
}

/// Writes a filtration in the text format, one cell per line in filtration
/// order with explicit values. The output parses back to the same filtration.
pub fn render_filtration(f: &Filtration, symbols: &SymbolTable) -> String {
    let mut out = String::new();
    for (cell, value) in f.iter() {
        match cell {
            Cell::Simplex(s) => {
                out.push_str(&symbols.simplex_labels(s).join(" "));
            }
            Cell::Cube(c) => {
                out.push_str(&c.to_string());
            }
        }
        out.push_str(&format!(" : {value}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels_sort_numerically_when_all_numeric() {
        let t = SymbolTable::from_labels(["10", "2", "1"]);
        assert_eq!(t.label(0), "1");
        assert_eq!(t.label(1), "2");
        assert_eq!(t.label(2), "10");
        let s = SymbolTable::from_labels(["b", "a", "10"]);
        assert_eq!(s.label(0), "10");
        assert_eq!(s.label(1), "a");
        assert_eq!(s.label(2), "b");
    }

    #[test]
    fn parse_complex_closes_faces_and_reads_values() {
        let parsed = parse_complex("# demo\na b c : 2\nd\n").unwrap();
        assert_eq!(parsed.complex.total_cells(), 8);
        let ab = Simplex::new([
            parsed.symbols.id("a").unwrap(),
            parsed.symbols.id("b").unwrap(),
        ])
        .unwrap();
        assert_eq!(parsed.values[&ab], 2.0);
        let d = Simplex::new([parsed.symbols.id("d").unwrap()]).unwrap();
        assert_eq!(parsed.values[&d], 0.0);
    }

    #[test]
    fn implied_faces_take_the_minimum_over_explicit_cells() {
        let parsed = parse_complex("a b c : 3\nb c d : 1\n").unwrap();
        let bc = Simplex::new([
            parsed.symbols.id("b").unwrap(),
            parsed.symbols.id("c").unwrap(),
        ])
        .unwrap();
        assert_eq!(parsed.values[&bc], 1.0);
    }

    #[test]
    fn filtration_round_trips_through_text() {
        let (f, symbols) = parse_filtration("a : 0\nb : 0.5\na b : 1.25\n").unwrap();
        let text = render_filtration(&f, &symbols);
        let (g, _) = parse_filtration(&text).unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn cube_filtration_round_trips() {
        let input = "[0,1]x[2,2] : 1.5\n[0,1]x[2,3] : 2\n";
        let (f, symbols) = parse_filtration(input).unwrap();
        assert_eq!(f.len(), 4 + 4 + 1); // corners, edges, square
        let text = render_filtration(&f, &symbols);
        let (g, _) = parse_filtration(&text).unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn mixed_cell_kinds_are_rejected() {
        let err = parse_filtration("a b : 1\n[0,1] : 1\n").unwrap_err();
        assert!(matches!(err, ComplexError::Parse { line: 2, .. }));
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = parse_complex("a b\n: 3\n").unwrap_err();
        assert!(matches!(err, ComplexError::Parse { line: 2, .. }));
        let err = parse_complex("a a\n").unwrap_err();
        assert!(matches!(err, ComplexError::Parse { line: 1, .. }));
    }

    #[test]
    fn parse_with_foreign_table_rejects_unknown_labels() {
        let parent = parse_complex("a b c\n").unwrap();
        assert!(parse_complex_with("a b\n", &parent.symbols).is_ok());
        let err = parse_complex_with("a z\n", &parent.symbols).unwrap_err();
        assert!(matches!(err, ComplexError::Parse { line: 1, .. }));
    }
}
