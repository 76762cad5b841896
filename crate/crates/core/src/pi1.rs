//! Edge-path group presentations: a spanning tree of the 1-skeleton, one
//! generator per excluded edge, one relator per triangle, elementary Tietze
//! simplification, and abelianization via Smith normal form.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::Serialize;
use thiserror::Error;

use crate::algebra::{smith_normal_form, SparseIntMatrix};
use crate::complex::{SimplicialComplex, SymbolTable};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum Pi1Error {
    #[error("complex has no vertices")]
    Empty,
    #[error("root vertex {root} is not in the complex")]
    MissingRoot { root: usize },
    #[error("vertex {vertex} is unreachable from root {root}")]
    Disconnected { root: usize, vertex: usize },
}

/// Spanning tree of the 1-skeleton, grown breadth-first from `root` in
/// canonical vertex order. Edges are stored as sorted pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpanningTree {
    root: usize,
    edges: BTreeSet<[usize; 2]>,
}

impl SpanningTree {
    pub fn root(&self) -> usize {
        self.root
    }

    pub fn edges(&self) -> &BTreeSet<[usize; 2]> {
        &self.edges
    }

    pub fn contains_edge(&self, i: usize, j: usize) -> bool {
        let key = if i < j { [i, j] } else { [j, i] };
        self.edges.contains(&key)
    }
}

/// One occurrence of a generator in a word: `(index, exponent)` with exponent
/// `1` or `-1`.
pub type Letter = (usize, i8);

/// Presentation of the edge-path group: `generators[i]` is the non-tree edge
/// realizing g_{i+1}, and each relator is a word with adjacent inverse pairs
/// already cancelled.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgePathPresentation {
    generators: Vec<[usize; 2]>,
    relators: Vec<Vec<Letter>>,
}

impl EdgePathPresentation {
    pub fn generators(&self) -> &[[usize; 2]] {
        &self.generators
    }

    pub fn relators(&self) -> &[Vec<Letter>] {
        &self.relators
    }
}

/// Free rank and divisibility-chained torsion of an abelianized presentation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AbelianInvariants {
    pub free_rank: usize,
    pub torsion: Vec<u64>,
}

pub fn spanning_tree(complex: &SimplicialComplex, root: usize) -> Result<SpanningTree, Pi1Error> {
    let vertices: Vec<usize> = complex.vertices().collect();
    if vertices.is_empty() {
        return Err(Pi1Error::Empty);
    }
    if !vertices.contains(&root) {
        return Err(Pi1Error::MissingRoot { root });
    }
    let mut adjacency: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &v in &vertices {
        adjacency.insert(v, Vec::new());
    }
    for edge in complex.cells(1) {
        let vs = edge.vertices();
        adjacency.get_mut(&vs[0]).unwrap().push(vs[1]);
        adjacency.get_mut(&vs[1]).unwrap().push(vs[0]);
    }
    for neighbors in adjacency.values_mut() {
        neighbors.sort_unstable();
    }
    let mut edges = BTreeSet::new();
    let mut seen = BTreeSet::new();
    seen.insert(root);
    let mut queue = VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        for &w in &adjacency[&v] {
            if seen.insert(w) {
                edges.insert(if v < w { [v, w] } else { [w, v] });
                queue.push_back(w);
            }
        }
    }
    match vertices.iter().copied().find(|v| !seen.contains(v)) {
        Some(vertex) => Err(Pi1Error::Disconnected { root, vertex }),
        None => Ok(SpanningTree { root, edges }),
    }
}

fn push_letter(word: &mut Vec<Letter>, letter: Letter) {
    match word.last() {
        Some(&(g, e)) if g == letter.0 && e == -letter.1 => {
            word.pop();
        }
        _ => word.push(letter),
    }
}

fn recancel(letters: impl IntoIterator<Item = Letter>) -> Vec<Letter> {
    let mut out = Vec::new();
    for letter in letters {
        push_letter(&mut out, letter);
    }
    out
}

/// Edge-path group presentation relative to the breadth-first spanning tree
/// rooted at `root`: generators are the non-tree edges in canonical order, and
/// each triangle (i j k) contributes the relator g_ij g_jk g_ik^-1 with tree
/// letters dropped. Relators that come out empty are discarded.
pub fn presentation(
    complex: &SimplicialComplex,
    root: usize,
) -> Result<EdgePathPresentation, Pi1Error> {
    let tree = spanning_tree(complex, root)?;
    let mut generators = Vec::new();
    let mut index = BTreeMap::new();
    for edge in complex.cells(1) {
        let vs = edge.vertices();
        let key = [vs[0], vs[1]];
        if !tree.edges.contains(&key) {
            index.insert(key, generators.len());
            generators.push(key);
        }
    }
    let mut relators = Vec::new();
    for triangle in complex.cells(2) {
        let vs = triangle.vertices();
        let (i, j, k) = (vs[0], vs[1], vs[2]);
        let mut word = Vec::new();
        for (a, b, exponent) in [(i, j, 1i8), (j, k, 1), (i, k, -1)] {
            if let Some(&g) = index.get(&[a, b]) {
                push_letter(&mut word, (g, exponent));
            }
        }
        if !word.is_empty() {
            relators.push(word);
        }
    }
    Ok(EdgePathPresentation {
        generators,
        relators,
    })
}

/// Applies three Tietze moves to a fixed point: drop empty relators, eliminate
/// a generator whose relator is a single letter, and drop duplicate relators.
/// Each move preserves the isomorphism class of the presented group.
pub fn simplify(p: &EdgePathPresentation) -> EdgePathPresentation {
    let mut generators = p.generators.clone();
    let mut relators = p.relators.clone();
    loop {
        relators.retain(|word| !word.is_empty());
        if let Some(pos) = relators.iter().position(|word| word.len() == 1) {
            let dead = relators[pos][0].0;
            relators.remove(pos);
            generators.remove(dead);
            relators = relators
                .into_iter()
                .map(|word| {
                    recancel(
                        word.into_iter()
                            .filter(|&(g, _)| g != dead)
                            .map(|(g, e)| (if g > dead { g - 1 } else { g }, e)),
                    )
                })
                .collect();
            continue;
        }
        let before = relators.len();
        let mut seen = BTreeSet::new();
        relators.retain(|word| seen.insert(word.clone()));
        if relators.len() == before {
            break;
        }
    }
    EdgePathPresentation {
        generators,
        relators,
    }
}

/// Abelian invariants of the presented group: Smith normal form of the
/// relator-exponent matrix gives the torsion, and the unconstrained generators
/// give the free rank. For an edge-path presentation this equals H_1.
pub fn abelianize(p: &EdgePathPresentation) -> AbelianInvariants {
    let mut matrix = SparseIntMatrix::new(p.relators.len(), p.generators.len());
    for (r, word) in p.relators.iter().enumerate() {
        let mut exponents: BTreeMap<usize, i64> = BTreeMap::new();
        for &(g, e) in word {
            *exponents.entry(g).or_insert(0) += i64::from(e);
        }
        for (g, e) in exponents {
            if e != 0 {
                matrix.set(r, g, e);
            }
        }
    }
    let snf = smith_normal_form(&matrix, false);
    let torsion = snf
        .diagonal
        .iter()
        .filter(|d| **d > 1u64.into())
        .map(|d| u64::try_from(d).expect("torsion coefficient fits u64"))
        .collect();
    AbelianInvariants {
        free_rank: p.generators.len() - snf.rank,
        torsion,
    }
}

fn generator_name(i: usize) -> String {
    format!("g{}", i + 1)
}

fn word_string(word: &[Letter]) -> String {
    word.iter()
        .map(|&(g, e)| {
            if e == 1 {
                generator_name(g)
            } else {
                format!("{}^-1", generator_name(g))
            }
        })
        .collect::<Vec<_>>()
        .join(" ")
}

/// Renders `generators: g1 .. gn` followed by one relator word per line.
pub fn render_presentation_text(p: &EdgePathPresentation) -> String {
    let mut out = String::from("generators:");
    for i in 0..p.generators.len() {
        out.push(' ');
        out.push_str(&generator_name(i));
    }
    out.push_str("\nrelators:\n");
    for word in &p.relators {
        out.push_str(&word_string(word));
        out.push('\n');
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct GeneratorJson {
    pub name: String,
    pub edge: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PresentationJson {
    pub generators: Vec<GeneratorJson>,
    pub relators: Vec<String>,
}

pub fn presentation_json(p: &EdgePathPresentation, symbols: &SymbolTable) -> PresentationJson {
    PresentationJson {
        generators: p
            .generators
            .iter()
            .enumerate()
            .map(|(i, edge)| GeneratorJson {
                name: generator_name(i),
                edge: edge.iter().map(|&v| symbols.label(v)).collect(),
            })
            .collect(),
        relators: p.relators.iter().map(|w| word_string(w)).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::homology::homology_z;

    #[test]
    fn tree_complexes_present_the_trivial_group() {
        let path = fixtures::path(5);
        let tree = spanning_tree(&path, 0).unwrap();
        assert_eq!(tree.edges().len(), 5);
        assert!(tree.contains_edge(2, 1));
        let p = presentation(&path, 0).unwrap();
        assert!(p.generators().is_empty());
        assert!(p.relators().is_empty());
    }

    #[test]
    fn spanning_tree_errors_name_the_unreachable_vertex() {
        let two = SimplicialComplex::from_cells([vec![0], vec![5]]).unwrap();
        assert_eq!(
            spanning_tree(&two, 0),
            Err(Pi1Error::Disconnected { root: 0, vertex: 5 })
        );
        assert_eq!(
            spanning_tree(&two, 3),
            Err(Pi1Error::MissingRoot { root: 3 })
        );
        assert_eq!(
            spanning_tree(&SimplicialComplex::new(), 0),
            Err(Pi1Error::Empty)
        );
    }

    #[test]
    fn hollow_triangle_is_free_of_rank_one() {
        let c = fixtures::hollow_triangle();
        let tree = spanning_tree(&c, 0).unwrap();
        assert_eq!(tree.edges().len(), 2);
        let p = presentation(&c, 0).unwrap();
        assert_eq!(p.generators().len(), 1);
        assert!(p.relators().is_empty());
        assert_eq!(
            abelianize(&p),
            AbelianInvariants {
                free_rank: 1,
                torsion: vec![]
            }
        );
    }

    #[test]
    fn graph_generators_count_edges_beyond_a_spanning_tree() {
        // Complete graph on 5 vertices: e - (v - 1) = 10 - 4.
        let k5 =
            SimplicialComplex::from_cells((0..5).flat_map(|i| (i + 1..5).map(move |j| vec![i, j])))
                .unwrap();
        let p = presentation(&k5, 0).unwrap();
        assert_eq!(p.generators().len(), 6);
        assert!(p.relators().is_empty());
        assert_eq!(abelianize(&p).free_rank, 6);
    }

    #[test]
    fn solid_triangle_presents_trivially_after_simplification() {
        let p = presentation(&fixtures::triangle(), 0).unwrap();
        assert_eq!(p.generators().len(), 1);
        assert_eq!(p.relators(), &[vec![(0, 1)]]);
        let s = simplify(&p);
        assert!(s.generators().is_empty());
        assert!(s.relators().is_empty());
    }

    #[test]
    fn torus_abelianization_is_z_squared() {
        let p = presentation(&fixtures::torus9(), 0).unwrap();
        assert_eq!(p.generators().len(), 27 - 8);
        assert_eq!(p.relators().len(), 18);
        assert_eq!(
            abelianize(&p),
            AbelianInvariants {
                free_rank: 2,
                torsion: vec![]
            }
        );
    }

    #[test]
    fn projective_plane_abelianization_is_z2() {
        let p = presentation(&fixtures::projective_plane(), 0).unwrap();
        assert_eq!(
            abelianize(&p),
            AbelianInvariants {
                free_rank: 0,
                torsion: vec![2]
            }
        );
    }

    #[test]
    fn simplify_eliminates_single_letter_generators() {
        // generators {g, h}, relators {g, g h h g^-1}: killing g reindexes h
        // and re-cancels the conjugating pair, leaving h^2 = id.
        let raw = EdgePathPresentation {
            generators: vec![[0, 1], [0, 2]],
            relators: vec![vec![(0, 1)], vec![(0, 1), (1, 1), (1, 1), (0, -1)]],
        };
        let s = simplify(&raw);
        assert_eq!(s.generators(), &[[0, 2]]);
        assert_eq!(s.relators(), &[vec![(0, 1), (0, 1)]]);
        assert_eq!(
            abelianize(&s),
            AbelianInvariants {
                free_rank: 0,
                torsion: vec![2]
            }
        );
        // With a lone h the cascade runs to the trivial presentation.
        let collapsing = EdgePathPresentation {
            generators: vec![[0, 1], [0, 2]],
            relators: vec![vec![(0, 1)], vec![(0, 1), (1, 1), (0, -1)]],
        };
        let done = simplify(&collapsing);
        assert!(done.generators().is_empty());
        assert!(done.relators().is_empty());
    }

    #[test]
    fn simplify_reduces_the_torus_presentation_and_preserves_invariants() {
        let raw = presentation(&fixtures::torus9(), 0).unwrap();
        let slim = simplify(&raw);
        assert!(slim.generators().len() < raw.generators().len());
        assert_eq!(abelianize(&slim), abelianize(&raw));
        assert_eq!(simplify(&slim), slim);
    }

    #[test]
    fn abelianization_matches_integer_homology_in_dimension_one() {
        let corpus = [
            fixtures::triangle(),
            fixtures::hollow_triangle(),
            fixtures::sphere2(),
            fixtures::circle(7),
            fixtures::torus9(),
            fixtures::torus7(),
            fixtures::projective_plane(),
            fixtures::wedge_two_circles_sphere(),
        ];
        for complex in &corpus {
            let h = homology_z(&complex.boundary_matrices());
            let p = presentation(complex, complex.vertices().next().unwrap()).unwrap();
            let inv = abelianize(&p);
            assert_eq!(inv.free_rank, h.betti(1), "free rank vs betti 1");
            assert_eq!(inv.torsion, h.torsion(1), "torsion vs H_1");
            assert_eq!(abelianize(&simplify(&p)), inv);
        }
    }

    #[test]
    fn invariants_do_not_depend_on_the_root() {
        let c = fixtures::torus9();
        let reference = abelianize(&presentation(&c, 0).unwrap());
        for root in 1..9 {
            assert_eq!(abelianize(&presentation(&c, root).unwrap()), reference);
        }
    }

    #[test]
    fn presentation_sees_only_the_two_skeleton() {
        let sphere = fixtures::sphere2();
        let mut solid = sphere.clone();
        solid.insert_closed(&[0, 1, 2, 3]).unwrap();
        assert_eq!(
            presentation(&solid, 0).unwrap(),
            presentation(&sphere, 0).unwrap()
        );
    }

    #[test]
    fn text_and_json_rendering() {
        let p = presentation(&fixtures::triangle(), 0).unwrap();
        assert_eq!(
            render_presentation_text(&p),
            "generators: g1\nrelators:\ng1\n"
        );
        let wedge = EdgePathPresentation {
            generators: vec![[0, 2], [1, 3]],
            relators: vec![vec![(0, 1), (1, -1)]],
        };
        assert_eq!(
            render_presentation_text(&wedge),
            "generators: g1 g2\nrelators:\ng1 g2^-1\n"
        );
        let symbols = SymbolTable::from_labels(["a", "b", "c", "d"]);
        let json = serde_json::to_string(&presentation_json(&wedge, &symbols)).unwrap();
        assert_eq!(
            json,
            r#"{"generators":[{"name":"g1","edge":["a","c"]},{"name":"g2","edge":["b","d"]}],"relators":["g1 g2^-1"]}"#
        );
    }
}
