//! Homology over the integers and GF(2), cohomology with cup products, and the
//! Mayer-Vietoris rank bookkeeping.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{kernel_basis_gf2, rank_gf2, smith_normal_form, BitMatrix, BitVec};
use crate::complex::{ChainComplexView, Simplex, SimplicialComplex};

#[derive(Error, Debug, Clone, PartialEq)]
pub enum HomologyError {
    #[error("{which} is not a subcomplex of the parent")]
    NotSubcomplex { which: &'static str },
    #[error("the two subcomplexes do not cover the parent")]
    UnionMismatch,
    #[error("cochain length {got} does not match the {expected} cells of dimension {dim}")]
    CochainLength {
        dim: usize,
        expected: usize,
        got: usize,
    },
}

/// One homology group H_k = Z^betti + sum of Z/t cyclic factors, torsion
/// coefficients sorted by divisibility.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyGroup {
    pub betti: usize,
    pub torsion: Vec<u64>,
}

/// Integer homology in every dimension plus the Euler characteristic from cell
/// counts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologySummary {
    pub groups: Vec<HomologyGroup>,
    pub euler: i64,
}

impl HomologySummary {
    pub fn betti(&self, k: usize) -> usize {
        self.groups.get(k).map_or(0, |g| g.betti)
    }

    pub fn torsion(&self, k: usize) -> &[u64] {
        self.groups.get(k).map_or(&[], |g| &g.torsion)
    }

    /// Alternating sum of Betti numbers; equals `euler` by Euler-Poincare.
    pub fn euler_from_betti(&self) -> i64 {
        self.groups
            .iter()
            .enumerate()
            .map(|(k, g)| {
                let b = g.betti as i64;
                if k % 2 == 0 {
                    b
                } else {
                    -b
                }
            })
            .sum()
    }

    pub fn to_json_value(&self) -> HomologyJson {
        HomologyJson {
            dims: self
                .groups
                .iter()
                .enumerate()
                .map(|(k, g)| HomologyDimJson {
                    k,
                    betti: g.betti,
                    torsion: g.torsion.clone(),
                })
                .collect(),
            euler: self.euler,
        }
    }
}

/// Serialized form: {"dims":[{"k":0,"betti":1,"torsion":[]},...],"euler":N}.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct HomologyJson {
    pub dims: Vec<HomologyDimJson>,
    pub euler: i64,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct HomologyDimJson {
    pub k: usize,
    pub betti: usize,
    pub torsion: Vec<u64>,
}

/// Integer homology of a chain complex via Smith normal form.
///
/// With l_k the rank of A_k, beta_k = m_k - l_k - l_{k+1}; the torsion of H_k is
/// the set of invariant factors of A_{k+1} exceeding 1.
pub fn homology_z(view: &ChainComplexView) -> HomologySummary {
    let top = view.top_dim();
    // SNF of A_k for k = 1..=top, reused for rank and torsion.
    let snfs: Vec<_> = (1..=top)
        .map(|k| smith_normal_form(view.boundary(k).unwrap(), false))
        .collect();
    let rank = |k: usize| -> usize {
        if k == 0 || k > top {
            0
        } else {
            snfs[k - 1].rank
        }
    };
    let groups = (0..=top)
        .map(|k| {
            let betti = view.cell_count(k) - rank(k) - rank(k + 1);
            let torsion: Vec<u64> = if k + 1 > top {
                Vec::new()
            } else {
                snfs[k]
                    .diagonal
                    .iter()
                    .filter(|d| **d > 1u64.into())
                    .map(|d| u64::try_from(d).expect("torsion coefficient fits u64"))
                    .collect()
            };
            HomologyGroup { betti, torsion }
        })
        .collect();
    HomologySummary {
        groups,
        euler: view.euler_characteristic(),
    }
}

/// GF(2) Betti numbers: beta_k = m_k - rank A_k - rank A_{k+1} over GF(2).
pub fn homology_gf2(view: &ChainComplexView) -> Vec<usize> {
    let top = view.top_dim();
    let ranks: Vec<usize> = (0..=top + 1)
        .map(|k| {
            if k == 0 || k > top {
                0
            } else {
                rank_gf2(&view.boundary_bits(k))
            }
        })
        .collect();
    (0..=top)
        .map(|k| view.cell_count(k) - ranks[k] - ranks[k + 1])
        .collect()
}

/// A GF(2) cohomology basis in one dimension: representative cocycles that are
/// linearly independent modulo coboundaries.
#[derive(Clone, Debug)]
pub struct CohomologyBasis {
    pub dim: usize,
    pub betti: usize,
    pub representatives: Vec<BitVec>,
}

/// Cohomology over GF(2): H^k = ker(delta^k) / im(delta^(k-1)), where delta^k is
/// carried by the transpose of A_{k+1}. Representatives are actual cocycles.
pub fn cohomology_gf2(view: &ChainComplexView, k: usize) -> CohomologyBasis {
    let m_k = view.cell_count(k);
    // delta^k: C^k -> C^(k+1) is A_{k+1}^T.
    let delta_k = view.boundary_bits(k + 1).transpose();
    debug_assert_eq!(delta_k.cols(), m_k);
    let cocycles = kernel_basis_gf2(&delta_k);
    // delta^(k-1): C^(k-1) -> C^k is A_k^T; its image spans the coboundaries.
    let delta_km1 = view.boundary_bits(k).transpose();
    // Seed elimination with coboundary columns, then keep each cocycle whose
    // residue is independent of everything already absorbed.
    let mut echelon: Vec<BitVec> = Vec::new();
    let absorb = |v: &BitVec, echelon: &mut Vec<BitVec>| -> bool {
        let mut r = v.clone();
        loop {
            let Some(low) = r.last_one() else {
                return false;
            };
            match echelon.iter().find(|e| e.last_one() == Some(low)) {
                Some(e) => {
                    let e = e.clone();
                    r.xor_assign(&e);
                }
                None => {
                    echelon.push(r);
                    return true;
                }
            }
        }
    };
    for j in 0..delta_km1.cols() {
        let col = delta_km1.column(j);
        absorb(&col, &mut echelon);
    }
    let mut representatives = Vec::new();
    for z in &cocycles {
        if absorb(z, &mut echelon) {
            representatives.push(z.clone());
        }
    }
    CohomologyBasis {
        dim: k,
        betti: representatives.len(),
        representatives,
    }
}

/// Cup product of GF(2) cochains. `phi` evaluates on k-cells, `psi` on l-cells;
/// the result evaluates a (k+l)-simplex v_0..v_(k+l) as
/// phi(front k-face) * psi(back l-face), both in ascending vertex order.
pub fn cup_product_gf2(
    complex: &SimplicialComplex,
    phi: &BitVec,
    k: usize,
    psi: &BitVec,
    l: usize,
) -> Result<BitVec, HomologyError> {
    let check = |dim: usize, v: &BitVec| -> Result<(), HomologyError> {
        if v.len() != complex.cell_count(dim) {
            Err(HomologyError::CochainLength {
                dim,
                expected: complex.cell_count(dim),
                got: v.len(),
            })
        } else {
            Ok(())
        }
    };
    check(k, phi)?;
    check(l, psi)?;
    let top_cells = complex.cells(k + l);
    let mut out = BitVec::zeros(top_cells.len());
    for (j, cell) in top_cells.iter().enumerate() {
        let vs = cell.vertices();
        let front = Simplex::new(vs[..=k].iter().copied()).expect("front face is a simplex");
        let back = Simplex::new(vs[k..].iter().copied()).expect("back face is a simplex");
        let fi = complex
            .position(&front)
            .expect("front face is in the complex");
        let bi = complex
            .position(&back)
            .expect("back face is in the complex");
        if phi.get(fi) && psi.get(bi) {
            out.set(j, true);
        }
    }
    Ok(out)
}

/// Mayer-Vietoris bookkeeping for one dimension. `holds` asserts
/// beta_k(union) = beta_k(X) + beta_k(Y) - beta_k(X cap Y) + rank N_k + rank N_(k-1)
/// over GF(2), where N_k is the kernel of H_k(X cap Y) -> H_k(X) (+) H_k(Y).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MvDimReport {
    pub k: usize,
    pub union_betti: usize,
    pub x_betti: usize,
    pub y_betti: usize,
    pub intersection_betti: usize,
    pub rank_n_k: usize,
    pub rank_n_km1: usize,
    pub holds: bool,
}

/// Verifies the Mayer-Vietoris rank identity for `parent = x union y` in every
/// dimension. All ranks are computed independently over GF(2); nothing is
/// solved for.
pub fn mayer_vietoris_check(
    parent: &SimplicialComplex,
    x: &SimplicialComplex,
    y: &SimplicialComplex,
) -> Result<Vec<MvDimReport>, HomologyError> {
    if !x.is_subcomplex_of(parent) {
        return Err(HomologyError::NotSubcomplex { which: "X" });
    }
    if !y.is_subcomplex_of(parent) {
        return Err(HomologyError::NotSubcomplex { which: "Y" });
    }
    if x.union(y) != *parent {
        return Err(HomologyError::UnionMismatch);
    }
    let inter = x.intersection(y);
    let (pv, xv, yv, iv) = (
        parent.boundary_matrices(),
        x.boundary_matrices(),
        y.boundary_matrices(),
        inter.boundary_matrices(),
    );
    let padded = |b: &[usize], k: usize| -> usize { b.get(k).copied().unwrap_or(0) };
    let (bu, bx, by, bi) = (
        homology_gf2(&pv),
        homology_gf2(&xv),
        homology_gf2(&yv),
        homology_gf2(&iv),
    );

    // rank j_k = dim( span{(z,z)} + B_k(X) (+) B_k(Y) ) - rank B_k(X) - rank B_k(Y)
    // with z running over a cycle basis of the intersection embedded in the
    // chain spaces of X and Y.
    let rank_j = |k: usize| -> usize {
        let zin = kernel_basis_gf2(&iv.boundary_bits(k));
        if zin.is_empty() {
            return 0;
        }
        let mx = xv.cell_count(k);
        let my = yv.cell_count(k);
        let bx_cols = xv.boundary_bits(k + 1);
        let by_cols = yv.boundary_bits(k + 1);
        let rx = rank_gf2(&bx_cols);
        let ry = rank_gf2(&by_cols);
        let mut columns: Vec<BitVec> = Vec::new();
        for z in &zin {
            let mut col = BitVec::zeros(mx + my);
            for idx in z.ones() {
                let cell = &inter.cells(k)[idx];
                col.set(x.position(cell).expect("intersection cell lies in X"), true);
                col.set(
                    mx + y.position(cell).expect("intersection cell lies in Y"),
                    true,
                );
            }
            columns.push(col);
        }
        for j in 0..bx_cols.cols() {
            let src = bx_cols.column(j);
            let mut col = BitVec::zeros(mx + my);
            for i in src.ones() {
                col.set(i, true);
            }
            columns.push(col);
        }
        for j in 0..by_cols.cols() {
            let src = by_cols.column(j);
            let mut col = BitVec::zeros(mx + my);
            for i in src.ones() {
                col.set(mx + i, true);
            }
            columns.push(col);
        }
        let total = rank_gf2(&BitMatrix::from_columns(mx + my, &columns));
        total - rx - ry
    };

    let top = pv.top_dim();
    let mut reports = Vec::new();
    let mut prev_rank_n = 0usize;
    for k in 0..=top {
        let rank_n_k = padded(&bi, k).saturating_sub(rank_j(k));
        let union_betti = padded(&bu, k);
        let x_betti = padded(&bx, k);
        let y_betti = padded(&by, k);
        let intersection_betti = padded(&bi, k);
        let holds = union_betti as i64
            == x_betti as i64 + y_betti as i64 - intersection_betti as i64
                + rank_n_k as i64
                + prev_rank_n as i64;
        reports.push(MvDimReport {
            k,
            union_betti,
            x_betti,
            y_betti,
            intersection_betti,
            rank_n_k,
            rank_n_km1: prev_rank_n,
            holds,
        });
        prev_rank_n = rank_n_k;
    }
    Ok(reports)
}

/// Euler characteristic two ways: alternating cell counts and alternating Betti
/// numbers. Equal by the Euler-Poincare theorem.
pub fn euler_poincare(view: &ChainComplexView) -> (i64, i64) {
    let summary = homology_z(view);
    (summary.euler, summary.euler_from_betti())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn betti_torsion(c: &SimplicialComplex) -> Vec<(usize, Vec<u64>)> {
        homology_z(&c.boundary_matrices())
            .groups
            .into_iter()
            .map(|g| (g.betti, g.torsion))
            .collect()
    }

    #[test]
    fn canonical_spaces() {
        assert_eq!(
            betti_torsion(&fixtures::triangle()),
            vec![(1, vec![]), (0, vec![]), (0, vec![])]
        );
        assert_eq!(
            betti_torsion(&fixtures::hollow_triangle()),
            vec![(1, vec![]), (1, vec![])]
        );
        assert_eq!(
            betti_torsion(&fixtures::sphere2()),
            vec![(1, vec![]), (0, vec![]), (1, vec![])]
        );
        assert_eq!(
            betti_torsion(&fixtures::torus9()),
            vec![(1, vec![]), (2, vec![]), (1, vec![])]
        );
        assert_eq!(
            betti_torsion(&fixtures::projective_plane()),
            vec![(1, vec![]), (0, vec![2]), (0, vec![])]
        );
    }

    #[test]
    fn triangulation_independence_for_the_torus() {
        assert_eq!(
            betti_torsion(&fixtures::torus9()),
            betti_torsion(&fixtures::torus7())
        );
    }

    #[test]
    fn gf2_betti_differ_from_integral_on_the_projective_plane() {
        // Over GF(2) the Z/2 torsion contributes in dimensions 1 and 2.
        let rp2 = fixtures::projective_plane().boundary_matrices();
        assert_eq!(homology_gf2(&rp2), vec![1, 1, 1]);
        let torus = fixtures::torus9().boundary_matrices();
        assert_eq!(homology_gf2(&torus), vec![1, 2, 1]);
    }

    #[test]
    fn euler_poincare_agrees_on_fixtures() {
        for c in [
            fixtures::triangle(),
            fixtures::hollow_triangle(),
            fixtures::sphere2(),
            fixtures::torus9(),
            fixtures::projective_plane(),
            fixtures::wedge_two_circles_sphere(),
            fixtures::two_triangles(),
        ] {
            let (counts, betti) = euler_poincare(&c.boundary_matrices());
            assert_eq!(counts, betti);
        }
    }

    #[test]
    fn cohomology_betti_match_homology_over_gf2() {
        for c in [
            fixtures::hollow_triangle(),
            fixtures::torus9(),
            fixtures::projective_plane(),
            fixtures::wedge_two_circles_sphere(),
        ] {
            let view = c.boundary_matrices();
            let betti = homology_gf2(&view);
            for (k, &b) in betti.iter().enumerate() {
                let basis = cohomology_gf2(&view, k);
                assert_eq!(basis.betti, b, "dimension {k}");
                // Representatives really are cocycles.
                let delta = view.boundary_bits(k + 1).transpose();
                for r in &basis.representatives {
                    assert!(delta.apply(r).is_zero());
                }
            }
        }
    }

    #[test]
    fn hollow_triangle_cocycle_representative() {
        // One H^1 class; any representative evaluates 1 on an odd number of the
        // three edges (the sum over all edges of a 1-cocycle generator is 1 on
        // the fundamental class).
        let view = fixtures::hollow_triangle().boundary_matrices();
        let basis = cohomology_gf2(&view, 1);
        assert_eq!(basis.betti, 1);
        assert_eq!(basis.representatives[0].count_ones() % 2, 1);
    }

    #[test]
    fn torus_cup_product_is_nondegenerate_and_wedge_is_trivial() {
        let torus = fixtures::torus9();
        let tv = torus.boundary_matrices();
        let h1 = cohomology_gf2(&tv, 1);
        assert_eq!(h1.betti, 2);
        let delta1 = tv.boundary_bits(2).transpose();
        let coboundary_of = |v: &BitVec| crate::algebra::solve_gf2(&delta1, v).is_some();
        let mut nontrivial = false;
        for a in &h1.representatives {
            for b in &h1.representatives {
                let cup = cup_product_gf2(&torus, a, 1, b, 1).unwrap();
                if !coboundary_of(&cup) {
                    nontrivial = true;
                }
            }
        }
        assert!(nontrivial, "torus cup pairing must hit H^2");

        let wedge = fixtures::wedge_two_circles_sphere();
        let wv = wedge.boundary_matrices();
        let wh1 = cohomology_gf2(&wv, 1);
        assert_eq!(wh1.betti, 2);
        let wdelta1 = wv.boundary_bits(2).transpose();
        for a in &wh1.representatives {
            for b in &wh1.representatives {
                let cup = cup_product_gf2(&wedge, a, 1, b, 1).unwrap();
                assert!(
                    crate::algebra::solve_gf2(&wdelta1, &cup).is_some(),
                    "wedge cup products must be coboundaries"
                );
            }
        }
    }

    #[test]
    fn mv_arcs_decomposition_of_the_circle() {
        // X = two edges of the hollow triangle, Y = the third; X cap Y = 2 points.
        let parent = fixtures::hollow_triangle();
        let x = SimplicialComplex::from_cells([[0usize, 1].as_slice(), &[1, 2]]).unwrap();
        let y = SimplicialComplex::from_cells([[0usize, 2].as_slice()]).unwrap();
        let reports = mayer_vietoris_check(&parent, &x, &y).unwrap();
        assert!(reports.iter().all(|r| r.holds));
        assert_eq!(reports[0].rank_n_k, 1);
        assert_eq!(reports[1].rank_n_km1, 1);
        assert_eq!(reports[1].union_betti, 1);
    }

    #[test]
    fn mv_torus_strips() {
        let parent = fixtures::torus9();
        let x = fixtures::torus9_strip_x();
        let y = fixtures::torus9_strip_y();
        let reports = mayer_vietoris_check(&parent, &x, &y).unwrap();
        assert!(reports.iter().all(|r| r.holds));
        assert_eq!(reports[1].rank_n_k, 1);
        assert_eq!(reports[1].union_betti, 2);
    }

    #[test]
    fn mv_disjoint_union() {
        let parent = fixtures::two_triangles();
        let x = SimplicialComplex::from_cells([[0usize, 1, 2].as_slice()]).unwrap();
        let y = SimplicialComplex::from_cells([[3usize, 4, 5].as_slice()]).unwrap();
        let reports = mayer_vietoris_check(&parent, &x, &y).unwrap();
        assert!(reports.iter().all(|r| r.holds));
        assert_eq!(reports[0].union_betti, 2);
        assert_eq!(reports[0].rank_n_k, 0);
    }

    #[test]
    fn mv_validation_errors() {
        let parent = fixtures::hollow_triangle();
        let x = SimplicialComplex::from_cells([[0usize, 1].as_slice()]).unwrap();
        let stranger = SimplicialComplex::from_cells([[7usize, 8].as_slice()]).unwrap();
        assert_eq!(
            mayer_vietoris_check(&parent, &x, &stranger),
            Err(HomologyError::NotSubcomplex { which: "Y" })
        );
        let y_small = SimplicialComplex::from_cells([[1usize, 2].as_slice()]).unwrap();
        assert_eq!(
            mayer_vietoris_check(&parent, &x, &y_small),
            Err(HomologyError::UnionMismatch)
        );
    }

    #[test]
    fn json_shape_for_the_projective_plane() {
        let summary = homology_z(&fixtures::projective_plane().boundary_matrices());
        let json = serde_json::to_string(&summary.to_json_value()).unwrap();
        assert_eq!(
            json,
            r#"{"dims":[{"k":0,"betti":1,"torsion":[]},{"k":1,"betti":0,"torsion":[2]},{"k":2,"betti":0,"torsion":[]}],"euler":1}"#
        );
    }
}
