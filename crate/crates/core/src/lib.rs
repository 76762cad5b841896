//! Computational topology on simplicial and cubical complexes.
//!
//! The crate builds complexes and filtrations from raw data (point clouds,
//! distance matrices, grayscale images) and computes their algebraic invariants:
//! integer and GF(2) homology, cohomology with cup products, persistent homology
//! with diagram analytics, discrete Morse data, and fundamental group
//! presentations. All computations are exact except where a floating-point
//! filtration value is itself the input.

pub mod algebra;
pub mod builders;
pub mod complex;
pub mod fixtures;
pub mod homology;
pub mod morse;
pub mod persistence;
pub mod pi1;

pub use algebra::{BitMatrix, BitVec, SparseIntMatrix};
pub use builders::{
    alpha_filtration_2d, cech_filtration, cubical_lower_star, delaunay_2d, rips_filtration,
    BuilderError, DistanceMatrix, GrayscaleImage, PointCloud, Triangulation2D,
};
pub use complex::{
    Cell, ChainComplexView, ComplexError, CubicalComplex, ElementaryCube, Filtration, Simplex,
    SimplicialComplex, SymbolTable,
};
pub use homology::{
    cohomology_gf2, cup_product_gf2, euler_poincare, homology_gf2, homology_z,
    mayer_vietoris_check, CohomologyBasis, HomologyError, HomologyGroup, HomologyJson,
    HomologySummary, MvDimReport,
};
pub use morse::{
    field_from_function, greedy_gradient, is_gradient, morse_complex, morse_inequalities,
    validate_field, DiscreteVectorField, FieldViolation, MorseComplexView, MorseError,
    MorseInequalityReport, VPath,
};
pub use persistence::{
    bottleneck_distance, compute_persistence, persistent_betti, Diagram, PersistenceError,
    PersistencePair,
};
pub use pi1::{
    abelianize, presentation, simplify, spanning_tree, AbelianInvariants, EdgePathPresentation,
    Pi1Error, SpanningTree,
};
