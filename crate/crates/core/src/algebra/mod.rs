//! Exact linear algebra: GF(2) kernels/ranks/solves and integer Smith normal form.
//!
//! These are the only arithmetic backends the rest of the crate uses. Everything
//! over the integers is arbitrary precision; everything over GF(2) is bit-packed.

mod bits;
mod snf;
mod sparse;

pub use bits::{kernel_basis_gf2, rank_gf2, solve_gf2, BitMatrix, BitVec};
pub use snf::{smith_normal_form, SnfResult};
pub use sparse::{rank_q, SparseIntMatrix};
