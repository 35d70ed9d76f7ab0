//! Exact homotopy Kan extensions of poset-indexed diagrams of chain
//! complexes over a field, membership tests for subcategories cut out by
//! vanishing, isomorphism and bicartesian-square conditions, and the
//! executable equivalence between staircase diagrams `A_tilde(n,2)` and
//! representations of the linear quiver `A_n`.
//!
//! Layers, bottom-up:
//! * [`field`], [`matrix`]: exact arithmetic and Gaussian elimination;
//! * [`homalg`]: chain complexes, chain maps, cones, homology;
//! * [`poset`]: finite posets, monotone maps and the named shapes;
//! * [`diagram`]: strict diagrams, restriction, homotopy Kan extensions;
//! * [`membership`]: subcategory predicates and unit certification;
//! * [`pipeline`]: the equivalence, straightening, mesh and filtration checks.

pub mod acceptance;
pub mod diagram;
pub mod error;
pub mod field;
pub mod homalg;
pub mod json;
pub mod matrix;
pub mod membership;
pub mod pipeline;
pub mod poset;
pub mod random;

pub use error::{Error, Result};
