//! Combinatorics of Mumford degenerations of abelian varieties: Delaunay
//! decompositions of a positive-definite lattice, the degeneration ring
//! over a vertex star, the quotient complex of the special fiber, and the
//! invariants derived from them.

pub mod form;
pub mod linalg;

pub use form::{FormError, GramForm};
pub mod delaunay;
pub mod degeneration;
pub mod complex;
pub mod invariants;
