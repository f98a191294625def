//! Delaunay and Voronoi combinatorics of a positive-definite lattice.
//!
//! The Delaunay cell at `α` is the convex hull of the lattice points
//! nearest to `α`. Everything is periodic under `X`, so the finite model is
//! `Star(0)`, the cells containing the origin; any other cell is located by
//! translating one of its vertices to 0.

mod cell;
mod classify;
mod geometry;
mod locate;
mod star;
mod voronoi;

pub use cell::{affine_frame, affine_rank, delaunay_cell_at, hole_of, DelaunayCell};
pub use classify::{
    cellmates, is_generating, is_totally_generating, nilpotency, nilpotency_of_decomposition, primitive_vectors,
    primitive_vectors_of_cone, sample_maximal_cells, span_index, CellSample,
};
pub use geometry::CellGeometry;
pub use locate::{maximal_cell_containing, minimal_cell_containing, minimal_face};
pub use star::{star, star_via_lower_hull, star_via_voronoi, StarComplex, StarOptions, DEFAULT_RANK_LIMIT};
pub use voronoi::{relevant_vectors, voronoi_cell, voronoi_vertices, VoronoiCell};

pub(crate) use star::int_nullspace;
pub(crate) use voronoi::combinations;

use thiserror::Error;

use crate::linalg::{IntVec, LinalgError};

fn show(vs: &[IntVec]) -> String {
    vs.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DelaunayError {
    #[error("cell has no vertices")]
    EmptyCell,
    #[error("points are not cocircular: {}", show(.0))]
    NotCocircular(Vec<IntVec>),
    #[error("rank {rank} exceeds the full-star limit {limit}")]
    RankLimit { rank: usize, limit: usize },
    #[error("cell is not in the star: {}", show(.0))]
    NotInStar(Vec<IntVec>),
    #[error("cell of dimension {dim} is not maximal in rank {rank}")]
    NotMaximal { dim: usize, rank: usize },
    #[error("empty-sphere property fails for {}", show(.0))]
    EmptySphere(Vec<IntVec>),
    #[error("star is not centrally symmetric at {}", show(.0))]
    Asymmetric(Vec<IntVec>),
    #[error("star algorithms disagree: voronoi route {voronoi:?}, hull route {hull:?}")]
    MethodsDisagree { voronoi: Vec<usize>, hull: Vec<usize> },
    #[error("point location failed")]
    Location,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}
