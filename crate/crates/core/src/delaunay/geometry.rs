use num_traits::Signed;

use super::star::orient;
use super::{int_nullspace, DelaunayCell, DelaunayError, StarComplex};
use crate::linalg::{rat_int, IntVec, RatVec};

/// Integral H-description of a Delaunay cell: `g·x = g·base` for every
/// equation `g`, and `f·x >= b` for every facet inequality `(f, b)`.
#[derive(Clone, Debug)]
pub struct CellGeometry {
    pub base: IntVec,
    pub equations: Vec<IntVec>,
    pub inequalities: Vec<(IntVec, i64)>,
}

impl CellGeometry {
    /// Built from the facets of `cell`, located through the star.
    pub fn of(star: &StarComplex, cell: &DelaunayCell) -> Result<Self, DelaunayError> {
        let r = cell.rank();
        let base = cell.lexmin().clone();
        let dirs: Vec<IntVec> = cell.vertices()[1..].iter().map(|v| v - &base).collect();
        let equations = if cell.dim() == 0 { int_nullspace(&[], r) } else { int_nullspace(&dirs, r) };
        let mut inequalities = Vec::new();
        if cell.dim() > 0 {
            for f in star.facets_of(cell)? {
                let fb = f.lexmin().clone();
                let fdirs: Vec<IntVec> = f.vertices()[1..].iter().map(|v| v - &fb).collect();
                let n = int_nullspace(&fdirs, r)
                    .into_iter()
                    .find(|n| dirs.iter().any(|d| n.dot(d) != 0))
                    .expect("a facet has a normal within the cell's span");
                let n = orient(n, cell.vertices(), &fb);
                let b = n.dot(&fb);
                inequalities.push((n, b));
            }
        }
        Ok(CellGeometry { base, equations, inequalities })
    }

    fn on_span(&self, p: &RatVec) -> bool {
        self.equations.iter().all(|g| p.dot_int(g) == rat_int(g.dot(&self.base)))
    }

    pub fn contains(&self, p: &RatVec) -> bool {
        self.on_span(p) && self.inequalities.iter().all(|(f, b)| !(p.dot_int(f) - rat_int(*b)).is_negative())
    }

    /// Membership in the relative interior.
    pub fn contains_relint(&self, p: &RatVec) -> bool {
        self.on_span(p) && self.inequalities.iter().all(|(f, b)| (p.dot_int(f) - rat_int(*b)).is_positive())
    }

    /// The same description for `k·cell`.
    pub fn dilate(&self, k: i64) -> CellGeometry {
        CellGeometry {
            base: self.base.scale(k),
            equations: self.equations.clone(),
            inequalities: self.inequalities.iter().map(|(f, b)| (f.clone(), b * k)).collect(),
        }
    }
}
