use std::cmp::Ordering;
use std::hash::{Hash, Hasher};

use num_traits::Zero;

use super::DelaunayError;
use crate::form::GramForm;
use crate::linalg::{closest_vectors, enumerate_ellipsoid, rat_int, rational_rank, solve_linear, IntVec, Rat, RatMatrix, RatVec};

/// A Delaunay cell, identified by its (sorted) vertex set.
///
/// `hole` is the circumcenter within the affine span of the vertices; for
/// maximal cells it is the hole `α` of the cell.
#[derive(Clone, Debug)]
pub struct DelaunayCell {
    vertices: Vec<IntVec>,
    dim: usize,
    hole: RatVec,
    radius_sq: Rat,
}

impl PartialEq for DelaunayCell {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices
    }
}

impl Eq for DelaunayCell {}

impl Hash for DelaunayCell {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.vertices.hash(state);
    }
}

impl PartialOrd for DelaunayCell {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Cells order by dimension, then by vertex list.
impl Ord for DelaunayCell {
    fn cmp(&self, other: &Self) -> Ordering {
        self.dim.cmp(&other.dim).then_with(|| self.vertices.cmp(&other.vertices))
    }
}

impl DelaunayCell {
    /// Builds the cell on `vertices`, computing its circumcenter. Does not
    /// check the empty-sphere property.
    pub fn from_vertices(form: &GramForm, mut vertices: Vec<IntVec>) -> Result<Self, DelaunayError> {
        vertices.sort();
        vertices.dedup();
        let (hole, radius_sq) = hole_of(form, &vertices)?;
        let dim = affine_rank(&vertices);
        Ok(DelaunayCell { vertices, dim, hole, radius_sq })
    }

    pub fn vertices(&self) -> &[IntVec] {
        &self.vertices
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn hole(&self) -> &RatVec {
        &self.hole
    }

    pub fn radius_sq(&self) -> &Rat {
        &self.radius_sq
    }

    pub fn rank(&self) -> usize {
        self.vertices[0].len()
    }

    pub fn is_maximal(&self) -> bool {
        self.dim == self.rank()
    }

    /// The lexicographically least vertex.
    pub fn lexmin(&self) -> &IntVec {
        &self.vertices[0]
    }

    pub fn contains_vertex(&self, v: &IntVec) -> bool {
        self.vertices.binary_search(v).is_ok()
    }

    pub fn is_face_of(&self, other: &DelaunayCell) -> bool {
        self.vertices.iter().all(|v| other.contains_vertex(v))
    }

    /// Nonzero vertices; for a cell containing 0 these are its Delaunay vectors.
    pub fn delaunay_vectors(&self) -> Vec<IntVec> {
        self.vertices.iter().filter(|v| !v.is_zero()).cloned().collect()
    }

    pub fn translate(&self, v: &IntVec) -> DelaunayCell {
        DelaunayCell {
            vertices: self.vertices.iter().map(|x| x + v).collect(),
            dim: self.dim,
            hole: self.hole.add_int(v),
            radius_sq: self.radius_sq.clone(),
        }
    }

    pub fn neg(&self) -> DelaunayCell {
        let mut vertices: Vec<IntVec> = self.vertices.iter().map(|x| -x).collect();
        vertices.sort();
        DelaunayCell {
            vertices,
            dim: self.dim,
            hole: RatVec(self.hole.iter().map(|c| -c).collect()),
            radius_sq: self.radius_sq.clone(),
        }
    }

    /// Lattice points strictly inside the circumsphere, or on it but not
    /// vertices. Empty for a genuine maximal Delaunay cell.
    pub fn sphere_violations(&self, form: &GramForm) -> Vec<IntVec> {
        enumerate_ellipsoid(form, &self.hole, &self.radius_sq)
            .into_iter()
            .filter(|x| !self.contains_vertex(x))
            .collect()
    }

    /// Vertex indices of the orientation frame: the lexicographically least
    /// vertex followed by the greedily chosen affinely independent vertices
    /// in lexicographic order.
    pub fn frame(&self) -> Vec<usize> {
        affine_frame(&self.vertices)
    }
}

/// Indices of an affine frame of `points` (first point, then greedy
/// affinely independent points in the given order).
pub fn affine_frame(points: &[IntVec]) -> Vec<usize> {
    let mut frame = vec![0];
    let mut rows: Vec<Vec<i64>> = Vec::new();
    for (i, p) in points.iter().enumerate().skip(1) {
        rows.push((p - &points[0]).0);
        if rational_rank(&RatMatrix::from_int_rows(&rows)) == rows.len() {
            frame.push(i);
        } else {
            rows.pop();
        }
    }
    frame
}

pub fn affine_rank(points: &[IntVec]) -> usize {
    affine_frame(points).len() - 1
}

/// Circumcenter `α` in the affine span of `vertices` and the squared
/// circumradius, from `2B(α − c, x − c) = B(x − c, x − c)` for a base vertex `c`.
pub fn hole_of(form: &GramForm, vertices: &[IntVec]) -> Result<(RatVec, Rat), DelaunayError> {
    let Some(c) = vertices.first() else {
        return Err(DelaunayError::EmptyCell);
    };
    let frame = affine_frame(vertices);
    if frame.len() == 1 {
        if vertices.iter().any(|v| v != c) {
            return Err(DelaunayError::NotCocircular(vertices.to_vec()));
        }
        return Ok((c.to_rat(), Rat::zero()));
    }
    let basis: Vec<IntVec> = frame[1..].iter().map(|&i| &vertices[i] - c).collect();
    let diffs: Vec<IntVec> = vertices.iter().skip(1).map(|v| v - c).collect();
    let rows: Vec<Vec<Rat>> =
        diffs.iter().map(|d| basis.iter().map(|e| rat_int(2 * form.pair(d, e))).collect()).collect();
    let rhs = RatVec(diffs.iter().map(|d| rat_int(form.norm(d))).collect());
    let t = solve_linear(&RatMatrix::from_rows(rows), &rhs).ok_or_else(|| DelaunayError::NotCocircular(vertices.to_vec()))?;
    let mut offset = RatVec::zero(c.len());
    for (ti, e) in t.iter().zip(&basis) {
        offset = &offset + &e.to_rat().scale(ti);
    }
    let radius_sq = form.norm_rat(&offset);
    Ok((offset.add_int(c), radius_sq))
}

/// The Delaunay cell whose vertices are the lattice points nearest to `alpha`.
pub fn delaunay_cell_at(form: &GramForm, alpha: &RatVec) -> DelaunayCell {
    let (nearest, _) = closest_vectors(form, alpha);
    DelaunayCell::from_vertices(form, nearest).expect("nearest points lie on a sphere around alpha")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;

    fn iv(v: &[i64]) -> IntVec {
        IntVec(v.to_vec())
    }

    fn a2() -> GramForm {
        GramForm::new(vec![vec![2, -1], vec![-1, 2]], None).unwrap()
    }

    #[test]
    fn unit_interval_hole() {
        let (h, r) = hole_of(&GramForm::identity(1), &[iv(&[0]), iv(&[1])]).unwrap();
        assert_eq!(h, RatVec(vec![rat(1, 2)]));
        assert_eq!(r, rat(1, 4));
    }

    #[test]
    fn unit_square_hole() {
        let verts = [iv(&[0, 0]), iv(&[1, 0]), iv(&[0, 1]), iv(&[1, 1])];
        let (h, r) = hole_of(&GramForm::identity(2), &verts).unwrap();
        assert_eq!(h, RatVec(vec![rat(1, 2), rat(1, 2)]));
        assert_eq!(r, rat(1, 2));
    }

    #[test]
    fn hexagonal_triangle_hole_solves_the_system() {
        let f = a2();
        let verts = [iv(&[0, 0]), iv(&[1, 0]), iv(&[1, 1])];
        let (h, r) = hole_of(&f, &verts).unwrap();
        // independent check: 2B(α, x) = B(x, x) on the two nonzero vertices
        let m = RatMatrix::from_rows(vec![vec![rat(4, 1), rat(-2, 1)], vec![rat(2, 1), rat(2, 1)]]);
        let expect = solve_linear(&m, &RatVec(vec![rat(2, 1), rat(2, 1)])).unwrap();
        assert_eq!(h, expect);
        assert_eq!(h, RatVec(vec![rat(2, 3), rat(1, 3)]));
        assert_eq!(r, rat(2, 3));
        let cell = DelaunayCell::from_vertices(&f, verts.to_vec()).unwrap();
        assert!(cell.sphere_violations(&f).is_empty());
    }

    #[test]
    fn rejects_non_cocircular_points() {
        let verts = [iv(&[0]), iv(&[1]), iv(&[3])];
        assert!(matches!(hole_of(&GramForm::identity(1), &verts), Err(DelaunayError::NotCocircular(_))));
    }

    #[test]
    fn cells_at_points_of_the_square_lattice() {
        let f = GramForm::identity(2);
        let sq = delaunay_cell_at(&f, &RatVec(vec![rat(1, 2), rat(1, 2)]));
        assert_eq!(sq.vertices().len(), 4);
        assert_eq!(sq.dim(), 2);
        let edge = delaunay_cell_at(&f, &RatVec(vec![rat(1, 2), rat(0, 1)]));
        assert_eq!(edge.vertices(), &[iv(&[0, 0]), iv(&[1, 0])]);
        assert_eq!(edge.dim(), 1);
        let pt = delaunay_cell_at(&f, &RatVec::zero(2));
        assert_eq!(pt.vertices(), &[iv(&[0, 0])]);
        assert_eq!(pt.dim(), 0);
    }

    #[test]
    fn frame_skips_dependent_vertices() {
        let verts = [iv(&[0, 0]), iv(&[0, 1]), iv(&[1, 0]), iv(&[1, 1])];
        assert_eq!(affine_frame(&verts), vec![0, 1, 2]);
        assert_eq!(affine_rank(&[iv(&[0, 0]), iv(&[1, 1]), iv(&[2, 2])]), 1);
    }
}
