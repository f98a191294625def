use std::collections::{BTreeSet, HashMap};

use num_traits::Signed;

use super::cell::delaunay_cell_at;
use super::voronoi::{relevant_vectors, voronoi_vertices};
use super::{DelaunayCell, DelaunayError};
use crate::form::GramForm;
use crate::linalg::{
    enumerate_ellipsoid, lower_facets_through, nullspace, rat, rat_int, solve_linear, IntVec, Rat, RatMatrix,
    RatVec,
};

pub const DEFAULT_RANK_LIMIT: usize = 5;

#[derive(Clone, Copy, Debug)]
pub struct StarOptions {
    /// Largest rank for which the full star is computed.
    pub rank_limit: usize,
    /// Cross-check against the lifted-hull route (rank <= 3) and run the
    /// empty-sphere and symmetry checks.
    pub verify: bool,
}

impl Default for StarOptions {
    fn default() -> Self {
        StarOptions { rank_limit: DEFAULT_RANK_LIMIT, verify: false }
    }
}

/// All Delaunay cells containing the origin, with their face relations.
#[derive(Clone, Debug)]
pub struct StarComplex {
    form: GramForm,
    cells: Vec<DelaunayCell>,
    face_relations: Vec<(usize, usize)>,
    max_cells: Vec<usize>,
    index: HashMap<Vec<IntVec>, usize>,
    /// Facets (within the star) of each cell.
    facets: Vec<Vec<usize>>,
    /// Inward normals of the facets through 0 of each maximal cell.
    cone_normals: HashMap<usize, Vec<IntVec>>,
}

/// `Star(0)` by the Voronoi-vertex route; with `opts.verify` also by the
/// lifted lower hull, and the two must agree.
pub fn star(form: &GramForm, opts: StarOptions) -> Result<StarComplex, DelaunayError> {
    let r = form.rank();
    if r > opts.rank_limit {
        return Err(DelaunayError::RankLimit { rank: r, limit: opts.rank_limit });
    }
    let s = star_via_voronoi(form)?;
    if opts.verify {
        s.check_invariants()?;
        if r <= 3 {
            let h = star_via_lower_hull(form)?;
            if !s.same_cells(&h) {
                return Err(DelaunayError::MethodsDisagree { voronoi: s.counts(), hull: h.counts() });
            }
        }
    }
    Ok(s)
}

/// Maximal cells from the vertices of `V(0)`, then closure under
/// intersection.
pub fn star_via_voronoi(form: &GramForm) -> Result<StarComplex, DelaunayError> {
    let maximal: Vec<Vec<IntVec>> =
        voronoi_vertices(form).iter().map(|a| delaunay_cell_at(form, a).vertices().to_vec()).collect();
    StarComplex::from_maximal(form, maximal)
}

/// Lower facets through the apex of the lifted points `(x, B(x,x))`,
/// enlarging the point set until every facet's circumsphere is covered.
pub fn star_via_lower_hull(form: &GramForm) -> Result<StarComplex, DelaunayError> {
    let r = form.rank();
    let mut radius = relevant_vectors(form).iter().map(|v| form.norm(v)).max().unwrap_or(1);
    let gram = form.matrix();
    loop {
        let pts = enumerate_ellipsoid(form, &RatVec::zero(r), &rat_int(radius));
        let apex = pts.iter().position(|p| p.is_zero()).expect("origin is enumerated");
        let lifted: Vec<(IntVec, Rat)> = pts.iter().map(|p| (p.clone(), rat_int(form.norm(p)))).collect();
        let facets = lower_facets_through(&lifted, apex)?;
        let mut maximal = Vec::with_capacity(facets.len());
        let mut covered = true;
        for f in &facets {
            // normal = 2Bα
            let half = f.normal.scale(&rat(1, 2));
            let alpha = solve_linear(&gram, &half).expect("gram matrix is invertible");
            if form.norm_rat(&alpha) * rat_int(4) > rat_int(radius) {
                covered = false;
                break;
            }
            maximal.push(f.incident.clone());
        }
        if covered {
            return StarComplex::from_maximal(form, maximal);
        }
        radius *= 2;
    }
}

/// Inward integer normals of `cell`'s facets through 0, from the nullspace
/// of each facet's Delaunay vectors.
fn cone_normals(cell: &DelaunayCell, facets: &[&DelaunayCell]) -> Vec<IntVec> {
    let r = cell.rank();
    facets
        .iter()
        .map(|f| {
            let n = int_nullspace(&f.delaunay_vectors(), r)
                .into_iter()
                .next()
                .expect("facet through 0 spans a hyperplane");
            orient(n, cell.vertices(), &IntVec::zero(r))
        })
        .collect()
}

/// Flips `n` so that `n·(x − base) >= 0` on `points`, positive somewhere.
pub(crate) fn orient(n: IntVec, points: &[IntVec], base: &IntVec) -> IntVec {
    let b = n.dot(base);
    match points.iter().map(|p| n.dot(p) - b).find(|&v| v != 0) {
        Some(v) if v < 0 => -&n,
        _ => n,
    }
}

/// Primitive integer basis of `{f : f·v = 0 for all v in rows}`.
pub(crate) fn int_nullspace(rows: &[IntVec], r: usize) -> Vec<IntVec> {
    if rows.is_empty() {
        return (0..r).map(|i| IntVec::unit(r, i)).collect();
    }
    let raw: Vec<Vec<i64>> = rows.iter().map(|v| v.0.clone()).collect();
    nullspace(&RatMatrix::from_int_rows(&raw)).iter().map(RatVec::primitive_int).collect()
}

impl StarComplex {
    /// Assembles the star from the vertex sets of its maximal cells.
    pub fn from_maximal(form: &GramForm, maximal: Vec<Vec<IntVec>>) -> Result<Self, DelaunayError> {
        let mut maximal: Vec<Vec<IntVec>> = maximal
            .into_iter()
            .map(|mut v| {
                v.sort();
                v
            })
            .collect();
        maximal.sort();
        maximal.dedup();
        let mut all: BTreeSet<Vec<IntVec>> = maximal.iter().cloned().collect();
        let mut work = maximal.clone();
        while let Some(c) = work.pop() {
            for m in &maximal {
                let inter: Vec<IntVec> = c.iter().filter(|v| m.binary_search(v).is_ok()).cloned().collect();
                if !inter.is_empty() && all.insert(inter.clone()) {
                    work.push(inter);
                }
            }
        }
        let mut cells = all
            .into_iter()
            .map(|v| DelaunayCell::from_vertices(form, v))
            .collect::<Result<Vec<_>, _>>()?;
        cells.sort();
        let index: HashMap<Vec<IntVec>, usize> =
            cells.iter().enumerate().map(|(i, c)| (c.vertices().to_vec(), i)).collect();
        let mut face_relations = Vec::new();
        let mut facets = vec![Vec::new(); cells.len()];
        for (j, big) in cells.iter().enumerate() {
            for (i, small) in cells.iter().enumerate() {
                if small.dim() < big.dim() && small.is_face_of(big) {
                    face_relations.push((i, j));
                    if small.dim() + 1 == big.dim() {
                        facets[j].push(i);
                    }
                }
            }
        }
        face_relations.sort();
        let r = form.rank();
        let max_cells: Vec<usize> = (0..cells.len()).filter(|&i| cells[i].dim() == r).collect();
        let cone_normals = max_cells
            .iter()
            .map(|&i| {
                let fs: Vec<&DelaunayCell> = facets[i].iter().map(|&f| &cells[f]).collect();
                (i, cone_normals(&cells[i], &fs))
            })
            .collect();
        Ok(StarComplex { form: form.clone(), cells, face_relations, max_cells, index, facets, cone_normals })
    }

    pub fn form(&self) -> &GramForm {
        &self.form
    }

    pub fn rank(&self) -> usize {
        self.form.rank()
    }

    /// Cells sorted by dimension, then vertex list.
    pub fn cells(&self) -> &[DelaunayCell] {
        &self.cells
    }

    pub fn cell(&self, i: usize) -> &DelaunayCell {
        &self.cells[i]
    }

    pub fn max_cells(&self) -> &[usize] {
        &self.max_cells
    }

    /// `(i, j)` with `cells[i]` a proper face of `cells[j]`.
    pub fn face_relations(&self) -> &[(usize, usize)] {
        &self.face_relations
    }

    pub fn facets_in_star(&self, i: usize) -> &[usize] {
        &self.facets[i]
    }

    pub fn lookup(&self, vertices: &[IntVec]) -> Option<usize> {
        self.index.get(vertices).copied()
    }

    pub fn index_of(&self, cell: &DelaunayCell) -> Option<usize> {
        self.lookup(cell.vertices())
    }

    /// Number of cells of each dimension `0..=r`.
    pub fn counts(&self) -> Vec<usize> {
        let mut c = vec![0; self.rank() + 1];
        for cell in &self.cells {
            c[cell.dim()] += 1;
        }
        c
    }

    /// Maximal cells containing `cells[i]`.
    pub fn maximal_over(&self, i: usize) -> Vec<usize> {
        self.max_cells.iter().copied().filter(|&j| self.cells[i].is_face_of(&self.cells[j])).collect()
    }

    /// Cells of the star containing `cells[i]` (including itself).
    pub fn cofaces(&self, i: usize) -> Vec<usize> {
        (0..self.cells.len()).filter(|&j| self.cells[i].is_face_of(&self.cells[j])).collect()
    }

    /// All lattice points of `Star(0)`, sorted.
    pub fn lattice_points(&self) -> Vec<IntVec> {
        let set: BTreeSet<IntVec> = self.max_cells.iter().flat_map(|&i| self.cells[i].vertices().iter().cloned()).collect();
        set.into_iter().collect()
    }

    /// The star cell equal to `cell − v`, located by translating by one of
    /// its vertices.
    pub fn locate_translate(&self, cell: &DelaunayCell, v: &IntVec) -> Option<usize> {
        let mut verts: Vec<IntVec> = cell.vertices().iter().map(|x| x - v).collect();
        verts.sort();
        self.lookup(&verts)
    }

    /// Facets of an arbitrary Delaunay cell (not necessarily in the star):
    /// every facet contains some vertex `w`, so it is a translate of a facet
    /// of `cell − w` in the star.
    pub fn facets_of(&self, cell: &DelaunayCell) -> Result<Vec<DelaunayCell>, DelaunayError> {
        let mut out: BTreeSet<DelaunayCell> = BTreeSet::new();
        for w in cell.vertices() {
            let i = self.locate_translate(cell, w).ok_or_else(|| DelaunayError::NotInStar(cell.vertices().to_vec()))?;
            for &f in &self.facets[i] {
                out.insert(self.cells[f].translate(w));
            }
        }
        Ok(out.into_iter().collect())
    }

    /// `x ∈ Cone(0, cells[i])` for a maximal cell `i`.
    pub fn cone_contains(&self, i: usize, x: &RatVec) -> bool {
        let normals = self.cone_normals.get(&i).expect("cone normals exist for maximal cells");
        normals.iter().all(|n| !x.dot_int(n).is_negative())
    }

    pub fn cone_normals(&self, i: usize) -> &[IntVec] {
        self.cone_normals.get(&i).map_or(&[], Vec::as_slice)
    }

    /// Same cell set (as vertex sets).
    pub fn same_cells(&self, other: &StarComplex) -> bool {
        self.cells.len() == other.cells.len() && self.cells.iter().zip(&other.cells).all(|(a, b)| a == b)
    }

    /// Empty-sphere for maximal cells, nearest-set characterisation for all
    /// cells (via the barycenter of the dual Voronoi face), central symmetry
    /// and closure under faces.
    pub fn check_invariants(&self) -> Result<(), DelaunayError> {
        let form = &self.form;
        for &i in &self.max_cells {
            let c = &self.cells[i];
            if !c.sphere_violations(form).is_empty() {
                return Err(DelaunayError::EmptySphere(c.vertices().to_vec()));
            }
        }
        for (i, c) in self.cells.iter().enumerate() {
            let holes = self.maximal_over(i);
            let mut center = RatVec::zero(self.rank());
            for &j in &holes {
                center = &center + self.cells[j].hole();
            }
            let center = center.scale(&rat(1, holes.len() as i64));
            if delaunay_cell_at(form, &center) != *c {
                return Err(DelaunayError::EmptySphere(c.vertices().to_vec()));
            }
            if self.index_of(&c.neg()).is_none() {
                return Err(DelaunayError::Asymmetric(c.vertices().to_vec()));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(v: &[i64]) -> IntVec {
        IntVec(v.to_vec())
    }

    fn verify() -> StarOptions {
        StarOptions { verify: true, ..StarOptions::default() }
    }

    #[test]
    fn rank_one_star() {
        let s = star(&GramForm::new(vec![vec![2]], None).unwrap(), verify()).unwrap();
        assert_eq!(s.counts(), vec![1, 2]);
        let verts: Vec<&[IntVec]> = s.cells().iter().map(|c| c.vertices()).collect();
        assert_eq!(verts, vec![&[iv(&[0])][..], &[iv(&[-1]), iv(&[0])][..], &[iv(&[0]), iv(&[1])][..]]);
    }

    #[test]
    fn square_star() {
        let s = star(&GramForm::identity(2), verify()).unwrap();
        assert_eq!(s.counts(), vec![1, 4, 4]);
        assert_eq!(s.lattice_points().len(), 9);
    }

    #[test]
    fn hexagonal_star() {
        let s = star(&GramForm::new(vec![vec![2, -1], vec![-1, 2]], None).unwrap(), verify()).unwrap();
        assert_eq!(s.counts(), vec![1, 6, 6]);
        assert_eq!(s.lattice_points().len(), 7);
    }

    #[test]
    fn rank_limit_is_enforced() {
        let e = star(&GramForm::identity(3), StarOptions { rank_limit: 2, verify: false }).unwrap_err();
        assert_eq!(e, DelaunayError::RankLimit { rank: 3, limit: 2 });
    }

    #[test]
    fn facets_of_a_translated_triangle() {
        let f = GramForm::new(vec![vec![2, -1], vec![-1, 2]], None).unwrap();
        let s = star(&f, StarOptions::default()).unwrap();
        let tri = DelaunayCell::from_vertices(&f, vec![iv(&[5, 3]), iv(&[6, 3]), iv(&[6, 4])]).unwrap();
        let fs = s.facets_of(&tri).unwrap();
        assert_eq!(fs.len(), 3);
        assert!(fs.iter().all(|e| e.dim() == 1 && e.is_face_of(&tri)));
    }

    #[test]
    fn square_cones() {
        let s = star(&GramForm::identity(2), StarOptions::default()).unwrap();
        let first = s.max_cells()[0];
        let hits = s.max_cells().iter().filter(|&&i| s.cone_contains(i, &RatVec::from_ints(&[1, 0]))).count();
        assert_eq!(hits, 2);
        assert_eq!(s.cone_normals(first).len(), 2);
    }
}
