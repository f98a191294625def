//! The polytopal chain complex of `Del_B / dX` and of the cells through a
//! point, with ranks over `ℚ`.
//!
//! A `k`-cell is oriented by the frame of edge vectors from its least
//! vertex to the greedily chosen affinely independent vertices, in
//! lexicographic order. The incidence of a facet is the sign of
//! `(outward vector, facet frame)` measured against the cell frame.

use std::collections::HashMap;

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::delaunay::{minimal_cell_containing, DelaunayCell, DelaunayError, StarComplex};
use crate::linalg::{rat, rational_rank, solve_linear, IntVec, RatMatrix, RatVec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComplexError {
    #[error("period must be positive, got {0}")]
    BadPeriod(i64),
    #[error("point {0} is not in (1/{1})X")]
    NotTorsion(RatVec, i64),
    #[error("boundary of boundary is nonzero in degree {0}")]
    NotAComplex(usize),
    #[error("cells through {point} are not contractible: homology {homology:?}")]
    NotContractible { point: RatVec, homology: Vec<usize> },
    #[error(transparent)]
    Delaunay(#[from] DelaunayError),
}

/// Finite chain complex over `ℤ`: `boundary[k]` maps `k`-chains to
/// `(k−1)`-chains (`boundary[0]` is empty), stored as rows × columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplex {
    pub counts: Vec<usize>,
    pub boundary: Vec<Vec<Vec<i64>>>,
}

impl ChainComplex {
    fn rank_of(&self, k: usize) -> usize {
        if k == 0 || k >= self.counts.len() || self.counts[k] == 0 || self.counts[k - 1] == 0 {
            return 0;
        }
        rational_rank(&RatMatrix::from_int_rows(&self.boundary[k]))
    }

    /// `dim H_k = n_k − rank ∂_k − rank ∂_{k+1}`; cohomology has the same
    /// dimensions over `ℚ`.
    pub fn betti(&self) -> Vec<usize> {
        (0..self.counts.len()).map(|k| self.counts[k] - self.rank_of(k) - self.rank_of(k + 1)).collect()
    }

    pub fn euler(&self) -> i64 {
        self.counts.iter().enumerate().map(|(k, &n)| if k % 2 == 0 { n as i64 } else { -(n as i64) }).sum()
    }

    /// `∂_{k−1} ∘ ∂_k = 0` for every `k`.
    pub fn check_boundary_squared(&self) -> Result<(), ComplexError> {
        for k in 2..self.counts.len() {
            let (a, b) = (&self.boundary[k - 1], &self.boundary[k]);
            for i in 0..self.counts[k - 2] {
                for j in 0..self.counts[k] {
                    let s: i64 = (0..self.counts[k - 1]).map(|m| a[i][m] * b[m][j]).sum();
                    if s != 0 {
                        return Err(ComplexError::NotAComplex(k));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Cohomology dimensions `h^0..h^r` and the Euler characteristic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologyReport {
    pub dims: Vec<usize>,
    pub euler: i64,
}

/// Incidence number `[σ : f]` of a facet `f` of `σ` under the frame
/// orientations.
pub fn incidence(cell: &DelaunayCell, facet: &DelaunayCell) -> i64 {
    let k = cell.dim();
    let r = cell.rank();
    let frame_vectors = |c: &DelaunayCell| -> Vec<IntVec> {
        let idx = c.frame();
        let v0 = &c.vertices()[idx[0]];
        idx[1..].iter().map(|&i| &c.vertices()[i] - v0).collect()
    };
    let basis = frame_vectors(cell);
    let outside = cell.vertices().iter().find(|v| !facet.contains_vertex(v)).expect("a facet misses a vertex");
    let mut vecs = vec![facet.lexmin() - outside];
    vecs.extend(frame_vectors(facet));
    let cols: Vec<Vec<i64>> = (0..r).map(|i| basis.iter().map(|b| b[i]).collect()).collect();
    let m = RatMatrix::from_int_rows(&cols);
    let coords: Vec<Vec<_>> = vecs
        .iter()
        .map(|v| solve_linear(&m, &v.to_rat()).expect("facet vectors lie in the cell's span").0)
        .collect();
    debug_assert_eq!(coords.len(), k);
    let det = RatMatrix::from_rows(coords).determinant();
    if det.is_positive() {
        1
    } else if det.is_negative() {
        -1
    } else {
        panic!("degenerate facet frame")
    }
}

/// Representative of `cell` mod `dX` with least vertex in `[0, d)^r`.
fn canonical(cell: &DelaunayCell, d: i64) -> DelaunayCell {
    let w = cell.lexmin();
    let (_, rem) = w.div_rem_floor(d);
    cell.translate(&(&rem - w))
}

/// `Del_B / dX` with oriented boundary maps.
#[derive(Clone, Debug)]
pub struct QuotientComplex {
    period: i64,
    classes: Vec<Vec<DelaunayCell>>,
    chain: ChainComplex,
}

impl QuotientComplex {
    pub fn period(&self) -> i64 {
        self.period
    }

    /// Canonical representatives by dimension, sorted.
    pub fn classes(&self) -> &[Vec<DelaunayCell>] {
        &self.classes
    }

    pub fn class_counts(&self) -> Vec<usize> {
        self.chain.counts.clone()
    }

    pub fn chain(&self) -> &ChainComplex {
        &self.chain
    }

    pub fn euler(&self) -> i64 {
        self.chain.euler()
    }
}

/// Every cell of `Del_B` is `σ + x` for a unique star cell `σ` with least
/// vertex `0`; modulo `dX`, `x` ranges over `[0, d)^r`.
pub fn quotient_complex(star: &StarComplex, d: i64) -> Result<QuotientComplex, ComplexError> {
    if d <= 0 {
        return Err(ComplexError::BadPeriod(d));
    }
    let r = star.rank();
    let zero = IntVec::zero(r);
    let shifts = box_points(r, d);
    let mut classes: Vec<Vec<DelaunayCell>> = vec![Vec::new(); r + 1];
    for cell in star.cells().iter().filter(|c| *c.lexmin() == zero) {
        for t in &shifts {
            classes[cell.dim()].push(cell.translate(t));
        }
    }
    for cs in &mut classes {
        cs.sort();
    }
    let index: Vec<HashMap<&[IntVec], usize>> =
        classes.iter().map(|cs| cs.iter().enumerate().map(|(i, c)| (c.vertices(), i)).collect()).collect();
    let mut boundary = vec![Vec::new(); r + 1];
    for k in 1..=r {
        let mut m = vec![vec![0i64; classes[k].len()]; classes[k - 1].len()];
        for (j, cell) in classes[k].iter().enumerate() {
            for f in star.facets_of(cell)? {
                let i = index[k - 1][canonical(&f, d).vertices()];
                m[i][j] += incidence(cell, &f);
            }
        }
        boundary[k] = m;
    }
    let chain = ChainComplex { counts: classes.iter().map(Vec::len).collect(), boundary };
    Ok(QuotientComplex { period: d, classes, chain })
}

/// Points of `[0, d)^r` in lexicographic order.
pub fn box_points(r: usize, d: i64) -> Vec<IntVec> {
    let mut out = vec![IntVec(Vec::new())];
    for _ in 0..r {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..d).map(move |t| {
                    let mut q = p.0.clone();
                    q.push(t);
                    IntVec(q)
                })
            })
            .collect();
    }
    out
}

pub fn cohomology_dims(qc: &QuotientComplex) -> CohomologyReport {
    CohomologyReport { dims: qc.chain.betti(), euler: qc.euler() }
}

/// The cells of `Del_B` containing a point `z`, all of which contain its
/// minimal cell `σ_0`.
#[derive(Clone, Debug)]
pub struct LinkComplex {
    pub point: RatVec,
    pub minimal_cell: DelaunayCell,
    /// Cells by dimension `0..=r` (empty below `dim σ_0`).
    pub cells: Vec<Vec<DelaunayCell>>,
    pub chain: ChainComplex,
}

impl LinkComplex {
    /// Homology in the dual grading `W^i = H_{r−i}`: for the face complex
    /// of the dual Voronoi cell this is its cellular cohomology.
    pub fn dual_homology(&self) -> Vec<usize> {
        let mut h = self.chain.betti();
        h.reverse();
        h
    }

    pub fn is_contractible(&self) -> bool {
        let h = self.dual_homology();
        h[0] == 1 && h[1..].iter().all(Zero::is_zero)
    }
}

/// `z` must lie in `(1/d)X`; it is reduced to `[0,1)^r` first.
pub fn link_subcomplex(star: &StarComplex, d: i64, z: &RatVec) -> Result<LinkComplex, ComplexError> {
    if d <= 0 {
        return Err(ComplexError::BadPeriod(d));
    }
    if !z.scale(&rat(d, 1)).is_integral() {
        return Err(ComplexError::NotTorsion(z.clone(), d));
    }
    let z = RatVec(z.iter().map(|c| c - c.floor()).collect());
    let r = star.rank();
    let sigma0 = minimal_cell_containing(star.form(), &z)?;
    let w = sigma0.lexmin().clone();
    let based = sigma0.translate(&-&w);
    let i0 = star.index_of(&based).ok_or_else(|| DelaunayError::NotInStar(based.vertices().to_vec()))?;
    let mut cells: Vec<Vec<DelaunayCell>> = vec![Vec::new(); r + 1];
    for j in star.cofaces(i0) {
        let c = star.cell(j).translate(&w);
        cells[c.dim()].push(c);
    }
    for cs in &mut cells {
        cs.sort();
    }
    let mut boundary = vec![Vec::new(); r + 1];
    for k in 1..=r {
        let m = cells[k - 1]
            .iter()
            .map(|f| cells[k].iter().map(|c| if f.is_face_of(c) { incidence(c, f) } else { 0 }).collect())
            .collect();
        boundary[k] = m;
    }
    let chain = ChainComplex { counts: cells.iter().map(Vec::len).collect(), boundary };
    Ok(LinkComplex { point: z, minimal_cell: sigma0, cells, chain })
}

/// `h^0(L^d)` as the number of classes `z̄ ∈ (1/d)X / X`, each certified by
/// a contractible link; the witness is the minimal cell containing `z`.
pub fn h0_ld(star: &StarComplex, d: i64) -> Result<(usize, Vec<(RatVec, DelaunayCell)>), ComplexError> {
    let r = star.rank();
    let mut witnesses = Vec::new();
    for t in box_points(r, d) {
        let z = RatVec(t.iter().map(|&c| rat(c, d)).collect());
        let link = link_subcomplex(star, d, &z)?;
        link.chain.check_boundary_squared()?;
        if !link.is_contractible() {
            return Err(ComplexError::NotContractible { point: z, homology: link.dual_homology() });
        }
        witnesses.push((z, link.minimal_cell));
    }
    Ok((witnesses.len(), witnesses))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::delaunay::{star, StarOptions};
    use crate::form::GramForm;

    fn qc(gram: Vec<Vec<i64>>, d: i64) -> QuotientComplex {
        let s = star(&GramForm::new(gram, None).unwrap(), StarOptions::default()).unwrap();
        quotient_complex(&s, d).unwrap()
    }

    fn binomials(r: usize) -> Vec<usize> {
        let mut row = vec![1usize];
        for _ in 0..r {
            let mut next = vec![1];
            next.extend(row.windows(2).map(|w| w[0] + w[1]));
            next.push(1);
            row = next;
        }
        row
    }

    #[test]
    fn circle() {
        let q = qc(vec![vec![2]], 1);
        assert_eq!(q.class_counts(), vec![1, 1]);
        assert_eq!(q.chain().boundary[1], vec![vec![0]]);
        assert_eq!(cohomology_dims(&q).dims, vec![1, 1]);
    }

    #[test]
    fn square_torus() {
        let q = qc(vec![vec![1, 0], vec![0, 1]], 1);
        assert_eq!(q.class_counts(), vec![1, 2, 1]);
        assert!(q.chain().boundary[1].iter().flatten().all(|&x| x == 0));
        assert!(q.chain().boundary[2].iter().flatten().all(|&x| x == 0));
        assert_eq!(cohomology_dims(&q), CohomologyReport { dims: vec![1, 2, 1], euler: 0 });
    }

    #[test]
    fn hexagonal_torus() {
        let q = qc(vec![vec![2, -1], vec![-1, 2]], 1);
        assert_eq!(q.class_counts(), vec![1, 3, 2]);
        assert_eq!(cohomology_dims(&q).dims, vec![1, 2, 1]);
    }

    #[test]
    fn larger_periods() {
        for d in 1..=3 {
            let q = qc(vec![vec![2, -1], vec![-1, 2]], d);
            let n = (d * d) as usize;
            assert_eq!(q.class_counts(), vec![n, 3 * n, 2 * n]);
            q.chain().check_boundary_squared().unwrap();
            assert_eq!(cohomology_dims(&q).dims, binomials(2));
        }
    }

    #[test]
    fn edge_incidences() {
        let f = GramForm::identity(2);
        let e = DelaunayCell::from_vertices(&f, vec![IntVec(vec![0, 0]), IntVec(vec![1, 0])]).unwrap();
        let a = DelaunayCell::from_vertices(&f, vec![IntVec(vec![0, 0])]).unwrap();
        let b = DelaunayCell::from_vertices(&f, vec![IntVec(vec![1, 0])]).unwrap();
        assert_eq!(incidence(&e, &b), 1);
        assert_eq!(incidence(&e, &a), -1);
    }

    #[test]
    fn links_in_the_square_lattice() {
        let s = star(&GramForm::identity(2), StarOptions::default()).unwrap();
        let l = link_subcomplex(&s, 2, &RatVec(vec![rat(1, 2), rat(1, 2)])).unwrap();
        assert_eq!(l.chain.counts, vec![0, 0, 1]);
        assert_eq!(l.dual_homology(), vec![1, 0, 0]);
        let l = link_subcomplex(&s, 2, &RatVec(vec![rat(1, 2), rat(0, 1)])).unwrap();
        assert_eq!(l.chain.counts, vec![0, 1, 2]);
        assert!(l.is_contractible());
        let l = link_subcomplex(&s, 1, &RatVec::zero(2)).unwrap();
        assert_eq!(l.chain.counts, vec![1, 4, 4]);
        assert!(l.is_contractible());
        assert!(link_subcomplex(&s, 2, &RatVec(vec![rat(1, 3), rat(0, 1)])).is_err());
    }

    #[test]
    fn theta_counts() {
        let s = star(&GramForm::new(vec![vec![2, -1], vec![-1, 2]], None).unwrap(), StarOptions::default()).unwrap();
        for d in 1..=3 {
            assert_eq!(h0_ld(&s, d).unwrap().0, (d * d) as usize);
        }
    }

    #[test]
    fn box_enumeration() {
        assert_eq!(box_points(2, 2), vec![IntVec(vec![0, 0]), IntVec(vec![0, 1]), IntVec(vec![1, 0]), IntVec(vec![1, 1])]);
        assert_eq!(binomials(3), vec![1, 3, 3, 1]);
    }
}
