use std::collections::BTreeSet;

use num_integer::Integer;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{combinations, maximal_cell_containing, DelaunayCell, DelaunayError, StarComplex};
use crate::form::GramForm;
use crate::linalg::{
    integer_determinant, rat, rat_int, rational_rank, smith_normal_form, solve_linear, IntVec, Rat, RatMatrix, RatVec,
};

/// The cell translated so that its lexicographically least vertex is 0.
fn based(cell: &DelaunayCell) -> Vec<IntVec> {
    let v0 = cell.lexmin().clone();
    cell.vertices().iter().map(|v| v - &v0).filter(|v| !v.is_zero()).collect()
}

fn delaunay_vectors(cell: &DelaunayCell) -> Vec<IntVec> {
    if cell.contains_vertex(&IntVec::zero(cell.rank())) {
        cell.delaunay_vectors()
    } else {
        based(cell)
    }
}

/// Index of the lattice spanned by `vectors` in its saturation
/// `X ∩ ℝ·vectors` (1 when the span is saturated).
pub fn span_index(vectors: &[IntVec]) -> u64 {
    if vectors.is_empty() {
        return 1;
    }
    smith_normal_form(&vectors.iter().map(|v| v.0.clone()).collect::<Vec<_>>()).torsion_order()
}

/// The Delaunay vectors contain a basis of `X ∩ ℝσ` (for a maximal cell,
/// of `X`). A cell not containing 0 is first translated by its least vertex.
pub fn is_generating(cell: &DelaunayCell) -> bool {
    let vs = delaunay_vectors(cell);
    let k = cell.dim();
    if k == 0 {
        return true;
    }
    let rows: Vec<Vec<i64>> = vs.iter().map(|v| v.0.clone()).collect();
    let all = smith_normal_form(&rows);
    if all.rank < k || all.torsion_order() != 1 {
        return false;
    }
    combinations(vs.len(), k).into_iter().any(|sub| {
        let m: Vec<Vec<i64>> = sub.iter().map(|&i| rows[i].clone()).collect();
        let s = smith_normal_form(&m);
        s.rank == k && s.torsion_order() == 1
    })
}

/// Least `n` with `X ∩ ℝσ ⊆ (1/n)·span(Delaunay vectors)`: the exponent of
/// the quotient group.
pub fn nilpotency(cell: &DelaunayCell) -> u64 {
    let vs = delaunay_vectors(cell);
    if vs.is_empty() {
        return 1;
    }
    smith_normal_form(&vs.iter().map(|v| v.0.clone()).collect::<Vec<_>>()).exponent()
}

/// Least common multiple of the nilpotencies of all cells of the star.
pub fn nilpotency_of_decomposition(star: &StarComplex) -> u64 {
    star.cells().iter().fold(1u64, |acc, c| acc.lcm(&nilpotency(c)))
}

/// Hilbert basis of the full-dimensional cone spanned by `gens`.
///
/// Every irreducible element lies in some simplicial subcone spanned by
/// generators, where it is a generator or a point of the half-open
/// fundamental parallelepiped; those points are found as the subgroup of
/// `X / ℤ·V` generated by the unit vectors.
pub fn primitive_vectors_of_cone(gens: &[IntVec], contains: impl Fn(&IntVec) -> bool) -> Vec<IntVec> {
    let r = gens.first().map_or(0, IntVec::len);
    let mut cands: BTreeSet<IntVec> = gens.iter().cloned().collect();
    for sub in combinations(gens.len(), r) {
        let cols: Vec<&IntVec> = sub.iter().map(|&i| &gens[i]).collect();
        let rows: Vec<Vec<i64>> = (0..r).map(|i| cols.iter().map(|c| c[i]).collect()).collect();
        // unimodular subcones have no interior parallelepiped points
        let det = integer_determinant(&rows).expect("small determinant");
        if det == 0 || det.abs() == 1 {
            continue;
        }
        let v = RatMatrix::from_int_rows(&rows);
        let steps: Vec<RatVec> = (0..r)
            .map(|j| solve_linear(&v, &IntVec::unit(r, j).to_rat()).expect("basis is invertible"))
            .collect();
        let mut seen: BTreeSet<RatVec> = BTreeSet::new();
        let mut queue = vec![RatVec::zero(r)];
        seen.insert(RatVec::zero(r));
        while let Some(t) = queue.pop() {
            for s in &steps {
                let next = RatVec((&t + s).iter().map(|c| c - c.floor()).collect());
                if seen.insert(next.clone()) {
                    queue.push(next);
                }
            }
        }
        for t in seen {
            if t.iter().all(Zero::is_zero) {
                continue;
            }
            let mut x = vec![Rat::zero(); r];
            for (tk, c) in t.iter().zip(&cols) {
                for (xi, &ci) in x.iter_mut().zip(c.iter()) {
                    *xi += tk * rat_int(ci);
                }
            }
            cands.insert(RatVec(x).to_int().expect("parallelepiped points are integral"));
        }
    }
    let cands: Vec<IntVec> = cands.into_iter().collect();
    cands
        .iter()
        .filter(|w| !cands.iter().any(|h| h != *w && contains(&(*w - h))))
        .cloned()
        .collect()
}

/// `Prim`: the union of the primitive vectors of all cones `Cone(0,σ)`,
/// `σ ⊂ Star(0)`. Faces of a cone contribute nothing new, so maximal
/// cells suffice.
pub fn primitive_vectors(star: &StarComplex) -> Vec<IntVec> {
    let mut out = BTreeSet::new();
    for &i in star.max_cells() {
        out.extend(max_cone_primitives(star, i));
    }
    out.into_iter().collect()
}

fn max_cone_primitives(star: &StarComplex, i: usize) -> Vec<IntVec> {
    primitive_vectors_of_cone(&star.cell(i).delaunay_vectors(), |x| star.cone_contains(i, &x.to_rat()))
}

/// Generating, and the Delaunay vectors `ℕ`-generate every lattice point
/// of the cone: equivalently the Hilbert basis of `Cone(0,σ)` consists of
/// Delaunay vectors. Cells not containing 0 are translated by their least
/// vertex.
pub fn is_totally_generating(star: &StarComplex, cell: &DelaunayCell) -> Result<bool, DelaunayError> {
    let zero = IntVec::zero(cell.rank());
    let cell = if cell.contains_vertex(&zero) { cell.clone() } else { cell.translate(&-cell.lexmin()) };
    let i = star.index_of(&cell).ok_or_else(|| DelaunayError::NotInStar(cell.vertices().to_vec()))?;
    if !is_generating(&cell) {
        return Ok(false);
    }
    let top = star.maximal_over(i)[0];
    let span: Vec<Vec<i64>> = cell.delaunay_vectors().iter().map(|v| v.0.clone()).collect();
    let k = cell.dim();
    let in_span = |w: &IntVec| {
        let mut rows = span.clone();
        rows.push(w.0.clone());
        k == 0 && w.is_zero() || rational_rank(&RatMatrix::from_int_rows(&rows)) == k
    };
    Ok(max_cone_primitives(star, top).iter().filter(|w| in_span(w)).all(|w| cell.contains_vertex(w)))
}

/// Lattice points lying in a common cone `Cone(0,τ)` over a maximal cell.
pub fn cellmates(star: &StarComplex, xs: &[IntVec]) -> bool {
    star.max_cells().iter().any(|&i| xs.iter().all(|x| star.cone_contains(i, &x.to_rat())))
}

/// LP-based cellmate test, independent of the cached cone normals.
#[cfg(test)]
fn cellmates_lp(star: &StarComplex, xs: &[IntVec]) -> bool {
    star.max_cells().iter().any(|&i| {
        let g = star.cell(i).delaunay_vectors();
        xs.iter().all(|x| crate::linalg::cone_membership(&x.to_rat(), &g))
    })
}

/// One sampled maximal cell.
#[derive(Clone, Debug)]
pub struct CellSample {
    pub point: RatVec,
    pub cell: DelaunayCell,
    /// Index of the Delaunay-vector span in `X`.
    pub index: u64,
}

/// Maximal cells containing `count` pseudo-random rational points of the
/// fundamental domain (coordinates `k/997`), deterministic in `seed`.
pub fn sample_maximal_cells(form: &GramForm, count: usize, seed: u64) -> Result<Vec<CellSample>, DelaunayError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let r = form.rank();
    (0..count)
        .map(|_| {
            let point = RatVec((0..r).map(|_| rat(rng.gen_range(1..997), 997)).collect());
            let cell = maximal_cell_containing(form, &point)?;
            let vs = based(&cell);
            let index = span_index(&vs);
            Ok(CellSample { point, cell, index })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::delaunay::{star, StarOptions};
    use crate::linalg::cone_membership;

    fn iv(v: &[i64]) -> IntVec {
        IntVec(v.to_vec())
    }

    fn a2() -> GramForm {
        GramForm::new(vec![vec![2, -1], vec![-1, 2]], None).unwrap()
    }

    #[test]
    fn square_primitives() {
        let s = star(&GramForm::identity(2), StarOptions::default()).unwrap();
        // (1,1) = (1,0) + (0,1) inside the square cone, so it is reducible
        let p = primitive_vectors(&s);
        assert_eq!(p, vec![iv(&[-1, 0]), iv(&[0, -1]), iv(&[0, 1]), iv(&[1, 0])]);
    }

    #[test]
    fn hexagonal_primitives_are_delaunay_vectors() {
        let s = star(&a2(), StarOptions::default()).unwrap();
        let p = primitive_vectors(&s);
        let mut dv: Vec<IntVec> = s.lattice_points().into_iter().filter(|v| !v.is_zero()).collect();
        dv.sort();
        assert_eq!(p, dv);
    }

    #[test]
    fn hilbert_basis_of_a_non_unimodular_cone() {
        // cone over (1,0), (1,2): parallelepiped point (1,1) is irreducible
        let g = [iv(&[1, 0]), iv(&[1, 2])];
        let h = primitive_vectors_of_cone(&g, |x| cone_membership(&x.to_rat(), &g));
        assert_eq!(h, vec![iv(&[1, 0]), iv(&[1, 1]), iv(&[1, 2])]);
    }

    #[test]
    fn cellmate_examples() {
        let s = star(&GramForm::identity(2), StarOptions::default()).unwrap();
        assert!(cellmates(&s, &[iv(&[1, 0]), iv(&[0, 1])]));
        assert!(!cellmates(&s, &[iv(&[1, 0]), iv(&[-1, 0])]));
        assert!(cellmates(&s, &[iv(&[3, -7])]));
        assert!(cellmates_lp(&s, &[iv(&[1, 0]), iv(&[0, 1])]));
    }

    #[test]
    fn square_and_triangle_are_totally_generating() {
        for f in [GramForm::identity(2), a2()] {
            let s = star(&f, StarOptions::default()).unwrap();
            for c in s.cells() {
                assert!(is_generating(c));
                assert!(is_totally_generating(&s, c).unwrap());
                assert_eq!(nilpotency(c), 1);
            }
            assert_eq!(nilpotency_of_decomposition(&s), 1);
        }
    }

    #[test]
    fn non_generating_simplex() {
        // A lattice simplex with a non-basis edge set: index 2 span.
        let f = GramForm::identity(2);
        let c = DelaunayCell::from_vertices(&f, vec![iv(&[0, 0]), iv(&[1, 1]), iv(&[1, -1])]).unwrap();
        assert!(!is_generating(&c));
        assert_eq!(nilpotency(&c), 2);
        assert_eq!(span_index(&c.delaunay_vectors()), 2);
    }

    #[test]
    fn scaled_form_has_same_nilpotency() {
        let s = star(&GramForm::identity(2).scaled(2), StarOptions::default()).unwrap();
        assert_eq!(nilpotency_of_decomposition(&s), 1);
    }
}
