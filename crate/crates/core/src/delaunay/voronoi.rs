use std::collections::BTreeSet;

use num_traits::Zero;

use super::{DelaunayCell, DelaunayError, StarComplex};
use crate::form::GramForm;
use crate::linalg::{closest_vectors, rat, rat_int, solve_linear, IntVec, Rat, RatMatrix, RatVec};

/// Relevant vectors of `V(0)`: `v ≠ 0` is relevant iff `±v` are the only
/// minima of `B` on the coset `v + 2X`. Sorted, closed under negation.
pub fn relevant_vectors(form: &GramForm) -> Vec<IntVec> {
    let r = form.rank();
    let mut out = Vec::new();
    for mask in 1u64..(1u64 << r) {
        let u = IntVec((0..r).map(|i| ((mask >> i) & 1) as i64).collect());
        // x = u + 2y minimises B(x,x) = 4 B(y + u/2, y + u/2).
        let center = RatVec(u.iter().map(|&c| rat(-c, 2)).collect());
        let (ys, _) = closest_vectors(form, &center);
        if ys.len() == 2 {
            for y in ys {
                out.push(&u + &y.scale(2));
            }
        }
    }
    out.sort();
    out
}

/// Vertices of `V(0)`, by brute force over `r`-subsets of the relevant
/// half-spaces `B(α, v) <= B(v, v)/2`.
pub fn voronoi_vertices(form: &GramForm) -> Vec<RatVec> {
    let rel = relevant_vectors(form);
    let r = form.rank();
    let rows: Vec<Vec<Rat>> = rel.iter().map(|v| form.apply_int(v).iter().map(|&c| rat_int(c)).collect()).collect();
    let bounds: Vec<Rat> = rel.iter().map(|v| rat(form.norm(v), 2)).collect();
    let mut found = BTreeSet::new();
    for subset in combinations(rel.len(), r) {
        let m = RatMatrix::from_rows(subset.iter().map(|&i| rows[i].clone()).collect());
        let b = RatVec(subset.iter().map(|&i| bounds[i].clone()).collect());
        let Some(alpha) = solve_linear(&m, &b) else {
            continue;
        };
        let feasible = rows.iter().zip(&bounds).all(|(row, bd)| {
            let lhs = row.iter().zip(alpha.iter()).fold(Rat::zero(), |acc, (a, x)| acc + a * x);
            lhs <= *bd
        });
        if feasible {
            found.insert(alpha);
        }
    }
    found.into_iter().collect()
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] < n - k + i {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// The Voronoi face dual to a cell of `Star(0)`.
#[derive(Clone, Debug)]
pub struct VoronoiCell {
    pub dual: DelaunayCell,
    /// Holes of the maximal cells containing `dual`, sorted.
    pub vertices: Vec<RatVec>,
    /// `(v, b)` meaning `B(α, v) <= b`: the relevant half-spaces of `V(0)`.
    pub halfspaces: Vec<(IntVec, Rat)>,
    /// `(w, b)` meaning `B(α, w) = b`, one per Delaunay vector of `dual`.
    pub equations: Vec<(IntVec, Rat)>,
}

impl VoronoiCell {
    pub fn dim(&self) -> usize {
        let pts = &self.vertices;
        let base = &pts[0];
        let rows: Vec<Vec<Rat>> = pts[1..].iter().map(|p| (p - base).0).collect();
        if rows.is_empty() {
            return 0;
        }
        crate::linalg::rational_rank(&RatMatrix::from_rows(rows))
    }

    /// Whether `alpha` satisfies every half-space and equation.
    pub fn contains(&self, form: &GramForm, alpha: &RatVec) -> bool {
        let pair = |v: &IntVec| form.pair_rat(alpha, &v.to_rat());
        self.halfspaces.iter().all(|(v, b)| pair(v) <= *b) && self.equations.iter().all(|(w, b)| pair(w) == *b)
    }
}

/// The Voronoi face `V(σ)` for `σ` in the star.
pub fn voronoi_cell(star: &StarComplex, cell: &DelaunayCell) -> Result<VoronoiCell, DelaunayError> {
    let idx = star.index_of(cell).ok_or_else(|| DelaunayError::NotInStar(cell.vertices().to_vec()))?;
    let form = star.form();
    let mut vertices: Vec<RatVec> =
        star.maximal_over(idx).into_iter().map(|j| star.cells()[j].hole().clone()).collect();
    vertices.sort();
    let halfspaces = relevant_vectors(form).into_iter().map(|v| {
        let b = rat(form.norm(&v), 2);
        (v, b)
    }).collect();
    let equations = cell.delaunay_vectors().into_iter().map(|w| {
        let b = rat(form.norm(&w), 2);
        (w, b)
    }).collect();
    Ok(VoronoiCell { dual: star.cells()[idx].clone(), vertices, halfspaces, equations })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(v: &[i64]) -> IntVec {
        IntVec(v.to_vec())
    }

    /// Oracle: brute-force relevance by comparing all coset members in a box.
    fn brute_relevant(form: &GramForm, bx: i64) -> Vec<IntVec> {
        let r = form.rank();
        let side = (2 * bx + 1) as usize;
        let mut pts = Vec::new();
        for k in 0..side.pow(r as u32) {
            let mut kk = k;
            let v: Vec<i64> = (0..r).map(|_| { let c = (kk % side) as i64 - bx; kk /= side; c }).collect();
            pts.push(IntVec(v));
        }
        let mut out = Vec::new();
        for v in &pts {
            if v.is_zero() {
                continue;
            }
            let n = form.norm(v);
            let ties = pts.iter().filter(|w| {
                let d = *w - v;
                d.iter().all(|c| c % 2 == 0) && form.norm(w) <= n
            }).count();
            if ties == 2 {
                out.push(v.clone());
            }
        }
        out.sort();
        out
    }

    #[test]
    fn rank_one_relevant() {
        assert_eq!(relevant_vectors(&GramForm::identity(1)), vec![iv(&[-1]), iv(&[1])]);
    }

    #[test]
    fn square_relevant_excludes_diagonals() {
        let rel = relevant_vectors(&GramForm::identity(2));
        assert_eq!(rel, vec![iv(&[-1, 0]), iv(&[0, -1]), iv(&[0, 1]), iv(&[1, 0])]);
    }

    #[test]
    fn hexagonal_relevant_are_minimal_vectors() {
        let f = GramForm::new(vec![vec![2, -1], vec![-1, 2]], None).unwrap();
        let rel = relevant_vectors(&f);
        assert_eq!(rel.len(), 6);
        assert!(rel.iter().all(|v| f.norm(v) == 2));
        assert_eq!(rel, brute_relevant(&f, 3));
    }

    #[test]
    fn relevant_vectors_match_brute_force_in_rank_three() {
        let f = GramForm::new(vec![vec![2, -1, 0], vec![-1, 2, -1], vec![0, -1, 2]], None).unwrap();
        assert_eq!(relevant_vectors(&f), brute_relevant(&f, 3));
        let g = GramForm::new(vec![vec![3, 1, 0], vec![1, 2, 1], vec![0, 1, 4]], None).unwrap();
        assert_eq!(relevant_vectors(&g), brute_relevant(&g, 3));
    }

    #[test]
    fn square_voronoi_vertices() {
        let v = voronoi_vertices(&GramForm::identity(2));
        let h = rat(1, 2);
        let expect: Vec<RatVec> = [(-1, -1), (-1, 1), (1, -1), (1, 1)]
            .iter()
            .map(|&(a, b)| RatVec(vec![&h * rat_int(a), &h * rat_int(b)]))
            .collect();
        assert_eq!(v, expect);
    }

    #[test]
    fn combinations_count() {
        assert_eq!(combinations(5, 2).len(), 10);
        assert_eq!(combinations(3, 3), vec![vec![0, 1, 2]]);
        assert!(combinations(2, 3).is_empty());
    }
}
