//! Lower facets of the convex hull of lifted lattice points.
//!
//! Facets are found by exhausting `(r+1)`-subsets with affinely independent
//! projections; non-simplicial facets (cocircular configurations) come out
//! with their full incidence set.

use std::collections::BTreeSet;

use num_traits::{One, Zero};

use super::{rat_int, rational_rank, solve_linear, IntVec, LinalgError, Rat, RatMatrix, RatVec};

/// A lower facet: `height(x) >= normal·x + offset` for every input point,
/// with equality exactly on `incident`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HullFacet {
    pub normal: RatVec,
    pub offset: Rat,
    pub incident: Vec<IntVec>,
}

impl HullFacet {
    pub fn eval(&self, x: &IntVec) -> Rat {
        self.normal.dot_int(x) + &self.offset
    }
}

/// All lower facets of the hull of `(x, height)`.
pub fn lower_hull(points: &[(IntVec, Rat)]) -> Result<Vec<HullFacet>, LinalgError> {
    facets(points, None)
}

/// The lower facets incident to `points[apex]`.
pub fn lower_facets_through(points: &[(IntVec, Rat)], apex: usize) -> Result<Vec<HullFacet>, LinalgError> {
    assert!(apex < points.len(), "apex out of range");
    facets(points, Some(apex))
}

fn facets(points: &[(IntVec, Rat)], apex: Option<usize>) -> Result<Vec<HullFacet>, LinalgError> {
    let Some(first) = points.first() else {
        return Err(LinalgError::DegenerateHull { rank: 0, ambient: 0 });
    };
    let r = first.0.len();
    if let Some(bad) = points.iter().find(|p| p.0.len() != r) {
        return Err(LinalgError::DimensionMismatch { expected: r, got: bad.0.len() });
    }
    let diffs: Vec<Vec<i64>> = points.iter().map(|p| (&p.0 - &first.0).0).collect();
    let rank = rational_rank(&RatMatrix::from_int_rows(&diffs));
    if rank < r {
        return Err(LinalgError::DegenerateHull { rank, ambient: r });
    }

    let n = points.len();
    let mut found: Vec<(BTreeSet<usize>, HullFacet)> = Vec::new();
    let others: Vec<usize> = (0..n).filter(|&i| Some(i) != apex).collect();
    let pick = if apex.is_some() { r } else { r + 1 };
    let mut idx: Vec<usize> = (0..pick).collect();
    if pick > others.len() {
        return Ok(Vec::new());
    }
    loop {
        let mut combo: Vec<usize> = idx.iter().map(|&k| others[k]).collect();
        if let Some(a) = apex {
            combo.push(a);
        }
        let covered = found.iter().any(|(inc, _)| combo.iter().all(|c| inc.contains(c)));
        if !covered {
            if let Some(f) = supporting(points, &combo, r) {
                let inc: BTreeSet<usize> =
                    (0..n).filter(|&i| f.0.dot_int(&points[i].0) + &f.1 == points[i].1).collect();
                let mut incident: Vec<IntVec> = inc.iter().map(|&i| points[i].0.clone()).collect();
                incident.sort();
                found.push((inc, HullFacet { normal: f.0, offset: f.1, incident }));
            }
        }
        // next combination of `pick` out of `others.len()`
        let m = others.len();
        let mut k = pick;
        loop {
            if k == 0 {
                let mut out: Vec<HullFacet> = found.into_iter().map(|(_, f)| f).collect();
                out.sort_by(|a, b| a.incident.cmp(&b.incident));
                return Ok(out);
            }
            k -= 1;
            if idx[k] < m - pick + k {
                idx[k] += 1;
                for j in k + 1..pick {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Affine functional through the lifted `combo` that lies below all points.
fn supporting(points: &[(IntVec, Rat)], combo: &[usize], r: usize) -> Option<(RatVec, Rat)> {
    let rows: Vec<Vec<Rat>> = combo
        .iter()
        .map(|&i| {
            let mut row: Vec<Rat> = points[i].0.iter().map(|&c| rat_int(c)).collect();
            row.push(Rat::one());
            row
        })
        .collect();
    let rhs = RatVec(combo.iter().map(|&i| points[i].1.clone()).collect());
    let sol = solve_linear(&RatMatrix::from_rows(rows), &rhs)?;
    let normal = RatVec(sol.0[..r].to_vec());
    let offset = sol.0[r].clone();
    let below = points.iter().all(|(x, h)| {
        let v = normal.dot_int(x) + &offset;
        (h - v) >= Rat::zero()
    });
    below.then_some((normal, offset))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;

    fn lift(points: &[Vec<i64>], h: impl Fn(&IntVec) -> Rat) -> Vec<(IntVec, Rat)> {
        points.iter().map(|p| {
            let v = IntVec(p.clone());
            let hv = h(&v);
            (v, hv)
        }).collect()
    }

    #[test]
    fn parabola_segments() {
        let pts = lift(&(-2..=2).map(|x| vec![x]).collect::<Vec<_>>(), |x| rat(x[0] * x[0], 2));
        let f = lower_hull(&pts).unwrap();
        let segs: Vec<Vec<i64>> = f.iter().map(|f| f.incident.iter().map(|p| p[0]).collect()).collect();
        assert_eq!(segs, vec![vec![-2, -1], vec![-1, 0], vec![0, 1], vec![1, 2]]);
    }

    #[test]
    fn cocircular_square_is_one_facet() {
        let pts = lift(&[vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]], |x| rat(x[0] * x[0] + x[1] * x[1], 2));
        let f = lower_hull(&pts).unwrap();
        assert_eq!(f.len(), 1);
        assert_eq!(f[0].incident.len(), 4);
    }

    #[test]
    fn simplex_is_single_facet() {
        let pts = lift(&[vec![0, 0, 0], vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]], |x| rat(x[0] * 3 - x[2], 1));
        let f = lower_hull(&pts).unwrap();
        assert_eq!(f.len(), 1);
        assert_eq!(f[0].incident.len(), 4);
        for (x, h) in &pts {
            assert_eq!(f[0].eval(x), *h);
        }
    }

    #[test]
    fn degenerate_input_is_reported() {
        let pts = lift(&[vec![0, 0], vec![1, 1], vec![2, 2]], |_| rat(0, 1));
        assert_eq!(lower_hull(&pts), Err(LinalgError::DegenerateHull { rank: 1, ambient: 2 }));
    }

    #[test]
    fn facets_support_every_point() {
        let mut raw = Vec::new();
        for x in -2..=2 {
            for y in -2..=2 {
                raw.push(vec![x, y]);
            }
        }
        let pts = lift(&raw, |v| rat(2 * v[0] * v[0] - 2 * v[0] * v[1] + 2 * v[1] * v[1], 2));
        let all = lower_hull(&pts).unwrap();
        for f in &all {
            for (x, h) in &pts {
                assert!(*h >= f.eval(x));
            }
            assert_eq!(f.incident.len(), 3);
        }
        let at0 = lower_facets_through(&pts, 12).unwrap();
        assert_eq!(at0.len(), 6);
        assert!(at0.iter().all(|f| f.incident.contains(&IntVec(vec![0, 0]))));
    }
}
