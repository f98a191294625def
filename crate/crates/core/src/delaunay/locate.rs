//! Point location by linear programming on the lifted paraboloid.
//!
//! Over a growing set of lattice points `x_j`, minimise `Σ λ_j B(x_j, x_j)` subject to
//! `Σ λ_j x_j = p`, `Σ λ_j = 1`, `λ >= 0`. A basic optimal dual is an affine
//! function `n·x + c` supporting the lifted points from below along a lower
//! facet above `p`; it is accepted once no lattice point lies strictly
//! inside its circumsphere.

use std::collections::BTreeSet;

use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{DelaunayCell, DelaunayError};
use crate::form::GramForm;
use crate::linalg::{
    closest_vectors, rat, rat_int, solve_linear, IntVec, LinearProgram, LpOutcome, Rat, RatMatrix, RatVec,
};

/// A maximal Delaunay cell containing `p`.
///
/// Column generation: start from the lattice simplex of the Kuhn
/// triangulation containing `p`, and repeatedly add the lattice points
/// nearest to the current dual circumcenter until none lies strictly
/// inside the circumsphere.
pub fn maximal_cell_containing(form: &GramForm, p: &RatVec) -> Result<DelaunayCell, DelaunayError> {
    let gram = form.matrix();
    let mut cols: BTreeSet<IntVec> = kuhn_simplex(p).into_iter().collect();
    for _ in 0..MAX_ROUNDS {
        let pts: Vec<IntVec> = cols.iter().cloned().collect();
        let (alpha, radius_sq) = dual_sphere(form, &gram, p, &pts).ok_or(DelaunayError::Location)?;
        let (near, dist) = closest_vectors(form, &alpha);
        if dist < radius_sq {
            let before = cols.len();
            cols.extend(near);
            if cols.len() == before {
                return Err(DelaunayError::Location);
            }
            continue;
        }
        let cell = DelaunayCell::from_vertices(form, near)?;
        return if cell.is_maximal() { Ok(cell) } else { Err(DelaunayError::Location) };
    }
    Err(DelaunayError::Location)
}

const MAX_ROUNDS: usize = 1000;

/// Vertices `⌊p⌋ + e_{σ1} + … + e_{σk}`, `σ` sorting the fractional parts
/// of `p` in decreasing order; their convex hull contains `p`.
fn kuhn_simplex(p: &RatVec) -> Vec<IntVec> {
    let floor: Vec<i64> = p.iter().map(|c| c.floor().to_integer().to_i64().expect("coordinate fits in i64")).collect();
    let frac: Vec<Rat> = p.iter().zip(&floor).map(|(c, &f)| c - rat_int(f)).collect();
    let mut order: Vec<usize> = (0..p.len()).collect();
    order.sort_by(|&i, &j| frac[j].cmp(&frac[i]).then(i.cmp(&j)));
    let mut v = floor;
    let mut out = vec![IntVec(v.clone())];
    for i in order {
        v[i] += 1;
        out.push(IntVec(v.clone()));
    }
    out
}

/// Circumcenter and squared radius of the lower facet of the lifted
/// points `pts` lying above `p`.
fn dual_sphere(form: &GramForm, gram: &RatMatrix, p: &RatVec, pts: &[IntVec]) -> Option<(RatVec, Rat)> {
    let r = form.rank();
    let mut a: Vec<Vec<Rat>> = (0..r).map(|i| pts.iter().map(|x| rat_int(x[i])).collect()).collect();
    a.push(vec![Rat::one(); pts.len()]);
    let mut b = p.0.clone();
    b.push(Rat::one());
    let cost = pts.iter().map(|x| rat_int(form.norm(x))).collect();
    let LpOutcome::Optimal(sol) = LinearProgram::new(a, b, cost).solve() else {
        return None;
    };
    let n = RatVec(sol.duals[..r].to_vec());
    let c = sol.duals[r].clone();
    let alpha = solve_linear(gram, &n.scale(&rat(1, 2)))?;
    let radius_sq = c + form.norm_rat(&alpha);
    Some((alpha, radius_sq))
}

/// Vertices of the smallest face of `cell` containing `p`: vertex `k`
/// belongs to it iff some convex representation of `p` uses it.
pub fn minimal_face(cell: &DelaunayCell, p: &RatVec) -> Option<Vec<IntVec>> {
    let verts = cell.vertices();
    let r = cell.rank();
    let mut a: Vec<Vec<Rat>> = (0..r).map(|i| verts.iter().map(|x| rat_int(x[i])).collect()).collect();
    a.push(vec![Rat::one(); verts.len()]);
    let mut b = p.0.clone();
    b.push(Rat::one());
    let mut face = Vec::new();
    for k in 0..verts.len() {
        let mut cost = vec![Rat::zero(); verts.len()];
        cost[k] = -Rat::one();
        match LinearProgram::new(a.clone(), b.clone(), cost).solve() {
            LpOutcome::Optimal(s) => {
                if s.x[k].is_positive() {
                    face.push(verts[k].clone());
                }
            }
            _ => return None,
        }
    }
    Some(face)
}

/// The Delaunay cell containing `p` in its relative interior.
pub fn minimal_cell_containing(form: &GramForm, p: &RatVec) -> Result<DelaunayCell, DelaunayError> {
    if let Some(x) = p.to_int() {
        return DelaunayCell::from_vertices(form, vec![x]);
    }
    let big = maximal_cell_containing(form, p)?;
    let face = minimal_face(&big, p).ok_or(DelaunayError::Location)?;
    DelaunayCell::from_vertices(form, face)
}
