//! Fincke–Pohst enumeration of lattice points in an ellipsoid, exactly.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use super::{isqrt, rat_int, IntVec, Rat, RatVec};
use crate::form::GramForm;

/// All `x ∈ ℤ^r` with `B(x − center, x − center) <= radius_sq`, sorted
/// lexicographically.
pub fn enumerate_ellipsoid(form: &GramForm, center: &RatVec, radius_sq: &Rat) -> Vec<IntVec> {
    assert_eq!(center.len(), form.rank(), "center has wrong rank");
    let mut out = Vec::new();
    if radius_sq.is_negative() {
        return out;
    }
    let (q, d) = form.completed_squares();
    let r = form.rank();
    let mut x = vec![0i64; r];
    descend(&q, &d, center, r, radius_sq.clone(), &mut x, &mut out);
    out.sort();
    out
}

fn descend(
    q: &[Vec<Rat>],
    d: &[Rat],
    center: &RatVec,
    level: usize,
    budget: Rat,
    x: &mut Vec<i64>,
    out: &mut Vec<IntVec>,
) {
    if level == 0 {
        out.push(IntVec(x.clone()));
        return;
    }
    let i = level - 1;
    let r = x.len();
    // y_j = x_j - c_j for the already fixed coordinates j > i.
    let shift = (i + 1..r).fold(Rat::zero(), |acc, j| acc + &q[i][j] * (rat_int(x[j]) - &center[j]));
    let target = &center[i] - shift;
    let u = &budget / &d[i];
    let m = isqrt(&u.floor().to_integer());
    let lo = target.floor().to_integer() - &m - BigInt::from(1);
    let hi = target.ceil().to_integer() + &m + BigInt::from(1);
    let lo = lo.to_i64().expect("enumeration bound fits in i64");
    let hi = hi.to_i64().expect("enumeration bound fits in i64");
    for xi in lo..=hi {
        let dev = rat_int(xi) - &target;
        let used = &d[i] * &dev * &dev;
        if used > budget {
            continue;
        }
        x[i] = xi;
        descend(q, d, center, i, &budget - used, x, out);
    }
    x[i] = 0;
}

/// The lattice points nearest to `center` (all ties) and their squared
/// distance.
pub fn closest_vectors(form: &GramForm, center: &RatVec) -> (Vec<IntVec>, Rat) {
    let guess = center.round();
    let bound = form.norm_rat(&center.sub_int(&guess));
    let pts = enumerate_ellipsoid(form, center, &bound);
    let dists: Vec<Rat> = pts.iter().map(|p| form.norm_rat(&center.sub_int(p))).collect();
    let best = dists.iter().min().cloned().expect("the rounded point is always enumerated");
    let nearest = pts.into_iter().zip(dists).filter(|(_, dd)| *dd == best).map(|(p, _)| p).collect();
    (nearest, best)
}
