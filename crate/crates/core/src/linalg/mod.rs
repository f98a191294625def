//! Exact integer and rational linear algebra.
//!
//! Everything in this crate is computed over `ℤ` or `ℚ`; there is no
//! floating point anywhere. Cocircularity and empty-sphere predicates are
//! equality tests, so approximate arithmetic would silently change the
//! combinatorics.

mod enumerate;
mod hull;
mod lp;
mod matrix;
mod snf;

pub use enumerate::{closest_vectors, enumerate_ellipsoid};
pub use hull::{lower_facets_through, lower_hull, HullFacet};
pub use lp::{cone_membership, convex_combination, LinearProgram, LpOutcome, LpSolution};
pub use matrix::{integer_determinant, nullspace, rational_rank, solve_linear, RatMatrix};
pub use snf::{smith_normal_form, SmithForm};

use std::fmt;
use std::ops::{Add, Index, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Exact rational scalar.
pub type Rat = BigRational;

/// Errors raised by the linear-algebra kernel.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("quadratic form is not positive definite: leading principal minor {index} equals {value}")]
    NotPositiveDefinite { index: usize, value: String },
    #[error("point set is degenerate: projections span an affine space of dimension {rank} < {ambient}")]
    DegenerateHull { rank: usize, ambient: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

/// Builds the rational `p/q`.
pub fn rat(p: i64, q: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(q))
}

pub fn rat_int(p: i64) -> Rat {
    Rat::from_integer(BigInt::from(p))
}

/// Least integer `>= q`.
pub fn ceil_rat(q: &Rat) -> BigInt {
    q.ceil().to_integer()
}

/// Formats a rational as `p/q`, or `p` when integral.
pub fn fmt_rat(q: &Rat) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses `p`, `-p` or `p/q`.
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                None
            } else {
                Some(Rat::new(p, q))
            }
        }
        None => s.parse::<BigInt>().ok().map(Rat::from_integer),
    }
}

pub fn lcm_big(a: &BigInt, b: &BigInt) -> BigInt {
    a.lcm(b)
}

/// A lattice element of `X ≅ ℤ^r`. Ordering is lexicographic.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct IntVec(pub Vec<i64>);

impl IntVec {
    pub fn zero(rank: usize) -> Self {
        IntVec(vec![0; rank])
    }

    pub fn unit(rank: usize, i: usize) -> Self {
        let mut v = vec![0; rank];
        v[i] = 1;
        IntVec(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn iter(&self) -> std::slice::Iter<'_, i64> {
        self.0.iter()
    }

    pub fn scale(&self, k: i64) -> Self {
        IntVec(self.0.iter().map(|c| c * k).collect())
    }

    pub fn dot(&self, other: &IntVec) -> i64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn to_rat(&self) -> RatVec {
        RatVec(self.0.iter().map(|&c| rat_int(c)).collect())
    }

    /// Componentwise floor division by `d` and the remainder in `[0, d)`.
    pub fn div_rem_floor(&self, d: i64) -> (IntVec, IntVec) {
        let (q, r): (Vec<i64>, Vec<i64>) =
            self.0.iter().map(|&c| (c.div_euclid(d), c.rem_euclid(d))).unzip();
        (IntVec(q), IntVec(r))
    }
}

impl From<Vec<i64>> for IntVec {
    fn from(v: Vec<i64>) -> Self {
        IntVec(v)
    }
}

impl Index<usize> for IntVec {
    type Output = i64;
    fn index(&self, i: usize) -> &i64 {
        &self.0[i]
    }
}

impl Add for &IntVec {
    type Output = IntVec;
    fn add(self, rhs: &IntVec) -> IntVec {
        IntVec(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &IntVec {
    type Output = IntVec;
    fn sub(self, rhs: &IntVec) -> IntVec {
        IntVec(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &IntVec {
    type Output = IntVec;
    fn neg(self) -> IntVec {
        IntVec(self.0.iter().map(|a| -a).collect())
    }
}

impl fmt::Display for IntVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// A point of `X_ℚ`. Ordering is lexicographic.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct RatVec(pub Vec<Rat>);

impl RatVec {
    pub fn zero(rank: usize) -> Self {
        RatVec(vec![Rat::zero(); rank])
    }

    pub fn from_ints(v: &[i64]) -> Self {
        RatVec(v.iter().map(|&c| rat_int(c)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Rat> {
        self.0.iter()
    }

    pub fn scale(&self, k: &Rat) -> Self {
        RatVec(self.0.iter().map(|c| c * k).collect())
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|c| c.is_integer())
    }

    /// The lattice point, if every coordinate is an integer.
    pub fn to_int(&self) -> Option<IntVec> {
        self.0
            .iter()
            .map(|c| if c.is_integer() { c.to_integer().to_i64() } else { None })
            .collect::<Option<Vec<_>>>()
            .map(IntVec)
    }

    /// Least common multiple of the coordinate denominators.
    pub fn denominator(&self) -> BigInt {
        self.0.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }

    /// Componentwise nearest integer (ties rounded toward `+∞`).
    pub fn round(&self) -> IntVec {
        let half = rat(1, 2);
        IntVec(
            self.0
                .iter()
                .map(|c| (c + &half).floor().to_integer().to_i64().expect("coordinate fits in i64"))
                .collect(),
        )
    }

    pub fn dot_int(&self, v: &IntVec) -> Rat {
        self.0.iter().zip(&v.0).fold(Rat::zero(), |acc, (a, &b)| acc + a * rat_int(b))
    }

    pub fn add_int(&self, v: &IntVec) -> RatVec {
        RatVec(self.0.iter().zip(&v.0).map(|(a, &b)| a + rat_int(b)).collect())
    }

    pub fn sub_int(&self, v: &IntVec) -> RatVec {
        RatVec(self.0.iter().zip(&v.0).map(|(a, &b)| a - rat_int(b)).collect())
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.0.iter().map(fmt_rat).collect()
    }

    pub fn dot(&self, other: &RatVec) -> Rat {
        self.0.iter().zip(&other.0).fold(Rat::zero(), |acc, (a, b)| acc + a * b)
    }

    /// The primitive lattice vector on the ray through `self` (zero stays zero).
    pub fn primitive_int(&self) -> IntVec {
        let den = self.denominator();
        let ints: Vec<BigInt> = self.0.iter().map(|c| (c * Rat::from_integer(den.clone())).to_integer()).collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        if g.is_zero() {
            return IntVec::zero(self.len());
        }
        IntVec(ints.iter().map(|x| (x / &g).to_i64().expect("coordinate fits in i64")).collect())
    }
}

impl Index<usize> for RatVec {
    type Output = Rat;
    fn index(&self, i: usize) -> &Rat {
        &self.0[i]
    }
}

impl Add for &RatVec {
    type Output = RatVec;
    fn add(self, rhs: &RatVec) -> RatVec {
        RatVec(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &RatVec {
    type Output = RatVec;
    fn sub(self, rhs: &RatVec) -> RatVec {
        RatVec(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl fmt::Display for RatVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", fmt_rat(c))?;
        }
        write!(f, ")")
    }
}

/// Integer square root, `⌊√n⌋` for `n >= 0`.
pub(crate) fn isqrt(n: &BigInt) -> BigInt {
    debug_assert!(!n.is_negative());
    n.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_parsing_round_trips() {
        assert_eq!(parse_rat("3/6"), Some(rat(1, 2)));
        assert_eq!(parse_rat("-4"), Some(rat_int(-4)));
        assert_eq!(parse_rat("1/0"), None);
        assert_eq!(fmt_rat(&rat(-6, 4)), "-3/2");
        assert_eq!(fmt_rat(&rat(8, 4)), "2");
    }

    #[test]
    fn floor_division_keeps_remainder_nonnegative() {
        let (q, r) = IntVec(vec![-3, 4, 0]).div_rem_floor(2);
        assert_eq!(q, IntVec(vec![-2, 2, 0]));
        assert_eq!(r, IntVec(vec![1, 0, 0]));
    }

    #[test]
    fn lexicographic_order() {
        let mut v = vec![IntVec(vec![1, -1]), IntVec(vec![0, 5]), IntVec(vec![-1, 2])];
        v.sort();
        assert_eq!(v[0], IntVec(vec![-1, 2]));
        assert_eq!(v[2], IntVec(vec![1, -1]));
    }
}
