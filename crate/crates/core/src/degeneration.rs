//! Split degeneration data and the rings of the degenerate fiber.
//!
//! The valuations are `A(x) = (B(x,x) + l·x)/2` and `B`; the unit parts
//! are rationals `a_0(e_i)` and a symmetric matrix `b_0(e_i, e_j)`, extended
//! to `X` by bilinearity for `b_0` and by the quadratic rule
//! `a_0(x+y) = a_0(x) a_0(y) b_0(x,y)` for `a_0`.
//!
//! `R_0(c)` has basis `ζ̄_{x,c}`, `x ∈ X` taken relative to `c`, with
//! `ζ̄_x ζ̄_y = ζ̄_{x+y}` for cellmates and `0` otherwise.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::delaunay::{cellmates, CellSample, DelaunayCell, DelaunayError, StarComplex};
use crate::form::GramForm;
use crate::linalg::{rat, rat_int, IntVec, Rat, RatVec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DegenError {
    #[error("unit data has length {got}, expected rank {rank}")]
    UnitLength { got: usize, rank: usize },
    #[error("unit value at {0} is zero")]
    ZeroUnit(String),
    #[error("b0 matrix is not symmetric at ({0},{1})")]
    AsymmetricUnits(usize, usize),
    #[error("cell of dimension {dim} is not maximal in rank {rank}")]
    NotMaximal { dim: usize, rank: usize },
    #[error("ring elements have different base vertices {0} and {1}")]
    BaseMismatch(IntVec, IntVec),
    #[error("base change factor must be positive, got {0}")]
    BadBaseChange(i64),
    #[error(transparent)]
    Delaunay(#[from] DelaunayError),
}

/// Degeneration data in the maximally degenerate split case.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegenData {
    form: GramForm,
    a0: Vec<Rat>,
    b0: Vec<Vec<Rat>>,
    base_change_done: bool,
}

impl DegenData {
    pub fn new(form: GramForm, a0: Option<Vec<Rat>>, b0: Option<Vec<Vec<Rat>>>) -> Result<Self, DegenError> {
        let r = form.rank();
        let a0 = a0.unwrap_or_else(|| vec![Rat::one(); r]);
        let b0 = b0.unwrap_or_else(|| vec![vec![Rat::one(); r]; r]);
        if a0.len() != r {
            return Err(DegenError::UnitLength { got: a0.len(), rank: r });
        }
        if b0.len() != r {
            return Err(DegenError::UnitLength { got: b0.len(), rank: r });
        }
        for (i, a) in a0.iter().enumerate() {
            if a.is_zero() {
                return Err(DegenError::ZeroUnit(format!("a0[{i}]")));
            }
        }
        for i in 0..r {
            if b0[i].len() != r {
                return Err(DegenError::UnitLength { got: b0[i].len(), rank: r });
            }
            for j in 0..r {
                if b0[i][j].is_zero() {
                    return Err(DegenError::ZeroUnit(format!("b0[{i}][{j}]")));
                }
                if b0[i][j] != b0[j][i] {
                    return Err(DegenError::AsymmetricUnits(i, j));
                }
            }
        }
        Ok(DegenData { form, a0, b0, base_change_done: false })
    }

    /// Trivial units `a_0 = b_0 = 1`.
    pub fn trivial(form: GramForm) -> Self {
        DegenData::new(form, None, None).expect("trivial units are valid")
    }

    /// Pseudo-random nonzero units `±p/q` with `1 <= p, q <= 5`.
    pub fn random_units(form: GramForm, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = form.rank();
        let unit = |rng: &mut ChaCha8Rng| {
            let s = if rng.gen_bool(0.5) { 1 } else { -1 };
            rat(s * rng.gen_range(1..=5), rng.gen_range(1..=5))
        };
        let a0 = (0..r).map(|_| unit(&mut rng)).collect();
        let mut b0 = vec![vec![Rat::one(); r]; r];
        for i in 0..r {
            for j in i..r {
                let u = unit(&mut rng);
                b0[i][j] = u.clone();
                b0[j][i] = u;
            }
        }
        DegenData::new(form, Some(a0), Some(b0)).expect("random units are nonzero and symmetric")
    }

    pub fn form(&self) -> &GramForm {
        &self.form
    }

    pub fn a0_basis(&self) -> &[Rat] {
        &self.a0
    }

    pub fn b0_matrix(&self) -> &[Vec<Rat>] {
        &self.b0
    }

    pub fn base_change_done(&self) -> bool {
        self.base_change_done
    }

    pub fn affine_height(&self, x: &IntVec) -> Rat {
        self.form.affine_height(x)
    }

    /// `b_0(x, y) = Π b0[i][j]^{x_i y_j}`.
    pub fn b0(&self, x: &IntVec, y: &IntVec) -> Rat {
        let mut out = Rat::one();
        for (i, &xi) in x.iter().enumerate() {
            for (j, &yj) in y.iter().enumerate() {
                out *= power(&self.b0[i][j], xi * yj);
            }
        }
        out
    }

    /// `a_0(x) = Π a_i^{x_i} · Π_{i<j} b_ij^{x_i x_j} · Π b_ii^{x_i(x_i−1)/2}`,
    /// the unique extension satisfying the quadratic rule.
    pub fn a0(&self, x: &IntVec) -> Rat {
        let mut out = Rat::one();
        for (i, &xi) in x.iter().enumerate() {
            out *= power(&self.a0[i], xi);
            out *= power(&self.b0[i][i], xi * (xi - 1) / 2);
            for (j, &xj) in x.iter().enumerate().skip(i + 1) {
                out *= power(&self.b0[i][j], xi * xj);
            }
        }
        out
    }

    /// The functional `dA(α(σ)) = B·α + l/2` on `X`, by coefficients.
    pub fn d_a_at_hole(&self, cell: &DelaunayCell) -> Result<RatVec, DegenError> {
        let r = self.form.rank();
        if !cell.is_maximal() {
            return Err(DegenError::NotMaximal { dim: cell.dim(), rank: r });
        }
        let ba = self.form.apply(cell.hole());
        Ok(RatVec(ba.iter().zip(self.form.linear()).map(|(b, &l)| b + rat(l, 2)).collect()))
    }

    /// Multiplicity of the component of a maximal cell: the denominator
    /// of `dA(α(σ))` in `X*_ℚ`.
    pub fn multiplicity(&self, cell: &DelaunayCell) -> Result<u64, DegenError> {
        let d = self.d_a_at_hole(cell)?.denominator();
        Ok(u64::try_from(d).expect("multiplicity fits in u64"))
    }

    /// Least `n` making every maximal cell of the star reduced after
    /// `(B, l) ↦ (nB, nl)`. Every cell is a translate of a star cell.
    pub fn minimal_base_change(&self, star: &StarComplex) -> Result<u64, DegenError> {
        star.max_cells().iter().try_fold(1u64, |acc, &i| Ok(acc.lcm(&self.multiplicity(star.cell(i))?)))
    }

    /// The same bound over sampled maximal cells only.
    pub fn sampled_base_change(&self, samples: &[CellSample]) -> Result<u64, DegenError> {
        samples.iter().try_fold(1u64, |acc, s| Ok(acc.lcm(&self.multiplicity(&s.cell)?)))
    }

    /// Data after the ramified base change of degree `n`: `(nB, nl)`,
    /// units unchanged.
    pub fn base_change(&self, n: i64) -> Result<DegenData, DegenError> {
        if n <= 0 {
            return Err(DegenError::BadBaseChange(n));
        }
        Ok(DegenData { form: self.form.scaled(n), a0: self.a0.clone(), b0: self.b0.clone(), base_change_done: true })
    }

    /// `η(x, c)`: the tangent cone of the lifted hull at `(c, A(c))`,
    /// evaluated in the direction `x` (relative to `c`). It is the largest
    /// of the facet functionals `dA(α(σ))`, `σ ∋ c` maximal, and is linear
    /// on each `Cone(c, σ)`.
    pub fn eta(&self, star: &StarComplex, x: &IntVec, c: &IntVec) -> Result<Rat, DegenError> {
        let mut best: Option<Rat> = None;
        for &i in star.max_cells() {
            let v = self.d_a_at_hole(star.cell(i))?.dot_int(x);
            if best.as_ref().is_none_or(|b| v > *b) {
                best = Some(v);
            }
        }
        Ok(best.expect("a star has maximal cells") + rat_int(self.form.pair(c, x)))
    }
}

fn power(q: &Rat, e: i64) -> Rat {
    let e = i32::try_from(e).expect("unit exponent fits in i32");
    q.pow(e)
}

/// Element of `R_0(c)`: a finite sum `Σ q_x ζ̄_{x,c}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingElement {
    base: IntVec,
    terms: BTreeMap<IntVec, Rat>,
}

impl RingElement {
    pub fn zero(base: IntVec) -> Self {
        RingElement { base, terms: BTreeMap::new() }
    }

    /// `ζ̄_{0,c}`, the identity.
    pub fn one(base: IntVec) -> Self {
        let r = base.len();
        RingElement::monomial(base, IntVec::zero(r), Rat::one())
    }

    pub fn monomial(base: IntVec, x: IntVec, coeff: Rat) -> Self {
        let mut e = RingElement::zero(base);
        e.add_term(x, coeff);
        e
    }

    pub fn from_terms(base: IntVec, terms: impl IntoIterator<Item = (IntVec, Rat)>) -> Self {
        let mut e = RingElement::zero(base);
        for (x, q) in terms {
            e.add_term(x, q);
        }
        e
    }

    fn add_term(&mut self, x: IntVec, q: Rat) {
        let entry = self.terms.entry(x.clone()).or_insert_with(Rat::zero);
        *entry += q;
        if entry.is_zero() {
            self.terms.remove(&x);
        }
    }

    pub fn base(&self) -> &IntVec {
        &self.base
    }

    pub fn terms(&self) -> &BTreeMap<IntVec, Rat> {
        &self.terms
    }

    pub fn coeff(&self, x: &IntVec) -> Rat {
        self.terms.get(x).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn support(&self) -> Vec<IntVec> {
        self.terms.keys().cloned().collect()
    }

    pub fn add(&self, other: &RingElement) -> Result<RingElement, DegenError> {
        self.same_base(other)?;
        let mut out = self.clone();
        for (x, q) in &other.terms {
            out.add_term(x.clone(), q.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, k: &Rat) -> RingElement {
        RingElement::from_terms(self.base.clone(), self.terms.iter().map(|(x, q)| (x.clone(), q * k)))
    }

    fn same_base(&self, other: &RingElement) -> Result<(), DegenError> {
        if self.base != other.base {
            return Err(DegenError::BaseMismatch(self.base.clone(), other.base.clone()));
        }
        Ok(())
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (x, q)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{}·ζ{}", crate::linalg::fmt_rat(q), x)?;
        }
        write!(f, " @ {}", self.base)
    }
}

/// Product in `R_0(c)`. The cellmate relation is translation invariant, so
/// the star at 0 decides it for every base vertex.
pub fn multiply_r0(star: &StarComplex, u: &RingElement, v: &RingElement) -> Result<RingElement, DegenError> {
    u.same_base(v)?;
    let mut out = RingElement::zero(u.base.clone());
    for (x, p) in &u.terms {
        for (y, q) in &v.terms {
            if cellmates(star, &[x.clone(), y.clone()]) {
                out.add_term(x + y, p * q);
            }
        }
    }
    Ok(out)
}

/// `S*_y : R_0(c) → R_0(c+y)`, `ζ̄_{x,c} ↦ b_0(y,x) ζ̄_{x,c+y}`.
pub fn y_action(data: &DegenData, y: &IntVec, u: &RingElement) -> RingElement {
    RingElement::from_terms(&u.base + y, u.terms.iter().map(|(x, q)| (x.clone(), q * data.b0(y, x))))
}

/// The local equation `θ̃/ξ_c = Σ_{x ∈ Star(0)} a_0(x+c) a_0(c)^{-1} ζ̄_{x,c}`
/// of the theta divisor on the chart at `c`.
pub fn theta_restriction(data: &DegenData, star: &StarComplex, c: &IntVec) -> RingElement {
    let ac = data.a0(c);
    RingElement::from_terms(
        c.clone(),
        star.lattice_points().into_iter().map(|x| {
            let q = data.a0(&(&x + c)) / &ac;
            (x, q)
        }),
    )
}

/// `A(x) − η(x, 0)`, which vanishes exactly on the lattice points of the star.
pub fn height_gap(data: &DegenData, star: &StarComplex, x: &IntVec) -> Result<Rat, DegenError> {
    let zero = IntVec::zero(x.len());
    Ok(data.affine_height(x) - data.eta(star, x, &zero)?)
}
