//! Exact two-phase simplex over `ℚ` with Bland's rule.

use num_traits::{One, Signed, Zero};

use super::{rat_int, IntVec, Rat, RatVec};

/// `min c·x` subject to `A x = b`, `x >= 0`.
#[derive(Clone, Debug)]
pub struct LinearProgram {
    a: Vec<Vec<Rat>>,
    b: Vec<Rat>,
    c: Vec<Rat>,
}

#[derive(Clone, Debug)]
pub struct LpSolution {
    pub x: Vec<Rat>,
    pub value: Rat,
    /// Basic structural columns at the optimum, by row.
    pub basis: Vec<usize>,
    /// Optimal dual vector `y` with `c_j - y·A_j >= 0` for every column.
    pub duals: Vec<Rat>,
}

#[derive(Clone, Debug)]
pub enum LpOutcome {
    Infeasible,
    Unbounded,
    Optimal(LpSolution),
}

impl LpOutcome {
    pub fn optimal(self) -> Option<LpSolution> {
        match self {
            LpOutcome::Optimal(s) => Some(s),
            _ => None,
        }
    }
}

struct Tableau {
    t: Vec<Vec<Rat>>,
    obj: Vec<Rat>,
    basis: Vec<usize>,
    width: usize,
}

impl Tableau {
    fn rhs(&self) -> usize {
        self.width - 1
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let inv = self.t[row][col].recip();
        for v in self.t[row].iter_mut() {
            if !v.is_zero() {
                *v *= &inv;
            }
        }
        let prow = self.t[row].clone();
        for (i, r) in self.t.iter_mut().enumerate() {
            if i == row || r[col].is_zero() {
                continue;
            }
            let f = r[col].clone();
            for (v, p) in r.iter_mut().zip(&prow) {
                if !p.is_zero() {
                    *v -= &f * p;
                }
            }
        }
        if !self.obj[col].is_zero() {
            let f = self.obj[col].clone();
            for (v, p) in self.obj.iter_mut().zip(&prow) {
                if !p.is_zero() {
                    *v -= &f * p;
                }
            }
        }
        self.basis[row] = col;
    }

    /// Runs simplex iterations over columns `< allowed`; `false` if unbounded.
    fn run(&mut self, allowed: usize) -> bool {
        let rhs = self.rhs();
        loop {
            let Some(col) = (0..allowed).find(|&j| self.obj[j].is_negative()) else {
                return true;
            };
            let mut best: Option<(usize, Rat)> = None;
            for i in 0..self.t.len() {
                let a = &self.t[i][col];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.t[i][rhs] / a;
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                None => return false,
                Some((row, _)) => self.pivot(row, col),
            }
        }
    }
}

impl LinearProgram {
    pub fn new(a: Vec<Vec<Rat>>, b: Vec<Rat>, c: Vec<Rat>) -> Self {
        assert_eq!(a.len(), b.len(), "constraint rows and rhs");
        let n = c.len();
        assert!(a.iter().all(|r| r.len() == n), "constraint width");
        LinearProgram { a, b, c }
    }

    /// Feasibility problem with zero objective.
    pub fn feasibility(a: Vec<Vec<Rat>>, b: Vec<Rat>) -> Self {
        let n = a.first().map_or(0, Vec::len);
        Self::new(a, b, vec![Rat::zero(); n])
    }

    pub fn solve(&self) -> LpOutcome {
        let m = self.a.len();
        let n = self.c.len();
        let width = n + m + 1;
        let mut sign = vec![Rat::one(); m];
        let mut t = Vec::with_capacity(m);
        for i in 0..m {
            let flip = self.b[i].is_negative();
            if flip {
                sign[i] = -Rat::one();
            }
            let mut row = Vec::with_capacity(width);
            for j in 0..n {
                row.push(if flip { -self.a[i][j].clone() } else { self.a[i][j].clone() });
            }
            for k in 0..m {
                row.push(if k == i { Rat::one() } else { Rat::zero() });
            }
            row.push(if flip { -self.b[i].clone() } else { self.b[i].clone() });
            t.push(row);
        }
        // Phase 1: minimise the sum of artificials.
        let mut obj = vec![Rat::zero(); width];
        for row in &t {
            for j in 0..n {
                obj[j] -= &row[j];
            }
            obj[width - 1] -= &row[width - 1];
        }
        let mut tab = Tableau { t, obj, basis: (n..n + m).collect(), width };
        tab.run(n);
        if !tab.obj[width - 1].is_zero() {
            return LpOutcome::Infeasible;
        }
        // Drive artificials out of the basis where possible; rows where that
        // fails are redundant and stay inert.
        for i in 0..m {
            if tab.basis[i] < n {
                continue;
            }
            if let Some(j) = (0..n).find(|&j| !tab.t[i][j].is_zero()) {
                tab.pivot(i, j);
            }
        }
        // Phase 2.
        let cost = |j: usize| if j < n { self.c[j].clone() } else { Rat::zero() };
        let mut obj = vec![Rat::zero(); width];
        for (j, o) in obj.iter_mut().enumerate() {
            let mut v = if j + 1 == width { Rat::zero() } else { cost(j) };
            for (i, row) in tab.t.iter().enumerate() {
                let cb = cost(tab.basis[i]);
                if !cb.is_zero() && !row[j].is_zero() {
                    v -= cb * &row[j];
                }
            }
            *o = v;
        }
        tab.obj = obj;
        if !tab.run(n) {
            return LpOutcome::Unbounded;
        }
        let rhs = width - 1;
        let mut x = vec![Rat::zero(); n];
        for (i, &bv) in tab.basis.iter().enumerate() {
            if bv < n {
                x[bv] = tab.t[i][rhs].clone();
            }
        }
        let value = x.iter().zip(&self.c).fold(Rat::zero(), |acc, (a, b)| acc + a * b);
        let duals = (0..m).map(|k| -tab.obj[n + k].clone() * &sign[k]).collect();
        let basis = tab.basis.iter().copied().filter(|&b| b < n).collect();
        LpOutcome::Optimal(LpSolution { x, value, basis, duals })
    }
}

/// Whether `x` is a nonnegative rational combination of `generators`.
pub fn cone_membership(x: &RatVec, generators: &[IntVec]) -> bool {
    assert!(!generators.is_empty(), "cone needs generators");
    let r = x.len();
    let a = (0..r).map(|i| generators.iter().map(|g| rat_int(g[i])).collect()).collect();
    !matches!(LinearProgram::feasibility(a, x.0.clone()).solve(), LpOutcome::Infeasible)
}

/// Convex weights expressing `p` as a combination of `points`, if any.
pub fn convex_combination(p: &RatVec, points: &[IntVec]) -> Option<Vec<Rat>> {
    let r = p.len();
    let mut a: Vec<Vec<Rat>> = (0..r).map(|i| points.iter().map(|q| rat_int(q[i])).collect()).collect();
    a.push(vec![Rat::one(); points.len()]);
    let mut b = p.0.clone();
    b.push(Rat::one());
    LinearProgram::feasibility(a, b).solve().optimal().map(|s| s.x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;

    fn iv(v: &[i64]) -> IntVec {
        IntVec(v.to_vec())
    }

    #[test]
    fn orthant_cone() {
        let g = [iv(&[1, 0]), iv(&[0, 1])];
        assert!(cone_membership(&RatVec::from_ints(&[1, 1]), &g));
        assert!(!cone_membership(&RatVec::from_ints(&[-1, 0]), &g));
    }

    #[test]
    fn hexagonal_triangle_cone() {
        // (1,2) = 0·(1,0) + 1·(1,1) + 1·(0,1)
        let g = [iv(&[1, 0]), iv(&[1, 1]), iv(&[0, 1])];
        assert!(cone_membership(&RatVec::from_ints(&[1, 2]), &g));
        assert!(!cone_membership(&RatVec::from_ints(&[1, -1]), &g));
    }

    #[test]
    fn small_optimum_with_duals() {
        // min x + 2y s.t. x + y = 3, x - y = 1  → x = 2, y = 1, value 4
        let lp = LinearProgram::new(
            vec![vec![rat(1, 1), rat(1, 1)], vec![rat(1, 1), rat(-1, 1)]],
            vec![rat(3, 1), rat(1, 1)],
            vec![rat(1, 1), rat(2, 1)],
        );
        let s = lp.solve().optimal().unwrap();
        assert_eq!(s.x, vec![rat(2, 1), rat(1, 1)]);
        assert_eq!(s.value, rat(4, 1));
        // y solves yᵀA = c on the basis: y1 + y2 = 1, y1 - y2 = 2.
        assert_eq!(s.duals, vec![rat(3, 2), rat(-1, 2)]);
    }

    #[test]
    fn negative_rhs_and_redundant_rows() {
        let lp = LinearProgram::new(
            vec![vec![rat(-1, 1), rat(0, 1)], vec![rat(-2, 1), rat(0, 1)], vec![rat(0, 1), rat(1, 1)]],
            vec![rat(-1, 1), rat(-2, 1), rat(5, 1)],
            vec![rat(1, 1), rat(1, 1)],
        );
        let s = lp.solve().optimal().unwrap();
        assert_eq!(s.value, rat(6, 1));
    }

    #[test]
    fn unbounded_and_infeasible() {
        let lp = LinearProgram::new(vec![vec![rat(1, 1), rat(-1, 1)]], vec![rat(0, 1)], vec![rat(-1, 1), rat(0, 1)]);
        assert!(matches!(lp.solve(), LpOutcome::Unbounded));
        let lp = LinearProgram::feasibility(vec![vec![rat(1, 1)]], vec![rat(-1, 1)]);
        assert!(matches!(lp.solve(), LpOutcome::Infeasible));
    }

    #[test]
    fn convex_weights() {
        let pts = [iv(&[0, 0]), iv(&[2, 0]), iv(&[0, 2])];
        let w = convex_combination(&RatVec(vec![rat(1, 2), rat(1, 2)]), &pts).unwrap();
        assert_eq!(w.iter().fold(Rat::zero(), |a, b| a + b), rat(1, 1));
        assert!(convex_combination(&RatVec::from_ints(&[2, 2]), &pts).is_none());
    }
}
