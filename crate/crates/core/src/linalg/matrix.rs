use num_traits::{One, Zero};

use super::{rat_int, Rat, RatVec};

/// Dense row-major rational matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix { rows, cols, data: vec![Rat::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rat::one());
        }
        m
    }

    /// Builds a matrix from rows; all rows must have the same length.
    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        RatMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_int_rows<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        Self::from_rows(
            rows.iter().map(|row| row.as_ref().iter().map(|&x| rat_int(x)).collect()).collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rat {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rat) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &RatVec) -> RatVec {
        RatVec(
            (0..self.rows)
                .map(|i| self.row(i).iter().zip(&v.0).fold(Rat::zero(), |acc, (a, b)| acc + a * b))
                .collect(),
        )
    }

    /// Determinant of a square matrix.
    pub fn determinant(&self) -> Rat {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let mut m = self.clone();
        let n = self.rows;
        let mut det = Rat::one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !m.get(r, col).is_zero()) else {
                return Rat::zero();
            };
            if p != col {
                m.swap_rows(p, col);
                det = -det;
            }
            let pivot = m.get(col, col).clone();
            det *= &pivot;
            for r in col + 1..n {
                let f = m.get(r, col) / &pivot;
                if f.is_zero() {
                    continue;
                }
                for c in col..n {
                    let v = m.get(r, c) - &f * m.get(col, c);
                    m.set(r, c, v);
                }
            }
        }
        det
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&r| !self.get(r, col).is_zero()) else {
                continue;
            };
            self.swap_rows(p, row);
            let inv = self.get(row, col).recip();
            for c in col..self.cols {
                let v = self.get(row, c) * &inv;
                self.set(row, c, v);
            }
            for r in 0..self.rows {
                if r == row {
                    continue;
                }
                let f = self.get(r, col).clone();
                if f.is_zero() {
                    continue;
                }
                for c in col..self.cols {
                    let v = self.get(r, c) - &f * self.get(row, c);
                    self.set(r, c, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }
}

/// Determinant of a square integer matrix by fraction-free (Bareiss)
/// elimination; `None` on `i128` overflow.
pub fn integer_determinant<R: AsRef<[i64]>>(rows: &[R]) -> Option<i128> {
    let n = rows.len();
    let mut m: Vec<Vec<i128>> = rows.iter().map(|r| r.as_ref().iter().map(|&x| i128::from(x)).collect()).collect();
    assert!(m.iter().all(|r| r.len() == n), "determinant of a non-square matrix");
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| m[i][k] != 0) else {
            return Some(0);
        };
        if p != k {
            m.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = m[i][j].checked_mul(m[k][k])?.checked_sub(m[i][k].checked_mul(m[k][j])?)?;
                m[i][j] = v / prev;
            }
            m[i][k] = 0;
        }
        prev = m[k][k];
    }
    Some(sign * m.last().map_or(1, |r| r[n - 1]))
}

/// Exact rank over `ℚ`.
pub fn rational_rank(m: &RatMatrix) -> usize {
    let mut m = m.clone();
    m.rref().len()
}

/// Unique solution of `M x = b`, if `M` has full column rank and the system
/// is consistent.
pub fn solve_linear(m: &RatMatrix, b: &RatVec) -> Option<RatVec> {
    assert_eq!(m.rows(), b.len(), "right-hand side length");
    let n = m.cols();
    let mut aug = RatMatrix::zeros(m.rows(), n + 1);
    for i in 0..m.rows() {
        for j in 0..n {
            aug.set(i, j, m.get(i, j).clone());
        }
        aug.set(i, n, b[i].clone());
    }
    let pivots = aug.rref();
    if pivots.contains(&n) || pivots.len() < n {
        return None;
    }
    Some(RatVec((0..n).map(|i| aug.get(i, n).clone()).collect()))
}

/// Basis of the right null space `{x : M x = 0}`.
pub fn nullspace(m: &RatMatrix) -> Vec<RatVec> {
    let mut r = m.clone();
    let pivots = r.rref();
    let free: Vec<usize> = (0..m.cols()).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![Rat::zero(); m.cols()];
            x[f] = Rat::one();
            for (row, &p) in pivots.iter().enumerate() {
                x[p] = -r.get(row, f).clone();
            }
            RatVec(x)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;

    #[test]
    fn bareiss_matches_rational_determinant() {
        let rows = vec![vec![2, -1, 0, 3], vec![-1, 2, -1, 0], vec![0, -1, 2, 5], vec![4, 0, -2, 1]];
        let d = RatMatrix::from_int_rows(&rows).determinant();
        assert_eq!(rat_int(integer_determinant(&rows).unwrap() as i64), d);
        assert_eq!(integer_determinant(&[[0, 1], [1, 0]]), Some(-1));
        assert_eq!(integer_determinant(&[[1, 2], [2, 4]]), Some(0));
    }

    #[test]
    fn identity_solve() {
        let m = RatMatrix::identity(2);
        let x = solve_linear(&m, &RatVec::from_ints(&[3, 5])).unwrap();
        assert_eq!(x, RatVec::from_ints(&[3, 5]));
    }

    #[test]
    fn diagonal_scaling() {
        let m = RatMatrix::from_int_rows(&[[2, 0], [0, 2]]);
        let x = solve_linear(&m, &RatVec::from_ints(&[1, 1])).unwrap();
        assert_eq!(x, RatVec(vec![rat(1, 2), rat(1, 2)]));
    }

    #[test]
    fn singular_and_inconsistent_systems_are_absent() {
        let m = RatMatrix::from_int_rows(&[[1, 1], [2, 2]]);
        assert!(solve_linear(&m, &RatVec::from_ints(&[1, 2])).is_none());
        let m = RatMatrix::from_int_rows(&[[1, 0], [0, 1], [1, 1]]);
        assert!(solve_linear(&m, &RatVec::from_ints(&[1, 1, 3])).is_none());
        let x = solve_linear(&m, &RatVec::from_ints(&[1, 1, 2])).unwrap();
        assert_eq!(x, RatVec::from_ints(&[1, 1]));
    }

    #[test]
    fn ranks() {
        assert_eq!(rational_rank(&RatMatrix::zeros(3, 4)), 0);
        assert_eq!(rational_rank(&RatMatrix::identity(5)), 5);
        let m = RatMatrix::from_int_rows(&[[1, 2, 3], [2, 4, 6], [1, 0, 1]]);
        assert_eq!(rational_rank(&m), 2);
    }

    #[test]
    fn determinant_and_nullspace() {
        let m = RatMatrix::from_int_rows(&[[2, -1], [-1, 2]]);
        assert_eq!(m.determinant(), rat(3, 1));
        let m = RatMatrix::from_int_rows(&[[1, 1, 0]]);
        let ns = nullspace(&m);
        assert_eq!(ns.len(), 2);
        for v in ns {
            assert!(m.mul_vec(&v).iter().all(Zero::is_zero));
        }
    }
}
