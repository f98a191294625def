//! The monodromy data: a positive-definite symmetric integer form `B` on
//! `X = ℤ^r` and an optional integer linear part `l`.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{rat, rat_int, Rat, RatMatrix, RatVec, IntVec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormError {
    #[error("rank must be positive")]
    EmptyRank,
    #[error("gram matrix row {row} has length {len}, expected {rank}")]
    Ragged { row: usize, len: usize, rank: usize },
    #[error("gram matrix is not symmetric: entry ({i},{j}) = {a} but ({j},{i}) = {b}")]
    NotSymmetric { i: usize, j: usize, a: i64, b: i64 },
    #[error("gram matrix is not positive definite: leading principal minor of order {order} is {value}")]
    NotPositiveDefinite { order: usize, value: String },
    #[error("linear part has length {len}, expected {rank}")]
    LinearLength { len: usize, rank: usize },
}

/// Positive-definite integral quadratic form with linear part.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GramForm {
    gram: Vec<Vec<i64>>,
    linear: Vec<i64>,
}

impl GramForm {
    pub fn new(gram: Vec<Vec<i64>>, linear: Option<Vec<i64>>) -> Result<Self, FormError> {
        let rank = gram.len();
        if rank == 0 {
            return Err(FormError::EmptyRank);
        }
        for (row, r) in gram.iter().enumerate() {
            if r.len() != rank {
                return Err(FormError::Ragged { row, len: r.len(), rank });
            }
        }
        for i in 0..rank {
            for j in i + 1..rank {
                if gram[i][j] != gram[j][i] {
                    return Err(FormError::NotSymmetric { i, j, a: gram[i][j], b: gram[j][i] });
                }
            }
        }
        for order in 1..=rank {
            let minor: Vec<Vec<i64>> = gram[..order].iter().map(|r| r[..order].to_vec()).collect();
            let det = RatMatrix::from_int_rows(&minor).determinant();
            if !det.is_positive() {
                return Err(FormError::NotPositiveDefinite { order, value: det.to_string() });
            }
        }
        let linear = linear.unwrap_or_else(|| vec![0; rank]);
        if linear.len() != rank {
            return Err(FormError::LinearLength { len: linear.len(), rank });
        }
        Ok(GramForm { gram, linear })
    }

    pub fn identity(rank: usize) -> Self {
        let gram = (0..rank).map(|i| (0..rank).map(|j| i64::from(i == j)).collect()).collect();
        GramForm::new(gram, None).expect("identity is positive definite")
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &[Vec<i64>] {
        &self.gram
    }

    pub fn linear(&self) -> &[i64] {
        &self.linear
    }

    /// `B(x, y)` on lattice points.
    pub fn pair(&self, x: &IntVec, y: &IntVec) -> i64 {
        let mut s = 0i64;
        for (i, row) in self.gram.iter().enumerate() {
            if x[i] == 0 {
                continue;
            }
            let bi: i64 = row.iter().zip(y.iter()).map(|(b, v)| b * v).sum();
            s += x[i] * bi;
        }
        s
    }

    pub fn norm(&self, x: &IntVec) -> i64 {
        self.pair(x, x)
    }

    /// `B(a, b)` on rational points.
    pub fn pair_rat(&self, a: &RatVec, b: &RatVec) -> Rat {
        self.apply(a).0.iter().zip(&b.0).fold(Rat::zero(), |acc, (p, q)| acc + p * q)
    }

    pub fn norm_rat(&self, a: &RatVec) -> Rat {
        self.pair_rat(a, a)
    }

    /// `B·a`, the functional `x ↦ B(a, x)` in dual coordinates.
    pub fn apply(&self, a: &RatVec) -> RatVec {
        RatVec(
            self.gram
                .iter()
                .map(|row| row.iter().zip(&a.0).fold(Rat::zero(), |acc, (&b, x)| acc + rat_int(b) * x))
                .collect(),
        )
    }

    pub fn apply_int(&self, x: &IntVec) -> IntVec {
        IntVec(self.gram.iter().map(|row| row.iter().zip(x.iter()).map(|(b, v)| b * v).sum()).collect())
    }

    /// The affine height `A(x) = (B(x,x) + l·x)/2`.
    pub fn affine_height(&self, x: &IntVec) -> Rat {
        let l: i64 = self.linear.iter().zip(x.iter()).map(|(a, b)| a * b).sum();
        rat(self.norm(x) + l, 2)
    }

    pub fn matrix(&self) -> RatMatrix {
        RatMatrix::from_int_rows(&self.gram)
    }

    /// `(n·B, n·l)`.
    pub fn scaled(&self, n: i64) -> Self {
        assert!(n > 0, "scale factor must be positive");
        GramForm {
            gram: self.gram.iter().map(|r| r.iter().map(|b| b * n).collect()).collect(),
            linear: self.linear.iter().map(|c| c * n).collect(),
        }
    }

    /// `Uᵀ B U` (and `Uᵀ l`) for an integer matrix `U` given by rows.
    pub fn transformed(&self, u: &[Vec<i64>]) -> Result<Self, FormError> {
        let r = self.rank();
        let mut g = vec![vec![0i64; r]; r];
        for (i, gi) in g.iter_mut().enumerate() {
            for (j, gij) in gi.iter_mut().enumerate() {
                let mut s = 0;
                for a in 0..r {
                    for b in 0..r {
                        s += u[a][i] * self.gram[a][b] * u[b][j];
                    }
                }
                *gij = s;
            }
        }
        let l = (0..r).map(|i| (0..r).map(|a| u[a][i] * self.linear[a]).sum()).collect();
        GramForm::new(g, Some(l))
    }

    /// Rational `LDLᵀ`-style decomposition used for ellipsoid enumeration:
    /// returns `(q, d)` with `B(x,x) = Σ_i d_i (x_i + Σ_{j>i} q_ij x_j)²`.
    pub(crate) fn completed_squares(&self) -> (Vec<Vec<Rat>>, Vec<Rat>) {
        let r = self.rank();
        let mut a: Vec<Vec<Rat>> =
            self.gram.iter().map(|row| row.iter().map(|&b| rat_int(b)).collect()).collect();
        let mut q = vec![vec![Rat::zero(); r]; r];
        let mut d = vec![Rat::zero(); r];
        for i in 0..r {
            d[i] = a[i][i].clone();
            for j in i + 1..r {
                q[i][j] = &a[i][j] / &d[i];
            }
            for k in i + 1..r {
                for l in i + 1..r {
                    let v = &a[k][l] - &q[i][k] * &a[i][l];
                    a[k][l] = v;
                }
            }
        }
        (q, d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_symmetric() {
        let e = GramForm::new(vec![vec![2, 1], vec![0, 2]], None).unwrap_err();
        assert!(matches!(e, FormError::NotSymmetric { i: 0, j: 1, .. }));
    }

    #[test]
    fn names_failing_minor() {
        let e = GramForm::new(vec![vec![1, 2], vec![2, 1]], None).unwrap_err();
        assert_eq!(e, FormError::NotPositiveDefinite { order: 2, value: "-3".into() });
        let e = GramForm::new(vec![vec![0]], None).unwrap_err();
        assert!(matches!(e, FormError::NotPositiveDefinite { order: 1, .. }));
    }

    #[test]
    fn completed_squares_reproduce_norm() {
        let f = GramForm::new(vec![vec![2, -1, 0], vec![-1, 2, -1], vec![0, -1, 2]], None).unwrap();
        let (q, d) = f.completed_squares();
        for x in [[1i64, 0, 0], [1, 1, 1], [-2, 3, 1], [0, -1, 4]] {
            let x = IntVec(x.to_vec());
            let mut s = Rat::zero();
            for i in 0..3 {
                let mut t = rat_int(x[i]);
                for j in i + 1..3 {
                    t += &q[i][j] * rat_int(x[j]);
                }
                s += &d[i] * &t * &t;
            }
            assert_eq!(s, rat_int(f.norm(&x)));
        }
    }

    #[test]
    fn affine_height_with_linear_part() {
        let f = GramForm::new(vec![vec![2]], Some(vec![1])).unwrap();
        assert_eq!(f.affine_height(&IntVec(vec![3])), rat(21, 2));
        assert_eq!(f.affine_height(&IntVec(vec![0])), rat_int(0));
    }
}
