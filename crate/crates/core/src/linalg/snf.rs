use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Diagonal of the Smith normal form of an integer matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    /// `min(rows, cols)` diagonal entries `d_1 | d_2 | ...`, zeros last.
    pub factors: Vec<u64>,
    pub rank: usize,
}

impl SmithForm {
    pub fn nonzero_factors(&self) -> &[u64] {
        &self.factors[..self.rank]
    }

    /// Order of the torsion part of the cokernel.
    pub fn torsion_order(&self) -> u64 {
        self.nonzero_factors().iter().product()
    }

    /// Exponent of the torsion part of the cokernel (1 when torsion-free).
    pub fn exponent(&self) -> u64 {
        self.nonzero_factors().last().copied().unwrap_or(1)
    }

    /// Index of the row lattice in `ℤ^ambient`, when it has full rank.
    pub fn index_in(&self, ambient: usize) -> Option<u64> {
        (self.rank == ambient).then(|| self.torsion_order())
    }
}

/// Smith normal form of the integer matrix whose rows are `rows`.
///
/// The factors describe `ℤ^cols / (row lattice)`: the row lattice has
/// index `∏ d_i` in its saturation.
pub fn smith_normal_form<R: AsRef<[i64]>>(rows: &[R]) -> SmithForm {
    let m = rows.len();
    let n = rows.first().map_or(0, |r| r.as_ref().len());
    let mut a: Vec<Vec<BigInt>> =
        rows.iter().map(|r| r.as_ref().iter().map(|&x| BigInt::from(x)).collect()).collect();
    let k = m.min(n);
    let mut diag = Vec::with_capacity(k);

    for t in 0..k {
        // Smallest nonzero entry of the trailing block becomes the pivot.
        let Some((pi, pj)) = min_entry(&a, t) else {
            break;
        };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut changed = false;
            for i in t + 1..m {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&a[t][t]);
                for j in t..n {
                    let v = &a[t][j] * &q;
                    a[i][j] -= v;
                }
                if !a[i][t].is_zero() {
                    changed = true;
                }
            }
            for j in t + 1..n {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&a[t][t]);
                for row in a.iter_mut().skip(t) {
                    let v = &row[t] * &q;
                    row[j] -= v;
                }
                if !a[t][j].is_zero() {
                    changed = true;
                }
            }
            if !changed {
                // Divisibility of the remaining block by the pivot.
                let bad = (t + 1..m)
                    .flat_map(|i| (t + 1..n).map(move |j| (i, j)))
                    .find(|&(i, j)| !(&a[i][j] % &a[t][t]).is_zero());
                match bad {
                    None => break,
                    Some((i, _)) => {
                        for j in t..n {
                            let v = a[i][j].clone();
                            a[t][j] += v;
                        }
                        changed = true;
                    }
                }
            }
            if changed {
                if let Some((pi, pj)) = min_entry_from(&a, t) {
                    a.swap(t, pi);
                    for row in a.iter_mut() {
                        row.swap(t, pj);
                    }
                }
            }
        }
        diag.push(a[t][t].abs());
    }

    let rank = diag.len();
    let mut factors: Vec<u64> =
        diag.iter().map(|d| d.to_u64().expect("smith factor exceeds u64")).collect();
    factors.resize(k, 0);
    debug_assert!(factors[..rank].windows(2).all(|w| w[1] % w[0] == 0));
    SmithForm { factors, rank }
}

fn min_entry(a: &[Vec<BigInt>], t: usize) -> Option<(usize, usize)> {
    min_entry_from(a, t)
}

fn min_entry_from(a: &[Vec<BigInt>], t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, BigInt)> = None;
    for (i, row) in a.iter().enumerate().skip(t) {
        for (j, x) in row.iter().enumerate().skip(t) {
            if x.is_zero() {
                continue;
            }
            let ax = x.abs();
            if best.as_ref().is_none_or(|(_, _, b)| ax < *b) {
                let done = ax.is_one();
                best = Some((i, j, ax));
                if done {
                    return best.map(|(i, j, _)| (i, j));
                }
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn identity_factors() {
        let s = smith_normal_form(&[[1, 0, 0], [0, 1, 0], [0, 0, 1]]);
        assert_eq!(s.factors, vec![1, 1, 1]);
        assert_eq!(s.rank, 3);
    }

    #[test]
    fn coprime_diagonal_merges() {
        // Hand elimination: diag(2,3) ~ diag(1,6).
        let s = smith_normal_form(&[[2, 0], [0, 3]]);
        assert_eq!(s.factors, vec![1, 6]);
        assert_eq!(s.index_in(2), Some(6));
    }

    #[test]
    fn rank_deficient_and_rectangular() {
        let s = smith_normal_form(&[[2, 4], [1, 2], [3, 6]]);
        assert_eq!(s.rank, 1);
        assert_eq!(s.factors, vec![1, 0]);
        assert_eq!(s.index_in(2), None);
        let s = smith_normal_form(&[[0, 0, 0]]);
        assert_eq!(s.rank, 0);
        assert_eq!(s.exponent(), 1);
    }

    fn det2(m: &[[i64; 2]; 2]) -> i64 {
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    proptest! {
        #[test]
        fn divisibility_chain_and_determinant(a in -9i64..10, b in -9i64..10, c in -9i64..10, d in -9i64..10,
                                              e in -9i64..10, f in -9i64..10) {
            let m = [[a, b, c], [d, e, f], [a + d, b + e, c + f + 1]];
            let s = smith_normal_form(&m);
            let nz = s.nonzero_factors();
            for w in nz.windows(2) {
                prop_assert_eq!(w[1] % w[0], 0);
            }
            let sq = [[a, b], [d, e]];
            let s2 = smith_normal_form(&sq);
            let det = det2(&sq).unsigned_abs();
            if det != 0 {
                prop_assert_eq!(s2.torsion_order(), det);
            } else {
                prop_assert!(s2.rank < 2);
            }
        }
    }
}
