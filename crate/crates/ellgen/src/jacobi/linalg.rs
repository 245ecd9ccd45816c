//! Fraction-free row reduction over the integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Rows with rational entries, each scaled by the lcm of its denominators.
pub fn integer_rows(rows: &[Vec<BigRational>]) -> Vec<Vec<BigInt>> {
    rows.iter()
        .map(|r| {
            let l = r.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            r.iter().map(|x| (x * BigRational::from_integer(l.clone())).to_integer()).collect()
        })
        .collect()
}

fn primitive(row: &mut [BigInt]) {
    let g = row.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in row.iter_mut() {
            *x /= &g;
        }
    }
}

/// Reduced echelon form: every pivot column is zero outside its pivot row.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub rows: Vec<Vec<BigInt>>,
    pub pivots: Vec<usize>,
    pub ncols: usize,
}

pub fn echelon(mut m: Vec<Vec<BigInt>>, ncols: usize) -> Echelon {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        if m[r][c].is_negative() {
            for x in m[r].iter_mut() {
                *x = -x.clone();
            }
        }
        primitive(&mut m[r]);
        let prow = m[r].clone();
        let pv = prow[c].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&prow) {
                *x = &*x * &pv - &f * y;
            }
            primitive(row);
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    m.truncate(r);
    Echelon { rows: m, pivots, ncols }
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Integer basis of the kernel, one primitive vector per free column.
    pub fn kernel(&self) -> Vec<Vec<BigInt>> {
        let mut out = Vec::new();
        for j in (0..self.ncols).filter(|j| !self.pivots.contains(j)) {
            let l = self.rows.iter().zip(&self.pivots).fold(BigInt::one(), |acc, (row, &p)| acc.lcm(&row[p]));
            let mut v = vec![BigInt::zero(); self.ncols];
            v[j] = l.clone();
            for (row, &p) in self.rows.iter().zip(&self.pivots) {
                v[p] = -(&l / &row[p]) * &row[j];
            }
            primitive(&mut v);
            out.push(v);
        }
        out
    }
}

/// Outcome of solving `A x = b`.
#[derive(Clone, Debug, PartialEq)]
pub enum Solution {
    Unique(Vec<BigRational>),
    Inconsistent,
    Underdetermined { rank: usize },
}

/// Rows are equations `sum_j a_j x_j = b`, given as `[a_1 .. a_n, b]`.
pub fn solve(rows: &[Vec<BigRational>], n: usize) -> Solution {
    let e = echelon(integer_rows(rows), n + 1);
    if e.pivots.last() == Some(&n) {
        return Solution::Inconsistent;
    }
    if e.rank() < n {
        return Solution::Underdetermined { rank: e.rank() };
    }
    // pivot columns are 0..n in order, so row i reads p_i x_i = r_i[n]
    Solution::Unique(e.rows.iter().enumerate().map(|(i, r)| BigRational::new(r[n].clone(), r[i].clone())).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, rint};

    fn ints(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    #[test]
    fn rank_and_kernel() {
        let e = echelon(ints(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]), 3);
        assert_eq!(e.rank(), 2);
        let k = e.kernel();
        assert_eq!(k.len(), 1);
        assert_eq!(k[0], vec![BigInt::from(-1), BigInt::from(-1), BigInt::from(1)]);
    }

    #[test]
    fn solving() {
        let rows = vec![vec![rint(2), rint(1), rint(3)], vec![rint(1), rint(-1), rint(0)], vec![rint(3), rint(0), rint(3)]];
        assert_eq!(solve(&rows, 2), Solution::Unique(vec![rint(1), rint(1)]));
        let bad = vec![vec![rint(1), rint(1), rint(1)], vec![rint(1), rint(1), rint(2)]];
        assert_eq!(solve(&bad, 2), Solution::Inconsistent);
        let under = vec![vec![rat(1, 2), rint(1), rint(1)]];
        assert_eq!(solve(&under, 2), Solution::Underdetermined { rank: 1 });
    }
}
