//! Small exact integer and rational linear algebra.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Determinant by fraction-free elimination.
pub fn det(m: &[Vec<i64>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            let Some(p) = (k + 1..n).find(|&i| a[i][k] != 0) else { return 0 };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

/// Adjugate of a square matrix: `adj(m) * m = det(m) * I`.
pub fn adjugate(m: &[Vec<i64>]) -> Vec<Vec<i128>> {
    let n = m.len();
    let mut adj = vec![vec![0i128; n]; n];
    if n == 1 {
        adj[0][0] = 1;
        return adj;
    }
    for i in 0..n {
        for j in 0..n {
            let minor: Vec<Vec<i64>> = m
                .iter()
                .enumerate()
                .filter(|(r, _)| *r != i)
                .map(|(_, row)| row.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, &x)| x).collect())
                .collect();
            let s = if (i + j) % 2 == 0 { 1 } else { -1 };
            adj[j][i] = s * det(&minor);
        }
    }
    adj
}

pub fn to_rat(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// Row echelon rank over the rationals.
pub fn rank(rows: &[Vec<i64>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let mut a: Vec<Vec<BigRational>> = rows.iter().map(|r| r.iter().map(|&x| to_rat(x)).collect()).collect();
    rank_rat(&mut a)
}

pub fn rank_rat(a: &mut [Vec<BigRational>]) -> usize {
    let rows = a.len();
    if rows == 0 {
        return 0;
    }
    let cols = a[0].len();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone() / a[r][c].clone();
                for j in c..cols {
                    let v = a[r][j].clone() * f.clone();
                    a[i][j] -= v;
                }
            }
        }
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

/// Unique solution of `x * A = b` where rows of `A` are vectors; `None` if singular.
pub fn solve_left(a: &[Vec<i64>], b: &[i64]) -> Option<Vec<BigRational>> {
    // x_j = sum over i of b_i * adj... use Cramer via adjugate: x * A = b  =>  x = b * A^{-1}
    let d = det(a);
    if d == 0 {
        return None;
    }
    let adj = adjugate(a);
    let n = a.len();
    Some(
        (0..n)
            .map(|j| {
                let s: i128 = (0..n).map(|i| b[i] as i128 * adj[i][j]).sum();
                BigRational::new(BigInt::from(s), BigInt::from(d))
            })
            .collect(),
    )
}

/// Unique solution of `A x = b`; `None` if singular.
pub fn solve_right(a: &[Vec<i64>], b: &[i64]) -> Option<Vec<BigRational>> {
    let d = det(a);
    if d == 0 {
        return None;
    }
    let adj = adjugate(a);
    let n = a.len();
    Some(
        (0..n)
            .map(|i| {
                let s: i128 = (0..n).map(|j| adj[i][j] * b[j] as i128).sum();
                BigRational::new(BigInt::from(s), BigInt::from(d))
            })
            .collect(),
    )
}

/// Primitive integer normal to the span of `rows` (`n - 1` vectors in dimension `n`).
pub fn normal(rows: &[Vec<i64>]) -> Option<Vec<i64>> {
    let n = rows.len() + 1;
    let mut v = Vec::with_capacity(n);
    for j in 0..n {
        let minor: Vec<Vec<i64>> =
            rows.iter().map(|r| r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, &x)| x).collect()).collect();
        let s = if j % 2 == 0 { 1 } else { -1 };
        v.push(s * det(&minor));
    }
    let g = v.iter().fold(0i128, |g, x| g.gcd(x));
    if g == 0 {
        return None;
    }
    Some(v.iter().map(|x| (x / g) as i64).collect())
}

pub fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn dot_rat(a: &[BigRational], b: &[i64]) -> BigRational {
    a.iter().zip(b).fold(BigRational::zero(), |s, (x, &y)| s + x.clone() * to_rat(y))
}

pub fn gcd_vec(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |g, x| g.gcd(x))
}

pub fn is_integral(v: &[BigRational]) -> bool {
    v.iter().all(|x| x.denom().is_one())
}

pub fn rat_to_i64(v: &[BigRational]) -> Vec<i64> {
    use num_traits::ToPrimitive;
    v.iter().map(|x| x.to_integer().to_i64().unwrap()).collect()
}

pub fn abs_det(m: &[Vec<i64>]) -> i128 {
    det(m).abs()
}
