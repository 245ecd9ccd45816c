//! The divisor-sum identity attached to the projective plane and its
//! bijective proof.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::series::Series;

fn to_series(c: &[i128], order: i64) -> Series {
    Series::from_int_terms(
        c.iter().enumerate().filter(|(_, v)| **v != 0).map(|(a, v)| (a as i64, 0, BigRational::from_integer(BigInt::from(*v)))),
        order,
    )
}

/// `sum_{m,n >= 1} q^{m+n} / ((1+q^m)(1+q^n)(1+q^{m+n}))` and
/// `sum_{r >= 1} q^{2r} sigma(r)`, both up to `q^order`.
pub fn p2_identity_sides(order: i64) -> Result<(Series, Series)> {
    if order < 2 {
        return Err(Error::Domain("order must be at least 2".into()));
    }
    let n_ = order as usize;
    let mut lhs = vec![0i128; n_ + 1];
    for m in 1..n_ {
        for n in 1..=(n_ - m) {
            let mut c = vec![0i128; n_ + 1];
            c[m + n] = 1;
            for s in [m, n, m + n] {
                for a in s..=n_ {
                    c[a] -= c[a - s];
                }
            }
            for a in 0..=n_ {
                lhs[a] += c[a];
            }
        }
    }
    let mut rhs = vec![0i128; n_ + 1];
    for r in 1..=n_ / 2 {
        rhs[2 * r] = (1..=r).filter(|k| r % k == 0).map(|k| k as i128).sum();
    }
    Ok((to_series(&lhs, order), to_series(&rhs, order)))
}

type Tuple = (i64, i64, i64, i64);

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct BijectionRow {
    pub d: i64,
    pub solutions: usize,
    pub even: usize,
    pub odd: usize,
    pub surviving: usize,
    pub divisor_sum: i64,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct BijectionReport {
    pub d_max: i64,
    pub rows: Vec<BijectionRow>,
}

fn solutions(d: i64) -> Vec<Tuple> {
    let mut out = Vec::new();
    for a in 1..d {
        for m in 1..=d / a {
            let rest = d - m * a;
            if rest < 1 {
                continue;
            }
            for b in 1..=rest {
                if rest % b == 0 && a.min(b) % 2 == 1 {
                    out.push((a, b, m, rest / b));
                }
            }
        }
    }
    out
}

fn to_odd(t: Tuple) -> Tuple {
    let (a, b, m, n) = t;
    if n > m {
        (a + b, b, m, n - m)
    } else {
        (a, a + b, m - n, n)
    }
}

fn to_even(t: Tuple) -> Tuple {
    let (a, b, m, n) = t;
    if a > b {
        (a - b, b, m, m + n)
    } else {
        (a, b - a, m + n, n)
    }
}

/// Checks the two maps between the even and odd parts for every `d <= d_max`.
pub fn verify_bijection(d_max: i64) -> Result<BijectionReport> {
    if d_max < 2 {
        return Err(Error::Domain("d_max must be at least 2".into()));
    }
    let mut rows = Vec::new();
    for d in 2..=d_max {
        let all = solutions(d);
        let (j, survivors): (Vec<Tuple>, Vec<Tuple>) =
            all.iter().partition(|&&(a, b, m, n)| !(m == n && (a + b) % 2 == 0));
        let even: BTreeSet<Tuple> = j.iter().copied().filter(|t| (t.0 + t.1) % 2 == 0).collect();
        let odd: BTreeSet<Tuple> = j.iter().copied().filter(|t| (t.0 + t.1) % 2 == 1).collect();
        for &t in &even {
            let u = to_odd(t);
            if !odd.contains(&u) {
                return Err(Error::BijectionFailure(format!("d = {}: {:?} maps outside the odd part to {:?}", d, t, u)));
            }
            if to_even(u) != t {
                return Err(Error::BijectionFailure(format!("d = {}: {:?} is not recovered", d, t)));
            }
        }
        for &t in &odd {
            let u = to_even(t);
            if !even.contains(&u) {
                return Err(Error::BijectionFailure(format!("d = {}: {:?} maps outside the even part to {:?}", d, t, u)));
            }
            if to_odd(u) != t {
                return Err(Error::BijectionFailure(format!("d = {}: {:?} is not recovered", d, t)));
            }
        }
        let signed: i64 = j.iter().map(|t| if (t.0 + t.1) % 2 == 0 { 1 } else { -1 }).sum();
        if signed != 0 {
            return Err(Error::BijectionFailure(format!("d = {}: signed sum over J is {}", d, signed)));
        }
        let divisor_sum = if d % 2 == 0 { (1..=d / 2).filter(|k| (d / 2) % k == 0).sum() } else { 0 };
        if survivors.len() as i64 != divisor_sum {
            return Err(Error::BijectionFailure(format!(
                "d = {}: {} surviving terms, divisor sum {}",
                d,
                survivors.len(),
                divisor_sum
            )));
        }
        rows.push(BijectionRow {
            d,
            solutions: all.len(),
            even: even.len(),
            odd: odd.len(),
            surviving: survivors.len(),
            divisor_sum,
        });
    }
    Ok(BijectionReport { d_max, rows })
}
