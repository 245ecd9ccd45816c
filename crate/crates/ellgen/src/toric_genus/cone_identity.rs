//! The one-dimensional cone identity
//! `prod_k (1 - t y q^{k-1})(1 - t^{-1} y^{-1} q^k) / ((1 - t q^{k-1})(1 - t^{-1} q^k))
//!  = sum_m t^m / (1 - y q^m) G(y, q)`
//! as series in `q` over Laurent polynomials in `y, t` localized at `1 - t`,
//! `1 - y` and `1 - t y`. The `m > 0`, `q^0` tail `sum t^m` is `t / (1 - t)`.

use std::collections::BTreeSet;

use serde_json::json;

use crate::error::Result;
use crate::report::Report;
use crate::scalar::{fmt_half, rint};
use crate::series::laurent::Exp;
use crate::series::{Laurent, Series};
use crate::theta::g_series;

/// Denominators the two sides may carry: `1 - t`, `1 - y`, `1 - t y` (halves).
pub const ALLOWED_DENOMINATORS: [Exp; 3] = [(0, 2), (2, 0), (2, 2)];

fn mono(c: i64, y: i64, t: i64) -> Laurent {
    Laurent::from_terms([((2 * y, 2 * t), rint(c))])
}

fn at(q: i64, l: Laurent, order: i64) -> Series {
    Series::from_coeffs([(2 * q, l)], 2 * order)
}

/// `1 - c y^a t^b q^k`
fn one_minus(y: i64, t: i64, k: i64, order: i64) -> Series {
    Series::one(2 * order).sub(&at(k, mono(1, y, t), order))
}

/// `1 / (1 - t^s q^k)` for `k >= 1`, expanded in `q`.
fn geometric(s: i64, k: i64, order: i64) -> Series {
    let mut out = Series::zero(2 * order);
    let mut j = 0;
    while j * k <= order {
        out = out.add(&at(j * k, mono(1, 0, s * j), order));
        j += 1;
    }
    out
}

pub fn cone_identity_lhs(order: i64) -> Series {
    let mut out = at(0, mono(1, 0, 0).sub(&mono(1, 1, 1)), order);
    out = out.mul(&at(0, Laurent::pole(0, 2), order));
    for k in 1..=order + 1 {
        if k >= 2 {
            out = out.mul(&one_minus(1, 1, k - 1, order)).mul(&geometric(1, k - 1, order));
        }
        if k <= order {
            out = out.mul(&one_minus(-1, -1, k, order)).mul(&geometric(-1, k, order));
        }
    }
    out
}

pub fn cone_identity_rhs(order: i64) -> Series {
    // m = 0 and the q^0 part of m > 0
    let head = Laurent::pole(2, 0).add(&mono(1, 0, 1).mul(&Laurent::pole(0, 2)));
    let mut sum = at(0, head, order);
    for m in 1..=order {
        let mut j = 1;
        while m * j <= order {
            sum = sum.add(&at(m * j, mono(1, j, m), order));
            sum = sum.add(&at(m * j, mono(-1, -j, -m), order));
            j += 1;
        }
    }
    sum.mul(&g_series(order).without_slope())
}

/// Coefficient with its `t`-denominators expanded as geometric series around
/// `t = 0`, restricted to `t` exponents in `[lo, hi]`.
fn t_expand(l: &Laurent, lo: i64, hi: i64) -> Laurent {
    let tmin = l.terms().keys().map(|e| e.1).min().unwrap_or(0);
    let reach = (2 * hi - tmin).max(0) / 2;
    let mut num = Laurent::from_terms(l.terms().iter().map(|(e, c)| (*e, c.clone())));
    let mut y_only = Vec::new();
    for f in l.denominators() {
        if f.1 == 0 {
            y_only.push(*f);
            continue;
        }
        let steps = reach / (f.1 / 2).max(1);
        let geo = Laurent::from_terms((0..=steps).map(|j| ((j * f.0, j * f.1), rint(1))));
        num = num.mul(&geo);
    }
    let mut out = Laurent::from_terms(num.terms().iter().filter(|(e, _)| e.1 >= 2 * lo && e.1 <= 2 * hi).map(|(e, c)| (*e, c.clone())));
    for f in y_only {
        out = out.with_pole(f);
    }
    out
}

/// Exact equality of both sides to `q^order`, the allowed denominators, and
/// equality of the `t` expansions inside the window.
pub fn cone_identity_check(order: i64, t_window: (i64, i64)) -> Result<Report> {
    let lhs = cone_identity_lhs(order);
    let rhs = cone_identity_rhs(order);
    let mut seen = BTreeSet::new();
    for s in [&lhs, &rhs] {
        for c in s.coeffs().values() {
            seen.extend(c.denominators().iter().copied());
        }
    }
    let denominators_ok = seen.iter().all(|f| ALLOWED_DENOMINATORS.contains(f));
    let mut first_difference = None;
    let mut first_window_difference = None;
    for k in 0..=order {
        let (a, b) = (lhs.coeff(2 * k), rhs.coeff(2 * k));
        if first_difference.is_none() && !a.sub(&b).is_zero() {
            first_difference = Some(k);
        }
        let (wa, wb) = (t_expand(&a, t_window.0, t_window.1), t_expand(&b, t_window.0, t_window.1));
        if first_window_difference.is_none() && !wa.sub(&wb).is_zero() {
            first_window_difference = Some(k);
        }
    }
    let name = |f: &Exp| format!("1 - y^{} t^{}", fmt_half(f.0), fmt_half(f.1));
    let passed = denominators_ok && first_difference.is_none() && first_window_difference.is_none();
    let detail = json!({
        "q_order": order,
        "t_window": [t_window.0, t_window.1],
        "denominators": seen.iter().map(name).collect::<Vec<_>>(),
        "denominators_allowed": denominators_ok,
        "first_difference_q": first_difference,
        "first_window_difference_q": first_window_difference,
    });
    Ok(Report::new("identity-eq11", passed, detail))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn q0_coefficient() {
        // (1 - t y) / (1 - t)
        let a = cone_identity_lhs(2).coeff(0);
        let b = mono(1, 0, 0).sub(&mono(1, 1, 1)).mul(&Laurent::pole(0, 2));
        assert!(a.sub(&b).is_zero());
    }

    #[test]
    fn identity_to_q6() {
        let r = cone_identity_check(6, (-6, 6)).unwrap();
        assert!(r.passed(), "{}", r.to_text());
    }

    #[test]
    fn broken_rhs_is_caught() {
        let lhs = cone_identity_lhs(3);
        let rhs = cone_identity_rhs(3).add(&at(2, mono(1, 0, 1), 3));
        assert!(!lhs.coeff(4).sub(&rhs.coeff(4)).is_zero());
    }
}
