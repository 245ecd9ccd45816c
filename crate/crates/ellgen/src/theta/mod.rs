//! Theta, eta, `G`, `f` and Eisenstein series, as exact `q`-expansions and as
//! floating-point values.

pub mod checks;
pub mod numeric;

use num_rational::{BigRational, Ratio};

use crate::error::{Error, Result};
use crate::scalar::{rint, Field};
use crate::series::{LocalizedLaurent, QYSeries, Series, SlopeCert};

/// `(-i)^phase * q^{q_shift} * body`.
#[derive(Clone, Debug, PartialEq)]
pub struct PrefixedSeries {
    pub q_shift: Ratio<i64>,
    pub phase: u8,
    pub body: Series,
}

impl PrefixedSeries {
    pub fn new(q_shift: Ratio<i64>, phase: u8, body: Series) -> Result<Self> {
        if !(q_shift * Ratio::from_integer(24)).is_integer() {
            return Err(Error::Grid(format!("q shift {} is not a multiple of 1/24", q_shift)));
        }
        Ok(PrefixedSeries { q_shift, phase: phase % 4, body })
    }

    pub fn mul(&self, o: &Self) -> Self {
        PrefixedSeries { q_shift: self.q_shift + o.q_shift, phase: (self.phase + o.phase) % 4, body: self.body.mul(&o.body) }
    }

    pub fn pow(&self, n: u32) -> Self {
        PrefixedSeries {
            q_shift: self.q_shift * Ratio::from_integer(n as i64),
            phase: ((self.phase as u32 * n) % 4) as u8,
            body: self.body.pow(n),
        }
    }

    /// Quotient of two prefixed series whose prefactors cancel.
    pub fn div_plain(&self, o: &Self) -> Result<Series> {
        if self.q_shift != o.q_shift || self.phase != o.phase {
            return Err(Error::Grid("prefactors do not cancel".into()));
        }
        self.body.exact_div(&o.body)
    }
}

fn y_poly(terms: &[(i64, i64)]) -> LocalizedLaurent<BigRational> {
    LocalizedLaurent::from_y_terms(terms.iter().map(|(e, c)| (*e, rint(*c))))
}

/// `(1 - q^l y^{c/2})` as a series.
fn one_minus<S: Field>(l: i64, c2: i64, trunc2: i64) -> QYSeries<S> {
    QYSeries::from_coeffs(
        [(0, LocalizedLaurent::one()), (2 * l, LocalizedLaurent::monomial(-S::one(), c2, 0))],
        trunc2,
    )
}

/// `theta(z, tau) = -i q^{1/8} (y^{1/2} - y^{-1/2}) prod (1-q^l)(1-q^l y)(1-q^l/y)`.
pub fn theta_reduced(order: i64) -> PrefixedSeries {
    let t = 2 * order;
    let mut body = Series::constant(y_poly(&[(1, 1), (-1, -1)]), t);
    for l in 1..=order {
        body = body.mul(&one_minus(l, 0, t)).mul(&one_minus(l, 2, t)).mul(&one_minus(l, -2, t));
    }
    PrefixedSeries { q_shift: Ratio::new(1, 8), phase: 1, body }
}

/// `eta = q^{1/24} prod (1 - q^l)`.
pub fn eta_series(order: i64) -> PrefixedSeries {
    PrefixedSeries { q_shift: Ratio::new(1, 24), phase: 0, body: euler_product(order) }
}

/// `prod_{l >= 1} (1 - q^l)`.
pub fn euler_product(order: i64) -> Series {
    let t = 2 * order;
    let mut body = Series::one(t);
    for l in 1..=order {
        body = body.mul(&one_minus(l, 0, t));
    }
    body
}

/// `y` support certificate of `G`: the coefficient of `q^j` lives in `[-j, j + 1]`.
pub fn g_slope() -> SlopeCert {
    SlopeCert::new(1, 0, 1, 2)
}

/// `G(y, q) = prod_{k >= 1} (1 - y q^{k-1})(1 - y^{-1} q^k) / (1 - q^k)^2`.
pub fn g_series(order: i64) -> Series {
    g_series_over::<BigRational>(order)
}

pub fn g_series_over<S: Field>(order: i64) -> QYSeries<S> {
    let t = 2 * order;
    let mut g = QYSeries::<S>::one(t);
    for k in 1..=order + 1 {
        g = g.mul(&one_minus(k - 1, 2, t));
        if k <= order {
            g = g.mul(&one_minus(k, -2, t));
            let inv = crate::series::expand_binomial_inverse::<S>(0, 2 * k, t);
            g = g.mul(&inv).mul(&inv);
        }
    }
    g.with_slope(g_slope()).expect("G support")
}

/// `H = G / (1 - y)`, whose `q^0` coefficient is 1.
pub fn h_series(order: i64) -> Series {
    let t = 2 * order;
    let mut h = Series::one(t);
    for k in 1..=order {
        h = h.mul(&one_minus(k, 2, t)).mul(&one_minus(k, -2, t));
        let inv = crate::series::expand_binomial_inverse(0, 2 * k, t);
        h = h.mul(&inv).mul(&inv);
    }
    h
}

/// `f = theta(2z)/theta(z)`, the index 3/2 form.
pub fn f_series(order: i64) -> Series {
    let th = theta_reduced(order);
    let num = PrefixedSeries { body: th.body.subst_y_double(), ..th.clone() };
    num.div_plain(&th).expect("theta(z) divides theta(2z)")
}

fn sigma(n: i64, k: u32) -> i64 {
    (1..=n).filter(|d| n % d == 0).map(|d| d.pow(k)).sum()
}

/// Normalized Eisenstein series `E_4` or `E_6`.
pub fn eisenstein(k: u32, order: i64) -> Result<Series> {
    let (c, p) = match k {
        4 => (240, 3),
        6 => (-504, 5),
        _ => return Err(Error::Domain(format!("E_{} not provided", k))),
    };
    let terms = std::iter::once((0, 0, rint(1))).chain((1..=order).map(|n| (n, 0, rint(c * sigma(n, p)))));
    Ok(Series::from_int_terms(terms, order))
}

/// `eta(2 tau)^2 / eta(tau)^4`; the `q` prefactors cancel. Its constant term is 1
/// while `G(-1, q)` starts at 2, so `G(-1, q)` is twice this quotient.
pub fn eta_quotient(order: i64) -> Result<Series> {
    let e = euler_product(order);
    // eta(2 tau) body: prod (1 - q^{2l}); prefactors q^{2/24 * 2} / q^{4/24} cancel
    let mut e2 = Series::one(2 * order);
    for l in 1..=order / 2 {
        e2 = e2.mul(&one_minus(2 * l, 0, 2 * order));
    }
    e2.pow(2).exact_div(&e.pow(4))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rint;

    #[test]
    fn theta_q1_coefficient() {
        let th = theta_reduced(3);
        let expect = y_poly(&[(1, 1), (-1, -1)]).mul(&y_poly(&[(0, -1), (2, -1), (-2, -1)]));
        assert_eq!(th.body.coeff(2), expect);
        assert_eq!(th.body.coeff(0), y_poly(&[(1, 1), (-1, -1)]));
    }

    #[test]
    fn eta_pentagonal() {
        let e = euler_product(12);
        let expect = [1, -1, -1, 0, 0, 1, 0, 1, 0, 0, 0, 0, -1];
        for (n, c) in expect.iter().enumerate() {
            assert_eq!(e.coeff_qy(n as i64, 0), rint(*c), "q^{}", n);
        }
        let d = e.pow(24);
        assert_eq!(d.coeff_qy(0, 0), rint(1));
        assert_eq!(d.coeff_qy(1, 0), rint(-24));
        assert_eq!(d.coeff_qy(2, 0), rint(252));
    }

    #[test]
    fn g_leading_terms() {
        let g = g_series(4);
        assert_eq!(g.coeff(0), y_poly(&[(0, 1), (2, -1)]));
        assert_eq!(g.eval_y(-1).unwrap().coeff_qy(0, 0), rint(2));
        assert_eq!(g.mul(&g).coeff(0), y_poly(&[(0, 1), (2, -2), (4, 1)]));
    }

    #[test]
    fn f_leading_and_defining_identity() {
        let f = f_series(6);
        assert_eq!(f.coeff(0), y_poly(&[(1, 1), (-1, 1)]));
        let th = theta_reduced(6);
        assert!(f.mul(&th.body).eq_on_overlap(&th.body.subst_y_double()));
        assert!(f.is_polynomial());
    }

    #[test]
    fn eisenstein_discriminant() {
        let e4 = eisenstein(4, 6).unwrap();
        let e6 = eisenstein(6, 6).unwrap();
        assert_eq!(e6.coeff_qy(1, 0), rint(-504));
        let disc = e4.pow(3).sub(&e6.pow(2));
        assert_eq!(disc.coeff_qy(0, 0), rint(0));
        assert_eq!(disc.coeff_qy(1, 0), rint(1728));
        let delta = euler_product(6).pow(24).shift(2, 0).scale(&rint(1728));
        assert!(disc.eq_on_overlap(&delta));
    }
}
