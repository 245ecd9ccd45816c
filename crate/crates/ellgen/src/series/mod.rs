//! Exact bivariate series arithmetic.

pub mod laurent;
pub mod dense;
pub mod qy;

use num_rational::BigRational;

pub use laurent::{Exp, LocalizedLaurent};
pub use qy::{expand_binomial_inverse, to_half, QYSeries, Series, SlopeCert};

use crate::error::{Error, Result};
use crate::scalar::{fmt_rat, is_integer};

pub type Laurent = LocalizedLaurent<BigRational>;

/// `y^{d/2} Ell` of a `d`-dimensional variety.
#[derive(Clone, Debug, PartialEq)]
pub struct Genus {
    pub d: usize,
    pub body: Series,
    pub label: String,
}

impl Genus {
    pub fn new(d: usize, body: Series, label: impl Into<String>) -> Result<Self> {
        let label = label.into();
        for (q, c) in body.coeffs() {
            if q % 2 != 0 {
                return Err(Error::InternalInconsistency(format!("{}: half-integer q exponent", label)));
            }
            if !c.is_polynomial() {
                return Err(Error::InternalInconsistency(format!("{}: uncleared denominator {}", label, c)));
            }
            if c.terms().keys().any(|e| e.0 % 2 != 0 || e.1 != 0) {
                return Err(Error::InternalInconsistency(format!("{}: non-integer y exponent", label)));
            }
        }
        if let Some((lo, hi)) = body.coeff(0).y_range() {
            if lo < 0 || hi > 2 * d as i64 {
                return Err(Error::InternalInconsistency(format!("{}: q^0 slice outside [0, d]", label)));
            }
        }
        Ok(Genus { d, body, label })
    }

    /// Genus of a point.
    pub fn point(q_order: i64) -> Self {
        Genus { d: 0, body: Series::one(2 * q_order), label: "point".into() }
    }

    pub fn q_order(&self) -> i64 {
        self.body.trunc_order()
    }

    pub fn is_integral(&self) -> bool {
        self.body.all_integer()
    }

    /// Coefficients of `y^0 .. y^d` at `q^0`.
    pub fn q0_slice(&self) -> Vec<BigRational> {
        (0..=self.d as i64).map(|p| self.body.coeff_qy(0, p)).collect()
    }

    /// `Ell` itself, with half-integer exponents when `d` is odd.
    pub fn centered(&self) -> Series {
        self.body.shift(0, -(self.d as i64))
    }

    /// Value at `y = 1`, one rational per `q` order; `None` for windowed bodies.
    pub fn euler_series(&self) -> Result<Series> {
        self.body.eval_y(1)
    }

    /// Euler number if `eval_y(1)` is constant in `q`.
    pub fn euler_number(&self) -> Result<BigRational> {
        let e = self.euler_series()?;
        let c0 = e.coeff(0).coeff(0, 0);
        for (q, c) in e.coeffs() {
            if *q != 0 && !c.is_zero() {
                return Err(Error::Mismatch(format!("{}: y = 1 value depends on q at q^{}", self.label, q / 2)));
            }
        }
        Ok(c0)
    }

    pub fn product(&self, other: &Genus) -> Genus {
        Genus {
            d: self.d + other.d,
            body: self.body.mul(&other.body),
            label: if self.d == 0 {
                other.label.clone()
            } else if other.d == 0 {
                self.label.clone()
            } else {
                format!("{} x {}", self.label, other.label)
            },
        }
    }

    pub fn power(&self, n: u32) -> Genus {
        let mut g = Genus::point(self.q_order());
        for _ in 0..n {
            g = g.product(self);
        }
        g
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("# {} (d = {})\n", self.label, self.d);
        s.push_str(&self.body.to_text());
        s
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({"label": self.label, "d": self.d, "body": self.body.to_json()})
    }

    pub fn all_coefficients_integral(&self) -> bool {
        self.body.coeffs().values().all(|c| c.terms().values().all(is_integer))
    }
}

/// Render a slice of rationals as `(a, b, c)`.
pub fn fmt_vec(v: &[BigRational]) -> String {
    let parts: Vec<String> = v.iter().map(fmt_rat).collect();
    format!("({})", parts.join(", "))
}
