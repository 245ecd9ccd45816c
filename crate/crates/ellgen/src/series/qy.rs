//! Truncated power series in `q` with localized Laurent coefficients.
//!
//! `q` exponents are stored in halves like the `y` exponents. A series is
//! exact for every `q` exponent `<= trunc`. A windowed series is exact only
//! for `y` exponents inside the window; outside it nothing is stored.

use std::collections::BTreeMap;

use num_rational::{BigRational, Ratio};

use super::laurent::{Exp, LocalizedLaurent};
use crate::error::{Error, Result};
use crate::scalar::{Field, Scalar};

/// Bounds the `y` support of the coefficient of `q^j`:
/// `[-lo_slope*j - lo_const, hi_slope*j + hi_const]`, all in halves.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SlopeCert {
    pub lo_slope: i64,
    pub lo_const: i64,
    pub hi_slope: i64,
    pub hi_const: i64,
}

impl SlopeCert {
    pub fn new(lo_slope: i64, lo_const: i64, hi_slope: i64, hi_const: i64) -> Self {
        SlopeCert { lo_slope, lo_const, hi_slope, hi_const }
    }

    /// Support bound at `q^{j2/2}` (halves), as halves. Slopes act on whole units.
    pub fn range_at(&self, j2: i64) -> (i64, i64) {
        (-self.lo_slope * j2 - self.lo_const, self.hi_slope * j2 + self.hi_const)
    }

    fn sum(&self, o: &SlopeCert) -> SlopeCert {
        SlopeCert::new(
            self.lo_slope + o.lo_slope,
            self.lo_const + o.lo_const,
            self.hi_slope + o.hi_slope,
            self.hi_const + o.hi_const,
        )
    }

    fn hull(&self, o: &SlopeCert) -> SlopeCert {
        SlopeCert::new(
            self.lo_slope.max(o.lo_slope),
            self.lo_const.max(o.lo_const),
            self.hi_slope.max(o.hi_slope),
            self.hi_const.max(o.hi_const),
        )
    }
}

#[derive(Clone, Debug)]
pub struct QYSeries<S> {
    coeffs: BTreeMap<i64, LocalizedLaurent<S>>,
    trunc: i64,
    window: Option<(i64, i64)>,
    slope: Option<SlopeCert>,
}

/// Exponent with denominator dividing 2, as halves.
pub fn to_half(r: Ratio<i64>) -> Result<i64> {
    let twice = r * Ratio::from_integer(2);
    if !twice.is_integer() {
        return Err(Error::Grid(format!("{} is not a multiple of 1/2", r)));
    }
    Ok(twice.to_integer())
}

impl<S: Scalar> QYSeries<S> {
    /// Zero series, exact up to `q^{trunc2/2}`.
    pub fn zero(trunc2: i64) -> Self {
        QYSeries { coeffs: BTreeMap::new(), trunc: trunc2, window: None, slope: None }
    }

    pub fn one(trunc2: i64) -> Self {
        Self::from_coeffs([(0, LocalizedLaurent::one())], trunc2)
    }

    pub fn constant(c: LocalizedLaurent<S>, trunc2: i64) -> Self {
        Self::from_coeffs([(0, c)], trunc2)
    }

    /// `c q^{q2/2} y^{y2/2}`
    pub fn monomial(c: S, q2: i64, y2: i64, trunc2: i64) -> Self {
        Self::from_coeffs([(q2, LocalizedLaurent::monomial(c, y2, 0))], trunc2)
    }

    pub fn from_coeffs<I: IntoIterator<Item = (i64, LocalizedLaurent<S>)>>(it: I, trunc2: i64) -> Self {
        let mut coeffs: BTreeMap<i64, LocalizedLaurent<S>> = BTreeMap::new();
        for (q, c) in it {
            if q > trunc2 {
                continue;
            }
            let v = match coeffs.remove(&q) {
                Some(old) => old.add(&c),
                None => c,
            };
            if !v.is_zero() {
                coeffs.insert(q, v);
            }
        }
        QYSeries { coeffs, trunc: trunc2, window: None, slope: None }
    }

    /// Build from `(q, y, t, c)` terms with rational exponents on the half grid.
    pub fn make<I>(terms: I, trunc: Ratio<i64>) -> Result<Self>
    where
        I: IntoIterator<Item = (Ratio<i64>, Ratio<i64>, Ratio<i64>, S)>,
    {
        let trunc2 = to_half(trunc)?;
        let mut by_q: BTreeMap<i64, Vec<(Exp, S)>> = BTreeMap::new();
        for (q, y, t, c) in terms {
            let q2 = to_half(q)?;
            by_q.entry(q2).or_default().push(((to_half(y)?, to_half(t)?), c));
        }
        Ok(Self::from_coeffs(by_q.into_iter().map(|(q, v)| (q, LocalizedLaurent::from_terms(v))), trunc2))
    }

    /// Build from integer `(q, y, c)` triples.
    pub fn from_int_terms<I: IntoIterator<Item = (i64, i64, S)>>(it: I, trunc: i64) -> Self {
        let mut by_q: BTreeMap<i64, Vec<(i64, S)>> = BTreeMap::new();
        for (q, y, c) in it {
            by_q.entry(2 * q).or_default().push((2 * y, c));
        }
        Self::from_coeffs(by_q.into_iter().map(|(q, v)| (q, LocalizedLaurent::from_y_terms(v))), 2 * trunc)
    }

    pub fn trunc2(&self) -> i64 {
        self.trunc
    }

    /// Truncation order in whole `q` units, rounded down.
    pub fn trunc_order(&self) -> i64 {
        self.trunc.div_euclid(2)
    }

    pub fn window(&self) -> Option<(i64, i64)> {
        self.window
    }

    pub fn slope_cert(&self) -> Option<SlopeCert> {
        self.slope
    }

    pub fn coeffs(&self) -> &BTreeMap<i64, LocalizedLaurent<S>> {
        &self.coeffs
    }

    pub fn coeff(&self, q2: i64) -> LocalizedLaurent<S> {
        self.coeffs.get(&q2).cloned().unwrap_or_else(LocalizedLaurent::zero)
    }

    /// Integer-exponent coefficient of `q^q y^y`.
    pub fn coeff_qy(&self, q: i64, y: i64) -> S {
        self.coeffs.get(&(2 * q)).map(|c| c.coeff(2 * y, 0)).unwrap_or_else(S::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Lowest stored `q` exponent (halves).
    pub fn valuation(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn is_polynomial(&self) -> bool {
        self.coeffs.values().all(|c| c.is_polynomial())
    }

    /// Smallest and largest stored `y` exponent over all coefficients.
    pub fn y_range(&self) -> Option<(i64, i64)> {
        let mut lo = i64::MAX;
        let mut hi = i64::MIN;
        for c in self.coeffs.values() {
            if let Some((a, b)) = c.y_range() {
                lo = lo.min(a);
                hi = hi.max(b);
            }
        }
        if lo > hi {
            None
        } else {
            Some((lo, hi))
        }
    }

    pub fn truncate(&self, trunc2: i64) -> Self {
        let t = trunc2.min(self.trunc);
        QYSeries {
            coeffs: self.coeffs.range(..=t).map(|(k, v)| (*k, v.clone())).collect(),
            trunc: t,
            window: self.window,
            slope: self.slope,
        }
    }

    /// Declare the series exact only inside `[lo, hi]` (halves) and drop the rest.
    pub fn with_window(&self, lo: i64, hi: i64) -> Result<Self> {
        if !self.is_polynomial() {
            return Err(Error::Window("windowed coefficients must be Laurent polynomials".into()));
        }
        let (lo, hi) = match self.window {
            Some((a, b)) => (lo.max(a), hi.min(b)),
            None => (lo, hi),
        };
        let mut out = QYSeries { coeffs: BTreeMap::new(), trunc: self.trunc, window: Some((lo, hi)), slope: self.slope };
        for (q, c) in &self.coeffs {
            let r = c.restrict_y(lo, hi);
            if !r.is_zero() {
                out.coeffs.insert(*q, r);
            }
        }
        Ok(out)
    }

    /// Attach a slope certificate after checking it against every stored coefficient.
    pub fn with_slope(&self, cert: SlopeCert) -> Result<Self> {
        for (q, c) in &self.coeffs {
            if let Some((a, b)) = c.y_range() {
                let (lo, hi) = cert.range_at(*q);
                if a < lo || b > hi {
                    return Err(Error::Window(format!("slope certificate violated at q^{}", crate::scalar::fmt_half(*q))));
                }
            }
        }
        let mut out = self.clone();
        out.slope = Some(cert);
        Ok(out)
    }

    pub fn without_slope(&self) -> Self {
        let mut out = self.clone();
        out.slope = None;
        out
    }

    fn combine_window(a: Option<(i64, i64)>, b: Option<(i64, i64)>) -> Option<(i64, i64)> {
        match (a, b) {
            (None, w) | (w, None) => w,
            (Some(x), Some(y)) => Some((x.0.max(y.0), x.1.min(y.1))),
        }
    }

    fn finish(mut self) -> Self {
        if let Some((lo, hi)) = self.window {
            for c in self.coeffs.values_mut() {
                *c = c.restrict_y(lo, hi);
            }
        }
        let t = self.trunc;
        self.coeffs.retain(|q, c| !c.is_zero() && *q <= t);
        self
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut coeffs = self.coeffs.clone();
        for (q, c) in &other.coeffs {
            let v = match coeffs.remove(q) {
                Some(old) => old.add(c),
                None => c.clone(),
            };
            if !v.is_zero() {
                coeffs.insert(*q, v);
            }
        }
        let slope = match (self.slope, other.slope) {
            (Some(a), Some(b)) => Some(a.hull(&b)),
            _ => None,
        };
        QYSeries {
            coeffs,
            trunc: self.trunc.min(other.trunc),
            window: Self::combine_window(self.window, other.window),
            slope,
        }
        .finish()
    }

    pub fn neg(&self) -> Self {
        QYSeries {
            coeffs: self.coeffs.iter().map(|(q, c)| (*q, c.neg())).collect(),
            trunc: self.trunc,
            window: self.window,
            slope: self.slope,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut out = self.clone();
        for v in out.coeffs.values_mut() {
            *v = v.scale(c);
        }
        out.coeffs.retain(|_, v| !v.is_zero());
        out
    }

    /// Multiply every coefficient by a fixed Laurent element.
    pub fn scale_laurent(&self, c: &LocalizedLaurent<S>) -> Self {
        let mut out = self.clone();
        for v in out.coeffs.values_mut() {
            *v = v.mul(c);
        }
        out.slope = None;
        out.finish()
    }

    /// Multiply by `q^{q2/2} y^{y2/2}`; truncation moves with the shift.
    pub fn shift(&self, q2: i64, y2: i64) -> Self {
        QYSeries {
            coeffs: self.coeffs.iter().map(|(q, c)| (*q + q2, c.shift(y2, 0))).collect(),
            trunc: self.trunc + q2,
            window: self.window.map(|(a, b)| (a + y2, b + y2)),
            slope: None,
        }
    }

    /// Valuation used for truncation bookkeeping: an all-zero series is
    /// unknown only beyond its truncation.
    fn eff_val(&self) -> i64 {
        self.valuation().unwrap_or(self.trunc + 1)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        let va = self.eff_val();
        let vb = other.eff_val();
        let trunc = (self.trunc + vb).min(other.trunc + va);
        let mut window = None;
        // guard band for each windowed factor from the other factor's certificate
        for (w, v_self, partner) in [(self.window, va, other), (other.window, vb, self)] {
            if let Some((lo, hi)) = w {
                let cert = partner.slope.ok_or_else(|| {
                    Error::Window("windowed operand needs a slope certificate on the other factor".into())
                })?;
                let jmax = (trunc - v_self).max(0);
                let jmin = partner.eff_val().min(jmax);
                let (plo_max, phi_max) = cert.range_at(jmax);
                let (plo_min, phi_min) = cert.range_at(jmin);
                let need_hi = phi_max.max(phi_min);
                let need_lo = plo_max.min(plo_min);
                let derived = (lo + need_hi, hi + need_lo);
                window = Self::combine_window(window, Some(derived));
            }
        }
        let slope = match (self.slope, other.slope) {
            (Some(a), Some(b)) => Some(a.sum(&b)),
            _ => None,
        };
        let mut acc: BTreeMap<i64, LocalizedLaurent<S>> = BTreeMap::new();
        for (qa, ca) in &self.coeffs {
            if *qa + vb > trunc {
                break;
            }
            for (qb, cb) in &other.coeffs {
                let q = qa + qb;
                if q > trunc {
                    break;
                }
                let mut p = ca.mul(cb);
                if let Some((lo, hi)) = window {
                    p = p.restrict_y(lo, hi);
                }
                if p.is_zero() {
                    continue;
                }
                let v = match acc.remove(&q) {
                    Some(old) => old.add(&p),
                    None => p,
                };
                if !v.is_zero() {
                    acc.insert(q, v);
                }
            }
        }
        Ok(QYSeries { coeffs: acc, trunc, window, slope }.finish())
    }

    /// Product; panics on a windowed operand without a partner certificate.
    pub fn mul(&self, other: &Self) -> Self {
        self.try_mul(other).expect("series product")
    }

    pub fn pow(&self, n: u32) -> Self {
        if n == 0 {
            return Self::one(self.trunc);
        }
        let mut out: Option<Self> = None;
        let mut base = self.clone();
        let mut k = n;
        loop {
            if k & 1 == 1 {
                out = Some(match out {
                    None => base.clone(),
                    Some(o) => o.mul(&base),
                });
            }
            k >>= 1;
            if k == 0 {
                break;
            }
            base = base.mul(&base);
        }
        out.unwrap()
    }

    /// `y -> y q^j`: monomial `y^e q^f` goes to `y^e q^{f + e j}`.
    pub fn subst_y_qshift(&self, j: i64) -> Result<Self> {
        if !self.is_polynomial() {
            return Err(Error::Window("substitution needs Laurent polynomial coefficients".into()));
        }
        let (lo, hi) = match self.window.or_else(|| self.y_range()) {
            Some(r) => r,
            None => return Ok(Self::zero(self.trunc)),
        };
        let trunc = if j >= 0 { self.trunc + lo * j } else { self.trunc + hi * j };
        let mut by_q: BTreeMap<i64, Vec<(Exp, S)>> = BTreeMap::new();
        for (q, c) in &self.coeffs {
            for (e, v) in c.terms() {
                by_q.entry(q + e.0 * j).or_default().push((*e, v.clone()));
            }
        }
        let mut out = Self::from_coeffs(by_q.into_iter().map(|(q, v)| (q, LocalizedLaurent::from_terms(v))), trunc);
        out.window = self.window;
        Ok(out.finish())
    }

    /// `q -> q^{num/den}` on the stored exponents; every exponent must stay integral.
    pub fn rescale_q(&self, num: i64, den: i64) -> Result<Self> {
        if self.window.is_some() || num <= 0 || den <= 0 {
            return Err(Error::Grid("rescaling needs an unwindowed series and positive factors".into()));
        }
        let mut coeffs = BTreeMap::new();
        for (q, c) in &self.coeffs {
            if (q * num) % den != 0 {
                return Err(Error::Grid(format!("exponent {}/{} of q does not rescale", q * num, den)));
            }
            coeffs.insert(q * num / den, c.clone());
        }
        Ok(QYSeries { coeffs, trunc: (self.trunc * num).div_euclid(den), window: None, slope: None })
    }

    /// `y -> y^{-1}`.
    pub fn subst_y_invert(&self) -> Self {
        QYSeries {
            coeffs: self.coeffs.iter().map(|(q, c)| (*q, c.invert_y())).collect(),
            trunc: self.trunc,
            window: self.window.map(|(a, b)| (-b, -a)),
            slope: self.slope.map(|s| SlopeCert::new(s.hi_slope, s.hi_const, s.lo_slope, s.lo_const)),
        }
    }

    /// `y -> y^2`.
    pub fn subst_y_double(&self) -> Self {
        QYSeries {
            coeffs: self.coeffs.iter().map(|(q, c)| (*q, c.double_y())).collect(),
            trunc: self.trunc,
            window: self.window.map(|(a, b)| (2 * a, 2 * b)),
            slope: self.slope.map(|s| SlopeCert::new(2 * s.lo_slope, 2 * s.lo_const, 2 * s.hi_slope, 2 * s.hi_const)),
        }
    }

    /// Compare on the common truncation and window. Returns the first differing
    /// monomial as `(q2, y2, t2)`.
    pub fn first_difference(&self, other: &Self) -> Option<(i64, i64, i64)> {
        let t = self.trunc.min(other.trunc);
        let w = Self::combine_window(self.window, other.window);
        let d = self.truncate(t).sub(&other.truncate(t));
        for (q, c) in &d.coeffs {
            if !c.is_polynomial() {
                return Some((*q, i64::MIN, 0));
            }
            for e in c.terms().keys() {
                if w.map_or(true, |(lo, hi)| e.0 >= lo && e.0 <= hi) {
                    return Some((*q, e.0, e.1));
                }
            }
        }
        None
    }

    pub fn eq_on_overlap(&self, other: &Self) -> bool {
        self.first_difference(other).is_none()
    }

    pub fn map_coeffs<T: Scalar, F: Fn(&S) -> T>(&self, f: F) -> QYSeries<T> {
        QYSeries {
            coeffs: self.coeffs.iter().map(|(q, c)| (*q, c.map_coeffs(&f))).filter(|(_, c)| !c.is_zero()).collect(),
            trunc: self.trunc,
            window: self.window,
            slope: self.slope,
        }
    }

    /// Text form: one line per `q` exponent.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (q, c) in &self.coeffs {
            out.push_str(&format!("q^{}: {}\n", crate::scalar::fmt_half(*q), c));
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        use crate::scalar::fmt_half;
        use serde_json::json;
        let coeffs: Vec<_> = self
            .coeffs
            .iter()
            .map(|(q, c)| {
                let terms: Vec<_> = c
                    .terms()
                    .iter()
                    .map(|(e, v)| {
                        let mut m = json!({"y": fmt_half(e.0), "c": v.to_string()});
                        if e.1 != 0 {
                            m["t"] = json!(fmt_half(e.1));
                        }
                        m
                    })
                    .collect();
                let mut entry = json!({"q": fmt_half(*q), "terms": terms});
                if !c.is_polynomial() {
                    let den: Vec<_> = c.denominators().iter().map(|d| json!([fmt_half(d.0), fmt_half(d.1)])).collect();
                    entry["denominators"] = json!(den);
                }
                entry
            })
            .collect();
        let mut v = json!({"trunc_order": fmt_half(self.trunc), "coeffs": coeffs});
        if let Some((lo, hi)) = self.window {
            v["window"] = json!([fmt_half(lo), fmt_half(hi)]);
        }
        v
    }
}

impl<S: Field> QYSeries<S> {
    /// Multiplicative inverse; the lowest coefficient must be a unit.
    pub fn inv(&self) -> Result<Self> {
        if self.window.is_some() {
            return Err(Error::Window("inverse of a windowed series".into()));
        }
        let v = self.valuation().ok_or_else(|| Error::NotInvertible("zero series".into()))?;
        let n = self.trunc - v;
        let step = self.coeffs.keys().map(|q| q - v).chain([n.max(0)]).fold(0i64, num_integer::gcd).max(1);
        let a0 = &self.coeffs[&v];
        let b0 = a0.unit_inverse()?;
        let mut b: BTreeMap<i64, LocalizedLaurent<S>> = BTreeMap::new();
        b.insert(0, b0.clone());
        let mut k = step;
        while k <= n {
            let mut s = LocalizedLaurent::zero();
            for (q, a) in self.coeffs.range(v + 1..=v + k) {
                let i = q - v;
                if let Some(bk) = b.get(&(k - i)) {
                    s = s.add(&a.mul(bk));
                }
            }
            let val = s.mul(&b0).neg();
            if !val.is_zero() {
                b.insert(k, val);
            }
            k += step;
        }
        Ok(Self::from_coeffs(b.into_iter().map(|(k, c)| (k - v, c)), n - v))
    }

    /// `self / other`, required to have Laurent polynomial coefficients when
    /// `self` does.
    pub fn exact_div(&self, other: &Self) -> Result<Self> {
        let q = self.try_mul(&other.inv()?)?;
        if self.is_polynomial() && !q.is_polynomial() {
            let (k, c) = q.coeffs.iter().find(|(_, c)| !c.is_polynomial()).unwrap();
            return Err(Error::NotDivisible(format!("q^{}: {}", crate::scalar::fmt_half(*k), c)));
        }
        Ok(q)
    }

    pub fn eval_y(&self, v: i64) -> Result<Self> {
        if self.window.is_some() {
            return Err(Error::Window("evaluation of a windowed series".into()));
        }
        let mut coeffs = Vec::new();
        for (q, c) in &self.coeffs {
            coeffs.push((*q, c.eval_y(v)?));
        }
        Ok(Self::from_coeffs(coeffs, self.trunc))
    }
}

impl<S: Scalar> PartialEq for QYSeries<S> {
    fn eq(&self, other: &Self) -> bool {
        self.trunc == other.trunc && self.window == other.window && self.coeffs == other.coeffs
    }
}

/// `1 / (1 - y^c q^s)` expanded at `q = 0`; `s = 0` gives the symbolic pole.
pub fn expand_binomial_inverse<S: Scalar>(c2: i64, s2: i64, trunc2: i64) -> QYSeries<S> {
    use std::cmp::Ordering;
    match s2.cmp(&0) {
        Ordering::Equal => QYSeries::constant(LocalizedLaurent::one().with_pole((c2, 0)), trunc2),
        Ordering::Greater => {
            let mut terms = Vec::new();
            let mut j = 0;
            while s2 * j <= trunc2 {
                terms.push((s2 * j, LocalizedLaurent::monomial(S::one(), c2 * j, 0)));
                j += 1;
            }
            QYSeries::from_coeffs(terms, trunc2)
        }
        Ordering::Less => {
            let mut terms = Vec::new();
            let mut j = 1;
            while -s2 * j <= trunc2 {
                terms.push((-s2 * j, LocalizedLaurent::monomial(-S::one(), -c2 * j, 0)));
                j += 1;
            }
            QYSeries::from_coeffs(terms, trunc2)
        }
    }
}

pub type Series = QYSeries<BigRational>;

impl Series {
    pub fn all_integer(&self) -> bool {
        self.coeffs.values().all(|c| c.is_polynomial() && c.terms().values().all(crate::scalar::is_integer))
    }
}
