//! Laurent polynomials in `y` and `t`, localized at binomials `1 - y^a t^b`.
//!
//! Exponents are stored in halves: the key `(3, 0)` means `y^{3/2}`.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::{Field, Scalar};

/// Exponent pair `(y, t)` counted in halves.
pub type Exp = (i64, i64);

/// Numerator over an explicit multiset of binomial denominators.
#[derive(Clone, Debug)]
pub struct LocalizedLaurent<S> {
    terms: BTreeMap<Exp, S>,
    // sorted; every entry is lexicographically positive
    denom: Vec<Exp>,
}

fn is_positive(e: Exp) -> bool {
    e.0 > 0 || (e.0 == 0 && e.1 > 0)
}

fn add_exp(a: Exp, b: Exp) -> Exp {
    (a.0 + b.0, a.1 + b.1)
}

/// `p * (1 - y^a t^b)`
fn mul_binomial<S: Scalar>(p: &BTreeMap<Exp, S>, f: Exp) -> BTreeMap<Exp, S> {
    let mut out = p.clone();
    for (e, c) in p {
        let k = add_exp(*e, f);
        let v = out.remove(&k).unwrap_or_else(S::zero) - c.clone();
        if !v.is_zero() {
            out.insert(k, v);
        }
    }
    out
}

/// Exact quotient `p / (1 - y^a t^b)` if it exists.
fn div_binomial<S: Scalar>(p: &BTreeMap<Exp, S>, f: Exp) -> Option<BTreeMap<Exp, S>> {
    // Group exponents into cosets of Z*f; inside each coset the quotient is a
    // prefix sum, and divisibility means the coset total vanishes.
    let coset = |e: Exp| -> (Exp, i64) {
        let k = if f.0 != 0 { e.0.div_euclid(f.0) } else { e.1.div_euclid(f.1) };
        ((e.0 - k * f.0, e.1 - k * f.1), k)
    };
    let mut groups: BTreeMap<Exp, Vec<(i64, &S)>> = BTreeMap::new();
    for (e, c) in p {
        let (base, k) = coset(*e);
        groups.entry(base).or_default().push((k, c));
    }
    let mut out = BTreeMap::new();
    for (base, mut list) in groups {
        list.sort_by_key(|x| x.0);
        let kmax = list.last().unwrap().0;
        let mut acc = S::zero();
        let mut it = list.iter().peekable();
        let mut k = list[0].0;
        while k < kmax {
            while let Some((kk, c)) = it.peek() {
                if *kk == k {
                    acc = acc + (*c).clone();
                    it.next();
                } else {
                    break;
                }
            }
            if !acc.is_zero() {
                out.insert((base.0 + k * f.0, base.1 + k * f.1), acc.clone());
            }
            k += 1;
        }
        for (_, c) in it {
            acc = acc + (*c).clone();
        }
        if !acc.is_zero() {
            return None;
        }
    }
    Some(out)
}

fn mul_terms<S: Scalar>(a: &BTreeMap<Exp, S>, b: &BTreeMap<Exp, S>) -> BTreeMap<Exp, S> {
    let mut out: BTreeMap<Exp, S> = BTreeMap::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let k = add_exp(*ea, *eb);
            let p = ca.clone() * cb.clone();
            match out.get_mut(&k) {
                Some(v) => *v = v.clone() + p,
                None => {
                    out.insert(k, p);
                }
            }
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// Multiset difference `a - b` of sorted lists.
fn multiset_minus(a: &[Exp], b: &[Exp]) -> Vec<Exp> {
    let mut out = Vec::new();
    let mut j = 0;
    for x in a {
        while j < b.len() && b[j] < *x {
            j += 1;
        }
        if j < b.len() && b[j] == *x {
            j += 1;
        } else {
            out.push(*x);
        }
    }
    out
}

fn multiset_union(a: &[Exp], b: &[Exp]) -> Vec<Exp> {
    let mut out = a.to_vec();
    out.extend(multiset_minus(b, a));
    out.sort();
    out
}

impl<S: Scalar> LocalizedLaurent<S> {
    pub fn zero() -> Self {
        LocalizedLaurent { terms: BTreeMap::new(), denom: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(S::one())
    }

    pub fn constant(c: S) -> Self {
        Self::monomial(c, 0, 0)
    }

    /// `c * y^{y2/2} t^{t2/2}`
    pub fn monomial(c: S, y2: i64, t2: i64) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((y2, t2), c);
        }
        LocalizedLaurent { terms, denom: Vec::new() }
    }

    /// Polynomial in `y` from `(y2, c)` pairs.
    pub fn from_y_terms<I: IntoIterator<Item = (i64, S)>>(it: I) -> Self {
        Self::from_terms(it.into_iter().map(|(y, c)| ((y, 0), c)))
    }

    pub fn from_terms<I: IntoIterator<Item = (Exp, S)>>(it: I) -> Self {
        let mut terms: BTreeMap<Exp, S> = BTreeMap::new();
        for (e, c) in it {
            let v = terms.remove(&e).unwrap_or_else(S::zero) + c;
            if !v.is_zero() {
                terms.insert(e, v);
            }
        }
        LocalizedLaurent { terms, denom: Vec::new() }
    }

    /// `1 / (1 - y^{a/2} t^{b/2})`
    pub fn pole(a: i64, b: i64) -> Self {
        Self::one().with_pole((a, b))
    }

    /// Divide by `1 - y^{f.0/2} t^{f.1/2}`.
    pub fn with_pole(mut self, f: Exp) -> Self {
        assert!(f != (0, 0), "binomial 1 - 1 is not a unit");
        if is_positive(f) {
            self.denom.push(f);
        } else {
            // 1/(1-m) = -m^{-1}/(1-m^{-1})
            let inv = (-f.0, -f.1);
            self.terms = self.terms.into_iter().map(|(e, c)| (add_exp(e, inv), -c)).collect();
            self.denom.push(inv);
        }
        self.denom.sort();
        self.normalize();
        self
    }

    fn normalize(&mut self) {
        self.terms.retain(|_, c| !c.is_zero());
        if self.terms.is_empty() {
            self.denom.clear();
            return;
        }
        let mut kept = Vec::new();
        let old = std::mem::take(&mut self.denom);
        for f in old {
            match div_binomial(&self.terms, f) {
                Some(q) => self.terms = q,
                None => kept.push(f),
            }
        }
        self.denom = kept;
    }

    pub fn terms(&self) -> &BTreeMap<Exp, S> {
        &self.terms
    }

    pub fn denominators(&self) -> &[Exp] {
        &self.denom
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_polynomial(&self) -> bool {
        self.denom.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.denom.is_empty() && self.terms.len() == 1 && self.terms.get(&(0, 0)).is_some_and(|c| c.is_one())
    }

    /// Coefficient of `y^{y2/2} t^{t2/2}` in the numerator.
    pub fn coeff(&self, y2: i64, t2: i64) -> S {
        self.terms.get(&(y2, t2)).cloned().unwrap_or_else(S::zero)
    }

    /// Smallest and largest `y` exponent of the numerator.
    pub fn y_range(&self) -> Option<(i64, i64)> {
        let lo = self.terms.keys().map(|e| e.0).min()?;
        let hi = self.terms.keys().map(|e| e.0).max()?;
        Some((lo, hi))
    }

    pub fn has_t(&self) -> bool {
        self.terms.keys().any(|e| e.1 != 0) || self.denom.iter().any(|e| e.1 != 0)
    }

    /// Numerator expanded with every denominator factor multiplied back in.
    fn expanded_over(&self, target: &[Exp]) -> BTreeMap<Exp, S> {
        let mut p = self.terms.clone();
        for f in multiset_minus(target, &self.denom) {
            p = mul_binomial(&p, f);
        }
        p
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.denom == other.denom {
            let mut out = self.clone();
            for (e, c) in &other.terms {
                let v = out.terms.remove(e).unwrap_or_else(S::zero) + c.clone();
                if !v.is_zero() {
                    out.terms.insert(*e, v);
                }
            }
            out.normalize();
            return out;
        }
        let common = multiset_union(&self.denom, &other.denom);
        let a = self.expanded_over(&common);
        let b = other.expanded_over(&common);
        let mut out = LocalizedLaurent { terms: a, denom: common };
        for (e, c) in b {
            let v = out.terms.remove(&e).unwrap_or_else(S::zero) + c;
            if !v.is_zero() {
                out.terms.insert(e, v);
            }
        }
        out.normalize();
        out
    }

    pub fn neg(&self) -> Self {
        LocalizedLaurent {
            terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect(),
            denom: self.denom.clone(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut denom = self.denom.clone();
        denom.extend_from_slice(&other.denom);
        denom.sort();
        let mut out = LocalizedLaurent { terms: mul_terms(&self.terms, &other.terms), denom };
        if !out.denom.is_empty() {
            out.normalize();
        }
        out
    }

    pub fn scale(&self, c: &S) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v = v.clone() * c.clone();
        }
        out
    }

    /// Multiply by the monomial `y^{y2/2} t^{t2/2}`.
    pub fn shift(&self, y2: i64, t2: i64) -> Self {
        LocalizedLaurent {
            terms: self.terms.iter().map(|(e, c)| ((e.0 + y2, e.1 + t2), c.clone())).collect(),
            denom: self.denom.clone(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    /// `y -> y^{-1}`.
    pub fn invert_y(&self) -> Self {
        let mut out = LocalizedLaurent {
            terms: self.terms.iter().map(|(e, c)| ((-e.0, e.1), c.clone())).collect(),
            denom: Vec::new(),
        };
        for f in &self.denom {
            out = out.with_pole((-f.0, f.1));
        }
        out
    }

    /// `y -> y^2` (exponents doubled).
    pub fn double_y(&self) -> Self {
        let mut out = LocalizedLaurent {
            terms: self.terms.iter().map(|(e, c)| ((2 * e.0, e.1), c.clone())).collect(),
            denom: Vec::new(),
        };
        for f in &self.denom {
            out = out.with_pole((2 * f.0, f.1));
        }
        out
    }

    /// Drop numerator terms with `y` exponent outside `[lo, hi]`.
    pub fn restrict_y(&self, lo: i64, hi: i64) -> Self {
        debug_assert!(self.denom.is_empty());
        LocalizedLaurent {
            terms: self.terms.iter().filter(|(e, _)| e.0 >= lo && e.0 <= hi).map(|(e, c)| (*e, c.clone())).collect(),
            denom: self.denom.clone(),
        }
    }

    pub fn map_coeffs<T: Scalar, F: Fn(&S) -> T>(&self, f: F) -> LocalizedLaurent<T> {
        let mut out = LocalizedLaurent {
            terms: self.terms.iter().map(|(e, c)| (*e, f(c))).collect(),
            denom: self.denom.clone(),
        };
        out.normalize();
        out
    }
}

impl<S: Field> LocalizedLaurent<S> {
    /// Substitute `y = v` for `v = +1` or `v = -1`.
    pub fn eval_y(&self, v: i64) -> Result<Self> {
        assert!(v == 1 || v == -1);
        let sign = |e: i64| -> Result<S> {
            if v == 1 {
                return Ok(S::one());
            }
            if e % 2 != 0 {
                return Err(Error::Grid(format!("y^{}/2 at y = -1", e)));
            }
            Ok(if (e / 2) % 2 == 0 { S::one() } else { -S::one() })
        };
        let mut num = BTreeMap::new();
        for (e, c) in &self.terms {
            let k = (0, e.1);
            let val = num.remove(&k).unwrap_or_else(S::zero) + c.clone() * sign(e.0)?;
            if !val.is_zero() {
                num.insert(k, val);
            }
        }
        let mut out = LocalizedLaurent { terms: num, denom: Vec::new() };
        let mut scalar = S::one();
        for f in &self.denom {
            let s = sign(f.0)?;
            if f.1 == 0 {
                let val = S::one() - s;
                if val.is_zero() {
                    return Err(Error::PoleAtEvaluation(format!("1 - y^{} at y = {}", crate::scalar::fmt_half(f.0), v)));
                }
                scalar = scalar * val;
            } else if s.is_one() {
                out.denom.push((0, f.1));
            } else {
                return Err(Error::Unsupported("binomial 1 + t^b after evaluation".into()));
            }
        }
        out.denom.sort();
        let inv = S::one() / scalar;
        out = out.scale(&inv);
        out.normalize();
        Ok(out)
    }

    /// Inverse of a unit: rational times monomial times binomial powers.
    pub fn unit_inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::NotInvertible("zero".into()));
        }
        // the denominators become numerator factors of the inverse
        let mut num = BTreeMap::new();
        num.insert((0, 0), S::one());
        for f in &self.denom {
            num = mul_binomial(&num, *f);
        }
        let (factors, c, m) = self.numerator_unit_factors()?;
        let mut out = LocalizedLaurent { terms: num, denom: Vec::new() };
        out = out.scale(&(S::one() / c)).shift(-m.0, -m.1);
        for (f, e) in factors {
            if e > 0 {
                for _ in 0..e {
                    out = out.with_pole(f);
                }
            } else {
                for _ in 0..(-e) {
                    out.terms = mul_binomial(&out.terms, f);
                }
                out.normalize();
            }
        }
        Ok(out)
    }

    /// Write the numerator as `c * m * prod (1 - f)^{e_f}`.
    #[allow(clippy::type_complexity)]
    fn numerator_unit_factors(&self) -> Result<(Vec<(Exp, i64)>, S, Exp)> {
        let (m, c) = self.terms.iter().next().map(|(e, c)| (*e, c.clone())).unwrap();
        if self.terms.len() == 1 {
            return Ok((vec![], c, m));
        }
        if self.terms.len() == 2 {
            let (e2, c2) = self.terms.iter().nth(1).map(|(e, c)| (*e, c.clone())).unwrap();
            let f = (e2.0 - m.0, e2.1 - m.1);
            let r = c2 / c.clone();
            if (r.clone() + S::one()).is_zero() {
                return Ok((vec![(f, 1)], c, m));
            }
            if (r - S::one()).is_zero() {
                return Ok((vec![((2 * f.0, 2 * f.1), 1), (f, -1)], c, m));
            }
        }
        if self.has_t() {
            return Err(Error::NotInvertible(format!("{}", self)));
        }
        // y only: P(u) = 1 + p_1 u + ... with u = y^{g/2}
        let g = self.terms.keys().map(|e| e.0 - m.0).fold(0i64, num_integer::gcd);
        let deg = (self.terms.keys().last().unwrap().0 - m.0) / g;
        let cap = (4 * deg + 4) as usize;
        let mut p = vec![S::zero(); cap + 1];
        for (e, v) in &self.terms {
            p[((e.0 - m.0) / g) as usize] = v.clone() / c.clone();
        }
        let mut exps = Vec::new();
        let mut r = p.clone();
        for a in 1..=cap {
            let ra = r[a].clone();
            if ra.is_zero() {
                continue;
            }
            // R <- R / (1 - u^a)^{-ra}: multiply by (1-u^a)^{ra} via log-free update
            let e = -ra.clone();
            let ei = integer_of(&e).ok_or_else(|| Error::NotInvertible(format!("{}", self)))?;
            exps.push((a, ei));
            for _ in 0..ei.unsigned_abs() {
                if ei > 0 {
                    // divide by (1 - u^a)
                    for i in a..=cap {
                        let v = r[i].clone() + r[i - a].clone();
                        r[i] = v;
                    }
                } else {
                    for i in (a..=cap).rev() {
                        let v = r[i].clone() - r[i - a].clone();
                        r[i] = v;
                    }
                }
            }
        }
        // verify prod (1-u^a)^{e_a} == P exactly
        let mut top = BTreeMap::new();
        top.insert((0i64, 0i64), S::one());
        let mut bottom = top.clone();
        for (a, e) in &exps {
            let f = (*a as i64, 0);
            for _ in 0..e.unsigned_abs() {
                if *e > 0 {
                    top = mul_binomial(&top, f);
                } else {
                    bottom = mul_binomial(&bottom, f);
                }
            }
        }
        let pp: BTreeMap<Exp, S> =
            p.iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(i, v)| ((i as i64, 0), v.clone())).collect();
        if mul_terms(&pp, &bottom) != top {
            return Err(Error::NotInvertible(format!("{}", self)));
        }
        Ok((exps.into_iter().map(|(a, e)| ((a as i64 * g, 0), e)).collect(), c, m))
    }
}

fn integer_of<S: Scalar>(s: &S) -> Option<i64> {
    // small integers only; exponents of binomial factors are tiny
    for k in 0..=64i64 {
        if (s.clone() - S::from_int(k)).is_zero() {
            return Some(k);
        }
        if (s.clone() + S::from_int(k)).is_zero() {
            return Some(-k);
        }
    }
    None
}

impl<S: Scalar> PartialEq for LocalizedLaurent<S> {
    fn eq(&self, other: &Self) -> bool {
        if self.denom == other.denom {
            return self.terms == other.terms;
        }
        self.sub(other).is_zero()
    }
}

fn fmt_exp(e: Exp) -> String {
    let mut s = String::new();
    if e.0 != 0 {
        s.push_str(&format!("y^{}", crate::scalar::fmt_half(e.0)));
    }
    if e.1 != 0 {
        if !s.is_empty() {
            s.push(' ');
        }
        s.push_str(&format!("t^{}", crate::scalar::fmt_half(e.1)));
    }
    s
}

impl<S: Scalar> fmt::Display for LocalizedLaurent<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let m = fmt_exp(*e);
                if m.is_empty() {
                    format!("{}", c)
                } else {
                    format!("{} {}", c, m)
                }
            })
            .collect();
        let num = parts.join(" + ");
        if self.denom.is_empty() {
            write!(f, "{}", num)
        } else {
            let den: Vec<String> = self.denom.iter().map(|d| format!("(1 - {})", fmt_exp(*d))).collect();
            write!(f, "({}) / {}", num, den.join(""))
        }
    }
}
