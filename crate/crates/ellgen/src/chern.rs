//! Elliptic genera from Chern data with one nilpotent class `h`.
//!
//! The characteristic series used here is
//! `Q(x) = x/(1 - e^{-x}) prod_{n >= 1} (1 - y q^{n-1} e^{-x})(1 - y^{-1} q^n e^x) / ((1 - q^n e^{-x})(1 - q^n e^x))`,
//! so `Q(0) = G(y, q)`. The genus of `X` is `int_X prod Q(x_i)` over the
//! tangent Chern roots. `P^n` is handled through `(1 + h)^{n+1}`, whose extra
//! trivial root contributes one factor `G` that is divided out again.

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::rint;
use crate::series::{Genus, LocalizedLaurent, Series};
use crate::theta::g_series;

/// Polynomial in a nilpotent `x` with series coefficients, truncated above `x^D`.
#[derive(Clone, Debug, PartialEq)]
pub struct XSeries {
    pub coeffs: Vec<Series>,
}

impl XSeries {
    pub fn constant(c: Series, d: usize) -> Self {
        let t = c.trunc2();
        let mut coeffs = vec![Series::zero(t); d + 1];
        coeffs[0] = c;
        XSeries { coeffs }
    }

    pub fn degree_bound(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn mul(&self, o: &XSeries) -> XSeries {
        let d = self.degree_bound();
        let t = self.coeffs[0].trunc2().min(o.coeffs[0].trunc2());
        let mut out = vec![Series::zero(t); d + 1];
        for i in 0..=d {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..=(d - i) {
                if o.coeffs[j].is_zero() {
                    continue;
                }
                out[i + j] = out[i + j].add(&self.coeffs[i].mul(&o.coeffs[j]));
            }
        }
        XSeries { coeffs: out }
    }

    pub fn pow(&self, n: u32) -> XSeries {
        let mut out = XSeries::constant(Series::one(self.coeffs[0].trunc2()), self.degree_bound());
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    /// `x -> k x`.
    pub fn scale_x(&self, k: i64) -> XSeries {
        let mut f = BigRational::one();
        let mut out = Vec::new();
        for c in &self.coeffs {
            out.push(c.scale(&f));
            f *= rint(k);
        }
        XSeries { coeffs: out }
    }

    /// Inverse when the constant term is a unit series.
    pub fn inv(&self) -> Result<XSeries> {
        let d = self.degree_bound();
        let c0inv = self.coeffs[0].inv()?;
        // self = c0 (1 + u); inverse = c0^{-1} sum (-u)^j
        let mut u = self.clone();
        u.coeffs[0] = Series::zero(c0inv.trunc2());
        for c in u.coeffs.iter_mut().skip(1) {
            *c = c.mul(&c0inv);
        }
        let mut acc = XSeries::constant(Series::one(c0inv.trunc2()), d);
        let mut term = acc.clone();
        let neg_u = XSeries { coeffs: u.coeffs.iter().map(|c| c.neg()).collect() };
        for _ in 0..d {
            term = term.mul(&neg_u);
            acc = XSeries { coeffs: acc.coeffs.iter().zip(&term.coeffs).map(|(a, b)| a.add(b)).collect() };
        }
        Ok(XSeries { coeffs: acc.coeffs.iter().map(|c| c.mul(&c0inv)).collect() })
    }

    /// `x^k` shift, dropping what falls past the bound.
    pub fn shift_x(&self, k: usize) -> XSeries {
        let d = self.degree_bound();
        let t = self.coeffs[0].trunc2();
        let mut out = vec![Series::zero(t); d + 1];
        for i in 0..=d {
            if i + k <= d {
                out[i + k] = self.coeffs[i].clone();
            }
        }
        XSeries { coeffs: out }
    }
}

fn factorials(d: usize) -> Vec<BigRational> {
    let mut f = vec![BigRational::one()];
    for i in 1..=d {
        let v = f[i - 1].clone() * rint(i as i64);
        f.push(v);
    }
    f
}

/// `x / (1 - e^{-x})` to `x^D`.
pub fn todd_coefficients(d: usize) -> Vec<BigRational> {
    let f = factorials(d + 1);
    // a(x) = (1 - e^{-x})/x = sum (-1)^i x^i/(i+1)!
    let a: Vec<BigRational> =
        (0..=d).map(|i| if i % 2 == 0 { rint(1) / f[i + 1].clone() } else { rint(-1) / f[i + 1].clone() }).collect();
    let mut b = vec![BigRational::zero(); d + 1];
    b[0] = rint(1);
    for n in 1..=d {
        let mut s = BigRational::zero();
        for i in 1..=n {
            s += a[i].clone() * b[n - i].clone();
        }
        b[n] = -s;
    }
    b
}

/// `1 - c e^{sign x}` where `c = coef * q^{q} y^{y}`.
fn one_minus_exp(coef: i64, q: i64, y: i64, sign: i64, d: usize, trunc2: i64) -> XSeries {
    let f = factorials(d);
    let mut coeffs = Vec::new();
    for i in 0..=d {
        let s = if sign < 0 && i % 2 == 1 { -1 } else { 1 };
        let mut c = Series::monomial(rint(-coef * s) / f[i].clone(), 2 * q, 2 * y, trunc2);
        if i == 0 {
            c = c.add(&Series::one(trunc2));
        }
        coeffs.push(c);
    }
    XSeries { coeffs }
}

/// `1 / (1 - q^n e^{sign x})` as `sum_j q^{n j} e^{sign j x}`.
fn geometric_exp(n: i64, sign: i64, d: usize, q_order: i64) -> XSeries {
    let f = factorials(d);
    let t = 2 * q_order;
    let mut coeffs = vec![Series::zero(t); d + 1];
    let mut j = 0;
    while n * j <= q_order {
        let mut p = rint(1);
        for (i, c) in coeffs.iter_mut().enumerate() {
            if i > 0 {
                p *= rint(sign * j);
            }
            let term = Series::monomial(p.clone() / f[i].clone(), 2 * n * j, 0, t);
            *c = c.add(&term);
        }
        j += 1;
    }
    XSeries { coeffs }
}

/// The characteristic series `Q(x)` to `x^D` and `q^{q_order}`.
pub fn char_series(d: usize, q_order: i64) -> XSeries {
    let t = 2 * q_order;
    let todd = todd_coefficients(d);
    let mut out = XSeries {
        coeffs: todd.iter().map(|c| Series::constant(LocalizedLaurent::constant(c.clone()), t)).collect(),
    };
    out = out.mul(&one_minus_exp(1, 0, 1, -1, d, t));
    for n in 1..=q_order {
        out = out.mul(&one_minus_exp(1, n, 1, -1, d, t));
        out = out.mul(&one_minus_exp(1, n, -1, 1, d, t));
        out = out.mul(&geometric_exp(n, -1, d, q_order));
        out = out.mul(&geometric_exp(n, 1, d, q_order));
    }
    out
}

/// Complete intersection data `X_k` in `P^n`; `k = 1` is allowed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HypersurfaceSpec {
    pub n: usize,
    pub k: i64,
}

impl HypersurfaceSpec {
    pub fn new(n: usize, k: i64) -> Result<Self> {
        if n < 2 || k < 1 {
            return Err(Error::Validation(format!("hypersurface of degree {} in P^{}", k, n)));
        }
        Ok(HypersurfaceSpec { n, k })
    }

    pub fn dim(&self) -> usize {
        self.n - 1
    }

    pub fn is_calabi_yau(&self) -> bool {
        self.k == self.n as i64 + 1
    }
}

fn finish(body: Series, g: &Series, d: usize, label: String) -> Result<Genus> {
    let body = body.exact_div(g).map_err(|e| Error::InternalInconsistency(format!("{}: {}", label, e)))?;
    let genus = Genus::new(d, body, label.clone())?;
    if !genus.all_coefficients_integral() {
        return Err(Error::InternalInconsistency(format!("{}: non-integral coefficient", label)));
    }
    Ok(genus)
}

/// Genus of `P^n` from `c(P^n) = (1 + h)^{n+1}`.
pub fn ell_projective_space(n: usize, q_order: i64) -> Result<Genus> {
    let q = char_series(n, q_order);
    let top = q.pow(n as u32 + 1).coeffs[n].clone();
    finish(top, &g_series(q_order), n, format!("P^{}", n))
}

/// Genus of a degree `k` hypersurface in `P^n` by adjunction.
pub fn ell_hypersurface_projective(spec: HypersurfaceSpec, q_order: i64) -> Result<Genus> {
    let n = spec.n;
    let q = char_series(n, q_order);
    let normal_inv = q.scale_x(spec.k).inv()?;
    let integrand = q.pow(n as u32 + 1).mul(&normal_inv).shift_x(1);
    let top = integrand.coeffs[n].scale(&rint(spec.k));
    let label = if spec.is_calabi_yau() && n == 3 {
        "K3".to_string()
    } else {
        format!("X_{} in P^{}", spec.k, n)
    };
    finish(top, &g_series(q_order), spec.dim(), label)
}

pub fn genus_product(a: &Genus, b: &Genus) -> Genus {
    a.product(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;
    use crate::series::fmt_vec;

    fn slice(g: &Genus) -> String {
        fmt_vec(&g.q0_slice())
    }

    #[test]
    fn todd_series() {
        let t = todd_coefficients(4);
        assert_eq!(t, vec![rint(1), rat(1, 2), rat(1, 12), rint(0), rat(-1, 720)]);
    }

    #[test]
    fn char_series_constant_is_g() {
        let q = char_series(3, 3);
        assert_eq!(q.coeffs[0], g_series(3));
        // at q^0: x (1 - y e^{-x}) / (1 - e^{-x}) = (1-y) + x (1+y)/2 + ...
        let c1 = q.coeffs[1].coeff(0);
        assert_eq!(c1, LocalizedLaurent::from_y_terms([(0, rat(1, 2)), (2, rat(1, 2))]));
    }

    #[test]
    fn projective_spaces() {
        let p1 = ell_projective_space(1, 3).unwrap();
        assert_eq!(slice(&p1), "(1, 1)");
        let p2 = ell_projective_space(2, 3).unwrap();
        assert_eq!(slice(&p2), "(1, 1, 1)");
        for n in 1..=3 {
            let g = ell_projective_space(n, 3).unwrap();
            assert_eq!(g.euler_number().unwrap(), rint(n as i64 + 1));
        }
    }

    #[test]
    fn k3_and_quintic() {
        let k3 = ell_hypersurface_projective(HypersurfaceSpec::new(3, 4).unwrap(), 2).unwrap();
        assert_eq!(slice(&k3), "(2, 20, 2)");
        assert_eq!(k3.euler_number().unwrap(), rint(24));
        let quintic = ell_hypersurface_projective(HypersurfaceSpec::new(4, 5).unwrap(), 2).unwrap();
        assert_eq!(slice(&quintic), "(0, -100, -100, 0)");
        assert_eq!(quintic.euler_number().unwrap(), rint(-200));
    }

    #[test]
    fn products() {
        let k3 = ell_hypersurface_projective(HypersurfaceSpec::new(3, 4).unwrap(), 1).unwrap();
        let kk = genus_product(&k3, &k3);
        assert_eq!(kk.euler_number().unwrap(), rint(576));
        assert_eq!(slice(&kk), "(4, 80, 408, 80, 4)");
        assert_eq!(genus_product(&k3, &Genus::point(1)), k3);
    }
}
