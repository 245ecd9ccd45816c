//! Genera as the `nu -> 0` limit of the cone sum of theta quotients.
//!
//! With `nu = x nu_0` every maximal cone contributes a Laurent series in `x`;
//! the constant term of the total is the genus. A unimodular cone only enters
//! through power sums of its weights `m_i . nu_0`, so those are summed as
//! scalars first. Cones with a nontrivial box are expanded in `q^{1/N}` with
//! the box characters tracked as classes.

use std::collections::BTreeMap;

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::chern::{char_series, todd_coefficients, XSeries};
use crate::error::{Error, Result};
use crate::scalar::rint;
use crate::series::Series;
use crate::toric::linalg::dot_rat;
use crate::toric::{box_elements, Fan};

#[derive(Clone, Debug)]
struct LimitCone {
    dual: Vec<Vec<BigRational>>,
    order: i64,
    /// `lambda * order` per box element, in ray order.
    coords: Vec<Vec<i64>>,
    heights: Vec<i64>,
}

/// Cone data for the limit evaluation.
#[derive(Clone, Debug)]
pub struct LimitSum {
    cy: bool,
    d: usize,
    rank: usize,
    cones: Vec<LimitCone>,
}

impl LimitSum {
    /// The toric variety of a complete Gorenstein fan.
    pub fn toric(fan: &Fan) -> Result<LimitSum> {
        let mut cones = Vec::new();
        for cone in &fan.max_cones {
            let bd = box_elements(&fan.cone_rays(cone))?;
            let order = bd.group_order as i64;
            let mut heights = Vec::new();
            for c in &bd.coords {
                let s: i64 = c.iter().sum();
                if s % order != 0 {
                    return Err(Error::NotGorenstein(format!("cone {:?} has a box point of fractional height", cone)));
                }
                heights.push(s / order);
            }
            let dual = bd.dual_basis.ok_or_else(|| Error::Validation("maximal cone is not full-dimensional".into()))?;
            cones.push(LimitCone { dual, order, coords: bd.coords, heights });
        }
        Ok(LimitSum { cy: false, d: fan.rank, rank: fan.rank, cones })
    }

    /// The anticanonical hypersurface in the toric variety of `fan`, via the
    /// cones over `(0, 1)` and the lifted rays `(v, 1)`.
    pub fn hypersurface(fan: &Fan) -> Result<LimitSum> {
        let r = fan.rank;
        let mut deg_star = vec![0; r + 1];
        deg_star[r] = 1;
        let mut cones = Vec::new();
        for cone in &fan.max_cones {
            let mut lifted = vec![deg_star.clone()];
            for v in fan.cone_rays(cone) {
                let mut w = v;
                w.push(1);
                lifted.push(w);
            }
            let bd = box_elements(&lifted)?;
            if bd.coords.iter().any(|c| c[0] != 0) {
                return Err(Error::NotGorenstein(format!("cone {:?} is not reflexive-compatible", cone)));
            }
            let heights = bd.elements.iter().map(|p| p[r]).collect();
            let dual = bd.dual_basis.ok_or_else(|| Error::Validation("maximal cone is not full-dimensional".into()))?;
            cones.push(LimitCone { dual, order: bd.group_order as i64, coords: bd.coords, heights });
        }
        if r < 2 {
            return Err(Error::Domain("the hypersurface needs rank >= 2".into()));
        }
        Ok(LimitSum { cy: true, d: r - 1, rank: r + 1, cones })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    /// A direction `nu_0` with every weight `m_i . nu_0` nonzero, tried in a
    /// fixed order so that results are reproducible.
    pub fn generic_direction(&self) -> Vec<i64> {
        for base in 2i64.. {
            let nu: Vec<i64> = (0..self.rank as u32).map(|i| base.pow(i)).collect();
            if self.all_weights_nonzero(&nu) {
                return nu;
            }
        }
        unreachable!()
    }

    pub fn all_weights_nonzero(&self, nu: &[i64]) -> bool {
        self.cones.iter().all(|c| c.dual.iter().all(|m| !dot_rat(m, nu).is_zero()))
    }

    /// The cleared genus body to `q^{q_order}`, independent of `nu`.
    pub fn body(&self, q_order: i64, nu: &[i64]) -> Result<Series> {
        self.body_with(q_order, nu, false)
    }

    /// As `body`, optionally forcing every cone through the box expansion.
    pub fn body_with(&self, q_order: i64, nu: &[i64], all_general: bool) -> Result<Series> {
        if nu.len() != self.rank || !self.all_weights_nonzero(nu) {
            return Err(Error::Validation("direction is not generic for this fan".into()));
        }
        if q_order < 0 {
            return Err(Error::Validation("negative q order".into()));
        }
        let weights: Vec<Vec<BigRational>> =
            self.cones.iter().map(|c| c.dual.iter().map(|m| dot_rat(m, nu)).collect()).collect();
        let (fast, general): (Vec<usize>, Vec<usize>) =
            (0..self.cones.len()).partition(|&i| self.cones[i].order == 1 && !all_general);
        let mut total = self.unimodular_part(&fast, &weights, q_order);
        if !general.is_empty() {
            let m = general.iter().fold(1i64, |acc, &i| acc.lcm(&self.cones[i].order));
            let parts: Vec<Result<Series>> =
                general.par_iter().map(|&i| self.box_cone(&self.cones[i], &weights[i], m, q_order)).collect();
            let mut acc = Series::zero(m * q_order);
            for p in parts {
                acc = acc.add(&p?);
            }
            total = total.add(&acc.rescale_q(2, m)?);
        }
        if !total.is_polynomial() {
            return Err(Error::InternalInconsistency("cone sum left a pole in y".into()));
        }
        Ok(total)
    }

    fn unimodular_part(&self, cones: &[usize], weights: &[Vec<BigRational>], q_order: i64) -> Series {
        let d = self.d;
        let parts = partitions(d);
        let mut w = vec![BigRational::zero(); parts.len()];
        let start = usize::from(self.cy);
        for &ci in cones {
            let c = &weights[ci];
            let mut pref = if self.cy { c[0].clone() } else { BigRational::one() };
            for ci in &c[start..] {
                pref /= -ci.clone();
            }
            let mut p = vec![BigRational::zero(); d + 1];
            for (k, pk) in p.iter_mut().enumerate().skip(1) {
                for ci in &c[start..] {
                    *pk += pow(&-ci.clone(), k);
                }
                if self.cy {
                    *pk -= pow(&c[0], k);
                }
            }
            for (wi, part) in w.iter_mut().zip(&parts) {
                let mut t = pref.clone();
                for (k, &mk) in part.iter().enumerate() {
                    t *= pow(&p[k], mk);
                }
                *wi += t;
            }
        }
        let ell = scaled_log(d, q_order);
        let t = 2 * q_order;
        let mut out = Series::zero(t);
        for (wi, part) in w.iter().zip(&parts) {
            if wi.is_zero() {
                continue;
            }
            let mut s = Series::one(t);
            let mut den = BigRational::one();
            for (k, &mk) in part.iter().enumerate() {
                if mk > 0 {
                    s = s.mul(&ell[k].pow(mk as u32));
                    den *= factorial(mk);
                }
            }
            out = out.add(&s.scale(&(wi.clone() / den)));
        }
        out
    }

    fn box_cone(&self, cone: &LimitCone, c: &[BigRational], m: i64, q_order: i64) -> Result<Series> {
        let n = cone.order;
        let s = m / n;
        let trunc = m * q_order;
        let nb = cone.coords.len();
        let start = usize::from(self.cy);
        let mut out = Series::zero(trunc);
        for (bi, lam) in cone.coords.iter().enumerate() {
            let poles = (start..c.len()).filter(|&i| lam[i] == 0).count();
            if poles < start {
                continue;
            }
            let p = poles - start;
            let mut acc = ClassSeries::one(p, trunc, nb);
            let mut scalar = BigRational::one();
            if self.cy {
                let qhat = scale_x(&char_series(p, q_order), &c[0]);
                let qhat = XSeries { coeffs: qhat.coeffs.iter().map(|x| x.rescale_q(m, 2)).collect::<Result<_>>()? };
                acc = acc.mul_series(&qhat.inv()?.coeffs);
                scalar *= c[0].clone();
            }
            for i in start..c.len() {
                let e: Vec<i64> = cone.coords.iter().map(|l| l[i]).collect();
                let neg_e: Vec<i64> = e.iter().map(|x| (-x).rem_euclid(n)).collect();
                let lq = lam[i] * s;
                let ci = &c[i];
                let mci = -ci.clone();
                acc = acc.binomial(&rint(-1), 1, lq, &neg_e, ci, n);
                if lam[i] > 0 {
                    acc = acc.geometric(lq, &neg_e, ci, n);
                } else {
                    let nc = rint(n) * ci.clone();
                    scalar *= -BigRational::one() / nc.clone();
                    acc = acc.mul_scalars(&bernoulli_scaled(p, &nc));
                    let mut sum = ClassSeries::zero(p, trunc, nb);
                    for j in 0..n {
                        let shift: Vec<i64> = e.iter().map(|x| (-j * x).rem_euclid(n)).collect();
                        sum.add_assign(&acc.mono(&BigRational::one(), 0, 0, &shift, &(rint(j) * ci.clone()), n));
                    }
                    acc = sum;
                }
                let mut k = 1;
                while m * k - lq <= trunc {
                    acc = acc.binomial(&rint(-1), -1, m * k - lq, &e, &mci, n);
                    acc = acc.binomial(&rint(-1), 1, m * k + lq, &neg_e, ci, n);
                    acc = acc.geometric(m * k - lq, &e, &mci, n);
                    acc = acc.geometric(m * k + lq, &neg_e, ci, n);
                    k += 1;
                }
            }
            if let Some(xs) = acc.terms.get(&vec![0; nb]) {
                out = out.add(&xs[p].scale(&scalar).shift(0, 2 * cone.heights[bi]).truncate(trunc));
            }
        }
        Ok(out)
    }
}

/// Power series in `x` with coefficients in the group ring of the box characters.
#[derive(Clone, Debug)]
struct ClassSeries {
    p: usize,
    trunc: i64,
    terms: BTreeMap<Vec<i64>, Vec<Series>>,
}

impl ClassSeries {
    fn zero(p: usize, trunc: i64, _nb: usize) -> Self {
        ClassSeries { p, trunc, terms: BTreeMap::new() }
    }

    fn one(p: usize, trunc: i64, nb: usize) -> Self {
        let mut xs = vec![Series::zero(trunc); p + 1];
        xs[0] = Series::one(trunc);
        let mut terms = BTreeMap::new();
        terms.insert(vec![0; nb], xs);
        ClassSeries { p, trunc, terms }
    }

    fn is_zero(&self) -> bool {
        self.terms.values().all(|xs| xs.iter().all(|s| s.is_zero()))
    }

    fn add_assign(&mut self, o: &ClassSeries) {
        for (k, xs) in &o.terms {
            match self.terms.get_mut(k) {
                Some(mine) => {
                    for (a, b) in mine.iter_mut().zip(xs) {
                        *a = a.add(b);
                    }
                }
                None => {
                    self.terms.insert(k.clone(), xs.clone());
                }
            }
        }
        self.terms.retain(|_, xs| xs.iter().any(|s| !s.is_zero()));
    }

    /// Times `coef y^y Q^qe w^shift e^{z x}`.
    fn mono(&self, coef: &BigRational, y: i64, qe: i64, shift: &[i64], z: &BigRational, n: i64) -> ClassSeries {
        let ex = exp_coeffs(z, self.p);
        let mut terms = BTreeMap::new();
        for (k, xs) in &self.terms {
            let key: Vec<i64> = k.iter().zip(shift).map(|(a, b)| (a + b).rem_euclid(n)).collect();
            let moved: Vec<Series> = xs.iter().map(|s| s.shift(qe, 2 * y).truncate(self.trunc).scale(coef)).collect();
            if moved.iter().all(|s| s.is_zero()) {
                continue;
            }
            terms.insert(key, convolve_scalars(&moved, &ex, self.trunc));
        }
        ClassSeries { p: self.p, trunc: self.trunc, terms }
    }

    /// Times `1 + coef y^y Q^qe w^shift e^{z x}`.
    fn binomial(&self, coef: &BigRational, y: i64, qe: i64, shift: &[i64], z: &BigRational, n: i64) -> ClassSeries {
        if qe > self.trunc {
            return self.clone();
        }
        let mut out = self.clone();
        out.add_assign(&self.mono(coef, y, qe, shift, z, n));
        out
    }

    /// Times `1 / (1 - Q^qe w^shift e^{z x})` with `qe > 0`.
    fn geometric(&self, qe: i64, shift: &[i64], z: &BigRational, n: i64) -> ClassSeries {
        debug_assert!(qe > 0);
        let mut out = self.clone();
        let mut term = self.clone();
        loop {
            term = term.mono(&BigRational::one(), 0, qe, shift, z, n);
            if term.is_zero() {
                break;
            }
            out.add_assign(&term);
        }
        out
    }

    fn mul_scalars(&self, f: &[BigRational]) -> ClassSeries {
        let terms = self.terms.iter().map(|(k, xs)| (k.clone(), convolve_scalars(xs, f, self.trunc))).collect();
        ClassSeries { p: self.p, trunc: self.trunc, terms }
    }

    fn mul_series(&self, f: &[Series]) -> ClassSeries {
        let mut terms = BTreeMap::new();
        for (k, xs) in &self.terms {
            let mut out = vec![Series::zero(self.trunc); self.p + 1];
            for (i, a) in xs.iter().enumerate() {
                for (j, b) in f.iter().enumerate().take(self.p + 1 - i) {
                    out[i + j] = out[i + j].add(&a.mul(b));
                }
            }
            terms.insert(k.clone(), out);
        }
        ClassSeries { p: self.p, trunc: self.trunc, terms }
    }
}

fn convolve_scalars(xs: &[Series], f: &[BigRational], trunc: i64) -> Vec<Series> {
    let p = xs.len() - 1;
    let mut out = vec![Series::zero(trunc); p + 1];
    for (i, a) in xs.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (j, b) in f.iter().enumerate().take(p + 1 - i) {
            if !b.is_zero() {
                out[i + j] = out[i + j].add(&a.scale(b));
            }
        }
    }
    out
}

fn pow(a: &BigRational, k: usize) -> BigRational {
    let mut out = BigRational::one();
    for _ in 0..k {
        out *= a.clone();
    }
    out
}

fn factorial(n: usize) -> BigRational {
    (1..=n as i64).fold(BigRational::one(), |acc, i| acc * rint(i))
}

/// `e^{z x}` to `x^p`.
fn exp_coeffs(z: &BigRational, p: usize) -> Vec<BigRational> {
    let mut out = vec![BigRational::one()];
    for i in 1..=p {
        let v = out[i - 1].clone() * z.clone() / rint(i as i64);
        out.push(v);
    }
    out
}

/// `t/(e^t - 1)` at `t = a x`, to `x^p`.
fn bernoulli_scaled(p: usize, a: &BigRational) -> Vec<BigRational> {
    // t/(e^t - 1) = (-t)/(1 - e^{-(-t)}): the Todd series at -t
    let todd = todd_coefficients(p);
    let mut f = BigRational::one();
    let mut out = Vec::new();
    for c in todd {
        out.push(c * f.clone());
        f *= -a.clone();
    }
    out
}

fn scale_x(x: &XSeries, a: &BigRational) -> XSeries {
    let mut f = BigRational::one();
    let mut out = Vec::new();
    for c in &x.coeffs {
        out.push(c.scale(&f));
        f *= a.clone();
    }
    XSeries { coeffs: out }
}

/// `G^k l_k` where `log(Q(u)/G) = sum l_k u^k`; index 0 is unused.
fn scaled_log(d: usize, q_order: i64) -> Vec<Series> {
    let a = char_series(d, q_order).coeffs;
    let t = 2 * q_order;
    let g = &a[0];
    let gp: Vec<Series> = (0..=d).map(|k| g.pow(k as u32)).collect();
    let mut l = vec![Series::zero(t); d + 1];
    for k in 1..=d {
        let mut v = a[k].mul(&gp[k - 1]);
        for j in 1..k {
            let t = l[j].mul(&a[k - j]).mul(&gp[k - j - 1]).scale(&(rint(j as i64) / rint(k as i64)));
            v = v.sub(&t);
        }
        l[k] = v;
    }
    l
}

/// Partitions of `n` as multiplicity vectors indexed by part size.
fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(rem: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rem == 0 {
            out.push(cur.clone());
            return;
        }
        for k in (1..=max.min(rem)).rev() {
            cur[k] += 1;
            go(rem - k, k, cur, out);
            cur[k] -= 1;
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut vec![0; n + 1], &mut out);
    out
}
