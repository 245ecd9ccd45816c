//! Weak Jacobi forms of weight 0: generators, monomial bases, decomposition
//! of genera, Hodge slices and the `q^0` determination question.
//!
//! Expansions are kept in cleared form, `y^m phi` for index `m`, like genus
//! bodies, so a form of index `d/2` can be compared with a `d`-dimensional
//! genus directly.

pub mod linalg;

use std::collections::{BTreeSet, HashMap};
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde_json::json;

use crate::chern::{ell_hypersurface_projective, HypersurfaceSpec};
use crate::error::{Error, Result};
use crate::hypersurface::checks::elliptic_transform_check;
use crate::scalar::{fmt_half, fmt_rat, is_integer, rat};
use crate::series::{Genus, Series};
use crate::theta::{eisenstein, eta_series, f_series, theta_reduced, PrefixedSeries};

use linalg::{echelon, integer_rows, solve, Solution};

/// `E4^alpha E6^beta a^gamma b^delta`, times `f` when `f_factor` is set.
#[derive(Clone, Debug, PartialEq)]
pub struct JacobiBasisElement {
    pub exponents: [u32; 4],
    pub f_factor: bool,
    pub weight: i64,
    /// Twice the index.
    pub index2: i64,
    pub expansion: Series,
}

impl JacobiBasisElement {
    pub fn name(&self) -> String {
        let mut parts = Vec::new();
        if self.f_factor {
            parts.push("f".to_string());
        }
        for (e, s) in self.exponents.iter().zip(["E4", "E6", "a", "b"]) {
            match e {
                0 => {}
                1 => parts.push(s.to_string()),
                _ => parts.push(format!("{}^{}", s, e)),
            }
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join(" ")
        }
    }

    pub fn index(&self) -> String {
        fmt_half(self.index2)
    }

    /// The element as a genus-shaped series of dimension `2 * index`.
    pub fn as_genus(&self) -> Result<Genus> {
        Genus::new(self.index2 as usize, self.expansion.clone(), self.name())
    }
}

fn checked_law(e: JacobiBasisElement) -> Result<JacobiBasisElement> {
    let r = elliptic_transform_check(&e.as_genus()?)?;
    // low orders leave too little overlap to pass; only a contradiction is fatal
    let contradiction = !r.detail["first_difference"].is_null() || r.detail["integral_y_exponents"] == false;
    if contradiction {
        return Err(Error::InternalInconsistency(format!("{} fails its index law: {}", e.name(), r.detail)));
    }
    Ok(e)
}

/// `a = -theta(z)^2 / eta^6`, weight -2 and index 1. The `q^{1/4}` prefactors cancel.
pub fn phi_m21(order: i64) -> Result<JacobiBasisElement> {
    if order < 0 {
        return Err(Error::Domain("negative q order".into()));
    }
    let th2 = theta_reduced(order).pow(2);
    // -(-i)^2 = (-i)^0
    let minus = PrefixedSeries::new(th2.q_shift, (th2.phase + 2) % 4, th2.body)?;
    let body = minus.div_plain(&eta_series(order).pow(6))?.shift(0, 2);
    checked_law(JacobiBasisElement { exponents: [0, 0, 1, 0], f_factor: false, weight: -2, index2: 2, expansion: body })
}

/// `b`, weight 0 and index 1, as half the genus of the quartic K3.
pub fn phi_01(order: i64) -> Result<JacobiBasisElement> {
    let k3 = ell_hypersurface_projective(HypersurfaceSpec::new(3, 4)?, order)?;
    let body = k3.body.scale(&rat(1, 2));
    checked_law(JacobiBasisElement { exponents: [0, 0, 0, 1], f_factor: false, weight: 0, index2: 2, expansion: body })
}

/// `f = theta(2z)/theta(z)`, weight 0 and index 3/2.
pub fn phi_f(order: i64) -> Result<JacobiBasisElement> {
    let body = f_series(order).shift(0, 3);
    checked_law(JacobiBasisElement { exponents: [0, 0, 0, 0], f_factor: true, weight: 0, index2: 3, expansion: body })
}

/// Number of `(alpha, beta)` with `2 alpha + 3 beta <= k`.
pub fn dim_weak_jacobi(k: u32) -> usize {
    (0..=k / 2).map(|a| ((k - 2 * a) / 3 + 1) as usize).sum()
}

/// Dimension of the space `basis(d)` spans.
pub fn basis_dim(d: usize) -> usize {
    if d % 2 == 0 {
        dim_weak_jacobi(d as u32 / 2)
    } else if d >= 3 {
        dim_weak_jacobi((d as u32 - 3) / 2)
    } else {
        0
    }
}

/// `(alpha, beta, gamma, delta)` of the weight-0 index-`k` monomials.
pub fn monomial_exponents(k: u32) -> Vec<[u32; 4]> {
    let mut out = Vec::new();
    for alpha in 0..=k / 2 {
        for beta in 0..=(k - 2 * alpha) / 3 {
            let gamma = 2 * alpha + 3 * beta;
            out.push([alpha, beta, gamma, k - gamma]);
        }
    }
    out
}

fn powers(base: &Series, n: u32, order: i64) -> Vec<Series> {
    let mut out = vec![Series::one(2 * order)];
    for i in 0..n as usize {
        let next = out[i].mul(base);
        out.push(next);
    }
    out
}

type BasisCache = RwLock<HashMap<(usize, i64), Arc<Vec<JacobiBasisElement>>>>;

fn cache() -> &'static BasisCache {
    static CACHE: OnceLock<BasisCache> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Weight-0 forms of index `d/2`: monomials for even `d`, `f` times the
/// index `(d-3)/2` monomials for odd `d`.
pub fn basis(d: usize, order: i64) -> Result<Arc<Vec<JacobiBasisElement>>> {
    if d == 0 {
        return Err(Error::Domain("basis needs d >= 1".into()));
    }
    if let Some(b) = cache().read().expect("basis cache").get(&(d, order)) {
        return Ok(b.clone());
    }
    let built = Arc::new(build_basis(d, order)?);
    let mut w = cache().write().expect("basis cache");
    Ok(w.entry((d, order)).or_insert(built).clone())
}

fn build_basis(d: usize, order: i64) -> Result<Vec<JacobiBasisElement>> {
    let (k, f) = if d % 2 == 0 {
        (d as u32 / 2, None)
    } else if d >= 3 {
        ((d as u32 - 3) / 2, Some(phi_f(order)?))
    } else {
        return Ok(Vec::new());
    };
    let e4 = powers(&eisenstein(4, order)?, k / 2, order);
    let e6 = powers(&eisenstein(6, order)?, k / 3, order);
    let a = powers(&phi_m21(order)?.expansion, k, order);
    let b = powers(&phi_01(order)?.expansion, k, order);
    let mut out = Vec::new();
    for ex in monomial_exponents(k) {
        let [al, be, ga, de] = ex;
        let mut s = e4[al as usize].mul(&e6[be as usize]).mul(&a[ga as usize]).mul(&b[de as usize]);
        if let Some(f) = &f {
            s = s.mul(&f.expansion);
        }
        out.push(JacobiBasisElement { exponents: ex, f_factor: f.is_some(), weight: 0, index2: d as i64, expansion: s });
    }
    Ok(out)
}

/// All `(q, y)` exponents (in halves) present in any of the series.
fn support(series: &[&Series]) -> Vec<(i64, i64)> {
    let mut set = BTreeSet::new();
    for s in series {
        for (q2, c) in s.coeffs() {
            for (e, v) in c.terms() {
                if !v.is_zero() {
                    set.insert((*q2, e.0));
                }
            }
        }
    }
    set.into_iter().collect()
}

/// Coefficients of a genus in `basis(d)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Decomposition {
    pub dimension: usize,
    pub basis: Vec<String>,
    pub coefficients: Vec<BigRational>,
    /// `q` order the linear system was solved from.
    pub solved_at_q: i64,
    pub verified_to_q: i64,
}

impl Decomposition {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "dimension": self.dimension,
            "basis": self.basis,
            "coefficients": self.coefficients.iter().map(fmt_rat).collect::<Vec<_>>(),
            "verified_to_q": self.verified_to_q,
        })
    }

    pub fn to_text(&self) -> String {
        let terms: Vec<String> =
            self.coefficients.iter().zip(&self.basis).map(|(c, b)| format!("({}) {}", fmt_rat(c), b)).collect();
        format!("d = {}: {}\nverified to q^{}\n", self.dimension, terms.join(" + "), self.verified_to_q)
    }
}

/// Solve for the coefficients from the lowest `q` orders that pin them down,
/// then check the re-expansion at every computed order.
pub fn decompose(g: &Genus) -> Result<Decomposition> {
    let q = g.q_order();
    if q < 0 {
        return Err(Error::UnderDetermined("genus has no computed orders".into()));
    }
    let basis = basis(g.d, q)?;
    let n = basis.len();
    let mut all: Vec<&Series> = basis.iter().map(|b| &b.expansion).collect();
    all.push(&g.body);
    let mons = support(&all);
    let row = |&(q2, y2): &(i64, i64)| -> Vec<BigRational> {
        let mut r: Vec<BigRational> = basis.iter().map(|b| b.expansion.coeff(q2).coeff(y2, 0)).collect();
        r.push(g.body.coeff(q2).coeff(y2, 0));
        r
    };
    let mut solution = None;
    let mut rank = 0;
    for qs in 0..=q {
        let rows: Vec<Vec<BigRational>> = mons.iter().filter(|m| m.0 <= 2 * qs).map(row).collect();
        match solve(&rows, n) {
            Solution::Inconsistent => {
                return Err(Error::Inconsistent(format!("{} has no solution at q^{}", g.label, qs)));
            }
            Solution::Underdetermined { rank: r } => rank = r,
            Solution::Unique(x) => {
                solution = Some((qs, x));
                break;
            }
        }
    }
    let Some((solved_at_q, coefficients)) = solution else {
        return Err(Error::UnderDetermined(format!("{}: rank {} of {} at q^{}", g.label, rank, n, q)));
    };
    let mut recon = Series::zero(2 * q);
    for (c, b) in coefficients.iter().zip(basis.iter()) {
        recon = recon.add(&b.expansion.scale(c));
    }
    if let Some((q2, y2, _)) = recon.first_difference(&g.body) {
        return Err(Error::Inconsistent(format!("{} differs from its decomposition at q^{} y^{}", g.label, fmt_half(q2), fmt_half(y2))));
    }
    Ok(Decomposition {
        dimension: g.d,
        basis: basis.iter().map(|b| b.name()).collect(),
        coefficients,
        solved_at_q,
        verified_to_q: q,
    })
}

/// `(chi_0, .., chi_d)`, the `q^0` coefficients of the cleared body.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HodgeSlice {
    pub d: usize,
    pub chi: Vec<BigInt>,
}

impl HodgeSlice {
    /// For odd `d` a Calabi-Yau slice has `chi_0 = 0`.
    pub fn check_calabi_yau(&self) -> Result<()> {
        if self.d % 2 == 1 && !self.chi[0].is_zero() {
            return Err(Error::Validation(format!("odd dimension with chi_0 = {}", self.chi[0])));
        }
        Ok(())
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({"d": self.d, "chi": self.chi.iter().map(|c| c.to_string()).collect::<Vec<_>>()})
    }
}

pub fn hodge_slice(g: &Genus) -> Result<HodgeSlice> {
    let mut chi = Vec::new();
    for c in g.q0_slice() {
        if !is_integer(&c) {
            return Err(Error::Validation(format!("{}: non-integral q^0 coefficient {}", g.label, c)));
        }
        chi.push(c.to_integer());
    }
    for p in 0..=g.d {
        if chi[p] != chi[g.d - p] {
            return Err(Error::PalindromyFailure(format!("{}: chi_{} = {} but chi_{} = {}", g.label, p, chi[p], g.d - p, chi[g.d - p])));
        }
    }
    Ok(HodgeSlice { d: g.d, chi })
}

fn q_slice_rows(series: &[&Series], q2: i64) -> (Vec<i64>, Vec<Vec<BigRational>>) {
    let ys: BTreeSet<i64> = series.iter().flat_map(|s| s.coeff(q2).terms().keys().map(|e| e.0).collect::<Vec<_>>()).collect();
    let rows = ys.iter().map(|&y| series.iter().map(|s| s.coeff(q2).coeff(y, 0)).collect()).collect();
    (ys.into_iter().collect(), rows)
}

/// Whether the `q^0` slice determines a form of index `d/2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankAnalysis {
    pub d: usize,
    pub dim_forms: usize,
    pub rank_q0: usize,
}

impl RankAnalysis {
    pub fn determined(&self) -> bool {
        self.rank_q0 == self.dim_forms
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({"d": self.d, "dim_forms": self.dim_forms, "rank_q0": self.rank_q0, "determined": self.determined()})
    }
}

pub fn q0_rank_analysis(d: usize) -> Result<RankAnalysis> {
    if d < 2 {
        return Err(Error::Domain("rank analysis needs d >= 2".into()));
    }
    let b = basis(d, 0)?;
    let series: Vec<&Series> = b.iter().map(|e| &e.expansion).collect();
    let (_, rows) = q_slice_rows(&series, 0);
    let rank = echelon(integer_rows(&rows), series.len()).rank();
    Ok(RankAnalysis { d, dim_forms: b.len(), rank_q0: rank })
}

/// Exact rank of the coefficient vectors of the given genera.
pub fn span_check(d: usize, genera: &[Genus]) -> Result<RankAnalysis> {
    if let Some(g) = genera.iter().find(|g| g.d != d) {
        return Err(Error::Validation(format!("{} has dimension {}, expected {}", g.label, g.d, d)));
    }
    let series: Vec<&Series> = genera.iter().map(|g| &g.body).collect();
    let rows: Vec<Vec<BigRational>> =
        support(&series).iter().map(|&(q2, y2)| series.iter().map(|s| s.coeff(q2).coeff(y2, 0)).collect()).collect();
    let rank = echelon(integer_rows(&rows), genera.len()).rank();
    Ok(RankAnalysis { d, dim_forms: basis_dim(d), rank_q0: rank })
}

/// The Calabi-Yau factors products are built from.
pub fn building_blocks(order: i64) -> Result<[Genus; 4]> {
    let k3 = ell_hypersurface_projective(HypersurfaceSpec::new(3, 4)?, order)?;
    let quintic = ell_hypersurface_projective(HypersurfaceSpec::new(4, 5)?, order)?;
    let mut x6 = ell_hypersurface_projective(HypersurfaceSpec::new(5, 6)?, order)?;
    x6.label = "X6".into();
    let mut x8 = ell_hypersurface_projective(HypersurfaceSpec::new(7, 8)?, order)?;
    x8.label = "X8".into();
    let mut quintic = quintic;
    quintic.label = "X5".into();
    Ok([k3, x6, x8, quintic])
}

fn power_label(name: &str, n: usize) -> Option<String> {
    match n {
        0 => None,
        1 => Some(name.to_string()),
        _ => Some(format!("{}^{}", name, n)),
    }
}

/// Products of K3, X6, X8 (and one quintic for odd `d`) of dimension `d`.
pub fn product_genera(d: usize, order: i64) -> Result<Vec<Genus>> {
    let [k3, x6, x8, x5] = building_blocks(order)?;
    let (even, extra) = if d % 2 == 0 {
        (d, None)
    } else if d >= 3 {
        (d - 3, Some(x5))
    } else {
        return Ok(Vec::new());
    };
    let mut out = Vec::new();
    for k in 0..=even / 6 {
        for j in 0..=(even - 6 * k) / 4 {
            let rest = even - 6 * k - 4 * j;
            let i = rest / 2;
            let mut g = k3.power(i as u32).product(&x6.power(j as u32)).product(&x8.power(k as u32));
            let mut names: Vec<String> =
                [power_label("K3", i), power_label("X6", j), power_label("X8", k)].into_iter().flatten().collect();
            if let Some(x5) = &extra {
                g = g.product(x5);
                names.push("X5".into());
            }
            g.label = if names.is_empty() { "point".into() } else { names.join(" x ") };
            out.push(g);
        }
    }
    Ok(out)
}

/// Two disjoint unions of products with equal `q^0` slices and different genera.
#[derive(Clone, Debug, PartialEq)]
pub struct DegeneratePair {
    pub d: usize,
    /// Integer kernel vector, one entry per product.
    pub combination: Vec<(String, BigInt)>,
    pub positive: Vec<(String, BigInt)>,
    pub negative: Vec<(String, BigInt)>,
    /// `q^0` and `q^1` slices of the signed combination.
    pub q0_slice: Vec<BigRational>,
    pub q1_slice: Vec<BigRational>,
    pub chi: Vec<BigInt>,
}

impl DegeneratePair {
    pub fn to_json(&self) -> serde_json::Value {
        let side = |v: &[(String, BigInt)]| v.iter().map(|(l, c)| json!({"product": l, "copies": c.to_string()})).collect::<Vec<_>>();
        json!({
            "d": self.d,
            "combination": self.combination.iter().map(|(l, c)| json!({"product": l, "coefficient": c.to_string()})).collect::<Vec<_>>(),
            "positive": side(&self.positive),
            "negative": side(&self.negative),
            "chi": self.chi.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "q0_slice": self.q0_slice.iter().map(fmt_rat).collect::<Vec<_>>(),
            "q1_slice": self.q1_slice.iter().map(fmt_rat).collect::<Vec<_>>(),
        })
    }
}

pub fn chi_degenerate_pair(d: usize, order: i64) -> Result<DegeneratePair> {
    if order < 1 {
        return Err(Error::Domain("the pair needs genera to q^1".into()));
    }
    let genera = product_genera(d, order)?;
    let series: Vec<&Series> = genera.iter().map(|g| &g.body).collect();
    let (_, rows) = q_slice_rows(&series, 0);
    let kernel = echelon(integer_rows(&rows), genera.len()).kernel();
    for v in kernel {
        let mut combo = Series::zero(2 * order);
        for (c, g) in v.iter().zip(&genera) {
            combo = combo.add(&g.body.scale(&BigRational::from_integer(c.clone())));
        }
        let slice = |q2: i64| (0..=d as i64).map(|p| combo.coeff(q2).coeff(2 * p, 0)).collect::<Vec<_>>();
        let q0 = slice(0);
        let q1 = slice(2);
        if combo.is_zero() || q1.iter().all(|c| c.is_zero()) {
            continue;
        }
        let mut positive = Vec::new();
        let mut negative = Vec::new();
        let mut pos_body = Series::zero(2 * order);
        for ((c, g), s) in v.iter().zip(&genera).zip(&series) {
            if c.is_positive() {
                positive.push((g.label.clone(), c.clone()));
                pos_body = pos_body.add(&s.scale(&BigRational::from_integer(c.clone())));
            } else if c.is_negative() {
                negative.push((g.label.clone(), -c.clone()));
            }
        }
        let chi = (0..=d as i64).map(|p| pos_body.coeff(0).coeff(2 * p, 0).to_integer()).collect();
        return Ok(DegeneratePair {
            d,
            combination: genera.iter().map(|g| g.label.clone()).zip(v.iter().cloned()).collect(),
            positive,
            negative,
            q0_slice: q0,
            q1_slice: q1,
            chi,
        });
    }
    Err(Error::NoKernel(d))
}

/// Table of `dim_weak_jacobi(k)` for `k = 0..=max_k`.
pub fn dim_table(max_k: u32) -> Vec<usize> {
    (0..=max_k).map(dim_weak_jacobi).collect()
}

/// Scalar `c` with `g = c f` when `g` has index 3/2.
pub fn f_multiple(dec: &Decomposition) -> Option<BigRational> {
    (dec.dimension == 3 && dec.coefficients.len() == 1).then(|| dec.coefficients[0].clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chern::ell_projective_space;
    use crate::scalar::rint;
    use crate::theta::g_series;

    #[test]
    fn dimension_table() {
        assert_eq!(dim_table(6), vec![1, 1, 2, 3, 4, 5, 7]);
        for k in 0..=10u32 {
            assert_eq!(monomial_exponents(k).len(), dim_weak_jacobi(k));
        }
        let four: Vec<(u32, u32)> = monomial_exponents(4).iter().map(|e| (e[0], e[1])).collect();
        assert_eq!(four, vec![(0, 0), (0, 1), (1, 0), (2, 0)]);
    }

    #[test]
    fn generators() {
        let a = phi_m21(5).unwrap();
        let c0 = a.expansion.coeff(0);
        assert_eq!(c0.coeff(0, 0), rint(1));
        assert_eq!(c0.coeff(2, 0), rint(-2));
        assert_eq!(c0.coeff(4, 0), rint(1));
        assert!(a.expansion.eval_y(1).unwrap().is_zero());
        assert!(a.expansion.first_difference(&g_series(5).pow(2)).is_none());
        let b = phi_01(4).unwrap();
        assert_eq!(crate::series::fmt_vec(&b.as_genus().unwrap().q0_slice()), "(1, 10, 1)");
        assert_eq!(b.as_genus().unwrap().euler_number().unwrap(), rint(12));
    }

    #[test]
    fn basis_sizes() {
        assert_eq!(basis(2, 2).unwrap().len(), 1);
        assert_eq!(basis(6, 2).unwrap().len(), 3);
        let three = basis(3, 2).unwrap();
        assert_eq!(three.len(), 1);
        assert_eq!(three[0].name(), "f");
    }

    #[test]
    fn decompositions() {
        let [k3, _, _, x5] = building_blocks(4).unwrap();
        let dk = decompose(&k3).unwrap();
        assert_eq!(dk.basis, vec!["b"]);
        assert_eq!(dk.coefficients, vec![rint(2)]);
        let dq = decompose(&x5).unwrap();
        assert_eq!(f_multiple(&dq), Some(rint(-100)));
        let kk = decompose(&k3.power(2)).unwrap();
        assert_eq!(kk.basis, vec!["b^2", "E4 a^2"]);
        assert_eq!(kk.coefficients[0], rint(4));
        assert!(matches!(decompose(&ell_projective_space(2, 3).unwrap()), Err(Error::Inconsistent(_))));
    }

    #[test]
    fn slices() {
        let [k3, _, _, x5] = building_blocks(1).unwrap();
        let s = hodge_slice(&k3).unwrap();
        assert_eq!(s.chi, vec![BigInt::from(2), BigInt::from(20), BigInt::from(2)]);
        let s = hodge_slice(&x5).unwrap();
        assert!(s.check_calabi_yau().is_ok());
        assert_eq!(s.chi[1], BigInt::from(-100));
        let p2 = hodge_slice(&ell_projective_space(2, 1).unwrap()).unwrap();
        assert_eq!(p2.chi, vec![BigInt::from(1); 3]);
    }

    #[test]
    fn rank_dichotomy() {
        for d in [2, 4, 6, 8, 10, 3, 5, 7, 9, 11, 13] {
            let r = q0_rank_analysis(d).unwrap();
            assert!(r.determined(), "{:?}", r);
        }
        let r = q0_rank_analysis(12).unwrap();
        assert_eq!(r.dim_forms, 7);
        assert!(r.rank_q0 < 7);
        assert!(!q0_rank_analysis(15).unwrap().determined());
    }

    #[test]
    fn spans() {
        let [k3, x6, x8, _] = building_blocks(3).unwrap();
        assert_eq!(span_check(2, &[k3.clone()]).unwrap().rank_q0, 1);
        assert_eq!(span_check(4, &[k3.power(2), x6.clone()]).unwrap().rank_q0, 2);
        let r = span_check(6, &[k3.power(3), k3.product(&x6), x8]).unwrap();
        assert_eq!((r.rank_q0, r.dim_forms), (3, 3));
    }

    #[test]
    fn degenerate_pairs() {
        let p = chi_degenerate_pair(12, 1).unwrap();
        assert_eq!(p.combination.len(), 7);
        assert!(p.q0_slice.iter().all(|c| c.is_zero()));
        assert!(p.q1_slice.iter().any(|c| !c.is_zero()));
        assert!(chi_degenerate_pair(15, 1).is_ok());
        assert_eq!(chi_degenerate_pair(10, 1), Err(Error::NoKernel(10)));
    }
}
