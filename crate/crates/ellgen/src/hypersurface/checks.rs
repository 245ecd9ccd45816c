//! Series-level checks of the mirror and elliptic transformation laws.

use serde_json::json;

use super::{ell_cy, jacobi_window, mirror, CYFamily};
use crate::error::{Error, Result};
use crate::report::Report;
use crate::scalar::fmt_half;
use crate::series::{Genus, Series};

fn monomial_name(d: Option<(i64, i64, i64)>) -> serde_json::Value {
    match d {
        None => serde_json::Value::Null,
        Some((q, y, _)) if y == i64::MIN => json!(format!("q^{} (pole)", fmt_half(q))),
        Some((q, y, _)) => json!(format!("q^{} y^{}", fmt_half(q), fmt_half(y))),
    }
}

/// The body cut to the support a weak Jacobi form of index `d/2` can have up
/// to its truncation, so that `y -> y q^j` keeps exact bookkeeping.
pub fn windowed_body(g: &Genus) -> Result<Series> {
    let (lo, hi) = jacobi_window(g.d, g.q_order());
    g.body.with_window(2 * lo, 2 * hi)
}

/// `B(y, q) -> B(y^{-1} q, q)` on the windowed body.
pub fn mirror_transform(g: &Genus) -> Result<Series> {
    Ok(windowed_body(g)?.subst_y_qshift(1)?.subst_y_invert())
}

/// `Ell(X; y, q) = y^{-d} q^{d/2} Ell(X*; y^{-1} q, q)`, i.e. `B = B*(y^{-1} q, q)` in cleared form.
pub fn mirror_transform_report(g: &Genus, g_star: &Genus) -> Result<Report> {
    if g.d != g_star.d {
        return Err(Error::Validation("mirror genera of different dimension".into()));
    }
    let t = mirror_transform(g_star)?;
    let overlap = t.trunc_order().min(g.q_order());
    let diff = if overlap < 0 { None } else { t.first_difference(&g.body) };
    let detail = json!({
        "label": g.label,
        "d": g.d,
        "overlap_order": overlap,
        "first_difference": monomial_name(diff),
    });
    Ok(Report::new("mirror-transform", overlap >= 1 && diff.is_none(), detail))
}

pub fn check_mirror_transform(family: &CYFamily) -> Result<Report> {
    let g = ell_cy(family)?;
    let g_star = ell_cy(&mirror(family))?;
    mirror_transform_report(&g, &g_star)
}

/// `Ell(X) = (-1)^d Ell(X*)`.
pub fn mirror_sign_report(g: &Genus, g_star: &Genus) -> Result<Report> {
    if g.d != g_star.d {
        return Err(Error::Validation("mirror genera of different dimension".into()));
    }
    let sign = if g.d % 2 == 0 { 1 } else { -1 };
    let rhs = if sign == 1 { g_star.body.clone() } else { g_star.body.neg() };
    let diff = g.body.first_difference(&rhs);
    let detail = json!({
        "label": g.label,
        "d": g.d,
        "sign": format!("(-1)^{}", g.d),
        "compared_to_q": g.q_order().min(g_star.q_order()),
        "first_difference": monomial_name(diff),
    });
    Ok(Report::new("mirror-sign", diff.is_none(), detail))
}

pub fn check_mirror_sign(family: &CYFamily) -> Result<Report> {
    let g = ell_cy(family)?;
    let g_star = ell_cy(&mirror(family))?;
    mirror_sign_report(&g, &g_star)
}

/// `B(y q, q) = (-1)^d y^{-d} B(y, q)` for the cleared body, and integral
/// `y` exponents (the `z -> z + 1` law).
pub fn elliptic_transform_check(g: &Genus) -> Result<Report> {
    let d = g.d as i64;
    let w = windowed_body(g)?;
    let lhs = w.subst_y_qshift(1)?;
    let mut rhs = w.shift(0, -2 * d);
    if d % 2 == 1 {
        rhs = rhs.neg();
    }
    let overlap = lhs.trunc_order().min(rhs.trunc_order());
    let diff = if overlap < 0 { None } else { lhs.first_difference(&rhs) };
    // at overlap 0 only a few q^0 coefficients meet, which is close to vacuous
    let integral_y = g.body.coeffs().values().all(|c| c.terms().keys().all(|e| e.0 % 2 == 0));
    let (lo, hi) = jacobi_window(g.d, g.q_order());
    let detail = json!({
        "label": g.label,
        "d": g.d,
        "window": [lo, hi],
        "overlap_order": overlap,
        "integral_y_exponents": integral_y,
        "first_difference": monomial_name(diff),
    });
    Ok(Report::new("elliptic-law", overlap >= 1 && diff.is_none() && integral_y, detail))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chern::ell_projective_space;
    use crate::hypersurface::fermat_pair;
    use crate::lattice_sum::EnumerationPlan;

    fn family(n: usize, q: i64) -> CYFamily {
        CYFamily::new(fermat_pair(n).unwrap(), EnumerationPlan::new(q), "fermat").unwrap()
    }

    #[test]
    fn k3_mirror() {
        let f = family(3, 5);
        let r = check_mirror_transform(&f).unwrap();
        assert!(r.passed(), "{:?}", r);
        assert!(r.detail["overlap_order"].as_i64().unwrap() >= 2);
        assert!(check_mirror_sign(&f).unwrap().passed());
    }

    #[test]
    fn quintic_mirror() {
        let f = family(4, 4);
        let r = check_mirror_transform(&f).unwrap();
        assert!(r.passed(), "{:?}", r);
        let s = check_mirror_sign(&f).unwrap();
        assert!(s.passed(), "{:?}", s);
        assert_eq!(s.detail["sign"], "(-1)^3");
    }

    #[test]
    fn elliptic_law() {
        for n in [3, 4] {
            let g = ell_cy(&family(n, 4)).unwrap();
            let r = elliptic_transform_check(&g).unwrap();
            assert!(r.passed(), "{:?}", r);
        }
        let p2 = ell_projective_space(2, 4).unwrap();
        assert!(!elliptic_transform_check(&p2).unwrap().passed());
    }

    #[test]
    fn transform_twice_is_identity() {
        let g = ell_cy(&family(3, 12)).unwrap();
        let once = mirror_transform(&g).unwrap();
        let (lo, hi) = jacobi_window(2, once.trunc_order());
        let twice = once.with_window(2 * lo, 2 * hi).unwrap().subst_y_qshift(1).unwrap().subst_y_invert();
        assert!(twice.trunc_order() >= 2);
        assert!(twice.eq_on_overlap(&g.body));
    }
}
