//! Elliptic genera of complete toric varieties from their fans.

pub mod cone_identity;
pub mod numeric;
pub mod p2;

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::lattice_sum::{sup_shells, EnumerationPlan, LatticeSum, SumFace};
use crate::series::dense::Grid;
use crate::series::{Genus, Series};
use crate::theta::g_series;
use crate::theta_limit::LimitSum;
use crate::toric::linalg::dot;
use crate::toric::Fan;

pub use p2::{p2_identity_sides, verify_bijection, BijectionReport};

fn lattice_sum(fan: &Fan) -> Result<LatticeSum> {
    let deg = fan
        .deg_data
        .as_ref()
        .ok_or_else(|| Error::NotGorenstein("no integral deg on some maximal cone".into()))?;
    let faces = fan.faces()?;
    if Fan::euler_sign_sum(&faces) != 1 {
        return Err(Error::InternalInconsistency("signed cone count is not 1".into()));
    }
    let faces = faces
        .into_iter()
        .map(|f| SumFace {
            sign: f.sign,
            boxes: f.boxdata.elements.iter().map(|b| (b.clone(), dot(&deg[f.max_cone], b))).collect(),
            rays: f.rays,
        })
        .collect();
    Ok(LatticeSum { rank: fan.rank, rays: fan.rays.clone(), faces, cy: false })
}

/// `y^{d/2} Ell` of the toric variety of a complete Gorenstein fan.
pub fn ell_toric(fan: &Fan, plan: &EnumerationPlan) -> Result<Genus> {
    plan.validate()?;
    let sum = lattice_sum(fan)?;
    let q = plan.q_order;
    let r = fan.rank as i64;
    let basis = fan.cone_rays(&fan.max_cones[0]);
    let shells = sup_shells(&fan.rays, &basis, plan.m_bound + plan.stabilization_shells);
    let (lo, hi) = plan.y_window.unwrap_or((-q - r - 1, q + 2 * r + 1));
    let grid = sum.evaluate(&shells, plan, (lo, hi), false)?;
    let edges_clear = (0..=q).all(|a| grid.get(a, lo) == 0 && grid.get(a, hi) == 0);
    let body = if edges_clear { grid.to_series() } else { grid.to_series().with_window(2 * lo, 2 * hi)? };
    Genus::new(fan.rank, body, format!("toric fan with {} rays", fan.rays.len()))
}

/// As `ell_toric`, through the `nu -> 0` limit of the theta-quotient cone sum.
pub fn ell_toric_limit(fan: &Fan, q_order: i64) -> Result<Genus> {
    let sum = LimitSum::toric(fan)?;
    let body = sum.body(q_order, &sum.generic_direction())?;
    Genus::new(fan.rank, body, format!("toric fan with {} rays", fan.rays.len()))
}

/// Exact per-`m` cone sums (before the factor `H^d`) with their `m`.
pub(crate) fn per_m_cone_sums(fan: &Fan, plan: &EnumerationPlan) -> Result<Vec<(Vec<i64>, Grid)>> {
    plan.validate()?;
    let sum = lattice_sum(fan)?;
    let basis = fan.cone_rays(&fan.max_cones[0]);
    let shells = sup_shells(&fan.rays, &basis, plan.m_bound + plan.stabilization_shells);
    sum.per_m(&shells, plan)
}

/// `G(-1, q)`.
pub fn g_at_minus_one(q_order: i64) -> Series {
    g_series(q_order).eval_y(-1).expect("G is not windowed")
}

/// `Ell(-1, q) G(-1, q)^{-d}` up to the phase `(-1)^{d/2}`, which the
/// cleared form absorbs.
pub fn ellhat(g: &Genus) -> Result<Series> {
    let v = g.body.eval_y(-1)?;
    let gm = g_at_minus_one(g.q_order()).inv()?;
    let mut out = v;
    for _ in 0..g.d {
        out = out.mul(&gm);
    }
    Ok(out)
}

pub fn ellhat_toric(fan: &Fan, plan: &EnumerationPlan) -> Result<Series> {
    ellhat(&ell_toric(fan, plan)?)
}

/// `eval_y(1)`, which must be `q`-constant.
pub fn euler_check(g: &Genus) -> Result<BigRational> {
    g.euler_number()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chern::ell_projective_space;
    use crate::scalar::{rat, rint};
    use crate::toric::load_fan;

    pub(crate) fn pn(n: usize) -> Fan {
        let mut rays = Vec::new();
        for i in 0..n {
            let mut v = vec![0; n];
            v[i] = 1;
            rays.push(v);
        }
        rays.push(vec![-1; n]);
        let cones = (0..=n).map(|skip| (0..=n).filter(|&i| i != skip).collect()).collect();
        load_fan(n, rays, cones).unwrap()
    }

    #[test]
    fn projective_spaces_agree_with_chern() {
        for n in 1..=2 {
            let g = ell_toric(&pn(n), &EnumerationPlan::new(4)).unwrap();
            let c = ell_projective_space(n, 4).unwrap();
            assert_eq!(g.body, c.body, "P^{}", n);
            assert_eq!(euler_check(&g).unwrap(), rint(n as i64 + 1));
        }
    }

    #[test]
    fn p1_q0() {
        let g = ell_toric(&pn(1), &EnumerationPlan::new(2)).unwrap();
        assert_eq!(g.q0_slice(), vec![rint(1), rint(1)]);
    }

    #[test]
    fn ellhat_p2_constant_term() {
        let e = ellhat_toric(&pn(2), &EnumerationPlan::new(3)).unwrap();
        assert_eq!(e.coeff_qy(0, 0), rat(1, 4));
    }

    #[test]
    fn singular_surface() {
        let f = load_fan(2, vec![vec![1, 1], vec![1, -1], vec![-1, 0]], vec![vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap();
        let g = ell_toric(&f, &EnumerationPlan::new(3)).unwrap();
        assert_eq!(euler_check(&g).unwrap(), rint(4));
        assert!(g.is_integral());
    }

    #[test]
    fn singular_threefold_ellhat_vanishes() {
        let f = load_fan(2, vec![vec![1, 1], vec![1, -1], vec![-1, 0]], vec![vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap();
        let x = f.product(&pn(1)).unwrap();
        let a = ell_toric_limit(&x, 5).unwrap();
        let b = ell_toric(&x, &EnumerationPlan::new(3)).unwrap();
        assert_eq!(a.body.truncate(b.body.trunc2()), b.body);
        assert!(ellhat(&a).unwrap().is_zero());
        assert_eq!(euler_check(&a).unwrap(), rint(8));
    }
}
