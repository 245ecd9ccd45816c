//! Elliptic genera of Calabi-Yau hypersurfaces in Gorenstein toric Fano
//! varieties, and their mirror checks.

pub mod checks;
pub mod numeric;

use crate::error::{Error, Result};
use crate::lattice_sum::{sigma_shells, EnumerationPlan, LatticeSum, SumFace};
use crate::series::{Genus, Series};
use crate::theta_limit::LimitSum;
use crate::toric::{box_elements, dual_polytope, subdivide_simplicial, Fan, InsertionOrder, ReflexivePair};



/// How `ell_cy` evaluates the cone data.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CyMethod {
    /// `nu -> 0` limit of the theta-quotient cone sum.
    ThetaLimit,
    /// Truncated lattice sum over `m`-shells; only practical at small `q` orders.
    LatticeSum,
}

/// A reflexive pair together with how its genus is computed.
#[derive(Clone, Debug, PartialEq)]
pub struct CYFamily {
    pub pair: ReflexivePair,
    pub d: usize,
    pub plan: EnumerationPlan,
    pub order: InsertionOrder,
    pub method: CyMethod,
    pub label: String,
}

impl CYFamily {
    pub fn new(pair: ReflexivePair, plan: EnumerationPlan, label: impl Into<String>) -> Result<Self> {
        let r = pair.rank();
        if r < 2 {
            return Err(Error::Domain("the hypersurface needs rank M_1 >= 2".into()));
        }
        Ok(CYFamily { pair, d: r - 1, plan, order: InsertionOrder::Lex, method: CyMethod::ThetaLimit, label: label.into() })
    }

    pub fn fan(&self) -> Result<Fan> {
        subdivide_simplicial(&self.pair, self.order)
    }
}

/// `floor(d/2 - R)` and `ceil(d/2 + R)`... in whole units: the `y` exponents
/// `b` of the cleared form allowed at `q^q` by `(2b - d)^2 <= 8 d q + d^2`.
pub fn jacobi_window(d: usize, q: i64) -> (i64, i64) {
    let d = d as i64;
    let bound = 8 * d * q + d * d;
    let mut lo = 0;
    while (2 * (lo - 1) - d).pow(2) <= bound {
        lo -= 1;
    }
    let mut hi = d;
    while (2 * (hi + 1) - d).pow(2) <= bound {
        hi += 1;
    }
    (lo, hi)
}

/// Smallest `q` order at which the `y -> y q` laws on the windowed body
/// still reach `q^1`.
pub fn min_law_order(d: usize) -> i64 {
    let mut q = 1;
    while q + jacobi_window(d, q).0 < 1 {
        q += 1;
    }
    q
}

fn lattice_sum(fan: &Fan, d: usize) -> Result<LatticeSum> {
    let r = fan.rank;
    let mut deg_star = vec![0; r + 1];
    deg_star[r] = 1;
    let mut rays = vec![deg_star];
    for v in &fan.rays {
        let mut w = v.clone();
        w.push(1);
        rays.push(w);
    }
    let faces = fan.faces()?;
    if Fan::euler_sign_sum(&faces) != 1 {
        return Err(Error::InternalInconsistency("signed cone count is not 1".into()));
    }
    let mut out = Vec::new();
    for f in faces {
        let mut idx = vec![0];
        idx.extend(f.rays.iter().map(|i| i + 1));
        let lifted: Vec<Vec<i64>> = idx.iter().map(|&i| rays[i].clone()).collect();
        let b = box_elements(&lifted)?;
        let boxes = b.elements.iter().map(|p| (p.clone(), p[r])).collect();
        out.push(SumFace { sign: f.sign, rays: idx, boxes });
    }
    Ok(LatticeSum { rank: d + 2, rays, faces: out, cy: true })
}

/// `y^{d/2} Ell` of a generic anticanonical hypersurface.
pub fn ell_cy(family: &CYFamily) -> Result<Genus> {
    family.plan.validate()?;
    let fan = family.fan()?;
    let g = match family.method {
        CyMethod::ThetaLimit => {
            let sum = LimitSum::hypersurface(&fan)?;
            let body = sum.body(family.plan.q_order, &sum.generic_direction())?;
            Genus::new(family.d, body, family.label.clone())?
        }
        CyMethod::LatticeSum => ell_cy_lattice(family, &fan)?,
    };
    if !g.all_coefficients_integral() {
        return Err(Error::InternalInconsistency(format!("{}: non-integral coefficient", g.label)));
    }
    Ok(g)
}

fn ell_cy_lattice(family: &CYFamily, fan: &Fan) -> Result<Genus> {
    let plan = &family.plan;
    let d = family.d;
    let q = plan.q_order;
    let sum = lattice_sum(fan, d)?;
    let (wlo, whi) = match plan.y_window {
        Some(w) => w,
        None => {
            let (lo, hi) = jacobi_window(d, q);
            (lo - 1, hi + 1)
        }
    };
    let shells = sigma_shells(&sum.rays[1..], &family.pair.delta.vertices, plan.m_bound + plan.stabilization_shells);
    let grid = sum.evaluate(&shells, plan, (wlo, whi), true)?;
    let edges_clear = (0..=q).all(|a| grid.get(a, wlo) == 0 && grid.get(a, whi) == 0);
    let body = if edges_clear {
        grid.to_series()
    } else {
        grid.to_series().with_window(2 * wlo, 2 * whi)?
    };
    Genus::new(d, body, family.label.clone())
}

/// The pair whose generic hypersurface is the Fermat family of degree `n + 1`
/// in `P^n`: `Delta` is the simplex with vertices `(n+1) e_i - (1, ..., 1)` and `-(1, ..., 1)`.
pub fn fermat_pair(n: usize) -> Result<ReflexivePair> {
    let k = n as i64 + 1;
    let mut v = Vec::new();
    for i in 0..n {
        let mut p = vec![-1; n];
        p[i] = k - 1;
        v.push(p);
    }
    v.push(vec![-1; n]);
    dual_polytope(v)
}

/// `(Delta, deg) <-> (Delta*, deg*)`.
pub fn mirror(family: &CYFamily) -> CYFamily {
    CYFamily {
        pair: family.pair.mirror(),
        d: family.d,
        plan: family.plan,
        order: family.order,
        method: family.method,
        label: format!("mirror of {}", family.label),
    }
}

/// The body restricted to the support allowed for a weak Jacobi form of index
/// `d/2`, which makes it exact on that window for every `q` order.
pub fn jacobi_windowed(g: &Genus) -> Result<Series> {
    let (lo, hi) = jacobi_window(g.d, g.q_order());
    g.body.with_window(2 * lo, 2 * hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chern::{ell_hypersurface_projective, HypersurfaceSpec};

    #[test]
    fn law_orders() {
        let v: Vec<i64> = (1..=8).map(min_law_order).collect();
        for (d, q) in v.iter().enumerate() {
            let d = d + 1;
            assert!(q + jacobi_window(d, *q).0 >= 1);
            assert!(*q == 1 || q - 1 + jacobi_window(d, q - 1).0 < 1);
        }
        eprintln!("{:?}", v);
    }
    use crate::scalar::rint;

    fn fermat(n: usize) -> ReflexivePair {
        fermat_pair(n).unwrap()
    }

    #[test]
    fn windows() {
        assert_eq!(jacobi_window(3, 4), (-3, 6));
        assert_eq!(jacobi_window(2, 4), (-3, 5));
        assert_eq!(jacobi_window(2, 0), (0, 2));
    }

    #[test]
    fn k3_lattice_sum_against_chern() {
        let mut plan = EnumerationPlan::new(2);
        plan.m_bound = 8;
        let mut fam = CYFamily::new(fermat(3), plan, "K3").unwrap();
        fam.method = CyMethod::LatticeSum;
        let g = ell_cy(&fam).unwrap();
        let c = ell_hypersurface_projective(HypersurfaceSpec::new(3, 4).unwrap(), 2).unwrap();
        assert_eq!(g.body, c.body);
        assert_eq!(g.euler_number().unwrap(), rint(24));
    }

    #[test]
    fn fermat_families_against_chern() {
        for (n, q) in [(3, 4), (4, 4), (5, 3), (7, 2)] {
            let fam = CYFamily::new(fermat(n), EnumerationPlan::new(q), "fermat").unwrap();
            let g = ell_cy(&fam).unwrap();
            let c = ell_hypersurface_projective(HypersurfaceSpec::new(n, n as i64 + 1).unwrap(), q).unwrap();
            assert_eq!(g.body, c.body, "degree {}", n + 1);
        }
    }

    #[test]
    fn quintic_slice_and_euler() {
        let fam = CYFamily::new(fermat(4), EnumerationPlan::new(3), "quintic").unwrap();
        let g = ell_cy(&fam).unwrap();
        assert_eq!(crate::series::fmt_vec(&g.q0_slice()), "(0, -100, -100, 0)");
        assert_eq!(g.euler_number().unwrap(), rint(-200));
    }

    #[test]
    fn mirror_quintic_subdivision_independent() {
        let mut fam = mirror(&CYFamily::new(fermat(4), EnumerationPlan::new(2), "quintic").unwrap());
        let a = ell_cy(&fam).unwrap();
        fam.order = InsertionOrder::ReverseLex;
        let b = ell_cy(&fam).unwrap();
        assert_eq!(a.body, b.body);
        assert_eq!(crate::series::fmt_vec(&a.q0_slice()), "(0, 100, 100, 0)");
    }
}
