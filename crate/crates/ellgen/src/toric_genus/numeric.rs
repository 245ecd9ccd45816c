//! Numeric theta-function forms of the toric genus at `y = -1`.

use num_complex::Complex;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::error::{Error, Result};
use crate::lattice_sum::EnumerationPlan;
use crate::report::Report;
use crate::theta::numeric::{e2pi, theta, NumericPoint};
use crate::toric::{box_elements, Fan};

type C = Complex<f64>;

/// Smallest `|theta|` accepted in a denominator.
pub const SINGULAR_EPS: f64 = 1e-8;

/// Per maximal cone: dual basis, box coordinates `lambda` and box heights.
#[derive(Clone, Debug)]
pub(crate) struct NumericCone {
    pub dual: Vec<Vec<f64>>,
    pub lambdas: Vec<Vec<f64>>,
    pub heights: Vec<i64>,
}

impl NumericCone {
    pub fn new(rays: &[Vec<i64>]) -> Result<Self> {
        let bd = box_elements(rays)?;
        let n = bd.group_order as i64;
        let dual = bd
            .dual_basis
            .as_ref()
            .ok_or_else(|| Error::Validation("maximal cone is not full-dimensional".into()))?
            .iter()
            .map(|m| m.iter().map(|x| x.to_f64().unwrap()).collect())
            .collect();
        let lambdas = bd.coords.iter().map(|c| c.iter().map(|&x| x as f64 / n as f64).collect()).collect();
        let mut heights = Vec::new();
        for c in &bd.coords {
            let s: i64 = c.iter().sum();
            if s % n != 0 {
                return Err(Error::NotGorenstein("box point of fractional height".into()));
            }
            heights.push(s / n);
        }
        Ok(NumericCone { dual, lambdas, heights })
    }

    pub fn order(&self) -> f64 {
        self.lambdas.len() as f64
    }

    /// `m_i . nu` for each dual vector.
    pub fn pair(&self, nu: &[C]) -> Vec<C> {
        self.dual.iter().map(|m| m.iter().zip(nu).map(|(a, b)| b * *a).sum()).collect()
    }
}

pub(crate) fn checked_ratio(num: C, den: C, what: &str) -> Result<C> {
    if den.norm() < SINGULAR_EPS {
        return Err(Error::NearSingular(format!("{} denominator {:.3e}", what, den.norm())));
    }
    Ok(num / den)
}

/// Cone data of a complete Gorenstein fan, prepared once for many evaluations.
#[derive(Clone, Debug)]
pub struct ToricTheta {
    d: usize,
    cones: Vec<NumericCone>,
}

impl ToricTheta {
    pub fn new(fan: &Fan) -> Result<Self> {
        let cones = fan.max_cones.iter().map(|c| NumericCone::new(&fan.cone_rays(c))).collect::<Result<_>>()?;
        Ok(ToricTheta { d: fan.rank, cones })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    /// `sum_C 1/|G| sum_{k,l} (-1)^{deg.k} prod theta(1/2 - m_i.k tau - m_i.nu - m_i.l) / theta(-m_i.k tau - m_i.nu - m_i.l)`.
    pub fn rho(&self, tau: C, nu: &[C]) -> Result<C> {
        if tau.im <= 0.0 {
            return Err(Error::Domain("Im(tau) must be positive".into()));
        }
        if nu.len() != self.d {
            return Err(Error::Validation(format!("nu has length {}, expected {}", nu.len(), self.d)));
        }
        let half = C::new(0.5, 0.0);
        let mut total = C::new(0.0, 0.0);
        for cone in &self.cones {
            let w = cone.pair(nu);
            let mut acc = C::new(0.0, 0.0);
            for (k, lk) in cone.lambdas.iter().enumerate() {
                let sign = if cone.heights[k] % 2 == 0 { 1.0 } else { -1.0 };
                for ll in &cone.lambdas {
                    let mut prod = C::new(sign, 0.0);
                    for i in 0..self.d {
                        let v = -tau * lk[i] - w[i] - ll[i];
                        prod *= checked_ratio(theta(tau, half + v), theta(tau, v), "theta")?;
                    }
                    acc += prod;
                }
            }
            total += acc / cone.order();
        }
        Ok(total)
    }
}

pub fn rho_toric_numeric(fan: &Fan, p: &NumericPoint<f64>) -> Result<C> {
    ToricTheta::new(fan)?.rho(p.tau, &p.nu)
}

/// The `m`-sum with weights `e^{2 pi i m . nu}` at `y = -1`, from the exact per-`m` cone sums,
/// times the phase `i^d` that the theta quotients carry at `z = 1/2`.
pub fn rho_toric_series(fan: &Fan, tau: C, nu: &[C], plan: &EnumerationPlan) -> Result<C> {
    let q = e2pi(tau);
    let per_m = super::per_m_cone_sums(fan, plan)?;
    let mut total = C::new(0.0, 0.0);
    for (m, s) in per_m {
        let phase: C = m.iter().zip(nu).map(|(a, b)| b * (*a as f64)).sum();
        total += e2pi(phase) * s.eval(C::new(-1.0, 0.0), q);
    }
    let g = crate::theta::numeric::g_numeric(tau, C::new(0.5, 0.0), 60).value;
    let d = fan.rank as i32;
    Ok(total * g.powi(d) / C::new(2.0, 0.0).powi(d) * C::new(0.0, 1.0).powi(d))
}

/// `rho(tau/(1 - 2 tau), nu/(1 - 2 tau)) = (-i)^d rho(tau, nu)`.
pub fn gamma02_numeric_check(fan: &Fan, p: &NumericPoint<f64>, tol: f64) -> Result<Report> {
    let th = ToricTheta::new(fan)?;
    let d = th.dim();
    let one = C::new(1.0, 0.0);
    let s = one - p.tau * 2.0;
    let tau2 = p.tau / s;
    let nu2: Vec<C> = p.nu.iter().map(|x| x / s).collect();
    let lhs = th.rho(tau2, &nu2)?;
    let rhs = C::new(0.0, -1.0).powi(d as i32) * th.rho(p.tau, &p.nu)?;
    let err = (lhs - rhs).norm();
    let detail = json!({
        "d": d,
        "tau": [p.tau.re, p.tau.im],
        "factor": format!("(-i)^{}", d),
        "lhs": [lhs.re, lhs.im],
        "rhs": [rhs.re, rhs.im],
        "abs_error": err,
        "tol": tol,
    });
    Ok(Report::new("gamma0-2", err <= tol, detail))
}

/// `rho(-nu) = (-1)^d rho(nu)`.
pub fn parity_check(fan: &Fan, p: &NumericPoint<f64>, tol: f64) -> Result<Report> {
    let th = ToricTheta::new(fan)?;
    let d = th.dim();
    let neg: Vec<C> = p.nu.iter().map(|x| -x).collect();
    let a = th.rho(p.tau, &neg)?;
    let b = th.rho(p.tau, &p.nu)? * if d % 2 == 0 { 1.0 } else { -1.0 };
    let err = (a - b).norm();
    let detail = json!({"d": d, "abs_error": err, "tol": tol, "value": [b.re, b.im]});
    Ok(Report::new("rho-parity", err <= tol, detail))
}

/// Seeded points with `tau` in a box around `1.2 i` and small `nu`, `z = 1/2`.
pub fn toric_samples(rank: usize, count: usize, seed: u64) -> Vec<NumericPoint<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let tau = C::new(rng.gen_range(-0.2..0.2), rng.gen_range(1.0..1.4));
            let nu = (0..rank).map(|_| C::new(rng.gen_range(-0.05..0.05), rng.gen_range(-0.02..0.02))).collect();
            NumericPoint::new(tau, C::new(0.5, 0.0), nu).expect("Im(tau) > 0")
        })
        .collect()
}

/// Runs `check` at seeded samples and keeps the worst error.
pub fn seeded_check<F>(fan: &Fan, count: usize, seed: u64, tol: f64, name: &str, check: F) -> Result<Report>
where
    F: Fn(&Fan, &NumericPoint<f64>, f64) -> Result<Report>,
{
    let mut worst = 0.0f64;
    let mut passed = true;
    let mut factor = None;
    for p in toric_samples(fan.rank, count, seed) {
        let r = check(fan, &p, tol)?;
        passed &= r.passed();
        worst = worst.max(r.detail["abs_error"].as_f64().unwrap_or(f64::INFINITY));
        if factor.is_none() {
            factor = r.detail.get("factor").cloned();
        }
    }
    let detail = json!({
        "d": fan.rank,
        "seed": seed,
        "samples": count,
        "factor": factor,
        "worst_abs_error": worst,
        "tol": tol,
    });
    Ok(Report::new(name, passed, detail))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::toric::load_fan;
    use crate::toric_genus::tests::pn;

    fn weighted_plane() -> Fan {
        load_fan(2, vec![vec![1, 1], vec![1, -1], vec![-1, 0]], vec![vec![0, 1], vec![0, 2], vec![1, 2]]).unwrap()
    }

    fn square() -> Fan {
        load_fan(2, vec![vec![1, 0], vec![0, 1], vec![-1, 0], vec![0, -1]], vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3]])
            .unwrap()
    }

    fn point(tau: C, nu: Vec<C>) -> NumericPoint<f64> {
        NumericPoint::new(tau, C::new(0.5, 0.0), nu).unwrap()
    }

    #[test]
    fn closed_form_matches_series() {
        let tau = C::new(0.0, 1.1);
        let nu = vec![C::new(0.031, 0.0), C::new(-0.017, 0.0), C::new(0.012, 0.0)];
        for fan in [pn(2), square(), weighted_plane(), pn(3)] {
            let nu = nu[..fan.rank].to_vec();
            let a = rho_toric_numeric(&fan, &point(tau, nu.clone())).unwrap();
            let b = rho_toric_series(&fan, tau, &nu, &EnumerationPlan::new(4)).unwrap();
            assert!((a - b).norm() < 1e-6, "{} vs {}", a, b);
        }
    }

    #[test]
    fn gamma02_law() {
        let p = point(C::new(0.0, 1.3), vec![C::new(0.023, 0.011), C::new(-0.041, 0.007)]);
        for fan in [pn(2), square(), weighted_plane()] {
            let r = gamma02_numeric_check(&fan, &p, 1e-8).unwrap();
            assert!(r.passed(), "{:?}", r);
        }
    }

    #[test]
    fn parity() {
        let p = point(C::new(0.1, 1.2), vec![C::new(0.023, 0.011), C::new(-0.041, 0.007)]);
        assert!(parity_check(&weighted_plane(), &p, 1e-8).unwrap().passed());
        let p3 = point(C::new(0.1, 1.2), vec![C::new(0.023, 0.011), C::new(-0.041, 0.007), C::new(0.013, 0.0)]);
        let r = parity_check(&pn(3), &p3, 1e-8).unwrap();
        assert!(r.passed(), "{:?}", r);
    }

    #[test]
    fn seeded_samples() {
        let a = toric_samples(2, 3, 5);
        let b = toric_samples(2, 3, 5);
        assert_eq!(a[2].tau, b[2].tau);
        for fan in [pn(2), square(), weighted_plane()] {
            let r = seeded_check(&fan, 5, 11, 1e-8, "gamma0-2", gamma02_numeric_check).unwrap();
            assert!(r.passed(), "{}", r.to_text());
        }
        let r = seeded_check(&weighted_plane(), 5, 11, 1e-8, "rho-parity", parity_check).unwrap();
        assert!(r.passed(), "{}", r.to_text());
    }
}
