//! Numeric theta-function form of the hypersurface genus.
//!
//! `rho(z, tau, nu)` is the sum over maximal lifted cones of theta quotients.
//! Single terms have poles at `nu = 0` while the total does not, so the value
//! at `nu = 0` is taken as the mean over a small circle around the origin in a
//! fixed complex direction, which is exact up to `O(r^N)` for `N` points.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::error::{Error, Result};
use crate::report::Report;
use crate::series::Genus;
use crate::theta::numeric::{e2pi, eval_series, theta};
use crate::toric::Fan;
use crate::toric_genus::numeric::{checked_ratio, NumericCone};

type C = Complex<f64>;

/// Radius and number of points of the circle used for `nu -> 0`, in units of
/// the largest weight. The value at `z` has its nearest singularity at
/// `|m_1 . nu| = |z|`, so for `|z| > 0.2` the neglected terms are below `0.6^64`.
pub const LIMIT_RADIUS: f64 = 0.12;
pub const LIMIT_POINTS: usize = 64;
const DIRECTION_CANDIDATES: usize = 256;

/// Lifted cone data of the anticanonical hypersurface of a complete fan.
#[derive(Clone, Debug)]
pub struct CyTheta {
    d: usize,
    cones: Vec<NumericCone>,
}

impl CyTheta {
    pub fn new(fan: &Fan) -> Result<Self> {
        let r = fan.rank;
        if r < 2 {
            return Err(Error::Domain("the hypersurface needs rank >= 2".into()));
        }
        let mut deg_star = vec![0; r + 1];
        deg_star[r] = 1;
        let mut cones = Vec::new();
        for cone in &fan.max_cones {
            let mut lifted = vec![deg_star.clone()];
            for mut v in fan.cone_rays(cone) {
                v.push(1);
                lifted.push(v);
            }
            let nc = NumericCone::new(&lifted)?;
            if nc.lambdas.iter().any(|l| l[0] != 0.0) {
                return Err(Error::NotGorenstein(format!("cone {:?} is not reflexive-compatible", cone)));
            }
            cones.push(nc);
        }
        Ok(CyTheta { d: r - 1, cones })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    /// Length of `nu`.
    pub fn rank(&self) -> usize {
        self.d + 2
    }

    pub fn rho(&self, tau: C, z: C, nu: &[C]) -> Result<C> {
        if tau.im <= 0.0 {
            return Err(Error::Domain("Im(tau) must be positive".into()));
        }
        if nu.len() != self.rank() {
            return Err(Error::Validation(format!("nu has length {}, expected {}", nu.len(), self.rank())));
        }
        let y = e2pi(z);
        let mut total = C::new(0.0, 0.0);
        for cone in &self.cones {
            let w = cone.pair(nu);
            let first = checked_ratio(theta(tau, w[0]), theta(tau, w[0] - z), "theta")?;
            let mut acc = C::new(0.0, 0.0);
            for (k, ln) in cone.lambdas.iter().enumerate() {
                let yk = y.powi(cone.heights[k] as i32);
                for ll in &cone.lambdas {
                    let mut prod = yk * first;
                    for i in 1..w.len() {
                        let v = -w[i] - ll[i] - tau * ln[i];
                        prod *= checked_ratio(theta(tau, v - z), theta(tau, v), "theta")?;
                    }
                    acc += prod;
                }
            }
            total += acc / cone.order();
        }
        Ok(total)
    }

    /// Smallest and largest `|m . nu|` over the dual vectors of every cone.
    fn weight_range(&self, nu: &[f64]) -> (f64, f64) {
        let nuc: Vec<C> = nu.iter().map(|&x| C::new(x, 0.0)).collect();
        let (mut small, mut big) = (f64::INFINITY, 0.0f64);
        for c in &self.cones {
            for w in c.pair(&nuc) {
                small = small.min(w.norm());
                big = big.max(w.norm());
            }
        }
        (small, big)
    }

    /// A real direction whose weights `m . nu` are as even as possible among
    /// fixed pseudo-random candidates, scaled so the largest has modulus 1.
    /// Small weights make single cone terms large and the sum cancel badly.
    pub fn direction(&self) -> Vec<f64> {
        let r = self.rank();
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        let mut best: Vec<f64> = (0..r).map(|i| ((i + 2) as f64).sqrt() * if i % 2 == 0 { 1.0 } else { -1.0 }).collect();
        let (lo, hi) = self.weight_range(&best);
        let mut best_ratio = lo / hi;
        for _ in 0..DIRECTION_CANDIDATES {
            let nu: Vec<f64> = (0..r).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let (lo, hi) = self.weight_range(&nu);
            if hi > 0.0 && lo / hi > best_ratio {
                best_ratio = lo / hi;
                best = nu;
            }
        }
        let (_, hi) = self.weight_range(&best);
        best.iter().map(|x| x / hi).collect()
    }

    /// Value at `nu = 0` as the mean of `rho` over `r e^{2 pi i k / N} nu_0`.
    pub fn rho_at_zero(&self, tau: C, z: C) -> Result<C> {
        self.circle_mean(tau, z, LIMIT_RADIUS, LIMIT_POINTS)
    }

    pub fn circle_mean(&self, tau: C, z: C, radius: f64, n: usize) -> Result<C> {
        let dir = self.direction();
        let mut acc = C::new(0.0, 0.0);
        for k in 0..n {
            let s = e2pi(C::new(k as f64 / n as f64 + 0.5 / n as f64, 0.0)) * radius;
            let nu: Vec<C> = dir.iter().map(|&x| s * x).collect();
            acc += self.rho(tau, z, &nu)?;
        }
        Ok(acc / n as f64)
    }
}

pub fn rho_cy_numeric(fan: &Fan, tau: C, z: C, nu: &[C]) -> Result<C> {
    CyTheta::new(fan)?.rho(tau, z, nu)
}

/// `Ell = y^{-d/2} body` at `y = e^{2 pi i z}`, `q = e^{2 pi i tau}`.
pub fn ell_value(g: &Genus, tau: C, z: C) -> C {
    eval_series(&g.body, tau, z) * e2pi(-z * (g.d as f64 / 2.0))
}

/// Closed form at `nu -> 0` against the exact series.
pub fn limit_check(fan: &Fan, g: &Genus, tau: C, z: C, tol: f64) -> Result<Report> {
    let th = CyTheta::new(fan)?;
    if th.dim() != g.d {
        return Err(Error::Validation(format!("dimension {} against a genus of dimension {}", th.dim(), g.d)));
    }
    let a = th.rho_at_zero(tau, z)?;
    let b = ell_value(g, tau, z);
    let err = (a - b).norm();
    let detail = json!({
        "label": g.label,
        "d": g.d,
        "tau": [tau.re, tau.im],
        "z": [z.re, z.im],
        "closed_form": [a.re, a.im],
        "series": [b.re, b.im],
        "series_q_order": g.q_order(),
        "abs_error": err,
        "tol": tol,
    });
    Ok(Report::new("theta-closed-form", err <= tol, detail))
}

/// One sample of the transformation laws.
#[derive(Clone, Debug)]
pub struct JacobiSample {
    pub tau: C,
    pub z: C,
    pub nu: Vec<C>,
}

fn crand(rng: &mut ChaCha8Rng, re: (f64, f64), im: (f64, f64)) -> C {
    C::new(rng.gen_range(re.0..re.1), rng.gen_range(im.0..im.1))
}

pub fn jacobi_samples(rank: usize, count: usize, seed: u64) -> Vec<JacobiSample> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let tau = crand(&mut rng, (-0.3, 0.3), (0.9, 1.3));
            let z = crand(&mut rng, (0.05, 0.35), (-0.1, 0.1));
            let nu = (0..rank).map(|_| crand(&mut rng, (-0.1, 0.1), (-0.05, 0.05))).collect();
            JacobiSample { tau, z, nu }
        })
        .collect()
}

/// Worst relative errors of the three laws at one sample:
/// `rho(z + 1) = (-1)^d rho`,
/// `rho(z + tau) = (-1)^d e^{-pi i d tau - 2 pi i d z - 2 pi i deg.nu} rho`,
/// `rho(z/tau, -1/tau, nu/tau) = e^{pi i d z^2/tau + 2 pi i z deg.nu / tau} rho`.
/// With `control` the `deg.nu` factor is dropped from the last law.
fn law_errors(th: &CyTheta, s: &JacobiSample, control: bool) -> Result<[f64; 3]> {
    let d = th.dim() as f64;
    let sign = if th.dim() % 2 == 0 { 1.0 } else { -1.0 };
    let pi_i = C::new(0.0, std::f64::consts::PI);
    let deg_nu = *s.nu.last().unwrap();
    let base = th.rho(s.tau, s.z, &s.nu)?;
    let rel = |a: C, b: C| (a - b).norm() / b.norm().max(1e-300);

    let shift1 = th.rho(s.tau, s.z + 1.0, &s.nu)?;
    let e1 = rel(shift1, base * sign);

    let shift_tau = th.rho(s.tau, s.z + s.tau, &s.nu)?;
    let f = (-pi_i * d * s.tau - pi_i * 2.0 * d * s.z - pi_i * 2.0 * deg_nu).exp() * sign;
    let e2 = rel(shift_tau, base * f);

    let t2 = -s.tau.inv();
    let nu2: Vec<C> = s.nu.iter().map(|x| x / s.tau).collect();
    let lhs = th.rho(t2, s.z / s.tau, &nu2)?;
    let mut g = pi_i * d * s.z * s.z / s.tau;
    if !control {
        g += pi_i * 2.0 * s.z * deg_nu / s.tau;
    }
    let e3 = rel(lhs, base * g.exp());
    Ok([e1, e2, e3])
}

/// The transformation laws of `rho` at `count` seeded samples. The report
/// passes when every relative error is at most `tol`.
pub fn jacobi_numeric_check(fan: &Fan, count: usize, seed: u64, tol: f64, control: bool) -> Result<Report> {
    let th = CyTheta::new(fan)?;
    let mut worst = [0.0f64; 3];
    let mut samples = Vec::new();
    for s in jacobi_samples(th.rank(), count, seed) {
        let e = law_errors(&th, &s, control)?;
        for k in 0..3 {
            worst[k] = worst[k].max(e[k]);
        }
        samples.push(json!({
            "tau": [s.tau.re, s.tau.im],
            "z": [s.z.re, s.z.im],
            "errors": e,
        }));
    }
    let passed = worst.iter().all(|&e| e <= tol);
    let detail = json!({
        "d": th.dim(),
        "seed": seed,
        "samples": samples,
        "worst": {"z+1": worst[0], "z+tau": worst[1], "S": worst[2]},
        "control_without_deg_nu": control,
        "tol": tol,
    });
    Ok(Report::new("jacobi-law", passed, detail))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypersurface::{ell_cy, fermat_pair, CYFamily, CyMethod};
    use crate::lattice_sum::EnumerationPlan;

    fn family(n: usize, q: i64) -> CYFamily {
        CYFamily::new(fermat_pair(n).unwrap(), EnumerationPlan::new(q), format!("fermat {}", n)).unwrap()
    }

    #[test]
    fn k3_limit_matches_lattice_sum() {
        let mut fam = family(3, 2);
        fam.plan.m_bound = 8;
        fam.method = CyMethod::LatticeSum;
        let g = ell_cy(&fam).unwrap();
        let r = limit_check(&fam.fan().unwrap(), &g, C::new(0.0, 1.2), C::new(0.23, 0.04), 1e-5).unwrap();
        assert!(r.passed(), "{:?}", r);
    }

    #[test]
    fn quintic_and_mirror_limit() {
        let fam = family(4, 4);
        for f in [fam.clone(), crate::hypersurface::mirror(&fam)] {
            let g = ell_cy(&f).unwrap();
            let r = limit_check(&f.fan().unwrap(), &g, C::new(0.0, 1.2), C::new(0.23, 0.04), 1e-5).unwrap();
            assert!(r.passed(), "{:?}", r);
        }
    }

    #[test]
    fn laws_and_control() {
        let fam = family(3, 1);
        let fan = fam.fan().unwrap();
        let r = jacobi_numeric_check(&fan, 5, 7, 1e-7, false).unwrap();
        assert!(r.passed(), "{}", r.to_text());
        let c = jacobi_numeric_check(&fan, 5, 7, 1e-7, true).unwrap();
        assert!(!c.passed());
    }
}
