//! The sum over `m in M` shared by the toric and the hypersurface formulas.
//!
//! For each `m` and each cone `C` with rays `r_i` the lattice points of `C`
//! contribute `sum_{b in Box(C)} y^{h(b)} q^{m.b} prod_i 1/(1 - y q^{m.r_i})`,
//! with the factors of exponent zero cancelled against `(1 - y)^rank`.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::series::dense::{h_power, Grid};
use crate::toric::linalg::{adjugate, det, dot};

/// How far to sum over `m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumerationPlan {
    pub q_order: i64,
    /// Output window of `y` exponents (cleared form); `None` picks a default.
    pub y_window: Option<(i64, i64)>,
    /// Last shell summed.
    pub m_bound: i64,
    /// Extra shells that must contribute nothing.
    pub stabilization_shells: i64,
}

impl EnumerationPlan {
    pub fn new(q_order: i64) -> Self {
        EnumerationPlan { q_order, y_window: None, m_bound: 3 * q_order, stabilization_shells: 2 }
    }

    pub fn validate(&self) -> Result<()> {
        if self.q_order < 0 || self.m_bound < 0 || self.stabilization_shells < 1 {
            return Err(Error::Domain(format!("bad enumeration plan {:?}", self)));
        }
        if let Some((lo, hi)) = self.y_window {
            if lo > hi {
                return Err(Error::Domain("empty y window".into()));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub(crate) struct SumFace {
    pub sign: i64,
    pub rays: Vec<usize>,
    /// Box elements with their `y` exponent.
    pub boxes: Vec<(Vec<i64>, i64)>,
}

#[derive(Clone, Debug)]
pub(crate) struct LatticeSum {
    /// Rank of `M`; the power of `G` in the formula.
    pub rank: usize,
    pub rays: Vec<Vec<i64>>,
    pub faces: Vec<SumFace>,
    /// Ray 0 is `deg*` and every term carries `y^{-k} q^k`, `k = m . deg*`.
    pub cy: bool,
}

/// Per-`m` result: the grid and the `q^0`-level `y` offset it was built around.
type Contribution = Grid;

impl LatticeSum {
    fn prefactor(&self, s: &[i64]) -> (i64, i64) {
        if self.cy {
            (s[0], -s[0])
        } else {
            (0, 0)
        }
    }

    /// `sum_C (-1)^codim sum_{n in C} ...` for one `m`, exact below `q^{q_max}`.
    /// Terms whose whole `y` reach misses `y_limits` are skipped.
    pub fn contribution(&self, m: &[i64], q_max: i64, y_limits: Option<(i64, i64)>) -> Option<Contribution> {
        let s: Vec<i64> = self.rays.iter().map(|r| dot(m, r)).collect();
        let (pq, py) = self.prefactor(&s);
        let r = self.rank as i64;
        let mut groups: BTreeMap<(u32, Vec<i64>), Vec<(i64, i64, i128)>> = BTreeMap::new();
        for f in &self.faces {
            let neg: i64 = f.rays.iter().map(|&i| (-s[i]).max(0)).sum();
            let nneg = f.rays.iter().filter(|&&i| s[i] < 0).count() as i64;
            let sign = if nneg % 2 == 0 { f.sign } else { -f.sign } as i128;
            let z = f.rays.iter().filter(|&&i| s[i] == 0).count() as i64;
            let e = r - z;
            let mut terms = Vec::new();
            for (b, h) in &f.boxes {
                let a = pq + dot(m, b) + neg;
                if a > q_max {
                    continue;
                }
                let y = py + h - nneg;
                if let Some((lo, hi)) = y_limits {
                    if y + e + (q_max - a) < lo || y - (q_max - a) > hi {
                        continue;
                    }
                }
                terms.push((a, y, sign));
            }
            if terms.is_empty() {
                continue;
            }
            let mut key: Vec<i64> = f.rays.iter().map(|&i| s[i]).filter(|&x| x != 0).collect();
            key.sort();
            groups.entry((e as u32, key)).or_default().extend(terms);
        }
        if groups.is_empty() {
            return None;
        }
        let mut total = Grid::zero(q_max, py - q_max - r - 1, py + q_max + 2 * r + 1);
        for ((e, key), terms) in groups {
            let mut g = Grid::zero(q_max, total.y_lo, total.y_hi);
            for (a, b, c) in terms {
                g.add(a, b, c);
            }
            g.mul_one_minus_y(e);
            for x in key {
                g.div_one_minus(x.signum(), x.abs());
            }
            total.add_grid(&g, 1);
        }
        (!total.is_zero()).then_some(total)
    }

    /// Nonzero per-`m` cone sums below `q^{q_order}`, in shell order, with the
    /// same stabilization check as `evaluate`. They still need `H^rank`.
    pub fn per_m(&self, shells: &[Vec<Vec<i64>>], plan: &EnumerationPlan) -> Result<Vec<(Vec<i64>, Grid)>> {
        let summed = (plan.m_bound + 1) as usize;
        let mut out = Vec::new();
        for (u, shell) in shells.iter().enumerate() {
            let parts: Vec<Option<Grid>> = shell.par_iter().map(|m| self.contribution(m, plan.q_order, None)).collect();
            for (m, p) in shell.iter().zip(parts) {
                if let Some(g) = p {
                    if u >= summed {
                        return Err(Error::StabilizationFailure(format!(
                            "m = {:?} in shell {} contributes below q^{}",
                            m, u, plan.q_order
                        )));
                    }
                    out.push((m.clone(), g));
                }
            }
        }
        Ok(out)
    }

    /// Sums the shells in order, checks the stabilization shells and multiplies
    /// by `H^rank`. Guarded sums keep only what can reach `out_window`; otherwise
    /// `out_window` just has to contain every per-`m` support.
    pub fn evaluate(
        &self,
        shells: &[Vec<Vec<i64>>],
        plan: &EnumerationPlan,
        out_window: (i64, i64),
        guarded: bool,
    ) -> Result<Grid> {
        let q = plan.q_order;
        let hp = h_power(q, self.rank as u32);
        // largest |y| of H^rank at or below each q order
        let mut reach = vec![0i64; (q + 1) as usize];
        for a in 0..=q {
            let mut m = 0;
            for b in hp.y_lo..=hp.y_hi {
                if hp.get(a, b) != 0 {
                    m = m.max(b.abs());
                }
            }
            reach[a as usize] = if a == 0 { m } else { m.max(reach[(a - 1) as usize]) };
        }
        let (wlo, whi) = out_window;
        let g = reach[q as usize];
        let mut acc = Grid::zero(q, wlo - g, whi + g);
        let keep = |a: i64, b: i64| -> bool {
            !guarded || (b >= wlo - reach[(q - a) as usize] && b <= whi + reach[(q - a) as usize])
        };
        let summed = (plan.m_bound + 1) as usize;
        let limits = guarded.then_some((acc.y_lo, acc.y_hi));
        for (u, shell) in shells.iter().enumerate() {
            let parts: Vec<Option<Grid>> = shell.par_iter().map(|m| self.contribution(m, q, limits)).collect();
            let mut shell_sum = Grid::zero(q, acc.y_lo, acc.y_hi);
            for p in parts.into_iter().flatten() {
                for a in 0..=q {
                    for b in p.y_lo.max(acc.y_lo)..=p.y_hi.min(acc.y_hi) {
                        let c = p.get(a, b);
                        if c != 0 && keep(a, b) {
                            shell_sum.add(a, b, c);
                        }
                    }
                }
                if !guarded {
                    if let Some((lo, hi)) = p.y_support() {
                        if lo < acc.y_lo || hi > acc.y_hi {
                            return Err(Error::InternalInconsistency("per-m support outside the grid".into()));
                        }
                    }
                }
            }
            if u < summed {
                acc.add_grid(&shell_sum, 1);
            } else if !shell_sum.is_zero() {
                return Err(Error::StabilizationFailure(format!(
                    "shell {} still contributes below q^{}; raise m_bound above {}",
                    u, q, plan.m_bound
                )));
            }
        }
        let mut out = if guarded { Grid::zero(q, wlo, whi) } else { Grid::zero(q, acc.y_lo - g, acc.y_hi + g) };
        acc.mul_into(&hp, &mut out);
        Ok(out)
    }
}

/// All `m` with `max_i |m . r_i|` in `0..=u_max`, bucketed by that value.
pub(crate) fn sup_shells(rays: &[Vec<i64>], basis: &[Vec<i64>], u_max: i64) -> Vec<Vec<Vec<i64>>> {
    let d = basis.len();
    let adj = adjugate(basis);
    let det = det(basis).abs();
    let bound: Vec<i64> = (0..d)
        .map(|j| {
            let s: i128 = (0..d).map(|i| adj[j][i].abs()).sum();
            ((s * u_max as i128 + det - 1) / det) as i64
        })
        .collect();
    let mut shells = vec![Vec::new(); (u_max + 1) as usize];
    for_box(&bound.iter().map(|&b| (-b, b)).collect::<Vec<_>>(), |m| {
        let u = rays.iter().map(|r| dot(m, r).abs()).max().unwrap_or(0);
        if u <= u_max {
            shells[u as usize].push(m.to_vec());
        }
    });
    shells
}

/// `m = (m1, k)` bucketed by `max(max_i m . r_i, k, -k)` for the rays `(v, 1)`
/// of a polytope whose polar has vertices `polar`.
pub(crate) fn sigma_shells(rays: &[Vec<i64>], polar: &[Vec<i64>], u_max: i64) -> Vec<Vec<Vec<i64>>> {
    let r = polar[0].len();
    let lo: Vec<i64> = (0..r).map(|i| polar.iter().map(|v| -v[i]).min().unwrap()).collect();
    let hi: Vec<i64> = (0..r).map(|i| polar.iter().map(|v| -v[i]).max().unwrap()).collect();
    let mut shells = vec![Vec::new(); (u_max + 1) as usize];
    for u in 0..=u_max {
        let mut found: Vec<Vec<i64>> = Vec::new();
        for k in -u..=u {
            let c = u - k;
            let ranges: Vec<(i64, i64)> = (0..r).map(|i| (c * lo[i], c * hi[i])).collect();
            for_box(&ranges, |m1| {
                let mut m = m1.to_vec();
                m.push(k);
                let top = rays.iter().map(|x| dot(&m, x)).max().unwrap_or(i64::MIN).max(k).max(-k);
                if top == u {
                    found.push(m);
                }
            });
        }
        found.sort();
        shells[u as usize] = found;
    }
    shells
}

fn for_box<F: FnMut(&[i64])>(ranges: &[(i64, i64)], mut f: F) {
    if ranges.iter().any(|(a, b)| a > b) {
        return;
    }
    let mut p: Vec<i64> = ranges.iter().map(|r| r.0).collect();
    loop {
        f(&p);
        let mut i = ranges.len();
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if p[i] < ranges[i].1 {
                p[i] += 1;
                break;
            }
            p[i] = ranges[i].0;
        }
    }
}
