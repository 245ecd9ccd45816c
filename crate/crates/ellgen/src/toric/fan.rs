//! Complete simplicial fans.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::boxes::{box_elements, BoxData};
use super::linalg::{det, gcd_vec, is_integral, rat_to_i64, solve_right};
use crate::error::{Error, Result};

/// Fan file format.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct FanFile {
    pub rank: usize,
    pub rays: Vec<Vec<i64>>,
    pub max_cones: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Fan {
    pub rank: usize,
    pub rays: Vec<Vec<i64>>,
    /// Sorted ray indices of each maximal cone.
    pub max_cones: Vec<Vec<usize>>,
    pub smooth: bool,
    pub gorenstein: bool,
    /// Per maximal cone, the integral `m_C` with `m_C . n_i = 1` on its rays.
    pub deg_data: Option<Vec<Vec<i64>>>,
}

/// A cone of the fan (possibly the zero cone) with one maximal cone containing it.
#[derive(Clone, Debug, PartialEq)]
pub struct Face {
    pub rays: Vec<usize>,
    pub max_cone: usize,
    /// `(-1)^{codim}`
    pub sign: i64,
    pub boxdata: BoxData,
}

impl Fan {
    pub fn from_file(f: &FanFile) -> Result<Fan> {
        load_fan(f.rank, f.rays.clone(), f.max_cones.clone())
    }

    pub fn to_file(&self) -> FanFile {
        FanFile { rank: self.rank, rays: self.rays.clone(), max_cones: self.max_cones.clone() }
    }

    pub fn cone_rays(&self, cone: &[usize]) -> Vec<Vec<i64>> {
        cone.iter().map(|&i| self.rays[i].clone()).collect()
    }

    /// Every face of every maximal cone, the zero cone included, each once.
    pub fn faces(&self) -> Result<Vec<Face>> {
        let mut seen: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        for (ci, cone) in self.max_cones.iter().enumerate() {
            let k = cone.len();
            for mask in 0u32..(1 << k) {
                let sub: Vec<usize> = (0..k).filter(|i| mask & (1 << i) != 0).map(|i| cone[i]).collect();
                seen.entry(sub).or_insert(ci);
            }
        }
        let mut out = Vec::new();
        for (rays, ci) in seen {
            let sign = if (self.rank - rays.len()) % 2 == 0 { 1 } else { -1 };
            let boxdata = if rays.is_empty() {
                BoxData {
                    rays: vec![],
                    group_order: 1,
                    elements: vec![vec![0; self.rank]],
                    coords: vec![vec![]],
                    dual_basis: None,
                }
            } else {
                box_elements(&self.cone_rays(&rays))?
            };
            out.push(Face { rays, max_cone: ci, sign, boxdata });
        }
        Ok(out)
    }

    /// Sum of `(-1)^{codim}` over all cones; 1 for a complete fan.
    pub fn euler_sign_sum(faces: &[Face]) -> i64 {
        faces.iter().map(|f| f.sign).sum()
    }

    /// `sum_C |Box(C)|` over maximal cones.
    pub fn stringy_euler(&self) -> Result<u64> {
        let mut s = 0;
        for c in &self.max_cones {
            s += det(&self.cone_rays(c)).unsigned_abs() as u64;
        }
        Ok(s)
    }

    /// Product fan on `N1 + N2`.
    pub fn product(&self, o: &Fan) -> Result<Fan> {
        let rank = self.rank + o.rank;
        let mut rays = Vec::new();
        for r in &self.rays {
            let mut v = r.clone();
            v.extend(vec![0; o.rank]);
            rays.push(v);
        }
        for r in &o.rays {
            let mut v = vec![0; self.rank];
            v.extend(r.iter().copied());
            rays.push(v);
        }
        let off = self.rays.len();
        let mut cones = Vec::new();
        for a in &self.max_cones {
            for b in &o.max_cones {
                let mut c = a.clone();
                c.extend(b.iter().map(|i| i + off));
                cones.push(c);
            }
        }
        load_fan(rank, rays, cones)
    }
}

/// Validate a simplicial fan and compute its flags.
pub fn load_fan(rank: usize, rays: Vec<Vec<i64>>, max_cones: Vec<Vec<usize>>) -> Result<Fan> {
    if rank == 0 {
        return Err(Error::Validation("rank must be positive".into()));
    }
    for r in &rays {
        if r.len() != rank {
            return Err(Error::Validation(format!("ray {:?} has wrong length", r)));
        }
        if gcd_vec(r) != 1 {
            return Err(Error::Validation(format!("ray {:?} is not primitive", r)));
        }
    }
    let mut cones = Vec::new();
    for c in &max_cones {
        if c.iter().any(|&i| i >= rays.len()) {
            return Err(Error::Validation(format!("cone {:?} refers to a missing ray", c)));
        }
        let mut c = c.clone();
        c.sort();
        c.dedup();
        if c.len() != rank {
            return Err(Error::Unsupported(format!("cone {:?} is not simplicial of full dimension", c)));
        }
        cones.push(c);
    }
    let mut smooth = true;
    let mut deg = Some(Vec::new());
    for c in &cones {
        let m: Vec<Vec<i64>> = c.iter().map(|&i| rays[i].clone()).collect();
        let d = det(&m);
        if d == 0 {
            return Err(Error::Unsupported(format!("cone {:?} has dependent rays", c)));
        }
        if d.abs() != 1 {
            smooth = false;
        }
        let x = solve_right(&m, &vec![1; rank]).unwrap();
        match (&mut deg, is_integral(&x)) {
            (Some(v), true) => v.push(rat_to_i64(&x)),
            _ => deg = None,
        }
    }
    let mut facets: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    for c in &cones {
        for skip in 0..rank {
            let f: Vec<usize> = c.iter().enumerate().filter(|(i, _)| *i != skip).map(|(_, &x)| x).collect();
            *facets.entry(f).or_insert(0) += 1;
        }
    }
    if let Some((f, n)) = facets.iter().find(|(_, n)| **n != 2) {
        return Err(Error::NotComplete(format!("facet {:?} lies in {} maximal cones", f, n)));
    }
    let unique: BTreeSet<&Vec<usize>> = cones.iter().collect();
    if unique.len() != cones.len() {
        return Err(Error::Validation("repeated maximal cone".into()));
    }
    Ok(Fan { rank, rays, max_cones: cones, smooth, gorenstein: deg.is_some(), deg_data: deg })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn p1_and_p2() {
        let p1 = load_fan(1, vec![vec![1], vec![-1]], vec![vec![0], vec![1]]).unwrap();
        assert!(p1.smooth && p1.gorenstein);
        let p2 = load_fan(2, vec![vec![1, 0], vec![0, 1], vec![-1, -1]], vec![vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap();
        assert!(p2.smooth);
        for (c, m) in p2.max_cones.iter().zip(p2.deg_data.as_ref().unwrap()) {
            for &i in c {
                assert_eq!(super::super::linalg::dot(m, &p2.rays[i]), 1);
            }
        }
        let faces = p2.faces().unwrap();
        assert_eq!(faces.len(), 7);
        assert_eq!(Fan::euler_sign_sum(&faces), 1);
    }

    #[test]
    fn singular_cone() {
        let f = load_fan(2, vec![vec![1, 1], vec![1, -1], vec![-1, 0]], vec![vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap();
        assert!(!f.smooth);
        assert!(f.gorenstein);
        assert_eq!(f.deg_data.as_ref().unwrap()[0], vec![1, 0]);
        assert_eq!(f.stringy_euler().unwrap(), 4);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(load_fan(1, vec![vec![2], vec![-1]], vec![vec![0], vec![1]]), Err(Error::Validation(_))));
        assert!(matches!(
            load_fan(2, vec![vec![1, 0], vec![0, 1], vec![-1, -1]], vec![vec![0, 1], vec![1, 2]]),
            Err(Error::NotComplete(_))
        ));
        assert!(matches!(
            load_fan(2, vec![vec![1, 0], vec![0, 1], vec![-1, 0]], vec![vec![0, 1, 2]]),
            Err(Error::Unsupported(_))
        ));
    }
}
