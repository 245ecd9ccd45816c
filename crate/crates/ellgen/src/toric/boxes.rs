//! Lattice points of half-open parallelepipeds of simplicial cones.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::linalg::{adjugate, det, rank};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct BoxData {
    /// Ray generators of the cone.
    pub rays: Vec<Vec<i64>>,
    /// `|det|` of the full-rank completion; the size of the box.
    pub group_order: u64,
    /// Lattice points `sum lambda_i n_i` with `0 <= lambda_i < 1`.
    pub elements: Vec<Vec<i64>>,
    /// `lambda * group_order` for each element, in ray order.
    pub coords: Vec<Vec<i64>>,
    /// Rational `m_i` with `m_i . n_j = delta_ij`; only for full-rank cones.
    pub dual_basis: Option<Vec<Vec<BigRational>>>,
}

impl BoxData {
    /// Sum of the ray coordinates of element `i`, as a fraction of the group order.
    pub fn coord_sum(&self, i: usize) -> i64 {
        self.coords[i].iter().sum()
    }
}

/// Box of a full-rank simplicial cone (rays as rows).
fn full_rank_box(rays: &[Vec<i64>]) -> (u64, Vec<Vec<i64>>) {
    let r = rays.len();
    let d = det(rays);
    let dd = d.unsigned_abs() as i128;
    let s = d.signum();
    let adj = adjugate(rays);
    // lambda = p adj / det, so e_k gives row k of adj
    let gens: Vec<Vec<i128>> =
        (0..r).map(|k| (0..r).map(|i| (s * adj[k][i]).rem_euclid(dd)).collect()).collect();
    let mut seen: BTreeSet<Vec<i128>> = BTreeSet::new();
    let zero = vec![0i128; r];
    seen.insert(zero.clone());
    let mut stack = vec![zero];
    while let Some(v) = stack.pop() {
        for g in &gens {
            let w: Vec<i128> = v.iter().zip(g).map(|(a, b)| (a + b).rem_euclid(dd)).collect();
            if seen.insert(w.clone()) {
                stack.push(w);
            }
        }
    }
    (dd as u64, seen.into_iter().map(|v| v.into_iter().map(|x| x as i64).collect()).collect())
}

fn transpose_adj_row(rays: &[Vec<i64>]) -> Vec<Vec<BigRational>> {
    let r = rays.len();
    let d = det(rays);
    let adj = adjugate(rays);
    // m_i = column i of (rays)^{-1} viewed with rays as rows: (A^{-1})_{k i}
    (0..r).map(|i| (0..r).map(|k| BigRational::new(BigInt::from(adj[k][i]), BigInt::from(d))).collect()).collect()
}

/// Box of a simplicial cone. Cones of lower dimension are completed with
/// coordinate vectors; the points with zero extra coordinates are the box.
pub fn box_elements(rays: &[Vec<i64>]) -> Result<BoxData> {
    let k = rays.len();
    if k == 0 {
        return Ok(BoxData { rays: vec![], group_order: 1, elements: vec![vec![]], coords: vec![vec![]], dual_basis: None });
    }
    let r = rays[0].len();
    if rank(rays) != k {
        return Err(Error::Validation("cone rays are linearly dependent".into()));
    }
    let mut full = rays.to_vec();
    for j in 0..r {
        if full.len() == r {
            break;
        }
        let mut e = vec![0i64; r];
        e[j] = 1;
        let mut trial = full.clone();
        trial.push(e);
        if rank(&trial) == trial.len() {
            full = trial;
        }
    }
    let (order, lam) = full_rank_box(&full);
    let mut elements = Vec::new();
    let mut coords = Vec::new();
    for l in lam {
        if l[k..].iter().any(|&x| x != 0) {
            continue;
        }
        let mut p = vec![0i128; r];
        for (i, ray) in rays.iter().enumerate() {
            for (c, x) in ray.iter().enumerate() {
                p[c] += l[i] as i128 * *x as i128;
            }
        }
        let p: Vec<i64> = p.into_iter().map(|x| (x / order as i128) as i64).collect();
        elements.push(p);
        coords.push(l[..k].to_vec());
    }
    let mut idx: Vec<usize> = (0..elements.len()).collect();
    idx.sort_by(|a, b| elements[*a].cmp(&elements[*b]));
    let elements: Vec<Vec<i64>> = idx.iter().map(|&i| elements[i].clone()).collect();
    let coords: Vec<Vec<i64>> = idx.iter().map(|&i| coords[i].clone()).collect();
    let group_order = elements.len() as u64;
    // coords are scaled by the completion's order; rescale to this cone's order
    let scale = order / group_order.max(1);
    let coords = coords.into_iter().map(|c| c.into_iter().map(|x| x / scale as i64).collect()).collect();
    let dual_basis = if k == r { Some(transpose_adj_row(rays)) } else { None };
    Ok(BoxData { rays: rays.to_vec(), group_order, elements, coords, dual_basis })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn unimodular_box() {
        let b = box_elements(&[vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(b.group_order, 1);
        assert_eq!(b.elements, vec![vec![0, 0]]);
    }

    #[test]
    fn order_two_box() {
        let b = box_elements(&[vec![1, 1], vec![1, -1]]).unwrap();
        assert_eq!(b.group_order, 2);
        assert_eq!(b.elements, vec![vec![0, 0], vec![1, 0]]);
        assert_eq!(b.coords[1], vec![1, 1]);
        let m = b.dual_basis.unwrap();
        assert_eq!(m, vec![vec![rat(1, 2), rat(1, 2)], vec![rat(1, 2), rat(-1, 2)]]);
    }

    #[test]
    fn lower_dimensional_cone() {
        // ray (2, 0) alone: box {0, (1, 0)}
        let b = box_elements(&[vec![2, 0]]).unwrap();
        assert_eq!(b.elements, vec![vec![0, 0], vec![1, 0]]);
        let b = box_elements(&[vec![1, 1, 1], vec![1, -1, 1]]).unwrap();
        assert_eq!(b.group_order, 2);
    }
}
