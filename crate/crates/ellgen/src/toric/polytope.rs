//! Lattice polytopes, polar duality and reflexive pairs.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::fan::{load_fan, Fan};
use num_traits::Signed;

use super::linalg::{dot, is_integral, normal, rank, rat_to_i64, solve_left, solve_right};
use crate::error::{Error, Result};

/// Polytope file format.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct PolytopeFile {
    pub rank: usize,
    pub vertices: Vec<Vec<i64>>,
}

/// Inequality `normal . x >= offset`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Facet {
    pub normal: Vec<i64>,
    pub offset: i64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Polytope {
    pub rank: usize,
    pub vertices: Vec<Vec<i64>>,
    pub facets: Vec<Facet>,
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Affine dimension of a point set.
pub fn affine_dim(points: &[&Vec<i64>]) -> isize {
    if points.is_empty() {
        return -1;
    }
    let base = points[0];
    let diffs: Vec<Vec<i64>> = points[1..].iter().map(|p| p.iter().zip(base).map(|(a, b)| a - b).collect()).collect();
    rank(&diffs) as isize
}

impl Polytope {
    /// Full-dimensional polytope from its vertices; facets found by brute force.
    pub fn from_vertices(rank_: usize, vertices: Vec<Vec<i64>>) -> Result<Polytope> {
        let mut vs: Vec<Vec<i64>> = vertices;
        vs.sort();
        vs.dedup();
        if vs.iter().any(|v| v.len() != rank_) {
            return Err(Error::Validation("vertex of wrong length".into()));
        }
        let refs: Vec<&Vec<i64>> = vs.iter().collect();
        if affine_dim(&refs) != rank_ as isize {
            return Err(Error::Validation("polytope is not full-dimensional".into()));
        }
        let mut facets = BTreeSet::new();
        for comb in combinations(vs.len(), rank_) {
            let base = &vs[comb[0]];
            let diffs: Vec<Vec<i64>> =
                comb[1..].iter().map(|&i| vs[i].iter().zip(base).map(|(a, b)| a - b).collect()).collect();
            let Some(mut n) = normal(&diffs) else { continue };
            let mut off = dot(&n, base);
            let vals: Vec<i64> = vs.iter().map(|v| dot(&n, v)).collect();
            if vals.iter().all(|&x| x >= off) {
            } else if vals.iter().all(|&x| x <= off) {
                n = n.iter().map(|x| -x).collect();
                off = -off;
            } else {
                continue;
            }
            facets.insert(Facet { normal: n, offset: off });
        }
        Ok(Polytope { rank: rank_, vertices: vs, facets: facets.into_iter().collect() })
    }

    pub fn from_file(f: &PolytopeFile) -> Result<Polytope> {
        Polytope::from_vertices(f.rank, f.vertices.clone())
    }

    pub fn to_file(&self) -> PolytopeFile {
        PolytopeFile { rank: self.rank, vertices: self.vertices.clone() }
    }

    pub fn contains(&self, p: &[i64], h: i64) -> bool {
        self.facets.iter().all(|f| dot(&f.normal, p) >= h * f.offset)
    }

    /// Lattice points of `h` times the polytope, in lexicographic order.
    pub fn lattice_points(&self, h: i64) -> Vec<Vec<i64>> {
        if h == 0 {
            return vec![vec![0; self.rank]];
        }
        let lo: Vec<i64> = (0..self.rank).map(|i| self.vertices.iter().map(|v| v[i]).min().unwrap() * h).collect();
        let hi: Vec<i64> = (0..self.rank).map(|i| self.vertices.iter().map(|v| v[i]).max().unwrap() * h).collect();
        let mut out = Vec::new();
        let mut p = lo.clone();
        loop {
            if self.contains(&p, h) {
                out.push(p.clone());
            }
            let mut i = self.rank;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                if p[i] < hi[i] {
                    p[i] += 1;
                    break;
                }
                p[i] = lo[i];
            }
        }
    }

    /// Vertices of `{ n : v . n >= -1 for all vertices v }`.
    pub fn polar_vertices(&self) -> Result<Vec<Vec<i64>>> {
        for f in &self.facets {
            if f.offset >= 0 {
                return Err(Error::NotReflexive("origin is not an interior point".into()));
            }
        }
        let mut found: BTreeSet<Vec<BigRational>> = BTreeSet::new();
        for comb in combinations(self.vertices.len(), self.rank) {
            let a: Vec<Vec<i64>> = comb.iter().map(|&i| self.vertices[i].clone()).collect();
            let Some(x) = solve_right(&a, &vec![-1; self.rank]) else { continue };
            let ok = self.vertices.iter().all(|v| {
                let s = v.iter().zip(&x).fold(BigRational::from_integer(0.into()), |s, (a, b)| s + b * BigRational::from_integer((*a).into()));
                s >= BigRational::from_integer((-1).into())
            });
            if ok {
                found.insert(x);
            }
        }
        let mut out = Vec::new();
        for x in found {
            if !is_integral(&x) {
                return Err(Error::NotReflexive(format!("dual vertex {:?} is not integral", x)));
            }
            out.push(rat_to_i64(&x));
        }
        Ok(out)
    }

    /// Lattice points on the facet with outer-dual vertex `u` (`u . p = -1`).
    pub fn interior_points(&self) -> Vec<Vec<i64>> {
        self.lattice_points(1)
            .into_iter()
            .filter(|p| self.facets.iter().all(|f| dot(&f.normal, p) > f.offset))
            .collect()
    }
}

/// Dual reflexive polytopes `Delta` in `M_1` and `Delta*` in `N_1`.
/// `M = M_1 + Z deg` with `deg = (0, .., 0, 1)` and the same for `N`.
#[derive(Clone, Debug, PartialEq)]
pub struct ReflexivePair {
    pub delta: Polytope,
    pub delta_star: Polytope,
}

impl ReflexivePair {
    /// Rank of `M_1`; the hypersurface has dimension `rank - 1`.
    pub fn rank(&self) -> usize {
        self.delta.rank
    }

    pub fn mirror(&self) -> ReflexivePair {
        ReflexivePair { delta: self.delta_star.clone(), delta_star: self.delta.clone() }
    }

    /// `deg` in `M` (also `deg*` in `N`).
    pub fn deg(&self) -> Vec<i64> {
        let mut v = vec![0; self.rank() + 1];
        v[self.rank()] = 1;
        v
    }
}

/// Reflexive pair from the vertices of `Delta`.
pub fn dual_polytope(delta_vertices: Vec<Vec<i64>>) -> Result<ReflexivePair> {
    let rank_ = delta_vertices.first().map(|v| v.len()).ok_or_else(|| Error::Validation("no vertices".into()))?;
    let delta = Polytope::from_vertices(rank_, delta_vertices)?;
    let star = Polytope::from_vertices(rank_, delta.polar_vertices()?)?;
    for f in delta.facets.iter().chain(&star.facets) {
        if f.offset != -1 {
            return Err(Error::NotReflexive(format!("facet {:?} is not at distance one", f.normal)));
        }
    }
    let back = star.polar_vertices()?;
    if back != delta.vertices {
        return Err(Error::NotReflexive("polar of the polar differs".into()));
    }
    for p in [&delta, &star] {
        let inner = p.interior_points();
        if inner != vec![vec![0; rank_]] {
            return Err(Error::NotReflexive(format!("interior lattice points {:?}", inner)));
        }
    }
    Ok(ReflexivePair { delta, delta_star: star })
}

/// Point insertion order for the pulling triangulation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InsertionOrder {
    Lex,
    ReverseLex,
}

/// Simplicial complete fan on `N_1` refining the face fan of `Delta*` with every
/// nonzero lattice point of `Delta*` as a ray. The faces are first pulled at their
/// earliest point, then the unused points are inserted by stellar subdivision.
pub fn subdivide_simplicial(pair: &ReflexivePair, order: InsertionOrder) -> Result<Fan> {
    let star = &pair.delta_star;
    let r = star.rank;
    let mut points: Vec<Vec<i64>> = star.lattice_points(1).into_iter().filter(|p| p.iter().any(|&x| x != 0)).collect();
    if order == InsertionOrder::ReverseLex {
        points.reverse();
    }
    let facet_sets: Vec<Vec<usize>> = star
        .facets
        .iter()
        .map(|f| (0..points.len()).filter(|&i| dot(&f.normal, &points[i]) == f.offset).collect())
        .collect();
    let mut memo: BTreeMap<Vec<usize>, Vec<Vec<usize>>> = BTreeMap::new();
    let mut simplices = Vec::new();
    for fs in &facet_sets {
        simplices.extend(pull(fs, r as isize - 1, &points, &facet_sets, &mut memo));
    }
    // stellar insertion of the remaining points, in order
    for p in 0..points.len() {
        if simplices.iter().any(|s| s.contains(&p)) {
            continue;
        }
        let mut tau: Option<Vec<usize>> = None;
        for s in &simplices {
            let a: Vec<Vec<i64>> = s.iter().map(|&i| points[i].clone()).collect();
            let Some(lam) = solve_left(&a, &points[p]) else { continue };
            if lam.iter().all(|x| !x.is_negative()) {
                tau = Some(s.iter().zip(&lam).filter(|(_, x)| x.is_positive()).map(|(&i, _)| i).collect());
                break;
            }
        }
        let tau = tau.expect("boundary point outside every cone");
        let mut next = Vec::new();
        for s in simplices {
            if tau.iter().all(|t| s.contains(t)) {
                for t in &tau {
                    let mut c: Vec<usize> = s.iter().copied().filter(|i| i != t).collect();
                    c.push(p);
                    c.sort();
                    next.push(c);
                }
            } else {
                next.push(s);
            }
        }
        simplices = next;
    }
    let used: BTreeSet<usize> = simplices.iter().flatten().copied().collect();
    let mut used: Vec<usize> = used.into_iter().collect();
    used.sort_by(|a, b| points[*a].cmp(&points[*b]));
    let index: BTreeMap<usize, usize> = used.iter().enumerate().map(|(k, &i)| (i, k)).collect();
    let rays: Vec<Vec<i64>> = used.iter().map(|&i| points[i].clone()).collect();
    let mut cones: Vec<Vec<usize>> = simplices
        .into_iter()
        .map(|s| {
            let mut c: Vec<usize> = s.iter().map(|i| index[i]).collect();
            c.sort();
            c
        })
        .collect();
    cones.sort();
    cones.dedup();
    load_fan(r, rays, cones)
}

fn pull(
    face: &[usize],
    dim: isize,
    points: &[Vec<i64>],
    facet_sets: &[Vec<usize>],
    memo: &mut BTreeMap<Vec<usize>, Vec<Vec<usize>>>,
) -> Vec<Vec<usize>> {
    if let Some(v) = memo.get(face) {
        return v.clone();
    }
    let out = if face.len() as isize == dim + 1 {
        vec![face.to_vec()]
    } else {
        let v = *face.iter().min().unwrap();
        let mut subfaces: BTreeSet<Vec<usize>> = BTreeSet::new();
        for fs in facet_sets {
            let inter: Vec<usize> = face.iter().copied().filter(|i| fs.contains(i)).collect();
            if inter.len() == face.len() {
                continue;
            }
            let refs: Vec<&Vec<i64>> = inter.iter().map(|&i| &points[i]).collect();
            if affine_dim(&refs) == dim - 1 {
                subfaces.insert(inter);
            }
        }
        let mut out = Vec::new();
        for g in subfaces {
            if g.contains(&v) {
                continue;
            }
            for mut s in pull(&g, dim - 1, points, facet_sets, memo) {
                s.push(v);
                s.sort();
                out.push(s);
            }
        }
        out
    };
    memo.insert(face.to_vec(), out.clone());
    out
}
