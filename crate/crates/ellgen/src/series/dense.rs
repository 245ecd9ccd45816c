//! Dense integer grids `sum c[a][b] q^a y^b` with `0 <= a <= q_max` and a
//! fixed window of `y` exponents. Used by the lattice sums, where every
//! coefficient is an integer and the support is small.

use num_bigint::BigInt;
use num_rational::BigRational;

use super::laurent::LocalizedLaurent;
use super::qy::Series;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grid {
    pub q_max: i64,
    pub y_lo: i64,
    pub y_hi: i64,
    data: Vec<i128>,
}

impl Grid {
    pub fn zero(q_max: i64, y_lo: i64, y_hi: i64) -> Grid {
        let w = (y_hi - y_lo + 1).max(0) as usize;
        Grid { q_max, y_lo, y_hi, data: vec![0; (q_max + 1).max(0) as usize * w] }
    }

    fn width(&self) -> usize {
        (self.y_hi - self.y_lo + 1) as usize
    }

    fn idx(&self, a: i64, b: i64) -> usize {
        a as usize * self.width() + (b - self.y_lo) as usize
    }

    pub fn in_range(&self, a: i64, b: i64) -> bool {
        a >= 0 && a <= self.q_max && b >= self.y_lo && b <= self.y_hi
    }

    pub fn get(&self, a: i64, b: i64) -> i128 {
        if self.in_range(a, b) {
            self.data[self.idx(a, b)]
        } else {
            0
        }
    }

    /// Adds `c q^a y^b`; terms outside the grid are dropped.
    pub fn add(&mut self, a: i64, b: i64, c: i128) {
        if self.in_range(a, b) {
            let i = self.idx(a, b);
            self.data[i] += c;
        }
    }

    /// Numeric value at `(y, q)`.
    pub fn eval(&self, y: num_complex::Complex<f64>, q: num_complex::Complex<f64>) -> num_complex::Complex<f64> {
        let mut total = num_complex::Complex::new(0.0, 0.0);
        let mut qa = num_complex::Complex::new(1.0, 0.0);
        for a in 0..=self.q_max {
            let mut row = num_complex::Complex::new(0.0, 0.0);
            for b in self.y_lo..=self.y_hi {
                let c = self.get(a, b);
                if c != 0 {
                    row += y.powi(b as i32) * c as f64;
                }
            }
            total += row * qa;
            qa *= q;
        }
        total
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&c| c == 0)
    }

    /// Adds `sign * other`, dropping what falls outside.
    pub fn add_grid(&mut self, other: &Grid, sign: i128) {
        for a in 0..=other.q_max.min(self.q_max) {
            for b in other.y_lo.max(self.y_lo)..=other.y_hi.min(self.y_hi) {
                let c = other.get(a, b);
                if c != 0 {
                    self.add(a, b, sign * c);
                }
            }
        }
    }

    /// Multiplies by `(1 - y)^e` in place; the top rows must have room.
    pub fn mul_one_minus_y(&mut self, e: u32) {
        let w = self.width();
        for _ in 0..e {
            for a in 0..=self.q_max as usize {
                let row = &mut self.data[a * w..(a + 1) * w];
                for b in (1..w).rev() {
                    row[b] -= row[b - 1];
                }
            }
        }
    }

    /// Multiplies by `1 / (1 - y^c q^s)` with `s > 0` and `c = +-1`, in place.
    pub fn div_one_minus(&mut self, c: i64, s: i64) {
        debug_assert!(s > 0);
        let w = self.width() as i64;
        for a in s..=self.q_max {
            for b in 0..w {
                let src = b - c;
                if src < 0 || src >= w {
                    continue;
                }
                let v = self.data[((a - s) * w + src) as usize];
                if v != 0 {
                    self.data[(a * w + b) as usize] += v;
                }
            }
        }
    }

    /// `1 / (1 - y q^s)` expanded at `q = 0`, for `s != 0`, in place.
    pub fn mul_ray_factor(&mut self, s: i64) {
        if s > 0 {
            self.div_one_minus(1, s);
        } else {
            // -y^{-1} q^{|s|} / (1 - y^{-1} q^{|s|})
            self.shift_neg(-s, -1);
            self.div_one_minus(-1, -s);
        }
    }

    /// Multiplies by `-q^da y^db` in place (`da >= 0`).
    fn shift_neg(&mut self, da: i64, db: i64) {
        let mut out = Grid::zero(self.q_max, self.y_lo, self.y_hi);
        for a in 0..=self.q_max - da {
            for b in self.y_lo..=self.y_hi {
                let v = self.get(a, b);
                if v != 0 {
                    out.add(a + da, b + db, -v);
                }
            }
        }
        *self = out;
    }

    /// Truncated product, restricted to this grid's window.
    pub fn mul_into(&self, other: &Grid, out: &mut Grid) {
        for a1 in 0..=self.q_max {
            for b1 in self.y_lo..=self.y_hi {
                let c1 = self.get(a1, b1);
                if c1 == 0 {
                    continue;
                }
                for a2 in 0..=(out.q_max - a1).min(other.q_max) {
                    for b2 in other.y_lo..=other.y_hi {
                        let c2 = other.get(a2, b2);
                        if c2 != 0 {
                            out.add(a1 + a2, b1 + b2, c1 * c2);
                        }
                    }
                }
            }
        }
    }

    /// Smallest and largest `y` exponent with a nonzero entry.
    pub fn y_support(&self) -> Option<(i64, i64)> {
        let mut r: Option<(i64, i64)> = None;
        for a in 0..=self.q_max {
            for b in self.y_lo..=self.y_hi {
                if self.get(a, b) != 0 {
                    r = Some(match r {
                        None => (b, b),
                        Some((l, h)) => (l.min(b), h.max(b)),
                    });
                }
            }
        }
        r
    }

    pub fn to_series(&self) -> Series {
        let mut coeffs = Vec::new();
        for a in 0..=self.q_max {
            let terms: Vec<(i64, BigRational)> = (self.y_lo..=self.y_hi)
                .filter_map(|b| {
                    let c = self.get(a, b);
                    (c != 0).then(|| (2 * b, BigRational::from_integer(BigInt::from(c))))
                })
                .collect();
            if !terms.is_empty() {
                coeffs.push((2 * a, LocalizedLaurent::from_y_terms(terms)));
            }
        }
        Series::from_coeffs(coeffs, 2 * self.q_max)
    }

    /// Integer polynomial series as a grid; `None` if some coefficient is not
    /// an integral Laurent polynomial in whole powers.
    pub fn from_series(s: &Series, q_max: i64, y_lo: i64, y_hi: i64) -> Option<Grid> {
        let mut g = Grid::zero(q_max, y_lo, y_hi);
        for (q2, c) in s.coeffs() {
            if q2 % 2 != 0 || !c.is_polynomial() {
                return None;
            }
            if *q2 > 2 * q_max {
                continue;
            }
            for (e, v) in c.terms() {
                if e.0 % 2 != 0 || e.1 != 0 || !v.is_integer() {
                    return None;
                }
                let n: i128 = crate::scalar::to_i128(v)?;
                g.add(q2 / 2, e.0 / 2, n);
            }
        }
        Some(g)
    }
}

/// `H = prod_{n>=1} (1 - y q^n)(1 - y^{-1} q^n) / (1 - q^n)^2`, so that `G = (1 - y) H`.
pub fn h_grid(q_max: i64) -> Grid {
    let mut g = Grid::zero(q_max, -q_max, q_max);
    g.add(0, 0, 1);
    for n in 1..=q_max {
        let mut t = Grid::zero(q_max, -q_max, q_max);
        g.mul_into(&binom(q_max, n, 1), &mut t);
        let mut u = Grid::zero(q_max, -q_max, q_max);
        t.mul_into(&binom(q_max, n, -1), &mut u);
        u.div_one_minus(0, n);
        u.div_one_minus(0, n);
        g = u;
    }
    g
}

fn binom(q_max: i64, n: i64, c: i64) -> Grid {
    let mut g = Grid::zero(q_max, -1, 1);
    g.add(0, 0, 1);
    g.add(n, c, -1);
    g
}

/// `H^e`, kept on the window `[-e q_max, e q_max]`.
pub fn h_power(q_max: i64, e: u32) -> Grid {
    let h = h_grid(q_max);
    let r = e as i64 * q_max;
    let mut acc = Grid::zero(q_max, -r, r);
    acc.add(0, 0, 1);
    for _ in 0..e {
        let mut t = Grid::zero(q_max, -r, r);
        acc.mul_into(&h, &mut t);
        acc = t;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theta::h_series;

    #[test]
    fn h_matches_series() {
        let g = h_grid(6);
        let s = h_series(6);
        assert_eq!(g.to_series(), s);
    }

    #[test]
    fn ray_factors() {
        for s in [-3i64, -1, 1, 2] {
            let mut g = Grid::zero(8, -10, 10);
            g.add(0, 0, 1);
            g.mul_ray_factor(s);
            // (1 - y^c q^|s|) g is 1 for s > 0 and -y^{-1} q^|s| for s < 0
            let c = s.signum();
            let mut back = g.clone();
            for a in 0..=8 {
                for b in -10..=10 {
                    let v = g.get(a, b);
                    if v != 0 {
                        back.add(a + s.abs(), b + c, -v);
                    }
                }
            }
            let mut expect = Grid::zero(8, -10, 10);
            if s > 0 {
                expect.add(0, 0, 1);
            } else {
                expect.add(-s, -1, -1);
            }
            assert_eq!(back, expect);
        }
    }
}
