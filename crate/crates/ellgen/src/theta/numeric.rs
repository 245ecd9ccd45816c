//! Floating-point theta and eta via truncated products with tail bounds.

use num_complex::Complex;
use num_traits::{Float, FloatConst, ToPrimitive};

use crate::error::{Error, Result};
use crate::series::Series;

/// Evaluation point `(tau, z, nu)`.
#[derive(Clone, Debug)]
pub struct NumericPoint<T> {
    pub tau: Complex<T>,
    pub z: Complex<T>,
    pub nu: Vec<Complex<T>>,
}

impl<T: Float> NumericPoint<T> {
    pub fn new(tau: Complex<T>, z: Complex<T>, nu: Vec<Complex<T>>) -> Result<Self> {
        if tau.im <= T::zero() {
            return Err(Error::Domain("Im(tau) must be positive".into()));
        }
        Ok(NumericPoint { tau, z, nu })
    }
}

/// A value with an absolute error bound for the truncated tail.
#[derive(Clone, Copy, Debug)]
pub struct Approx<T> {
    pub value: Complex<T>,
    pub bound: T,
}

fn two_pi_i<T: Float + FloatConst>() -> Complex<T> {
    Complex::new(T::zero(), T::PI() + T::PI())
}

/// `e^{2 pi i x}`
pub fn e2pi<T: Float + FloatConst>(x: Complex<T>) -> Complex<T> {
    (two_pi_i::<T>() * x).exp()
}

fn cast<T: Float>(v: f64) -> T {
    T::from(v).unwrap()
}

/// Number of product factors so that the tail is below `tol`.
pub fn terms_for<T: Float + FloatConst>(tau: Complex<T>, tol: T) -> usize {
    let aq = e2pi(tau).norm();
    let mut l = 1usize;
    // after reduction |w| <= |q|^{-1/2}
    let w = T::one() + cast::<T>(2.0) / aq.sqrt();
    while l < 10_000 {
        let tail = aq.powi(l as i32 + 1) / (T::one() - aq) * w;
        if tail < tol {
            break;
        }
        l += 1;
    }
    l
}

/// `theta(z, tau) = q^{1/8} 2 sin(pi z) prod (1-q^l)(1-q^l w)(1-q^l/w)`.
pub fn theta_numeric<T: Float + FloatConst>(tau: Complex<T>, z: Complex<T>, terms: usize) -> Result<Approx<T>> {
    if tau.im <= T::zero() {
        return Err(Error::Domain("Im(tau) must be positive".into()));
    }
    // move z into the strip |Im z| <= Im(tau)/2 with the z -> z + tau law
    let n = (z.im / tau.im).round();
    let z0 = z - tau * n;
    let factor = {
        let sign = if n.to_i64().unwrap() % 2 == 0 { T::one() } else { -T::one() };
        let ex = two_pi_i::<T>() * (-(z0 * n)) - Complex::new(T::zero(), T::PI()) * tau * n * n;
        ex.exp() * sign
    };
    let q = e2pi(tau);
    let w = e2pi(z0);
    let winv = w.inv();
    let one = Complex::new(T::one(), T::zero());
    let mut prod = one;
    let mut ql = one;
    for _ in 0..terms {
        ql = ql * q;
        prod = prod * (one - ql) * (one - ql * w) * (one - ql * winv);
    }
    let pre = e2pi(tau / cast::<T>(8.0)) * (z0 * T::PI()).sin() * cast::<T>(2.0);
    let value = pre * prod;
    let aq = q.norm();
    let s = aq.powi(terms as i32 + 1) / (T::one() - aq) * (T::one() + w.norm() + winv.norm());
    let bound = value.norm() * (s.exp() - T::one());
    Ok(Approx { value: value * factor, bound: bound * factor.norm() })
}

/// Theta with the term count chosen for double precision.
pub fn theta<T: Float + FloatConst>(tau: Complex<T>, z: Complex<T>) -> Complex<T> {
    let l = terms_for(tau, T::epsilon() * cast::<T>(0.01));
    theta_numeric(tau, z, l).expect("Im(tau) > 0").value
}

/// `eta(tau) = q^{1/24} prod (1 - q^l)`.
pub fn eta_numeric<T: Float + FloatConst>(tau: Complex<T>, terms: usize) -> Result<Approx<T>> {
    if tau.im <= T::zero() {
        return Err(Error::Domain("Im(tau) must be positive".into()));
    }
    let q = e2pi(tau);
    let one = Complex::new(T::one(), T::zero());
    let mut prod = one;
    let mut ql = one;
    for _ in 0..terms {
        ql = ql * q;
        prod = prod * (one - ql);
    }
    let value = e2pi(tau / cast::<T>(24.0)) * prod;
    let aq = q.norm();
    let s = aq.powi(terms as i32 + 1) / (T::one() - aq);
    Ok(Approx { value, bound: value.norm() * (s.exp() - T::one()) })
}

/// `G(y, q)` from its product, with `y = e^{2 pi i z}`.
pub fn g_numeric<T: Float + FloatConst>(tau: Complex<T>, z: Complex<T>, terms: usize) -> Approx<T> {
    let q = e2pi(tau);
    let y = e2pi(z);
    let one = Complex::new(T::one(), T::zero());
    let mut prod = one - y;
    let mut ql = one;
    for _ in 0..terms {
        ql = ql * q;
        prod = prod * (one - y * ql) * (one - ql / y) / ((one - ql) * (one - ql));
    }
    let aq = q.norm();
    let s = cast::<T>(4.0) * aq.powi(terms as i32 + 1) / (T::one() - aq) * (T::one() + y.norm() + y.inv().norm());
    Approx { value: prod, bound: prod.norm() * (s.exp() - T::one()) }
}

/// Evaluate a truncated series at `y = e^{2 pi i z}`, `q = e^{2 pi i tau}`.
pub fn eval_series<T: Float + FloatConst>(s: &Series, tau: Complex<T>, z: Complex<T>) -> Complex<T> {
    let pi_i = Complex::new(T::zero(), T::PI());
    let mut acc = Complex::new(T::zero(), T::zero());
    for (q2, c) in s.coeffs() {
        let qf = (pi_i * tau * cast::<T>(*q2 as f64)).exp();
        for (e, v) in c.terms() {
            let yf = (pi_i * z * cast::<T>(e.0 as f64)).exp();
            acc = acc + qf * yf * cast::<T>(v.to_f64().unwrap());
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    type C = Complex<f64>;

    #[test]
    fn theta_vanishes_at_zero() {
        let t = theta_numeric(C::new(0.1, 1.1), C::new(0.0, 0.0), 30).unwrap();
        assert!(t.value.norm() < 1e-15);
    }

    #[test]
    fn theta_modular_law() {
        let tau = C::new(0.0, 1.3);
        let z = C::new(0.17, 0.05);
        let lhs = theta(-tau.inv(), z / tau);
        let i = C::new(0.0, 1.0);
        let rhs = -i * (tau / i).sqrt() * (i * std::f64::consts::PI * z * z / tau).exp() * theta(tau, z);
        assert!((lhs - rhs).norm() < 1e-10, "{} vs {}", lhs, rhs);
    }

    #[test]
    fn theta_reduction_consistent() {
        let tau = C::new(0.2, 0.9);
        let z = C::new(0.3, 1.7);
        let a = theta_numeric(tau, z, 40).unwrap().value;
        let b = -(-two_pi_i::<f64>() * (z - tau) - C::new(0.0, std::f64::consts::PI) * tau).exp()
            * theta_numeric(tau, z - tau, 40).unwrap().value;
        assert!((a - b).norm() < 1e-9 * a.norm().max(1.0));
    }
}
