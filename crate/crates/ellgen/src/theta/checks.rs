//! Reports for the theta and eta identities.

use num_complex::Complex;
use serde_json::json;

use crate::error::Result;
use crate::report::Report;
use crate::scalar::rint;
use crate::theta::numeric::theta;
use crate::theta::{eta_quotient, g_series, theta_reduced};

type C = Complex<f64>;

/// `theta(z/tau, -1/tau) = -i sqrt(tau/i) e^{pi i z^2/tau} theta(z, tau)`.
pub fn theta_s_check(tau: C, z: C, tol: f64) -> Report {
    let i = C::new(0.0, 1.0);
    let lhs = theta(-tau.inv(), z / tau);
    let rhs = -i * (tau / i).sqrt() * (i * std::f64::consts::PI * z * z / tau).exp() * theta(tau, z);
    let err = (lhs - rhs).norm();
    let detail = json!({
        "tau": [tau.re, tau.im],
        "z": [z.re, z.im],
        "lhs": [lhs.re, lhs.im],
        "rhs": [rhs.re, rhs.im],
        "abs_error": err,
        "tol": tol,
    });
    Report::new("theta-modular", err <= tol, detail)
}

/// Exact `theta(z + 1) = -theta(z)` and `theta(z + tau) = -q^{-1/2} y^{-1} theta(z)`
/// on the series to `q^order`.
pub fn theta_quasi_periodicity(order: i64) -> Result<Report> {
    let w = 2 * order + 1;
    // the substitution y -> y q costs w half-steps of q
    let body = theta_reduced(order + (w + 1) / 2).body.with_window(-w, w)?;
    let odd = body.coeffs().values().all(|c| c.terms().keys().all(|e| e.0 % 2 != 0));
    let lhs = body.subst_y_qshift(1)?;
    let rhs = body.shift(-1, -2).neg();
    let overlap = lhs.trunc_order().min(rhs.trunc_order());
    let diff = lhs.first_difference(&rhs);
    let detail = json!({
        "q_order": order,
        "verified_to_q": overlap,
        "z+1": if odd { "-theta" } else { "mismatch" },
        "z+tau": match diff {
            None => "-q^{-1/2} y^{-1} theta".to_string(),
            Some((q2, y2, _)) => format!("differs at q^{}/2 y^{}/2", q2, y2),
        },
    });
    Ok(Report::new("theta-quasi-periodicity", odd && diff.is_none() && overlap >= order, detail))
}

/// `G(-1, q)` against `eta(2 tau)^2 / eta(tau)^4` to `q^order`. The report
/// passes when `G(-1, q)` is exactly twice the quotient, and records whether
/// the quotient alone matches.
pub fn g_minus_one_check(order: i64) -> Result<Report> {
    let g = g_series(order).eval_y(-1)?;
    let eq = eta_quotient(order)?;
    let twice = g.sub(&eq.scale(&rint(2))).is_zero();
    let literal = g.first_difference(&eq);
    let detail = json!({
        "q_order": order,
        "ratio": if twice { "2" } else { "not constant" },
        "quotient_alone_matches": literal.is_none(),
        "g_minus_one_q0": g.coeff_qy(0, 0).to_string(),
        "quotient_q0": eq.coeff_qy(0, 0).to_string(),
    });
    Ok(Report::new("g-minus-one", twice, detail))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s_law() {
        assert!(theta_s_check(C::new(0.1, 1.3), C::new(0.17, 0.05), 1e-10).passed());
    }

    #[test]
    fn quasi_periodicity() {
        let r = theta_quasi_periodicity(10).unwrap();
        assert!(r.passed(), "{}", r.to_text());
    }

    #[test]
    fn g_minus_one() {
        let r = g_minus_one_check(20).unwrap();
        assert!(r.passed());
        assert_eq!(r.detail["quotient_alone_matches"], false);
    }
}
