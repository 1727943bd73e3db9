//! Explicit approximate radius formulas and their dissolution times.
//!
//! All formulas start from `R(0) = 1` with slope `-2 eps` in `sqrt(t)`:
//!
//! * quasi-steady state: `sqrt(1 - 2 eps t)`
//! * small time: `1 - 2 eps sqrt(t)`
//! * intuitive: `sqrt(1 - 2 eps t) - 2 eps sqrt(t)`
//! * fixed-mapping (`duda`): `sqrt(1 - 2 eps (2 sqrt(t) + t))`
//! * blended: `sqrt(a D + (1 - a) I^2)` with `D` the fixed-mapping radicand,
//!   `I` the intuitive radius and `a = alpha(eps)` a fitted weight.

use serde::{Deserialize, Serialize};

use crate::bisect::bisect;
use crate::curve::MethodId;
use crate::error::{finite, Error, Result};
use crate::exact;

/// A radius together with a flag telling whether it was clamped at zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Clamped {
    pub radius: f64,
    /// The underlying expression went non-positive and the radius was set to 0.
    pub clamped: bool,
}

impl Clamped {
    fn from_value(value: f64) -> Self {
        if value > 0.0 {
            Clamped {
                radius: value,
                clamped: false,
            }
        } else {
            Clamped {
                radius: 0.0,
                clamped: true,
            }
        }
    }

    fn from_radicand(value: f64) -> Self {
        let c = Self::from_value(value);
        Clamped {
            radius: c.radius.sqrt(),
            ..c
        }
    }
}

fn check_time(t: f64) -> Result<f64> {
    finite("t", t)?;
    if t < 0.0 {
        return Err(Error::InvalidParameter {
            name: "t",
            value: t,
            reason: "must be non-negative",
        });
    }
    Ok(t)
}

fn check_nonzero(eps: f64) -> Result<f64> {
    finite("epsilon", eps)?;
    if eps == 0.0 {
        return Err(Error::EpsilonOutOfRange {
            epsilon: eps,
            valid: "eps != 0",
        });
    }
    Ok(eps)
}

fn guard_past(t: f64, t0: f64) -> Result<()> {
    if t > t0 * (1.0 + 1e-12) {
        Err(Error::PastDissolution { t, t0 })
    } else {
        Ok(())
    }
}

/// Quasi-steady-state dissolution time `1 / (2 eps)`.
pub fn qss_t0(eps: f64) -> Result<f64> {
    finite("epsilon", eps)?;
    if eps <= 0.0 {
        return Err(Error::NoDissolutionTime {
            method: MethodId::Qss,
            epsilon: eps,
        });
    }
    Ok(1.0 / (2.0 * eps))
}

pub fn qss_radius(eps: f64, t: f64) -> Result<f64> {
    finite("epsilon", eps)?;
    let t = check_time(t)?;
    if eps > 0.0 {
        guard_past(t, qss_t0(eps)?)?;
    }
    Ok((1.0 - 2.0 * eps * t).max(0.0).sqrt())
}

pub fn small_time_radius(eps: f64, t: f64) -> Result<Clamped> {
    finite("epsilon", eps)?;
    let t = check_time(t)?;
    Ok(Clamped::from_value(1.0 - 2.0 * eps * t.sqrt()))
}

/// Dissolution time of the small-time formula, `1 / (4 eps^2)`.
pub fn small_time_t0(eps: f64) -> Result<f64> {
    finite("epsilon", eps)?;
    if eps <= 0.0 {
        return Err(Error::NoDissolutionTime {
            method: MethodId::SmallTime,
            epsilon: eps,
        });
    }
    Ok(1.0 / (4.0 * eps * eps))
}

pub fn intuitive_t0(eps: f64) -> Result<f64> {
    finite("epsilon", eps)?;
    if eps <= 0.0 {
        return Err(Error::NoDissolutionTime {
            method: MethodId::Intuitive,
            epsilon: eps,
        });
    }
    Ok(1.0 / (2.0 * eps * (2.0 * eps + 1.0)))
}

fn intuitive_raw(eps: f64, t: f64) -> f64 {
    (1.0 - 2.0 * eps * t).max(0.0).sqrt() - 2.0 * eps * t.sqrt()
}

pub fn intuitive_radius(eps: f64, t: f64) -> Result<f64> {
    let eps = check_nonzero(eps)?;
    let t = check_time(t)?;
    if eps > 0.0 {
        let t0 = intuitive_t0(eps)?;
        guard_past(t, t0)?;
        if t >= t0 {
            return Ok(0.0);
        }
    }
    Ok(intuitive_raw(eps, t).max(0.0))
}

pub fn duda_t0(eps: f64) -> Result<f64> {
    finite("epsilon", eps)?;
    if eps <= 0.0 {
        return Err(Error::NoDissolutionTime {
            method: MethodId::DudaVrentas,
            epsilon: eps,
        });
    }
    let root = (1.0 + 1.0 / (2.0 * eps)).sqrt() - 1.0;
    Ok(root * root)
}

fn duda_radicand(eps: f64, t: f64) -> f64 {
    1.0 - 2.0 * eps * (2.0 * t.sqrt() + t)
}

pub fn duda_radius(eps: f64, t: f64) -> Result<f64> {
    let eps = check_nonzero(eps)?;
    let t = check_time(t)?;
    if eps > 0.0 {
        guard_past(t, duda_t0(eps)?)?;
    }
    Ok(duda_radicand(eps, t).max(0.0).sqrt())
}

/// Fitted blending weight of the blended formula.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlendWeight {
    pub alpha: f64,
    /// Closed interval of `eps` covered by the fit branch that produced `alpha`.
    pub epsilon_domain: (f64, f64),
    /// `eps` was outside every fitted interval and the nearest branch was extrapolated.
    pub extrapolated: bool,
}

/// Range of `eps` covered by the fits.
pub const BLEND_DOMAIN: (f64, f64) = (-0.5, 0.5);

fn alpha_small_dissolution(eps: f64) -> f64 {
    0.781 * (1.0 - 1.935 / (1.0 + 1.05 * eps.powf(-0.4278)))
}

fn alpha_large_dissolution(eps: f64) -> f64 {
    let l = eps.log10();
    0.0193 * l * l - 0.2703 * l + 0.095
}

fn alpha_growth(eps: f64) -> f64 {
    0.5381 * (1.0 - 0.3 / (1.0 + eps.abs().powf(-0.6514)))
}

/// Value of `eps` where the two dissolution fits meet.
pub const ALPHA_SWITCH: f64 = 0.1;

/// Both dissolution fits evaluated at [`ALPHA_SWITCH`], lower branch first.
pub fn alpha_branch_limits() -> (f64, f64) {
    (alpha_small_dissolution(ALPHA_SWITCH), alpha_large_dissolution(ALPHA_SWITCH))
}

/// Blending weight for `-0.5 <= eps <= 0.5`, `eps != 0`.
pub fn alpha(eps: f64) -> Result<BlendWeight> {
    alpha_with(eps, false)
}

/// Like [`alpha`], but evaluates the nearest fit branch outside the fitted
/// domain when `extrapolate` is set.
pub fn alpha_with(eps: f64, extrapolate: bool) -> Result<BlendWeight> {
    let eps = check_nonzero(eps)?;
    let outside = eps < BLEND_DOMAIN.0 || eps > BLEND_DOMAIN.1;
    if outside && !extrapolate {
        return Err(Error::EpsilonOutOfRange {
            epsilon: eps,
            valid: "[-0.5, 0.5] excluding 0",
        });
    }
    let (alpha, epsilon_domain) = if eps < 0.0 {
        (alpha_growth(eps), (-0.5, 0.0))
    } else if eps < ALPHA_SWITCH {
        (alpha_small_dissolution(eps), (0.0, ALPHA_SWITCH))
    } else {
        (alpha_large_dissolution(eps), (ALPHA_SWITCH, BLEND_DOMAIN.1))
    };
    Ok(BlendWeight {
        alpha: alpha.clamp(0.0, 1.0),
        epsilon_domain,
        extrapolated: outside,
    })
}

fn blended_radicand(eps: f64, a: f64, t: f64) -> f64 {
    let i = intuitive_raw(eps, t);
    a * duda_radicand(eps, t) + (1.0 - a) * i * i
}

/// Blended dissolution time: first zero of the radicand.
pub fn blended_t0(eps: f64) -> Result<f64> {
    let w = alpha(eps)?;
    if eps < 0.0 {
        return Err(Error::NoDissolutionTime {
            method: MethodId::Blended,
            epsilon: eps,
        });
    }
    Ok(blended_t0_with(eps, w.alpha))
}

fn blended_t0_with(eps: f64, a: f64) -> f64 {
    // The radicand is 1 at t = 0 and negative at the intuitive dissolution
    // time, where its second term vanishes and the first is already negative.
    let upper = 1.0 / (2.0 * eps * (2.0 * eps + 1.0));
    // scan for the first sign change so that a later zero is never picked
    const SCAN: usize = 64;
    let mut lo = 0.0;
    let mut hi = upper;
    for k in 1..=SCAN {
        let t = upper * k as f64 / SCAN as f64;
        if blended_radicand(eps, a, t) <= 0.0 {
            hi = t;
            break;
        }
        lo = t;
    }
    let (lo, hi) = bisect(lo, hi, |t| blended_radicand(eps, a, t) > 0.0);
    0.5 * (lo + hi)
}

pub fn blended_radius(eps: f64, t: f64) -> Result<Clamped> {
    blended_radius_with(eps, t, false)
}

pub fn blended_radius_with(eps: f64, t: f64, extrapolate: bool) -> Result<Clamped> {
    let w = alpha_with(eps, extrapolate)?;
    let t = check_time(t)?;
    if eps > 0.0 && t >= blended_t0_with(eps, w.alpha) {
        return Ok(Clamped {
            radius: 0.0,
            clamped: true,
        });
    }
    Ok(Clamped::from_radicand(blended_radicand(eps, w.alpha, t)))
}

/// Time to complete dissolution predicted by `method`.
pub fn approx_t0(method: MethodId, eps: f64) -> Result<f64> {
    finite("epsilon", eps)?;
    if eps <= 0.0 {
        return Err(Error::NoDissolutionTime { method, epsilon: eps });
    }
    match method {
        MethodId::ExactQS => exact::time_to_dissolution(eps),
        MethodId::Qss => qss_t0(eps),
        MethodId::SmallTime => small_time_t0(eps),
        MethodId::Intuitive => intuitive_t0(eps),
        MethodId::DudaVrentas => duda_t0(eps),
        MethodId::Blended => blended_t0(eps),
        MethodId::OdeOracle | MethodId::PdeReference => {
            Err(Error::NoDissolutionTime { method, epsilon: eps })
        }
    }
}

/// Radius predicted by a closed-form method, reporting zero once the method's
/// own dissolution time has passed.
///
/// The numerical methods are not closed forms and are rejected.
pub fn evaluate(method: MethodId, eps: f64, t: f64) -> Result<f64> {
    finite("epsilon", eps)?;
    let t = check_time(t)?;
    let past = |t0: Result<f64>| -> bool { eps > 0.0 && t0.map(|t0| t >= t0).unwrap_or(false) };
    match method {
        MethodId::ExactQS => {
            if past(exact::time_to_dissolution(eps)) {
                Ok(0.0)
            } else {
                exact::radius_at(eps, t)
            }
        }
        _ if eps == 0.0 => Ok(1.0),
        MethodId::Qss => {
            if past(qss_t0(eps)) {
                Ok(0.0)
            } else {
                qss_radius(eps, t)
            }
        }
        MethodId::SmallTime => Ok(small_time_radius(eps, t)?.radius),
        MethodId::Intuitive => {
            if past(intuitive_t0(eps)) {
                Ok(0.0)
            } else {
                intuitive_radius(eps, t)
            }
        }
        MethodId::DudaVrentas => {
            if past(duda_t0(eps)) {
                Ok(0.0)
            } else {
                duda_radius(eps, t)
            }
        }
        MethodId::Blended => Ok(blended_radius(eps, t)?.radius),
        MethodId::OdeOracle | MethodId::PdeReference => Err(Error::InvalidConfig(format!(
            "`{method}` is a numerical method, not a closed form"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn qss_values() {
        assert_eq!(qss_t0(0.05).unwrap(), 10.0);
        assert_eq!(qss_radius(0.05, 10.0).unwrap(), 0.0);
        assert!(matches!(qss_radius(0.05, 10.1), Err(Error::PastDissolution { .. })));
        assert!(close(qss_radius(-0.01, 100.0).unwrap(), 3f64.sqrt(), 1e-15));
        for eps in [-0.3, 0.0, 0.2] {
            assert_eq!(qss_radius(eps, 0.0).unwrap(), 1.0);
        }
    }

    #[test]
    fn small_time_values() {
        assert!(close(small_time_radius(0.1, 0.25).unwrap().radius, 0.9, 1e-15));
        assert_eq!(small_time_radius(0.3, 0.0).unwrap().radius, 1.0);
        let c = small_time_radius(0.1, 100.0).unwrap();
        assert_eq!(c, Clamped { radius: 0.0, clamped: true });
        let exact = exact::radius_at(0.01, 0.01).unwrap();
        assert!((small_time_radius(0.01, 0.01).unwrap().radius - exact).abs() <= 5e-4);
    }

    #[test]
    fn intuitive_values() {
        assert!(close(intuitive_t0(0.1).unwrap(), 4.1667, 5e-5));
        assert!(close(intuitive_t0(0.5).unwrap(), 0.5, 1e-15));
        assert_eq!(intuitive_radius(0.1, 0.0).unwrap(), 1.0);
        let t0 = intuitive_t0(0.1).unwrap();
        assert!(intuitive_radius(0.1, t0).unwrap().abs() < 1e-12);
        assert!(intuitive_radius(0.1, 1.1 * t0).is_err());
        assert!(intuitive_radius(0.0, 1.0).is_err());
    }

    #[test]
    fn duda_values() {
        assert!(close(duda_radius(0.1, 1.83532).unwrap(), 0.30173, 1e-5));
        assert!(close(duda_t0(0.1).unwrap(), 2.10102, 1e-5));
        assert!(close(duda_t0(0.01).unwrap(), 37.717, 5e-4));
        assert!(close(duda_t0(1.0).unwrap(), 0.0505, 5e-5));
        assert!(close(duda_t0(0.001).unwrap(), 457.23, 5e-3));
        assert_eq!(duda_radius(0.2, 0.0).unwrap(), 1.0);
        assert!(duda_radius(0.1, 2.2).is_err());
    }

    #[test]
    fn alpha_branches() {
        let a = alpha(0.01).unwrap();
        assert!(close(a.alpha, 0.6038, 5e-4));
        assert_eq!(a.epsilon_domain, (0.0, 0.1));
        // both dissolution branches evaluated at their shared endpoint
        assert!((alpha_small_dissolution(0.1) - alpha_large_dissolution(0.1)).abs() <= 5e-4);
        let l = 0.5f64.log10();
        assert_eq!(alpha(0.5).unwrap().alpha, 0.0193 * l * l - 0.2703 * l + 0.095);
        assert!(alpha(-0.5).is_ok());
        assert!(matches!(alpha(0.6), Err(Error::EpsilonOutOfRange { .. })));
        assert!(matches!(alpha(-0.51), Err(Error::EpsilonOutOfRange { .. })));
        assert!(alpha(0.0).is_err());
        let x = alpha_with(0.8, true).unwrap();
        assert!(x.extrapolated);
        for k in 1..=100 {
            let e = 0.005 * k as f64;
            for eps in [e, -e] {
                let a = alpha(eps).unwrap().alpha;
                assert!((0.0..=1.0).contains(&a));
            }
        }
    }

    #[test]
    fn blended_lies_between_its_components() {
        for eps in [0.01, 0.3, -0.01, -0.4] {
            assert_eq!(blended_radius(eps, 0.0).unwrap().radius, 1.0);
        }
        let t = 100.0;
        let b = blended_radius(-0.01, t).unwrap().radius;
        let d = duda_radius(-0.01, t).unwrap();
        let i = intuitive_radius(-0.01, t).unwrap();
        assert!(d < b && b < i, "{d} {b} {i}");
        assert!(blended_radius(0.7, 1.0).is_err());
        assert!(blended_radius_with(0.7, 0.01, true).is_ok());
    }

    #[test]
    fn blended_dissolution_time_is_first_zero() {
        for eps in [0.001, 0.01, 0.1, 0.5] {
            let a = alpha(eps).unwrap().alpha;
            let t0 = blended_t0(eps).unwrap();
            assert!(blended_radicand(eps, a, t0 * (1.0 - 1e-9)) > 0.0);
            assert!(blended_radicand(eps, a, t0 * (1.0 + 1e-9)) <= 0.0);
            assert!(t0 > duda_t0(eps).unwrap() && t0 < intuitive_t0(eps).unwrap());
            let c = blended_radius(eps, t0).unwrap();
            assert!(c.clamped && c.radius == 0.0);
        }
        assert!(blended_t0(-0.1).is_err());
    }

    #[test]
    fn dispatcher_matches_table_entries() {
        assert!(close(approx_t0(MethodId::Qss, 0.001).unwrap(), 500.0, 1e-12));
        assert!(close(approx_t0(MethodId::Intuitive, 0.005).unwrap(), 99.010, 5e-4));
        assert!(close(approx_t0(MethodId::ExactQS, 0.5).unwrap(), 0.2984, 5e-5));
        assert!(approx_t0(MethodId::SmallTime, -0.1).is_err());
        assert!(approx_t0(MethodId::PdeReference, 0.1).is_err());
        assert!(close(approx_t0(MethodId::SmallTime, 0.1).unwrap(), 25.0, 1e-12));
    }

    #[test]
    fn slopes_in_sqrt_time() {
        let t = 1e-10;
        for eps in [0.01, 0.1, 0.4, -0.01, -0.3] {
            let slopes = [
                duda_radius(eps, t).unwrap(),
                small_time_radius(eps, t).unwrap().radius,
                intuitive_radius(eps, t).unwrap(),
                blended_radius(eps, t).unwrap().radius,
            ]
            .map(|r| (r - 1.0) / t.sqrt());
            for s in slopes {
                assert!(((s + 2.0 * eps) / (2.0 * eps)).abs() <= 1e-3, "eps={eps} slope={s}");
            }
        }
    }

    #[test]
    fn evaluate_clamps_past_each_method() {
        assert_eq!(evaluate(MethodId::DudaVrentas, 0.1, 2.5).unwrap(), 0.0);
        assert_eq!(evaluate(MethodId::ExactQS, 0.1, 3.0).unwrap(), 0.0);
        assert!(evaluate(MethodId::Qss, 0.1, 3.0).unwrap() > 0.0);
        assert_eq!(evaluate(MethodId::Intuitive, 0.0, 3.0).unwrap(), 1.0);
        assert!(evaluate(MethodId::OdeOracle, 0.1, 1.0).is_err());
    }
}
