//! Exact quasi-stationary solution of the leading-order radius equation
//!
//! ```text
//! dR/dt = -eps (1/R + 1/sqrt(t)),   R(0) = 1.
//! ```
//!
//! With `tau = sqrt(t)` and `u = R / tau` the equation becomes homogeneous
//! and integrates to an implicit relation `t = t(p)`, `R = R(p, t)` in a
//! curve parameter `p`. The form of that relation depends on the regime:
//!
//! | regime        | parameter | lower bound             |
//! |---------------|-----------|-------------------------|
//! | `0 < eps < 2` | `u_hat`   | `sqrt(eps/(2-eps))`     |
//! | `eps < 0`     | `u_tilde` | `1` (exclusive)         |
//! | `eps = 2`     | `u`       | `0`                     |
//! | `eps > 2`     | `u_tilde` | `sqrt(eps/(eps-2))`     |
//!
//! In every regime `t(p)` is strictly decreasing, so radius-at-time queries
//! are answered by bisection on the parameter. Internally the branches are
//! evaluated in terms of the offset `s = p - lower_bound`, which keeps the
//! `R -> 0` end free of cancellation.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::bisect::bisect;
use crate::curve::{MethodId, RadiusCurve};
use crate::error::{finite, Error, Result};
use crate::model::{classify_regime, Regime};
use crate::special::erfc_clipped;

/// Queries below this time return the initial radius.
pub const TIME_ZERO: f64 = 1e-14;
/// Radii below this magnitude are reported as exactly zero.
pub const RADIUS_ZERO: f64 = 1e-13;
/// Default number of samples in a generated curve.
pub const DEFAULT_SAMPLES: usize = 256;

/// First positive-time sample of a curve, relative to its end time.
const FIRST_TIME_FRACTION: f64 = 1e-8;
/// Smallest positive parameter offset used near complete dissolution.
const OFFSET_FLOOR: f64 = 1e-6;

/// A point on the implicit solution curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParametricPoint {
    /// `u_hat`, `u_tilde` or `u` depending on the regime.
    pub parameter: f64,
    pub t: f64,
    pub radius: f64,
    pub regime: Regime,
}

#[derive(Debug, Clone, Copy)]
enum Branch {
    Dissolution { eps: f64, hat: f64 },
    Growth { eps: f64, tilde: f64 },
    Critical,
    /// `tilde_m1 = tilde - 1`, kept separately because it is tiny for large `eps`.
    Supercritical { eps: f64, tilde: f64, tilde_m1: f64 },
}

impl Branch {
    fn new(eps: f64) -> Result<Option<Branch>> {
        Ok(match classify_regime(eps)? {
            Regime::Static => None,
            Regime::Dissolution => Some(Branch::Dissolution {
                eps,
                hat: (eps / (2.0 - eps)).sqrt(),
            }),
            Regime::Growth => Some(Branch::Growth {
                eps,
                tilde: (-eps / (2.0 - eps)).sqrt(),
            }),
            Regime::Critical => Some(Branch::Critical),
            Regime::Supercritical => {
                let tilde = (eps / (eps - 2.0)).sqrt();
                Some(Branch::Supercritical {
                    eps,
                    tilde,
                    tilde_m1: 2.0 / (eps - 2.0) / (tilde + 1.0),
                })
            }
        })
    }

    fn regime(&self) -> Regime {
        match self {
            Branch::Dissolution { .. } => Regime::Dissolution,
            Branch::Growth { .. } => Regime::Growth,
            Branch::Critical => Regime::Critical,
            Branch::Supercritical { .. } => Regime::Supercritical,
        }
    }

    fn lower_bound(&self) -> f64 {
        match *self {
            Branch::Dissolution { hat, .. } => hat,
            Branch::Growth { .. } => 1.0,
            Branch::Critical => 0.0,
            Branch::Supercritical { tilde, .. } => tilde,
        }
    }

    /// Whether `s = 0` is part of the curve (complete dissolution).
    fn reaches_zero(&self) -> bool {
        !matches!(self, Branch::Growth { .. })
    }

    fn time(&self, s: f64) -> f64 {
        match *self {
            Branch::Dissolution { eps, hat } => {
                let u = hat + s;
                // 2 atan(u) - pi == -2 atan(1/u) for u > 0
                (-2.0 * hat * (1.0 / u).atan()).exp() / (eps * (2.0 - eps) * (1.0 + u * u))
            }
            Branch::Growth { eps, tilde } => {
                let w = s;
                (tilde * (2.0 / w).ln_1p()).exp() / (-eps * (2.0 - eps) * w * (w + 2.0))
            }
            Branch::Critical => {
                let v = s + 2.0;
                (-4.0 / v).exp() / (v * v)
            }
            Branch::Supercritical { eps, tilde, tilde_m1 } => {
                let um1 = tilde_m1 + s;
                (-tilde * (2.0 / um1).ln_1p()).exp() / (eps * (eps - 2.0) * um1 * (um1 + 2.0))
            }
        }
    }

    fn radius(&self, s: f64, t: f64) -> f64 {
        let r = match *self {
            Branch::Dissolution { eps, .. } => s * (2.0 - eps).sqrt() * (eps * t).sqrt(),
            Branch::Growth { eps, .. } => {
                ((1.0 + s) * (2.0 - eps).sqrt() + (-eps).sqrt()) * (-eps * t).sqrt()
            }
            Branch::Critical => s * t.sqrt(),
            Branch::Supercritical { eps, .. } => s * (eps - 2.0).sqrt() * (eps * t).sqrt(),
        };
        if r.abs() < RADIUS_ZERO {
            0.0
        } else {
            r
        }
    }

    fn point(&self, s: f64) -> ParametricPoint {
        let t = self.time(s);
        ParametricPoint {
            parameter: self.lower_bound() + s,
            t,
            radius: self.radius(s, t),
            regime: self.regime(),
        }
    }

    /// Parameter offset recovered from a `(t, R)` pair.
    fn offset_of(&self, t: f64, radius: f64) -> f64 {
        let u = radius / t.sqrt();
        match *self {
            Branch::Dissolution { eps, hat } => (u + eps) / (eps * (2.0 - eps)).sqrt() - hat,
            Branch::Growth { eps, .. } => {
                let k = (-eps * (2.0 - eps)).sqrt();
                (u + eps - k) / k
            }
            Branch::Critical => u,
            Branch::Supercritical { eps, tilde, .. } => {
                (u + eps) / (eps * (eps - 2.0)).sqrt() - tilde
            }
        }
    }

    fn dissolution_time(&self) -> Option<f64> {
        self.reaches_zero().then(|| self.time(0.0))
    }

    /// Offset at which the curve passes through time `t > 0`.
    fn offset_for_time(&self, t: f64) -> f64 {
        let mut hi = 1.0;
        while self.time(hi) > t {
            hi *= 2.0;
        }
        let lo = if self.reaches_zero() {
            0.0
        } else {
            let mut lo = 0.5 * hi;
            while self.time(lo) <= t {
                lo *= 0.5;
            }
            lo
        };
        let (lo, hi) = bisect(lo, hi, |s| self.time(s) > t);
        // pick the endpoint with the smaller time residual
        if (self.time(lo) - t).abs() <= (self.time(hi) - t).abs() {
            lo
        } else {
            hi
        }
    }
}

fn check_epsilon(eps: f64, ok: bool, valid: &'static str) -> Result<()> {
    finite("epsilon", eps)?;
    if ok {
        Ok(())
    } else {
        Err(Error::EpsilonOutOfRange { epsilon: eps, valid })
    }
}

fn check_parameter(value: f64, bound: f64, strict: bool) -> Result<f64> {
    finite("parameter", value)?;
    // a bound recomputed by the caller may differ from ours in the last ulp
    let slack = 4.0 * f64::EPSILON * bound.abs();
    let below = if strict {
        value <= bound
    } else {
        value < bound - slack
    };
    if below {
        return Err(Error::ParameterBelowBound { value, bound });
    }
    Ok((value - bound).max(0.0))
}

/// Point on the dissolution curve, `0 < eps < 2`, `u_hat >= sqrt(eps/(2-eps))`.
pub fn param_point_dissolution(eps: f64, u_hat: f64) -> Result<ParametricPoint> {
    check_epsilon(eps, eps > 0.0 && eps < 2.0, "(0, 2)")?;
    let branch = Branch::new(eps)?.expect("dissolution branch");
    let s = check_parameter(u_hat, branch.lower_bound(), false)?;
    Ok(ParametricPoint {
        parameter: u_hat,
        ..branch.point(s)
    })
}

/// Point on the growth curve, `eps < 0`, `u_tilde > 1`.
pub fn param_point_growth(eps: f64, u_tilde: f64) -> Result<ParametricPoint> {
    check_epsilon(eps, eps < 0.0, "(-inf, 0)")?;
    let branch = Branch::new(eps)?.expect("growth branch");
    finite("parameter", u_tilde)?;
    if u_tilde <= 1.0 {
        return Err(Error::ParameterBelowBound {
            value: u_tilde,
            bound: 1.0,
        });
    }
    Ok(ParametricPoint {
        parameter: u_tilde,
        ..branch.point(u_tilde - 1.0)
    })
}

/// Point on the curve above the critical value, `eps > 2`, `u_tilde >= sqrt(eps/(eps-2))`.
pub fn param_point_supercritical(eps: f64, u_tilde: f64) -> Result<ParametricPoint> {
    check_epsilon(eps, eps > 2.0, "(2, inf)")?;
    let branch = Branch::new(eps)?.expect("supercritical branch");
    let s = check_parameter(u_tilde, branch.lower_bound(), false)?;
    Ok(ParametricPoint {
        parameter: u_tilde,
        ..branch.point(s)
    })
}

/// Point on the `eps = 2` curve, `u >= 0`.
pub fn param_point_critical(u: f64) -> Result<ParametricPoint> {
    let s = check_parameter(u, 0.0, false)?;
    Ok(Branch::Critical.point(s))
}

/// Time to complete dissolution for `eps > 0`.
pub fn time_to_dissolution(eps: f64) -> Result<f64> {
    check_epsilon(eps, eps > 0.0, "(0, inf)")?;
    let branch = Branch::new(eps)?.expect("dissolving branch");
    Ok(branch.dissolution_time().expect("dissolving branch"))
}

/// Exact solution point at time `t`, found by bisection on the parameter.
pub fn point_at(eps: f64, t: f64) -> Result<ParametricPoint> {
    finite("t", t)?;
    if t < 0.0 {
        return Err(Error::InvalidParameter {
            name: "t",
            value: t,
            reason: "must be non-negative",
        });
    }
    let regime = classify_regime(eps)?;
    let Some(branch) = Branch::new(eps)? else {
        return Ok(ParametricPoint {
            parameter: f64::INFINITY,
            t,
            radius: 1.0,
            regime,
        });
    };
    if t < TIME_ZERO {
        return Ok(ParametricPoint {
            parameter: f64::INFINITY,
            t,
            radius: 1.0,
            regime,
        });
    }
    if let Some(t0) = branch.dissolution_time() {
        if t > t0 * (1.0 + 1e-12) {
            return Err(Error::PastDissolution { t, t0 });
        }
        if t >= t0 {
            return Ok(ParametricPoint {
                parameter: branch.lower_bound(),
                t,
                radius: 0.0,
                regime,
            });
        }
    }
    let s = branch.offset_for_time(t);
    Ok(ParametricPoint {
        parameter: branch.lower_bound() + s,
        t,
        radius: branch.radius(s, t),
        regime,
    })
}

/// Exact quasi-stationary radius at time `t`.
pub fn radius_at(eps: f64, t: f64) -> Result<f64> {
    Ok(point_at(eps, t)?.radius)
}

/// Relative time residual `|t(p(t, R)) - t| / max(1, t)` of a sample.
///
/// The parameter is recomputed from `(t, R)` through `u = R / sqrt(t)`, so a
/// small value certifies that the sample lies on the implicit curve.
pub fn implicit_residual(eps: f64, t: f64, radius: f64) -> Result<f64> {
    let Some(branch) = Branch::new(eps)? else {
        return Ok((radius - 1.0).abs());
    };
    if t < TIME_ZERO {
        return Ok((radius - 1.0).abs());
    }
    let s = branch.offset_of(t, radius).max(0.0);
    Ok((branch.time(s) - t).abs() / t.max(1.0))
}

/// Samples the exact solution on a grid that is geometric in the parameter offset.
///
/// The first sample is `(0, 1)`. For dissolving regimes the last sample is the
/// complete-dissolution point `(t0, 0)` unless `t_max` cuts the curve short;
/// growth and the static case need `t_max`.
pub fn exact_curve(eps: f64, n: usize, t_max: Option<f64>) -> Result<RadiusCurve> {
    if n < 2 {
        return Err(Error::TooFewSamples(n));
    }
    if let Some(tm) = t_max {
        finite("t_max", tm)?;
        if tm <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "t_max",
                value: tm,
                reason: "must be positive",
            });
        }
    }
    let Some(branch) = Branch::new(eps)? else {
        let tm = t_max.ok_or(Error::MissingEndTime { epsilon: eps })?;
        let samples = (0..n)
            .map(|i| (tm * i as f64 / (n - 1) as f64, 1.0))
            .collect();
        return Ok(RadiusCurve::new(MethodId::ExactQS, eps, samples, "uniform in t"));
    };

    let t0 = branch.dissolution_time();
    let (t_end, complete) = match (t0, t_max) {
        (Some(t0), Some(tm)) if tm < t0 => (tm, false),
        (Some(t0), _) => (t0, true),
        (None, Some(tm)) => (tm, false),
        (None, None) => return Err(Error::MissingEndTime { epsilon: eps }),
    };

    let s_hi = branch.offset_for_time(FIRST_TIME_FRACTION * t_end);
    let mut offsets = Vec::with_capacity(n - 1);
    if complete {
        offsets.extend(geometric(s_hi, OFFSET_FLOOR.min(0.5 * s_hi), n - 2));
        offsets.push(0.0);
    } else {
        offsets.extend(geometric(s_hi, branch.offset_for_time(t_end), n - 1));
    }

    let mut samples = Vec::with_capacity(n);
    samples.push((0.0, 1.0));
    for (i, &s) in offsets.iter().enumerate() {
        let mut t = branch.time(s);
        if i + 1 == offsets.len() {
            t = t_end;
        }
        samples.push((t, branch.radius(s, t)));
    }
    let grid = format!(
        "geometric in parameter offset, {} points from {:.3e} to {:.3e}",
        offsets.len(),
        s_hi,
        offsets.last().copied().unwrap_or(s_hi)
    );
    Ok(RadiusCurve::new(MethodId::ExactQS, eps, samples, grid).with_tolerance("bisection_iterations", crate::bisect::MAX_ITERATIONS as f64))
}

/// `count` points from `from` to `to` inclusive with a constant ratio.
fn geometric(from: f64, to: f64, count: usize) -> impl Iterator<Item = f64> {
    let ratio = if count > 1 {
        (to / from).powf(1.0 / (count - 1) as f64)
    } else {
        1.0
    };
    (0..count).map(move |i| {
        if i + 1 == count && count > 1 {
            to
        } else {
            from * ratio.powi(i as i32)
        }
    })
}

/// Zeroth-order concentration `(R/r) erfc((r - R) sqrt(pi / (4t)))`.
pub fn concentration_profile(radius: f64, t: f64, r: f64) -> Result<f64> {
    finite("radius", radius)?;
    finite("t", t)?;
    finite("r", r)?;
    if radius <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "radius",
            value: radius,
            reason: "must be positive",
        });
    }
    if t <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "t",
            value: t,
            reason: "must be positive",
        });
    }
    if r < radius {
        return Err(Error::InsideParticle { r, radius });
    }
    Ok(radius / r * erfc_clipped((r - radius) * (PI / (4.0 * t)).sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn dissolution_point_at_unit_parameter() {
        let p = param_point_dissolution(0.1, 1.0).unwrap();
        assert!(close(p.t, 1.83532, 1e-5), "t = {}", p.t);
        assert!(close(p.radius, 0.45504, 1e-5), "R = {}", p.radius);
        assert_eq!(p.regime, Regime::Dissolution);
    }

    #[test]
    fn dissolution_lower_bound_is_complete_dissolution() {
        let hat = (0.1f64 / 1.9).sqrt();
        assert!(close(hat, 0.22942, 1e-5));
        let p = param_point_dissolution(0.1, hat).unwrap();
        assert_eq!(p.radius, 0.0);
        assert!(close(p.t, 2.6971, 1e-4));
        assert!(close(p.t, 2.69711, 1e-5));
        assert!(matches!(
            param_point_dissolution(0.1, 0.2),
            Err(Error::ParameterBelowBound { .. })
        ));
        assert!(matches!(
            param_point_dissolution(2.5, 1.0),
            Err(Error::EpsilonOutOfRange { .. })
        ));
    }

    #[test]
    fn large_parameters_approach_initial_state() {
        let d = param_point_dissolution(0.5, 1e6).unwrap();
        let g = param_point_growth(-0.01, 1e6).unwrap();
        let s = param_point_supercritical(5.0, 1e6).unwrap();
        let c = param_point_critical(1e6).unwrap();
        for p in [d, g, s, c] {
            assert!((p.radius - 1.0).abs() < 1e-4, "{p:?}");
            assert!(p.t < 1e-10);
        }
    }

    #[test]
    fn critical_point_substitutions() {
        let p = param_point_critical(0.0).unwrap();
        assert_eq!(p.radius, 0.0);
        assert!(close(p.t, (-2f64).exp() / 4.0, 1e-16));
        assert!(close(p.t, 0.0338338, 1e-7));
        let p = param_point_critical(2.0).unwrap();
        assert!(close(p.t, (-1f64).exp() / 16.0, 1e-16));
        assert!(close(p.radius, 2.0 * p.t.sqrt(), 1e-16));
        assert!(param_point_critical(-0.1).is_err());
    }

    #[test]
    fn supercritical_lower_bound() {
        let tilde = (5.0f64 / 3.0).sqrt();
        let p = param_point_supercritical(5.0, tilde).unwrap();
        assert_eq!(p.radius, 0.0);
        assert!(close(p.t, time_to_dissolution(5.0).unwrap(), 1e-16));
        assert!(param_point_supercritical(5.0, 1.1).is_err());
        assert!(param_point_supercritical(2.0, 3.0).is_err());
    }

    #[test]
    fn growth_radius_exceeds_one() {
        for u in [1.0001, 1.01, 1.5, 3.0, 100.0] {
            let p = param_point_growth(-0.5, u).unwrap();
            assert!(p.radius > 1.0 && p.t > 0.0, "{p:?}");
        }
        assert!(param_point_growth(-0.5, 1.0).is_err());
        assert!(param_point_growth(0.1, 2.0).is_err());
    }

    #[test]
    fn dissolution_times_of_the_table() {
        for (eps, want, tol) in [(0.1, 2.6971, 5e-5), (1.0, 0.1039, 5e-5), (0.0001, 4890.6, 5e-2)] {
            let t0 = time_to_dissolution(eps).unwrap();
            assert!(close(t0, want, tol), "eps={eps}: {t0}");
        }
        assert!(time_to_dissolution(0.0).is_err());
        assert!(time_to_dissolution(-0.1).is_err());
    }

    #[test]
    fn continuity_of_dissolution_time_across_critical() {
        let crit = (-2f64).exp() / 4.0;
        assert_eq!(time_to_dissolution(2.0).unwrap(), crit);
        for eps in [2.0 - 1e-6, 2.0 + 1e-6] {
            assert!((time_to_dissolution(eps).unwrap() - crit).abs() <= 1e-5);
        }
    }

    #[test]
    fn radius_at_reproduces_parametric_point() {
        let r = radius_at(0.1, 1.83532).unwrap();
        assert!(close(r, 0.45504, 1e-5), "R = {r}");
        for eps in [-0.5, -0.01, 0.0, 0.01, 1.0, 2.0, 5.0] {
            assert_eq!(radius_at(eps, 0.0).unwrap(), 1.0);
            assert_eq!(radius_at(eps, 1e-15).unwrap(), 1.0);
        }
        assert!(matches!(radius_at(0.1, 3.0), Err(Error::PastDissolution { .. })));
        assert!(matches!(radius_at(0.1, f64::NAN), Err(Error::NonFinite { .. })));
        let t0 = time_to_dissolution(0.1).unwrap();
        assert_eq!(radius_at(0.1, t0).unwrap(), 0.0);
    }

    #[test]
    fn radius_at_residual_is_tiny() {
        for eps in [-0.5, -0.01, 0.01, 0.1, 1.9, 2.0, 2.1, 5.0] {
            let t_end = time_to_dissolution(eps).unwrap_or(400.0);
            for k in 1..50 {
                let t = t_end * k as f64 / 50.0;
                let p = point_at(eps, t).unwrap();
                let branch = Branch::new(eps).unwrap().unwrap();
                let s = p.parameter - branch.lower_bound();
                let tp = branch.time(s);
                assert!((tp - t).abs() <= 1e-12 * t.max(1.0), "eps={eps} t={t} t(p)={tp}");
            }
        }
    }

    #[test]
    fn time_decreases_along_parameter() {
        for eps in [-0.5, -0.01, 0.01, 0.1, 1.0, 2.0, 3.0, 5.0] {
            let b = Branch::new(eps).unwrap().unwrap();
            let mut prev = f64::INFINITY;
            for k in 0..1000 {
                let s = 1e-6 * 1.025f64.powi(k);
                let t = b.time(s);
                assert!(t < prev, "eps={eps} s={s}");
                prev = t;
            }
        }
    }

    #[test]
    fn growth_matches_inverse_coth_form() {
        let eps = -0.3f64;
        let tilde = (-eps / (2.0 - eps)).sqrt();
        for k in 0..1000 {
            let u = 1.0 + 1e-4 * 1.02f64.powi(k);
            let acoth = (1.0 / u).atanh();
            let want = (2.0 * tilde * acoth).exp() / (-eps * (2.0 - eps) * (u * u - 1.0));
            let got = param_point_growth(eps, u).unwrap().t;
            assert!(((got - want) / want).abs() <= 1e-12, "u={u}: {got} vs {want}");
        }
    }

    #[test]
    fn curve_ends_at_complete_dissolution() {
        let c = exact_curve(0.01, 200, None).unwrap();
        assert_eq!(c.len(), 200);
        let (t, r) = c.last().unwrap();
        assert!(close(t, 40.421, 1e-3), "t0 = {t}");
        assert!(r <= 1e-9);
        assert_eq!(c.samples[0], (0.0, 1.0));
        assert!(c.is_strictly_increasing());
        assert!(c.samples.windows(2).all(|w| w[1].1 <= w[0].1));
    }

    #[test]
    fn curve_samples_satisfy_implicit_relation() {
        for (eps, tm) in [(0.01, None), (0.5, None), (2.0, None), (5.0, None), (-0.01, Some(400.0)), (-0.5, Some(50.0))] {
            let c = exact_curve(eps, DEFAULT_SAMPLES, tm).unwrap();
            assert_eq!(c.len(), DEFAULT_SAMPLES);
            assert!(c.is_strictly_increasing(), "eps={eps}");
            for &(t, r) in &c.samples {
                let res = implicit_residual(eps, t, r).unwrap();
                assert!(res <= 1e-12, "eps={eps} t={t} R={r} residual={res}");
            }
        }
    }

    #[test]
    fn static_and_truncated_curves() {
        let c = exact_curve(0.0, 10, Some(5.0)).unwrap();
        assert_eq!(c.len(), 10);
        assert!(c.radii().all(|r| r == 1.0));
        assert_eq!(c.last().unwrap().0, 5.0);
        assert!(matches!(exact_curve(0.0, 10, None), Err(Error::MissingEndTime { .. })));
        assert!(matches!(exact_curve(-0.1, 10, None), Err(Error::MissingEndTime { .. })));
        assert!(matches!(exact_curve(0.1, 1, None), Err(Error::TooFewSamples(1))));

        let g = exact_curve(-0.01, 100, Some(400.0)).unwrap();
        assert!(g.samples.windows(2).all(|w| w[1].1 > w[0].1));
        assert_eq!(g.last().unwrap().0, 400.0);

        let part = exact_curve(0.1, 20, Some(1.0)).unwrap();
        let (t, r) = part.last().unwrap();
        assert_eq!(t, 1.0);
        assert!(close(r, radius_at(0.1, 1.0).unwrap(), 1e-12));

        let two = exact_curve(0.1, 2, None).unwrap();
        assert_eq!(two.samples, vec![(0.0, 1.0), (time_to_dissolution(0.1).unwrap(), 0.0)]);
    }

    #[test]
    fn concentration_boundary_values() {
        assert_eq!(concentration_profile(0.7, 0.3, 0.7).unwrap(), 1.0);
        let c = concentration_profile(1.0, 1e8, 2.0).unwrap();
        assert!((c - 0.5).abs() < 1e-3);
        let c = concentration_profile(1.0, 1.0, 3.0).unwrap();
        let want = 0.012_188_882_184_802_886 / 3.0;
        assert!(((c - want) / want).abs() < 1e-14);
        assert_eq!(concentration_profile(1.0, 1e-3, 10.0).unwrap(), 0.0);
        assert!(matches!(concentration_profile(1.0, 1.0, 0.5), Err(Error::InsideParticle { .. })));
        assert!(concentration_profile(1.0, 0.0, 2.0).is_err());
    }
}
