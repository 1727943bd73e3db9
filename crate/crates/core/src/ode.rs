//! Numerical oracle for the leading-order radius equation.
//!
//! The equation `dR/dt = -eps (1/R + 1/sqrt(t))` is singular at `t = 0`; in
//! `tau = sqrt(t)` it reads
//!
//! ```text
//! dR/dtau = -2 eps (tau / R + 1)
//! ```
//!
//! which is regular at the origin. It is integrated with an embedded
//! Dormand-Prince 5(4) pair. Close to complete dissolution the slope grows
//! like `tau / R`, so once `|dR/dtau|` exceeds [`SWITCH_SLOPE`] the roles of
//! the variables are exchanged and `dtau/dR = -R / (2 eps (tau + R))` is
//! integrated down to the stopping radius instead. The remaining sliver to
//! `R = 0` is closed with the local behaviour `R dR/dtau ~ -2 eps tau`.
//!
//! Nothing here uses the closed-form solution.

use serde::{Deserialize, Serialize};

use crate::curve::{MethodId, RadiusCurve};
use crate::error::{finite, Error, Result};

/// Slope `|dR/dtau|` beyond which the integration continues in `R`.
pub const SWITCH_SLOPE: f64 = 10.0;

/// Local error target relative to the requested tolerances. The continuous
/// extension is one order lower than the step, so the step is held tighter
/// for the dense output to meet the requested accuracy.
pub const TOLERANCE_SAFETY: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegratorConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Dissolution stops once `R <= min_radius`.
    pub min_radius: f64,
    pub max_steps: usize,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        IntegratorConfig {
            rel_tol: 1e-10,
            abs_tol: 1e-10,
            min_radius: 1e-8,
            max_steps: 1_000_000,
        }
    }
}

impl IntegratorConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, tol) in [("rel_tol", self.rel_tol), ("abs_tol", self.abs_tol)] {
            if !(tol > 0.0 && tol <= 1e-3) {
                return Err(Error::InvalidConfig(format!("{name} = {tol} must lie in (0, 1e-3]")));
            }
        }
        if !(self.min_radius > 0.0 && self.min_radius <= 1e-4) {
            return Err(Error::InvalidConfig(format!(
                "min_radius = {} must lie in (0, 1e-4]",
                self.min_radius
            )));
        }
        if self.max_steps < 1000 {
            return Err(Error::InvalidConfig(format!(
                "max_steps = {} must be at least 1000",
                self.max_steps
            )));
        }
        Ok(())
    }
}

// Dormand-Prince 5(4) coefficients.
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

/// One accepted step with its continuous extension.
#[derive(Debug, Clone, Copy)]
struct DenseStep {
    x0: f64,
    h: f64,
    r: [f64; 5],
}

impl DenseStep {
    fn eval(&self, x: f64) -> f64 {
        let th = (x - self.x0) / self.h;
        let th1 = 1.0 - th;
        let r = &self.r;
        r[0] + th * (r[1] + th1 * (r[2] + th * (r[3] + th1 * r[4])))
    }

    fn x1(&self) -> f64 {
        self.x0 + self.h
    }
}

struct StepOutcome {
    y1: f64,
    f1: f64,
    err: f64,
    dense: DenseStep,
}

/// Single Dormand-Prince step; `None` if any stage leaves the domain.
fn dopri_step(
    f: &impl Fn(f64, f64) -> Option<f64>,
    x: f64,
    y: f64,
    f0: f64,
    h: f64,
    cfg: &IntegratorConfig,
) -> Option<StepOutcome> {
    let k1 = f0;
    let k2 = f(x + C2 * h, y + h * A21 * k1)?;
    let k3 = f(x + C3 * h, y + h * (A31 * k1 + A32 * k2))?;
    let k4 = f(x + C4 * h, y + h * (A41 * k1 + A42 * k2 + A43 * k3))?;
    let k5 = f(x + C5 * h, y + h * (A51 * k1 + A52 * k2 + A53 * k3 + A54 * k4))?;
    let k6 = f(
        x + h,
        y + h * (A61 * k1 + A62 * k2 + A63 * k3 + A64 * k4 + A65 * k5),
    )?;
    let y1 = y + h * (A71 * k1 + A73 * k3 + A74 * k4 + A75 * k5 + A76 * k6);
    let k7 = f(x + h, y1)?;
    let e = h * (E1 * k1 + E3 * k3 + E4 * k4 + E5 * k5 + E6 * k6 + E7 * k7);
    let scale = TOLERANCE_SAFETY * (cfg.abs_tol + cfg.rel_tol * y.abs().max(y1.abs()));
    let err = (e / scale).abs();
    let dy = y1 - y;
    let r2 = h * k1 - dy;
    let r3 = dy - h * k7 - r2;
    let r4 = h * (D1 * k1 + D3 * k3 + D4 * k4 + D5 * k5 + D6 * k6 + D7 * k7);
    Some(StepOutcome {
        y1,
        f1: k7,
        err,
        dense: DenseStep {
            x0: x,
            h,
            r: [y, dy, r2, r3, r4],
        },
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Stop {
    /// Reached the end of the integration interval.
    End,
    /// The predicate asked to stop after an accepted step.
    Event,
}

/// Adaptive integration of `y' = f(x, y)` from `x0` towards `x_end`
/// (either direction), stopping early when `stop(x, y, y')` holds after an
/// accepted step.
#[allow(clippy::too_many_arguments)]
fn integrate(
    f: impl Fn(f64, f64) -> Option<f64>,
    x0: f64,
    y0: f64,
    x_end: f64,
    cfg: &IntegratorConfig,
    steps_used: &mut usize,
    mut stop: impl FnMut(f64, f64, f64) -> bool,
    to_time: impl Fn(f64, f64) -> (f64, f64),
) -> Result<(Vec<DenseStep>, Stop)> {
    let dir = (x_end - x0).signum();
    let mut x = x0;
    let mut y = y0;
    let mut fx = f(x, y).ok_or_else(|| {
        let (t, r) = to_time(x, y);
        Error::StepUnderflow { t, radius: r }
    })?;
    let span = (x_end - x0).abs();
    let mut h = dir * (1e-3 * span).min(1e-2 * (cfg.abs_tol + cfg.rel_tol * y.abs()).powf(0.2)).max(1e-12);
    let mut steps = Vec::new();
    loop {
        if *steps_used >= cfg.max_steps {
            let (t, r) = to_time(x, y);
            return Err(Error::MaxSteps {
                steps: *steps_used,
                t,
                radius: r,
            });
        }
        let remaining = x_end - x;
        let last = h.abs() >= remaining.abs();
        if last {
            h = remaining;
        }
        if h.abs() <= 1e-15 * x.abs().max(1e-300) || h == 0.0 {
            let (t, r) = to_time(x, y);
            return Err(Error::StepUnderflow { t, radius: r });
        }
        *steps_used += 1;
        match dopri_step(&f, x, y, fx, h, cfg) {
            Some(out) if out.err <= 1.0 => {
                steps.push(out.dense);
                x = if last { x_end } else { x + h };
                y = out.y1;
                fx = out.f1;
                let fac = if out.err == 0.0 {
                    5.0
                } else {
                    (0.9 * out.err.powf(-0.2)).clamp(0.2, 5.0)
                };
                if last {
                    return Ok((steps, Stop::End));
                }
                if stop(x, y, fx) {
                    return Ok((steps, Stop::Event));
                }
                h *= fac;
            }
            Some(out) => {
                h *= (0.9 * out.err.powf(-0.2)).clamp(0.1, 0.9);
            }
            None => h *= 0.25,
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum Segment {
    /// `R(tau)` on `[x0, x0 + h]`.
    Tau(DenseStep),
    /// `tau(R)` on `[x0 + h, x0]` with `h < 0`.
    Radius(DenseStep),
}

/// Result of integrating the radius equation.
#[derive(Debug, Clone)]
pub struct OdeSolution {
    pub epsilon: f64,
    /// Accepted step endpoints as `(t, R)`.
    pub curve: RadiusCurve,
    /// Complete-dissolution time, extrapolated from the stopping radius.
    pub dissolution_time: Option<f64>,
    /// Time at which the stopping radius was reached.
    pub stop_time: Option<f64>,
    pub steps: usize,
    segments: Vec<Segment>,
    /// Largest time covered by the dense output.
    t_last: f64,
}

impl OdeSolution {
    /// Dense-output radius at time `t`.
    ///
    /// Between the stopping radius and the extrapolated dissolution time the
    /// local square-root law is used; beyond the dissolution time the result
    /// is zero. `None` when `t` lies outside the integrated span.
    pub fn radius_at(&self, t: f64) -> Option<f64> {
        if t.is_nan() || t < 0.0 {
            return None;
        }
        if self.epsilon == 0.0 {
            return (t <= self.t_last).then_some(1.0);
        }
        if t > self.t_last {
            let t0 = self.dissolution_time?;
            let tau0 = t0.sqrt();
            let tau = t.sqrt();
            if tau >= tau0 {
                return Some(0.0);
            }
            return Some((4.0 * self.epsilon * tau0 * (tau0 - tau)).max(0.0).sqrt());
        }
        let tau = t.sqrt();
        // segments are ordered by increasing tau
        let i = self.segments.partition_point(|s| match s {
            Segment::Tau(d) => d.x1() < tau,
            Segment::Radius(d) => d.eval(d.x1()) < tau,
        });
        let seg = self.segments.get(i).or_else(|| self.segments.last())?;
        Some(match *seg {
            Segment::Tau(d) => d.eval(tau),
            Segment::Radius(d) => {
                // tau(R) decreases in R over [x0 + h, x0]
                let (lo, hi) = crate::bisect::bisect(d.x1(), d.x0, |r| d.eval(r) > tau);
                0.5 * (lo + hi)
            }
        })
    }
}

/// Integrate the leading-order radius equation from `R(0) = 1`.
///
/// For `eps > 0` the integration stops when `R <= min_radius` or at `t_end`,
/// whichever comes first; otherwise `t_end` is required.
pub fn integrate_radius(eps: f64, t_end: Option<f64>, cfg: &IntegratorConfig) -> Result<OdeSolution> {
    finite("epsilon", eps)?;
    cfg.validate()?;
    if let Some(te) = t_end {
        finite("t_end", te)?;
        if te <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "t_end",
                value: te,
                reason: "must be positive",
            });
        }
    }
    if eps <= 0.0 && t_end.is_none() {
        return Err(Error::MissingEndTime { epsilon: eps });
    }
    let tolerances = |c: RadiusCurve| {
        c.with_tolerance("rel_tol", cfg.rel_tol)
            .with_tolerance("abs_tol", cfg.abs_tol)
            .with_tolerance("min_radius", cfg.min_radius)
    };

    if eps == 0.0 {
        let te = t_end.expect("checked above");
        let curve = tolerances(RadiusCurve::new(
            MethodId::OdeOracle,
            eps,
            vec![(0.0, 1.0), (te, 1.0)],
            "trivial",
        ));
        return Ok(OdeSolution {
            epsilon: eps,
            curve,
            dissolution_time: None,
            stop_time: None,
            steps: 1,
            segments: Vec::new(),
            t_last: te,
        });
    }

    let tau_end = t_end.map_or(f64::INFINITY, f64::sqrt);
    let slope = move |tau: f64, r: f64| -> Option<f64> {
        let v = -2.0 * eps * (tau / r + 1.0);
        (r > 0.0 && v.is_finite()).then_some(v)
    };
    let mut used = 0;
    let (tau_steps, stop) = integrate(
        slope,
        0.0,
        1.0,
        if tau_end.is_finite() { tau_end } else { f64::MAX.sqrt() },
        cfg,
        &mut used,
        |_, r, fr| eps > 0.0 && (fr.abs() > SWITCH_SLOPE || r <= cfg.min_radius),
        |tau, r| (tau * tau, r),
    )?;

    let mut samples = vec![(0.0, 1.0)];
    let push = |t: f64, r: f64, samples: &mut Vec<(f64, f64)>| {
        if let Some(&(tl, _)) = samples.last() {
            if t <= tl {
                samples.pop();
            }
        }
        samples.push((t, r));
    };
    let mut segments: Vec<Segment> = Vec::with_capacity(tau_steps.len());
    for d in &tau_steps {
        let tau = d.x1();
        push(tau * tau, d.eval(tau), &mut samples);
        segments.push(Segment::Tau(*d));
    }
    let (tau_sw, r_sw) = match tau_steps.last() {
        Some(d) => (d.x1(), d.eval(d.x1())),
        None => (0.0, 1.0),
    };

    let mut dissolution_time = None;
    let mut stop_time = None;
    if stop == Stop::Event && r_sw > cfg.min_radius {
        // continue in R: dtau/dR = -R / (2 eps (tau + R))
        let dtau = move |r: f64, tau: f64| -> Option<f64> {
            let v = -r / (2.0 * eps * (tau + r));
            v.is_finite().then_some(v)
        };
        let (r_steps, _) = integrate(
            dtau,
            r_sw,
            tau_sw,
            cfg.min_radius,
            cfg,
            &mut used,
            |r, tau, _| tau > tau_end || r <= cfg.min_radius,
            |r, tau| (tau * tau, r),
        )?;
        for d in &r_steps {
            let r = d.x1();
            let tau = d.eval(r);
            if tau > tau_end {
                // t_end falls inside this step
                let (lo, hi) = crate::bisect::bisect(r, d.x0, |x| d.eval(x) > tau_end);
                push(tau_end * tau_end, 0.5 * (lo + hi), &mut samples);
                segments.push(Segment::Radius(*d));
                break;
            }
            push(tau * tau, r, &mut samples);
            segments.push(Segment::Radius(*d));
        }
    }
    let (t_last, r_last) = *samples.last().expect("non-empty");
    if eps > 0.0 && r_last <= cfg.min_radius * (1.0 + 1e-9) {
        let tau = t_last.sqrt();
        // R^2 ~ 4 eps tau (tau0 - tau), evaluated with the (tau + R) correction
        let tau0 = tau + r_last * r_last / (4.0 * eps * (tau + r_last));
        dissolution_time = Some(tau0 * tau0);
        stop_time = Some(t_last);
    }
    let curve = tolerances(RadiusCurve::new(
        MethodId::OdeOracle,
        eps,
        samples,
        "accepted Dormand-Prince steps in sqrt(t), then in R",
    ));
    Ok(OdeSolution {
        epsilon: eps,
        curve,
        dissolution_time,
        stop_time,
        steps: used,
        segments,
        t_last,
    })
}
