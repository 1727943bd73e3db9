//! Direct solution of the full moving-boundary problem
//!
//! ```text
//! C_t + k (R/r)^2 R' C_r = (1 / (pi r^2)) (r^2 C_r)_r,   R <= r < inf
//! R' = eps C_r(R),   C(R) = 1,   C(inf) = 0,   C(r, 0) = 0,   R(0) = 1
//! ```
//!
//! with `k = 1 - rho_p / rho_m`. The substitution `x = r / R` pins the
//! surface at `x = 1`; with `c(x, t) = C(xR, t)` the field obeys
//!
//! ```text
//! c_t = (1 / (pi R^2)) (c_xx + (2/x) c_x) + (R'/R) (x - k / x^2) c_x
//! R'  = eps c_x(1) / R
//! ```
//!
//! The first advective term is the mesh motion of the mapped frame and the
//! second the physical convection. The domain is truncated at `x_max` with
//! `c = 0`; nodes are stretched geometrically towards the surface.
//!
//! Time stepping is backward Euler in the field with the radius advanced
//! explicitly from the surface flux, wrapped in step doubling: the
//! difference between one full and two half steps controls the step size and
//! the Richardson combination of the two is kept, which is second order.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::curve::{MethodId, RadiusCurve};
use crate::error::{finite, Error, Result};
use crate::exact;
use crate::special::erfc_clipped;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PdeConfig {
    /// Number of grid nodes including both boundaries.
    pub nodes: usize,
    /// Outer edge of the mapped domain; chosen from the far-field profile when `None`.
    pub rhat_max: Option<f64>,
    /// Ratio of consecutive cell widths.
    pub stretch: f64,
    /// Start time; the field is initialised with the fixed-sphere profile there.
    pub t_init: f64,
    /// Step-doubling error target per step.
    pub local_tol: f64,
    pub max_steps: usize,
    /// Stop once `R` falls to this value.
    pub stop_radius: f64,
    /// Stop at this time; required when the particle does not dissolve.
    pub t_end: Option<f64>,
    /// Times at which the concentration field is recorded.
    pub snapshot_times: Vec<f64>,
    /// Far-field value the automatic `rhat_max` must undercut.
    pub far_field_tol: f64,
}

impl Default for PdeConfig {
    fn default() -> Self {
        PdeConfig {
            nodes: 800,
            rhat_max: None,
            stretch: 1.02,
            t_init: 1e-6,
            local_tol: 1e-8,
            max_steps: 5_000_000,
            stop_radius: 0.02,
            t_end: None,
            snapshot_times: Vec::new(),
            far_field_tol: 1e-6,
        }
    }
}

impl PdeConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if self.nodes < 100 {
            return bad(format!("nodes = {} must be at least 100", self.nodes));
        }
        if let Some(x) = self.rhat_max {
            if !(x >= 10.0 && x.is_finite()) {
                return bad(format!("rhat_max = {x} must be at least 10"));
            }
        }
        if !(self.stretch >= 1.0 && self.stretch < 1.5) {
            return bad(format!("stretch = {} must lie in [1, 1.5)", self.stretch));
        }
        if !(self.t_init > 0.0 && self.t_init < 1e-2) {
            return bad(format!("t_init = {} must lie in (0, 1e-2)", self.t_init));
        }
        if !(self.local_tol > 0.0 && self.local_tol < 1e-2) {
            return bad(format!("local_tol = {} must lie in (0, 1e-2)", self.local_tol));
        }
        if !(self.stop_radius > 0.0 && self.stop_radius < 1.0) {
            return bad(format!("stop_radius = {} must lie in (0, 1)", self.stop_radius));
        }
        if let Some(te) = self.t_end {
            if !(te > self.t_init && te.is_finite()) {
                return bad(format!("t_end = {te} must exceed t_init"));
            }
        }
        if !(self.far_field_tol > 0.0 && self.far_field_tol < 1e-2) {
            return bad(format!("far_field_tol = {} must lie in (0, 1e-2)", self.far_field_tol));
        }
        Ok(())
    }

    /// The same domain with every cell split in two.
    pub fn refined(&self) -> PdeConfig {
        PdeConfig {
            nodes: 2 * self.nodes - 1,
            stretch: self.stretch.sqrt(),
            ..self.clone()
        }
    }
}

/// Concentration on the mapped grid at one instant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MappedField {
    /// Nodes `x = r / R`, from 1 to `rhat_max`.
    pub rhat: Vec<f64>,
    pub concentration: Vec<f64>,
    pub radius: f64,
    pub t: f64,
    pub density_ratio: f64,
}

impl MappedField {
    /// The product `x c`, which tends to a constant far from the surface.
    pub fn compound(&self) -> Vec<f64> {
        self.rhat
            .iter()
            .zip(&self.concentration)
            .map(|(x, c)| x * c)
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let mut s = format!("# t={:e}\n# R={:e}\n# density_ratio={}\nrhat,C\n", self.t, self.radius, self.density_ratio);
        for (x, c) in self.rhat.iter().zip(&self.concentration) {
            s.push_str(&format!("{x:e},{c:e}\n"));
        }
        s
    }
}

/// Summary of a run, serialised as JSON by the CLI.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub epsilon: f64,
    pub density_ratio: f64,
    pub nodes: usize,
    pub rhat_max: f64,
    pub stretch: f64,
    pub first_spacing: f64,
    pub steps: usize,
    pub rejected_steps: usize,
    pub final_t: f64,
    pub final_radius: f64,
    pub concentration_min: f64,
    pub concentration_max: f64,
    /// `[0.1 T, 0.9 T]` with `T` the earlier of the exact dissolution time and
    /// the end of the run; samples inside it are compared with the exact solution.
    pub comparison_window: Option<(f64, f64)>,
    pub max_abs_error_vs_exact: Option<f64>,
    pub max_rel_error_vs_exact: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct PdeSolution {
    pub curve: RadiusCurve,
    /// Surface flux `dC/dr` at `r = R` after every accepted step.
    pub surface_flux: Vec<(f64, f64)>,
    pub snapshots: Vec<MappedField>,
    pub summary: RunSummary,
}

impl PdeSolution {
    pub fn radius_at(&self, t: f64) -> Option<f64> {
        self.curve.interpolate(t)
    }

    pub fn flux_at(&self, t: f64) -> Option<f64> {
        let i = self.surface_flux.partition_point(|&(ti, _)| ti < t);
        let (t1, f1) = *self.surface_flux.get(i)?;
        if i == 0 || t1 == t {
            return Some(f1);
        }
        let (t0, f0) = self.surface_flux[i - 1];
        Some(f0 + (f1 - f0) * (t - t0) / (t1 - t0))
    }
}

/// Geometrically stretched nodes on `[1, xmax]`.
pub fn stretched_grid(nodes: usize, xmax: f64, stretch: f64) -> Vec<f64> {
    let cells = nodes - 1;
    let length = xmax - 1.0;
    let h0 = if stretch == 1.0 {
        length / cells as f64
    } else {
        length * (stretch - 1.0) / (stretch.powi(cells as i32) - 1.0)
    };
    let mut x = Vec::with_capacity(nodes);
    x.push(1.0);
    let mut h = h0;
    for _ in 0..cells {
        let next = x.last().unwrap() + h;
        x.push(next);
        h *= stretch;
    }
    *x.last_mut().unwrap() = xmax;
    x
}

/// Smallest `x >= 10` where the fixed-sphere profile at `(radius, t)` has
/// fallen below `tol`.
pub fn far_field_extent(radius: f64, t: f64, tol: f64) -> f64 {
    let profile = |x: f64| erfc_clipped(radius * (x - 1.0) * (PI / (4.0 * t)).sqrt()) / x;
    let mut hi = 10.0;
    if profile(hi) < tol {
        return hi;
    }
    while profile(hi) >= tol {
        hi *= 2.0;
    }
    let (_, hi) = crate::bisect::bisect(0.5 * hi, hi, |x| profile(x) >= tol);
    hi
}

struct Stepper {
    eps: f64,
    kappa: f64,
    x: Vec<f64>,
    /// Flux stencil weights at the surface.
    w: [f64; 3],
    lower: Vec<f64>,
    diag: Vec<f64>,
    upper: Vec<f64>,
    rhs: Vec<f64>,
    scratch: Vec<f64>,
}

impl Stepper {
    fn new(eps: f64, density_ratio: f64, x: Vec<f64>) -> Self {
        let h1 = x[1] - x[0];
        let h2 = x[2] - x[1];
        let w = [
            -(2.0 * h1 + h2) / (h1 * (h1 + h2)),
            (h1 + h2) / (h1 * h2),
            -h1 / (h2 * (h1 + h2)),
        ];
        let n = x.len();
        Stepper {
            eps,
            kappa: 1.0 - density_ratio,
            x,
            w,
            lower: vec![0.0; n],
            diag: vec![0.0; n],
            upper: vec![0.0; n],
            rhs: vec![0.0; n],
            scratch: vec![0.0; n],
        }
    }

    /// `dc/dx` at the surface.
    fn surface_gradient(&self, c: &[f64]) -> f64 {
        self.w[0] * c[0] + self.w[1] * c[1] + self.w[2] * c[2]
    }

    /// One backward-Euler step of length `dt` from `(c, radius)` into `out`.
    fn step(&mut self, c: &[f64], radius: f64, dt: f64, out: &mut [f64]) -> Option<f64> {
        let n = self.x.len();
        let rate = self.eps * self.surface_gradient(c) / radius;
        let r_new = radius + dt * rate;
        if r_new.is_nan() || r_new <= 0.0 {
            return None;
        }
        let d = 1.0 / (PI * r_new * r_new);
        let v = rate / r_new;
        #[allow(clippy::needless_range_loop)]
        for i in 1..n - 1 {
            let xi = self.x[i];
            let hm = xi - self.x[i - 1];
            let hp = self.x[i + 1] - xi;
            let b = 2.0 * d / xi + v * (xi - self.kappa / (xi * xi));
            let ld = 2.0 * d / (hm * (hm + hp));
            let ud = 2.0 * d / (hp * (hm + hp));
            let (mut la, mut da, mut ua) = (
                -b * hp / (hm * (hm + hp)),
                b * (hp - hm) / (hm * hp),
                b * hm / (hp * (hm + hp)),
            );
            if ld + la < 0.0 || ud + ua < 0.0 {
                // cell Peclet number too large for central differences
                if b > 0.0 {
                    (la, da, ua) = (0.0, -b / hp, b / hp);
                } else {
                    (la, da, ua) = (-b / hm, b / hm, 0.0);
                }
            }
            self.lower[i] = -dt * (ld + la);
            self.diag[i] = 1.0 - dt * (da - ld - ud);
            self.upper[i] = -dt * (ud + ua);
            self.rhs[i] = c[i];
        }
        // Dirichlet values c(1) = 1 and c(xmax) = 0
        self.rhs[1] -= self.lower[1];
        self.lower[1] = 0.0;
        self.upper[n - 2] = 0.0;

        // Thomas algorithm on rows 1..n-1
        self.scratch[1] = self.upper[1] / self.diag[1];
        out[1] = self.rhs[1] / self.diag[1];
        for i in 2..n - 1 {
            let m = self.diag[i] - self.lower[i] * self.scratch[i - 1];
            self.scratch[i] = self.upper[i] / m;
            out[i] = (self.rhs[i] - self.lower[i] * out[i - 1]) / m;
        }
        for i in (1..n - 2).rev() {
            out[i] -= self.scratch[i] * out[i + 1];
        }
        out[0] = 1.0;
        out[n - 1] = 0.0;
        Some(r_new)
    }
}

/// Solve the moving-boundary problem for `eps` and `rho_p / rho_m`.
pub fn solve_moving_boundary(eps: f64, density_ratio: f64, cfg: &PdeConfig) -> Result<PdeSolution> {
    finite("epsilon", eps)?;
    finite("density_ratio", density_ratio)?;
    if density_ratio <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "density_ratio",
            value: density_ratio,
            reason: "must be positive",
        });
    }
    cfg.validate()?;
    if eps <= 0.0 && cfg.t_end.is_none() {
        return Err(Error::MissingEndTime { epsilon: eps });
    }

    let exact_t0 = (eps > 0.0).then(|| exact::time_to_dissolution(eps)).transpose()?;
    let rhat_max = match cfg.rhat_max {
        Some(x) => x,
        None => {
            let (r_final, t_final) = match (exact_t0, cfg.t_end) {
                (Some(t0), Some(te)) if te < t0 => (exact::radius_at(eps, te)?.max(cfg.stop_radius), te),
                (Some(t0), _) => (cfg.stop_radius, t0),
                (None, Some(te)) => (1.0, te),
                (None, None) => unreachable!("checked above"),
            };
            far_field_extent(r_final, t_final, cfg.far_field_tol)
        }
    };
    let x = stretched_grid(cfg.nodes, rhat_max, cfg.stretch);
    let first_spacing = x[1] - x[0];
    let n = x.len();

    let mut t = cfg.t_init;
    let mut radius = 1.0 - 2.0 * eps * t.sqrt();
    let scale = (PI / (4.0 * t)).sqrt();
    let mut c: Vec<f64> = x
        .iter()
        .map(|&xi| erfc_clipped(radius * (xi - 1.0) * scale) / xi)
        .collect();
    c[0] = 1.0;
    c[n - 1] = 0.0;

    let mut stepper = Stepper::new(eps, density_ratio, x);
    let mut full = vec![0.0; n];
    let mut half = vec![0.0; n];
    let mut half2 = vec![0.0; n];

    let mut samples = vec![(0.0, 1.0), (t, radius)];
    let mut flux = vec![(t, stepper.surface_gradient(&c) / radius)];
    let mut snapshots = Vec::new();
    let mut targets: Vec<f64> = cfg
        .snapshot_times
        .iter()
        .copied()
        .filter(|&s| s >= t)
        .collect();
    targets.sort_by(f64::total_cmp);
    let mut next_target = 0;
    for &s in &targets {
        if s == t {
            snapshots.push(field(&stepper.x, &c, radius, t, density_ratio));
            next_target += 1;
        }
    }
    let t_stop = cfg.t_end.unwrap_or(f64::INFINITY);

    let (mut cmin, mut cmax) = (0.0f64, 1.0f64);
    let mut dt = 1e-3 * t;
    let mut steps = 0;
    let mut rejected = 0;
    while t < t_stop && radius > cfg.stop_radius {
        if steps + rejected >= cfg.max_steps {
            return Err(Error::MaxSteps {
                steps: steps + rejected,
                t,
                radius,
            });
        }
        let target = targets.get(next_target).copied().unwrap_or(f64::INFINITY).min(t_stop);
        let landing = t + dt >= target;
        let h = if landing { target - t } else { dt };
        if h <= 1e-14 * t {
            return Err(Error::StepUnderflow { t, radius });
        }
        let trial = (|| {
            let r_full = stepper.step(&c, radius, h, &mut full)?;
            let r_half = stepper.step(&c, radius, 0.5 * h, &mut half)?;
            let r_half2 = stepper.step(&half, r_half, 0.5 * h, &mut half2)?;
            Some((r_full, r_half2))
        })();
        let Some((r_full, r_half)) = trial else {
            rejected += 1;
            dt = 0.25 * h;
            continue;
        };
        let err = full
            .iter()
            .zip(&half2)
            .map(|(a, b)| (a - b).abs())
            .fold((r_full - r_half).abs(), f64::max);
        let fac = if err == 0.0 {
            2.0
        } else {
            (0.9 * (cfg.local_tol / err).sqrt()).clamp(0.2, 2.0)
        };
        if err > cfg.local_tol {
            rejected += 1;
            dt = h * fac;
            continue;
        }
        for (ci, (a, b)) in c.iter_mut().zip(full.iter().zip(&half2)) {
            *ci = 2.0 * b - a;
        }
        let r_new = 2.0 * r_half - r_full;
        if r_new.is_nan() || r_new <= 0.0 {
            rejected += 1;
            dt = 0.25 * h;
            continue;
        }
        radius = r_new;
        t = if landing { target } else { t + h };
        steps += 1;
        for &ci in &c[1..n - 1] {
            cmin = cmin.min(ci);
            cmax = cmax.max(ci);
        }
        samples.push((t, radius));
        flux.push((t, stepper.surface_gradient(&c) / radius));
        if landing && next_target < targets.len() && t == targets[next_target] {
            snapshots.push(field(&stepper.x, &c, radius, t, density_ratio));
            next_target += 1;
            while next_target < targets.len() && targets[next_target] <= t {
                next_target += 1;
            }
        }
        if !landing {
            dt = h * fac;
        }
    }

    let curve = RadiusCurve::new(
        MethodId::PdeReference,
        eps,
        samples,
        format!("accepted steps; {} nodes stretched by {} to rhat = {:.4e}", n, cfg.stretch, rhat_max),
    )
    .with_tolerance("local_tol", cfg.local_tol)
    .with_tolerance("t_init", cfg.t_init)
    .with_tolerance("stop_radius", cfg.stop_radius);

    let window = match exact_t0 {
        Some(t0) => Some((0.1 * t0.min(t), 0.9 * t0.min(t))),
        None if eps != 0.0 => Some((0.1 * t, 0.9 * t)),
        None => None,
    };
    let (mut max_abs, mut max_rel) = (None::<f64>, None::<f64>);
    if let Some((lo, hi)) = window {
        for &(ts, rs) in curve.samples.iter().filter(|(ts, _)| (lo..=hi).contains(ts)) {
            if let Ok(re) = exact::radius_at(eps, ts) {
                let a = (rs - re).abs();
                max_abs = Some(max_abs.map_or(a, |m| m.max(a)));
                if re > 0.0 {
                    max_rel = Some(max_rel.map_or(a / re, |m| m.max(a / re)));
                }
            }
        }
    }
    let summary = RunSummary {
        epsilon: eps,
        density_ratio,
        nodes: n,
        rhat_max,
        stretch: cfg.stretch,
        first_spacing,
        steps,
        rejected_steps: rejected,
        final_t: t,
        final_radius: radius,
        concentration_min: cmin,
        concentration_max: cmax,
        comparison_window: window,
        max_abs_error_vs_exact: max_abs,
        max_rel_error_vs_exact: max_rel,
    };
    Ok(PdeSolution {
        curve,
        surface_flux: flux,
        snapshots,
        summary,
    })
}

fn field(x: &[f64], c: &[f64], radius: f64, t: f64, density_ratio: f64) -> MappedField {
    MappedField {
        rhat: x.to_vec(),
        concentration: c.to_vec(),
        radius,
        t,
        density_ratio,
    }
}

/// Outcome of re-running a case on a refined mesh.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    /// Time at which the two levels were compared.
    pub t: f64,
    pub radius_coarse: f64,
    pub radius_fine: f64,
    pub radius_change: f64,
    pub flux_change: f64,
}

/// Relative flux change above which a mesh counts as too coarse.
pub const FLUX_CONVERGENCE_LIMIT: f64 = 0.05;

/// Solves on `cfg` and on [`PdeConfig::refined`] and compares `R` and the
/// surface flux at time `t_compare`.
pub fn check_mesh_convergence(
    eps: f64,
    density_ratio: f64,
    cfg: &PdeConfig,
    t_compare: f64,
) -> Result<(ConvergenceReport, PdeSolution, PdeSolution)> {
    finite("t_compare", t_compare)?;
    let coarse = solve_moving_boundary(eps, density_ratio, cfg)?;
    // both levels must share the same domain
    let fine_cfg = PdeConfig {
        rhat_max: Some(coarse.summary.rhat_max),
        ..cfg.refined()
    };
    let fine = solve_moving_boundary(eps, density_ratio, &fine_cfg)?;
    let get = |s: &PdeSolution| -> Result<(f64, f64)> {
        match (s.radius_at(t_compare), s.flux_at(t_compare)) {
            (Some(r), Some(f)) => Ok((r, f)),
            _ => Err(Error::InvalidParameter {
                name: "t_compare",
                value: t_compare,
                reason: "outside the solved time span",
            }),
        }
    };
    let (rc, fc) = get(&coarse)?;
    let (rf, ff) = get(&fine)?;
    let report = ConvergenceReport {
        t: t_compare,
        radius_coarse: rc,
        radius_fine: rf,
        radius_change: ((rc - rf) / rf).abs(),
        flux_change: ((fc - ff) / ff).abs(),
    };
    if report.flux_change > FLUX_CONVERGENCE_LIMIT {
        return Err(Error::MeshNotConverged {
            relative_change: report.flux_change,
            limit: FLUX_CONVERGENCE_LIMIT,
        });
    }
    Ok((report, coarse, fine))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_spans_domain_with_constant_ratio() {
        let x = stretched_grid(200, 50.0, 1.02);
        assert_eq!(x.len(), 200);
        assert_eq!(x[0], 1.0);
        assert_eq!(*x.last().unwrap(), 50.0);
        let r = (x[2] - x[1]) / (x[1] - x[0]);
        assert!((r - 1.02).abs() < 1e-9);
        let fine = stretched_grid(399, 50.0, 1.02f64.sqrt());
        // every coarse node is a fine node
        for (i, xi) in x.iter().enumerate() {
            assert!((fine[2 * i] - xi).abs() < 1e-9 * xi, "node {i}");
        }
    }

    #[test]
    fn far_field_extent_undercuts_tolerance() {
        let x = far_field_extent(0.02, 466.5, 1e-6);
        let p = |x: f64| erfc_clipped(0.02 * (x - 1.0) * (PI / (4.0 * 466.5)).sqrt()) / x;
        assert!(p(x) < 1e-6 && p(0.99 * x) >= 1e-6);
        assert_eq!(far_field_extent(1.0, 1e-3, 1e-6), 10.0);
    }

    #[test]
    fn static_particle_keeps_radius_and_fixed_sphere_flux() {
        let cfg = PdeConfig {
            t_end: Some(1.0),
            nodes: 400,
            ..Default::default()
        };
        let sol = solve_moving_boundary(0.0, 1.0, &cfg).unwrap();
        assert!(sol.curve.radii().all(|r| r == 1.0));
        for t in [0.01, 0.1, 0.5, 1.0] {
            let want = -(1.0 + 1.0 / f64::sqrt(t));
            let got = sol.flux_at(t).unwrap();
            assert!(((got - want) / want).abs() < 0.02, "t={t}: {got} vs {want}");
        }
    }

    #[test]
    fn snapshot_recorded_at_requested_time() {
        let cfg = PdeConfig {
            t_end: Some(0.5),
            nodes: 300,
            snapshot_times: vec![0.25, 0.5],
            ..Default::default()
        };
        let sol = solve_moving_boundary(0.0, 2.0, &cfg).unwrap();
        assert_eq!(sol.snapshots.len(), 2);
        let s = &sol.snapshots[0];
        assert_eq!(s.t, 0.25);
        assert_eq!(s.concentration[0], 1.0);
        for (x, c) in s.rhat.iter().zip(&s.concentration).step_by(10) {
            let want = exact::concentration_profile(1.0, 0.25, *x).unwrap();
            assert!((c - want).abs() < 1e-3, "x={x}: {c} vs {want}");
        }
        assert!(s.to_csv().contains("rhat,C\n1e0,1e0\n"));
        assert_eq!(s.compound()[0], 1.0);
    }

    #[test]
    fn rejects_invalid_inputs() {
        let cfg = PdeConfig::default();
        assert!(solve_moving_boundary(0.1, 0.0, &cfg).is_err());
        assert!(matches!(
            solve_moving_boundary(-0.1, 1.0, &cfg),
            Err(Error::MissingEndTime { .. })
        ));
        let small = PdeConfig { nodes: 50, ..Default::default() };
        assert!(matches!(solve_moving_boundary(0.1, 1.0, &small), Err(Error::InvalidConfig(_))));
        let narrow = PdeConfig { rhat_max: Some(5.0), ..Default::default() };
        assert!(narrow.validate().is_err());
    }
}
