//! Tables and method comparisons behind the CLI output.

use serde::{Deserialize, Serialize};

use crate::approx;
use crate::curve::MethodId;
use crate::error::{finite, Error, Result};
use crate::exact;
use crate::ode::{integrate_radius, IntegratorConfig, OdeSolution};

/// Predicted dissolution times for one `eps`, relative errors in percent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub epsilon: f64,
    pub t0_exact: f64,
    pub t0_qss: f64,
    pub t0_intuitive: f64,
    pub rel_err_qss: f64,
    pub rel_err_intuitive: f64,
}

impl ReportRow {
    pub fn new(eps: f64) -> Result<Self> {
        if !(eps > 0.0 && eps < 2.0) {
            return Err(Error::EpsilonOutOfRange {
                epsilon: eps,
                valid: "(0, 2)",
            });
        }
        let t0_exact = exact::time_to_dissolution(eps)?;
        let t0_qss = approx::qss_t0(eps)?;
        let t0_intuitive = approx::intuitive_t0(eps)?;
        let pct = |x: f64| 100.0 * (x - t0_exact) / t0_exact;
        Ok(ReportRow {
            epsilon: eps,
            t0_exact,
            t0_qss,
            t0_intuitive,
            rel_err_qss: pct(t0_qss),
            rel_err_intuitive: pct(t0_intuitive),
        })
    }
}

pub fn t0_table(epsilons: &[f64]) -> Result<Vec<ReportRow>> {
    epsilons.iter().map(|&e| ReportRow::new(e)).collect()
}

/// Deviation of one method from the exact curve on the comparison grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Deviation {
    pub method: MethodId,
    pub max_abs: f64,
    pub rms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub epsilon: f64,
    pub methods: Vec<MethodId>,
    pub times: Vec<f64>,
    /// `columns[j][i]` is method `j` at `times[i]`.
    pub columns: Vec<Vec<f64>>,
    pub summary: Vec<Deviation>,
    pub tolerances: Vec<(String, f64)>,
}

/// Default end of the comparison grid: the exact dissolution time, or `4/|eps|`
/// when the particle grows.
pub fn default_t_max(eps: f64) -> Result<f64> {
    if eps > 0.0 {
        exact::time_to_dissolution(eps)
    } else if eps < 0.0 {
        Ok(4.0 / eps.abs())
    } else {
        Ok(1.0)
    }
}

/// Evaluates every method on a uniform grid of `samples` points over `[0, t_max]`.
pub fn compare_methods(
    eps: f64,
    methods: &[MethodId],
    samples: usize,
    t_max: Option<f64>,
    ode_cfg: &IntegratorConfig,
) -> Result<Comparison> {
    finite("epsilon", eps)?;
    if samples < 2 {
        return Err(Error::TooFewSamples(samples));
    }
    if methods.contains(&MethodId::Blended) && !(eps >= approx::BLEND_DOMAIN.0 && eps <= approx::BLEND_DOMAIN.1) {
        return Err(Error::EpsilonOutOfRange {
            epsilon: eps,
            valid: "[-0.5, 0.5] for blended",
        });
    }
    if methods.contains(&MethodId::PdeReference) {
        return Err(Error::InvalidConfig("pde curves come from the pde subcommand".into()));
    }
    let t_max = match t_max {
        Some(t) => finite("t_max", t)?,
        None => default_t_max(eps)?,
    };
    if t_max.is_nan() || t_max <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "t_max",
            value: t_max,
            reason: "must be positive",
        });
    }
    let times: Vec<f64> = (0..samples)
        .map(|i| t_max * i as f64 / (samples - 1) as f64)
        .collect();
    let ode = if methods.contains(&MethodId::OdeOracle) {
        Some(integrate_radius(eps, (eps <= 0.0).then_some(t_max), ode_cfg)?)
    } else {
        None
    };
    let exact_col = column(MethodId::ExactQS, eps, &times, ode.as_ref())?;
    let mut columns = Vec::with_capacity(methods.len());
    let mut summary = Vec::with_capacity(methods.len());
    for &m in methods {
        let col = if m == MethodId::ExactQS {
            exact_col.clone()
        } else {
            column(m, eps, &times, ode.as_ref())?
        };
        let (mut max_abs, mut sq) = (0.0f64, 0.0);
        for (a, b) in col.iter().zip(&exact_col) {
            let d = (a - b).abs();
            max_abs = max_abs.max(d);
            sq += d * d;
        }
        summary.push(Deviation {
            method: m,
            max_abs,
            rms: (sq / col.len() as f64).sqrt(),
        });
        columns.push(col);
    }
    let mut tolerances = vec![("bisection_iterations".to_string(), crate::bisect::MAX_ITERATIONS as f64)];
    if ode.is_some() {
        tolerances.push(("ode_rel_tol".into(), ode_cfg.rel_tol));
        tolerances.push(("ode_abs_tol".into(), ode_cfg.abs_tol));
        tolerances.push(("ode_min_radius".into(), ode_cfg.min_radius));
    }
    Ok(Comparison {
        epsilon: eps,
        methods: methods.to_vec(),
        times,
        columns,
        summary,
        tolerances,
    })
}

fn column(method: MethodId, eps: f64, times: &[f64], ode: Option<&OdeSolution>) -> Result<Vec<f64>> {
    times
        .iter()
        .map(|&t| match method {
            MethodId::ExactQS => {
                let t0 = if eps > 0.0 { exact::time_to_dissolution(eps)? } else { f64::INFINITY };
                if t >= t0 {
                    Ok(0.0)
                } else {
                    exact::radius_at(eps, t)
                }
            }
            MethodId::OdeOracle => Ok(ode.and_then(|s| s.radius_at(t)).unwrap_or(0.0)),
            m => approx::evaluate(m, eps, t),
        })
        .collect()
}

/// Six significant digits, trailing zeros trimmed.
pub fn fmt_display(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    if !(-4..6).contains(&exp) {
        let s = format!("{x:.5e}");
        let (m, e) = s.split_once('e').unwrap();
        return format!("{}e{e}", trim_zeros(m));
    }
    let decimals = (5 - exp).max(0) as usize;
    trim_zeros(&format!("{x:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Shortest representation that round-trips.
pub fn fmt_raw(x: f64) -> String {
    format!("{x:?}")
}

fn fmt(x: f64, raw: bool) -> String {
    if raw {
        fmt_raw(x)
    } else {
        fmt_display(x)
    }
}

pub fn t0_table_csv(rows: &[ReportRow], raw: bool) -> String {
    let mut s = String::from("# dissolution times; relative errors in percent\n");
    s.push_str("epsilon,t0_exact,t0_qss,rel_err_qss,t0_intuitive,rel_err_intuitive\n");
    for r in rows {
        let pct = |x: f64| if raw { fmt_raw(x) } else { format!("{x:.1}") };
        s.push_str(&format!(
            "{},{},{},{},{},{}\n",
            fmt(r.epsilon, raw),
            fmt(r.t0_exact, raw),
            fmt(r.t0_qss, raw),
            pct(r.rel_err_qss),
            fmt(r.t0_intuitive, raw),
            pct(r.rel_err_intuitive)
        ));
    }
    s
}

pub fn comparison_csv(cmp: &Comparison, raw: bool) -> String {
    let mut s = format!("# epsilon={}\n", fmt_raw(cmp.epsilon));
    s.push_str(&format!("# version={}\n", env!("CARGO_PKG_VERSION")));
    for (name, v) in &cmp.tolerances {
        s.push_str(&format!("# {name}={}\n", fmt_raw(*v)));
    }
    for d in &cmp.summary {
        s.push_str(&format!(
            "# deviation {}: max_abs={} rms={}\n",
            d.method,
            fmt(d.max_abs, raw),
            fmt(d.rms, raw)
        ));
    }
    s.push('t');
    for m in &cmp.methods {
        s.push(',');
        s.push_str(m.name());
    }
    s.push('\n');
    for (i, &t) in cmp.times.iter().enumerate() {
        s.push_str(&fmt(t, raw));
        for col in &cmp.columns {
            s.push(',');
            s.push_str(&fmt(col[i], raw));
        }
        s.push('\n');
    }
    s
}

/// CSV of a single curve with its metadata.
pub fn curve_csv(curve: &crate::curve::RadiusCurve, raw: bool) -> String {
    let mut s = format!("# epsilon={}\n# method={}\n", fmt_raw(curve.epsilon), curve.method);
    s.push_str(&format!("# version={}\n# grid={}\n", env!("CARGO_PKG_VERSION"), curve.metadata.grid));
    for (name, v) in &curve.metadata.tolerances {
        s.push_str(&format!("# {name}={}\n", fmt_raw(*v)));
    }
    s.push_str(&format!("t,{}\n", curve.method));
    for &(t, r) in &curve.samples {
        s.push_str(&format!("{},{}\n", fmt(t, raw), fmt(r, raw)));
    }
    s
}
