//! Command-line front end.
//!
//! Every failure is reported as a single line `<argument>: <message>` on the
//! error stream. Exit codes: 0 success, 2 bad arguments, 3 domain errors.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::error::{ContextKind, ContextValue, ErrorKind};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use qsdissolve::approx;
use qsdissolve::exact::{self, ParametricPoint};
use qsdissolve::pde::check_mesh_convergence;
use qsdissolve::report::{comparison_csv, curve_csv, fmt_display, fmt_raw, t0_table_csv};
use qsdissolve::{
    compare_methods, integrate_radius, nondimensionalize, solve_moving_boundary, t0_table, Error, IntegratorConfig,
    MethodId, PdeConfig, PhysicalScenario, RadiusCurve,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "qsdissolve", version, about = "Dissolution and growth of a spherical particle")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Write the result to this file instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Emit JSON instead of CSV.
    #[arg(long, global = true)]
    json: bool,

    /// Print numbers at full precision.
    #[arg(long, global = true)]
    raw: bool,

    #[command(flatten)]
    tolerances: Tolerances,
}

#[derive(Debug, Args)]
struct Tolerances {
    #[arg(long, global = true, env = "QSDISSOLVE_ODE_RTOL", default_value = "1e-10")]
    ode_rtol: f64,
    #[arg(long, global = true, env = "QSDISSOLVE_ODE_ATOL", default_value = "1e-10")]
    ode_atol: f64,
    /// Radius at which the integrator stops.
    #[arg(long, global = true, env = "QSDISSOLVE_ODE_MIN_RADIUS", default_value = "1e-8")]
    ode_min_radius: f64,
    /// Local error target of the moving-boundary solver.
    #[arg(long, global = true, env = "QSDISSOLVE_PDE_TOL", default_value = "1e-8")]
    pde_tol: f64,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Radius curve of one method.
    Curve {
        #[arg(long, allow_negative_numbers = true)]
        epsilon: f64,
        #[arg(long)]
        t_max: Option<f64>,
        #[arg(long, default_value_t = exact::DEFAULT_SAMPLES)]
        samples: usize,
        #[arg(long, default_value = "exact", value_parser = parse_method)]
        method: MethodId,
    },
    /// Radius of the exact solution at one time.
    Invert {
        #[arg(long, allow_negative_numbers = true)]
        epsilon: f64,
        #[arg(long)]
        t: f64,
    },
    /// Times to complete dissolution and the errors of the two simple estimates.
    T0Table {
        #[arg(long, value_delimiter = ',', required = true, allow_negative_numbers = true)]
        epsilons: Vec<f64>,
    },
    /// Several methods on one uniform time grid.
    Compare {
        #[arg(long, allow_negative_numbers = true)]
        epsilon: f64,
        #[arg(long, value_delimiter = ',', required = true, value_parser = parse_method)]
        methods: Vec<MethodId>,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        /// End of the grid; defaults to the exact dissolution time or 4/|epsilon|.
        #[arg(long)]
        t_max: Option<f64>,
    },
    /// Full moving-boundary problem.
    Pde(PdeArgs),
    /// Dimensionless parameter of a physical scenario.
    Nondim {
        /// Solubility (kg/m^3).
        #[arg(long, allow_negative_numbers = true)]
        cs: f64,
        /// Far-field concentration (kg/m^3).
        #[arg(long, allow_negative_numbers = true)]
        c0: f64,
        /// Particle density (kg/m^3).
        #[arg(long, allow_negative_numbers = true)]
        rho_p: f64,
        /// Medium density (kg/m^3).
        #[arg(long, allow_negative_numbers = true)]
        rho_m: f64,
        /// Diffusivity (m^2/s).
        #[arg(long, allow_negative_numbers = true)]
        d: f64,
        /// Initial radius (m).
        #[arg(long, allow_negative_numbers = true)]
        r0: f64,
    },
}

#[derive(Debug, Args)]
struct PdeArgs {
    #[arg(long, allow_negative_numbers = true)]
    epsilon: f64,
    /// Particle to medium density ratio.
    #[arg(long)]
    rho_ratio: f64,
    #[arg(long, default_value_t = 800)]
    nodes: usize,
    #[arg(long)]
    rhat_max: Option<f64>,
    #[arg(long, default_value_t = 1.02)]
    stretch: f64,
    /// Required when the particle does not dissolve.
    #[arg(long)]
    t_end: Option<f64>,
    #[arg(long, default_value_t = 0.02)]
    stop_radius: f64,
    /// Times at which to record the concentration field.
    #[arg(long, value_delimiter = ',')]
    snapshots: Vec<f64>,
    /// Directory receiving one `snapshot_<k>.csv` per recorded time.
    #[arg(long)]
    snapshot_dir: Option<PathBuf>,
    /// File receiving the JSON run summary.
    #[arg(long)]
    summary: Option<PathBuf>,
    /// Repeat the run on a refined mesh and compare at this time.
    #[arg(long)]
    check_mesh: Option<f64>,
}

fn parse_method(s: &str) -> Result<MethodId, String> {
    s.parse::<MethodId>().map_err(|e| {
        let names: Vec<&str> = MethodId::ALL.iter().map(|m| m.name()).collect();
        format!("{e}; expected one of {}", names.join(", "))
    })
}

#[derive(Debug)]
struct Failure {
    arg: String,
    message: String,
    code: i32,
}

fn domain(arg: &str) -> impl Fn(Error) -> Failure + '_ {
    move |e| Failure {
        arg: arg.to_string(),
        message: e.to_string(),
        code: EXIT_DOMAIN,
    }
}

fn usage(arg: &str, message: impl Into<String>) -> Failure {
    Failure {
        arg: arg.to_string(),
        message: message.into(),
        code: EXIT_USAGE,
    }
}

/// Picks the argument a core error most likely refers to.
fn blame(e: &Error, default: &'static str) -> &'static str {
    match e {
        Error::PastDissolution { .. } => "--t",
        Error::MissingEndTime { .. } => "--t-max",
        Error::TooFewSamples(_) => "--samples",
        Error::NonFinite { name, .. } | Error::InvalidParameter { name, .. } => match *name {
            "t" => "--t",
            "t_max" => "--t-max",
            "t_end" => "--t-end",
            "density_ratio" => "--rho-ratio",
            _ => default,
        },
        _ => default,
    }
}

fn core(default: &'static str) -> impl Fn(Error) -> Failure {
    move |e| domain(blame(&e, default))(e)
}

struct Ctx<'a> {
    json: bool,
    raw: bool,
    output: Option<PathBuf>,
    out: &'a mut dyn Write,
}

impl Ctx<'_> {
    fn emit(&mut self, text: &str) -> Result<(), Failure> {
        match &self.output {
            Some(path) => fs::write(path, text).map_err(|e| usage("--output", format!("{}: {e}", path.display()))),
            None => self
                .out
                .write_all(text.as_bytes())
                .map_err(|e| usage("--output", e.to_string())),
        }
    }

    fn emit_json<T: Serialize>(&mut self, value: &T) -> Result<(), Failure> {
        let mut s = serde_json::to_string_pretty(value).expect("serialisable");
        s.push('\n');
        self.emit(&s)
    }

    fn fmt(&self, x: f64) -> String {
        if self.raw {
            fmt_raw(x)
        } else {
            fmt_display(x)
        }
    }
}

/// Runs the command line `args` (including the program name).
pub fn run_cli<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => return report_clap(e, out, err),
    };
    let ode_cfg = IntegratorConfig {
        rel_tol: cli.tolerances.ode_rtol,
        abs_tol: cli.tolerances.ode_atol,
        min_radius: cli.tolerances.ode_min_radius,
        ..Default::default()
    };
    let mut ctx = Ctx {
        json: cli.json,
        raw: cli.raw,
        output: cli.output,
        out,
    };
    let result = ode_cfg
        .validate()
        .map_err(domain("--ode-rtol"))
        .and_then(|_| dispatch(cli.command, &ode_cfg, cli.tolerances.pde_tol, &mut ctx));
    match result {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(err, "{}: {}", f.arg, f.message.replace('\n', " "));
            f.code
        }
    }
}

fn report_clap(e: clap::Error, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
        let _ = write!(out, "{}", e.render());
        return EXIT_OK;
    }
    if e.kind() == ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand {
        let _ = writeln!(err, "command: a subcommand is required; see --help");
        return EXIT_USAGE;
    }
    let arg = match e.get(ContextKind::InvalidArg) {
        Some(ContextValue::String(s)) => s.split_whitespace().next().unwrap_or(s).to_string(),
        Some(ContextValue::Strings(v)) => v
            .iter()
            .map(|s| s.split_whitespace().next().unwrap_or(s))
            .collect::<Vec<_>>()
            .join(","),
        _ => match e.get(ContextKind::InvalidSubcommand) {
            Some(ContextValue::String(s)) => s.clone(),
            _ => "command".to_string(),
        },
    };
    let rendered = e.render().to_string();
    let first = rendered.lines().next().unwrap_or("invalid arguments");
    let message = first.strip_prefix("error: ").unwrap_or(first);
    let _ = writeln!(err, "{arg}: {message}");
    EXIT_USAGE
}

fn dispatch(cmd: Command, ode_cfg: &IntegratorConfig, pde_tol: f64, ctx: &mut Ctx) -> Result<(), Failure> {
    match cmd {
        Command::Curve {
            epsilon,
            t_max,
            samples,
            method,
        } => curve(epsilon, t_max, samples, method, ode_cfg, ctx),
        Command::Invert { epsilon, t } => invert(epsilon, t, ctx),
        Command::T0Table { epsilons } => {
            let rows = t0_table(&epsilons).map_err(domain("--epsilons"))?;
            if ctx.json {
                ctx.emit_json(&rows)
            } else {
                let s = t0_table_csv(&rows, ctx.raw);
                ctx.emit(&s)
            }
        }
        Command::Compare {
            epsilon,
            methods,
            samples,
            t_max,
        } => {
            if methods.contains(&MethodId::PdeReference) {
                return Err(usage("--methods", "pde curves come from the pde subcommand"));
            }
            let cmp = compare_methods(epsilon, &methods, samples, t_max, ode_cfg).map_err(core("--epsilon"))?;
            if ctx.json {
                ctx.emit_json(&cmp)
            } else {
                let s = comparison_csv(&cmp, ctx.raw);
                ctx.emit(&s)
            }
        }
        Command::Pde(args) => pde(args, pde_tol, ctx),
        Command::Nondim {
            cs,
            c0,
            rho_p,
            rho_m,
            d,
            r0,
        } => nondim(
            PhysicalScenario {
                solubility: cs,
                initial_concentration: c0,
                particle_density: rho_p,
                medium_density: rho_m,
                diffusivity: d,
                initial_radius: r0,
            },
            ctx,
        ),
    }
}

fn curve(
    eps: f64,
    t_max: Option<f64>,
    samples: usize,
    method: MethodId,
    ode_cfg: &IntegratorConfig,
    ctx: &mut Ctx,
) -> Result<(), Failure> {
    let curve = match method {
        MethodId::ExactQS => exact::exact_curve(eps, samples, t_max).map_err(core("--epsilon"))?,
        MethodId::PdeReference => return Err(usage("--method", "pde curves come from the pde subcommand")),
        MethodId::OdeOracle => {
            let sol = integrate_radius(eps, t_max.or_else(|| (eps == 0.0).then_some(1.0)), ode_cfg)
                .map_err(core("--epsilon"))?;
            let t_hi = t_max.or(sol.dissolution_time).unwrap_or(sol.curve.last().unwrap().0);
            let grid = uniform(t_hi, samples).map_err(core("--epsilon"))?;
            let pts = grid.iter().map(|&t| (t, sol.radius_at(t).unwrap_or(0.0))).collect();
            let mut c = RadiusCurve::new(method, eps, pts, "uniform in t, dense output");
            c.metadata.tolerances = sol.curve.metadata.tolerances.clone();
            c
        }
        m => {
            let t_hi = match t_max {
                Some(t) => t,
                None if eps > 0.0 => approx::approx_t0(m, eps).map_err(core("--epsilon"))?,
                None => return Err(domain("--t-max")(Error::MissingEndTime { epsilon: eps })),
            };
            let grid = uniform(t_hi, samples).map_err(core("--epsilon"))?;
            let pts = grid
                .iter()
                .map(|&t| approx::evaluate(m, eps, t).map(|r| (t, r)))
                .collect::<Result<Vec<_>, _>>()
                .map_err(core("--epsilon"))?;
            RadiusCurve::new(m, eps, pts, "uniform in t")
        }
    };
    if ctx.json {
        ctx.emit_json(&curve)
    } else {
        let s = curve_csv(&curve, ctx.raw);
        ctx.emit(&s)
    }
}

fn uniform(t_hi: f64, samples: usize) -> qsdissolve::Result<Vec<f64>> {
    if samples < 2 {
        return Err(Error::TooFewSamples(samples));
    }
    if !(t_hi > 0.0 && t_hi.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "t_max",
            value: t_hi,
            reason: "must be positive and finite",
        });
    }
    Ok((0..samples).map(|i| t_hi * i as f64 / (samples - 1) as f64).collect())
}

#[derive(Serialize)]
struct Inversion {
    epsilon: f64,
    #[serde(flatten)]
    point: ParametricPoint,
}

fn invert(eps: f64, t: f64, ctx: &mut Ctx) -> Result<(), Failure> {
    let point = exact::point_at(eps, t).map_err(core("--epsilon"))?;
    if ctx.json {
        return ctx.emit_json(&Inversion { epsilon: eps, point });
    }
    let s = format!(
        "# epsilon={}\n# regime={}\nt,R\n{},{}\n",
        fmt_raw(eps),
        point.regime,
        ctx.fmt(t),
        ctx.fmt(point.radius)
    );
    ctx.emit(&s)
}

#[derive(Serialize)]
struct NondimReport {
    scenario: PhysicalScenario,
    epsilon: f64,
    regime: qsdissolve::Regime,
    time_scale_s: f64,
    length_scale_m: f64,
    t0: Option<f64>,
    t0_s: Option<f64>,
}

fn nondim(scenario: PhysicalScenario, ctx: &mut Ctx) -> Result<(), Failure> {
    let arg = |e: &Error| match e {
        Error::InvalidParameter { name, .. } | Error::NonFinite { name, .. } => match *name {
            "solubility" => "--cs",
            "initial_concentration" => "--c0",
            "particle_density" => "--rho-p",
            "medium_density" => "--rho-m",
            "diffusivity" => "--d",
            "initial_radius" => "--r0",
            _ => "--cs",
        },
        _ => "--cs",
    };
    let p = nondimensionalize(&scenario).map_err(|e| domain(arg(&e))(e))?;
    let t0 = if p.regime.dissolves() {
        Some(exact::time_to_dissolution(p.epsilon).map_err(domain("--cs"))?)
    } else {
        None
    };
    let report = NondimReport {
        scenario,
        epsilon: p.epsilon,
        regime: p.regime,
        time_scale_s: p.time_scale,
        length_scale_m: p.length_scale,
        t0,
        t0_s: t0.map(|t| t * p.time_scale),
    };
    if ctx.json {
        return ctx.emit_json(&report);
    }
    let opt = |x: Option<f64>| x.map_or(String::new(), |v| ctx.fmt(v));
    let s = format!(
        "epsilon,regime,time_scale_s,length_scale_m,t0,t0_s\n{},{},{},{},{},{}\n",
        ctx.fmt(report.epsilon),
        report.regime,
        ctx.fmt(report.time_scale_s),
        ctx.fmt(report.length_scale_m),
        opt(report.t0),
        opt(report.t0_s)
    );
    ctx.emit(&s)
}

fn pde(args: PdeArgs, pde_tol: f64, ctx: &mut Ctx) -> Result<(), Failure> {
    let cfg = PdeConfig {
        nodes: args.nodes,
        rhat_max: args.rhat_max,
        stretch: args.stretch,
        local_tol: pde_tol,
        stop_radius: args.stop_radius,
        t_end: args.t_end,
        snapshot_times: args.snapshots.clone(),
        ..Default::default()
    };
    let config_arg = |e: &Error| -> &'static str {
        match e {
            Error::InvalidConfig(m) if m.starts_with("nodes") => "--nodes",
            Error::InvalidConfig(m) if m.starts_with("rhat_max") => "--rhat-max",
            Error::InvalidConfig(m) if m.starts_with("stretch") => "--stretch",
            Error::InvalidConfig(m) if m.starts_with("stop_radius") => "--stop-radius",
            Error::InvalidConfig(m) if m.starts_with("t_end") => "--t-end",
            Error::InvalidConfig(m) if m.starts_with("local_tol") => "--pde-tol",
            Error::MissingEndTime { .. } => "--t-end",
            Error::MeshNotConverged { .. } => "--nodes",
            e => blame(e, "--epsilon"),
        }
    };
    let fail = |e: Error| domain(config_arg(&e))(e);
    let (sol, convergence) = match args.check_mesh {
        Some(t) => {
            let (report, coarse, _) = check_mesh_convergence(args.epsilon, args.rho_ratio, &cfg, t).map_err(fail)?;
            (coarse, Some(report))
        }
        None => (solve_moving_boundary(args.epsilon, args.rho_ratio, &cfg).map_err(fail)?, None),
    };

    if let Some(dir) = &args.snapshot_dir {
        fs::create_dir_all(dir).map_err(|e| usage("--snapshot-dir", e.to_string()))?;
        for (k, snap) in sol.snapshots.iter().enumerate() {
            let path = dir.join(format!("snapshot_{k}.csv"));
            fs::write(&path, snap.to_csv()).map_err(|e| usage("--snapshot-dir", e.to_string()))?;
        }
    }
    #[derive(Serialize)]
    struct Summary<'a> {
        #[serde(flatten)]
        run: &'a qsdissolve::RunSummary,
        mesh_check: Option<qsdissolve::pde::ConvergenceReport>,
    }
    let summary = Summary {
        run: &sol.summary,
        mesh_check: convergence,
    };
    if let Some(path) = &args.summary {
        let s = serde_json::to_string_pretty(&summary).expect("serialisable");
        fs::write(path, s + "\n").map_err(|e| usage("--summary", e.to_string()))?;
    }
    if ctx.json {
        #[derive(Serialize)]
        struct Full<'a> {
            summary: Summary<'a>,
            curve: &'a RadiusCurve,
            surface_flux: &'a [(f64, f64)],
        }
        return ctx.emit_json(&Full {
            summary,
            curve: &sol.curve,
            surface_flux: &sol.surface_flux,
        });
    }
    let mut s = curve_csv(&sol.curve, ctx.raw);
    let header = format!("t,{}\n", MethodId::PdeReference);
    let mut lines = String::new();
    lines.push_str(&format!("# density_ratio={}\n", fmt_raw(args.rho_ratio)));
    lines.push_str(&format!("# rhat_max={}\n", fmt_raw(sol.summary.rhat_max)));
    if let Some(e) = sol.summary.max_rel_error_vs_exact {
        lines.push_str(&format!("# max_rel_error_vs_exact={}\n", fmt_raw(e)));
    }
    if let Some(c) = &summary.mesh_check {
        lines.push_str(&format!("# mesh_radius_change={}\n", fmt_raw(c.radius_change)));
        lines.push_str(&format!("# mesh_flux_change={}\n", fmt_raw(c.flux_change)));
    }
    // flux column next to the radius
    let body_start = s.find(&header).expect("curve csv header");
    let mut out = s[..body_start].to_string();
    out.push_str(&lines);
    out.push_str("t,pde,flux\n");
    for (&(t, r), &(_, f)) in sol.curve.samples.iter().skip(1).zip(&sol.surface_flux) {
        out.push_str(&format!("{},{},{}\n", ctx.fmt(t), ctx.fmt(r), ctx.fmt(f)));
    }
    s = out;
    ctx.emit(&s)
}
