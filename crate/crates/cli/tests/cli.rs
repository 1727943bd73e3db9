use qsdissolve_cli::{run_cli, EXIT_DOMAIN, EXIT_OK, EXIT_USAGE};

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run_cli(std::iter::once("qsdissolve").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn data_rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn static_curve_is_constant() {
    let (code, out, _) = run(&["curve", "--epsilon", "0", "--t-max", "1"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.lines().any(|l| l == "t,exact"));
    let rows = data_rows(&out);
    assert_eq!(rows.len(), 256);
    assert!(rows.iter().all(|r| r[1] == "1"));
}

#[test]
fn curve_of_each_closed_form() {
    for m in ["exact", "qss", "small-time", "intuitive", "duda", "blended", "ode"] {
        let (code, out, err) = run(&["curve", "--epsilon", "0.1", "--samples", "20", "--method", m]);
        assert_eq!(code, EXIT_OK, "{m}: {err}");
        let rows = data_rows(&out);
        assert_eq!(rows.len(), 20, "{m}");
        assert_eq!(rows[0][1], "1", "{m}");
        assert_eq!(rows.last().unwrap()[1], "0", "{m}");
    }
}

#[test]
fn invert_reports_known_radius() {
    let (code, out, _) = run(&["invert", "--epsilon", "0.1", "--t", "1.83532"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(data_rows(&out), vec![vec!["1.83532".to_string(), "0.455043".to_string()]]);
    let (_, json, _) = run(&["invert", "--epsilon", "-0.1", "--t", "50", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["regime"], "growth");
    assert!(v["radius"].as_f64().unwrap() > 1.0);
}

#[test]
fn table_prints_one_decimal_percentages() {
    let (code, out, _) = run(&["t0-table", "--epsilons", "0.01,0.0005"]);
    assert_eq!(code, EXIT_OK);
    let rows = data_rows(&out);
    assert_eq!(rows[0], ["0.01", "40.4212", "50", "23.7", "49.0196", "21.3"]);
    assert_eq!(rows[1][3], "5.0");
    assert_eq!(rows[1][5], "4.9");
}

#[test]
fn compare_emits_one_column_per_method() {
    let (code, out, _) = run(&["compare", "--epsilon", "0.01", "--methods", "exact,qss,duda,intuitive", "--samples", "50"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("t,exact,qss,duda,intuitive\n"));
    assert!(out.contains("# epsilon=0.01\n"));
    assert_eq!(out.lines().filter(|l| l.starts_with("# deviation")).count(), 4);
    assert_eq!(data_rows(&out).len(), 50);
    let (code, out, _) = run(&["compare", "--epsilon", "-0.01", "--methods", "exact,intuitive", "--t-max", "400", "--json"]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["times"].as_array().unwrap().last().unwrap(), 400.0);
}

#[test]
fn output_is_deterministic_and_raw_mode_is_exact() {
    let args = ["compare", "--epsilon", "0.3", "--methods", "exact,blended,ode", "--samples", "30"];
    assert_eq!(run(&args).1, run(&args).1);
    let (_, raw, _) = run(&["invert", "--epsilon", "0.1", "--t", "1", "--raw"]);
    let r: f64 = data_rows(&raw)[0][1].parse().unwrap();
    assert_eq!(r, qsdissolve::radius_at(0.1, 1.0).unwrap());
}

#[test]
fn output_file_receives_result() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("table.csv");
    let (code, out, _) = run(&["t0-table", "--epsilons", "0.1", "--output", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    assert!(out.is_empty());
    assert!(std::fs::read_to_string(path).unwrap().contains("0.1,2.69711,5,85.4"));
}

#[test]
fn nondim_reports_epsilon_and_scales() {
    let (code, out, _) = run(&[
        "nondim", "--cs", "10", "--c0", "0", "--rho-p", "2000", "--rho-m", "1000", "--d", "1e-9", "--r0", "1e-5", "--json",
    ]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let eps = 10.0 / (std::f64::consts::PI * 2000.0 * (1.0 - 10.0 / 1000.0));
    assert!((v["epsilon"].as_f64().unwrap() - eps).abs() < 1e-15);
    assert_eq!(v["regime"], "dissolution");
    let (code, _, err) = run(&["nondim", "--cs", "10", "--c0", "0", "--rho-p", "-1", "--rho-m", "1000", "--d", "1e-9", "--r0", "1e-5"]);
    assert_eq!(code, EXIT_DOMAIN);
    assert!(err.starts_with("--rho-p: "), "{err}");
}

#[test]
fn pde_writes_summary_and_snapshots() {
    let dir = tempfile::tempdir().unwrap();
    let summary = dir.path().join("run.json");
    let snaps = dir.path().join("snaps");
    let (code, out, err) = run(&[
        "pde",
        "--epsilon",
        "0.05",
        "--rho-ratio",
        "1",
        "--nodes",
        "300",
        "--t-end",
        "0.5",
        "--snapshots",
        "0.1,0.5",
        "--snapshot-dir",
        snaps.to_str().unwrap(),
        "--summary",
        summary.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_OK, "{err}");
    assert!(out.contains("t,pde,flux\n"));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(summary).unwrap()).unwrap();
    assert_eq!(v["final_t"], 0.5);
    assert_eq!(v["nodes"], 300);
    assert!(v["max_rel_error_vs_exact"].is_number());
    let first = std::fs::read_to_string(snaps.join("snapshot_0.csv")).unwrap();
    assert!(first.starts_with("# t=1e-1\n"));
    assert!(snaps.join("snapshot_1.csv").exists());
}

#[test]
fn environment_overrides_default_tolerances() {
    // runs in-process, so the variable is set only for the child binary
    let bin = env!("CARGO_BIN_EXE_qsdissolve");
    let out = std::process::Command::new(bin)
        .args(["curve", "--epsilon", "0.1", "--method", "ode", "--samples", "3"])
        .env("QSDISSOLVE_ODE_RTOL", "1e-6")
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("# rel_tol=1e-6\n"));
    let out = std::process::Command::new(bin)
        .args(["curve", "--epsilon", "0.1", "--method", "ode"])
        .env("QSDISSOLVE_ODE_RTOL", "0.5")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(EXIT_DOMAIN));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("--ode-rtol: "));
}

#[test]
fn argument_errors_exit_with_usage_code() {
    for (args, prefix) in [
        (&["compare", "--epsilon", "0.1", "--methods", "exact,fast"][..], "--methods: "),
        (&["curve", "--epsilon", "abc"][..], "--epsilon: "),
        (&["invert", "--epsilon", "0.1"][..], "--t"),
        (&["curve", "--epsilon", "0.1", "--method", "pde"][..], "--method: "),
        (&["simulate"][..], "simulate: "),
        (&[][..], "command: "),
    ] {
        let (code, _, err) = run(args);
        assert_eq!(code, EXIT_USAGE, "{args:?}: {err}");
        assert!(err.starts_with(prefix), "{args:?}: {err}");
        assert_eq!(err.lines().count(), 1, "{args:?}: {err}");
    }
}

#[test]
fn domain_errors_exit_with_domain_code() {
    for (args, prefix, needle) in [
        (&["invert", "--epsilon", "0.1", "--t", "5"][..], "--t: ", "past"),
        (&["t0-table", "--epsilons", "0.1,2.5"][..], "--epsilons: ", "(0, 2)"),
        (&["compare", "--epsilon", "0.7", "--methods", "exact,blended"][..], "--epsilon: ", "[-0.5, 0.5]"),
        (&["curve", "--epsilon", "-0.2"][..], "--t-max: ", "end time"),
        (&["curve", "--epsilon", "0.1", "--samples", "1"][..], "--samples: ", "2"),
        (&["pde", "--epsilon", "0.1", "--rho-ratio", "1", "--nodes", "20"][..], "--nodes: ", "100"),
        (&["pde", "--epsilon", "-0.1", "--rho-ratio", "1"][..], "--t-end: ", "end time"),
        (&["pde", "--epsilon", "0.1", "--rho-ratio", "0"][..], "--rho-ratio: ", "positive"),
    ] {
        let (code, _, err) = run(args);
        assert_eq!(code, EXIT_DOMAIN, "{args:?}: {err}");
        assert!(err.starts_with(prefix), "{args:?}: {err}");
        assert!(err.contains(needle), "{args:?}: {err}");
        assert_eq!(err.lines().count(), 1);
    }
}

#[test]
fn help_and_version_succeed() {
    let (code, out, _) = run(&["--help"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("t0-table"));
    let (code, out, _) = run(&["--version"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains(env!("CARGO_PKG_VERSION")));
}
