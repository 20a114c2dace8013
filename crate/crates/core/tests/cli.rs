//! Config loading, presets, sweeps, static profiles and the `simulate`
//! binary's exit-code contract.

use std::process::{Command, Output};

use molspin::cli::{
    parse_config, preset, run_scenario, run_sweep, static_profile, write_csv, CliError,
    ScenarioRun, SweepParameter, SweepSpec, CSV_HEADER, PRESET_NAMES, UNITS_LINE,
};
use molspin::observables::{static_concurrence, ObservableRecord};

fn simulate(args: &[&str], config: Option<&str>) -> Output {
    let dir = tempfile::tempdir().unwrap();
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_simulate"));
    if let Some(text) = config {
        let path = dir.path().join("scenario.toml");
        std::fs::write(&path, text).unwrap();
        cmd.arg("--config").arg(path);
    }
    cmd.args(args).env("RUST_LOG", "off").output().unwrap()
}

fn config_error(text: &str) -> String {
    match parse_config(text, None) {
        Err(CliError::Config(m)) => m,
        other => panic!("expected a config error, got {other:?}"),
    }
}

/// A static molecule at separation `d`, integrated coarsely.
fn static_config(d: f64, beta: f64) -> String {
    format!(
        r#"
scenario = "custom"
[trajectory]
kind = "harmonic"
x1_0 = {x}
x2_0 = {y}
amplitude = 0.0
period = 20.0
[fields]
b0 = 1.3
b1 = 2.4
sigma = 120.0
j0 = 1e4
[bath]
kind = "bosonic"
kappa = 0.01
beta = {beta}
[integrator]
steps_per_period = 400
max_cycles = 5
[output]
stride = 20
"#,
        x = -d / 2.0,
        y = d / 2.0
    )
}

#[test]
fn presets_resolve_and_round_trip() {
    for name in PRESET_NAMES {
        let cfg = preset(name).unwrap();
        cfg.validate().unwrap();
        let text = cfg.to_toml();
        let back = parse_config(&text, None).unwrap();
        assert_eq!(back, cfg, "{name}:\n{text}");
    }
    assert!(preset("fig5").is_none());
}

#[test]
fn preset_parameters() {
    let fig3 = parse_config("scenario = \"fig3\"", None).unwrap();
    let text = fig3.to_toml();
    for line in ["x1_0 = -20.0", "amplitude = 5.0", "period = 100.0", "b0 = 1.3", "b1 = 2.4", "sigma = 120.0", "j0 = 10000.0", "kappa = 0.01", "beta = 1.0"] {
        assert!(text.contains(line), "{line} missing from\n{text}");
    }
    let cme = parse_config("scenario = \"cme-spingas\"", None).unwrap().to_toml();
    assert!(cme.contains("gamma = 0.025") && cme.contains("s = 0.16"), "{cme}");
    let fig4 = preset("fig4").unwrap().to_toml();
    for line in ["x1_0 = -25.0", "amplitude = 10.0", "b1 = 1.2", "j0 = 1200.0", "s = 0.2"] {
        assert!(fig4.contains(line), "{line} missing from\n{fig4}");
    }
}

#[test]
fn file_sections_replace_preset_sections() {
    let cfg = parse_config(
        "scenario = \"fig3\"\n[bath]\nkind = \"spin_gas\"\ngamma = 0.05\ns = 0.1\n",
        None,
    )
    .unwrap();
    assert_eq!(cfg.trajectory, preset("fig3").unwrap().trajectory);
    assert!(cfg.to_toml().contains("gamma = 0.05"));
    let over = parse_config("scenario = \"fig3\"", Some("lms-tau6")).unwrap();
    assert_eq!(over.scenario, "lms-tau6");
}

#[test]
fn config_errors_name_the_problem() {
    assert!(config_error("scenario = \"fig3\"\nbogus = 1\n").contains("bogus"));
    assert!(config_error("scenario = \"fig3\"\n[integrator]\nstep_per_period = 500\n")
        .contains("step_per_period"));
    assert!(config_error("scenario = \"fig3\"\n[integrator]\nsteps_per_period = 50\n")
        .contains("steps_per_period"));
    assert!(config_error("scenario = \"fig3\"\n[integrator]\ncycle_tol = 1.5\n").contains("cycle_tol"));
    assert!(config_error("scenario = \"fig9\"\n").contains("fig9"));
    assert!(config_error("scenario = \"custom\"\n").contains("trajectory"));
    assert!(config_error("scenario = \"fig3\"\n[bath]\nkind = \"spin_gas\"\ngamma = 0.1\ns = 0.7\n")
        .contains("s must lie"));
    let parse = config_error("scenario = \"fig3\"\n[bath\n");
    assert!(parse.contains("line 2"), "{parse}");
}

#[test]
fn binary_exit_codes() {
    let bad = simulate(&[], Some("scenario = \"fig3\"\nunknown_key = 2\n"));
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("unknown_key"));

    let malformed = simulate(&[], Some("scenario = \n"));
    assert_eq!(malformed.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&malformed.stderr).contains("line 1"));

    assert_eq!(simulate(&["--preset", "nope"], None).status.code(), Some(2));
    assert_eq!(simulate(&["--preset", "fig3", "--sweep", "zeta=1"], None).status.code(), Some(2));
    assert_eq!(simulate(&["--preset", "fig3", "--sweep", "gamma=0.1"], None).status.code(), Some(2));

    // One step per unit time is far outside the RK4 stability region.
    let unstable = simulate(
        &["--out", "-"],
        Some("scenario = \"fig3\"\n[integrator]\nsteps_per_period = 100\n"),
    );
    assert_eq!(unstable.status.code(), Some(3), "{}", String::from_utf8_lossy(&unstable.stderr));

    let ok = simulate(&["--print-config"], Some("scenario = \"constspeed\"\n"));
    assert_eq!(ok.status.code(), Some(0));
    let printed = String::from_utf8(ok.stdout).unwrap();
    assert_eq!(parse_config(&printed, None).unwrap(), preset("constspeed").unwrap());
}

#[test]
fn static_run_sits_on_the_thermal_state() {
    for (d, beta) in [(40.0, 1.0), (20.0, 10.0)] {
        let cfg = parse_config(&static_config(d, beta), None).unwrap();
        let run = run_scenario(&cfg).unwrap();
        assert!(run.summary.converged);
        let j = 1e4 / (d * d * d);
        let b = 1.3 - 2.4 * (-(d / 2.0) * (d / 2.0) / 120.0f64).exp();
        let expected = static_concurrence(j, b, beta);
        for r in &run.records {
            assert!((r.concurrence - expected).abs() < 1e-8, "{} vs {expected}", r.concurrence);
            assert!(r.heat_current.abs() < 1e-8);
        }
        if beta > 5.0 {
            assert!(expected > 0.1);
        } else {
            assert_eq!(expected, 0.0);
        }
    }
}

#[test]
fn csv_layout() {
    let cfg = parse_config(&static_config(40.0, 1.0), None).unwrap();
    let run = run_scenario(&cfg).unwrap();
    let mut buf = Vec::new();
    write_csv(&mut buf, &run).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some(UNITS_LINE));
    assert_eq!(lines.next(), Some(CSV_HEADER));
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).skip(1).collect();
    assert_eq!(rows.len(), run.records.len());
    assert!(rows.iter().all(|r| r.split(',').count() == 9));
    assert!(text.contains("# converged=true"));
    // Cycles are sampled every 20 of 400 steps, cycle ends reported once.
    assert_eq!(run.records.len(), 20 * run.summary.n_cycles + 1);

    // Undefined spectral temperature is an empty field; infinity is "inf".
    let rec = |t_spec| ObservableRecord {
        t: 0.5,
        d: 40.0,
        j: 0.15625,
        b: 1e-7,
        p_g: None,
        concurrence: 0.0,
        heat_current: -0.0,
        entropy: 1.0,
        spectral_temperature: t_spec,
    };
    let synthetic = ScenarioRun {
        records: vec![rec(None), rec(Some(f64::INFINITY))],
        first_cycle: vec![],
        asymptotic_cycle: vec![],
        summary: run.summary.clone(),
    };
    let mut buf = Vec::new();
    write_csv(&mut buf, &synthetic).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert!(text.contains("\n0.5,40.0,0.15625,1e-7,,0.0,-0.0,1.0,\n"), "{text}");
    assert!(text.contains("\n0.5,40.0,0.15625,1e-7,,0.0,-0.0,1.0,inf\n"), "{text}");
}

#[test]
fn sweep_specs() {
    let s: SweepSpec = "gamma=log:0.01:0.3:5".parse().unwrap();
    assert_eq!(s.parameter, SweepParameter::Gamma);
    assert_eq!(s.values.len(), 5);
    assert_eq!((s.values[0], s.values[4]), (0.01, 0.3));
    assert!(s.values.windows(2).all(|w| (w[1] / w[0] - (30.0f64).powf(0.25)).abs() < 1e-12));
    let s: SweepSpec = "tau=6,20,100".parse().unwrap();
    assert_eq!(s.values, vec![6.0, 20.0, 100.0]);
    for bad in ["tau", "omega=1", "tau=", "tau=1,x", "beta=log:0:1:3", "beta=log:1:2"] {
        assert!(bad.parse::<SweepSpec>().is_err(), "{bad}");
    }
}

#[test]
fn sweeps_are_ordered_and_validated() {
    let mut cfg = preset("fig4").unwrap();
    cfg.integrator.steps_per_period = 1000;
    cfg.output.stride = 10;
    let single = run_sweep(&cfg, &"tau=20".parse().unwrap()).unwrap();
    let mut direct = cfg.clone();
    if let molspin::molecule::Trajectory::Harmonic { period, .. } = &mut direct.trajectory {
        *period = 20.0;
    }
    let run = run_scenario(&direct).unwrap();
    assert_eq!(single.len(), 1);
    assert_eq!(single[0].c_m, run.summary.c_max);
    assert_eq!(single[0].converged, run.summary.converged);

    let pts = run_sweep(&cfg, &"s=0.3,0.1,0.2".parse().unwrap()).unwrap();
    assert_eq!(pts.iter().map(|p| p.value).collect::<Vec<_>>(), vec![0.1, 0.2, 0.3]);
    assert!(pts.iter().all(|p| p.error.is_none()));
    // More local excitation means less entanglement.
    assert!(pts[0].c_m >= pts[1].c_m && pts[1].c_m >= pts[2].c_m);

    assert!(matches!(run_sweep(&cfg, &"s=0.1,0.9".parse().unwrap()), Err(CliError::Config(_))));
    assert!(matches!(run_sweep(&cfg, &"kappa=0.1".parse().unwrap()), Err(CliError::Config(_))));
}

#[test]
fn static_profiles() {
    let fig3 = static_profile(&preset("fig3").unwrap()).unwrap();
    assert_eq!(fig3.len(), 201);
    assert!(fig3.iter().all(|r| r.c_static == 0.0 && r.critical < 1.0));

    let mut cold = preset("fig3").unwrap();
    if let molspin::environment::BathSpec::Bosonic(b) = &mut cold.bath {
        b.beta = 10.0;
    }
    let cold = static_profile(&cold).unwrap();
    let closest = cold.iter().min_by(|a, b| a.d.total_cmp(&b.d)).unwrap();
    assert!(closest.c_static > 0.0);

    let mut fig4 = preset("fig4").unwrap();
    fig4.output.stride = 500;
    let gas = static_profile(&fig4).unwrap();
    assert!(gas.iter().all(|r| r.c_static == 0.0 && r.critical < 0.2));
}

#[test]
fn driven_molecule_is_colder_than_the_bath() {
    let run = run_scenario(&preset("fig3").unwrap()).unwrap();
    let t_min = run.summary.t_spec_min.unwrap();
    assert!(t_min < 1.0, "min spectral temperature {t_min}");
    assert!(run.summary.c_max > 0.0);
    assert!(static_profile(&preset("fig3").unwrap()).unwrap().iter().all(|r| r.c_static == 0.0));
}
