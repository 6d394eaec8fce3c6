use std::path::Path;
use std::process::{Command, Output};

fn abshift(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_abshift"))
        .args(args)
        .env_remove("ABSHIFT_OUTPUT_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn value(text: &str, key: &str) -> String {
    text.lines()
        .find_map(|l| l.strip_prefix(&format!("{key} = ")))
        .unwrap_or_else(|| panic!("no {key} in\n{text}"))
        .to_string()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("valid JSON")
}

#[test]
fn string_odd_branch() {
    let o = abshift(&["string", "--n0", "101", "--phi", "0.3"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let t = stdout(&o);
    assert_eq!(value(&t, "S_N"), "0.3");
    assert_eq!(value(&t, "parity"), "odd");
}

#[test]
fn flux_flags_are_exclusive() {
    let o = abshift(&["string", "--n0", "10", "--phi", "0.1", "--flux-wb", "1e-16"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("cannot be used with"), "{}", stderr(&o));
    assert!(o.stdout.is_empty());
}

#[test]
fn missing_flux_is_a_config_error() {
    let o = abshift(&["string", "--n0", "10"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--phi"));
}

#[test]
fn no_arguments_prints_usage() {
    let o = abshift(&[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("Usage"));
}

#[test]
fn help_exits_zero() {
    let o = abshift(&["--help"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("sweep"));
}

#[test]
fn bad_value_names_key_and_unit() {
    let o = abshift(&["string", "--n0", "10", "--phi", "0.1", "--d", "-1"]);
    assert_eq!(o.status.code(), Some(2));
    let e = stderr(&o);
    assert!(e.contains("--d") && e.contains(" m,"), "{e}");
}

#[test]
fn cylinder_json_leaves_ab_only() {
    for phi in ["0.2", "-0.31", "0.45"] {
        let o = abshift(&["cylinder", "--n", "1000000000", "--phi", phi, "--format", "json"]);
        assert!(o.status.success(), "{}", stderr(&o));
        let v = json(&o);
        assert_eq!(v["supplementary"].as_f64(), Some(0.0));
        assert_eq!(v["total"], v["ab"]);
        assert_eq!(v["S_avg"].as_f64(), Some(0.0));
    }
    let o = abshift(&["cylinder", "--n", "10", "--phi", "0.3"]);
    assert!(stderr(&o).contains("beyond"));
}

#[test]
fn shield_phase_is_quarter_pi() {
    let o = abshift(&["measure", "shield", "--format", "json"]);
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["dPhase"].as_f64(), Some(std::f64::consts::FRAC_PI_4));
    assert_eq!(v["destroys_interference"], true);
}

#[test]
fn semistring_at_threshold() {
    let o = abshift(&["measure", "semistring", "--phi", "1", "--dz", "1e-8", "--format", "json"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v = json(&o);
    let b = v["threshold_field"].as_f64().unwrap();
    let o = abshift(&[
        "measure", "semistring", "--phi", "1", "--dz", "1e-8", "--field", &format!("{b:e}"),
        "--format", "json",
    ]);
    let v = json(&o);
    let product = v["product"].as_f64().unwrap();
    let b_e = v["B_e"].as_f64().unwrap();
    assert!((product - b_e).abs() < 1e-9 * b_e, "{product} vs {b_e}");
}

#[test]
fn selfcheck_passes() {
    let o = abshift(&["selfcheck"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("9 of 9 checks passed"));
}

#[test]
fn sweep_output_is_deterministic() {
    let args = ["sweep", "--count", "201", "--outputs", "S_even,S_odd,S_avg,ab_shift"];
    let a = abshift(&args);
    let b = abshift(&args);
    let mut seq = args.to_vec();
    seq.push("--sequential");
    let c = abshift(&seq);
    assert!(a.status.success(), "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
    let t = stdout(&a);
    assert!(t.starts_with("# abshift-version:"));
    assert!(t.contains("phi (h/e),S_even (1),S_odd (1),S_avg (1),ab_shift (rad),status"));
    assert_eq!(t.lines().filter(|l| !l.starts_with('#')).count(), 202);
}

#[test]
fn sweep_writes_files_under_output_dir() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_abshift"))
        .args(["sweep", "--count", "11", "-o", "fig.csv", "--svg", "fig.svg"])
        .env("ABSHIFT_OUTPUT_DIR", dir.path())
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(o.stdout.is_empty());
    let csv = std::fs::read_to_string(dir.path().join("fig.csv")).unwrap();
    assert!(csv.contains("S_even (1)"));
    let svg = std::fs::read_to_string(dir.path().join("fig.svg")).unwrap();
    assert!(svg.starts_with("<svg") || svg.starts_with("<?xml"));
}

#[test]
fn temperature_sweep_defaults_to_window() {
    let o = abshift(&[
        "sweep", "--variable", "temperature", "--radius", "1e-6", "--phi", "0.3", "--count", "4",
        "--outputs", "C_T_direct,C_T_asymptotic",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let t = stdout(&o);
    assert!(t.contains("T (K),C_T_direct"), "{t}");
    let o = abshift(&["sweep", "--variable", "temperature", "--outputs", "C_T_direct"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn text_and_json_agree() {
    let base = ["rotator", "--n", "3", "--phi", "0.25", "--t", "1e-12"];
    let text = stdout(&abshift(&base));
    let mut args = base.to_vec();
    args.extend(["--format", "json"]);
    let v = json(&abshift(&args));
    let obj = v.as_object().unwrap();
    assert_eq!(obj.len(), text.lines().count());
    for (k, j) in obj {
        let t = value(&text, k);
        if let Some(x) = j.as_f64() {
            assert_eq!(t.parse::<f64>().unwrap(), x, "{k}");
        } else {
            assert_eq!(t, j.to_string().trim_matches('"'), "{k}");
        }
    }
}

#[test]
fn classical_csv_trajectory() {
    let o = abshift(&["classical", "--radius", "1e-7", "--phi", "0.2", "--format", "csv"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let t = stdout(&o);
    let header = t.lines().find(|l| !l.starts_with('#')).unwrap();
    assert!(header.starts_with("t_s,x_m,v_m_per_s"), "{header}");
    assert!(t.lines().count() > 50);
}

#[test]
fn classical_minus_sign() {
    let o = abshift(&["classical", "--radius", "1e-7", "--format", "json"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v = json(&o);
    assert_eq!(v["conserved_sign"], "minus");
    assert!(v["eq2_residual"].as_f64().unwrap() < 1e-8);
}

#[test]
fn config_file_supplies_and_yields() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    std::fs::write(&cfg, "# ring\nn0 = 101\nphi = 0.3\n").unwrap();
    let cfg = cfg.to_str().unwrap();
    let o = abshift(&["--config", cfg, "string"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(value(&stdout(&o), "S_N"), "0.3");

    let o = abshift(&["--config", cfg, "string", "--phi", "0.1"]);
    assert_eq!(value(&stdout(&o), "S_N"), "0.1");

    let o = abshift(&["--config", cfg, "string", "--flux-wb", "0"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(value(&stdout(&o), "S_N"), "0");
}

#[test]
fn config_unknown_key_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.conf");
    std::fs::write(&cfg, "n0 = 101\nphi = 0.3\nwidth = 4\n").unwrap();
    let o = abshift(&["--config", cfg.to_str().unwrap(), "string"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("width"), "{}", stderr(&o));
}

#[test]
fn missing_config_file_is_io_error() {
    let o = abshift(&["--config", "/definitely/not/here.conf", "string"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn unwritable_output_is_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    std::fs::write(&blocker, "x").unwrap();
    let target = blocker.join("out.csv");
    assert!(!Path::new(&target).exists());
    let o = abshift(&["sweep", "--count", "3", "-o", target.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("out.csv") || stderr(&o).contains("file"), "{}", stderr(&o));
}
