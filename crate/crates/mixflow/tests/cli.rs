//! End-to-end tests of the `mixflow` binary: exit codes, file outputs, and
//! the stability of the CSV schemas.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_mixflow");

const CANONICAL_MODEL: &str = r#"
[model.interpolated]
alpha = 0.5
exponents = [1.0]
coefficients = [1.0, 0.0, 1.0]

[grid]
dimension = 1
extents = [1.0]
cells = [16]
"#;

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn write_config(dir: &Path, text: &str) -> String {
    let path = dir.join("run.toml");
    fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn verify_passes_and_writes_reports() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), CANONICAL_MODEL);
    let out_dir = dir.path().join("out");
    let out = run(&["verify", "--config", &cfg, "--out", out_dir.to_str().unwrap(), "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.lines().all(|l| l.is_empty() || l.starts_with("PASS")), "{stdout}");
    let reports = fs::read_to_string(out_dir.join("reports.csv")).unwrap();
    assert!(reports.starts_with("check,n_points,n_violations,worst_margin,status"));
    assert!(reports.contains("sandwich[interpolated]"));
}

#[test]
fn solve_constant_scenario_reports_zero_norm() {
    let dir = tempfile::tempdir().unwrap();
    let text = format!(
        "{CANONICAL_MODEL}\n[[boundary]]\namplitude = 5.0\nshape = {{ affine = {{ intercept = 1.0, slope = [0.0] }} }}\ntime = {{ constant = {{}} }}\n\n[initial.constant]\nvalue = 5.0\n\n[solver]\nhorizon = 0.5\n"
    );
    let cfg = write_config(dir.path(), &text);
    let out_dir = dir.path().join("out");
    let out = run(&["solve", "--config", &cfg, "--out", out_dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("final l2_pbar: 0.0000000000000000e0"), "{stdout}");
    let csv = fs::read_to_string(out_dir.join("diagnostics.csv")).unwrap();
    assert!(csv.starts_with("t,l2_pbar_sq,grad_norm,h_integral,energy,f,env_f,dissipation\n"));
    assert!(out_dir.join("final_field.txt").exists());
}

#[test]
fn solve_decay_scenario_has_monotone_env_f() {
    let dir = tempfile::tempdir().unwrap();
    let text = format!(
        "{CANONICAL_MODEL}\n[[boundary]]\namplitude = 0.3\nshape = {{ affine = {{ intercept = 0.0, slope = [1.0] }} }}\ntime = {{ sinusoid = {{ omega = 4.0 }} }}\n\n[initial.sine]\namplitude = 1.0\nmode = [1]\n\n[solver]\nhorizon = 1.0\nsample_stride = 20\n\n[output]\nsnapshots = true\n"
    );
    let cfg = write_config(dir.path(), &text);
    let out_dir = dir.path().join("out");
    let out = run(&["solve", "--config", &cfg, "--out", out_dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let csv = fs::read_to_string(out_dir.join("diagnostics.csv")).unwrap();
    let env_col: Vec<f64> = csv
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(6).unwrap().parse().unwrap())
        .collect();
    assert!(env_col.len() > 3);
    assert!(env_col.windows(2).all(|w| w[1] >= w[0]), "env_f must be nondecreasing");
    // snapshots written alongside
    assert!(out_dir.join("snapshot_0000.txt").exists());
    let snap = fs::read_to_string(out_dir.join("snapshot_0000.txt")).unwrap();
    assert!(snap.starts_with("dimension 1\n"));
}

#[test]
fn config_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    // empty grid section: invalid before any check runs
    let text = r#"
[model.interpolated]
alpha = 0.5
exponents = [1.0]
coefficients = [1.0, 0.0, 1.0]

[grid]
dimension = 1
extents = [1.0]
cells = [0]
"#;
    let cfg = write_config(dir.path(), text);
    let out = run(&["verify", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(2));

    // inadmissible coefficient names the field
    let text = CANONICAL_MODEL.replace("[1.0, 0.0, 1.0]", "[0.0, 0.0, 1.0]");
    let cfg = write_config(dir.path(), &text);
    let out = run(&["verify", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("model.interpolated.coefficients"), "{stderr}");

    // missing file is a config error as well
    let out = run(&["verify", "--config", "/nonexistent/nope.toml"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn cfl_violation_exits_3_citing_admissible_dt() {
    let dir = tempfile::tempdir().unwrap();
    let text = format!(
        "{CANONICAL_MODEL}\n[initial.sine]\namplitude = 1.0\nmode = [1]\n\n[solver]\nhorizon = 1.0\ndt = 5.0\n"
    );
    let cfg = write_config(dir.path(), &text);
    let out = run(&["solve", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(3));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("admissible"), "{stderr}");
}

#[test]
fn constants_table_matches_canonical_values() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), CANONICAL_MODEL);
    let out = run(&["constants", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("beta1 1.0000000000000000e0"), "{stdout}");
    assert!(stdout.contains("beta2 5.0000000000000000e-1"), "{stdout}");
    assert!(stdout.contains("d2 2.5000000000000000e-1"), "{stdout}");
    assert!(stdout.contains("d3 5.1961524227066320e0"), "{stdout}");
    assert!(stdout.contains("d5 1.5625000000000000e-2"), "{stdout}");

    // piecewise canonical: Z1 = 3, Z2 = 6, M1 = 1/9, M2 = 1/3
    let text = r#"
[model.piecewise]
alpha = 0.5
s1 = 1.0
s2 = 2.0
forchheimer = [1.0, 1.0]
exponents = [1.0]

[grid]
dimension = 1
extents = [1.0]
cells = [16]
"#;
    let cfg = write_config(dir.path(), text);
    let out = run(&["constants", "--config", &cfg]);
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("z1 3.0000000000000000e0"), "{stdout}");
    assert!(stdout.contains("z2 6.0000000000000000e0"), "{stdout}");
    assert!(stdout.contains("m1 1.1111111111111110e-1"), "{stdout}");
    assert!(stdout.contains("m2 3.3333333333333331e-1"), "{stdout}");

    // rational reports its parameters unchanged
    let text = r#"
[model.rational]
a = 1.0
b = 1.0
c = 1.0
beta1 = 1.0
beta2 = 0.5

[grid]
dimension = 1
extents = [1.0]
cells = [16]
"#;
    let cfg = write_config(dir.path(), text);
    let out = run(&["constants", "--config", &cfg]);
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("a 1.0000000000000000e0"), "{stdout}");
    assert!(stdout.contains("beta2 5.0000000000000000e-1"), "{stdout}");
}

#[test]
fn depend_and_stability_sweeps_run_end_to_end() {
    let dir = tempfile::tempdir().unwrap();
    let text = format!(
        "{CANONICAL_MODEL}\n[initial.sine]\namplitude = 1.0\nmode = [1]\n\n[solver]\nstepper = \"implicit\"\ndt = 0.005\npicard_max_iters = 200\nsample_stride = 20\nhorizon = 2.0\n\n[experiment.continuous_dependence]\nladder = [1e-1, 1e-2]\nhorizon = 2.0\nwindow_start = 0.5\nbump = {{ amplitude = 1.0, shape = {{ gaussian_bump = {{ center = [0.5], width = 0.1 }} }}, time = {{ sinusoid = {{ omega = 3.0 }} }} }}\n"
    );
    let cfg = write_config(dir.path(), &text);
    let out_dir = dir.path().join("dep");
    let out = run(&["depend", "--config", &cfg, "--out", out_dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let csv = fs::read_to_string(out_dir.join("dependence.csv")).unwrap();
    assert!(csv.starts_with("parameter,response,d_functional\n"));
    assert_eq!(csv.lines().count(), 3);

    let text = format!(
        "{CANONICAL_MODEL}\n[initial.sine]\namplitude = 1.0\nmode = [1]\n\n[solver]\nstepper = \"implicit\"\ndt = 0.005\npicard_max_iters = 200\nsample_stride = 20\nhorizon = 2.0\n\n[experiment.structural_stability]\nladder = [1e-1, 1e-2]\nhorizon = 2.0\ndirection = [0.0, 1.0, 0.0]\n"
    );
    let cfg = write_config(dir.path(), &text);
    let out_dir = dir.path().join("stab");
    let out = run(&["stability", "--config", &cfg, "--out", out_dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    assert!(out_dir.join("stability.csv").exists());
}

#[test]
fn shipped_presets_parse_and_build() {
    let presets = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let mut seen = 0;
    for entry in fs::read_dir(&presets).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().map(|e| e == "toml").unwrap_or(false) {
            let text = fs::read_to_string(&path).unwrap();
            let cfg = mixflow::config::RunConfig::parse(&text)
                .unwrap_or_else(|e| panic!("{}: {e}", path.display()));
            cfg.build().unwrap_or_else(|e| panic!("{}: {e}", path.display()));
            seen += 1;
        }
    }
    assert!(seen >= 7, "expected the shipped preset set, found {seen}");
}

#[test]
fn stability_command_rejects_non_interpolated_model() {
    let dir = tempfile::tempdir().unwrap();
    let text = r#"
[model.rational]
a = 1.0
b = 1.0
c = 1.0
beta1 = 1.0
beta2 = 0.5

[grid]
dimension = 1
extents = [1.0]
cells = [16]

[experiment.structural_stability]
ladder = [0.1]
horizon = 1.0
direction = [0.0, 1.0, 0.0]
"#;
    let cfg = write_config(dir.path(), text);
    let out = run(&["stability", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(2));
}
