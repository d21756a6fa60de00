//! Command implementations behind the `mixflow` binary.
//!
//! Exit codes: 0 = pass, 1 = assertion failure (inequality violations or a
//! failed sweep assertion), 2 = configuration error, 3 = numeric error.

use crate::bounds::{run_model_suite, CheckReport, SuiteConfig};
use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::experiments::{run_continuous_dependence, run_structural_stability};
use crate::solver::{l2_sq_cells, solve_ibvp};
use std::fs;
use std::path::Path;

pub const EXIT_PASS: u8 = 0;
pub const EXIT_ASSERTION: u8 = 1;
pub const EXIT_CONFIG: u8 = 2;

fn ensure_dir(out: &Path) -> Result<()> {
    fs::create_dir_all(out)?;
    Ok(())
}

/// Run the full inequality suite against the configured model.
pub fn cmd_verify(config: &RunConfig, out: Option<&Path>, seed: u64) -> Result<u8> {
    cmd_verify_with_scale(config, out, seed, 1.0)
}

/// `d5_scale` is the fault-injection hook exercised by mutation tests; the
/// binary always passes 1.0.
pub fn cmd_verify_with_scale(
    config: &RunConfig,
    out: Option<&Path>,
    seed: u64,
    d5_scale: f64,
) -> Result<u8> {
    let model = config.build_model()?;
    let suite = SuiteConfig { seed, d5_scale, ..Default::default() };
    let reports = run_model_suite(&model, &suite)?;
    for r in &reports {
        println!("{}", r.summary_line());
    }
    if let Some(dir) = out {
        ensure_dir(dir)?;
        let mut text = String::from(CheckReport::RECORD_HEADER);
        text.push('\n');
        for r in &reports {
            text.push_str(&r.record_line());
            text.push('\n');
        }
        fs::write(dir.join("reports.csv"), text)?;
    }
    if let Some(first_fail) = reports.iter().find(|r| !r.passed()) {
        eprintln!("first failing check: {}", first_fail.name);
        for w in &first_fail.witnesses {
            eprintln!("  witness: {} (margin {:.3e})", w.label, w.margin);
        }
        return Ok(EXIT_ASSERTION);
    }
    Ok(EXIT_PASS)
}

/// Integrate the configured IBVP, write the diagnostics CSV (and snapshots
/// when requested), and print the final norms.
pub fn cmd_solve(config: &RunConfig, out: Option<&Path>, _seed: u64) -> Result<u8> {
    let mut scenario = config.build()?;
    scenario.solver.keep_fields = config.output.snapshots;
    let horizon = config.solver.horizon;
    let sol = solve_ibvp(&scenario.initial, &scenario.profile, &scenario.model, horizon, &scenario.solver)?;
    let last = sol.diagnostics.rows.last().expect("at least the initial sample");
    println!("steps: {}", sol.steps);
    println!("final l2_pbar: {:.16e}", last.l2_pbar_sq.sqrt());
    println!("final grad integral: {:.16e}", last.grad_norm);
    println!("final energy: {:.16e}", last.energy);
    println!(
        "final l2_p: {:.16e}",
        l2_sq_cells(scenario.grid, sol.final_field.values()).sqrt()
    );
    if let Some(dir) = out {
        ensure_dir(dir)?;
        let mut buf = Vec::new();
        sol.diagnostics.write_csv(&mut buf)?;
        fs::write(dir.join("diagnostics.csv"), buf)?;
        if config.output.snapshots {
            for (k, field) in sol.sampled_fields.iter().enumerate() {
                let mut buf = Vec::new();
                field.write_snapshot(&mut buf)?;
                fs::write(dir.join(format!("snapshot_{k:04}.txt")), buf)?;
            }
        }
        let mut buf = Vec::new();
        sol.final_field.write_snapshot(&mut buf)?;
        fs::write(dir.join("final_field.txt"), buf)?;
    }
    Ok(EXIT_PASS)
}

/// Continuous-dependence sweep over the boundary-perturbation ladder.
pub fn cmd_depend(config: &RunConfig, out: Option<&Path>, _seed: u64) -> Result<u8> {
    let scenario = config.build()?;
    let spec = config.build_dependence(&scenario)?;
    let report = run_continuous_dependence(&spec)?;
    for line in report.summary_lines("continuous dependence:") {
        println!("{line}");
    }
    if let Some(dir) = out {
        ensure_dir(dir)?;
        let mut buf = Vec::new();
        report.write_csv(&mut buf)?;
        fs::write(dir.join("dependence.csv"), buf)?;
    }
    Ok(if report.passed() { EXIT_PASS } else { EXIT_ASSERTION })
}

/// Structural-stability sweep over the coefficient-perturbation ladder.
pub fn cmd_stability(config: &RunConfig, out: Option<&Path>, _seed: u64) -> Result<u8> {
    let scenario = config.build()?;
    let spec = config.build_stability(&scenario)?;
    let report = run_structural_stability(&spec)?;
    for line in report.summary_lines("structural stability:") {
        println!("{line}");
    }
    if let Some(dir) = out {
        ensure_dir(dir)?;
        let mut buf = Vec::new();
        report.write_csv(&mut buf)?;
        fs::write(dir.join("stability.csv"), buf)?;
    }
    Ok(if report.passed() { EXIT_PASS } else { EXIT_ASSERTION })
}

/// Print every named constant of the configured model.
pub fn cmd_constants(config: &RunConfig) -> Result<u8> {
    let model = config.build_model()?;
    let c = model.sandwich_constants();
    println!("model {}", model.name());
    match &model {
        crate::conductivity::ConductivityModel::Rational(m) => {
            let (a, b, cc) = m.parameters();
            println!("a {a:.16e}");
            println!("b {b:.16e}");
            println!("c {cc:.16e}");
        }
        crate::conductivity::ConductivityModel::Piecewise(m) => {
            let (z1, z2) = m.kinks();
            let (m1, m2) = m.plateau_constants();
            let (c1, c2) = m.glue_constants();
            println!("c1 {c1:.16e}");
            println!("c2 {c2:.16e}");
            println!("z1 {z1:.16e}");
            println!("z2 {z2:.16e}");
            println!("m1 {m1:.16e}");
            println!("m2 {m2:.16e}");
        }
        crate::conductivity::ConductivityModel::Multiplicative(m) => {
            println!("kbar {:.16e}", m.kbar());
        }
        crate::conductivity::ConductivityModel::Interpolated(m) => {
            println!("xi0 {:.16e}", m.coefficients().xi0());
        }
    }
    println!("beta1 {:.16e}", c.beta1);
    println!("beta2 {:.16e}", c.beta2);
    println!("xi_c {:.16e}", c.xi_c);
    println!("k_star_at_xi_c {:.16e}", c.k_star_at_xi_c);
    match c.d1 {
        Some(d1) => println!("d1 {d1:.16e}"),
        None => println!("d1 n/a"),
    }
    println!("d2 {:.16e}", c.d2);
    println!("d3 {:.16e}", c.d3);
    println!("d4 {:.16e}", c.d4);
    println!("d5 {:.16e}", c.d5);
    match (c.d6, c.d7) {
        (Some(d6), Some(d7)) => {
            println!("d6 {d6:.16e}");
            println!("d7 {d7:.16e}");
        }
        _ => {
            println!("d6 n/a");
            println!("d7 n/a");
        }
    }
    Ok(EXIT_PASS)
}

/// Load a config file, dispatch a subcommand, and map errors to exit codes.
pub fn dispatch(
    command: &str,
    config_path: &Path,
    out: Option<&Path>,
    seed: u64,
) -> u8 {
    let run = || -> Result<u8> {
        let text = fs::read_to_string(config_path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", config_path.display())))?;
        let config = RunConfig::parse(&text)?;
        match command {
            "verify" => cmd_verify(&config, out, seed),
            "solve" => cmd_solve(&config, out, seed),
            "depend" => cmd_depend(&config, out, seed),
            "stability" => cmd_stability(&config, out, seed),
            "constants" => cmd_constants(&config),
            other => Err(Error::Config(format!("unknown command {other}"))),
        }
    };
    match run() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const CANONICAL: &str = r#"
[model.interpolated]
alpha = 0.5
exponents = [1.0]
coefficients = [1.0, 0.0, 1.0]

[grid]
dimension = 1
extents = [1.0]
cells = [16]
"#;

    #[test]
    fn verify_exit_status_reflects_reports() {
        let config = RunConfig::parse(CANONICAL).unwrap();
        // healthy model passes
        let code = cmd_verify_with_scale(&config, None, 1, 1.0).unwrap();
        assert_eq!(code, EXIT_PASS);
        // corrupting d5 by 10^3 must flip the exit status
        let code = cmd_verify_with_scale(&config, None, 1, 1e3).unwrap();
        assert_eq!(code, EXIT_ASSERTION);
    }

    #[test]
    fn constants_for_canonical_models() {
        let config = RunConfig::parse(CANONICAL).unwrap();
        assert_eq!(cmd_constants(&config).unwrap(), EXIT_PASS);
        let model = config.build_model().unwrap();
        let c = model.sandwich_constants();
        assert!((c.d2 - 0.25).abs() < 1e-15);
        assert!((c.d3 - 3f64.powf(1.5)).abs() < 1e-14);
        assert!((c.d5 - 0.015625).abs() < 1e-16);
    }

    #[test]
    fn solve_on_a_constant_scenario() {
        let text = format!(
            "{CANONICAL}\n[solver]\nhorizon = 0.5\n\n[initial.constant]\nvalue = 0.0\n"
        );
        let config = RunConfig::parse(&text).unwrap();
        let code = cmd_solve(&config, None, 0).unwrap();
        assert_eq!(code, EXIT_PASS);
    }

    #[test]
    fn cfl_violating_fixed_dt_is_a_numeric_error() {
        let text = format!(
            "{CANONICAL}\n[solver]\nhorizon = 1.0\ndt = 10.0\n\n[initial.sine]\namplitude = 1.0\nmode = [1]\n"
        );
        let config = RunConfig::parse(&text).unwrap();
        let err = cmd_solve(&config, None, 0).unwrap_err();
        assert!(matches!(err, Error::CflViolation { .. }));
        assert_eq!(err.exit_code(), 3);
        assert!(err.to_string().contains("admissible"));
    }
}
