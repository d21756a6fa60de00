use clap::{Parser, Subcommand};
use mixflow::cli::dispatch;
use std::path::PathBuf;
use std::process::ExitCode;

/// Mixed-regime porous-media flow: conductivity models, inequality
/// verification, and a degenerate parabolic pressure solver.
#[derive(Parser)]
#[command(name = "mixflow", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full inequality-verification suite for the configured model.
    Verify(CommonArgs),
    /// Integrate the configured IBVP and write diagnostics.
    Solve(CommonArgs),
    /// Continuous-dependence sweep over a boundary-perturbation ladder.
    Depend(CommonArgs),
    /// Structural-stability sweep over a coefficient-perturbation ladder.
    Stability(CommonArgs),
    /// Print the named constants of the configured model.
    Constants(CommonArgs),
}

#[derive(clap::Args)]
struct CommonArgs {
    /// Path to the TOML run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output directory for CSV reports and snapshots.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seed for randomized checks.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (name, args) = match &cli.command {
        Command::Verify(a) => ("verify", a),
        Command::Solve(a) => ("solve", a),
        Command::Depend(a) => ("depend", a),
        Command::Stability(a) => ("stability", a),
        Command::Constants(a) => ("constants", a),
    };
    ExitCode::from(dispatch(name, &args.config, args.out.as_deref(), args.seed))
}
