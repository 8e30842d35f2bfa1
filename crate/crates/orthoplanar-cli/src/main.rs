//! Command-line front end: sample paths, tabulate closed forms, run the
//! verification suites.

mod analytic_cmd;
mod config;
mod grid;
mod simulate;
mod verify_cmd;

use clap::{Parser, Subcommand};
use config::Config;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "orthoplanar",
    version,
    about = "Planar random motion with orthogonal directions: simulate, evaluate, verify"
)]
struct Cli {
    /// key=value file supplying defaults for any long flag (flags win)
    #[arg(long, global = true)]
    config: Option<std::path::PathBuf>,
    /// worker threads (0 = all cores); results do not depend on this
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample trajectories to CSV
    Simulate(simulate::SimulateArgs),
    /// Tabulate a closed-form operation over a parameter grid
    Analytic(analytic_cmd::AnalyticArgs),
    /// Run cross-verification suites and emit a JSON report
    Verify(verify_cmd::VerifyArgs),
}

fn main() -> ExitCode {
    // clap itself exits with code 2 on unparsable flags.
    let cli = Cli::parse();
    let cfg = match Config::load(cli.config.as_deref()) {
        Ok(c) => c,
        Err(e) => return usage_error(&e),
    };
    let threads = match cfg.resolve(cli.threads, "threads", 0) {
        Ok(n) => n,
        Err(e) => return usage_error(&e),
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(p) => p,
        Err(e) => return usage_error(&format!("thread pool: {e}")),
    };

    pool.install(|| match cli.command {
        Command::Simulate(args) => match simulate::run(args, &cfg) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => usage_error(&e),
        },
        Command::Analytic(args) => match analytic_cmd::run(args, &cfg) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => usage_error(&e),
        },
        Command::Verify(args) => match verify_cmd::run(args, &cfg) {
            Ok(true) => ExitCode::SUCCESS,
            Ok(false) => ExitCode::from(1),
            Err(e) => usage_error(&e),
        },
    })
}

fn usage_error(message: &str) -> ExitCode {
    eprintln!("error: {message}");
    ExitCode::from(2)
}
