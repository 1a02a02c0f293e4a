//! `netgame`: solve, sweep and compare joint interventions from problem files.
//!
//! Exit status is 0 on success, 1 on input or infeasibility errors and 2 when
//! a solve finished without meeting its convergence tolerance.

mod commands;
mod output;
mod problem;

use clap::{Args, Parser, Subcommand};
use commands::{Format, Range};
use problem::OptionOverrides;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "netgame", version, about = "Joint interventions in linear-quadratic network games")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Problem file (JSON).
    file: PathBuf,
    /// Override the budget C from the file.
    #[arg(long)]
    budget: Option<f64>,
    #[arg(long)]
    restarts: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Projected-gradient stopping tolerance.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the joint problem and report the solution with its KKT residuals.
    Solve(Common),
    /// Solve over a budget grid, warm-starting each point from the last.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// Budget grid as start:stop:step.
        #[arg(long)]
        sweep: Range,
    },
    /// Compare joint and single interventions at the same budget.
    Compare(Common),
    /// Balanced max-cut orientation of the file's network.
    Orient {
        #[command(flatten)]
        common: Common,
        /// Enumerate all balanced cuts (n ≤ 22). This is the default.
        #[arg(long, conflicts_with = "heuristic")]
        exact: bool,
        /// Local search from spectral and random starts.
        #[arg(long)]
        heuristic: bool,
    },
}

impl Common {
    fn overrides(&self) -> OptionOverrides {
        OptionOverrides {
            restarts: self.restarts,
            grad_tol: self.tol,
            seed: self.seed,
            ..Default::default()
        }
    }

    fn load(&self) -> anyhow::Result<problem::ProblemFile> {
        let mut file = problem::load(&self.file)?;
        if let Some(c) = self.budget {
            file.budget = c;
        }
        Ok(file)
    }
}

fn run(cli: Cli, out: &mut impl Write) -> anyhow::Result<bool> {
    match cli.command {
        Command::Solve(c) => commands::solve(&c.load()?, &c.overrides(), c.format, out),
        Command::Sweep { common: c, sweep } => {
            commands::sweep(&c.load()?, &c.overrides(), sweep, c.format, out)
        }
        Command::Compare(c) => commands::compare(&c.load()?, &c.overrides(), c.format, out),
        Command::Orient {
            common: c,
            heuristic,
            ..
        } => {
            commands::orient(&c.load()?, heuristic, c.seed.unwrap_or(0), c.format, out)?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match run(cli, &mut out) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
