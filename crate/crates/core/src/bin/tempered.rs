use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use tempered::experiment::{demo_config, parse_config, run_experiment, ExperimentConfig, RunOptions, DEMOS};

#[derive(Parser)]
#[command(name = "tempered", version, about = "Runs flux-saturated diffusion experiments from TOML configs")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run an experiment and write its artifacts.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Output directory (overrides the config).
        #[arg(long, env = "TEMPERED_OUT_DIR")]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        threads: usize,
    },
    /// Validate a config without running it.
    Check {
        #[arg(long)]
        config: PathBuf,
    },
    /// Run a packaged configuration; lists them when no name is given.
    Demo {
        name: Option<String>,
        #[arg(long, env = "TEMPERED_OUT_DIR")]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        threads: usize,
    },
}

fn execute(cfg: &ExperimentConfig, out: Option<PathBuf>, threads: usize) -> ExitCode {
    match run_experiment(cfg, &RunOptions { out_dir: out, threads }) {
        Ok(summary) => {
            if summary.boundary_warning {
                eprintln!("warning: the solution came within 4 cells of the boundary");
            }
            for c in &summary.checks {
                println!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
            }
            println!("{} steps, artifacts in {}", summary.steps, summary.out_dir.display());
            ExitCode::from(summary.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn main() -> ExitCode {
    match Cli::parse().cmd {
        Cmd::Run { config, out, threads } => match parse_config(&config) {
            Ok(cfg) => execute(&cfg, out, threads),
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(2)
            }
        },
        Cmd::Check { config } => match parse_config(&config) {
            Ok(cfg) => {
                println!("{}: ok ({}D, {:?} cells, T = {})", cfg.name, cfg.dim(), cfg.grid.cells, cfg.time.t_final);
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(2)
            }
        },
        Cmd::Demo { name: None, .. } => {
            for (n, _) in DEMOS {
                println!("{n}");
            }
            ExitCode::SUCCESS
        }
        Cmd::Demo { name: Some(name), out, threads } => match demo_config(&name) {
            Some(Ok(cfg)) => execute(&cfg, out, threads),
            Some(Err(e)) => {
                eprintln!("error: packaged config `{name}` is invalid: {e}");
                ExitCode::from(2)
            }
            None => {
                let names: Vec<&str> = DEMOS.iter().map(|d| d.0).collect();
                eprintln!("error: unknown demo `{name}`; available: {}", names.join(", "));
                ExitCode::from(2)
            }
        },
    }
}
