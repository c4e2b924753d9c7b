use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use cri_cli::formulas::Formulas;
use cri_cli::validate::{self, Grid};
use cri_cli::{analyze, output, simulate, sweep, CliError, Config};
use cri_core::Params;

/// Primary-user SINR, outage and capacity under capped secondary interference.
#[derive(Parser)]
#[command(name = "cri", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write theoretical curves as CSV.
    Analyze {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write Monte Carlo histograms, ECDFs and a KS/atom summary as CSV.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the validation grid; exits 1 if any row fails.
    Validate {
        /// Restrict the grid to the scenarios of a config file.
        #[arg(long)]
        config: Option<PathBuf>,
        /// 10⁵ samples and a coarser z grid.
        #[arg(long)]
        quick: bool,
        /// Machine-readable report.
        #[arg(long, default_value = "validation_report.json")]
        report: PathBuf,
    },
    /// Sweep a scalar parameter and print mean SINR, outage and mean capacity.
    Sweep {
        #[arg(long, value_enum)]
        param: SweepParam,
        #[arg(long)]
        from: f64,
        #[arg(long)]
        to: f64,
        #[arg(long)]
        steps: usize,
        /// Base scenario; the first scenario of the config is used.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Outage threshold.
        #[arg(long, default_value_t = 1.0)]
        psi: f64,
        /// Directory for `sweep_q.csv`; stdout if absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SweepParam {
    Q,
}

fn print_written(paths: &[PathBuf]) {
    for p in paths {
        println!("{}", p.display());
    }
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::Analyze { config, out } => {
            let cfg = Config::load(&config)?;
            print_written(&output::write_all(&out, &analyze::analyze(&cfg)?)?);
        }
        Command::Simulate { config, out } => {
            let cfg = Config::load(&config)?;
            print_written(&output::write_all(&out, &simulate::simulate(&cfg)?)?);
        }
        Command::Validate { config, quick, report } => {
            let grid = match config {
                Some(path) => Grid::from_config(&Config::load(&path)?, quick),
                None => Grid::acceptance(quick),
            };
            let result = validate::run(&Formulas::shipped(), &grid);
            print!("{}", result.table());
            std::fs::write(&report, result.to_json())
                .map_err(|source| CliError::Io { path: report.clone(), source })?;
            if !result.all_passed() {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Sweep { param: SweepParam::Q, from, to, steps, config, psi, out } => {
            let grid = sweep::sweep_grid(from, to, steps)?;
            let base = match config {
                Some(path) => Config::load(&path)?.scenarios()[0].params,
                None => Params::unit_rate(4.0, 1.0, 1)?,
            };
            let file = sweep::sweep_q(&Formulas::shipped(), &base, &grid, psi)?;
            match out {
                Some(dir) => print_written(&output::write_all(&dir, &[file])?),
                None => print!("{}", String::from_utf8_lossy(&file.contents)),
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("CRI_LOG", "warn")).init();
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
