use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use uncertainty_core::cli::{
    self, fuzz, parse_list, plot_script, scan, simulate, tournament, CliError, CliResult, FuzzConfig, Grid, Mode,
    ObservableSet, ScanConfig, StateSpec, TournamentConfig,
};
use uncertainty_core::expsim::{SimConfig, DEFAULT_RESAMPLES, DEFAULT_SHOTS};
use uncertainty_core::Seed;

/// Evaluate and cross-check variance-based uncertainty-relation lower bounds.
#[derive(Parser, Debug)]
#[command(name = "urel", version)]
struct Cli {
    /// Master seed; every task derives its own sub-seed from it.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Analytic bounds over a Bloch-angle grid, as CSV plus a gnuplot script.
    Scan(ScanArgs),
    /// Scan plus simulated projective measurements with bootstrap error bars.
    Simulate {
        #[command(flatten)]
        scan: ScanArgs,
        #[arg(long, default_value_t = DEFAULT_SHOTS)]
        shots: u64,
        /// Bootstrap resamples per estimate.
        #[arg(long, default_value_t = DEFAULT_RESAMPLES)]
        resamples: usize,
    },
    /// Check bound validity and the dominance chains on random instances.
    Fuzz {
        #[arg(long, default_value = "2,3,4,5,6")]
        dims: String,
        #[arg(long, default_value = "2,3,4")]
        n_obs: String,
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Count, per state, which bound is largest.
    Tournament {
        #[arg(long, default_value = "pauli3")]
        set: String,
        #[arg(long, default_value = "0:pi:61")]
        theta: String,
        #[arg(long, default_value = "0:2pi:61")]
        phi: String,
        /// Use this many random states instead of the angle grid.
        #[arg(long)]
        random_states: Option<usize>,
        #[arg(long, default_value = "both")]
        mode: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct ScanArgs {
    /// `pauli3` or `file:<path>` (JSON list of matrices of [re, im] pairs).
    #[arg(long, default_value = "pauli3")]
    set: String,
    /// START:END:COUNT or a single angle; `pi` forms allowed.
    #[arg(long, default_value = "0:pi:61")]
    theta: String,
    #[arg(long, default_value = "0")]
    phi: String,
    /// Panels drawn by the plot script: product, sum or both.
    #[arg(long, default_value = "both")]
    mode: String,
    /// CSV path; the plot script goes next to it with a `.gp` extension.
    /// Without it the CSV is written to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl ScanArgs {
    fn config(&self, simulation: Option<SimConfig>) -> CliResult<ScanConfig> {
        Ok(ScanConfig {
            set: ObservableSet::parse(&self.set)?,
            theta: Grid::parse(&self.theta)?,
            phi: Grid::parse(&self.phi)?,
            mode: Mode::parse(&self.mode)?,
            simulation,
        })
    }
}

fn emit(out: Option<&Path>, text: &str) -> CliResult<()> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn write_table(args: &ScanArgs, table: &cli::ScanTable) -> CliResult<()> {
    emit(args.out.as_deref(), &table.to_csv())?;
    if let Some(path) = &args.out {
        let csv_name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
        std::fs::write(path.with_extension("gp"), plot_script(&csv_name, table))?;
    }
    Ok(())
}

fn run(cli: Cli) -> CliResult<u8> {
    let seed = Seed(cli.seed);
    match cli.command {
        Command::Scan(args) => {
            let table = scan(&args.config(None)?)?;
            write_table(&args, &table)?;
        }
        Command::Simulate { scan: args, shots, resamples } => {
            let sim = SimConfig::new(shots, seed, resamples)?;
            let table = simulate(&args.config(Some(sim))?)?;
            write_table(&args, &table)?;
        }
        Command::Fuzz { dims, n_obs, trials, out } => {
            let cfg = FuzzConfig::new(parse_list(&dims)?, parse_list(&n_obs)?, trials, seed)?;
            let report = fuzz(&cfg)?;
            emit(out.as_deref(), &report.render())?;
            if report.violation_count() > 0 {
                return Ok(2);
            }
        }
        Command::Tournament { set, theta, phi, random_states, mode, out } => {
            let states = match random_states {
                Some(count) => StateSpec::Random { count },
                None => StateSpec::Grid { theta: Grid::parse(&theta)?, phi: Grid::parse(&phi)? },
            };
            let cfg = TournamentConfig { set: ObservableSet::parse(&set)?, states, mode: Mode::parse(&mode)?, seed };
            emit(out.as_deref(), &tournament(&cfg)?.render())?;
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("urel: {e}");
            ExitCode::from(match e {
                CliError::Config(_) => 1,
                CliError::Io(_) => 3,
            })
        }
    }
}
