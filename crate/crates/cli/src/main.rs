use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use pcmem::config::{self, Overrides};
use pcmem::oracles::{oracle_grid, run_all};
use pcmem::reproduce::{reproduce, Figure, Options, SWEEP_POINTS};
use pcmem::run::{run_check, run_evolve, run_measure};
use pcmem::table::fmt_num;
use pcmem::{CliError, CliResult};
use pcmem_core::TimeGrid;

/// Phase-covariant qubit dynamics under the quantum time flip and the
/// quantum switch.
#[derive(Debug, Parser)]
#[command(name = "pcmem", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// CPTP validity, decoherence rates and witness flags per grid point (CSV).
    Check(Overrides),
    /// Trace distance or concurrence trajectory (CSV).
    Evolve(Overrides),
    /// Backflow measure summary (JSON).
    Measure(Overrides),
    /// Write the CSV files behind one figure.
    Reproduce {
        #[arg(value_enum)]
        figure: Figure,
        out_dir: PathBuf,
        #[arg(long, default_value_t = TimeGrid::DEFAULT_T_MAX)]
        tmax: f64,
        #[arg(long, default_value_t = TimeGrid::DEFAULT_STEPS)]
        steps: usize,
        /// Parameter values in the inset sweep.
        #[arg(long, default_value_t = SWEEP_POINTS)]
        sweep_points: usize,
    },
    /// Compare simulated trajectories with the closed forms.
    Oracles,
}

fn oracles() -> CliResult<()> {
    let reports = run_all(&oracle_grid())?;
    let mut failed = 0;
    for r in &reports {
        if !r.passed() {
            failed += 1;
        }
        println!(
            "{} {} {}={} max_error={} at t={}",
            if r.passed() { "PASS" } else { "FAIL" },
            r.form.name(),
            r.form.param_name(),
            fmt_num(r.param),
            fmt_num(r.max_error),
            fmt_num(r.worst_t),
        );
    }
    if failed > 0 {
        return Err(CliError::OracleFailure(failed));
    }
    Ok(())
}

fn dispatch(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Check(ov) => run_check(&config::resolve(&ov)?),
        Command::Evolve(ov) => run_evolve(&config::resolve(&ov)?),
        Command::Measure(ov) => run_measure(&config::resolve(&ov)?),
        Command::Reproduce {
            figure,
            out_dir,
            tmax,
            steps,
            sweep_points,
        } => {
            if sweep_points == 0 {
                return Err(CliError::Config("--sweep-points must be positive".into()));
            }
            let opts = Options {
                grid: TimeGrid::new(tmax, steps)?,
                sweep_points,
            };
            for w in reproduce(figure, &out_dir, &opts)? {
                eprintln!("{}: {}", w.path.display(), w.note);
            }
            Ok(())
        }
        Command::Oracles => oracles(),
    }
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
