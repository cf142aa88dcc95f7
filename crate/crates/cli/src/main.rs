//! `ptent`: run two-qubit PT-symmetric entanglement scenarios from the
//! command line.
//!
//! Exit status: 0 success, 2 usage or configuration error, 3 invalid
//! parameter or state, 4 numerical failure.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use pt_entangle::io::{
    format_report, load_config, preset_state, read_state, write_figure, write_series, Overrides,
    STATE_PRESETS,
};
use pt_entangle::metrics::analyze;
use pt_entangle::scenarios::{run_scenario, FigureId};
use pt_entangle::{Error, ErrorKind};

#[derive(Parser)]
#[command(
    name = "ptent",
    version,
    about = "Two-qubit entanglement under local PT-symmetric evolution"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario from a JSON config and write its metric series as CSV.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<f64>,
        #[arg(long)]
        s: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        epsilon: Option<f64>,
        #[arg(long)]
        gamma: Option<f64>,
        #[arg(long)]
        t_max: Option<f64>,
        #[arg(long)]
        n_samples: Option<usize>,
        #[arg(long)]
        dt: Option<f64>,
    },
    /// Write the series of one figure (fig2, fig4 or fig5) plus a manifest.
    Figure {
        id: String,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Print the measures of a state given as a JSON file or a preset
    /// (bell, mixed, is1, is2, is3).
    Metrics { state: String },
}

fn exit_code(kind: ErrorKind) -> u8 {
    match kind {
        ErrorKind::Usage => 2,
        ErrorKind::Validation => 3,
        ErrorKind::Numerical => 4,
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Simulate {
            config,
            out,
            alpha,
            s,
            epsilon,
            gamma,
            t_max,
            n_samples,
            dt,
        } => {
            let overrides = Overrides {
                alpha,
                s,
                epsilon,
                gamma,
                t_max,
                n_samples,
                dt,
            };
            let cfg = load_config(&config, &overrides)?;
            let records = run_scenario(&cfg)?;
            write_series(&out, &records)?;
            eprintln!("wrote {} rows to {}", records.len(), out.display());
        }
        Command::Figure { id, out_dir } => {
            let id: FigureId = id.parse()?;
            for path in write_figure(id, &out_dir)? {
                println!("{}", path.display());
            }
        }
        Command::Metrics { state } => {
            let (rho, label) = match preset_state(&state) {
                Some(rho) => (rho, Some(state)),
                None => read_state(Path::new(&state)).map_err(|e| match e {
                    Error::Io(msg) => Error::Io(format!(
                        "{msg} (not a preset either: {})",
                        STATE_PRESETS.join(", ")
                    )),
                    e => e,
                })?,
            };
            print!("{}", format_report(&analyze(&rho)?, label.as_deref()));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("ptent: {e}");
            ExitCode::from(exit_code(e.kind()))
        }
    }
}
