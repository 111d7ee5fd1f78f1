use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use dryout_solver::output::emit_csv;
use dryout_solver::{run, RunError, RunOptions, RunReport, Status, SweepSpec};

/// Dryout point of a heated liquid in a semi-infinite pipe.
#[derive(Debug, Parser)]
#[command(name = "dryout-solver", version)]
struct Cli {
    /// saturation | interface | dryout | profile | sweep
    command: String,
    config: PathBuf,
    /// Right end of the profile grid (default: twice the dryout length).
    #[arg(long)]
    xmax: Option<f64>,
    /// Number of grid points for profile, sweep and saturation.
    #[arg(long)]
    n: Option<usize>,
    /// Key to vary in a sweep (`theta` for saturation).
    #[arg(long, requires_all = ["from", "to"])]
    param: Option<String>,
    #[arg(long, requires = "param", allow_hyphen_values = true)]
    from: Option<f64>,
    #[arg(long, requires = "param", allow_hyphen_values = true)]
    to: Option<f64>,
    /// Write the CSV series (or the report) here.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn execute(cli: &Cli) -> Result<RunReport, RunError> {
    let text = fs::read_to_string(&cli.config)
        .map_err(|e| RunError::Invalid(format!("cannot read {}: {e}", cli.config.display())))?;
    let options = RunOptions {
        xmax: cli.xmax,
        n: cli.n,
        sweep: cli.param.as_ref().map(|p| SweepSpec {
            param: p.clone(),
            from: cli.from.unwrap_or(f64::NAN),
            to: cli.to.unwrap_or(f64::NAN),
        }),
    };
    let report = run(&cli.command, &text, &options)?;

    let stdout = io::stdout();
    let mut out = stdout.lock();
    match (&report.table, &cli.out) {
        (Some(table), Some(path)) => {
            emit_csv(table, path)?;
            out.write_all(report.render().as_bytes())?;
        }
        (Some(table), None) => {
            out.write_all(table.to_csv().as_bytes())?;
            eprint!("{}", report.render());
        }
        (None, Some(path)) => fs::write(path, report.render())?,
        (None, None) => out.write_all(report.render().as_bytes())?,
    }
    Ok(report)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(report) if report.status == Status::Failed => {
            eprintln!("error: a residual exceeded its tolerance");
            ExitCode::from(3)
        }
        Ok(_) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
