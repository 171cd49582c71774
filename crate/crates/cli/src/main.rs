use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use afm_cli::commands::{cmd_bound, cmd_qtable, cmd_reference, cmd_scan, GridOverride};
use afm_cli::config::{Mode, RunConfig, Suite};
use afm_cli::table::{Format, Table};
use afm_cli::verify::{report, run_suite};
use afm_cli::CliError;

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Csv,
    Json,
}

/// Auxiliary-field bounds and reference masses for two-body Salpeter systems.
#[derive(Debug, Parser)]
#[command(name = "afm", version)]
struct Args {
    #[arg(value_enum)]
    verb: Mode,
    /// JSON run configuration.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Write output here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Starting number of grid points for the reference solver.
    #[arg(long)]
    grid_points: Option<usize>,
    /// Box radius (GeV⁻¹) for the reference solver.
    #[arg(long)]
    box_radius: Option<f64>,
    /// Output format; scans default to csv, everything else to text.
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
}

fn run(args: &Args) -> Result<(Table, Option<PathBuf>, usize), CliError> {
    let cfg = match &args.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(mode) = cfg.mode {
        if mode != args.verb {
            return Err(CliError::Config(format!(
                "config is for `{mode:?}` but the command is `{:?}`",
                args.verb
            )));
        }
    }
    let grid = GridOverride {
        points: args.grid_points,
        box_radius: args.box_radius,
    };
    let out = args.out.clone().or(cfg.output.clone());
    let mut failures = 0;
    let table = match args.verb {
        Mode::Bound => cmd_bound(&cfg)?,
        Mode::Reference => cmd_reference(&cfg, grid)?,
        Mode::Scan => cmd_scan(&cfg, grid)?,
        Mode::Qtable => cmd_qtable(&cfg)?,
        Mode::Verify => {
            let suites = cfg.suite.map_or(Suite::ALL.to_vec(), |s| vec![s]);
            let checks: Vec<_> = suites.into_iter().flat_map(run_suite).collect();
            failures = checks.iter().filter(|c| !c.pass).count();
            report(&checks)
        }
    };
    Ok((table, out, failures))
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let format = match args.format {
        Some(FormatArg::Text) => Format::Text,
        Some(FormatArg::Csv) => Format::Csv,
        Some(FormatArg::Json) => Format::Json,
        None if args.verb == Mode::Scan => Format::Csv,
        None => Format::Text,
    };
    let result = run(&args).and_then(|(table, out, failures)| {
        let text = table.render(format);
        match out {
            Some(path) => std::fs::write(&path, text).map_err(|source| CliError::Io {
                path: path.display().to_string(),
                source,
            })?,
            None => print!("{text}"),
        }
        if failures > 0 {
            Err(CliError::Verification(failures))
        } else {
            Ok(())
        }
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("afm: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
