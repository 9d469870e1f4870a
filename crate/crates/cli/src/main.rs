use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use hident_core::io::{self, Format};
use hident_core::scenario::{self, entanglement_events, run_scenario, ScenarioConfig};
use hident_core::{selftest, Error, TimeSeriesRecord};

/// Hidden entanglement, entanglement of formation and system–environment
/// mutual information for two-qubit ensembles under random local unitaries.
#[derive(Debug, Parser)]
#[command(name = "hident", version)]
struct Cli {
    /// Number of grid points on [0, t_max].
    #[arg(long, global = true)]
    points: Option<usize>,

    /// Output file (stdout when omitted).
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Csv)]
    format: OutputFormat,

    /// Report sudden-death and revival times of E_f on stderr.
    #[arg(long, global = true)]
    events: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum OutputFormat {
    Csv,
    Json,
}

impl From<OutputFormat> for Format {
    fn from(f: OutputFormat) -> Self {
        match f {
            OutputFormat::Csv => Format::Csv,
            OutputFormat::Json => Format::Json,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// |φ⁺⟩ under equiprobable x/z rotations of qubit A.
    Fig1,
    /// η-mixture initial state under the same rotations.
    Fig2 {
        #[arg(long)]
        eta: f64,
    },
    /// Sweep a scenario described by a JSON config file.
    Run {
        #[arg(long)]
        config: PathBuf,
    },
    /// Run the reproduction checks; exits nonzero if any fails.
    Selftest,
}

fn scenario_for(cli: &Cli) -> Result<ScenarioConfig, Error> {
    let mut cfg = match &cli.command {
        Command::Fig1 => scenario::scenario_fig1(),
        Command::Fig2 { eta } => scenario::scenario_fig2(*eta)?,
        Command::Run { config } => io::parse_config(&fs::read_to_string(config)?)?,
        Command::Selftest => unreachable!("selftest has no scenario"),
    };
    if let Some(points) = cli.points {
        cfg = cfg.with_points(points);
    }
    cfg.validate()?;
    Ok(cfg)
}

fn report_events(records: &[TimeSeriesRecord]) {
    let ev = entanglement_events(records);
    let show = |t: Option<f64>| t.map_or_else(|| "none".to_string(), |t| format!("{t:.6}"));
    eprintln!(
        "death_t_over_T={} revival_t_over_T={}",
        show(ev.death),
        show(ev.revival)
    );
}

fn sweep(cli: &Cli) -> Result<(), Error> {
    let cfg = scenario_for(cli)?;
    let records = run_scenario(&cfg)?;
    if cli.events {
        report_events(&records);
    }
    let format = Format::from(cli.format);
    match &cli.out {
        Some(path) => match format {
            Format::Csv => io::write_csv(&records, path),
            Format::Json => io::write_json(&records, path),
        },
        None => {
            let text = io::render(&records, format)?;
            std::io::stdout().lock().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn run_selftest() -> Result<bool, Error> {
    let outcomes = selftest::run_all()?;
    for o in &outcomes {
        println!("{o}");
    }
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    println!("{} passed, {failed} failed", outcomes.len() - failed);
    Ok(failed == 0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };

    let result = match cli.command {
        Command::Selftest => run_selftest().map(|ok| if ok { 0 } else { 2 }),
        _ => sweep(&cli).map(|_| 0),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
