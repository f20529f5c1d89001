use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use innerfield::cli::{
    command_commutator, command_normal_form, command_normal_order, command_reduce, command_vev, run_suite,
    ReportFormat, RunConfig, Suite,
};
use innerfield::error::Error;

/// Symbolic second quantization with inner momentum labels.
#[derive(Parser, Debug)]
#[command(name = "innerfield", version, about)]
struct Cli {
    /// Flat key = value configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output format.
    #[arg(long, global = true, value_parser = ["text", "json"])]
    format: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a verification suite; exit 0 iff every case passes.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        /// Tolerance for numeric cases.
        #[arg(long)]
        tol: Option<f64>,
        /// iε used in numeric propagator kernels.
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// [x, y]
    Commutator { x: String, y: String },
    /// {x, y}
    Anticommutator { x: String, y: String },
    /// Vacuum expectation value; a leading `T ` reads a time-ordered pair.
    Vev { expr: String },
    /// Canonical form with every contact term kept.
    NormalForm { expr: String },
    /// Creators to the left, contact terms dropped.
    NormalOrder { expr: String },
    /// LSZ reduction of a Green function.
    Reduce {
        greens: PathBuf,
        #[arg(long)]
        legs: PathBuf,
    },
}

enum Failure {
    Usage(String),
    Eval(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Config(_) => Failure::Usage(e.to_string()),
            other => Failure::Eval(other.to_string()),
        }
    }
}

fn read(path: &PathBuf) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn config(cli: &Cli) -> Result<RunConfig, Failure> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::parse(&read(p)?)?,
        None => RunConfig::default(),
    };
    if let Some(f) = &cli.format {
        cfg.format = f.parse::<ReportFormat>()?;
    }
    Ok(cfg)
}

fn run(cli: Cli) -> Result<bool, Failure> {
    let mut cfg = config(&cli)?;
    let out = match cli.command {
        Command::Verify { suite, tol, epsilon, seed } => {
            let suite: Suite = suite.parse()?;
            if let Some(t) = tol {
                cfg.set("tolerance", &t.to_string())?;
            }
            if let Some(e) = epsilon {
                cfg.set("i_epsilon", &e.to_string())?;
            }
            if let Some(s) = seed {
                cfg.seed = s;
            }
            let report = run_suite(suite, &cfg)?;
            match cfg.format {
                ReportFormat::Text => print!("{}", report.to_text()),
                ReportFormat::Json => println!("{}", report.to_json()),
            }
            return Ok(report.passed());
        }
        Command::Commutator { x, y } => command_commutator(&x, &y, false, &cfg)?,
        Command::Anticommutator { x, y } => command_commutator(&x, &y, true, &cfg)?,
        Command::Vev { expr } => command_vev(&expr, &cfg)?,
        Command::NormalForm { expr } => command_normal_form(&expr, &cfg)?,
        Command::NormalOrder { expr } => command_normal_order(&expr, &cfg)?,
        Command::Reduce { greens, legs } => command_reduce(&read(&greens)?, &read(&legs)?, &cfg)?,
    };
    print!("{out}");
    Ok(true)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Eval(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}
