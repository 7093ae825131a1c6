use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use incompat_cli::{cmd_analyze, cmd_generate, cmd_multi, cmd_validate, CliError, Options, Report, SelectionSpec};
use incompat_core::{Budget, Tolerance};

#[derive(Parser)]
#[command(name = "incompat", version, about = "Incompatibility structure of finite frames and rank-one POVMs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Args)]
struct Flags {
    /// Relative rank tolerance.
    #[arg(long, global = true, default_value_t = 1e-10)]
    tol_rank: f64,
    /// Relative support tolerance.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol_support: f64,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Random states per randomized check.
    #[arg(long, global = true, default_value_t = 200)]
    trials: usize,
    /// Lift the search budget.
    #[arg(long, global = true)]
    force: bool,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Ghobber-Jaming selection, zero-based, e.g. "S=0,1;T=2". Repeatable.
    #[arg(long, global = true)]
    gj: Vec<SelectionSpec>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Frame bounds, tightness and POVM residual of one frame file.
    Validate { path: PathBuf },
    /// Full two-frame analysis.
    Analyze { a: PathBuf, b: PathBuf },
    /// Order of three or more frames and the pairwise bound.
    Multi {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
    },
    /// Write a frame file: parseval, orthonormal, fourier, identity or a bundled fixture.
    Generate {
        kind: String,
        #[arg(default_value_t = 2)]
        dim: usize,
        n: Option<usize>,
        /// Output path; stdout when omitted.
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    let f = &cli.flags;
    let tol = Tolerance::new(f.tol_rank, f.tol_support).map_err(CliError::core("tolerances"))?;
    let force = f.force || std::env::var("INCOMPAT_BUDGET_OVERRIDE").is_ok_and(|v| v == "1");
    let opts = Options { tol, seed: f.seed, trials: f.trials, budget: Budget { force, ..Budget::default() }, gj: f.gj.clone() };
    let report: Report = match &cli.command {
        Command::Validate { path } => cmd_validate(path, &opts)?,
        Command::Analyze { a, b } => cmd_analyze(a, b, &opts)?,
        Command::Multi { paths } => cmd_multi(paths, &opts)?,
        Command::Generate { kind, dim, n, out } => {
            let text = cmd_generate(kind, *dim, *n, f.seed, &tol)?;
            match out {
                Some(p) => std::fs::write(p, text).map_err(|source| CliError::Io { path: p.clone(), source })?,
                None => print!("{text}"),
            }
            return Ok(ExitCode::SUCCESS);
        }
    };
    match f.format {
        Format::Json => print!("{}", report.to_json()),
        Format::Text => print!("{}", report.to_text()),
    }
    Ok(if report.passed() { ExitCode::SUCCESS } else { ExitCode::from(4) })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
