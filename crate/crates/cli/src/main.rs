use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use barypoly::{fixtures, Location};
use barypoly_cli::{
    grid_points, load_polytope, parse_point, parse_points, run_analyze, run_oracle_check,
    run_sweep, seed_from_env, sweep::parse_t0, AnalyzeOptions, CliError, SweepMode, SweepOptions,
};
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "barypoly",
    version,
    about = "Exact generalized barycentric coordinates"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Census,
    Continuity,
    Semidiff,
}

#[derive(Subcommand)]
enum Command {
    /// Check the polytope file's standing assumptions.
    Validate { file: PathBuf },
    /// Full exact report for one point.
    Analyze {
        file: PathBuf,
        /// Coordinates such as `1/2,1/2`.
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        /// Include wall-clock time in the report.
        #[arg(long)]
        timing: bool,
        /// Scan zero patterns in parallel.
        #[arg(long)]
        parallel: bool,
    },
    /// Evaluate many points and write CSV to stdout.
    Sweep {
        file: PathBuf,
        #[arg(long, value_enum)]
        mode: Mode,
        /// k×…×k grid over the interior of the bounding box.
        #[arg(long, conflicts_with = "points", required_unless_present = "points")]
        grid: Option<usize>,
        /// File with one point per line.
        #[arg(long)]
        points: Option<PathBuf>,
        #[arg(long, default_value = "1/8")]
        t0: String,
        #[arg(long, default_value_t = 9)]
        steps: usize,
        /// Probe direction, e_1 by default.
        #[arg(long, allow_hyphen_values = true)]
        h: Option<String>,
        /// 1-based zero pattern for semidiff mode, e.g. `4` or `1,3`.
        #[arg(long)]
        zero_set: Option<String>,
        /// Worker threads; 1 runs serially.
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Print a built-in polytope as JSON.
    Examples { name: String },
    /// Compare the pattern scan against the double description oracle.
    OracleCheck {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        #[arg(long, default_value_t = 10)]
        samples: usize,
    },
}

fn print_json(value: &impl serde::Serialize) -> anyhow::Result<()> {
    let mut out = std::io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

fn parse_zero_set(text: &str) -> Result<Vec<usize>, CliError> {
    let point = parse_point(text)?;
    point
        .iter()
        .map(|r| {
            if r.is_integer() && *r >= barypoly::numerics::int(1) {
                Ok(r.to_integer().to_string().parse::<usize>().unwrap() - 1)
            } else {
                Err(
                    barypoly::Error::Parse(format!("zero set index {r} is not a positive integer"))
                        .into(),
                )
            }
        })
        .collect()
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    match cli.command {
        Command::Validate { file } => {
            let poly = load_polytope(&file)?;
            print_json(&serde_json::json!({
                "valid": true,
                "dim": poly.dim(),
                "vertex_count": poly.num_vertices(),
                "kernel_dim": poly.kernel_dim(),
            }))?;
            Ok(0)
        }
        Command::Analyze {
            file,
            point,
            timing,
            parallel,
        } => {
            let poly = load_polytope(&file)?;
            let p = parse_point(&point)?;
            let report = run_analyze(&poly, &p, AnalyzeOptions { timing, parallel })?;
            print_json(&report)?;
            Ok(if report.location == Location::Outside {
                2
            } else {
                0
            })
        }
        Command::Sweep {
            file,
            mode,
            grid,
            points,
            t0,
            steps,
            h,
            zero_set,
            jobs,
        } => {
            let poly = load_polytope(&file)?;
            let samples = match (grid, points) {
                (Some(k), _) => grid_points(&poly, k),
                (None, Some(path)) => {
                    let text = std::fs::read_to_string(&path).map_err(|source| CliError::Io {
                        path: path.clone(),
                        source,
                    })?;
                    parse_points(&text, poly.dim())?
                }
                (None, None) => unreachable!("clap requires --grid or --points"),
            };
            let mut options = SweepOptions::new(match mode {
                Mode::Census => SweepMode::Census,
                Mode::Continuity => SweepMode::Continuity,
                Mode::Semidiff => SweepMode::Semidiff,
            });
            options.t0 = parse_t0(&t0)?;
            options.steps = steps;
            options.direction = h.as_deref().map(parse_point).transpose()?;
            options.zero_set = zero_set.as_deref().map(parse_zero_set).transpose()?;
            options.jobs = jobs;
            run_sweep(&poly, &samples, &options, std::io::stdout().lock())?;
            Ok(0)
        }
        Command::Examples { name } => {
            let poly = fixtures::by_name(&name).with_context(|| {
                format!(
                    "unknown example {name:?}; available: {}",
                    fixtures::NAMES.join(", ")
                )
            })?;
            print_json(&poly.to_json())?;
            Ok(0)
        }
        Command::OracleCheck {
            file,
            point,
            samples,
        } => {
            let poly = load_polytope(&file)?;
            let p = parse_point(&point)?;
            let check = run_oracle_check(&poly, &p, seed_from_env()?, samples)?;
            print_json(&check)?;
            Ok(if check.location == Location::Outside {
                2
            } else {
                0
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            let (payload, code) = match err.downcast_ref::<CliError>() {
                Some(e) => (e.to_json(), e.exit_code()),
                None => (
                    serde_json::json!({ "error": "invalid_argument", "detail": format!("{err:#}") }),
                    1,
                ),
            };
            eprintln!("{payload}");
            ExitCode::from(code as u8)
        }
    }
}
