//! Library side of the `barypoly` command: file loading, point analysis
//! reports, oracle checks and CSV sweeps. The binary is a thin clap wrapper.

pub mod error;
pub mod report;
pub mod sweep;

use std::path::Path;

use barypoly::Polytope;

pub use error::CliError;
pub use report::{run_analyze, run_oracle_check, AnalysisReport, AnalyzeOptions, OracleCheck};
pub use sweep::{grid_points, parse_point, parse_points, run_sweep, SweepMode, SweepOptions};

/// Reads and validates a polytope file.
pub fn load_polytope(path: &Path) -> Result<Polytope, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(Polytope::from_json_str(&text)?)
}

/// Environment variable holding the oracle sampling seed.
pub const SEED_VAR: &str = "BARYPOLY_SEED";

pub fn seed_from_env() -> Result<u64, CliError> {
    match std::env::var(SEED_VAR) {
        Ok(v) => v.trim().parse().map_err(|_| {
            barypoly::Error::Parse(format!(
                "{SEED_VAR} must be a nonnegative integer, got {v:?}"
            ))
            .into()
        }),
        Err(_) => Ok(0),
    }
}
