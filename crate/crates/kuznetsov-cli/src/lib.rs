//! Command-line driver: argument parsing, the check runners behind each
//! command, and CSV/JSON output.

pub mod commands;
pub mod config;
pub mod emit;
pub mod error;

use std::io::Write;

pub use commands::{execute, Artifact, CheckRow, Outcome, Payload};
pub use config::{parse_args, parse_args_with_env, Command, Format, RunConfig, Tolerances};
pub use emit::emit_report;
pub use error::{CliError, Result};

/// Exit code when every gating check passed.
pub const EXIT_PASS: i32 = 0;
/// Exit code when at least one gating check failed.
pub const EXIT_CHECK_FAILED: i32 = 1;

/// Parses, runs and emits; returns the process exit code.
pub fn run_main<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let result = parse_args(argv).and_then(|config| {
        let outcome = execute(&config)?;
        emit_report(&outcome, &config, stdout)?;
        Ok(outcome)
    });
    match result {
        Ok(outcome) => {
            let failed: Vec<&CheckRow> =
                outcome.checks().filter(|c| c.gating && !c.passed).collect();
            for c in &failed {
                let _ = writeln!(
                    stderr,
                    "FAILED {}: measured {:e}, tolerance {:e}",
                    c.check, c.measured, c.tolerance
                );
            }
            if failed.is_empty() {
                EXIT_PASS
            } else {
                EXIT_CHECK_FAILED
            }
        }
        Err(CliError::Info(text)) => {
            let _ = write!(stdout, "{text}");
            EXIT_PASS
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
