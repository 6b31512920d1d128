use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use kuznetsov::experiments::{ExperimentKind, ExperimentReport};
use serde_json::Value;

use crate::commands::{Artifact, CheckRow, Outcome, Payload};
use crate::config::{Format, RunConfig};
use crate::error::{CliError, Result};

pub const REPORT_HEADER: &str = "X,lhs,rhs_a,rhs_b,rhs_c,err_a,err_b,err_c,seconds,evals";
pub const CHECK_HEADER: &str = "check,measured,tolerance,passed,gating";

/// Seventeen significant digits in scientific notation.
pub fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

/// One row per `X`; columns the report lacks (the A₀ experiment has a
/// single target) stay empty.
pub fn report_csv(report: &ExperimentReport, timing: bool) -> String {
    let mut out = String::from(REPORT_HEADER);
    out.push('\n');
    let width = match report.kind {
        ExperimentKind::Limit => 3,
        ExperimentKind::DiagonalA0 => 1,
    };
    for row in &report.rows {
        let cells = |v: &[f64]| -> Vec<String> {
            (0..3)
                .map(|i| {
                    if i < width {
                        v.get(i).map(|&x| fmt_f64(x)).unwrap_or_default()
                    } else {
                        String::new()
                    }
                })
                .collect()
        };
        let seconds = if timing {
            fmt_f64(row.wall_seconds)
        } else {
            String::new()
        };
        let line = [
            vec![fmt_f64(row.x), fmt_f64(row.lhs)],
            cells(&row.rhs),
            cells(&row.rel_err),
            vec![seconds, row.evals.to_string()],
        ]
        .concat()
        .join(",");
        let _ = writeln!(out, "{line}");
    }
    out
}

pub fn checks_csv(rows: &[CheckRow]) -> String {
    let mut out = String::from(CHECK_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            r.check,
            fmt_f64(r.measured),
            fmt_f64(r.tolerance),
            r.passed,
            r.gating
        );
    }
    out
}

/// The serialised report with `wall_seconds` and `metadata.threads`
/// removed unless `timing` is set.
pub fn report_json(report: &ExperimentReport, timing: bool) -> Value {
    let mut value = serde_json::to_value(report).expect("report serialises");
    if !timing {
        if let Some(meta) = value.get_mut("metadata").and_then(Value::as_object_mut) {
            meta.remove("threads");
        }
        if let Some(rows) = value.get_mut("rows").and_then(Value::as_array_mut) {
            for row in rows.iter_mut().filter_map(Value::as_object_mut) {
                row.remove("wall_seconds");
            }
        }
    }
    value
}

pub fn render(artifact: &Artifact, format: Format, timing: bool) -> String {
    match (format, &artifact.payload) {
        (Format::Csv, Payload::Report(r)) => report_csv(r, timing),
        (Format::Csv, Payload::Checks(rows)) => checks_csv(rows),
        (Format::Json, payload) => {
            let value = match payload {
                Payload::Report(r) => report_json(r, timing),
                Payload::Checks(rows) => serde_json::to_value(rows).expect("rows serialise"),
            };
            let mut s = serde_json::to_string_pretty(&value).expect("json value serialises");
            s.push('\n');
            s
        }
    }
}

fn extension(format: Format) -> &'static str {
    match format {
        Format::Csv => "csv",
        Format::Json => "json",
    }
}

/// Writes one file per artifact into `config.output`, or everything to
/// `stdout` (with `# name` separators when there is more than one
/// artifact).
pub fn emit_report(outcome: &Outcome, config: &RunConfig, stdout: &mut dyn Write) -> Result<()> {
    match &config.output {
        Some(dir) => {
            std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
            for a in &outcome.artifacts {
                let path = dir.join(format!("{}.{}", a.name, extension(config.format)));
                write_file(&path, &render(a, config.format, config.timing))?;
            }
        }
        None => {
            let many = outcome.artifacts.len() > 1;
            let io = |e| CliError::io("<stdout>", e);
            for a in &outcome.artifacts {
                if many {
                    writeln!(stdout, "# {}", a.name).map_err(io)?;
                }
                stdout
                    .write_all(render(a, config.format, config.timing).as_bytes())
                    .map_err(io)?;
            }
        }
    }
    Ok(())
}

fn write_file(path: &Path, content: &str) -> Result<()> {
    std::fs::write(path, content).map_err(|e| CliError::io(path, e))
}
