use std::io::Write;

use kuznetsov_cli::emit::{render, report_csv, REPORT_HEADER};
use kuznetsov_cli::{
    execute, parse_args_with_env, run_main, CliError, Command, Format, Payload, EXIT_CHECK_FAILED,
    EXIT_PASS,
};
use serde_json::Value;

fn parse(args: &[&str]) -> Result<kuznetsov_cli::RunConfig, CliError> {
    parse_with_env(args, None)
}

fn parse_with_env(args: &[&str], env: Option<&str>) -> Result<kuznetsov_cli::RunConfig, CliError> {
    let argv = std::iter::once("kuznetsov").chain(args.iter().copied());
    parse_args_with_env(argv, env.map(str::to_string))
}

fn invalid_field(err: CliError) -> String {
    match err {
        CliError::InvalidValue { field, .. } => field,
        other => panic!("expected InvalidValue, got {other:?}"),
    }
}

#[test]
fn parses_ladder_and_pair() {
    let c = parse(&["run-limit", "--l", "1", "--lp", "1", "--x", "500,1000,2000"]).unwrap();
    assert_eq!(c.command, Command::RunLimit);
    assert_eq!(c.ladder.values(), &[500.0, 1000.0, 2000.0]);
    assert_eq!(c.pairs, vec![(1, 1)]);
    assert_eq!(c.format, Format::Csv);
    assert!((c.g.integral().unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn all_defaults_to_both_pairs() {
    assert_eq!(parse(&["all"]).unwrap().pairs, vec![(1, 1), (1, 2)]);
    assert_eq!(parse(&["all", "--lp", "3"]).unwrap().pairs, vec![(1, 3)]);
}

#[test]
fn missing_value_names_the_flag() {
    let err = parse(&["run-limit", "--l"]).unwrap_err();
    assert_eq!(err.exit_code(), 2);
    match err {
        CliError::Usage(msg) => assert!(msg.contains("--l"), "{msg}"),
        other => panic!("{other:?}"),
    }
    assert!(matches!(parse(&[]), Err(CliError::Usage(_))));
    assert!(matches!(parse(&["bogus"]), Err(CliError::Usage(_))));
}

#[test]
fn rejects_invalid_values_by_field() {
    assert_eq!(
        invalid_field(parse(&["pv", "--threads", "0"]).unwrap_err()),
        "threads"
    );
    assert_eq!(
        invalid_field(parse(&["pv", "--threads", "many"]).unwrap_err()),
        "threads"
    );
    assert_eq!(
        invalid_field(parse(&["run-limit", "--l", "0"]).unwrap_err()),
        "l"
    );
    assert_eq!(
        invalid_field(parse(&["run-limit", "--x", "50,500"]).unwrap_err()),
        "x"
    );
    assert_eq!(
        invalid_field(parse(&["run-limit", "--x", "1000,500"]).unwrap_err()),
        "x"
    );
    assert_eq!(
        invalid_field(parse(&["run-limit", "--v", "6,1"]).unwrap_err()),
        "v"
    );
    assert_eq!(
        invalid_field(parse(&["run-limit", "--w", "0,2"]).unwrap_err()),
        "w"
    );
    assert_eq!(
        invalid_field(parse(&["run-limit", "--g", "1"]).unwrap_err()),
        "g"
    );
    assert_eq!(
        invalid_field(parse(&["pv", "--format", "xml"]).unwrap_err()),
        "format"
    );
    assert_eq!(
        invalid_field(parse(&["pv", "--kernel-k", "3"]).unwrap_err()),
        "kernel-k"
    );
    assert_eq!(
        invalid_field(parse(&["pv", "--tol", "nope=1"]).unwrap_err()),
        "tol"
    );
    let err = parse(&["pv", "--threads", "0"]).unwrap_err();
    assert_eq!(err.exit_code(), 2);
}

#[test]
fn thread_precedence() {
    assert_eq!(parse_with_env(&["pv"], Some("3")).unwrap().threads, 3);
    assert_eq!(
        parse_with_env(&["pv", "--threads", "2"], Some("3"))
            .unwrap()
            .threads,
        2
    );
    assert_eq!(
        invalid_field(parse_with_env(&["pv"], Some("0")).unwrap_err()),
        "threads"
    );
}

#[test]
fn config_file_sits_below_flags() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    writeln!(
        file,
        "# limit run\nl = 2\nlp = 3  # off-diagonal\nx = 500, 1000\nthreads = 4\nformat = json\ntol.pv = 0.1\n"
    )
    .unwrap();
    let path = file.path().to_str().unwrap();
    let c = parse_with_env(&["run-limit", "--config", path, "--lp", "5"], Some("7")).unwrap();
    assert_eq!(c.pairs, vec![(2, 5)]);
    assert_eq!(c.ladder.values(), &[500.0, 1000.0]);
    // The environment outranks the file for the thread count.
    assert_eq!(c.threads, 7);
    assert_eq!(c.format, Format::Json);
    assert_eq!(c.tolerances.pv, 0.1);
    let c = parse_with_env(&["run-limit", "--config", path], None).unwrap();
    assert_eq!(c.threads, 4);

    let mut bad = tempfile::NamedTempFile::new().unwrap();
    writeln!(bad, "colour = blue").unwrap();
    let err = parse(&["pv", "--config", bad.path().to_str().unwrap()]).unwrap_err();
    assert_eq!(invalid_field(err), "colour");
    let missing = parse(&["pv", "--config", "/nonexistent/kuznetsov.conf"]).unwrap_err();
    assert!(matches!(missing, CliError::Io { .. }));
}

#[test]
fn empty_ladder_gives_header_only_csv() {
    let c = parse(&["run-a0", "--x", ""]).unwrap();
    let outcome = execute(&c).unwrap();
    let report = outcome.report("a0-l1-lp1").unwrap();
    assert!(report.rows.is_empty());
    assert_eq!(report_csv(report, false), format!("{REPORT_HEADER}\n"));
}

fn csv_numbers(text: &str) -> Vec<Vec<f64>> {
    text.lines()
        .skip(1)
        .map(|l| {
            l.split(',')
                .filter(|c| !c.is_empty())
                .map(|c| c.parse().unwrap())
                .collect()
        })
        .collect()
}

#[test]
fn json_and_csv_carry_identical_values() {
    let c = parse(&["run-a0", "--l", "1", "--lp", "1", "--x", "100,1000"]).unwrap();
    let outcome = execute(&c).unwrap();
    let artifact = &outcome.artifacts[0];
    assert!(matches!(artifact.payload, Payload::Report(_)));
    let csv = render(artifact, Format::Csv, false);
    let json: Value = serde_json::from_str(&render(artifact, Format::Json, false)).unwrap();
    let rows = json["rows"].as_array().unwrap();
    for (line, row) in csv_numbers(&csv).iter().zip(rows) {
        let f = |v: &Value| v.as_f64().unwrap();
        let want = [
            f(&row["x"]),
            f(&row["lhs"]),
            f(&row["rhs"][0]),
            f(&row["rel_err"][0]),
            f(&row["evals"]),
        ];
        assert_eq!(line.as_slice(), &want);
        assert!(row.get("wall_seconds").is_none());
    }
    assert!(json["metadata"].get("threads").is_none());
    assert_eq!(json["metadata"]["l"], 1);

    let timed: Value = serde_json::from_str(&render(artifact, Format::Json, true)).unwrap();
    assert!(timed["metadata"]["threads"].as_u64().unwrap() >= 1);
    assert!(timed["rows"][0]["wall_seconds"].as_f64().is_some());
    let timed_csv = render(artifact, Format::Csv, true);
    assert_eq!(csv_numbers(&timed_csv)[0].len(), 6);
}

#[test]
fn csv_uses_seventeen_digits_and_newlines() {
    let c = parse(&["run-a0", "--x", "100"]).unwrap();
    let outcome = execute(&c).unwrap();
    let csv = render(&outcome.artifacts[0], Format::Csv, false);
    assert!(!csv.contains('\r'));
    let first = csv.lines().nth(1).unwrap();
    let lhs = first.split(',').nth(1).unwrap();
    let mantissa = lhs.split('e').next().unwrap().replace(['.', '-'], "");
    assert_eq!(mantissa.len(), 17, "{lhs}");
}

#[test]
fn failed_identity_sets_exit_code_and_flags_row() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    let args = [
        "kuznetsov",
        "sears",
        "--tol",
        "pr5=1e-9",
        "--output",
        out.to_str().unwrap(),
    ];
    let (mut stdout, mut stderr) = (Vec::new(), Vec::new());
    assert_eq!(run_main(args, &mut stdout, &mut stderr), EXIT_CHECK_FAILED);
    let csv = std::fs::read_to_string(out.join("sears.csv")).unwrap();
    let pr5 = csv.lines().find(|l| l.starts_with("pr5-equality")).unwrap();
    assert!(pr5.ends_with(",false,true"), "{pr5}");
    let round_trip = csv
        .lines()
        .find(|l| l.starts_with("sears-round-trip"))
        .unwrap();
    assert!(round_trip.ends_with(",true,true"));
    assert!(String::from_utf8(stderr).unwrap().contains("pr5-equality"));
}

#[test]
fn passing_run_exits_zero_and_is_repeatable() {
    let args = ["kuznetsov", "pv", "--pv-k", "14,-14", "--format", "json"];
    let (mut a, mut b, mut err) = (Vec::new(), Vec::new(), Vec::new());
    assert_eq!(run_main(args, &mut a, &mut err), EXIT_PASS);
    assert_eq!(run_main(args, &mut b, &mut err), EXIT_PASS);
    assert_eq!(a, b);
    let rows: Value = serde_json::from_slice(&a).unwrap();
    assert_eq!(rows.as_array().unwrap().len(), 2);
    assert_eq!(rows[0]["passed"], true);
}

#[test]
fn usage_errors_exit_two() {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    assert_eq!(
        run_main(["kuznetsov", "pv", "--threads", "0"], &mut out, &mut err),
        2
    );
    assert!(String::from_utf8(err).unwrap().contains("threads"));
    let mut err = Vec::new();
    assert_eq!(run_main(["kuznetsov", "--help"], &mut out, &mut err), 0);
}
