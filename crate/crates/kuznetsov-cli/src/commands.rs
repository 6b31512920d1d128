use std::collections::BTreeSet;
use std::f64::consts::PI;

use kuznetsov::arithmetic::{
    bijection_r, dirichlet_series_check, divisors, enumerate_x, enumerate_y, phi_dirichlet_check,
    r_weight, ramanujan_closed, ramanujan_divisor, SeriesCheck,
};
use kuznetsov::experiments::{
    run_a0, run_limit, verify_identities_suite, verify_pv, verify_watson, A0Setup, ExperimentError,
    ExperimentReport, LimitSetup,
};
use kuznetsov::special_functions::{ramanujan_zeta_identity, Order};
use kuznetsov::transforms::{
    convolution_kernel_transform, convolve_direct, convolve_spectral, h_transform, pr5_check,
    BumpFunction, BumpProfile, ConvolutionEvaluator, KernelWindow, SearsConvention,
    SpectralNormalization, SpectralPoint, TableSpec, TransformTable,
};
use kuznetsov::Complex64;
use num_integer::Integer;
use serde::Serialize;

use crate::config::{Command, RunConfig};
use crate::error::{CliError, Result};

/// One line of a pass/fail table. Rows with `gating == false` are reported
/// but do not affect the exit code.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRow {
    pub check: String,
    pub measured: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub gating: bool,
}

impl CheckRow {
    /// Passes when `measured ≤ tolerance`.
    pub fn at_most(check: impl Into<String>, measured: f64, tolerance: f64) -> Self {
        Self {
            check: check.into(),
            measured,
            tolerance,
            passed: measured <= tolerance,
            gating: true,
        }
    }

    pub fn informational(mut self) -> Self {
        self.gating = false;
        self
    }

    fn series(check: String, chk: &SeriesCheck) -> Self {
        let bound = chk.tail_bound.unwrap_or(f64::NAN) + 1e-12 * chk.closed.norm();
        Self {
            passed: chk.within_tail_bound(),
            ..Self::at_most(check, chk.discrepancy(), bound)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Payload {
    Checks(Vec<CheckRow>),
    Report(Box<ExperimentReport>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Artifact {
    pub name: String,
    pub payload: Payload,
}

impl Artifact {
    fn checks(name: &str, rows: Vec<CheckRow>) -> Self {
        Self {
            name: name.to_string(),
            payload: Payload::Checks(rows),
        }
    }

    fn report(name: String, report: ExperimentReport) -> Self {
        Self {
            name,
            payload: Payload::Report(Box::new(report)),
        }
    }
}

/// Everything a run produced, in a fixed order.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub artifacts: Vec<Artifact>,
}

impl Outcome {
    pub fn checks(&self) -> impl Iterator<Item = &CheckRow> {
        self.artifacts.iter().flat_map(|a| match &a.payload {
            Payload::Checks(rows) => rows.as_slice(),
            Payload::Report(_) => &[],
        })
    }

    pub fn check(&self, name: &str) -> Option<&CheckRow> {
        self.checks().find(|c| c.check == name)
    }

    pub fn report(&self, name: &str) -> Option<&ExperimentReport> {
        self.artifacts.iter().find_map(|a| match &a.payload {
            Payload::Report(r) if a.name == name => Some(r.as_ref()),
            _ => None,
        })
    }

    /// All gating checks passed.
    pub fn passed(&self) -> bool {
        self.checks().filter(|c| c.gating).all(|c| c.passed)
    }
}

/// Runs the configured command on a pool of `config.threads` workers.
pub fn execute(config: &RunConfig) -> Result<Outcome> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.threads)
        .build()
        .map_err(|e| ExperimentError::ThreadPool(e.to_string()))?;
    pool.install(|| execute_in_pool(config))
}

fn execute_in_pool(config: &RunConfig) -> Result<Outcome> {
    let mut artifacts = Vec::new();
    let runs = |c: Command| config.command == c || config.command == Command::All;
    if runs(Command::VerifyArith) {
        artifacts.push(Artifact::checks("arith", verify_arith(config)?));
    }
    if runs(Command::VerifySpecial) {
        artifacts.push(Artifact::checks("special", verify_special()?));
    }
    if runs(Command::VerifyConvolution) {
        artifacts.push(Artifact::checks("convolution", verify_convolution(config)?));
    }
    if runs(Command::Sears) {
        artifacts.push(Artifact::checks("sears", sears(config)?));
    }
    if runs(Command::Pv) {
        artifacts.push(Artifact::checks("pv", pv(config)?));
    }
    if runs(Command::Watson) {
        artifacts.push(Artifact::checks("watson", watson(config)?));
    }
    if runs(Command::RunA0) {
        let mut rows = Vec::new();
        for &(l, lp) in &config.pairs {
            let report = a0(config, l, lp, &mut rows)?;
            artifacts.push(Artifact::report(format!("a0-l{l}-lp{lp}"), report));
        }
        artifacts.push(Artifact::checks("a0-checks", rows));
    }
    if runs(Command::RunLimit) {
        let mut rows = Vec::new();
        for &(l, lp) in &config.pairs {
            let report = limit(config, l, lp, &mut rows)?;
            artifacts.push(Artifact::report(format!("limit-l{l}-lp{lp}"), report));
        }
        artifacts.push(Artifact::checks("limit-checks", rows));
    }
    Ok(Outcome { artifacts })
}

fn arith_err(e: kuznetsov::arithmetic::ArithmeticError) -> CliError {
    ExperimentError::from(e).into()
}

/// Violations of the residue bijection over `c1, c2 ≤ 20`, `0 < |n| ≤ 40`.
fn bijection_violations() -> Result<u64> {
    let mut bad = 0;
    for c1 in 1..=20u64 {
        for c2 in 1..=20u64 {
            let d = c1.gcd(&c2) as i64;
            for n in (-40..=40i64).filter(|&n| n != 0 && n % d == 0) {
                let modulus = n.unsigned_abs();
                let xs = enumerate_x(c1, c2, n);
                let ys: BTreeSet<u64> = enumerate_y(c1, c2, n).iter().map(|r| r.value()).collect();
                bad += u64::from(xs.len() != ys.len());
                let mut image = BTreeSet::new();
                for cls in &xs {
                    let pair = bijection_r(cls).map_err(arith_err)?;
                    let exact = pair.r1.value() * pair.r2.value() % modulus == 1 % modulus;
                    bad +=
                        u64::from(!(cls.satisfies_invariants() && pair.is_inverse_pair() && exact));
                    image.insert(pair.r1.value());
                }
                bad += u64::from(image != ys);
            }
        }
    }
    Ok(bad)
}

fn verify_arith(config: &RunConfig) -> Result<Vec<CheckRow>> {
    let mut rows = vec![CheckRow::at_most(
        "residue-bijection",
        bijection_violations()? as f64,
        0.0,
    )];

    let mut worst = 0.0f64;
    for n in 1..=10_000u64 {
        let mut total = 0.0;
        for d in divisors(n) {
            total += r_weight(n, d).map_err(arith_err)?;
        }
        worst = worst.max((total - 1.0).abs());
    }
    rows.push(CheckRow::at_most(
        "r-weight-sum",
        worst,
        config.tolerances.r_weight,
    ));

    let mismatches = (1..=500u64)
        .flat_map(|n| (-500..=500i64).map(move |m| (n, m)))
        .filter(|&(n, m)| ramanujan_closed(n, m) != ramanujan_divisor(n, m))
        .count();
    rows.push(CheckRow::at_most(
        "ramanujan-closed-vs-divisor",
        mismatches as f64,
        0.0,
    ));

    for s in [1.5, 2.0, 3.0] {
        let sc = Complex64::new(s, 0.0);
        for (l, lp) in [(1u64, 1u64), (1, 2), (3, 1), (5, 5), (7, 1), (1, 13)] {
            let chk = dirichlet_series_check(l, lp, sc, 100_000).map_err(arith_err)?;
            rows.push(CheckRow::series(
                format!("dirichlet s={s} l={l} lp={lp}"),
                &chk,
            ));
        }
        for (n, d) in [(1u64, 1u64), (2, 1), (2, 2), (6, 3), (12, 2), (30, 5)] {
            let chk = phi_dirichlet_check(n, d, 0, sc, 100_000).map_err(arith_err)?;
            rows.push(CheckRow::series(
                format!("phi-dirichlet s={s} n={n} d={d}"),
                &chk,
            ));
        }
    }
    Ok(rows)
}

fn verify_special() -> Result<Vec<CheckRow>> {
    let mut rows: Vec<CheckRow> = verify_identities_suite()
        .rows
        .into_iter()
        .map(|r| CheckRow {
            check: format!("identity {}", r.name),
            measured: r.measured_error.unwrap_or(f64::NAN),
            tolerance: r.tolerance,
            passed: r.passed,
            gating: true,
        })
        .collect();
    for (big_t, t, s) in [(0.0, 0.0, 2.0), (1.0, 0.5, 2.5)] {
        let chk = ramanujan_zeta_identity(big_t, t, Complex64::new(s, 0.0), 100_000)
            .map_err(ExperimentError::from)?;
        rows.push(CheckRow::series(
            format!("zeta-product T={big_t} t={t} s={s}"),
            &chk,
        ));
    }
    Ok(rows)
}

fn verify_convolution(config: &RunConfig) -> Result<Vec<CheckRow>> {
    let tol = &config.tolerances;
    let ev = ConvolutionEvaluator::new(config.v, config.w);
    let mut rows = Vec::new();
    for (label, z) in [("2", 2.0), ("4pi", 4.0 * PI), ("20", 20.0)] {
        let d = convolve_direct(&ev, z).map_err(ExperimentError::from)?;
        let s = convolve_spectral(&ev, z, SpectralNormalization::Corrected)
            .map_err(ExperimentError::from)?;
        let gap = (d.value.re - s.value).abs();
        let budget = d.error_estimate + s.error_estimate();
        rows.push(CheckRow::at_most(
            format!("route-consistency z={label}"),
            gap,
            budget,
        ));
    }

    let points: Vec<SpectralPoint> = config
        .kernel_k
        .iter()
        .map(|&k| SpectralPoint::Even(k))
        .chain(config.kernel_t.iter().map(|&t| SpectralPoint::Maass(t)))
        .collect();
    if points.is_empty() {
        return Ok(rows);
    }
    let transforms = convolution_kernel_transform(&ev, &points, KernelWindow::default())
        .map_err(ExperimentError::from)?;
    for r in transforms {
        let m = h_transform(ev.v(), r.point).map_err(ExperimentError::from)?
            * h_transform(ev.w(), r.point).map_err(ExperimentError::from)?;
        let rel = |c: f64| (r.value - c * m).abs() / (c * m).abs().max(tol.theorem_floor);
        match r.point {
            SpectralPoint::Even(k) => rows.push(CheckRow::at_most(
                format!("convolution-theorem k={k}"),
                rel(2.0 * PI),
                tol.theorem_holomorphic,
            )),
            SpectralPoint::Maass(t) => {
                rows.push(CheckRow::at_most(
                    format!("convolution-theorem t={t}"),
                    rel(PI),
                    tol.theorem_maass,
                ));
                rows.push(
                    CheckRow::at_most(
                        format!("convolution-theorem t={t} constant=2pi"),
                        rel(2.0 * PI),
                        tol.theorem_maass,
                    )
                    .informational(),
                );
            }
        }
    }
    Ok(rows)
}

/// Log-smooth bump of sharpness 2 on the support of `V`, unless `V` is
/// already log-smooth.
fn sears_function(v: &BumpFunction) -> Result<BumpFunction> {
    let profile = match v.profile() {
        BumpProfile::Classic => BumpProfile::LogSmooth { sharpness: 2.0 },
        p => p,
    };
    Ok(BumpFunction::with_profile(v.a(), v.b(), profile, 1.0).map_err(ExperimentError::from)?)
}

fn sears(config: &RunConfig) -> Result<Vec<CheckRow>> {
    let tol = &config.tolerances;
    let f = sears_function(&config.v)?;
    let spec = TableSpec::default();
    let table = TransformTable::build(&f, spec).map_err(ExperimentError::from)?;
    let (mut sup, mut fmax) = (0.0f64, 0.0f64);
    for i in 0..20 {
        let x = f.a() + (f.b() - f.a()) * (i as f64 + 0.5) / 20.0;
        let r = table
            .reconstruct(x, SearsConvention::Corrected)
            .map_err(ExperimentError::from)?;
        sup = sup.max((r - f.eval(x)).abs());
        fmax = fmax.max(f.eval(x).abs());
    }
    let p =
        pr5_check(&config.v, &config.v, spec.t_max, spec.k_max).map_err(ExperimentError::from)?;
    Ok(vec![
        CheckRow::at_most("sears-round-trip", sup / fmax, tol.sears),
        CheckRow::at_most("pr5-equality", p.relative_error(), tol.pr5),
    ])
}

fn pv(config: &RunConfig) -> Result<Vec<CheckRow>> {
    let h = BumpFunction::new(-2.5, 2.5).map_err(ExperimentError::from)?;
    let report = verify_pv(&h, &config.pv_k)?;
    Ok(report
        .rows
        .iter()
        .filter_map(|r| {
            r.deviation.map(|d| {
                let row = CheckRow::at_most(format!("pv k={}", r.k), d, config.tolerances.pv);
                if r.k.abs() >= 14.0 {
                    row
                } else {
                    row.informational()
                }
            })
        })
        .collect())
}

fn watson(config: &RunConfig) -> Result<Vec<CheckRow>> {
    let tol = &config.tolerances;
    let mut rows = Vec::new();
    for (label, order, bound) in [
        ("1", Order::Integer(1), tol.watson_integer),
        ("i", Order::Imaginary(0.5), tol.watson_imaginary),
    ] {
        for (z, y) in [(1.0, 1.0), (1.0, 2.0)] {
            let r = verify_watson(order, z, y)?;
            let name = |form: &str| format!("watson nu={label} Z={z} y={y} {form}");
            let sides = [
                ("full", r.full, true),
                ("hankel1", r.hankel1, true),
                ("hankel2", r.hankel2, true),
                ("recombined", r.recombined, false),
            ];
            for (form, side, gating) in sides {
                let err = side.abs_error().unwrap_or(f64::NAN);
                let row = CheckRow::at_most(name(form), err, bound);
                rows.push(if gating { row } else { row.informational() });
            }
        }
    }
    Ok(rows)
}

fn a0(config: &RunConfig, l: u64, lp: u64, rows: &mut Vec<CheckRow>) -> Result<ExperimentReport> {
    let tol = &config.tolerances;
    let report = run_a0(&A0Setup {
        l,
        lp,
        v: config.v,
        w: config.w,
        g: config.g,
        ladder: config.a0_ladder.clone(),
        threads: config.threads,
    })?;
    if report.rows.is_empty() {
        return Ok(report);
    }
    if l == lp {
        let exponent = report.summary.fitted_exponent.unwrap_or(f64::NAN);
        rows.push(CheckRow::at_most(
            format!("a0 l={l} lp={lp} exponent"),
            exponent,
            tol.a0_exponent,
        ));
        let errors: Vec<f64> = report.rows.iter().map(|r| r.abs_err[0]).collect();
        rows.push(decreasing(format!("a0 l={l} lp={lp} decreasing"), &errors).informational());
    } else {
        let last = report.rows.last().map_or(f64::NAN, |r| r.lhs.abs());
        rows.push(CheckRow::at_most(
            format!("a0 l={l} lp={lp} final"),
            last,
            tol.a0_off_diagonal,
        ));
    }
    Ok(report)
}

/// Largest ratio of consecutive errors; strictly decreasing iff it is
/// below one.
fn decreasing(check: String, errors: &[f64]) -> CheckRow {
    let worst = errors
        .windows(2)
        .map(|w| w[1] / w[0])
        .fold(0.0f64, f64::max);
    CheckRow {
        passed: errors.windows(2).all(|w| w[1] < w[0]),
        ..CheckRow::at_most(check, worst, 1.0)
    }
}

fn limit(
    config: &RunConfig,
    l: u64,
    lp: u64,
    rows: &mut Vec<CheckRow>,
) -> Result<ExperimentReport> {
    let table = match config.v.profile() {
        BumpProfile::Classic => TableSpec::default().doubled(),
        BumpProfile::LogSmooth { .. } => TableSpec::default(),
    };
    let report = run_limit(&LimitSetup {
        l,
        lp,
        v: config.v,
        w: config.w,
        g: config.g,
        ladder: config.ladder.clone(),
        threads: config.threads,
        table,
    })?;
    let Some(best) = report.summary.best_variant else {
        return Ok(report);
    };
    let idx = kuznetsov::experiments::RhsVariant::ALL
        .iter()
        .position(|&v| v == best)
        .expect("variant listed");
    let errors = report.errors(idx);
    rows.push(decreasing(
        format!("limit l={l} lp={lp} decreasing"),
        &errors,
    ));
    rows.push(CheckRow::at_most(
        format!("limit l={l} lp={lp} final"),
        errors.last().copied().unwrap_or(f64::NAN),
        config.tolerances.limit_final,
    ));
    Ok(report)
}
