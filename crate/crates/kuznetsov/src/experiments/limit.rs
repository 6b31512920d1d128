use std::f64::consts::PI;
use std::time::Instant;

use rayon::prelude::*;

use super::report::{ExperimentKind, ReportMetadata, ReportRow, ReportSummary};
use super::{
    require_normalized, with_pool, ExperimentError, ExperimentReport, Result, RhsVariant,
    SpotCheck, XLadder,
};
use crate::arithmetic::{kloosterman_direct, kloosterman_row};
use crate::compensated::NeumaierSum;
use crate::transforms::{
    convolve_direct, convolve_spectral, diag_inner, direct_spec, normalize_weight, BumpFunction,
    BumpProfile, ConvolutionEvaluator, SpectralNormalization, TableSpec,
};

/// Values of `n` per work unit; partial sums are combined in chunk order.
pub const CHUNK: usize = 256;
const RHS_TAIL_TOL: f64 = 1e-8;
const RHS_MAX_TERMS: u64 = 20_000;
const RHS_BATCH: u64 = 64;
const SPOT_CHECK_N: [u64; 5] = [1, 2, 3, 5, 8];

/// Inputs of the limit experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct LimitSetup {
    pub l: u64,
    pub lp: u64,
    pub v: BumpFunction,
    pub w: BumpFunction,
    /// Normalised weight on the `n/X` axis.
    pub g: BumpFunction,
    pub ladder: XLadder,
    /// Worker count; `0` uses rayon's default.
    pub threads: usize,
    pub table: TableSpec,
}

impl LimitSetup {
    /// Standard bumps `V` on `[1, 6]` and `W` on `[2, 8]`, `g` the classic
    /// bump on `[1, 2]` normalised to unit mass, and a doubled transform
    /// table (`T = 60`, `K = 120`).
    pub fn standard(l: u64, lp: u64, ladder: XLadder) -> Result<Self> {
        Ok(Self {
            l,
            lp,
            v: BumpFunction::standard_v(),
            w: BumpFunction::standard_w(),
            g: normalize_weight(&BumpFunction::new(1.0, 2.0)?)?,
            ladder,
            threads: 0,
            table: TableSpec::default().doubled(),
        })
    }

    /// Log-smooth bumps of the given sharpness on the same supports, with
    /// `g` on `[1, 4]`.
    pub fn log_smooth(l: u64, lp: u64, ladder: XLadder, sharpness: f64) -> Result<Self> {
        let smooth = BumpProfile::LogSmooth { sharpness };
        Ok(Self {
            v: BumpFunction::with_profile(1.0, 6.0, smooth, 1.0)?,
            w: BumpFunction::with_profile(2.0, 8.0, smooth, 1.0)?,
            g: normalize_weight(&BumpFunction::with_profile(1.0, 4.0, smooth, 1.0)?)?,
            table: TableSpec::default(),
            ..Self::standard(l, lp, ladder)?
        })
    }

    fn validate(&self) -> Result<()> {
        if self.l == 0 || self.lp == 0 {
            return Err(ExperimentError::InvalidInput {
                field: "l",
                reason: "l and l' must be positive".into(),
            });
        }
        for (field, f) in [("v", &self.v), ("w", &self.w), ("g", &self.g)] {
            if f.a() <= 0.0 {
                return Err(ExperimentError::InvalidInput {
                    field,
                    reason: format!("support must stay away from 0, got [{}, {}]", f.a(), f.b()),
                });
            }
        }
        require_normalized(&self.g)
    }
}

/// Kloosterman rows `n ↦ S(l, n; c)` for `c ≤ c_max`, indexed by `c`.
struct Rows(Vec<Vec<f64>>);

impl Rows {
    fn build(l: u64, c_lo: u64, c_hi: u64) -> Self {
        let mut rows: Vec<Vec<f64>> = vec![Vec::new(); c_hi as usize + 1];
        let built: Vec<(u64, Vec<f64>)> = (c_lo.max(1)..=c_hi)
            .into_par_iter()
            .map(|c| (c, kloosterman_row(l as i64, c)))
            .collect();
        for (c, row) in built {
            rows[c as usize] = row;
        }
        Self(rows)
    }
}

/// `Σ_c S(l, n; c) V(4π√(ln)/c)/c` from precomputed rows, with the number
/// of nonzero terms.
fn geometric_from_rows(rows: &Rows, l: u64, n: u64, v: &BumpFunction) -> (f64, u64) {
    let s = 4.0 * PI * ((l * n) as f64).sqrt();
    let lo = ((s / v.b()).floor() as u64).max(1);
    let hi = ((s / v.a()).ceil() as u64).min(rows.0.len() as u64 - 1);
    let mut acc = NeumaierSum::new();
    let mut evals = 0;
    for c in lo..=hi {
        let val = v.eval(s / c as f64);
        if val != 0.0 {
            let row = &rows.0[c as usize];
            acc.add(row[(n % c) as usize] * val / c as f64);
            evals += 1;
        }
    }
    (acc.value(), evals)
}

fn n_range(g: &BumpFunction, x: f64) -> (u64, u64) {
    let lo = ((g.a() * x).floor() as u64).max(1);
    let hi = (g.b() * x).ceil() as u64;
    (lo, hi)
}

fn c_bounds(l: u64, n_hi: u64, f: &BumpFunction) -> (u64, u64) {
    let s_hi = 4.0 * PI * ((l * n_hi) as f64).sqrt();
    (1, (s_hi / f.a()).ceil() as u64 + 1)
}

/// `(1/X) Σ g(n/X) geo(l, n; V) geo(l′, n; W)` in fixed chunks.
fn lhs(setup: &LimitSetup, rows_v: &Rows, rows_w: &Rows, x: f64) -> (f64, u64) {
    let (lo, hi) = n_range(&setup.g, x);
    let starts: Vec<u64> = (lo..=hi).step_by(CHUNK).collect();
    let partials: Vec<(f64, u64)> = starts
        .par_iter()
        .map(|&start| {
            let end = (start + CHUNK as u64 - 1).min(hi);
            let mut acc = NeumaierSum::new();
            let mut evals = 0;
            for n in start..=end {
                let weight = setup.g.eval(n as f64 / x);
                if weight == 0.0 {
                    continue;
                }
                let (gv, ev) = geometric_from_rows(rows_v, setup.l, n, &setup.v);
                let (gw, ew) = geometric_from_rows(rows_w, setup.lp, n, &setup.w);
                acc.add(weight * gv * gw);
                evals += ev + ew;
            }
            (acc.value(), evals)
        })
        .collect();
    let mut total = NeumaierSum::new();
    let mut evals = 0;
    for (p, e) in partials {
        total.add(p);
        evals += e;
    }
    (total.value() / x, evals)
}

struct Series {
    sum: f64,
    terms: u64,
    tail_bound: f64,
}

/// `Σ_n S(l,l′;n)/n · G(4π√(ll′)/n)`, stopped once three consecutive
/// `|G|` fall below `RHS_TAIL_TOL · |running sum|`.
fn rhs_series(setup: &LimitSetup, ev: &ConvolutionEvaluator) -> Result<Series> {
    let scale = 4.0 * PI * ((setup.l * setup.lp) as f64).sqrt();
    let mut sum = NeumaierSum::new();
    let mut small_run = 0;
    let mut recent: Vec<f64> = Vec::new();
    let mut start = 1;
    while start <= RHS_MAX_TERMS {
        let batch: Vec<(f64, f64)> = (start..start + RHS_BATCH)
            .into_par_iter()
            .map(|n| -> Result<(f64, f64)> {
                let g = convolve_spectral(ev, scale / n as f64, SpectralNormalization::Corrected)?
                    .value;
                let s = kloosterman_direct(setup.l as i64, setup.lp as i64, n);
                Ok((g, s * g / n as f64))
            })
            .collect::<Result<_>>()?;
        for (offset, (g, term)) in batch.into_iter().enumerate() {
            sum.add(term);
            recent.push(term.abs());
            if g.abs() < RHS_TAIL_TOL * sum.value().abs() {
                small_run += 1;
            } else {
                small_run = 0;
            }
            if small_run == 3 {
                let k = recent.len();
                return Ok(Series {
                    sum: sum.value(),
                    terms: start + offset as u64,
                    tail_bound: recent[k - 3..].iter().sum(),
                });
            }
        }
        start += RHS_BATCH;
    }
    Err(ExperimentError::BudgetExhausted {
        n_max: RHS_MAX_TERMS,
    })
}

fn spot_checks(setup: &LimitSetup, ev: &ConvolutionEvaluator) -> Result<Vec<SpotCheck>> {
    let scale = 4.0 * PI * ((setup.l * setup.lp) as f64).sqrt();
    SPOT_CHECK_N
        .par_iter()
        .map(|&n| {
            let z = scale / n as f64;
            let d = convolve_direct(ev, z)?;
            let s = convolve_spectral(ev, z, SpectralNormalization::Corrected)?;
            Ok(SpotCheck {
                n,
                z,
                direct: d.value.re,
                direct_error: d.error_estimate,
                spectral: s.value,
                spectral_error: s.error_estimate(),
            })
        })
        .collect()
}

/// The limit `(1/X) Σ g(n/X) geo(l,n;V) geo(l′,n;W)` over the ladder,
/// against the three right-hand-side normalisations.
pub fn run_limit(setup: &LimitSetup) -> Result<ExperimentReport> {
    setup.validate()?;
    let (outcome, threads) = with_pool(setup.threads, || run_in_pool(setup))?;
    let (rows, summary) = outcome?;
    let spec = direct_spec();
    Ok(ExperimentReport {
        kind: ExperimentKind::Limit,
        metadata: ReportMetadata {
            l: setup.l,
            lp: setup.lp,
            v: setup.v,
            w: setup.w,
            g: setup.g,
            ladder: setup.ladder.clone(),
            error_floor: super::ERROR_FLOOR,
            rhs_tail_tol: RHS_TAIL_TOL,
            quad_abs_tol: spec.abs_tol,
            quad_rel_tol: spec.rel_tol,
            table: setup.table,
            chunk_size: CHUNK,
            threads,
        },
        rows,
        summary,
    })
}

fn run_in_pool(setup: &LimitSetup) -> Result<(Vec<ReportRow>, ReportSummary)> {
    let ev = ConvolutionEvaluator::with_specs(setup.v, setup.w, direct_spec(), setup.table);
    let diagonal = if setup.l == setup.lp {
        diag_inner(&setup.v, &setup.w)?
    } else {
        0.0
    };
    let series = rhs_series(setup, &ev)?;
    let rhs: Vec<f64> = RhsVariant::ALL
        .iter()
        .map(|v| v.combine(diagonal, series.sum))
        .collect();
    let checks = spot_checks(setup, &ev)?;

    let mut rows = Vec::with_capacity(setup.ladder.len());
    if let Some(x_max) = setup.ladder.max() {
        let (_, n_hi) = n_range(&setup.g, x_max);
        let (cv_lo, cv_hi) = c_bounds(setup.l, n_hi, &setup.v);
        let (cw_lo, cw_hi) = c_bounds(setup.lp, n_hi, &setup.w);
        let rows_v = Rows::build(setup.l, cv_lo, cv_hi);
        let rows_w = Rows::build(setup.lp, cw_lo, cw_hi);
        for &x in setup.ladder.values() {
            let start = Instant::now();
            let (value, evals) = lhs(setup, &rows_v, &rows_w, x);
            rows.push(ReportRow::new(
                x,
                value,
                rhs.clone(),
                start.elapsed().as_secs_f64(),
                evals,
            ));
        }
    }

    let best = rows.last().and_then(|last| {
        (0..RhsVariant::ALL.len()).min_by(|&i, &j| last.rel_err[i].total_cmp(&last.rel_err[j]))
    });
    let summary = ReportSummary {
        best_variant: best.map(|i| RhsVariant::ALL[i]),
        best_constant: best.map(|i| RhsVariant::ALL[i].constant()),
        best_includes_diagonal: best.map(|i| RhsVariant::ALL[i].includes_diagonal()),
        strictly_decreasing: best.is_some_and(|i| {
            let errs: Vec<f64> = rows.iter().map(|r| r.rel_err[i]).collect();
            ExperimentReport::strictly_decreasing(&errs)
        }),
        fitted_exponent: best.and_then(|i| {
            let xs: Vec<f64> = rows.iter().map(|r| r.x).collect();
            let es: Vec<f64> = rows.iter().map(|r| r.abs_err[i]).collect();
            super::fit_exponent(&xs, &es)
        }),
        diagonal,
        series: series.sum,
        rhs_terms: series.terms,
        rhs_tail_bound: series.tail_bound,
        spot_checks: checks,
    };
    Ok((rows, summary))
}
