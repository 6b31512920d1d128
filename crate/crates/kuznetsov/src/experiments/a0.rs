use std::f64::consts::PI;
use std::time::Instant;

use rayon::prelude::*;

use super::report::{ExperimentKind, ReportMetadata, ReportRow, ReportSummary};
use super::{require_normalized, with_pool, ExperimentError, ExperimentReport, Result, XLadder};
use crate::arithmetic::ramanujan_closed;
use crate::compensated::NeumaierSum;
use crate::quadrature::{integrate_1d_real, QuadSpec};
use crate::transforms::{diag_inner, BumpFunction, TableSpec};

const CHUNK: usize = 256;

fn quad_spec() -> QuadSpec {
    QuadSpec::default().with_tolerances(1e-15, 1e-12)
}

/// Inputs of the diagonal asymptotic.
#[derive(Debug, Clone, PartialEq)]
pub struct A0Setup {
    pub l: u64,
    pub lp: u64,
    pub v: BumpFunction,
    pub w: BumpFunction,
    pub g: BumpFunction,
    pub ladder: XLadder,
    pub threads: usize,
}

/// `Σ_c f_c(l − l′)/c² ∫ g(t) V(4π√(Xlt)/c) W(4π√(Xl′t)/c) dt`.
fn a0_value(setup: &A0Setup, x: f64) -> Result<(f64, u64)> {
    let (v, w, g) = (&setup.v, &setup.w, &setup.g);
    let sv = 4.0 * PI * (x * setup.l as f64).sqrt();
    let sw = 4.0 * PI * (x * setup.lp as f64).sqrt();
    // V's argument sv√t/c lies in (a_V, b_V) for t in (g.a, g.b) only for
    // c in this window; likewise for W.
    let c_lo = (sv * g.a().sqrt() / v.b())
        .max(sw * g.a().sqrt() / w.b())
        .floor()
        .max(1.0) as u64;
    let c_hi = (sv * g.b().sqrt() / v.a())
        .min(sw * g.b().sqrt() / w.a())
        .ceil() as u64;
    if c_hi < c_lo {
        return Ok((0.0, 0));
    }
    let m = setup.l as i64 - setup.lp as i64;
    let starts: Vec<u64> = (c_lo..=c_hi).step_by(CHUNK).collect();
    let partials = starts
        .par_iter()
        .map(|&start| -> Result<(f64, u64)> {
            let mut acc = NeumaierSum::new();
            let mut evals = 0u64;
            for c in start..=(start + CHUNK as u64 - 1).min(c_hi) {
                let f = ramanujan_closed(c, m);
                if f == 0 {
                    continue;
                }
                let cf = c as f64;
                let t_lo = g
                    .a()
                    .max((v.a() * cf / sv).powi(2))
                    .max((w.a() * cf / sw).powi(2));
                let t_hi = g
                    .b()
                    .min((v.b() * cf / sv).powi(2))
                    .min((w.b() * cf / sw).powi(2));
                if t_hi <= t_lo {
                    continue;
                }
                let r = integrate_1d_real(
                    |t| {
                        let st = t.sqrt();
                        g.eval(t) * v.eval(sv * st / cf) * w.eval(sw * st / cf)
                    },
                    t_lo,
                    t_hi,
                    quad_spec(),
                )
                .require()?;
                acc.add(f as f64 / (cf * cf) * r.re());
                evals += r.evals as u64;
            }
            Ok((acc.value(), evals))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut total = NeumaierSum::new();
    let mut evals = 0;
    for (p, e) in partials {
        total.add(p);
        evals += e;
    }
    Ok((total.value(), evals))
}

/// The diagonal term `A₀(X)` over the ladder against
/// `(6δ_{l,l′}/π²) ∫ V W dy/y`, with a fitted decay exponent.
pub fn run_a0(setup: &A0Setup) -> Result<ExperimentReport> {
    if setup.l == 0 || setup.lp == 0 {
        return Err(ExperimentError::InvalidInput {
            field: "l",
            reason: "l and l' must be positive".into(),
        });
    }
    require_normalized(&setup.g)?;
    let diagonal = if setup.l == setup.lp {
        diag_inner(&setup.v, &setup.w)?
    } else {
        0.0
    };
    let target = 6.0 / (PI * PI) * diagonal;
    let (rows, threads) = with_pool(setup.threads, || {
        setup
            .ladder
            .values()
            .iter()
            .map(|&x| {
                let start = Instant::now();
                let (value, evals) = a0_value(setup, x)?;
                Ok(ReportRow::new(
                    x,
                    value,
                    vec![target],
                    start.elapsed().as_secs_f64(),
                    evals,
                ))
            })
            .collect::<Result<Vec<_>>>()
    })?;
    let rows = rows?;
    let xs: Vec<f64> = rows.iter().map(|r| r.x).collect();
    let es: Vec<f64> = rows.iter().map(|r| r.abs_err[0]).collect();
    let q = quad_spec();
    Ok(ExperimentReport {
        kind: ExperimentKind::DiagonalA0,
        metadata: ReportMetadata {
            l: setup.l,
            lp: setup.lp,
            v: setup.v,
            w: setup.w,
            g: setup.g,
            ladder: setup.ladder.clone(),
            error_floor: super::ERROR_FLOOR,
            rhs_tail_tol: 0.0,
            quad_abs_tol: q.abs_tol,
            quad_rel_tol: q.rel_tol,
            table: TableSpec::default(),
            chunk_size: CHUNK,
            threads,
        },
        summary: ReportSummary {
            strictly_decreasing: ExperimentReport::strictly_decreasing(&es),
            fitted_exponent: super::fit_exponent(&xs, &es),
            diagonal,
            ..ReportSummary::default()
        },
        rows,
    })
}
