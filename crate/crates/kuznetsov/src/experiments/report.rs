use std::f64::consts::PI;

use serde::Serialize;

use super::{ExperimentError, Result};
use crate::transforms::{BumpFunction, TableSpec};

/// Denominator floor in relative errors.
pub const ERROR_FLOOR: f64 = 1e-8;

/// Strictly increasing sample points `X ≥ 100`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct XLadder(Vec<f64>);

impl XLadder {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some(bad) = values.iter().find(|x| !(x.is_finite() && **x >= 100.0)) {
            return Err(ExperimentError::InvalidLadder(format!(
                "{bad} is below 100 or not finite"
            )));
        }
        if values.windows(2).any(|w| w[1] <= w[0]) {
            return Err(ExperimentError::InvalidLadder(
                "values must be strictly increasing".into(),
            ));
        }
        Ok(Self(values))
    }

    /// `500, 1000, 2000, 4000, 8000`.
    pub fn standard() -> Self {
        Self(vec![500.0, 1000.0, 2000.0, 4000.0, 8000.0])
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max(&self) -> Option<f64> {
        self.0.last().copied()
    }
}

/// Normalisations of the right-hand side of the limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RhsVariant {
    /// `Σ S(l,l′;n)/n (V*W)(4π√(ll′)/n)`, no constant, no diagonal.
    A,
    /// `(6/π²)(δ D + Σ …)`.
    B,
    /// `(6/π²) Σ …`.
    C,
}

impl RhsVariant {
    pub const ALL: [RhsVariant; 3] = [RhsVariant::A, RhsVariant::B, RhsVariant::C];

    pub fn constant(self) -> f64 {
        match self {
            RhsVariant::A => 1.0,
            RhsVariant::B | RhsVariant::C => 6.0 / (PI * PI),
        }
    }

    pub fn includes_diagonal(self) -> bool {
        self == RhsVariant::B
    }

    /// `constant · (diagonal? + series)`.
    pub fn combine(self, diagonal: f64, series: f64) -> f64 {
        let d = if self.includes_diagonal() {
            diagonal
        } else {
            0.0
        };
        self.constant() * (d + series)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ExperimentKind {
    Limit,
    DiagonalA0,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportMetadata {
    pub l: u64,
    pub lp: u64,
    pub v: BumpFunction,
    pub w: BumpFunction,
    pub g: BumpFunction,
    pub ladder: XLadder,
    pub error_floor: f64,
    /// Relative size below which RHS kernel values end the series.
    pub rhs_tail_tol: f64,
    pub quad_abs_tol: f64,
    pub quad_rel_tol: f64,
    pub table: TableSpec,
    pub chunk_size: usize,
    pub threads: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportRow {
    pub x: f64,
    pub lhs: f64,
    /// One entry per RHS variant (`A, B, C` for the limit, the single
    /// target for `A₀`).
    pub rhs: Vec<f64>,
    pub abs_err: Vec<f64>,
    pub rel_err: Vec<f64>,
    pub wall_seconds: f64,
    pub evals: u64,
}

impl ReportRow {
    pub(crate) fn new(x: f64, lhs: f64, rhs: Vec<f64>, wall_seconds: f64, evals: u64) -> Self {
        let abs_err: Vec<f64> = rhs.iter().map(|r| (lhs - r).abs()).collect();
        let rel_err = abs_err
            .iter()
            .zip(&rhs)
            .map(|(e, r)| e / r.abs().max(ERROR_FLOOR))
            .collect();
        Self {
            x,
            lhs,
            rhs,
            abs_err,
            rel_err,
            wall_seconds,
            evals,
        }
    }
}

/// `(V*W)(z)` by both routes at one of the RHS arguments.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpotCheck {
    pub n: u64,
    pub z: f64,
    pub direct: f64,
    pub direct_error: f64,
    pub spectral: f64,
    pub spectral_error: f64,
}

impl SpotCheck {
    pub fn agrees(&self) -> bool {
        (self.direct - self.spectral).abs() <= self.direct_error + self.spectral_error
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Default)]
pub struct ReportSummary {
    pub best_variant: Option<RhsVariant>,
    pub best_constant: Option<f64>,
    pub best_includes_diagonal: Option<bool>,
    /// Relative error against the best variant, strictly decreasing in `X`.
    pub strictly_decreasing: bool,
    pub fitted_exponent: Option<f64>,
    pub diagonal: f64,
    pub series: f64,
    pub rhs_terms: u64,
    /// `Σ |last three terms|` of the truncated series.
    pub rhs_tail_bound: f64,
    pub spot_checks: Vec<SpotCheck>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub kind: ExperimentKind,
    pub metadata: ReportMetadata,
    pub rows: Vec<ReportRow>,
    pub summary: ReportSummary,
}

impl ExperimentReport {
    /// Relative errors against one variant, in ladder order.
    pub fn errors(&self, variant: usize) -> Vec<f64> {
        self.rows.iter().map(|r| r.rel_err[variant]).collect()
    }

    pub(crate) fn strictly_decreasing(errors: &[f64]) -> bool {
        errors.windows(2).all(|w| w[1] < w[0])
    }
}

/// Least-squares slope of `ln y` against `ln x`; `None` with fewer than two
/// usable points.
pub fn fit_exponent(xs: &[f64], ys: &[f64]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = xs
        .iter()
        .zip(ys)
        .filter(|(x, y)| **x > 0.0 && **y > 0.0)
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}
