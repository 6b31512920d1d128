//! Convergence experiments over an `X`-ladder, the standalone identity
//! checks and the registry that aggregates them.

mod a0;
mod checks;
mod identities;
mod limit;
mod report;

pub use a0::{run_a0, A0Setup};
pub use checks::{verify_pv, verify_watson, PvReport, PvRow, WatsonReport, WatsonSide};
pub use identities::{
    verify_identities_suite, verify_identities_with, IdentityCheck, IdentityRegistry, IdentityRow,
    IdentitySuiteReport,
};
pub use limit::{run_limit, LimitSetup};
pub use report::{
    fit_exponent, ExperimentKind, ExperimentReport, ReportMetadata, ReportRow, ReportSummary,
    RhsVariant, SpotCheck, XLadder, ERROR_FLOOR,
};

use thiserror::Error;

use crate::arithmetic::ArithmeticError;
use crate::quadrature::QuadError;
use crate::special_functions::SpecialError;
use crate::trace_formula::TraceError;
use crate::transforms::TransformError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExperimentError {
    #[error("invalid X-ladder: {0}")]
    InvalidLadder(String),
    #[error("invalid {field}: {reason}")]
    InvalidInput { field: &'static str, reason: String },
    #[error("RHS series not truncated after {n_max} terms")]
    BudgetExhausted { n_max: u64 },
    #[error("thread pool: {0}")]
    ThreadPool(String),
    #[error(transparent)]
    Arithmetic(#[from] ArithmeticError),
    #[error(transparent)]
    Special(#[from] SpecialError),
    #[error(transparent)]
    Quadrature(#[from] QuadError),
    #[error(transparent)]
    Transform(#[from] TransformError),
    #[error(transparent)]
    Trace(#[from] TraceError),
}

pub type Result<T> = std::result::Result<T, ExperimentError>;

/// Runs `f` on a dedicated pool of `threads` workers (`0` picks rayon's
/// default) and reports the pool size alongside the result.
pub(crate) fn with_pool<T: Send>(
    threads: usize,
    f: impl FnOnce() -> T + Send,
) -> Result<(T, usize)> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| ExperimentError::ThreadPool(e.to_string()))?;
    let n = pool.current_num_threads();
    Ok((pool.install(f), n))
}

/// Checks `∫ g = 1` to `1e-10`.
pub(crate) fn require_normalized(g: &crate::transforms::BumpFunction) -> Result<()> {
    let total = g.integral()?;
    if (total - 1.0).abs() > 1e-10 {
        return Err(ExperimentError::InvalidInput {
            field: "g",
            reason: format!("weight must integrate to 1, got {total}"),
        });
    }
    Ok(())
}
