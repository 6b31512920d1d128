//! Adaptive Gauss–Kronrod integration in one and two dimensions, principal
//! values and contour integrals.
//!
//! Every routine returns a [`QuadResult`]; failure to reach the requested
//! tolerance is reported through `converged = false` with the best estimate,
//! and [`QuadResult::require`] turns that into an error where a caller needs
//! one.

mod contour;
mod gauss_kronrod;
mod principal_value;
mod two_d;

pub use contour::{contour_imag_axis, contour_integral, Contour, PolarPoint};
pub use gauss_kronrod::{
    integrate_1d, integrate_1d_real, integrate_panels, integrate_semi_infinite, kronrod_nodes,
    KRONROD_POINTS,
};
pub(crate) use gauss_kronrod::{paired_nodes, panel_estimate};
pub use principal_value::principal_value;
pub use two_d::{integrate_2d, Rect};

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

/// Tolerances and work limits for an adaptive integral.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_depth: u32,
    pub max_evals: usize,
}

impl Default for QuadSpec {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-8,
            max_depth: 30,
            max_evals: 1_000_000,
        }
    }
}

impl QuadSpec {
    /// Looser defaults for two-dimensional integrals.
    pub fn default_2d() -> Self {
        Self {
            abs_tol: 1e-8,
            rel_tol: 1e-8,
            max_depth: 30,
            max_evals: 20_000_000,
        }
    }

    pub fn with_tolerances(self, abs_tol: f64, rel_tol: f64) -> Self {
        Self {
            abs_tol,
            rel_tol,
            ..self
        }
    }

    pub fn target(&self, value: Complex64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.norm())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadResult {
    pub value: Complex64,
    pub error_estimate: f64,
    pub evals: usize,
    pub converged: bool,
}

impl QuadResult {
    pub fn zero() -> Self {
        Self {
            value: Complex64::new(0.0, 0.0),
            error_estimate: 0.0,
            evals: 0,
            converged: true,
        }
    }

    pub fn re(&self) -> f64 {
        self.value.re
    }

    pub fn require(self) -> Result<Self, QuadError> {
        if self.converged {
            Ok(self)
        } else {
            Err(QuadError::NotConverged {
                value: self.value,
                error_estimate: self.error_estimate,
                evals: self.evals,
            })
        }
    }

    /// Sum of independent pieces: values and error estimates add.
    pub fn combine(self, other: QuadResult) -> QuadResult {
        QuadResult {
            value: self.value + other.value,
            error_estimate: self.error_estimate + other.error_estimate,
            evals: self.evals + other.evals,
            converged: self.converged && other.converged,
        }
    }

    pub fn scale(self, factor: Complex64) -> QuadResult {
        QuadResult {
            value: self.value * factor,
            error_estimate: self.error_estimate * factor.norm(),
            ..self
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum QuadError {
    #[error("integral did not converge: {value} ± {error_estimate} after {evals} evaluations")]
    NotConverged {
        value: Complex64,
        error_estimate: f64,
        evals: usize,
    },
}
