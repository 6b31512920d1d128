//! Spectral transforms `h(V,k)`, `h(V,t)`, the Mellin transform, the
//! convolution `V*W` by a direct and a spectral route, and Sears–Titchmarsh
//! inversion.

mod bump;
mod convolution;
mod kernel;

mod sears;
mod spectral;

pub use bump::{bump_eval, normalize_weight, BumpFunction, BumpProfile};
pub use convolution::{
    convolve_direct, convolve_spectral, direct_spec, ConvolutionEvaluator, SpectralNormalization,
    SpectralTable, SpectralValue, TableSpec,
};
pub use kernel::{convolution_kernel_transform, KernelTransform, KernelWindow};

pub use sears::{pr5_check, sears_reconstruct, Pr5Check, SearsConvention, TransformTable};
pub use spectral::{diag_inner, h_holomorphic, h_maass, h_transform, mellin, SpectralPoint};

use thiserror::Error;

use crate::quadrature::QuadError;
use crate::special_functions::SpecialError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TransformError {
    #[error("weight function integrates to zero")]
    ZeroFunction,
    #[error("invalid bump support [{a}, {b}]")]
    InvalidSupport { a: f64, b: f64 },
    #[error("weight k = {0} must be even and positive")]
    InvalidWeight(u32),
    #[error(transparent)]
    Special(#[from] SpecialError),
    #[error(transparent)]
    Quadrature(#[from] QuadError),
}

pub type Result<T> = std::result::Result<T, TransformError>;
