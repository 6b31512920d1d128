//! Numerical laboratory for Kloosterman sums, Bessel transforms of integer
//! and imaginary order, and the geometric sides of the Kuznetsov and
//! Petersson trace formulas.
//!
//! The crate is organised bottom-up:
//!
//! * [`arithmetic`] exact integer machinery: residues, multiplicative
//!   functions, Kloosterman and Ramanujan sums, Dirichlet-series checks.
//! * [`special_functions`] complex Γ and ζ, Bessel `J`, `I`, `B` and Hankel
//!   functions, Eisenstein coefficients.
//! * [`quadrature`] adaptive Gauss–Kronrod rules in one and two dimensions,
//!   principal values and contour integrals.
//! * [`transforms`] bump functions, spectral transforms `h(V,·)`, the
//!   convolution `V*W` by a direct and a spectral route, Sears–Titchmarsh
//!   inversion.
//! * [`trace_formula`] geometric sides and diagonal/kernel terms.
//! * [`experiments`] convergence experiments and the identity registry.

pub mod arithmetic;
pub mod compensated;
pub mod experiments;
pub mod quadrature;
pub mod special_functions;
pub mod trace_formula;
pub mod transforms;

pub use num_complex::Complex64;
