//! Complex Γ and ζ, Bessel functions of integer and imaginary order, Hankel
//! functions and Eisenstein-coefficient arithmetic.

mod bessel;
mod eisenstein;
mod gamma;
mod zeta;

pub use bessel::{
    bessel_b, bessel_i, bessel_i_polar, bessel_i_scaled, bessel_j, bessel_j_complex,
    bessel_j_integer_table, bessel_j_with_error, bessel_y0, bessel_y_integer, hankel1, hankel2,
    Order, IMAGINARY_ORDER_TOL, INTEGER_ORDER_TOL, MAX_IMAGINARY_T, SERIES_MAX_X, T_CUT, X_SWITCH,
};
pub use eisenstein::{eta_coeff, ramanujan_zeta_identity, tau_it, EtaCoefficient};
pub use gamma::{gamma_complex, rgamma};
pub use zeta::{zeta, zeta_with, ZetaTruncation};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecialError {
    #[error("Γ has a pole at {0}")]
    PoleAtNonpositiveInteger(f64),
    #[error("order {order:?} at x = {x} is outside the validated range")]
    OutOfValidatedRange { order: Order, x: f64 },
    #[error("Hankel formula needs a non-integer order, got {0}")]
    IntegerOrderUnsupported(i64),
    #[error("ζ has a pole at s = 1")]
    PoleAtOne,
    #[error("η(l, 1/2 + it) is undefined at t = 0")]
    UndefinedAtZero,
    #[error("series diverges for Re(s) = {re_s} (needs Re(s) > {bound})")]
    DivergentParameter { re_s: f64, bound: f64 },
}

pub type Result<T> = std::result::Result<T, SpecialError>;
