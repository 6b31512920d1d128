//! Exact integer arithmetic: residues, multiplicative functions, exponential
//! sums and the residue-class bijection between `X(c1,c2,n)` and
//! `Y(c1,c2,n)`.

mod dirichlet;
mod kloosterman;
mod multiplicative;
mod residues;

pub use dirichlet::{
    dirichlet_series_check, phi_dirichlet_check, r_weight, z_factor, PhiDirichletCheck, SeriesCheck,
};
pub use kloosterman::{kloosterman, kloosterman_direct, kloosterman_row, KloostermanCache};
pub use multiplicative::{
    divisors, euler_phi, factorize, moebius, num_divisors, ramanujan_closed, ramanujan_divisor,
    sigma1,
};
pub use residues::{bijection_r, enumerate_x, enumerate_y, mod_inverse, RPair, Residue, XClass};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ArithmeticError {
    #[error("{a} is not invertible modulo {c}")]
    NotCoprime { a: i64, c: u64 },
    #[error("modulus must be positive")]
    ZeroModulus,
    #[error("{d} is not a divisor of {n}")]
    NotADivisor { d: u64, n: u64 },
    #[error("series diverges for Re(s) = {re_s} (needs Re(s) > {bound})")]
    DivergentParameter { re_s: f64, bound: f64 },
    #[error("inexact division while building (r1, r2) for class {0:?}")]
    InexactDivision(XClass),
    #[error("residue bijection needs n != 0")]
    ZeroN,
}

pub type Result<T> = std::result::Result<T, ArithmeticError>;
