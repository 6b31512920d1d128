//! Geometric sides of the Kuznetsov and Petersson formulas, their diagonal
//! terms and the Bessel kernels `G⁺` and `Ĝ`.

use std::f64::consts::PI;
use std::ops::RangeInclusive;

use serde::Serialize;
use thiserror::Error;

use crate::arithmetic::KloostermanCache;
use crate::compensated::NeumaierSum;
use crate::quadrature::{integrate_semi_infinite, QuadError, QuadSpec};
use crate::special_functions::{bessel_b, bessel_j_integer_table, SpecialError};
use crate::transforms::{BumpFunction, TableSpec};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TraceError {
    #[error("k-sum tail not negligible at k = {k_max}: last term {last_term:e}, sum {sum:e}")]
    TailNotNegligible {
        k_max: u32,
        last_term: f64,
        sum: f64,
    },
    #[error(transparent)]
    Special(#[from] SpecialError),
    #[error(transparent)]
    Quadrature(#[from] QuadError),
}

pub type Result<T> = std::result::Result<T, TraceError>;

/// `Σ_c S(m1, m2; c) V(4π√(m1 m2)/c)/c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GeometricSideSpec {
    pub m1: u64,
    pub m2: u64,
    pub v: BumpFunction,
}

impl GeometricSideSpec {
    pub fn new(m1: u64, m2: u64, v: BumpFunction) -> Self {
        Self { m1, m2, v }
    }

    fn scale(&self) -> f64 {
        4.0 * PI * ((self.m1 * self.m2) as f64).sqrt()
    }

    /// Moduli `c` with `4π√(m1 m2)/c` possibly inside `[a, b]`, widened by
    /// one on each side.
    pub fn c_range(&self) -> RangeInclusive<u64> {
        let s = self.scale();
        let lo = (s / self.v.b()).floor().max(2.0) as u64 - 1;
        let hi = (s / self.v.a()).ceil() as u64 + 1;
        lo..=hi
    }
}

pub fn geometric_side(spec: &GeometricSideSpec, cache: &KloostermanCache) -> f64 {
    let s = spec.scale();
    spec.c_range()
        .filter_map(|c| {
            let v = spec.v.eval(s / c as f64);
            (v != 0.0).then(|| {
                crate::arithmetic::kloosterman(spec.m1 as i64, spec.m2 as i64, c, cache) * v
                    / c as f64
            })
        })
        .collect::<NeumaierSum>()
        .value()
}

/// `G₀ = (1/π) ∫_{−∞}^{∞} h(t) tanh(πt) t dt`, taken as `(2/π) ∫₀^∞` for
/// even `h`.
pub fn kuznetsov_diag(h: impl Fn(f64) -> f64, spec: QuadSpec) -> Result<f64> {
    let r =
        integrate_semi_infinite(|t| (h(t) * (PI * t).tanh() * t).into(), 0.0, spec).require()?;
    Ok(2.0 / PI * r.re())
}

/// `(1/π) Σ_{k even, 2 ≤ k ≤ k_max} (k − 1) h(k)`. The last term must be
/// below `1e-14` of the sum.
pub fn petersson_diag(h: impl Fn(u32) -> f64, k_max: u32) -> Result<f64> {
    let terms: Vec<f64> = (2..=k_max)
        .step_by(2)
        .map(|k| (k as f64 - 1.0) * h(k))
        .collect();
    let sum = terms.iter().copied().collect::<NeumaierSum>().value();
    let last = terms.last().copied().unwrap_or(0.0).abs();
    if last > 1e-14 * sum.abs() && last > 0.0 {
        return Err(TraceError::TailNotNegligible {
            k_max,
            last_term: last,
            sum,
        });
    }
    Ok(sum / PI)
}

/// `G⁺(x) = 4 ∫₀^{t_max} h(t) tanh(πt) B_{2it}(x) t dt` on the fixed panels
/// of `table`.
pub fn b_plus_kernel(h: impl Fn(f64) -> f64, x: f64, table: TableSpec) -> Result<f64> {
    let mut acc = NeumaierSum::new();
    for (t, w, _) in table.t_nodes() {
        let ht = h(t);
        if ht != 0.0 {
            acc.add(w * ht * (PI * t).tanh() * bessel_b(t, x)? * t);
        }
    }
    Ok(4.0 * acc.value())
}

/// `Ĝ(x) = 4 Σ_{k even ≤ k_max} (k − 1) h(k) J_{k−1}(x)`.
pub fn g_hat_kernel(h: impl Fn(u32) -> f64, x: f64, k_max: u32) -> f64 {
    let j = bessel_j_integer_table(k_max.max(1) as usize, x);
    let sum = (2..=k_max)
        .step_by(2)
        .map(|k| (k as f64 - 1.0) * h(k) * j[k as usize - 1])
        .collect::<NeumaierSum>()
        .value();
    4.0 * sum
}
