use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use super::convolution::TableSpec;
use super::spectral::{h_holomorphic, h_maass, i_pow_even};
use super::{diag_inner, BumpFunction, Result};
use crate::compensated::NeumaierSum;
use crate::special_functions::{bessel_b, bessel_j_integer_table};

/// Which holomorphic coefficient multiplies `J_{k−1}` in the inversion sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SearsConvention {
    /// `h(f, k) = i^k ∫ f J_{k−1} dx/x`.
    Literal,
    /// `∫ f J_{k−1} dx/x`, i.e. `i^k h(f, k)`.
    Corrected,
}

/// `h(f, t)` on the panel nodes of a [`TableSpec`] and `h(f, k)` for even
/// `k ≤ k_max`.
#[derive(Debug, Clone, Serialize)]
pub struct TransformTable {
    pub spec: TableSpec,
    pub t: Vec<f64>,
    pub weight: Vec<f64>,
    pub h_t: Vec<f64>,
    pub k: Vec<u32>,
    pub h_k: Vec<f64>,
}

impl TransformTable {
    pub fn build(f: &BumpFunction, spec: TableSpec) -> Result<Self> {
        let nodes = spec.t_nodes();
        let h_t = nodes
            .par_iter()
            .map(|&(t, _, _)| h_maass(f, t))
            .collect::<Result<Vec<f64>>>()?;
        let k: Vec<u32> = spec.weights().collect();
        let h_k = k
            .par_iter()
            .map(|&k| h_holomorphic(f, k).map(|z| z.re))
            .collect::<Result<Vec<f64>>>()?;
        Ok(Self {
            spec,
            t: nodes.iter().map(|n| n.0).collect(),
            weight: nodes.iter().map(|n| n.1).collect(),
            h_t,
            k,
            h_k,
        })
    }

    /// `4∫₀^T h(f,t) tanh(πt) B_{2it}(x) t dt + 2Σ_{k ≤ K} (k−1) J_{k−1}(x) c_k`.
    pub fn reconstruct(&self, x: f64, convention: SearsConvention) -> Result<f64> {
        let mut maass = NeumaierSum::new();
        for ((&t, &w), &h) in self.t.iter().zip(&self.weight).zip(&self.h_t) {
            maass.add(w * h * (PI * t).tanh() * bessel_b(t, x)? * t);
        }
        let jt = bessel_j_integer_table(self.spec.k_max.max(1) as usize, x);
        let holo: NeumaierSum = self
            .k
            .iter()
            .zip(&self.h_k)
            .map(|(&k, &h)| {
                let c = match convention {
                    SearsConvention::Literal => h,
                    SearsConvention::Corrected => i_pow_even(k) * h,
                };
                (k as f64 - 1.0) * jt[k as usize - 1] * c
            })
            .collect();
        Ok(4.0 * maass.value() + 2.0 * holo.value())
    }
}

/// Reconstructs `f(x)` from its transforms truncated at `t_max`, `k_max`.
pub fn sears_reconstruct(
    f: &BumpFunction,
    x: f64,
    t_max: f64,
    k_max: u32,
    convention: SearsConvention,
) -> Result<f64> {
    let spec = TableSpec {
        t_max,
        k_max,
        ..TableSpec::default()
    };
    TransformTable::build(f, spec)?.reconstruct(x, convention)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Pr5Check {
    /// `∫ V W dx/x`.
    pub lhs: f64,
    /// `2(∫_{−T}^{T} M(t) tanh(πt) t dt + Σ (k−1) M(k))`.
    pub rhs: f64,
    /// The same with the `t`-integral taken as `2∫₀^T`.
    pub rhs_half_line: f64,
}

impl Pr5Check {
    pub fn relative_error(&self) -> f64 {
        (self.lhs - self.rhs).abs() / self.lhs.abs().max(f64::MIN_POSITIVE)
    }
}

pub fn pr5_check(v: &BumpFunction, w: &BumpFunction, t_max: f64, k_max: u32) -> Result<Pr5Check> {
    let lhs = diag_inner(v, w)?;
    let spec = TableSpec {
        t_max,
        k_max,
        ..TableSpec::default()
    };
    let half = spec.t_nodes();
    let full: Vec<(f64, f64)> = half
        .iter()
        .map(|&(t, w, _)| (-t, w))
        .chain(half.iter().map(|&(t, w, _)| (t, w)))
        .collect();
    let integrand = |t: f64| -> Result<f64> {
        let m = h_maass(v, t)? * h_maass(w, t)?;
        Ok(m * (PI * t).tanh() * t)
    };
    let full_vals = full
        .par_iter()
        .map(|&(t, w)| integrand(t).map(|f| w * f))
        .collect::<Result<Vec<f64>>>()?;
    let pos = &full_vals[half.len()..];
    let full_int: f64 = full_vals.iter().copied().collect::<NeumaierSum>().value();
    let half_int = pos.iter().copied().collect::<NeumaierSum>().value();
    let k_sum = spec
        .weights()
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&k| {
            let m = (h_holomorphic(v, k)? * h_holomorphic(w, k)?).re;
            Ok((k as f64 - 1.0) * m)
        })
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .collect::<NeumaierSum>()
        .value();
    Ok(Pr5Check {
        lhs,
        rhs: 2.0 * (full_int + k_sum),
        rhs_half_line: 2.0 * (2.0 * half_int + k_sum),
    })
}
