use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{OnceLock, RwLock};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::spectral::{h_holomorphic, h_maass, i_pow_even};
use super::{BumpFunction, Result};
use crate::compensated::NeumaierSum;
use crate::quadrature::{integrate_2d, paired_nodes, QuadResult, QuadSpec, Rect};
use crate::special_functions::{bessel_b, bessel_j_integer_table};

/// Truncation of the spectral side: `t ∈ [0, t_max]` on fixed Gauss–Kronrod
/// panels and even `k ≤ k_max`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TableSpec {
    pub t_max: f64,
    pub k_max: u32,
    pub panel_width: f64,
}

impl Default for TableSpec {
    fn default() -> Self {
        Self {
            t_max: 30.0,
            k_max: 60,
            panel_width: 0.25,
        }
    }
}

impl TableSpec {
    pub fn doubled(self) -> Self {
        Self {
            t_max: 2.0 * self.t_max,
            k_max: 2 * self.k_max,
            ..self
        }
    }

    /// `(t, Kronrod weight, embedded Gauss weight)` on `[0, t_max]`.
    pub(crate) fn t_nodes(&self) -> Vec<(f64, f64, f64)> {
        let panels = (self.t_max / self.panel_width).ceil().max(1.0) as usize;
        let h = self.t_max / panels as f64;
        (0..panels)
            .flat_map(|p| paired_nodes(p as f64 * h, (p + 1) as f64 * h))
            .collect()
    }

    pub(crate) fn weights(&self) -> impl Iterator<Item = u32> {
        (2..=self.k_max).step_by(2)
    }
}

/// Products `M(t) = h(V,t)h(W,t)` at the quadrature nodes and
/// `M(k) = h(V,k)h(W,k)` for even `k ≤ k_max`.
#[derive(Debug, Clone, Serialize)]
pub struct SpectralTable {
    pub spec: TableSpec,
    pub t: Vec<f64>,
    pub kronrod_weight: Vec<f64>,
    pub gauss_weight: Vec<f64>,
    pub m_t: Vec<f64>,
    pub k: Vec<u32>,
    pub m_k: Vec<f64>,
}

impl SpectralTable {
    pub fn build(v: &BumpFunction, w: &BumpFunction, spec: TableSpec) -> Result<Self> {
        let nodes = spec.t_nodes();
        let same = v == w;
        let m_t = nodes
            .par_iter()
            .map(|&(t, _, _)| {
                let hv = h_maass(v, t)?;
                Ok(if same { hv * hv } else { hv * h_maass(w, t)? })
            })
            .collect::<Result<Vec<f64>>>()?;
        let k: Vec<u32> = spec.weights().collect();
        let m_k = k
            .par_iter()
            .map(|&k| {
                let hv = h_holomorphic(v, k)?;
                let hw = if same { hv } else { h_holomorphic(w, k)? };
                Ok((hv * hw).re)
            })
            .collect::<Result<Vec<f64>>>()?;
        Ok(Self {
            spec,
            t: nodes.iter().map(|n| n.0).collect(),
            kronrod_weight: nodes.iter().map(|n| n.1).collect(),
            gauss_weight: nodes.iter().map(|n| n.2).collect(),
            m_t,
            k,
            m_k,
        })
    }
}

/// Overall constant and sign convention of the spectral expansion of `V*W`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SpectralNormalization {
    /// `4π(∫ M(t) tanh(πt) B_{2it}(z) t dt + Σ (k−1) J_{k−1}(z) M(k))`.
    Literal,
    /// `8π ∫ M(t) tanh(πt) B_{2it}(z) t dt + 4π Σ i^k (k−1) J_{k−1}(z) M(k)`,
    /// the form that matches the direct integral.
    Corrected,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectralValue {
    pub value: f64,
    pub maass_part: f64,
    pub holomorphic_part: f64,
    /// `|Kronrod − Gauss|` over the fixed panels.
    pub discretization_error: f64,
    /// `∫ |integrand|` over the last fifth of `[0, t_max]` plus the last
    /// three `k`-terms.
    pub tail_estimate: f64,
}

impl SpectralValue {
    pub fn error_estimate(&self) -> f64 {
        self.discretization_error + self.tail_estimate
    }
}

/// Default tolerances for the direct double integral.
pub fn direct_spec() -> QuadSpec {
    QuadSpec::default_2d().with_tolerances(1e-10, 1e-10)
}

/// Evaluates `(V*W)(z)` by the direct double integral and by the spectral
/// expansion. Direct values are cached per `z`.
#[derive(Debug)]
pub struct ConvolutionEvaluator {
    v: BumpFunction,
    w: BumpFunction,
    spec: QuadSpec,
    table_spec: TableSpec,
    cache: RwLock<HashMap<u64, QuadResult>>,
    table: OnceLock<SpectralTable>,
}

impl ConvolutionEvaluator {
    pub fn new(v: BumpFunction, w: BumpFunction) -> Self {
        Self::with_specs(v, w, direct_spec(), TableSpec::default())
    }

    pub fn with_specs(
        v: BumpFunction,
        w: BumpFunction,
        spec: QuadSpec,
        table_spec: TableSpec,
    ) -> Self {
        Self {
            v,
            w,
            spec,
            table_spec,
            cache: RwLock::new(HashMap::new()),
            table: OnceLock::new(),
        }
    }

    pub fn standard() -> Self {
        Self::new(BumpFunction::standard_v(), BumpFunction::standard_w())
    }

    pub fn v(&self) -> &BumpFunction {
        &self.v
    }

    pub fn w(&self) -> &BumpFunction {
        &self.w
    }

    pub fn spec(&self) -> QuadSpec {
        self.spec
    }

    pub fn table_spec(&self) -> TableSpec {
        self.table_spec
    }

    pub fn cached_len(&self) -> usize {
        self.cache.read().expect("cache poisoned").len()
    }

    /// Builds the transform table on first use.
    pub fn spectral_table(&self) -> Result<&SpectralTable> {
        if let Some(t) = self.table.get() {
            return Ok(t);
        }
        let built = SpectralTable::build(&self.v, &self.w, self.table_spec)?;
        Ok(self.table.get_or_init(|| built))
    }

    /// `G(z)` without consulting the cache.
    pub fn evaluate_direct(&self, z: f64) -> Result<QuadResult> {
        if self.v.is_zero() || self.w.is_zero() {
            return Ok(QuadResult::zero());
        }
        // x = e^u, y = e^v: phase z cosh(u − v) + e^{u+v}/(2z).
        let rect = Rect::new(
            self.v.a().ln(),
            self.v.b().ln(),
            self.w.a().ln(),
            self.w.b().ln(),
        );
        let (v, w) = (self.v, self.w);
        let integrand = |p: f64, q: f64| {
            let vx = v.eval(p.exp());
            if vx == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            let wy = w.eval(q.exp());
            if wy == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            let phase = z * (p - q).cosh() + (p + q).exp() / (2.0 * z);
            Complex64::new(2.0 * vx * wy * phase.cos(), 0.0)
        };
        Ok(integrate_2d(integrand, rect, self.spec).require()?)
    }
}

/// `G(z) = F(z) + F(−z) = ∬ V(x)W(y) 2cos((z/2)(x/y + y/x) + xy/(2z)) dx/x dy/y`.
pub fn convolve_direct(ev: &ConvolutionEvaluator, z: f64) -> Result<QuadResult> {
    let key = z.to_bits();
    if let Some(r) = ev.cache.read().expect("cache poisoned").get(&key) {
        return Ok(*r);
    }
    let r = ev.evaluate_direct(z)?;
    ev.cache.write().expect("cache poisoned").insert(key, r);
    Ok(r)
}

/// Spectral expansion of `(V*W)(z)` from the evaluator's transform table.
pub fn convolve_spectral(
    ev: &ConvolutionEvaluator,
    z: f64,
    normalization: SpectralNormalization,
) -> Result<SpectralValue> {
    let table = ev.spectral_table()?;
    spectral_sum(table, z, normalization)
}

pub(crate) fn spectral_sum(
    table: &SpectralTable,
    z: f64,
    normalization: SpectralNormalization,
) -> Result<SpectralValue> {
    let t_tail_from = 0.8 * table.spec.t_max;
    let mut kron = NeumaierSum::new();
    let mut gauss = NeumaierSum::new();
    let mut tail = NeumaierSum::new();
    for (i, &t) in table.t.iter().enumerate() {
        if table.m_t[i] == 0.0 {
            continue;
        }
        let f = table.m_t[i] * (PI * t).tanh() * bessel_b(t, z)? * t;
        kron.add(table.kronrod_weight[i] * f);
        gauss.add(table.gauss_weight[i] * f);
        if t >= t_tail_from {
            tail.add(table.kronrod_weight[i] * f.abs());
        }
    }
    let k_max = table.k.last().copied().unwrap_or(0) as usize;
    let jt = bessel_j_integer_table(k_max.max(1), z);
    let terms: Vec<f64> = table
        .k
        .iter()
        .zip(&table.m_k)
        .map(|(&k, &m)| {
            let sign = match normalization {
                SpectralNormalization::Literal => 1.0,
                SpectralNormalization::Corrected => i_pow_even(k),
            };
            sign * (k as f64 - 1.0) * jt[k as usize - 1] * m
        })
        .collect();
    let k_tail: f64 = terms.iter().rev().take(3).map(|x| x.abs()).sum();
    let holo: f64 = terms.into_iter().collect::<NeumaierSum>().value();
    let t_factor = match normalization {
        SpectralNormalization::Literal => 4.0 * PI,
        SpectralNormalization::Corrected => 8.0 * PI,
    };
    let maass_part = t_factor * kron.value();
    let holomorphic_part = 4.0 * PI * holo;
    Ok(SpectralValue {
        value: maass_part + holomorphic_part,
        maass_part,
        holomorphic_part,
        discretization_error: t_factor * (kron.value() - gauss.value()).abs(),
        tail_estimate: t_factor * tail.value() + 4.0 * PI * k_tail,
    })
}
