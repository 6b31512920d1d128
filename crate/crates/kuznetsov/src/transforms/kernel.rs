use std::cell::{Cell, RefCell};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::convolution::{convolve_direct, ConvolutionEvaluator};
use super::spectral::{i_pow_even, SpectralPoint};
use super::{Result, TransformError};
use crate::compensated::NeumaierSum;
use crate::quadrature::{
    integrate_2d, integrate_semi_infinite, paired_nodes, panel_estimate, QuadSpec, Rect,
};
use crate::special_functions::{bessel_b, bessel_j, Order};

/// Truncation of the `w`-integral defining `h(G, ·)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KernelWindow {
    pub w_min: f64,
    pub w_max: f64,
    /// Largest phase change allowed across one 21-point panel.
    pub phase_budget: f64,
    /// Absolute tolerance of the `(w_max, ∞)` tail; the relative
    /// tolerance is a hundred times larger.
    pub tail_tol: f64,
}

impl Default for KernelWindow {
    fn default() -> Self {
        Self {
            w_min: 0.05,
            w_max: 200.0,
            phase_budget: 12.0,
            tail_tol: 1e-9,
        }
    }
}

/// `h(G, point)` with its error budget.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KernelTransform {
    pub point: SpectralPoint,
    pub value: f64,
    /// Panel quadrature over `[w_min, w_max]`.
    pub quadrature_error: f64,
    /// Contribution of `(w_max, ∞)`, included in `value`.
    pub upper_tail: f64,
    pub upper_tail_error: f64,
    /// `w_min · max |G K/w|` over samples in `[w_min/5, w_min]`.
    pub lower_tail_bound: f64,
    pub g_evaluations: usize,
}

impl KernelTransform {
    pub fn error_estimate(&self) -> f64 {
        self.quadrature_error + self.upper_tail_error + self.lower_tail_bound
    }
}

fn kernel(point: SpectralPoint, w: f64) -> Result<f64> {
    Ok(match point {
        SpectralPoint::Even(k) => {
            if k == 0 || k % 2 != 0 {
                return Err(TransformError::InvalidWeight(k));
            }
            bessel_j(Order::Integer(k as i64 - 1), w)?.re
        }
        SpectralPoint::Maass(t) => bessel_b(t, w)?,
    })
}

/// Panel breakpoints whose widths keep the phase of `G` and the Bessel
/// kernel within the budget.
fn breakpoints(ev: &ConvolutionEvaluator, window: KernelWindow) -> Vec<f64> {
    let (v, w) = (ev.v(), ev.w());
    let e_q = v.b() * w.b();
    let p_max = (v.b() / w.a()).ln().abs().max((w.b() / v.a()).ln().abs());
    let rate = |x: f64| e_q / (2.0 * x * x) + p_max.cosh() + 1.0;
    let mut out = vec![window.w_min];
    let mut x = window.w_min;
    while x < window.w_max {
        x = (x + window.phase_budget / rate(x)).min(window.w_max);
        out.push(x);
    }
    out
}

/// Hankel-type expansion of the kernel for `|w| ≥ w_max`:
/// `K(w) = −√(2/π) Im[e^{i(w−π/4)} S(w)]`, `S(w) = Σ_j i^j a_j(μ) w^{−j−1/2}`,
/// where `K` is `i^k J_{k−1}` or `B_{2it}` and `μ = 4ν²`.
struct KernelAsymptotic {
    coeffs: Vec<Complex64>,
}

impl KernelAsymptotic {
    fn new(point: SpectralPoint, w_min: f64) -> Self {
        let mu = match point {
            SpectralPoint::Even(k) => 4.0 * (k as f64 - 1.0).powi(2),
            SpectralPoint::Maass(t) => -16.0 * t * t,
        };
        let mut coeffs = vec![Complex64::new(1.0, 0.0)];
        let mut a = 1.0f64;
        for j in 1..80 {
            let jf = j as f64;
            a *= (mu - (2.0 * jf - 1.0).powi(2)) / (8.0 * jf);
            let term = a / w_min.powi(j);
            coeffs.push(Complex64::i().powi(j) * a);
            if term.abs() < 1e-17 {
                break;
            }
        }
        Self { coeffs }
    }

    fn s(&self, w: Complex64) -> Complex64 {
        let inv = 1.0 / w;
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * inv + c;
        }
        acc / w.sqrt()
    }
}

/// `T(c, β) = ∫_W^∞ 2cos(wc + β/w) K(w) dw/w`, split into the parts with
/// frequency `c + 1` (rotated up) and `1 − c` (rotated down).
fn swapped_tail_inner(
    asym: &KernelAsymptotic,
    c: f64,
    beta: f64,
    big_w: f64,
) -> Result<(f64, f64)> {
    let spec = QuadSpec::default().with_tolerances(1e-16, 1e-9);
    let quarter = Complex64::from_polar(1.0, -std::f64::consts::FRAC_PI_4);
    let up = integrate_semi_infinite(
        |s| {
            let w = Complex64::new(big_w, s);
            let phase = w * (c + 1.0) + beta / w;
            Complex64::i() * (Complex64::i() * phase).exp() * asym.s(w) / w
        },
        0.0,
        spec,
    )
    .require()?;
    let down = integrate_semi_infinite(
        |s| {
            let w = Complex64::new(big_w, -s);
            let phase = w * (1.0 - c) - beta / w;
            -Complex64::i() * (Complex64::i() * phase).exp() * asym.s(w) / w
        },
        0.0,
        spec,
    )
    .require()?;
    let k = -(2.0 / std::f64::consts::PI).sqrt();
    let value = k * (quarter * (up.value + down.value)).im;
    Ok((value, k.abs() * (up.error_estimate + down.error_estimate)))
}

/// `∫_{w_max}^∞ G(w) K(w) dw/w` with the `w`-integral taken inside the
/// double integral defining `G`.
fn swapped_tail(
    ev: &ConvolutionEvaluator,
    point: SpectralPoint,
    big_w: f64,
    tol: f64,
) -> Result<(f64, f64)> {
    let asym = KernelAsymptotic::new(point, big_w);
    let (v, w) = (*ev.v(), *ev.w());
    let (lav, lbv) = (v.a().ln(), v.b().ln());
    let (law, lbw) = (w.a().ln(), w.b().ln());
    let (p0, p1) = (lav - lbw, lbv - law);
    let (q0, q1) = (lav + law, lbv + lbw);
    let spec = QuadSpec::default_2d().with_tolerances(tol, 100.0 * tol);
    let failure = RefCell::new(None);
    let inner_err = Cell::new(0.0f64);
    let integrand = |p: f64, q: f64| {
        let vx = v.eval(((p + q) / 2.0).exp());
        let wy = w.eval(((q - p) / 2.0).exp());
        if vx == 0.0 || wy == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        match swapped_tail_inner(&asym, p.cosh(), q.exp() / 2.0, big_w) {
            Ok((t, e)) => {
                inner_err.set(inner_err.get().max(e * vx * wy));
                Complex64::new(0.5 * vx * wy * t, 0.0)
            }
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                Complex64::new(0.0, 0.0)
            }
        }
    };
    let pieces = if p0 < 0.0 && p1 > 0.0 {
        vec![(p0, 0.0), (0.0, p1)]
    } else {
        vec![(p0, p1)]
    };
    let mut total = NeumaierSum::new();
    let mut err = 0.0;
    for (a, b) in pieces {
        let r = integrate_2d(integrand, Rect::new(a, b, q0, q1), spec);
        if let Some(e) = failure.borrow_mut().take() {
            return Err(e);
        }
        let r = r.require()?;
        total.add(r.re());
        err += r.error_estimate;
    }
    let area = 0.5 * (p1 - p0) * (q1 - q0);
    Ok((total.value(), err + area * inner_err.get()))
}

/// `h(G, k) = i^k ∫ G(w) J_{k−1}(w) dw/w` and `h(G, t) = ∫ G(w) B_{2it}(w) dw/w`
/// for `G = V*W` from [`convolve_direct`], sharing one set of `G` samples.
pub fn convolution_kernel_transform(
    ev: &ConvolutionEvaluator,
    points: &[SpectralPoint],
    window: KernelWindow,
) -> Result<Vec<KernelTransform>> {
    let bps = breakpoints(ev, window);
    let panels: Vec<[(f64, f64, f64); 21]> =
        bps.windows(2).map(|p| paired_nodes(p[0], p[1])).collect();
    let nodes: Vec<f64> = panels.iter().flatten().map(|n| n.0).collect();
    let lower: Vec<f64> = (1..=5).map(|i| window.w_min * i as f64 / 5.0).collect();
    let g: Vec<f64> = nodes
        .par_iter()
        .chain(lower.par_iter())
        .map(|&w| convolve_direct(ev, w).map(|r| r.value.re))
        .collect::<Result<Vec<f64>>>()?;
    let (g_nodes, g_lower) = g.split_at(nodes.len());
    points
        .par_iter()
        .map(|&point| {
            let f: Vec<f64> = nodes
                .iter()
                .zip(g_nodes)
                .map(|(&w, &gw)| Ok(gw * kernel(point, w)? / w))
                .collect::<Result<_>>()?;
            let mut value = NeumaierSum::new();
            let mut err = 0.0;
            for (panel, vals) in panels.iter().zip(f.chunks(21)) {
                let (v, e) = panel_estimate(panel, vals);
                value.add(v);
                err += e;
            }
            let (tail, tail_err) = swapped_tail(ev, point, window.w_max, window.tail_tol)?;
            let lower_tail_bound = window.w_min
                * lower
                    .iter()
                    .zip(g_lower)
                    .map(|(&w, &gw)| Ok((gw * kernel(point, w)? / w).abs()))
                    .collect::<Result<Vec<f64>>>()?
                    .into_iter()
                    .fold(0.0, f64::max);
            let sign = match point {
                SpectralPoint::Even(k) => i_pow_even(k),
                SpectralPoint::Maass(_) => 1.0,
            };
            Ok(KernelTransform {
                point,
                value: sign * value.value() + tail,
                quadrature_error: err,
                upper_tail: tail,
                upper_tail_error: tail_err,
                lower_tail_bound,
                g_evaluations: nodes.len() + lower.len(),
            })
        })
        .collect()
}
