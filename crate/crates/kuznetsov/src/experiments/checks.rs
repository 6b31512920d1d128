use std::cell::RefCell;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use super::{ExperimentError, Result};
use crate::quadrature::{
    contour_integral, integrate_semi_infinite, principal_value, Contour, PolarPoint, QuadResult,
    QuadSpec,
};
use crate::special_functions::{
    bessel_i_polar, bessel_i_scaled, bessel_j, bessel_y_integer, hankel1, hankel2, Order,
    SpecialError,
};
use crate::transforms::BumpFunction;

const AXIS_CUTOFF: f64 = 40.0;
const AXIS_INDENT: f64 = 1.0;
const LOOP_RADIUS: f64 = 2.0;

fn watson_spec() -> QuadSpec {
    QuadSpec::default().with_tolerances(1e-10, 1e-10)
}

/// One side of a contour identity: the integral (with its prefactor) and
/// the closed-form product, when one is available.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WatsonSide {
    pub contour: Complex64,
    pub product: Option<Complex64>,
    pub quadrature_error: f64,
}

impl WatsonSide {
    pub fn abs_error(&self) -> Option<f64> {
        self.product.map(|p| (self.contour - p).norm())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WatsonReport {
    pub order: Order,
    pub z: f64,
    pub y: f64,
    /// `(1/2πi) ∫_{−i∞}^{i∞}` against `J_ν(Z) J_ν(y)`.
    pub full: WatsonSide,
    /// `(1/πi) ∫_0^{c+i∞}` against `H⁽¹⁾_ν(Z) J_ν(y)`.
    pub hankel1: WatsonSide,
    /// `(−1/πi) ∫_0^{c−i∞}` against `H⁽²⁾_ν(Z) J_ν(y)`.
    pub hankel2: WatsonSide,
    /// Sum of the two half contours against `2 J_ν(Z) J_ν(y)`.
    pub recombined: WatsonSide,
}

/// `exp(t/2 − (Z² + y²)/(2t)) I_ν(yZ/t)/t` with `arg t` tracked along the
/// path. On the positive axis the exponentially scaled `I` keeps the
/// factor `exp(−(Z − y)²/(2t))` finite as `t → 0`.
fn integrand(
    order: Order,
    z: f64,
    y: f64,
    t: PolarPoint,
) -> std::result::Result<Complex64, SpecialError> {
    let tz = t.z();
    let r = y * z / t.r;
    if t.theta == 0.0 {
        let scaled = bessel_i_scaled(order, r)?;
        return Ok((t.r / 2.0 - (z - y).powi(2) / (2.0 * t.r)).exp() * scaled / t.r);
    }
    let i_val = bessel_i_polar(order, r, -t.theta)?;
    Ok((tz / 2.0 - (z * z + y * y) / (2.0 * tz)).exp() * i_val / tz)
}

/// `(H⁽¹⁾_ν(x), H⁽²⁾_ν(x))`, as `J ± iY` for integer order.
fn hankel_pair(order: Order, x: f64) -> Result<(Complex64, Complex64)> {
    if let Order::Integer(n) = order {
        let j = bessel_j(order, x)?.re;
        let y = bessel_y_integer(n, x)?;
        return Ok((Complex64::new(j, y), Complex64::new(j, -y)));
    }
    Ok((hankel1(order, x)?, hankel2(order, x)?))
}

/// `∫_{−i∞}^{i∞}` as the indented segment `|Im t| ≤ AXIS_CUTOFF` plus the
/// two ends turned left onto horizontal rays, where `e^{t/2}` decays.
fn full_axis(mut f: impl FnMut(PolarPoint) -> Complex64, spec: QuadSpec) -> QuadResult {
    let h = AXIS_CUTOFF;
    let segment = contour_integral(
        &mut f,
        &Contour::ImaginaryAxis {
            cutoff: h,
            indent: AXIS_INDENT,
        },
        spec,
    );
    let ray = |sign: f64, s: f64| PolarPoint {
        r: s.hypot(h),
        theta: sign * h.atan2(-s),
    };
    let upper = integrate_semi_infinite(|s| -f(ray(1.0, s)), 0.0, spec);
    let lower = integrate_semi_infinite(|s| f(ray(-1.0, s)), 0.0, spec);
    segment.combine(upper).combine(lower)
}

/// Watson's product formula on the full imaginary axis and its two
/// half-contour forms.
///
/// The half contours run from 0 out along the real axis and round to
/// `−∞` above (`H⁽¹⁾`) or below (`H⁽²⁾`) the cut, which is equivalent to
/// the vertical rays `c ± i∞`.
pub fn verify_watson(order: Order, z: f64, y: f64) -> Result<WatsonReport> {
    if !(z > 0.0 && y > 0.0) {
        return Err(ExperimentError::InvalidInput {
            field: "watson",
            reason: format!("Z and y must be positive, got ({z}, {y})"),
        });
    }
    let failure: RefCell<Option<SpecialError>> = RefCell::new(None);
    let f = |p: PolarPoint| {
        integrand(order, z, y, p).unwrap_or_else(|e| {
            failure.borrow_mut().get_or_insert(e);
            Complex64::new(0.0, 0.0)
        })
    };
    let i = Complex64::i();
    let spec = watson_spec();
    let full_r = full_axis(f, spec);
    let up = contour_integral(
        f,
        &Contour::RealArcRay {
            radius: LOOP_RADIUS,
            upper: true,
        },
        spec,
    );
    let down = contour_integral(
        f,
        &Contour::RealArcRay {
            radius: LOOP_RADIUS,
            upper: false,
        },
        spec,
    );
    if let Some(e) = failure.into_inner() {
        return Err(e.into());
    }
    let jz = bessel_j(order, z)?;
    let (h1z, h2z) = hankel_pair(order, z)?;
    let jy = bessel_j(order, y)?;
    let full = WatsonSide {
        contour: full_r.value / (2.0 * PI * i),
        product: Some(jz * jy),
        quadrature_error: full_r.error_estimate / (2.0 * PI),
    };
    let h1 = WatsonSide {
        contour: up.value / (PI * i),
        product: Some(h1z * jy),
        quadrature_error: up.error_estimate / PI,
    };
    let h2 = WatsonSide {
        contour: -down.value / (PI * i),
        product: Some(h2z * jy),
        quadrature_error: down.error_estimate / PI,
    };
    let recombined = WatsonSide {
        contour: h1.contour + h2.contour,
        product: Some(2.0 * jz * jy),
        quadrature_error: h1.quadrature_error + h2.quadrature_error,
    };
    Ok(WatsonReport {
        order,
        z,
        y,
        full,
        hankel1: h1,
        hankel2: h2,
        recombined,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PvRow {
    pub k: f64,
    pub value: Complex64,
    /// `sign(k) πi H(0)`; none at `k = 0`.
    pub target: Option<Complex64>,
    /// `|value − target| / (π |H(0)|)`.
    pub deviation: Option<f64>,
    pub quadrature_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PvReport {
    pub h: BumpFunction,
    pub h0: f64,
    pub rows: Vec<PvRow>,
}

impl PvReport {
    /// Deviation non-increasing in `|k|` separately for each sign.
    pub fn deviation_decreasing(&self) -> bool {
        [1.0, -1.0].iter().all(|&sign| {
            let mut side: Vec<(f64, f64)> = self
                .rows
                .iter()
                .filter(|r| r.k * sign > 0.0)
                .filter_map(|r| r.deviation.map(|d| (r.k.abs(), d)))
                .collect();
            side.sort_by(|a, b| a.0.total_cmp(&b.0));
            side.windows(2).all(|w| w[1].1 <= w[0].1)
        })
    }
}

/// `PV ∫ e^{ikx} H(x)/x dx` for each `k`, against `± πi H(0)`.
pub fn verify_pv(h: &BumpFunction, k_values: &[f64]) -> Result<PvReport> {
    let h0 = h.eval(0.0);
    if h0 == 0.0 {
        return Err(ExperimentError::InvalidInput {
            field: "h",
            reason: format!("H(0) must be nonzero; support is [{}, {}]", h.a(), h.b()),
        });
    }
    let halfwidth = h.a().abs().max(h.b().abs());
    let spec = QuadSpec::default().with_tolerances(1e-11, 1e-10);
    let rows = k_values
        .iter()
        .map(|&k| {
            let r = principal_value(
                |x| Complex64::new(0.0, k * x).exp() * (h.eval(x) / x),
                0.0,
                halfwidth,
                spec,
            );
            let target = (k != 0.0).then(|| Complex64::new(0.0, PI * h0 * k.signum()));
            PvRow {
                k,
                value: r.value,
                target,
                deviation: target.map(|t| (r.value - t).norm() / (PI * h0.abs())),
                quadrature_error: r.error_estimate,
            }
        })
        .collect();
    Ok(PvReport { h: *h, h0, rows })
}
