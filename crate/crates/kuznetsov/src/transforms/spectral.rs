use num_complex::Complex64;
use serde::Serialize;

use super::bump::tight_spec;
use super::{BumpFunction, Result, TransformError};
use crate::quadrature::{integrate_1d, integrate_1d_real};
use crate::special_functions::{bessel_b, bessel_j, Order};

/// A point of the spectrum: an even weight `k` or a Maass parameter `t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum SpectralPoint {
    Even(u32),
    Maass(f64),
}

fn check_weight(k: u32) -> Result<()> {
    if k == 0 || k % 2 != 0 {
        return Err(TransformError::InvalidWeight(k));
    }
    Ok(())
}

/// `(−1)^{k/2} = i^k` for even `k`.
pub(crate) fn i_pow_even(k: u32) -> f64 {
    if (k / 2) % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// `h(V, k) = i^k ∫ V(x) J_{k−1}(x) dx/x`.
pub fn h_holomorphic(v: &BumpFunction, k: u32) -> Result<Complex64> {
    check_weight(k)?;
    if v.is_zero() {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let order = Order::Integer(k as i64 - 1);
    let mut failure = None;
    let r = integrate_1d_real(
        |x| {
            let vx = v.eval(x);
            if vx == 0.0 {
                return 0.0;
            }
            match bessel_j(order, x) {
                Ok(j) => vx * j.re / x,
                Err(e) => {
                    failure.get_or_insert(e);
                    0.0
                }
            }
        },
        v.a(),
        v.b(),
        tight_spec(),
    );
    if let Some(e) = failure {
        return Err(e.into());
    }
    let r = r.require()?;
    Ok(Complex64::new(i_pow_even(k) * r.re(), 0.0))
}

/// `h(V, t) = ∫ V(x) B_{2it}(x) dx/x`, even in `t`.
pub fn h_maass(v: &BumpFunction, t: f64) -> Result<f64> {
    if v.is_zero() {
        return Ok(0.0);
    }
    let t = t.abs();
    let mut failure = None;
    let r = integrate_1d_real(
        |x| {
            let vx = v.eval(x);
            if vx == 0.0 {
                return 0.0;
            }
            match bessel_b(t, x) {
                Ok(b) => vx * b / x,
                Err(e) => {
                    failure.get_or_insert(e);
                    0.0
                }
            }
        },
        v.a(),
        v.b(),
        tight_spec(),
    );
    if let Some(e) = failure {
        return Err(e.into());
    }
    Ok(r.require()?.re())
}

pub fn h_transform(v: &BumpFunction, point: SpectralPoint) -> Result<f64> {
    match point {
        SpectralPoint::Even(k) => h_holomorphic(v, k).map(|z| z.re),
        SpectralPoint::Maass(t) => h_maass(v, t),
    }
}

/// `F̃(s) = ∫ F(x) x^{s−1} dx` for `F` supported in `[a, b] ⊂ (0, ∞)`.
pub fn mellin(f: impl Fn(f64) -> Complex64, a: f64, b: f64, s: Complex64) -> Result<Complex64> {
    if !(a > 0.0 && b > a) {
        return Err(TransformError::InvalidSupport { a, b });
    }
    let r = integrate_1d(|x| f(x) * (s - 1.0).expf(x), a, b, tight_spec()).require()?;
    Ok(r.value)
}

/// `∫ V(y) W(y) dy/y` over the intersection of supports.
pub fn diag_inner(v: &BumpFunction, w: &BumpFunction) -> Result<f64> {
    let lo = v.a().max(w.a());
    let hi = v.b().min(w.b());
    if hi <= lo {
        return Ok(0.0);
    }
    let r = integrate_1d_real(|y| v.eval(y) * w.eval(y) / y, lo, hi, tight_spec()).require()?;
    Ok(r.re())
}
