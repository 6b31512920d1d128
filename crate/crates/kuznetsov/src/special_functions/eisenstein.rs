use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use super::{gamma_complex, zeta, Result, SpecialError};
use crate::arithmetic::{divisors, SeriesCheck};
use crate::compensated::{ComplexNeumaierSum, NeumaierSum};

/// `τ_it(n) = Σ_{ab=n} (a/b)^{it}`, real by the pairing `(a,b) ↔ (b,a)`.
pub fn tau_it(n: u64, t: f64) -> f64 {
    let ln_n = (n as f64).ln();
    divisors(n)
        .into_iter()
        .map(|a| (t * (2.0 * (a as f64).ln() - ln_n)).cos())
        .collect::<NeumaierSum>()
        .value()
}

/// Continuous-spectrum coefficient `η(l, 1/2 + it)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EtaCoefficient {
    pub l: u64,
    pub t: f64,
    pub value: Complex64,
}

/// `η(l, 1/2+it) = 2π^{1+it} cosh(πt)^{-1/2} τ_it(l) / (Γ(1/2+it) ζ(1+2it))`.
pub fn eta_coeff(l: u64, t: f64) -> Result<EtaCoefficient> {
    if t == 0.0 {
        return Err(SpecialError::UndefinedAtZero);
    }
    let pi_pow = (Complex64::new(1.0, t) * PI.ln()).exp();
    let gamma = gamma_complex(Complex64::new(0.5, t))?;
    let z = zeta(Complex64::new(1.0, 2.0 * t))?;
    let value = 2.0 * pi_pow * tau_it(l, t) / ((PI * t).cosh().sqrt() * gamma * z);
    Ok(EtaCoefficient { l, t, value })
}

/// `Σ_{n≤N} τ_iT(n) τ_it(n) n^{-s}` against `Π_{±,±} ζ(s ± iT ± it) / ζ(2s)`.
///
/// The tail bound uses `|τ_iT τ_it| ≤ d(n)²` and `Σ_{n≤x} d(n)² ≤ x(ln x + 2)³/π²`
/// (generous for `x ≥ 100`), integrated by parts.
pub fn ramanujan_zeta_identity(
    t_big: f64,
    t: f64,
    s: Complex64,
    n_max: u64,
) -> Result<SeriesCheck> {
    if s.re <= 1.0 {
        return Err(SpecialError::DivergentParameter {
            re_s: s.re,
            bound: 1.0,
        });
    }
    let mut acc = ComplexNeumaierSum::new();
    for n in 1..=n_max {
        let w = tau_it(n, t_big) * tau_it(n, t);
        acc.add(w * (-s * (n as f64).ln()).exp());
    }
    let mut closed = Complex64::new(1.0, 0.0);
    for a in [t_big, -t_big] {
        for b in [t, -t] {
            closed *= zeta(s + Complex64::new(0.0, a + b))?;
        }
    }
    closed /= zeta(2.0 * s)?;
    let sigma = s.re;
    let nf = n_max as f64;
    let tail = 4.0 * (nf.ln() + 2.0).powi(3) * nf.powf(1.0 - sigma) / (PI * PI * (sigma - 1.0));
    Ok(SeriesCheck {
        truncated: acc.value(),
        closed,
        tail_bound: Some(tail),
    })
}
