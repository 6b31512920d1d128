use num_complex::Complex64;

use super::{Result, SpecialError};
use crate::compensated::ComplexNeumaierSum;

/// `B_{2k}` for `k = 1..=15`.
const BERNOULLI_EVEN: [f64; 15] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174_611.0 / 330.0,
    854_513.0 / 138.0,
    -236_364_091.0 / 2730.0,
    8_553_103.0 / 6.0,
    -23_749_461_029.0 / 870.0,
    8_615_841_276_005.0 / 14322.0,
];

/// Truncation parameters for Euler–Maclaurin summation.
#[derive(Debug, Clone, Copy)]
pub struct ZetaTruncation {
    /// Terms summed directly.
    pub terms: usize,
    /// Bernoulli correction terms, at most 15.
    pub corrections: usize,
}

impl ZetaTruncation {
    pub fn for_argument(s: Complex64) -> Self {
        Self {
            terms: 20 + (2.0 * s.im.abs()).ceil() as usize,
            corrections: 15,
        }
    }
}

pub fn zeta(s: Complex64) -> Result<Complex64> {
    zeta_with(s, ZetaTruncation::for_argument(s))
}

/// `ζ(s) = Σ_{n<N} n^{-s} + N^{1-s}/(s-1) + N^{-s}/2
///        + Σ_k B_{2k}/(2k)! s(s+1)…(s+2k-2) N^{-s-2k+1}`.
pub fn zeta_with(s: Complex64, trunc: ZetaTruncation) -> Result<Complex64> {
    if s == Complex64::new(1.0, 0.0) {
        return Err(SpecialError::PoleAtOne);
    }
    let n = trunc.terms.max(2);
    let mut acc = ComplexNeumaierSum::new();
    for k in (1..n).rev() {
        acc.add((-s * (k as f64).ln()).exp());
    }
    let nf = n as f64;
    let n_pow = (-s * nf.ln()).exp();
    acc.add(n_pow * nf / (s - 1.0));
    acc.add(0.5 * n_pow);
    // rising = s(s+1)…(s+2k-2) / (2k)!, power = N^{-s-2k+1}
    let mut rising = s / 2.0;
    let mut power = n_pow / nf;
    for (k, b) in BERNOULLI_EVEN.iter().take(trunc.corrections).enumerate() {
        if k > 0 {
            let j = 2.0 * k as f64;
            rising = rising * (s + j - 1.0) * (s + j) / ((j + 1.0) * (j + 2.0));
            power /= nf * nf;
        }
        acc.add(*b * rising * power);
    }
    Ok(acc.value())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn classical_values() {
        let z2 = zeta(Complex64::new(2.0, 0.0)).unwrap();
        assert!((z2.re - PI * PI / 6.0).abs() < 1e-15);
        let z4 = zeta(Complex64::new(4.0, 0.0)).unwrap();
        assert!((z4.re - PI.powi(4) / 90.0).abs() < 1e-15);
    }

    #[test]
    fn pole() {
        assert_eq!(zeta(Complex64::new(1.0, 0.0)), Err(SpecialError::PoleAtOne));
    }
}
