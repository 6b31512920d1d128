use num_complex::Complex64;
use num_integer::Integer;
use serde::Serialize;

use super::{
    divisors, euler_phi, factorize, moebius, ramanujan_closed, sigma1, ArithmeticError, Result,
};
use crate::compensated::ComplexNeumaierSum;
use crate::special_functions::zeta;

/// Truncated Dirichlet series against its closed form.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SeriesCheck {
    pub truncated: Complex64,
    pub closed: Complex64,
    /// Rigorous bound on the discarded tail, when one is available.
    pub tail_bound: Option<f64>,
}

impl SeriesCheck {
    pub fn discrepancy(&self) -> f64 {
        (self.truncated - self.closed).norm()
    }

    /// `|truncated − closed| ≤ tail_bound + 1e-12·|closed|`; the second
    /// term absorbs rounding in the closed form.
    pub fn within_tail_bound(&self) -> bool {
        self.tail_bound
            .is_some_and(|t| self.discrepancy() <= t + 1e-12 * self.closed.norm())
    }
}

pub type PhiDirichletCheck = SeriesCheck;

fn pow_neg(base: u64, s: Complex64) -> Complex64 {
    (-s * (base as f64).ln()).exp()
}

fn check_divides(d: u64, n: u64) -> Result<()> {
    if d == 0 || n == 0 || n % d != 0 {
        return Err(ArithmeticError::NotADivisor { d, n });
    }
    Ok(())
}

/// `Z(d, s) = Σ_{d'} φ(d'd)/(d'd)^{1+s}` over `d'` built from primes
/// `p | d` with `p ∤ n/d`, as the finite Euler product
/// `φ(d) d^{-1-s} Π (1 − p^{-s})^{-1}`.
pub fn z_factor(d: u64, n: u64, s: Complex64) -> Result<Complex64> {
    check_divides(d, n)?;
    if s.re <= 0.0 {
        return Err(ArithmeticError::DivergentParameter {
            re_s: s.re,
            bound: 0.0,
        });
    }
    let cofactor = n / d;
    let base = euler_phi(d) as f64 * pow_neg(d, s + 1.0);
    Ok(factorize(d)
        .into_iter()
        .filter(|&(p, _)| cofactor % p != 0)
        .fold(base, |acc, (p, _)| acc / (1.0 - pow_neg(p, s))))
}

/// `R(n, d) = Z(d, 1) Π_{p | n} (1 + 1/p)^{-1}`.
pub fn r_weight(n: u64, d: u64) -> Result<f64> {
    let z = z_factor(d, n, Complex64::new(1.0, 0.0))?.re;
    let damp: f64 = factorize(n)
        .into_iter()
        .map(|(p, _)| 1.0 / (1.0 + 1.0 / p as f64))
        .product();
    Ok(z * damp)
}

fn require_re_above_one(s: Complex64) -> Result<()> {
    if s.re <= 1.0 {
        return Err(ArithmeticError::DivergentParameter {
            re_s: s.re,
            bound: 1.0,
        });
    }
    Ok(())
}

fn zeta_c(s: Complex64) -> Complex64 {
    zeta(s).expect("Re(s) > 1 keeps ζ away from its pole")
}

/// `Σ_{c ≤ N} f_c(l − l')/c^{s+1}` against `ζ(s)/ζ(s+1)` (`l = l'`) or
/// `ζ(1+s)^{-1} Σ_{r | l−l'} r^{-s}`.
pub fn dirichlet_series_check(l: u64, lp: u64, s: Complex64, n_max: u64) -> Result<SeriesCheck> {
    require_re_above_one(s)?;
    let m = l as i64 - lp as i64;
    let mut acc = ComplexNeumaierSum::new();
    for c in 1..=n_max {
        let f = ramanujan_closed(c, m);
        if f != 0 {
            acc.add(f as f64 * pow_neg(c, s + 1.0));
        }
    }
    let sigma = s.re;
    let (closed, tail_bound) = if m == 0 {
        (
            zeta_c(s) / zeta_c(s + 1.0),
            (n_max as f64).powf(1.0 - sigma) / (sigma - 1.0),
        )
    } else {
        let div_sum = divisors(m.unsigned_abs())
            .into_iter()
            .map(|r| pow_neg(r, s))
            .fold(Complex64::new(0.0, 0.0), |a, b| a + b);
        (
            div_sum / zeta_c(s + 1.0),
            sigma1(m.unsigned_abs()) as f64 * (n_max as f64).powf(-sigma) / sigma,
        )
    };
    Ok(SeriesCheck {
        truncated: acc.value(),
        closed,
        tail_bound: Some(tail_bound),
    })
}

/// Series over `c1` coprime to `n/d` with coefficient `φ(d c1)` (`m = 0`)
/// or `f_{d c1}(m)`. For `m = 0` the closed form is
/// `Z(d,s) L(s,χ0)/L(s+1,χ0)`; for `m ≠ 0` it is
/// `Z(d,s) ζ(s+1)^{-1} Σ_{ℓ|n} μ²(ℓ) ℓ^{-1-s} Σ_{e|m} μ(e) e^{-1-s}` and no
/// agreement is asserted (`tail_bound` is `None`).
pub fn phi_dirichlet_check(
    n: u64,
    d: u64,
    m: i64,
    s: Complex64,
    n_max: u64,
) -> Result<PhiDirichletCheck> {
    check_divides(d, n)?;
    require_re_above_one(s)?;
    let cofactor = n / d;
    let mut acc = ComplexNeumaierSum::new();
    for c1 in (1..=n_max).filter(|c1| c1.gcd(&cofactor) == 1) {
        let q = d * c1;
        let coeff = if m == 0 {
            euler_phi(q) as i64
        } else {
            ramanujan_closed(q, m)
        };
        if coeff != 0 {
            acc.add(coeff as f64 * pow_neg(q, s + 1.0));
        }
    }
    let z = z_factor(d, n, s)?;
    let primes: Vec<u64> = factorize(n).into_iter().map(|(p, _)| p).collect();
    let sigma = s.re;
    if m == 0 {
        let euler = |w: Complex64| {
            primes
                .iter()
                .fold(zeta_c(w), |acc, &p| acc * (1.0 - pow_neg(p, w)))
        };
        let closed = z * euler(s) / euler(s + 1.0);
        let tail = (d as f64).powf(-sigma) * (n_max as f64).powf(1.0 - sigma) / (sigma - 1.0);
        Ok(SeriesCheck {
            truncated: acc.value(),
            closed,
            tail_bound: Some(tail),
        })
    } else {
        let sum_over = |k: u64| {
            divisors(k)
                .into_iter()
                .map(|e| moebius(e) as f64 * pow_neg(e, s + 1.0))
                .fold(Complex64::new(0.0, 0.0), |a, b| a + b)
        };
        let ell_sum = divisors(n)
            .into_iter()
            .map(|e| (moebius(e) * moebius(e)) as f64 * pow_neg(e, s + 1.0))
            .fold(Complex64::new(0.0, 0.0), |a, b| a + b);
        let closed = z * ell_sum * sum_over(m.unsigned_abs()) / zeta_c(s + 1.0);
        Ok(SeriesCheck {
            truncated: acc.value(),
            closed,
            tail_bound: None,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn z_examples() {
        for n in 1..20 {
            assert_eq!(z_factor(1, n, c(1.3)).unwrap(), c(1.0));
        }
        assert!((z_factor(2, 2, c(1.0)).unwrap().re - 0.5).abs() < 1e-15);
        // d = 2, n = 4: the only prime of d divides n/d, so d' = 1.
        assert!((z_factor(2, 4, c(1.0)).unwrap().re - 0.25).abs() < 1e-15);
        assert!(z_factor(2, 4, c(0.0)).is_err());
        assert_eq!(
            z_factor(3, 4, c(1.0)),
            Err(ArithmeticError::NotADivisor { d: 3, n: 4 })
        );
    }

    #[test]
    fn r_weight_examples() {
        assert!((r_weight(2, 1).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert!((r_weight(2, 2).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert!(r_weight(6, 4).is_err());
    }

    #[test]
    fn divergence_rejected() {
        assert!(dirichlet_series_check(1, 1, c(1.0), 10).is_err());
        assert!(phi_dirichlet_check(2, 1, 0, c(0.5), 10).is_err());
    }
}
