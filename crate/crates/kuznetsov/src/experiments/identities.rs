use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use super::{ExperimentError, Result};
use crate::arithmetic::{
    bijection_r, dirichlet_series_check, divisors, enumerate_x, r_weight, SeriesCheck,
};
use crate::compensated::NeumaierSum;
use crate::quadrature::QuadSpec;
use crate::special_functions::{
    bessel_j, gamma_complex, hankel1, hankel2, ramanujan_zeta_identity, Order,
};
use crate::transforms::{
    convolution_kernel_transform, h_transform, pr5_check, BumpFunction, ConvolutionEvaluator,
    KernelWindow, SpectralPoint, TableSpec,
};

/// A numerical identity with a measurable error.
///
/// `measure` receives a relative perturbation applied to the identity's
/// reference constant; `0.0` is the unperturbed check.
pub trait IdentityCheck: Send + Sync {
    fn name(&self) -> &'static str;
    fn tolerance(&self) -> f64;
    fn measure(&self, perturbation: f64) -> Result<f64>;
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityRow {
    pub name: String,
    pub measured_error: Option<f64>,
    pub tolerance: f64,
    pub passed: bool,
    pub perturbation: f64,
    /// Set when the check could not be evaluated.
    pub failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentitySuiteReport {
    pub rows: Vec<IdentityRow>,
}

impl IdentitySuiteReport {
    pub fn all_passed(&self) -> bool {
        self.rows.iter().all(|r| r.passed)
    }
}

/// Ordered collection of identity checks.
pub struct IdentityRegistry {
    entries: Vec<Box<dyn IdentityCheck>>,
}

impl Default for IdentityRegistry {
    fn default() -> Self {
        let mut reg = Self::empty();
        reg.register(ResidueInverse);
        reg.register(RWeightSum);
        reg.register(DirichletClosedForm);
        reg.register(ZetaProduct);
        reg.register(GammaReflection);
        reg.register(HankelRecombination);
        reg.register(Pr5Equality);
        reg.register(ConvolutionTheorem);
        reg
    }
}

impl IdentityRegistry {
    pub fn empty() -> Self {
        Self {
            entries: Vec::new(),
        }
    }

    pub fn register(&mut self, check: impl IdentityCheck + 'static) {
        self.entries.push(Box::new(check));
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Keeps the entries whose name satisfies `keep`.
    pub fn retain(mut self, mut keep: impl FnMut(&str) -> bool) -> Self {
        self.entries.retain(|e| keep(e.name()));
        self
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.iter().map(|e| e.name()).collect()
    }
}

/// Runs every registered identity; `inject` perturbs the named entry's
/// reference constant by the given relative amount.
pub fn verify_identities_with(
    registry: &IdentityRegistry,
    inject: Option<(&str, f64)>,
) -> IdentitySuiteReport {
    let rows = registry
        .entries
        .iter()
        .map(|check| {
            let perturbation = match inject {
                Some((name, p)) if name == check.name() => p,
                _ => 0.0,
            };
            let tolerance = check.tolerance();
            match check.measure(perturbation) {
                Ok(err) => IdentityRow {
                    name: check.name().to_string(),
                    measured_error: Some(err),
                    tolerance,
                    passed: err <= tolerance,
                    perturbation,
                    failure: None,
                },
                Err(e) => IdentityRow {
                    name: check.name().to_string(),
                    measured_error: None,
                    tolerance,
                    passed: false,
                    perturbation,
                    failure: Some(e.to_string()),
                },
            }
        })
        .collect();
    IdentitySuiteReport { rows }
}

/// The default registry, unperturbed.
pub fn verify_identities_suite() -> IdentitySuiteReport {
    verify_identities_with(&IdentityRegistry::default(), None)
}

/// `|series − closed|` in units of the tail bound.
fn tail_ratio(check: SeriesCheck, perturbation: f64) -> f64 {
    let closed = check.closed * (1.0 + perturbation);
    let allowed = check.tail_bound.unwrap_or(0.0) + 1e-12 * closed.norm();
    (check.truncated - closed).norm() / allowed
}

/// `r1 r2 ≡ 1 (mod n)` over `c1, c2 ≤ 12`, `0 < |n| ≤ 24`.
struct ResidueInverse;

impl IdentityCheck for ResidueInverse {
    fn name(&self) -> &'static str {
        "residue-inverse"
    }

    fn tolerance(&self) -> f64 {
        0.0
    }

    fn measure(&self, perturbation: f64) -> Result<f64> {
        let unit = 1.0 + perturbation;
        let mut worst: f64 = 0.0;
        for c1 in 1..=12u64 {
            for c2 in 1..=12u64 {
                for n in (-24i64..=24).filter(|&n| n != 0) {
                    for cls in enumerate_x(c1, c2, n) {
                        let pair = bijection_r(&cls)?;
                        let m = n.unsigned_abs();
                        let prod = pair.r1.mul(pair.r2).value();
                        let expected = if m == 1 { 0.0 } else { unit };
                        worst = worst.max((prod as f64 - expected).abs());
                    }
                }
            }
        }
        Ok(worst)
    }
}

/// `Σ_{d|n} R(n, d) = 1` for `n ≤ 2000`.
struct RWeightSum;

impl IdentityCheck for RWeightSum {
    fn name(&self) -> &'static str {
        "r-weight-sum"
    }

    fn tolerance(&self) -> f64 {
        1e-12
    }

    fn measure(&self, perturbation: f64) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for n in 1..=2000u64 {
            let total = divisors(n)
                .into_iter()
                .map(|d| r_weight(n, d))
                .collect::<std::result::Result<NeumaierSum, _>>()?
                .value();
            worst = worst.max((total - (1.0 + perturbation)).abs());
        }
        Ok(worst)
    }
}

/// `Σ f_c(l − l′) c^{-1-s}` against its closed form, in tail-bound units.
struct DirichletClosedForm;

impl IdentityCheck for DirichletClosedForm {
    fn name(&self) -> &'static str {
        "dirichlet-closed-form"
    }

    fn tolerance(&self) -> f64 {
        1.0
    }

    fn measure(&self, perturbation: f64) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for (l, lp) in [(1, 1), (3, 1), (7, 2)] {
            for s in [1.5, 2.0, 3.0] {
                let check = dirichlet_series_check(l, lp, Complex64::new(s, 0.0), 20_000)?;
                worst = worst.max(tail_ratio(check, perturbation));
            }
        }
        Ok(worst)
    }
}

/// `Σ τ_iT τ_it n^{-s}` against `Π ζ(s ± iT ± it)/ζ(2s)`, in tail-bound
/// units.
struct ZetaProduct;

impl IdentityCheck for ZetaProduct {
    fn name(&self) -> &'static str {
        "zeta-product"
    }

    fn tolerance(&self) -> f64 {
        1.0
    }

    fn measure(&self, perturbation: f64) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for (tb, t, s) in [(0.0, 0.0, 2.0), (1.0, 0.5, 2.5)] {
            let check = ramanujan_zeta_identity(tb, t, Complex64::new(s, 0.0), 20_000)?;
            worst = worst.max(tail_ratio(check, perturbation));
        }
        Ok(worst)
    }
}

/// `Γ(z)Γ(1 − z) sin(πz) = π`, relative error.
struct GammaReflection;

impl IdentityCheck for GammaReflection {
    fn name(&self) -> &'static str {
        "gamma-reflection"
    }

    fn tolerance(&self) -> f64 {
        1e-12
    }

    fn measure(&self, perturbation: f64) -> Result<f64> {
        let points = [
            Complex64::new(0.3, 0.0),
            Complex64::new(0.5, 2.0),
            Complex64::new(-1.7, 0.4),
            Complex64::new(2.25, -3.0),
        ];
        let reference = PI * (1.0 + perturbation);
        let mut worst: f64 = 0.0;
        for z in points {
            let lhs = gamma_complex(z)? * gamma_complex(1.0 - z)? * (PI * z).sin();
            worst = worst.max((lhs - reference).norm() / PI);
        }
        Ok(worst)
    }
}

/// `H⁽¹⁾_ν + H⁽²⁾_ν = 2 J_ν` at `ν = i`, relative error.
struct HankelRecombination;

impl IdentityCheck for HankelRecombination {
    fn name(&self) -> &'static str {
        "hankel-recombination"
    }

    fn tolerance(&self) -> f64 {
        1e-9
    }

    fn measure(&self, perturbation: f64) -> Result<f64> {
        let order = Order::Imaginary(0.5);
        let mut worst: f64 = 0.0;
        for x in [0.5, 3.0, 10.0, 25.0] {
            let j = bessel_j(order, x)?;
            let sum = hankel1(order, x)? + hankel2(order, x)?;
            worst = worst.max((sum - 2.0 * (1.0 + perturbation) * j).norm() / (2.0 * j.norm()));
        }
        Ok(worst)
    }
}

/// `∫ V W dx/x` against its spectral expansion at `T = 30`, `K = 60`.
struct Pr5Equality;

impl IdentityCheck for Pr5Equality {
    fn name(&self) -> &'static str {
        "pr5-equality"
    }

    fn tolerance(&self) -> f64 {
        1e-3
    }

    fn measure(&self, perturbation: f64) -> Result<f64> {
        let spec = TableSpec::default();
        let check = pr5_check(
            &BumpFunction::standard_v(),
            &BumpFunction::standard_w(),
            spec.t_max,
            spec.k_max,
        )?;
        let lhs = check.lhs * (1.0 + perturbation);
        Ok((check.rhs - lhs).abs() / lhs.abs())
    }
}

/// `h(V*W, 4) = 2π h(V, 4) h(W, 4)` from loosely
/// converged `G` samples on `[0.05, 40]` and the exact tail.
struct ConvolutionTheorem;

impl ConvolutionTheorem {
    const K: u32 = 4;

    fn window() -> KernelWindow {
        KernelWindow {
            w_max: 40.0,
            tail_tol: 1e-6,
            ..KernelWindow::default()
        }
    }
}

impl IdentityCheck for ConvolutionTheorem {
    fn name(&self) -> &'static str {
        "convolution-theorem"
    }

    fn tolerance(&self) -> f64 {
        1e-3
    }

    fn measure(&self, perturbation: f64) -> Result<f64> {
        let (v, w) = (BumpFunction::standard_v(), BumpFunction::standard_w());
        let spec = QuadSpec::default_2d().with_tolerances(1e-8, 1e-8);
        let ev = ConvolutionEvaluator::with_specs(v, w, spec, TableSpec::default());
        let point = SpectralPoint::Even(Self::K);
        let g = convolution_kernel_transform(&ev, &[point], Self::window())?
            .pop()
            .ok_or(ExperimentError::InvalidInput {
                field: "convolution-theorem",
                reason: "no transform returned".into(),
            })?;
        let want =
            2.0 * PI * (1.0 + perturbation) * h_transform(&v, point)? * h_transform(&w, point)?;
        Ok((g.value - want).abs() / want.abs())
    }
}
