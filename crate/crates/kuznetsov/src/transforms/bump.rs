use serde::Serialize;

use super::{Result, TransformError};
use crate::quadrature::{integrate_1d_real, QuadSpec};

/// Shape of a bump on its support `(a, b)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum BumpProfile {
    /// `exp(−1/((x − a)(b − x)))`.
    Classic,
    /// `exp(−s/(1 − v²))` in the logarithmic coordinate
    /// `v = (2 ln x − ln a − ln b)/(ln b − ln a)`.
    LogSmooth { sharpness: f64 },
}

/// Smooth function supported on `[a, b] ⊂ (0, ∞)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BumpFunction {
    a: f64,
    b: f64,
    profile: BumpProfile,
    amplitude: f64,
}

impl BumpFunction {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        Self::with_profile(a, b, BumpProfile::Classic, 1.0)
    }

    pub fn with_profile(a: f64, b: f64, profile: BumpProfile, amplitude: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && b > a) {
            return Err(TransformError::InvalidSupport { a, b });
        }
        if matches!(profile, BumpProfile::LogSmooth { .. }) && a <= 0.0 {
            return Err(TransformError::InvalidSupport { a, b });
        }
        Ok(Self {
            a,
            b,
            profile,
            amplitude,
        })
    }

    /// The weight `V` on `[1, 6]` used throughout the checks.
    pub fn standard_v() -> Self {
        Self::new(1.0, 6.0).expect("valid support")
    }

    /// The weight `W` on `[2, 8]`.
    pub fn standard_w() -> Self {
        Self::new(2.0, 8.0).expect("valid support")
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn profile(&self) -> BumpProfile {
        self.profile
    }

    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            amplitude: self.amplitude * factor,
            ..*self
        }
    }

    pub fn with_amplitude(&self, amplitude: f64) -> Self {
        Self { amplitude, ..*self }
    }

    pub fn is_zero(&self) -> bool {
        self.amplitude == 0.0
    }

    pub fn eval(&self, x: f64) -> f64 {
        if x <= self.a || x >= self.b || self.amplitude == 0.0 {
            return 0.0;
        }
        let shape = match self.profile {
            BumpProfile::Classic => (-1.0 / ((x - self.a) * (self.b - x))).exp(),
            BumpProfile::LogSmooth { sharpness } => {
                let (la, lb) = (self.a.ln(), self.b.ln());
                let v = (2.0 * x.ln() - la - lb) / (lb - la);
                let d = 1.0 - v * v;
                if d <= 0.0 {
                    0.0
                } else {
                    (-sharpness / d).exp()
                }
            }
        };
        self.amplitude * shape
    }

    /// `∫ V(x) dx` to tight tolerance.
    pub fn integral(&self) -> Result<f64> {
        let r = integrate_1d_real(|x| self.eval(x), self.a, self.b, tight_spec()).require()?;
        Ok(r.re())
    }
}

pub(crate) fn tight_spec() -> QuadSpec {
    QuadSpec::default().with_tolerances(1e-14, 1e-12)
}

pub fn bump_eval(v: &BumpFunction, x: f64) -> f64 {
    v.eval(x)
}

/// Rescales `g` so that `∫ g = 1`.
pub fn normalize_weight(g: &BumpFunction) -> Result<BumpFunction> {
    let total = g.integral()?;
    if total == 0.0 || !total.is_finite() {
        return Err(TransformError::ZeroFunction);
    }
    Ok(g.scaled(1.0 / total))
}
