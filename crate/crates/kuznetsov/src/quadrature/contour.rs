use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use super::{integrate_1d, integrate_semi_infinite, QuadResult, QuadSpec};

/// A point `r e^{iθ}` with its argument tracked continuously along a path,
/// so integrands with branch cuts can be continued across them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarPoint {
    pub r: f64,
    pub theta: f64,
}

impl PolarPoint {
    pub fn z(&self) -> Complex64 {
        Complex64::from_polar(self.r, self.theta)
    }
}

/// Integration paths used by the contour checks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Contour {
    /// `t = iu`, `u` from `−cutoff` to `cutoff`, with a semicircular
    /// indentation of radius `indent` around 0 on the right (none if 0).
    ImaginaryAxis { cutoff: f64, indent: f64 },
    /// From `∞·e^{−iπ}` along the lower side of the negative axis to
    /// `radius·e^{−iπ}`, counter-clockwise round the circle to
    /// `radius·e^{iπ}`, back out to `∞·e^{iπ}`.
    HankelLoop { radius: f64 },
    /// From 0 along the positive axis to `radius`, along the arc to
    /// `radius·e^{±iπ}` (upper when `upper`), then out to `∞·e^{±iπ}`.
    /// The first leg uses `t = s²` to absorb `t^{-1/2}` endpoint behaviour.
    RealArcRay { radius: f64, upper: bool },
}

/// `∫_C g(t) dt`; `g` receives `t` in polar form.
pub fn contour_integral(
    mut g: impl FnMut(PolarPoint) -> Complex64,
    contour: &Contour,
    spec: QuadSpec,
) -> QuadResult {
    let i = Complex64::i();
    let piece = QuadSpec {
        abs_tol: spec.abs_tol / 3.0,
        ..spec
    };
    match *contour {
        Contour::ImaginaryAxis { cutoff, indent } => {
            let mut along = |u: f64| {
                let p = PolarPoint {
                    r: u.abs(),
                    theta: FRAC_PI_2.copysign(u),
                };
                g(p) * i
            };
            if indent > 0.0 {
                let lower = integrate_1d(&mut along, -cutoff, -indent, piece);
                let upper = integrate_1d(&mut along, indent, cutoff, piece);
                let arc = integrate_1d(
                    |th| {
                        let p = PolarPoint {
                            r: indent,
                            theta: th,
                        };
                        g(p) * i * p.z()
                    },
                    -FRAC_PI_2,
                    FRAC_PI_2,
                    piece,
                );
                lower.combine(arc).combine(upper)
            } else {
                integrate_1d(&mut along, -cutoff, cutoff, spec)
            }
        }
        Contour::HankelLoop { radius } => {
            let lower =
                integrate_semi_infinite(|s| g(PolarPoint { r: s, theta: -PI }), radius, piece);
            let circle = integrate_1d(
                |th| {
                    let p = PolarPoint {
                        r: radius,
                        theta: th,
                    };
                    g(p) * i * p.z()
                },
                -PI,
                PI,
                piece,
            );
            let upper =
                integrate_semi_infinite(|s| g(PolarPoint { r: s, theta: PI }), radius, piece);
            lower
                .combine(circle)
                .combine(upper.scale(Complex64::new(-1.0, 0.0)))
        }
        Contour::RealArcRay { radius, upper } => {
            let sign = if upper { 1.0 } else { -1.0 };
            let real = integrate_1d(
                |s| {
                    g(PolarPoint {
                        r: s * s,
                        theta: 0.0,
                    }) * (2.0 * s)
                },
                0.0,
                radius.sqrt(),
                piece,
            );
            let arc = integrate_1d(
                |u| {
                    let p = PolarPoint {
                        r: radius,
                        theta: sign * u,
                    };
                    g(p) * i * sign * p.z()
                },
                0.0,
                PI,
                piece,
            );
            let ray = integrate_semi_infinite(
                |s| {
                    g(PolarPoint {
                        r: s,
                        theta: sign * PI,
                    })
                },
                radius,
                piece,
            );
            real.combine(arc)
                .combine(ray.scale(Complex64::new(-1.0, 0.0)))
        }
    }
}

/// `∫_{−i·cutoff}^{i·cutoff} f(t) dt` along the imaginary axis.
pub fn contour_imag_axis(
    mut f: impl FnMut(Complex64) -> Complex64,
    cutoff: f64,
    spec: QuadSpec,
) -> QuadResult {
    contour_integral(
        |p| f(p.z()),
        &Contour::ImaginaryAxis {
            cutoff,
            indent: 0.0,
        },
        spec,
    )
}
