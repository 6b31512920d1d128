use std::f64::consts::PI;

use kuznetsov::transforms::*;
use kuznetsov::Complex64;

// mpmath, 30 digits, classic bump on [1, 6].
const H_V_4: f64 = 0.293882716833135971123423537985;
const H_V_2: f64 = -0.318937166854378846944180703137;
const H_V_T1: f64 = -0.0917324213031237334509812946494;
const INT_V: f64 = 3.59155752766016711382246211229;
// ∫ V W dy/y for V on [1, 6], W on [2, 8].
const DIAG_VW: f64 = 0.65659104111412256757643332907;
// scipy nquad in (x, y) and in (ln x, ln y), agreeing to 1e-16.
const G_2: f64 = 0.2101014771565784;
const G_4PI: f64 = 0.2106867418836835;
const G_20: f64 = -0.48327250963654056;

fn v() -> BumpFunction {
    BumpFunction::standard_v()
}

fn log_bump() -> BumpFunction {
    BumpFunction::with_profile(1.0, 6.0, BumpProfile::LogSmooth { sharpness: 2.0 }, 1.0).unwrap()
}

#[test]
fn bump_examples() {
    let b = v().with_amplitude(3.0);
    assert_eq!(bump_eval(&b, 0.5), 0.0);
    assert_eq!(bump_eval(&b, 1.0), 0.0);
    assert_eq!(bump_eval(&b, 6.0), 0.0);
    assert!((bump_eval(&b, 3.5) - 3.0 * (-4.0f64 / 25.0).exp()).abs() < 1e-15);
    assert!(bump_eval(&b, 6.0 - 1e-3) < 1e-80);
    assert!(BumpFunction::new(2.0, 1.0).is_err());
}

#[test]
fn normalize_weight_examples() {
    let g = normalize_weight(&BumpFunction::new(0.5, 2.0).unwrap()).unwrap();
    assert!((g.integral().unwrap() - 1.0).abs() < 1e-10);
    let again = normalize_weight(&g).unwrap();
    assert!((again.amplitude() - g.amplitude()).abs() < 1e-12 * g.amplitude());
    let doubled = normalize_weight(&g.scaled(2.0)).unwrap();
    assert!((doubled.amplitude() - g.amplitude()).abs() < 1e-12 * g.amplitude());
    assert_eq!(
        normalize_weight(&v().with_amplitude(0.0)),
        Err(TransformError::ZeroFunction)
    );
}

#[test]
fn bump_integral_oracle() {
    assert!((v().integral().unwrap() - INT_V).abs() < 1e-13);
}

#[test]
fn holomorphic_transform_oracles() {
    let h4 = h_holomorphic(&v(), 4).unwrap();
    assert!((h4.re - H_V_4).abs() < 1e-13);
    assert!(h4.im.abs() < 1e-12);
    let h2 = h_holomorphic(&v(), 2).unwrap();
    assert!((h2.re - H_V_2).abs() < 1e-13);
    assert_eq!(
        h_holomorphic(&v().with_amplitude(0.0), 6).unwrap(),
        Complex64::new(0.0, 0.0)
    );
    assert_eq!(
        h_holomorphic(&v(), 3),
        Err(TransformError::InvalidWeight(3))
    );
    assert_eq!(
        h_holomorphic(&v(), 0),
        Err(TransformError::InvalidWeight(0))
    );
}

#[test]
fn maass_transform_oracle_and_evenness() {
    assert!((h_maass(&v(), 1.0).unwrap() - H_V_T1).abs() < 1e-12);
    for t in [0.0, 0.3, 1.7, 12.0] {
        assert_eq!(h_maass(&v(), t).unwrap(), h_maass(&v(), -t).unwrap());
    }
    assert_eq!(h_maass(&v().with_amplitude(0.0), 2.0).unwrap(), 0.0);
}

#[test]
fn transforms_are_linear() {
    let base = v();
    for c in [2.0, -0.5] {
        let scaled = base.scaled(c);
        for k in [2, 8] {
            let (a, b) = (
                h_holomorphic(&base, k).unwrap(),
                h_holomorphic(&scaled, k).unwrap(),
            );
            assert!((b - c * a).norm() < 1e-13);
        }
        for t in [0.4, 5.0] {
            let (a, b) = (h_maass(&base, t).unwrap(), h_maass(&scaled, t).unwrap());
            assert!((b - c * a).abs() < 1e-13);
        }
        let s = Complex64::new(0.5, 3.0);
        let m1 = mellin(|x| Complex64::new(base.eval(x), 0.0), 1.0, 6.0, s).unwrap();
        let m2 = mellin(|x| Complex64::new(scaled.eval(x), 0.0), 1.0, 6.0, s).unwrap();
        assert!((m2 - c * m1).norm() < 1e-13);
    }
}

#[test]
fn mellin_examples() {
    let f = |x: f64| Complex64::new(v().eval(x), 0.0);
    let m1 = mellin(f, 1.0, 6.0, Complex64::new(1.0, 0.0)).unwrap();
    assert!((m1.re - INT_V).abs() < 1e-12 && m1.im.abs() < 1e-14);
    let mags: Vec<f64> = [1.0, 5.0, 25.0]
        .iter()
        .map(|&t| mellin(f, 1.0, 6.0, Complex64::new(0.5, t)).unwrap().norm())
        .collect();
    assert!(mags[0] > mags[1] && mags[1] > mags[2], "{mags:?}");
    assert!(mellin(f, 0.0, 6.0, Complex64::new(1.0, 0.0)).is_err());
}

#[test]
fn diag_inner_examples() {
    let w = BumpFunction::standard_w();
    assert!((diag_inner(&v(), &w).unwrap() - DIAG_VW).abs() < 1e-13);
    let far = BumpFunction::new(7.0, 9.0).unwrap();
    assert_eq!(diag_inner(&v(), &far).unwrap(), 0.0);
    assert!(diag_inner(&v(), &v()).unwrap() > 0.0);
}

#[test]
fn direct_convolution_matches_oracle() {
    let ev = ConvolutionEvaluator::standard();
    for (z, oracle) in [(2.0, G_2), (4.0 * PI, G_4PI), (20.0, G_20)] {
        let r = convolve_direct(&ev, z).unwrap();
        assert!(r.value.im.abs() < 1e-14);
        let err = (r.value.re - oracle).abs();
        assert!(
            err <= r.error_estimate.max(1e-13),
            "z={z}: {err:e} vs {:e}",
            r.error_estimate
        );
        assert!(err < 1e-9);
    }
    assert_eq!(ev.cached_len(), 3);
    let fresh = ev.evaluate_direct(4.0 * PI).unwrap();
    assert_eq!(convolve_direct(&ev, 4.0 * PI).unwrap(), fresh);
    let zero = ConvolutionEvaluator::new(v().with_amplitude(0.0), BumpFunction::standard_w());
    assert_eq!(
        convolve_direct(&zero, 3.0).unwrap().value,
        Complex64::new(0.0, 0.0)
    );
}

#[test]
fn spectral_route_agrees_with_direct() {
    let ev = ConvolutionEvaluator::standard();
    for z in [2.0, 4.0 * PI, 20.0] {
        let d = convolve_direct(&ev, z).unwrap();
        let s = convolve_spectral(&ev, z, SpectralNormalization::Corrected).unwrap();
        let gap = (d.value.re - s.value).abs();
        assert!(
            gap <= d.error_estimate + s.error_estimate(),
            "z={z}: gap {gap:e}, budget {:e}",
            d.error_estimate + s.error_estimate()
        );
        let lit = convolve_spectral(&ev, z, SpectralNormalization::Literal).unwrap();
        assert!((lit.value - d.value.re).abs() > 100.0 * s.error_estimate());
    }
    let zero = ConvolutionEvaluator::new(v().with_amplitude(0.0), BumpFunction::standard_w());
    let s = convolve_spectral(&zero, 5.0, SpectralNormalization::Corrected).unwrap();
    assert_eq!(s.value, 0.0);
}

#[test]
fn holomorphic_terms_decay_past_argument() {
    let ev = ConvolutionEvaluator::standard();
    let table = ev.spectral_table().unwrap();
    let z = 4.0 * PI;
    let j = kuznetsov::special_functions::bessel_j_integer_table(80, z);
    let terms: Vec<f64> = table
        .k
        .iter()
        .zip(&table.m_k)
        .filter(|(&k, _)| k as f64 > z + 4.0)
        .map(|(&k, &m)| ((k as f64 - 1.0) * m * j[k as usize - 1]).abs())
        .collect();
    assert!(terms.windows(2).all(|w| w[1] < w[0]), "{terms:?}");
}

#[test]
fn sears_round_trip() {
    let f = log_bump();
    let table = TransformTable::build(&f, TableSpec::default()).unwrap();
    let mut sup = 0.0f64;
    let mut fmax = 0.0f64;
    for i in 0..20 {
        let x = 1.0 + 5.0 * (i as f64 + 0.5) / 20.0;
        let r = table.reconstruct(x, SearsConvention::Corrected).unwrap();
        sup = sup.max((r - f.eval(x)).abs());
        fmax = fmax.max(f.eval(x));
    }
    assert!(sup <= 1e-3 * fmax, "sup {sup:e}");
    for x in [0.5, 7.0, 9.0] {
        let r = table.reconstruct(x, SearsConvention::Corrected).unwrap();
        assert!(r.abs() < 1e-3 * fmax, "x={x}: {r}");
    }
    let mid = sears_reconstruct(&f, 6.0f64.sqrt(), 30.0, 60, SearsConvention::Corrected).unwrap();
    assert!((mid - f.eval(6.0f64.sqrt())).abs() < 1e-3);
}

#[test]
fn sears_truncation_converges() {
    let f = log_bump();
    let errs: Vec<f64> = [(7.5, 16), (15.0, 30), (30.0, 60)]
        .iter()
        .map(|&(t, k)| {
            let r = sears_reconstruct(&f, 2.0, t, k, SearsConvention::Corrected).unwrap();
            (r - f.eval(2.0)).abs()
        })
        .collect();
    assert!(errs[0] > errs[1] && errs[1] > errs[2], "{errs:?}");
}

#[test]
fn literal_sears_sign_misses() {
    let f = v();
    let x = 3.5;
    let lit = sears_reconstruct(&f, x, 30.0, 60, SearsConvention::Literal).unwrap();
    assert!((lit - f.eval(x)).abs() > 0.1);
}

#[test]
fn pr5_equality() {
    let p = pr5_check(&v(), &v(), 30.0, 60).unwrap();
    assert!(p.relative_error() < 1e-3, "{p:?}");
    assert!((p.rhs - p.rhs_half_line).abs() < 1e-12 * p.rhs.abs());
    let a = BumpFunction::new(1.0, 2.0).unwrap();
    let b = BumpFunction::new(3.0, 4.0).unwrap();
    let d = pr5_check(&a, &b, 30.0, 60).unwrap();
    assert_eq!(d.lhs, 0.0);
    assert!(d.rhs.abs() < 1e-3 * p.lhs, "{d:?}");
}

#[test]
fn convolution_theorem_constant_two_pi() {
    let ev = ConvolutionEvaluator::standard();
    let window = KernelWindow {
        w_max: 60.0,
        ..KernelWindow::default()
    };
    let points = [SpectralPoint::Even(4), SpectralPoint::Maass(1.0)];
    for r in convolution_kernel_transform(&ev, &points, window).unwrap() {
        let m = h_transform(ev.v(), r.point).unwrap() * h_transform(ev.w(), r.point).unwrap();
        let gap = (r.value - 2.0 * PI * m).abs();
        assert!(
            gap <= r.error_estimate() + 1e-9,
            "{:?}: gap {gap:e} vs {:e}",
            r.point,
            r.error_estimate()
        );
        assert!(gap <= 1e-3 * (2.0 * PI * m).abs());
    }
}
