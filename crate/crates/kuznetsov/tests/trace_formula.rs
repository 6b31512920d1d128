use std::f64::consts::PI;

use kuznetsov::arithmetic::{kloosterman_direct, KloostermanCache};
use kuznetsov::quadrature::QuadSpec;
use kuznetsov::trace_formula::*;
use kuznetsov::transforms::{
    convolve_spectral, h_holomorphic, h_maass, BumpFunction, ConvolutionEvaluator,
    SpectralNormalization, TableSpec,
};

// mpmath: (2/π) ∫₀^∞ e^{−t²} tanh(πt) t dt.
const DIAG_GAUSSIAN: f64 = 0.295509488209884198851300754988;

fn v() -> BumpFunction {
    BumpFunction::standard_v()
}

#[test]
fn contributing_moduli_for_unit_pair() {
    let spec = GeometricSideSpec::new(1, 1, v());
    let contributing: Vec<u64> = spec
        .c_range()
        .filter(|&c| v().eval(4.0 * PI / c as f64) != 0.0)
        .collect();
    assert_eq!(contributing, (3..=12).collect::<Vec<_>>());
}

#[test]
fn empty_range_gives_zero() {
    let far = BumpFunction::new(20.0, 30.0).unwrap();
    let cache = KloostermanCache::new();
    assert_eq!(
        geometric_side(&GeometricSideSpec::new(1, 1, far), &cache),
        0.0
    );
}

#[test]
fn geometric_side_is_linear_in_amplitude() {
    let cache = KloostermanCache::new();
    let base = geometric_side(&GeometricSideSpec::new(2, 3, v()), &cache);
    let scaled = geometric_side(&GeometricSideSpec::new(2, 3, v().scaled(-2.5)), &cache);
    assert!((scaled + 2.5 * base).abs() < 1e-14 * base.abs().max(1.0));
}

#[test]
fn declared_range_matches_brute_force() {
    let cache = KloostermanCache::new();
    for (m1, m2) in [(1, 1), (1, 2), (3, 5), (7, 7), (12, 30)] {
        let spec = GeometricSideSpec::new(m1, m2, v());
        let upper = *spec.c_range().end();
        let s = 4.0 * PI * ((m1 * m2) as f64).sqrt();
        let brute: f64 = (1..=10 * upper)
            .map(|c| {
                kloosterman_direct(m1 as i64, m2 as i64, c) * v().eval(s / c as f64) / c as f64
            })
            .sum();
        let fast = geometric_side(&spec, &cache);
        assert!(
            (brute - fast).abs() < 1e-12,
            "({m1},{m2}): {brute} vs {fast}"
        );
    }
}

#[test]
fn kuznetsov_diagonal() {
    let spec = QuadSpec::default().with_tolerances(1e-14, 1e-12);
    assert_eq!(kuznetsov_diag(|_| 0.0, spec).unwrap(), 0.0);
    let g = kuznetsov_diag(|t| (-t * t).exp(), spec).unwrap();
    assert!((g - DIAG_GAUSSIAN).abs() < 1e-12, "{g}");
}

#[test]
fn petersson_diagonal() {
    assert_eq!(petersson_diag(|_| 0.0, 40).unwrap(), 0.0);
    // Σ_{m ≥ 1} (2m − 1) 4^{−m} = 5/9.
    let g = petersson_diag(|k| 0.5f64.powi(k as i32), 200).unwrap();
    assert!((g - 5.0 / (9.0 * PI)).abs() < 1e-15);
    let g2 = petersson_diag(|k| 0.5f64.powi(k as i32), 400).unwrap();
    assert!((g - g2).abs() < 1e-15);
    assert!(matches!(
        petersson_diag(|k| 1.0 / (k as f64).powi(3), 60),
        Err(TraceError::TailNotNegligible { k_max: 60, .. })
    ));
}

#[test]
fn kernels_vanish_for_zero_and_are_even() {
    let table = TableSpec::default();
    assert_eq!(b_plus_kernel(|_| 0.0, 3.0, table).unwrap(), 0.0);
    assert_eq!(g_hat_kernel(|_| 0.0, 3.0, 60), 0.0);
    let h = |t: f64| (-t * t / 4.0).exp();
    let a = b_plus_kernel(h, 3.0, table).unwrap();
    let b = b_plus_kernel(|t| h(-t), 3.0, table).unwrap();
    assert_eq!(a, b);
}

#[test]
fn kernels_reassemble_literal_spectral_side() {
    let ev = ConvolutionEvaluator::standard();
    let (vv, ww) = (*ev.v(), *ev.w());
    let table = ev.table_spec();
    let m_t = |t: f64| h_maass(&vv, t).unwrap() * h_maass(&ww, t).unwrap();
    let m_k = |k: u32| (h_holomorphic(&vv, k).unwrap() * h_holomorphic(&ww, k).unwrap()).re;
    for z in [2.0, 4.0 * PI] {
        let b_plus = b_plus_kernel(m_t, z, table).unwrap();
        let g_hat = g_hat_kernel(m_k, z, table.k_max);
        let spectral = convolve_spectral(&ev, z, SpectralNormalization::Literal).unwrap();
        let assembled = 4.0 * PI * (b_plus / 4.0 + g_hat / 4.0);
        assert!((assembled - spectral.value).abs() < 1e-12, "z={z}");
    }
}
