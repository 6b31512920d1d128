use std::f64::consts::PI;

use kuznetsov::experiments::{
    fit_exponent, run_a0, run_limit, verify_identities_with, verify_pv, verify_watson, A0Setup,
    ExperimentError, IdentityRegistry, LimitSetup, RhsVariant, XLadder, ERROR_FLOOR,
};
use kuznetsov::special_functions::Order;
use kuznetsov::transforms::{normalize_weight, BumpFunction, BumpProfile};
use kuznetsov::Complex64;

// mpmath, 25 digits.
const J1_1: f64 = 0.440_050_585_744_933_55;
const J1_1_J1_2: f64 = 0.253_788_089_467_046_45;
const H1_2_J_1_NU_I: (f64, f64) = (3.408_949_081_299_217_5, 2.702_106_071_384_864_7);
const H2_2_J_1_NU_I: (f64, f64) = (0.069_717_222_608_369_338, -0.174_573_311_613_527_32);
const J_2_J_1_NU_I: (f64, f64) = (1.739_333_151_953_793_4, 1.263_766_379_885_668_7);

fn c((re, im): (f64, f64)) -> Complex64 {
    Complex64::new(re, im)
}

fn quick_setup(l: u64, lp: u64, xs: Vec<f64>) -> LimitSetup {
    LimitSetup::log_smooth(l, lp, XLadder::new(xs).unwrap(), 1.0).unwrap()
}

#[test]
fn ladder_validation() {
    assert!(XLadder::new(vec![500.0, 1000.0, 2000.0]).is_ok());
    assert!(XLadder::new(vec![]).unwrap().is_empty());
    for bad in [
        vec![50.0, 500.0],
        vec![500.0, 500.0],
        vec![1000.0, 500.0],
        vec![f64::NAN],
    ] {
        assert!(matches!(
            XLadder::new(bad),
            Err(ExperimentError::InvalidLadder(_))
        ));
    }
    assert_eq!(
        XLadder::standard().values(),
        &[500.0, 1000.0, 2000.0, 4000.0, 8000.0]
    );
}

#[test]
fn variant_constants() {
    let k = 6.0 / (PI * PI);
    assert_eq!(RhsVariant::A.combine(2.0, 3.0), 3.0);
    assert!((RhsVariant::B.combine(2.0, 3.0) - 5.0 * k).abs() < 1e-15);
    assert!((RhsVariant::C.combine(2.0, 3.0) - 3.0 * k).abs() < 1e-15);
}

#[test]
fn exponent_fit_recovers_power_law() {
    let xs = [100.0, 1000.0, 10_000.0];
    let ys: Vec<f64> = xs.iter().map(|x: &f64| 3.0 * x.powf(-0.75)).collect();
    assert!((fit_exponent(&xs, &ys).unwrap() + 0.75).abs() < 1e-12);
    assert!(fit_exponent(&xs[..1], &ys[..1]).is_none());
}

#[test]
fn limit_off_diagonal_report() {
    let setup = quick_setup(1, 2, vec![500.0, 1000.0, 4000.0]);
    let report = run_limit(&setup).unwrap();
    assert_eq!(report.rows.len(), 3);
    assert_eq!(report.summary.diagonal, 0.0);
    for row in &report.rows {
        // Without a diagonal term, B and C coincide.
        assert_eq!(row.rhs[1], row.rhs[2]);
        for (i, r) in row.rhs.iter().enumerate() {
            let want = (row.lhs - r).abs() / r.abs().max(ERROR_FLOOR);
            assert_eq!(row.rel_err[i], want);
        }
    }
    assert!(report.rows.windows(2).all(|w| w[0].x < w[1].x));
    assert!(report.summary.spot_checks.iter().all(|s| s.agrees()));
    assert!(report.summary.rhs_tail_bound < 1e-8);
    let last = report.rows.last().unwrap();
    assert!(last.rel_err[1] < 0.02, "{:?}", last);
    // LHS cost grows like X^{3/2}.
    let ratio = report.rows[2].evals as f64 / report.rows[1].evals as f64;
    assert!((6.0..10.0).contains(&ratio), "{ratio}");
}

#[test]
fn limit_diagonal_prefers_variant_b() {
    let setup = quick_setup(1, 1, vec![2000.0]);
    let report = run_limit(&setup).unwrap();
    assert_eq!(report.summary.best_variant, Some(RhsVariant::B));
    assert_eq!(report.summary.best_includes_diagonal, Some(true));
    let row = &report.rows[0];
    assert!(row.rel_err[1] < 5e-3);
    assert!(row.rel_err[0] > 0.5 && row.rel_err[2] > 0.5);
}

#[test]
fn limit_is_thread_count_invariant_and_symmetric() {
    let mut one = quick_setup(1, 2, vec![1000.0, 3000.0]);
    one.threads = 1;
    let mut four = one.clone();
    four.threads = 4;
    let a = run_limit(&one).unwrap();
    let b = run_limit(&four).unwrap();
    assert_eq!(a.metadata.threads, 1);
    assert_eq!(b.metadata.threads, 4);
    for (ra, rb) in a.rows.iter().zip(&b.rows) {
        assert_eq!(ra.lhs.to_bits(), rb.lhs.to_bits());
        assert_eq!(ra.rhs, rb.rhs);
        assert_eq!(ra.evals, rb.evals);
    }
    assert_eq!(a.summary, b.summary);

    let mut swapped = one.clone();
    std::mem::swap(&mut swapped.l, &mut swapped.lp);
    std::mem::swap(&mut swapped.v, &mut swapped.w);
    let s = run_limit(&swapped).unwrap();
    for (ra, rs) in a.rows.iter().zip(&s.rows) {
        assert_eq!(ra.lhs, rs.lhs);
    }
}

#[test]
fn limit_support_mismatch_gives_zero() {
    let mut setup = quick_setup(1, 1, vec![1000.0]);
    // No n/X with X = 1000 falls inside (1.0001, 1.0009).
    let narrow = BumpFunction::with_profile(
        1.0001,
        1.0009,
        BumpProfile::LogSmooth { sharpness: 1.0 },
        1.0,
    );
    setup.g = normalize_weight(&narrow.unwrap()).unwrap();
    let report = run_limit(&setup).unwrap();
    assert_eq!(report.rows[0].lhs, 0.0);
    assert_eq!(report.rows[0].evals, 0);
}

#[test]
fn limit_rejects_bad_input() {
    let mut setup = quick_setup(1, 1, vec![1000.0]);
    setup.g = BumpFunction::new(1.0, 2.0).unwrap();
    assert!(matches!(
        run_limit(&setup),
        Err(ExperimentError::InvalidInput { field: "g", .. })
    ));
    let mut setup = quick_setup(1, 1, vec![1000.0]);
    setup.l = 0;
    assert!(run_limit(&setup).is_err());
}

fn a0_setup(l: u64, lp: u64) -> A0Setup {
    A0Setup {
        l,
        lp,
        v: BumpFunction::standard_v(),
        w: BumpFunction::standard_w(),
        g: normalize_weight(&BumpFunction::new(1.0, 2.0).unwrap()).unwrap(),
        ladder: XLadder::new(vec![100.0, 1000.0, 10_000.0]).unwrap(),
        threads: 0,
    }
}

#[test]
fn a0_diagonal_decays() {
    let report = run_a0(&a0_setup(1, 1)).unwrap();
    let errs: Vec<f64> = report.rows.iter().map(|r| r.abs_err[0]).collect();
    assert!(errs.windows(2).all(|w| w[1] < w[0]), "{errs:?}");
    assert!(report.summary.strictly_decreasing);
    assert!(report.summary.fitted_exponent.unwrap() <= -0.5);
    let target = 6.0 / (PI * PI) * report.summary.diagonal;
    assert!((report.rows[0].rhs[0] - target).abs() < 1e-15);
}

#[test]
fn a0_off_diagonal_vanishes() {
    let report = run_a0(&a0_setup(1, 2)).unwrap();
    assert_eq!(report.rows[0].rhs[0], 0.0);
    assert!(report.rows.last().unwrap().lhs.abs() < 1e-3);
}

#[test]
fn watson_integer_order() {
    let r = verify_watson(Order::Integer(1), 1.0, 1.0).unwrap();
    assert!((r.full.product.unwrap().re - J1_1 * J1_1).abs() < 1e-14);
    assert!(r.full.abs_error().unwrap() < 1e-8);
    assert!(r.hankel1.abs_error().unwrap() < 1e-8);
    assert!(r.hankel2.abs_error().unwrap() < 1e-8);
    assert!(r.recombined.abs_error().unwrap() < 1e-8);

    let r12 = verify_watson(Order::Integer(1), 1.0, 2.0).unwrap();
    assert!((r12.full.contour.re - J1_1_J1_2).abs() < 1e-8);
    assert!(r12.recombined.abs_error().unwrap() < 1e-8);
}

#[test]
fn watson_symmetry() {
    let order = Order::Imaginary(0.5);
    let a = verify_watson(order, 1.0, 2.0).unwrap();
    let b = verify_watson(order, 2.0, 1.0).unwrap();
    assert!((a.full.contour - b.full.contour).norm() < 1e-12);
    assert!((a.full.contour - c(J_2_J_1_NU_I)).norm() < 1e-8);
}

#[test]
fn watson_half_contours_imaginary_order() {
    let r = verify_watson(Order::Imaginary(0.5), 2.0, 1.0).unwrap();
    assert!((r.hankel1.contour - c(H1_2_J_1_NU_I)).norm() < 1e-8);
    assert!((r.hankel2.contour - c(H2_2_J_1_NU_I)).norm() < 1e-8);
    assert!(r.hankel1.abs_error().unwrap() < 1e-8);
    // With the arguments swapped the half contours still give H(2)J(1),
    // not the H(1)J(2) the formula names.
    let s = verify_watson(Order::Imaginary(0.5), 1.0, 2.0).unwrap();
    assert!((s.hankel1.contour - c(H1_2_J_1_NU_I)).norm() < 1e-8);
    assert!(s.hankel1.abs_error().unwrap() > 0.1);
    assert!(s.recombined.abs_error().unwrap() < 1e-8);
}

#[test]
fn watson_rejects_nonpositive_arguments() {
    assert!(verify_watson(Order::Integer(1), 0.0, 1.0).is_err());
}

#[test]
fn pv_lemma() {
    let h = BumpFunction::new(-2.5, 2.5).unwrap();
    let report = verify_pv(&h, &[0.0, 14.0, -14.0]).unwrap();
    let zero = &report.rows[0];
    assert!(zero.target.is_none());
    assert!(zero.value.im.abs() < 1e-12);
    let (plus, minus) = (&report.rows[1], &report.rows[2]);
    assert!(plus.deviation.unwrap() <= 0.05);
    assert!(minus.deviation.unwrap() <= 0.05);
    assert!(plus.value.im > 0.0 && minus.value.im < 0.0);
    assert!((plus.value + minus.value).norm() < 1e-12);
}

#[test]
fn pv_needs_nonzero_center_value() {
    let h = BumpFunction::new(1.0, 6.0).unwrap();
    assert!(verify_pv(&h, &[1.0]).is_err());
}

fn cheap_registry() -> IdentityRegistry {
    IdentityRegistry::default().retain(|n| !matches!(n, "pr5-equality" | "convolution-theorem"))
}

#[test]
fn identity_registry_rows_and_passes() {
    let full = IdentityRegistry::default();
    assert_eq!(full.len(), 8);
    let reg = cheap_registry();
    let report = verify_identities_with(&reg, None);
    assert_eq!(report.rows.len(), reg.len());
    assert!(report.all_passed(), "{:#?}", report.rows);
}

#[test]
fn identity_failure_injection_flips_one_row() {
    let reg = cheap_registry();
    for name in reg.names() {
        let report = verify_identities_with(&reg, Some((name, 0.01)));
        for row in &report.rows {
            assert_eq!(row.passed, row.name != name, "{name}: {row:?}");
        }
    }
}

#[test]
fn log_smooth_setup_profiles() {
    let s = LimitSetup::log_smooth(1, 1, XLadder::standard(), 2.0).unwrap();
    assert_eq!(s.v.profile(), BumpProfile::LogSmooth { sharpness: 2.0 });
    assert!((s.g.integral().unwrap() - 1.0).abs() < 1e-12);
}
