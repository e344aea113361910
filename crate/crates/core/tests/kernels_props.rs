//! Validation and recovery checks for the built-in kernel.

use proptest::prelude::*;
use voldens::kernels::{second_moment_finite_difference, validate_condition_w, KernelSpec};

#[test]
fn default_kernel_passes_all_condition_checks() {
    let spec = KernelSpec::default_kernel();
    let report = validate_condition_w(&spec);
    for (name, check) in report.items() {
        assert!(
            check.pass,
            "check '{name}' failed: {} (measured {})",
            check.detail, check.measured
        );
    }
    // int w recovered spatially to 1e-8
    assert!(
        (report.normalization.measured - 1.0).abs() <= 1e-8,
        "spatial int w = {:.12}",
        report.normalization.measured
    );
}

#[test]
fn edge_parameters_recovered_numerically_within_two_percent() {
    let spec = KernelSpec::default_kernel();
    // slope estimate of alpha from a shrinking t grid
    let ts = [1e-2, 1e-3, 1e-4];
    let vals: Vec<f64> = ts.iter().map(|&t| spec.phi_w(1.0 - t)).collect();
    let alpha_hat = (vals[0] / vals[1]).ln() / (ts[0] / ts[1]).ln();
    assert!(
        (alpha_hat - 3.0).abs() / 3.0 < 0.02,
        "alpha estimate {alpha_hat}"
    );
    // A from the exact exponent
    let mut last_err = f64::INFINITY;
    for (&t, &v) in ts.iter().zip(&vals) {
        let a_hat = v / t.powi(3);
        let err = (a_hat - 8.0).abs();
        assert!(err / 8.0 < 0.02, "A estimate {a_hat} at t = {t}");
        assert!(err < last_err, "convergence toward A is monotone");
        last_err = err;
    }
}

#[test]
fn second_moment_checks_out_by_finite_differences() {
    let spec = KernelSpec::default_kernel();
    let fd = second_moment_finite_difference(&spec);
    assert!((fd - 6.0).abs() < 1e-6, "fd second moment = {fd}");
    assert!((spec.second_moment() - 6.0).abs() < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn spatial_kernel_is_even(x in 0.0f64..200.0) {
        let spec = KernelSpec::default_kernel();
        let d = (spec.kernel_w(x) - spec.kernel_w(-x)).abs();
        prop_assert!(d < 1e-13, "asymmetry {d:.2e} at x = {x}");
    }

    #[test]
    fn phi_w_support_is_the_unit_interval(s in 1.0f64..50.0) {
        let spec = KernelSpec::default_kernel();
        prop_assert_eq!(spec.phi_w(s + 1e-12), 0.0);
        prop_assert_eq!(spec.phi_w(-s - 1e-12), 0.0);
    }
}
