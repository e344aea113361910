//! Deconvolution kernel and estimator properties: golden values, the
//! analytic bounds on `v_h`, and the equivalence of the two estimator
//! forms.

use proptest::prelude::*;
use voldens::deconv::{
    estimate_direct, estimate_ecf, gamma0, integrate_v, uniform_grid, v_l2_norm_parseval,
    v_l2_norm_spatial, DeconvKernel,
};
use voldens::experiments::{exact_convolution_sample, TruthSpec};
use voldens::kernels::KernelSpec;
use voldens::simmodel::ObservationSeries;

/// Recorded from a 2^20-interval Simpson sweep of the defining integral.
const V1_AT_ZERO: f64 = 0.175253104536118;

fn kernel(h: f64) -> DeconvKernel {
    DeconvKernel::new(KernelSpec::default_kernel(), h).unwrap()
}

fn gaussian_data(n: usize, seed: u64) -> ObservationSeries {
    exact_convolution_sample(&TruthSpec::Gaussian { mean: 0.0, sd: 1.0 }, n, seed)
}

#[test]
fn v1_at_zero_matches_golden_quadrature_value() {
    let k = kernel(1.0);
    assert!(
        (k.eval(0.0) - V1_AT_ZERO).abs() < 1e-9,
        "v_1(0) = {:.15}",
        k.eval(0.0)
    );
}

#[test]
fn v_h_is_real_but_not_even() {
    // The noise characteristic function has a phase, so v_h has no
    // symmetry in x; the two sides differ at the first decimal here.
    let k = kernel(1.0);
    assert!((k.eval(1.0) - 0.182290951).abs() < 1e-6);
    assert!((k.eval(-1.0) - 0.144253261).abs() < 1e-6);
    assert!((k.eval(1.0) - k.eval(-1.0)).abs() > 0.03);
}

#[test]
fn v1_integrates_to_one() {
    let k = kernel(1.0);
    let total = integrate_v(&k, 400.0, 0.02);
    assert!((total - 1.0).abs() < 1e-6, "int v_1 = {total:.9}");
}

#[test]
fn v_h_bounded_by_gamma0_and_lipschitz() {
    let spec = KernelSpec::default_kernel();
    for &h in &[0.5, 0.35, 0.25] {
        let k = kernel(h);
        let g0 = gamma0(&spec, h).unwrap();
        for i in 0..100 {
            let x = -25.0 + 50.0 * i as f64 / 99.0;
            let v = k.eval(x);
            assert!(v.abs() <= g0, "|v_{h}({x})| = {} > gamma0 = {g0}", v.abs());
            for &u in &[1e-3, 0.1, 0.9] {
                let dv = (k.eval(x + u) - v).abs();
                assert!(
                    dv <= g0 * u * (1.0 + 1e-9),
                    "Lipschitz violated at h = {h}, x = {x}, u = {u}: {dv} > {}",
                    g0 * u
                );
            }
        }
    }
}

#[test]
fn l2_norm_parseval_matches_spatial_quadrature() {
    for &h in &[0.5, 0.35, 0.25] {
        let k = kernel(h);
        let p = v_l2_norm_parseval(&k);
        let s = v_l2_norm_spatial(&k, 60.0, 0.01);
        let rel = ((p - s) / p).abs();
        assert!(
            rel < 1e-6,
            "h = {h}: Parseval {p} vs spatial {s} ({rel:.2e})"
        );
    }
}

#[test]
fn estimator_forms_agree_at_reference_scale() {
    let data = gaussian_data(1000, 7);
    let grid = uniform_grid(-4.0, 4.0, 41).unwrap();
    for &h in &[0.5, 0.8, 1.2] {
        let k = kernel(h);
        let d = estimate_direct(&data, &k, &grid).unwrap();
        let e = estimate_ecf(&data, &k, &grid).unwrap();
        let sup = d
            .values
            .iter()
            .zip(&e.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        assert!(sup <= 1e-6, "h = {h}: sup difference {sup:.3e}");
    }
}

#[test]
fn estimates_are_translation_equivariant() {
    let data = gaussian_data(500, 3);
    let grid = uniform_grid(-3.0, 3.0, 31).unwrap();
    let k = kernel(0.8);
    for &c in &[0.7, -1.3] {
        let shifted = ObservationSeries::from_transformed(
            data.transformed.iter().map(|y| y + c).collect(),
            0.0,
        );
        let shifted_grid: Vec<f64> = grid.iter().map(|x| x + c).collect();
        for est in [estimate_direct, estimate_ecf] {
            let base = est(&data, &k, &grid).unwrap();
            let moved = est(&shifted, &k, &shifted_grid).unwrap();
            let sup = base
                .values
                .iter()
                .zip(&moved.values)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0f64, f64::max);
            assert!(sup <= 1e-10, "shift {c}: sup difference {sup:.3e}");
        }
    }
}

#[test]
fn extreme_outliers_only_cost_quadrature_nodes() {
    // A near-zero increment puts log(X^2) far in the left tail; both
    // estimator forms must still agree, just with more nodes.
    let mut ys = gaussian_data(120, 9).transformed;
    ys.push(-600.0);
    ys.push(42.0);
    let data = ObservationSeries::from_transformed(ys, 0.0);
    let grid = uniform_grid(-3.0, 3.0, 7).unwrap();
    let k = kernel(0.9);
    let d = estimate_direct(&data, &k, &grid).unwrap();
    let e = estimate_ecf(&data, &k, &grid).unwrap();
    for (a, b) in d.values.iter().zip(&e.values) {
        assert!(a.is_finite() && (a - b).abs() <= 1e-6, "{a} vs {b}");
    }
}

#[test]
fn estimate_mass_stays_near_one_on_a_wide_grid() {
    // The estimator is not a density by construction; this is a sanity
    // band on its total mass for well-specified synthetic input.
    let data = gaussian_data(10_000, 11);
    let grid = uniform_grid(-16.0, 9.0, 251).unwrap();
    let k = kernel(0.8);
    let est = estimate_ecf(&data, &k, &grid).unwrap();
    let dx = grid[1] - grid[0];
    let mass: f64 = est
        .values
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let w = if i == 0 || i + 1 == grid.len() {
                0.5
            } else {
                1.0
            };
            w * v * dx
        })
        .sum();
    assert!((0.9..=1.1).contains(&mass), "estimate mass = {mass}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    /// The two estimator forms are the same integral exchanged with a
    /// finite sum; they must agree for any data set and bandwidth.
    #[test]
    fn estimator_forms_agree_on_random_inputs(
        seed in 0u64..1000,
        n in 1usize..200,
        h in 0.3f64..2.0,
    ) {
        let data = gaussian_data(n, seed);
        let grid = uniform_grid(-3.0, 3.0, 11).unwrap();
        let k = kernel(h);
        let d = estimate_direct(&data, &k, &grid).unwrap();
        let e = estimate_ecf(&data, &k, &grid).unwrap();
        for (a, b) in d.values.iter().zip(&e.values) {
            prop_assert!((a - b).abs() <= 1e-6, "{a} vs {b} at h = {h}, n = {n}");
        }
    }
}
