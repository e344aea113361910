//! Experiment-harness properties: variant independence of the identity
//! experiment, Monte Carlo scaling, frozen bias-curve values, bound
//! diagnostics, and determinism of the pipeline.

use voldens::deconv::EstimatorVariant;
use voldens::experiments::*;
use voldens::kernels::KernelSpec;
use voldens::quad::simpson;

#[test]
fn identity_holds_for_both_estimator_variants() {
    for variant in [EstimatorVariant::Ecf, EstimatorVariant::Direct] {
        let cfg = IdentityConfig {
            n: 400,
            replicates: 120,
            grid: vec![-1.0, 0.0, 1.0],
            variant,
            ..IdentityConfig::default_gaussian(6021023)
        };
        let rep = exp_expectation_identity(&cfg).unwrap();
        assert!(
            rep.max_abs_z <= 3.0,
            "{variant}: max |z| = {}",
            rep.max_abs_z
        );
    }
}

#[test]
fn doubling_replicates_shrinks_standard_errors_like_sqrt_two() {
    let base = IdentityConfig {
        n: 500,
        replicates: 150,
        ..IdentityConfig::default_gaussian(99)
    };
    let doubled = IdentityConfig {
        replicates: 300,
        ..base.clone()
    };
    let se_of = |cfg: &IdentityConfig| {
        let rep = exp_expectation_identity(cfg).unwrap();
        rep.rows.iter().map(|r| r.se).sum::<f64>() / rep.rows.len() as f64
    };
    let ratio = se_of(&base) / se_of(&doubled);
    assert!(
        (1.2..=1.7).contains(&ratio),
        "SE ratio after doubling R: {ratio:.3}"
    );
}

#[test]
fn smoothed_truth_agrees_with_its_fourier_form() {
    // Independent route: for f = N(0,1) the smoothed density is
    // (1/pi) int_0^{1/h} phi_w(th) e^{-t^2/2} cos(tx) dt.
    let spec = KernelSpec::default_kernel();
    let truth = TruthSpec::Gaussian { mean: 0.0, sd: 1.0 };
    for &(h, x) in &[(0.6, 0.0), (0.3, 0.0), (0.2, 1.0), (0.4, -0.7)] {
        let spatial = smoothed_truth(&spec, &truth, h, x);
        let fourier = simpson(
            |t| spec.phi_w(t * h) * (-0.5 * t * t).exp() * (t * x).cos(),
            0.0,
            1.0 / h,
            1 << 14,
        ) / std::f64::consts::PI;
        assert!(
            (spatial - fourier).abs() < 1e-9,
            "h = {h}, x = {x}: spatial {spatial:.12} vs fourier {fourier:.12}"
        );
    }
}

#[test]
fn bias_curve_matches_frozen_quadrature_values() {
    // Frozen from the oversampled quadrature of the smoothing integral.
    // The ratio approaches 1 from below as h shrinks; at h = 0.3 it is
    // still 0.7704, and the h^2-normalized bias at the Gaussian
    // inflection point is 0.05188 at h = 0.2.
    let rep = exp_bias_expansion(&BiasConfig::default()).unwrap();
    let expect = [
        (0.6, 0.435973460),
        (0.4, 0.644090787),
        (0.3, 0.770407164),
        (0.2, 0.887999987),
    ];
    for ((h, want), row) in expect.iter().zip(&rep.rows) {
        assert_eq!(*h, row.h);
        assert!(
            (row.ratio - want).abs() < 1e-6,
            "h = {h}: ratio {:.9} vs frozen {want:.9}",
            row.ratio
        );
    }
    let devs: Vec<f64> = rep.rows.iter().map(|r| (r.ratio - 1.0).abs()).collect();
    assert!(
        devs.windows(2).all(|w| w[1] < w[0]),
        "not monotone: {devs:?}"
    );
    let infl = rep
        .inflection
        .iter()
        .find(|r| (r.h - 0.2).abs() < 1e-12)
        .unwrap();
    assert!(
        (infl.abs_bias_over_h2 - 0.051878511).abs() < 1e-6,
        "inflection |b|/h^2 = {:.9}",
        infl.abs_bias_over_h2
    );
}

#[test]
fn bound_diagnostics_stay_inside_their_bands() {
    let rep = exp_bound_diagnostics(&BoundsConfig::default()).unwrap();
    for check in rep.checks() {
        assert!(
            check.pass,
            "bounds check '{}': value {} bound {}",
            check.check, check.value, check.bound
        );
    }
    // gamma0 grows as h shrinks while the normalized sequence stays flat
    let g0: Vec<f64> = rep.rows.iter().map(|r| r.gamma0).collect();
    assert!(
        g0.windows(2).all(|w| w[1] > w[0]),
        "gamma0 not growing: {g0:?}"
    );
}

#[test]
fn tiny_pipeline_is_deterministic_and_well_formed() {
    let mut cfg = PipelineConfig::default_expou(12345).unwrap();
    cfg.n_schedule = vec![300, 600];
    cfg.replicates = 3;
    cfg.substeps = 20;
    cfg.grid_points = 21;
    let a = exp_full_pipeline(&cfg).unwrap();
    let b = exp_full_pipeline(&cfg).unwrap();
    assert_eq!(a.cells.len(), 2 * 21);
    assert_eq!(a.mise.len(), 2);
    for (ca, cb) in a.cells.iter().zip(&b.cells) {
        assert_eq!(ca.mean_fhat.to_bits(), cb.mean_fhat.to_bits());
        assert_eq!(ca.se.to_bits(), cb.se.to_bits());
    }
    assert!(a.mise.iter().all(|m| m.mise.is_finite() && m.se > 0.0));
    assert!(a.cells.iter().all(|c| c.se > 0.0));
}

#[test]
fn summary_csv_is_machine_readable() {
    let rep = exp_bias_expansion(&BiasConfig::default()).unwrap();
    let text = summary_csv("0.1.0-test", "seed = 1", &rep.checks());
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with('#'));
    assert!(lines.next().unwrap().starts_with('#'));
    assert_eq!(lines.next().unwrap(), "suite,check,value,bound,pass");
    for line in lines {
        assert_eq!(line.split(',').count(), 5, "bad row: {line}");
    }
}
