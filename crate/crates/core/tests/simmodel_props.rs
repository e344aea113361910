//! Distributional checks on the simulator: invariant-density oracles
//! against closed forms, stationarity along the path, discretization
//! robustness, and the noise-median identity for constant volatility.

use std::collections::BTreeMap;
use std::sync::Arc;

use voldens::quad::adaptive_simpson;
use voldens::rng::norm_quantile;
use voldens::simmodel::{observe, simulate_path, ModelSpec, VolState};

fn expou() -> ModelSpec {
    ModelSpec::by_name("expou", &BTreeMap::new()).unwrap()
}

fn cir() -> ModelSpec {
    ModelSpec::by_name("cir", &BTreeMap::new()).unwrap()
}

fn constant_sigma(sigma: f64) -> ModelSpec {
    ModelSpec::with_fixed_init(
        "const",
        VolState::Sigma2,
        (0.0, f64::INFINITY),
        Arc::new(|_| 0.0),
        Arc::new(|_| 0.0),
        Arc::new(|_| 0.0),
        sigma * sigma,
    )
}

fn two_sample_ks(a: &[f64], b: &[f64]) -> f64 {
    let mut xa = a.to_vec();
    let mut xb = b.to_vec();
    xa.sort_by(|p, q| p.partial_cmp(q).unwrap());
    xb.sort_by(|p, q| p.partial_cmp(q).unwrap());
    let (mut i, mut j) = (0usize, 0usize);
    let mut d: f64 = 0.0;
    while i < xa.len() && j < xb.len() {
        if xa[i] <= xb[j] {
            i += 1;
        } else {
            j += 1;
        }
        let fa = i as f64 / xa.len() as f64;
        let fb = j as f64 / xb.len() as f64;
        d = d.max((fa - fb).abs());
    }
    d
}

#[test]
fn invariant_oracle_matches_gaussian_closed_form() {
    // expou defaults: invariant law of log sigma^2 is N(0, 1); the central
    // 99% of mass sits inside +-2.576.
    let m = expou();
    let q = norm_quantile(0.995);
    let mut worst = 0.0f64;
    for i in 0..=100 {
        let x = -q + 2.0 * q * i as f64 / 100.0;
        let got = m.invariant_density(x).unwrap();
        let want = (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt();
        worst = worst.max((got - want).abs());
    }
    assert!(worst < 1e-6, "sup |oracle - Gaussian| = {worst:.3e}");
}

#[test]
fn invariant_oracle_matches_gamma_closed_form() {
    // cir defaults: Gamma(shape 4, scale 1/4); [0.17, 2.75] covers the
    // central 99% of its mass.
    let m = cir();
    let mut worst = 0.0f64;
    for i in 0..=100 {
        let x = 0.17 + (2.75 - 0.17) * i as f64 / 100.0;
        let got = m.invariant_density(x).unwrap();
        let want = x.powi(3) * (-4.0 * x).exp() * 256.0 / 6.0;
        worst = worst.max((got - want).abs());
    }
    assert!(worst < 1e-6, "sup |oracle - Gamma| = {worst:.3e}");
}

#[test]
fn stationary_initialization_follows_the_invariant_law() {
    // Inverse-CDF draws against the closed-form Gaussian CDF, one-sample
    // Kolmogorov-Smirnov at level 0.01.
    let m = expou();
    let mut samples: Vec<f64> = (0..2000)
        .map(|i| m.sample_stationary((i as f64 + 0.5) / 2000.0).unwrap())
        .collect();
    samples.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let pdf = |x: f64| (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt();
    let mut cdf = adaptive_simpson(&pdf, -40.0, samples[0], 1e-12).unwrap();
    let n = samples.len() as f64;
    let mut d: f64 = (cdf - 0.5 / n).abs();
    for i in 1..samples.len() {
        cdf += adaptive_simpson(&pdf, samples[i - 1], samples[i], 1e-12).unwrap();
        d = d.max((cdf - (i as f64 + 0.5) / n).abs());
    }
    // crit = c(0.01) / sqrt(n)
    let crit = 1.6276 / n.sqrt();
    assert!(d < crit, "one-sample KS {d:.4} >= {crit:.4}");
}

#[test]
fn path_marginals_are_stationary_across_time() {
    // V at times {0, 1, 2} over 500 replicate paths: every pair passes a
    // two-sample KS test at level 0.01.
    let m = expou();
    let reps = 500;
    let mut at0 = Vec::with_capacity(reps);
    let mut at1 = Vec::with_capacity(reps);
    let mut at2 = Vec::with_capacity(reps);
    for rep in 0..reps {
        let seed = voldens::rng::derive_seed(314159, rep as u64);
        let path = simulate_path(&m, 2.0, 0.004, seed).unwrap();
        at0.push(path.sigma2_values[0]);
        at1.push(path.sigma2_values[250]);
        at2.push(path.sigma2_values[500]);
    }
    let crit = 1.6276 * (2.0 / reps as f64).sqrt();
    for (name, a, b) in [
        ("0 vs 1", &at0, &at1),
        ("0 vs 2", &at0, &at2),
        ("1 vs 2", &at1, &at2),
    ] {
        let d = two_sample_ks(a, b);
        assert!(d < crit, "KS({name}) = {d:.4} >= {crit:.4}");
    }
}

#[test]
fn constant_volatility_increments_are_standard_normal() {
    let m = constant_sigma(1.0);
    let path = simulate_path(&m, 100.0, 0.001, 4242).unwrap();
    let obs = observe(&path, 0.01, 10_000).unwrap();
    let n = obs.increments.len() as f64;
    let mean: f64 = obs.increments.iter().sum::<f64>() / n;
    let var: f64 = obs
        .increments
        .iter()
        .map(|x| (x - mean) * (x - mean))
        .sum::<f64>()
        / (n - 1.0);
    assert!(
        (0.94..=1.06).contains(&var),
        "sample variance {var} outside the agreed band"
    );
}

#[test]
fn transformed_median_matches_the_chi_square_identity() {
    // For constant sigma the transformed values are log sigma^2 plus an
    // independent log chi^2_1; the chi^2_1 median is the squared upper
    // quartile of the standard normal.
    let sigma = 2.0f64;
    let m = constant_sigma(sigma);
    let path = simulate_path(&m, 100.0, 0.001, 777).unwrap();
    let obs = observe(&path, 0.01, 10_000).unwrap();
    let mut ys = obs.transformed.clone();
    ys.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let median = 0.5 * (ys[ys.len() / 2 - 1] + ys[ys.len() / 2]);
    let chi_median = norm_quantile(0.75).powi(2);
    let want = (sigma * sigma).ln() + chi_median.ln();
    // 4 standard errors of a sample median of 10^4 draws
    let tol = 4.0 * 1.2533 * (std::f64::consts::PI / std::f64::consts::SQRT_2) / 100.0;
    assert!(
        (median - want).abs() < tol,
        "median {median:.4} vs {want:.4} (tol {tol:.4})"
    );
}

#[test]
fn halving_the_fine_step_leaves_observation_laws_unchanged() {
    // Mean and variance of the transformed values move by less than two
    // Monte Carlo standard errors when the inner step is halved. Standard
    // errors come from 40-block batch means, which absorbs the serial
    // correlation induced by the volatility path.
    let m = expou();
    let delta = 0.05;
    let n = 4000;
    let horizon = delta * n as f64;
    let stats = |fine: f64, seed: u64| -> (f64, f64, f64, f64) {
        let path = simulate_path(&m, horizon, fine, seed).unwrap();
        let obs = observe(&path, delta, n).unwrap();
        let ys = &obs.transformed;
        let count = ys.len() as f64;
        let mean = ys.iter().sum::<f64>() / count;
        let var = ys.iter().map(|y| (y - mean) * (y - mean)).sum::<f64>() / (count - 1.0);
        let blocks = 40;
        let per = ys.len() / blocks;
        let bmeans: Vec<f64> = (0..blocks)
            .map(|b| ys[b * per..(b + 1) * per].iter().sum::<f64>() / per as f64)
            .collect();
        let bvars: Vec<f64> = (0..blocks)
            .map(|b| {
                ys[b * per..(b + 1) * per]
                    .iter()
                    .map(|y| (y - mean) * (y - mean))
                    .sum::<f64>()
                    / per as f64
            })
            .collect();
        let se_of = |xs: &[f64]| {
            let m0 = xs.iter().sum::<f64>() / xs.len() as f64;
            let v = xs.iter().map(|x| (x - m0) * (x - m0)).sum::<f64>() / (xs.len() as f64 - 1.0);
            (v / xs.len() as f64).sqrt()
        };
        (mean, se_of(&bmeans), var, se_of(&bvars))
    };
    let (m1, se_m1, v1, se_v1) = stats(delta / 50.0, 1001);
    let (m2, se_m2, v2, se_v2) = stats(delta / 100.0, 2002);
    let mean_gap = (m1 - m2).abs();
    let mean_tol = 2.0 * (se_m1 * se_m1 + se_m2 * se_m2).sqrt();
    assert!(
        mean_gap < mean_tol,
        "mean gap {mean_gap:.4} vs tol {mean_tol:.4}"
    );
    let var_gap = (v1 - v2).abs();
    let var_tol = 2.0 * (se_v1 * se_v1 + se_v2 * se_v2).sqrt();
    assert!(
        var_gap < var_tol,
        "var gap {var_gap:.4} vs tol {var_tol:.4}"
    );
}

#[test]
fn quadrupling_replicates_halves_the_slope_standard_error() {
    let m = expou();
    let grid = [0.1, 0.05];
    let small = voldens::condition_sigma_diagnostic(&m, &grid, 400, 31).unwrap();
    let large = voldens::condition_sigma_diagnostic(&m, &grid, 1600, 31).unwrap();
    let ratio = small.slope_se / large.slope_se;
    assert!(
        (1.6..=2.5).contains(&ratio),
        "slope SE ratio {ratio:.3}, expected about 2"
    );
}

#[test]
fn cir_paths_respect_the_positivity_scheme() {
    let m = cir();
    let path = simulate_path(&m, 50.0, 0.001, 555).unwrap();
    assert!(path.sigma2_values.iter().all(|&v| v >= 0.0));
    // The state wanders but stays well inside the tabulated bracket.
    let max = path.sigma2_values.iter().cloned().fold(0.0f64, f64::max);
    assert!(max < 10.0, "max sigma^2 = {max}");
}
