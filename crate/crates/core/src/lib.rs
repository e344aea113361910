// Domain guards are written `!(x > 0.0)` so that NaN lands on the
// rejecting branch.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

//! Nonparametric volatility density estimation.
//!
//! The estimand is the stationary density of `log sigma^2` for a
//! stochastic volatility model observed through discrete log prices.
//! Log-squared normalized increments are, up to a vanishing approximation
//! error, the target variable plus independent `log chi^2_1` noise, so the
//! density is recovered by Fourier deconvolution against that noise.
//!
//! Modules:
//! - [`specfun`]: complex log-Gamma and the noise characteristic function.
//! - [`kernels`]: kernels given by a compactly supported characteristic
//!   function, and their validation.
//! - [`deconv`]: the inversion kernel `v_h`, the estimator in two
//!   algebraically identical forms, and the bandwidth schedule.
//! - [`simmodel`]: volatility diffusions, invariant-density oracle, path
//!   simulation and discrete observation.
//! - [`experiments`]: reproducible Monte Carlo and quadrature experiment
//!   suites with CSV reports.

pub mod deconv;
pub mod error;
pub mod experiments;
pub mod kernels;
pub mod quad;
pub mod rng;
pub mod simmodel;
pub mod specfun;

pub use deconv::{
    bandwidth_schedule, estimate, estimate_direct, estimate_ecf, BandwidthSchedule, DeconvKernel,
    DensityEstimate, EstimateMeta, EstimatorVariant,
};
pub use error::{Error, Result};
pub use kernels::{validate_condition_w, ConditionWReport, KernelSpec};
pub use num_complex::Complex64;
pub use simmodel::{
    condition_sigma_diagnostic, observe, simulate_path, ConditionSigmaReport, ModelSpec,
    ObservationSeries, SamplePath, VolState,
};
