//! The deconvolution core: the inversion kernel `v_h`, its diagnostic
//! constant `gamma0(h)`, the density estimator in two algebraically
//! identical forms, and the bandwidth/sampling schedule.
//!
//! `v_h(x) = (1/2 pi) int_{-1}^{1} phi_w(s) / phi_k(s/h) e^{-isx} ds` is
//! real valued (conjugate symmetry of the integrand) but not even: the
//! noise characteristic function carries a phase. All `1/phi_k` factors
//! are evaluated in log space; `|1/phi_k(s/h)|` grows like
//! `e^{pi |s| / 2h} / sqrt(2)`, which is why bandwidths below
//! [`MIN_BANDWIDTH`] are rejected.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::kernels::KernelSpec;
use crate::quad::{
    oscillation_intervals, pairwise_sum, pairwise_sum_complex, simpson, simpson_weight,
};
use crate::simmodel::ObservationSeries;
use crate::specfun::{inv_phi_k, inv_phi_k_magnitude};

/// Smallest accepted bandwidth for `gamma0` and kernel construction.
pub const MIN_BANDWIDTH: f64 = 0.05;

/// Tolerance on the residual imaginary part of the Fourier inversion.
pub const IMAG_RESIDUAL_LIMIT: f64 = 1e-10;

/// Which form of the estimator to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EstimatorVariant {
    /// Pointwise sum of `v_h` over observations; O(n * grid * nodes).
    Direct,
    /// Through the empirical characteristic function; one data pass per
    /// quadrature node. The default.
    Ecf,
}

impl fmt::Display for EstimatorVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EstimatorVariant::Direct => "direct",
            EstimatorVariant::Ecf => "ecf",
        })
    }
}

impl FromStr for EstimatorVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "direct" => Ok(Self::Direct),
            "ecf" => Ok(Self::Ecf),
            other => Err(Error::InvalidConfig(format!(
                "unknown estimator variant '{other}' (expected direct|ecf)"
            ))),
        }
    }
}

/// Prepared evaluator for `v_h` at a fixed bandwidth.
///
/// Node tables of the Fourier integrand are cached per interval count, so
/// repeated evaluations share the log-Gamma work.
pub struct DeconvKernel {
    spec: KernelSpec,
    h: f64,
    base_intervals: usize,
    gamma0: f64,
    tables: Mutex<BTreeMap<usize, Arc<Vec<Complex64>>>>,
}

impl DeconvKernel {
    pub fn new(spec: KernelSpec, h: f64) -> Result<Self> {
        Self::with_base_intervals(spec, h, 256)
    }

    pub fn with_base_intervals(spec: KernelSpec, h: f64, base_intervals: usize) -> Result<Self> {
        let gamma0 = gamma0(&spec, h)?;
        Ok(Self {
            spec,
            h,
            base_intervals: base_intervals.max(16),
            gamma0,
            tables: Mutex::new(BTreeMap::new()),
        })
    }

    pub fn spec(&self) -> &KernelSpec {
        &self.spec
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    /// Cached `gamma0(h)`, an upper bound for `|v_h|` and its Lipschitz
    /// constant.
    pub fn gamma0(&self) -> f64 {
        self.gamma0
    }

    fn integrand(&self, s: f64) -> Complex64 {
        inv_phi_k(s / self.h) * self.spec.phi_w(s)
    }

    /// Node table of `phi_w(s)/phi_k(s/h)` on `[0, 1]` with `n` intervals.
    fn table(&self, intervals: usize) -> Arc<Vec<Complex64>> {
        if let Some(t) = self.tables.lock().unwrap().get(&intervals) {
            return Arc::clone(t);
        }
        let values: Vec<Complex64> = (0..=intervals)
            .map(|m| self.integrand(m as f64 / intervals as f64))
            .collect();
        let arc = Arc::new(values);
        self.tables
            .lock()
            .unwrap()
            .entry(intervals)
            .or_insert_with(|| Arc::clone(&arc));
        arc
    }

    /// Evaluate `v_h(x)`.
    ///
    /// Node count scales with the oscillation frequency of the integrand:
    /// `max(base, ceil(8 |x| / h))` intervals, rounded to a power of two so
    /// the node table can be reused across arguments.
    pub fn eval(&self, x: f64) -> f64 {
        let n = oscillation_intervals(self.base_intervals, x.abs() / self.h);
        let table = self.table(n);
        let step = 1.0 / n as f64;
        let mut terms = Vec::with_capacity(n + 1);
        for (m, g) in table.iter().enumerate() {
            let s = m as f64 * step;
            let (sin, cos) = (s * x).sin_cos();
            terms.push(simpson_weight(m, n) * (g.re * cos + g.im * sin));
        }
        pairwise_sum(&terms) * step / 3.0 / std::f64::consts::PI
    }
}

/// `gamma0(h) = (1/2 pi) int_{-1}^{1} |phi_w(s) / phi_k(s/h)| ds`,
/// evaluated node by node in log space.
pub fn gamma0(spec: &KernelSpec, h: f64) -> Result<f64> {
    if !(h > 0.0) || !h.is_finite() {
        return Err(Error::Domain(format!(
            "bandwidth must be positive, got {h}"
        )));
    }
    if h < MIN_BANDWIDTH {
        return Err(Error::BandwidthTooSmall {
            h,
            min: MIN_BANDWIDTH,
        });
    }
    Ok(simpson(
        |s| spec.phi_w(s).abs() * inv_phi_k_magnitude(s / h),
        0.0,
        1.0,
        2048,
    ) / std::f64::consts::PI)
}

/// L2 norm of `v_h` through Parseval:
/// `||v_h||_2^2 = (1/2 pi) int |phi_w(s)/phi_k(s/h)|^2 ds`.
pub fn v_l2_norm_parseval(kernel: &DeconvKernel) -> f64 {
    let h = kernel.h();
    let spec = kernel.spec();
    let sq = simpson(
        |s| {
            let m = spec.phi_w(s).abs() * inv_phi_k_magnitude(s / h);
            m * m
        },
        0.0,
        1.0,
        4096,
    ) / std::f64::consts::PI;
    sq.sqrt()
}

/// L2 norm of `v_h` by direct spatial quadrature over `[-r, r]`.
/// `v_h^2` decays like `x^{-8}`, so moderate `r` suffices.
pub fn v_l2_norm_spatial(kernel: &DeconvKernel, r: f64, step: f64) -> f64 {
    let n = ((2.0 * r / step).ceil() as usize).next_multiple_of(2);
    let h = 2.0 * r / n as f64;
    let terms: Vec<f64> = (0..=n)
        .into_par_iter()
        .map(|m| {
            let x = -r + m as f64 * h;
            let v = kernel.eval(x);
            simpson_weight(m, n) * v * v
        })
        .collect();
    (pairwise_sum(&terms) * h / 3.0).sqrt()
}

/// Spatial integral of `v_h` over `[-r, r]`.
pub fn integrate_v(kernel: &DeconvKernel, r: f64, step: f64) -> f64 {
    let n = ((2.0 * r / step).ceil() as usize).next_multiple_of(2);
    let h = 2.0 * r / n as f64;
    let terms: Vec<f64> = (0..=n)
        .into_par_iter()
        .map(|m| {
            let x = -r + m as f64 * h;
            simpson_weight(m, n) * kernel.eval(x)
        })
        .collect();
    pairwise_sum(&terms) * h / 3.0
}

/// Provenance of a density estimate.
#[derive(Debug, Clone)]
pub struct EstimateMeta {
    pub n: usize,
    pub dropped: usize,
    /// Sampling gap of the underlying series; 0 marks synthetic data with
    /// no sampling structure.
    pub delta: f64,
    pub h: f64,
    pub kernel: String,
    pub variant: EstimatorVariant,
    pub seed: Option<u64>,
}

/// Estimated density values on an evaluation grid.
#[derive(Debug, Clone)]
pub struct DensityEstimate {
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    pub meta: EstimateMeta,
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() || grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::BadGrid);
    }
    Ok(())
}

fn check_data(data: &ObservationSeries) -> Result<()> {
    if data.transformed.is_empty() {
        return Err(Error::EmptyData);
    }
    Ok(())
}

fn make_meta(
    data: &ObservationSeries,
    kernel: &DeconvKernel,
    variant: EstimatorVariant,
) -> EstimateMeta {
    EstimateMeta {
        n: data.n,
        dropped: data.dropped,
        delta: data.delta,
        h: kernel.h(),
        kernel: kernel.spec().name().to_string(),
        variant,
        seed: None,
    }
}

/// Pointwise-sum form of the estimator:
/// `f(x) = (1/(m h)) sum_j v_h((x - y_j) / h)` over the `m` retained
/// transformed observations. Kept as the slow reference implementation.
pub fn estimate_direct(
    data: &ObservationSeries,
    kernel: &DeconvKernel,
    grid: &[f64],
) -> Result<DensityEstimate> {
    check_data(data)?;
    check_grid(grid)?;
    let h = kernel.h();
    let m = data.transformed.len() as f64;
    let values: Vec<f64> = grid
        .par_iter()
        .map(|&x| {
            let terms: Vec<f64> = data
                .transformed
                .iter()
                .map(|&y| kernel.eval((x - y) / h))
                .collect();
            pairwise_sum(&terms) / (m * h)
        })
        .collect();
    Ok(DensityEstimate {
        grid: grid.to_vec(),
        values,
        meta: make_meta(data, kernel, EstimatorVariant::Direct),
    })
}

/// Empirical-characteristic-function form of the estimator:
/// `f(x) = (1/(2 pi h)) int_{-1}^{1} phi_w(s) phi_emp(s/h) / phi_k(s/h)
///         e^{-isx/h} ds`
/// with `phi_emp(t) = (1/m) sum_j e^{i t y_j}`. One data pass per node
/// instead of one quadrature per (grid point, datum) pair.
pub fn estimate_ecf(
    data: &ObservationSeries,
    kernel: &DeconvKernel,
    grid: &[f64],
) -> Result<DensityEstimate> {
    check_data(data)?;
    check_grid(grid)?;
    let h = kernel.h();
    let ys = &data.transformed;
    let m = ys.len() as f64;

    // Widest phase swing across (grid, data) pairs fixes the node count,
    // matching the per-argument rule used by DeconvKernel::eval.
    let (y_min, y_max) = min_max(ys);
    let (x_min, x_max) = (grid[0], *grid.last().unwrap());
    let swing = (x_max - y_min).max(y_max - x_min).max(0.0);
    let n = 2 * oscillation_intervals(kernel.base_intervals, swing / h / h);
    let step = 2.0 / n as f64;

    // psi_m = phi_w(s_m) / phi_k(s_m/h) * phi_emp(s_m/h) on [-1, 1]
    let psi: Vec<Complex64> = (0..=n)
        .into_par_iter()
        .map(|mm| {
            let s = -1.0 + mm as f64 * step;
            let factor = inv_phi_k(s / h) * kernel.spec().phi_w(s);
            if factor == Complex64::new(0.0, 0.0) {
                return factor;
            }
            let t = s / h;
            let terms: Vec<Complex64> = ys
                .iter()
                .map(|&y| Complex64::new(0.0, t * y).exp())
                .collect();
            factor * pairwise_sum_complex(&terms) / m
        })
        .collect();

    let scale = step / 3.0 / (2.0 * std::f64::consts::PI * h);
    let complex_values: Vec<Complex64> = grid
        .par_iter()
        .map(|&x| {
            let terms: Vec<Complex64> = psi
                .iter()
                .enumerate()
                .map(|(mm, &p)| {
                    let s = -1.0 + mm as f64 * step;
                    p * Complex64::new(0.0, -s * x / h).exp() * simpson_weight(mm, n)
                })
                .collect();
            pairwise_sum_complex(&terms) * scale
        })
        .collect();

    let mut values = Vec::with_capacity(grid.len());
    for (&x, v) in grid.iter().zip(&complex_values) {
        if v.im.abs() > IMAG_RESIDUAL_LIMIT {
            return Err(Error::ImaginaryResidual {
                x,
                resid: v.im.abs(),
                limit: IMAG_RESIDUAL_LIMIT,
            });
        }
        values.push(v.re);
    }
    Ok(DensityEstimate {
        grid: grid.to_vec(),
        values,
        meta: make_meta(data, kernel, EstimatorVariant::Ecf),
    })
}

/// Run whichever variant the caller picked.
pub fn estimate(
    data: &ObservationSeries,
    kernel: &DeconvKernel,
    grid: &[f64],
    variant: EstimatorVariant,
) -> Result<DensityEstimate> {
    match variant {
        EstimatorVariant::Direct => estimate_direct(data, kernel, grid),
        EstimatorVariant::Ecf => estimate_ecf(data, kernel, grid),
    }
}

fn min_max(xs: &[f64]) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &x in xs {
        lo = lo.min(x);
        hi = hi.max(x);
    }
    (lo, hi)
}

/// Uniform grid helper, `points >= 2`.
pub fn uniform_grid(min: f64, max: f64, points: usize) -> Result<Vec<f64>> {
    if !(min < max) || points < 2 {
        return Err(Error::InvalidConfig(format!(
            "grid needs min < max and points >= 2, got [{min}, {max}] x {points}"
        )));
    }
    let step = (max - min) / (points - 1) as f64;
    Ok((0..points)
        .map(|i| {
            if i + 1 == points {
                max
            } else {
                min + i as f64 * step
            }
        })
        .collect())
}

/// Default evaluation grid: `[mean - 4 sd, mean + 4 sd]` of the transformed
/// data, 101 points.
pub fn default_grid(data: &ObservationSeries) -> Result<Vec<f64>> {
    if data.transformed.is_empty() {
        return Err(Error::EmptyData);
    }
    let m = data.transformed.len() as f64;
    let mean = pairwise_sum(&data.transformed) / m;
    let devs: Vec<f64> = data
        .transformed
        .iter()
        .map(|y| (y - mean) * (y - mean))
        .collect();
    let sd = (pairwise_sum(&devs) / m).sqrt().max(1e-6);
    uniform_grid(mean - 4.0 * sd, mean + 4.0 * sd, 101)
}

/// Bandwidth and sampling gap for a target sample size.
#[derive(Debug, Clone, Copy)]
pub struct BandwidthSchedule {
    pub h: f64,
    pub delta: f64,
    pub gamma: f64,
    pub delta_exp: f64,
    /// `gamma > 4 / delta_exp`. Outside this the schedule is still
    /// computed, but callers should surface a warning.
    pub in_regime: bool,
}

/// `h = gamma pi / log n`, `Delta = n^{-delta_exp}`.
pub fn bandwidth_schedule(n: usize, delta_exp: f64, gamma: f64) -> Result<BandwidthSchedule> {
    if n < 2 {
        return Err(Error::SampleTooSmall { n });
    }
    if !(delta_exp > 0.0 && delta_exp < 1.0) {
        return Err(Error::Domain(format!(
            "delta exponent must lie in (0, 1), got {delta_exp}"
        )));
    }
    if !(gamma > 0.0) || !gamma.is_finite() {
        return Err(Error::Domain(format!(
            "gamma must be positive, got {gamma}"
        )));
    }
    let n_f = n as f64;
    Ok(BandwidthSchedule {
        h: gamma * std::f64::consts::PI / n_f.ln(),
        delta: n_f.powf(-delta_exp),
        gamma,
        delta_exp,
        in_regime: gamma > 4.0 / delta_exp,
    })
}
