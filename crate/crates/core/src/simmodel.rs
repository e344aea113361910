//! Stationary volatility diffusions: the invariant-density oracle, path
//! simulation, discrete observation, and the short-horizon continuity
//! diagnostic.
//!
//! The volatility state `X` solves `dX = b(X) dt + a(X) dB` on an open
//! interval `(l, r)`; the state is either `sigma^2` itself or
//! `log sigma^2`. Its invariant density is proportional to
//! `exp(2 int_{x0}^{x} b/a^2) / a^2(x)`, which is tabulated once per model
//! for normalization and stationary initialization. The log price is
//! integrated alongside with an independent noise stream.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand_core::Rng;

use crate::error::{Error, Result};
use crate::quad::{adaptive_simpson, pairwise_sum, simpson_weight};
use crate::rng::{standard_normal, stream, unit_open, StreamRole};

type StateFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Which quantity the SDE drives.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VolState {
    Sigma2,
    LogSigma2,
}

/// Depth of the log-density drop that delimits the tabulated support.
const BRACKET_LOG_DROP: f64 = 80.0;
/// Node count of the density table used for normalization.
const DENSITY_TABLE_INTERVALS: usize = 8192;
/// Cell count of the inverse-CDF table for stationary initialization.
const CDF_TABLE_CELLS: usize = 2048;

/// Tabulated invariant law of the volatility state.
struct StationaryLaw {
    base_point: f64,
    bracket: (f64, f64),
    log_norm: f64,
    cdf_x: Vec<f64>,
    cdf_p: Vec<f64>,
}

/// A volatility diffusion plus the price drift.
#[derive(Clone)]
pub struct ModelSpec {
    name: String,
    state: VolState,
    drift: StateFn,
    diffusion: StateFn,
    state_space: (f64, f64),
    price_drift: StateFn,
    fixed_init: Option<f64>,
    boundary_tol: f64,
    stationary: Option<Arc<StationaryLaw>>,
}

impl std::fmt::Debug for ModelSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ModelSpec")
            .field("name", &self.name)
            .field("state", &self.state)
            .field("state_space", &self.state_space)
            .field("fixed_init", &self.fixed_init)
            .finish_non_exhaustive()
    }
}

impl ModelSpec {
    /// Build a model with a stationary initial law. The invariant density
    /// is tabulated here; failure to normalize it is a construction error.
    pub fn new(
        name: &str,
        state: VolState,
        state_space: (f64, f64),
        drift: StateFn,
        diffusion: StateFn,
        price_drift: StateFn,
    ) -> Result<Self> {
        let mut model = Self {
            name: name.to_string(),
            state,
            drift,
            diffusion,
            state_space,
            price_drift,
            fixed_init: None,
            boundary_tol: 0.05,
            stationary: None,
        };
        model.stationary = Some(Arc::new(StationaryLaw::build(&model)?));
        Ok(model)
    }

    /// Build a model pinned to a fixed initial state. No invariant-density
    /// machinery is constructed, which also admits degenerate dynamics
    /// (zero diffusion) for calibration runs.
    pub fn with_fixed_init(
        name: &str,
        state: VolState,
        state_space: (f64, f64),
        drift: StateFn,
        diffusion: StateFn,
        price_drift: StateFn,
        init: f64,
    ) -> Self {
        Self {
            name: name.to_string(),
            state,
            drift,
            diffusion,
            state_space,
            price_drift,
            fixed_init: Some(init),
            boundary_tol: 0.05,
            stationary: None,
        }
    }

    /// Ornstein-Uhlenbeck dynamics on `log sigma^2`:
    /// `dX = theta (mu - X) dt + psi dB`. Invariant law
    /// `N(mu, psi^2 / (2 theta))`.
    pub fn exp_ou(theta: f64, mu: f64, psi: f64, price_drift_rate: f64) -> Result<Self> {
        if !(theta > 0.0) || !(psi > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "expou needs theta > 0 and psi > 0, got theta = {theta}, psi = {psi}"
            )));
        }
        Self::new(
            "expou",
            VolState::LogSigma2,
            (f64::NEG_INFINITY, f64::INFINITY),
            Arc::new(move |x| theta * (mu - x)),
            Arc::new(move |_| psi),
            constant_drift(price_drift_rate),
        )
    }

    /// Square-root dynamics on `sigma^2`:
    /// `dV = kappa (theta_bar - V) dt + xi sqrt(V) dB`. Invariant law
    /// `Gamma(2 kappa theta_bar / xi^2, scale xi^2 / (2 kappa))`.
    pub fn cir(kappa: f64, theta_bar: f64, xi: f64, price_drift_rate: f64) -> Result<Self> {
        if !(kappa > 0.0) || !(theta_bar > 0.0) || !(xi > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "cir needs kappa, theta_bar, xi > 0, got ({kappa}, {theta_bar}, {xi})"
            )));
        }
        Self::new(
            "cir",
            VolState::Sigma2,
            (0.0, f64::INFINITY),
            Arc::new(move |x| kappa * (theta_bar - x)),
            Arc::new(move |x| xi * x.max(0.0).sqrt()),
            constant_drift(price_drift_rate),
        )
    }

    /// Registry lookup by name with `key = value` parameters. Unknown keys
    /// are rejected.
    pub fn by_name(name: &str, params: &BTreeMap<String, f64>) -> Result<Self> {
        let get = |key: &str, default: f64| params.get(key).copied().unwrap_or(default);
        let model = match name {
            "expou" => {
                let m = Self::exp_ou(
                    get("theta", 1.0),
                    get("mu", 0.0),
                    get("psi", std::f64::consts::SQRT_2),
                    get("r", 0.0),
                )?;
                check_params(params, &["theta", "mu", "psi", "r"])?;
                m
            }
            "cir" => {
                let m = Self::cir(
                    get("kappa", 2.0),
                    get("theta_bar", 1.0),
                    get("xi", 1.0),
                    get("r", 0.0),
                )?;
                check_params(params, &["kappa", "theta_bar", "xi", "r"])?;
                m
            }
            other => {
                return Err(Error::InvalidConfig(format!(
                    "unknown model '{other}' (builtin: expou, cir)"
                )))
            }
        };
        Ok(model)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn state(&self) -> VolState {
        self.state
    }

    pub fn state_space(&self) -> (f64, f64) {
        self.state_space
    }

    /// sigma^2 as a function of the state.
    fn sigma2_of(&self, x: f64) -> f64 {
        match self.state {
            VolState::Sigma2 => x.max(0.0),
            VolState::LogSigma2 => x.exp(),
        }
    }

    fn clamp_to_space(&self, x: f64) -> f64 {
        let (l, r) = self.state_space;
        let mut y = x;
        if l.is_finite() {
            y = y.max(l);
        }
        if r.is_finite() {
            y = y.min(r);
        }
        y
    }

    fn law(&self) -> Result<&StationaryLaw> {
        self.stationary.as_deref().ok_or_else(|| {
            Error::Domain(format!(
                "model '{}' was built with a fixed initial state and has no invariant law",
                self.name
            ))
        })
    }

    /// Log of the unnormalized invariant density,
    /// `-log a^2(x) + 2 int_{x0}^{x} b/a^2`.
    fn log_unnormalized(&self, x: f64, base_point: f64) -> Result<f64> {
        let a2 = {
            let a = (self.diffusion)(x);
            a * a
        };
        if !(a2 > 0.0) || !a2.is_finite() {
            return Err(Error::DivergentDensity {
                lo: self.state_space.0,
                hi: self.state_space.1,
                detail: format!("a^2({x}) = {a2} is not positive"),
            });
        }
        let drift = Arc::clone(&self.drift);
        let diffusion = Arc::clone(&self.diffusion);
        let ratio = move |y: f64| {
            let a = diffusion(y);
            drift(y) / (a * a)
        };
        let integral = adaptive_simpson(&ratio, base_point, x, 1e-12).map_err(|e| {
            Error::DivergentDensity {
                lo: self.state_space.0,
                hi: self.state_space.1,
                detail: format!("drift/diffusion integral failed at x = {x}: {e}"),
            }
        })?;
        Ok(2.0 * integral - a2.ln())
    }

    /// Normalized invariant density of the volatility state at `x`.
    pub fn invariant_density(&self, x: f64) -> Result<f64> {
        let law = self.law()?;
        let (l, r) = self.state_space;
        if !(x > l && x < r) {
            return Err(Error::Domain(format!(
                "x = {x} outside the open state space ({l}, {r})"
            )));
        }
        if x <= law.bracket.0 || x >= law.bracket.1 {
            // Beyond the tabulated support the density is below e^-80 of
            // the peak; report it as zero rather than extrapolating.
            return Ok(0.0);
        }
        let l_un = self.log_unnormalized(x, law.base_point)?;
        Ok((l_un - law.log_norm).exp())
    }

    /// Invariant density of `log sigma^2`, the estimand of the
    /// deconvolution estimator, regardless of which state the SDE drives.
    pub fn log_sigma2_density(&self, x: f64) -> Result<f64> {
        match self.state {
            VolState::LogSigma2 => self.invariant_density(x),
            VolState::Sigma2 => {
                let v = x.exp();
                let (l, r) = self.state_space;
                if !(v > l && v < r) {
                    return Ok(0.0);
                }
                Ok(self.invariant_density(v)? * v)
            }
        }
    }

    /// Stationary draw by inverse CDF on the tabulated law.
    pub fn sample_stationary(&self, u: f64) -> Result<f64> {
        let law = self.law()?;
        Ok(law.inverse_cdf(u))
    }

    /// Tabulated support of the invariant law (density below `e^-80` of
    /// the peak outside). Useful for choosing quadrature ranges.
    pub fn stationary_bracket(&self) -> Result<(f64, f64)> {
        Ok(self.law()?.bracket)
    }
}

fn constant_drift(rate: f64) -> StateFn {
    Arc::new(move |_t| rate)
}

fn check_params(params: &BTreeMap<String, f64>, allowed: &[&str]) -> Result<()> {
    for key in params.keys() {
        if !allowed.contains(&key.as_str()) {
            return Err(Error::InvalidConfig(format!(
                "unknown model parameter '{key}' (allowed: {})",
                allowed.join(", ")
            )));
        }
    }
    Ok(())
}

impl StationaryLaw {
    fn build(model: &ModelSpec) -> Result<Self> {
        let (l, r) = model.state_space;
        let base_point = if l.is_finite() && r.is_finite() {
            0.5 * (l + r)
        } else if l.is_finite() {
            l + 1.0
        } else if r.is_finite() {
            r - 1.0
        } else {
            0.0
        };

        let log_dens = |x: f64| model.log_unnormalized(x, base_point);
        let center = log_dens(base_point)?;
        let lo = scan_bracket(&log_dens, base_point, l, false, center)?;
        let hi = scan_bracket(&log_dens, base_point, r, true, center)?;

        // Uniform log-density table; the exponent integral accumulates
        // segment by segment instead of re-integrating from the base point.
        let n = DENSITY_TABLE_INTERVALS;
        let step = (hi - lo) / n as f64;
        let drift = Arc::clone(&model.drift);
        let diffusion = Arc::clone(&model.diffusion);
        let ratio = move |y: f64| {
            let a = diffusion(y);
            drift(y) / (a * a)
        };
        let mut log_table = Vec::with_capacity(n + 1);
        let mut acc = adaptive_simpson(&ratio, base_point, lo, 1e-12).map_err(div_err(l, r))?;
        for m in 0..=n {
            let x = lo + m as f64 * step;
            if m > 0 {
                acc += adaptive_simpson(&ratio, x - step, x, 1e-13).map_err(div_err(l, r))?;
            }
            let a = (model.diffusion)(x);
            let a2 = a * a;
            if !(a2 > 0.0) || !a2.is_finite() {
                return Err(Error::DivergentDensity {
                    lo: l,
                    hi: r,
                    detail: format!("a^2({x}) = {a2} inside the bracket"),
                });
            }
            log_table.push(2.0 * acc - a2.ln());
        }

        let peak = log_table.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        if !peak.is_finite() {
            return Err(Error::DivergentDensity {
                lo: l,
                hi: r,
                detail: "log density has no finite peak".into(),
            });
        }
        let dens: Vec<f64> = log_table.iter().map(|&v| (v - peak).exp()).collect();
        let simpson_terms: Vec<f64> = dens
            .iter()
            .enumerate()
            .map(|(m, &d)| simpson_weight(m, n) * d)
            .collect();
        let integral = pairwise_sum(&simpson_terms) * step / 3.0;
        let coarse: f64 = dens
            .iter()
            .step_by(2)
            .enumerate()
            .map(|(m, &d)| simpson_weight(m, n / 2) * d)
            .sum::<f64>()
            * (2.0 * step)
            / 3.0;
        if !(integral.is_finite() && integral > 0.0)
            || ((integral - coarse) / integral).abs() > 1e-6
        {
            return Err(Error::DivergentDensity {
                lo: l,
                hi: r,
                detail: format!(
                    "normalization did not converge (fine {integral:.6e}, coarse {coarse:.6e})"
                ),
            });
        }
        let log_norm = peak + integral.ln();

        // Inverse-CDF table: cumulative trapezoid, downsampled to the cell
        // budget, monotone linear interpolation on inversion.
        let mut cum = Vec::with_capacity(n + 1);
        let mut c = 0.0;
        cum.push(0.0);
        for m in 1..=n {
            c += 0.5 * (dens[m - 1] + dens[m]) * step;
            cum.push(c);
        }
        let total = *cum.last().unwrap();
        let thin = n / CDF_TABLE_CELLS;
        let mut cdf_x = Vec::with_capacity(CDF_TABLE_CELLS + 1);
        let mut cdf_p = Vec::with_capacity(CDF_TABLE_CELLS + 1);
        for m in (0..=n).step_by(thin) {
            cdf_x.push(lo + m as f64 * step);
            cdf_p.push(cum[m] / total);
        }

        Ok(Self {
            base_point,
            bracket: (lo, hi),
            log_norm,
            cdf_x,
            cdf_p,
        })
    }

    fn inverse_cdf(&self, u: f64) -> f64 {
        let u = u.clamp(0.0, 1.0);
        let idx = self.cdf_p.partition_point(|&p| p < u);
        if idx == 0 {
            return self.cdf_x[0];
        }
        if idx >= self.cdf_p.len() {
            return *self.cdf_x.last().unwrap();
        }
        let (p0, p1) = (self.cdf_p[idx - 1], self.cdf_p[idx]);
        let (x0, x1) = (self.cdf_x[idx - 1], self.cdf_x[idx]);
        if p1 <= p0 {
            return x0;
        }
        x0 + (x1 - x0) * (u - p0) / (p1 - p0)
    }
}

fn div_err(lo: f64, hi: f64) -> impl Fn(Error) -> Error {
    move |e| Error::DivergentDensity {
        lo,
        hi,
        detail: e.to_string(),
    }
}

/// Walk outward from the base point until the log density has dropped
/// `BRACKET_LOG_DROP` below the running peak.
fn scan_bracket(
    log_dens: &dyn Fn(f64) -> Result<f64>,
    base: f64,
    boundary: f64,
    upward: bool,
    center_value: f64,
) -> Result<f64> {
    let mut peak = center_value;
    let mut probe: f64 = 0.25;
    for _ in 0..200 {
        let x = if boundary.is_finite() {
            // geometric approach to the finite boundary
            let frac = 1.0 - (-probe).exp2();
            base + (boundary - base) * frac
        } else if upward {
            base + probe
        } else {
            base - probe
        };
        let v = log_dens(x)?;
        if v.is_finite() {
            peak = peak.max(v);
            if v < peak - BRACKET_LOG_DROP {
                return Ok(x);
            }
        } else if v == f64::NEG_INFINITY {
            return Ok(x);
        }
        probe *= if boundary.is_finite() { 1.25 } else { 1.6 };
    }
    Err(Error::DivergentDensity {
        lo: if upward { base } else { boundary },
        hi: if upward { boundary } else { base },
        detail: "density does not decay toward the boundary".into(),
    })
}

/// One simulated path on the fine grid.
#[derive(Debug, Clone)]
pub struct SamplePath {
    pub fine_step: f64,
    pub sigma2_values: Vec<f64>,
    pub logprice_values: Vec<f64>,
    pub seed: u64,
}

/// Euler scheme for the volatility state with an independent noise stream
/// for the price. Streams are derived from `(seed, role)`; the volatility
/// stream consumes one normal per step, the price stream likewise, and the
/// initializer exactly one uniform (when the law is stationary).
pub fn simulate_path(
    model: &ModelSpec,
    horizon: f64,
    fine_step: f64,
    seed: u64,
) -> Result<SamplePath> {
    let mut vol = stream(seed, StreamRole::VolatilityNoise);
    let mut price = stream(seed, StreamRole::PriceNoise);
    let mut init = stream(seed, StreamRole::InitialState);
    let mut path =
        simulate_with_streams(model, horizon, fine_step, &mut vol, &mut price, &mut init)?;
    path.seed = seed;
    Ok(path)
}

/// Deterministic core of the simulator, taking explicit streams. Exposed
/// for stream-accounting checks.
pub fn simulate_with_streams(
    model: &ModelSpec,
    horizon: f64,
    fine_step: f64,
    vol_noise: &mut dyn Rng,
    price_noise: &mut dyn Rng,
    init: &mut dyn Rng,
) -> Result<SamplePath> {
    if !(horizon > 0.0) || !(fine_step > 0.0) {
        return Err(Error::Domain(format!(
            "horizon and fine_step must be positive, got {horizon}, {fine_step}"
        )));
    }
    if fine_step > horizon / 100.0 {
        return Err(Error::StepTooCoarse { fine_step, horizon });
    }
    let steps = (horizon / fine_step).round() as usize;
    let sqrt_step = fine_step.sqrt();
    let (l, r) = model.state_space;

    let mut x = match model.fixed_init {
        Some(x0) => x0,
        None => model.sample_stationary(unit_open(init))?,
    };
    let mut s = 0.0;
    let mut sigma2 = Vec::with_capacity(steps + 1);
    let mut logprice = Vec::with_capacity(steps + 1);
    sigma2.push(model.sigma2_of(x));
    logprice.push(0.0);

    for k in 0..steps {
        let t = k as f64 * fine_step;
        let v = sigma2[k];
        s += (model.price_drift)(t) * fine_step
            + v.sqrt() * sqrt_step * standard_normal(price_noise);

        // Coefficients are evaluated at the state clamped into the closed
        // interval (full truncation at a finite boundary).
        let xa = model.clamp_to_space(x);
        x += (model.drift)(xa) * fine_step
            + (model.diffusion)(xa) * sqrt_step * standard_normal(vol_noise);
        if (l.is_finite() && x < l - model.boundary_tol)
            || (r.is_finite() && x > r + model.boundary_tol)
        {
            return Err(Error::StateExited { step: k + 1, x });
        }
        sigma2.push(model.sigma2_of(x));
        logprice.push(s);
    }
    Ok(SamplePath {
        fine_step,
        sigma2_values: sigma2,
        logprice_values: logprice,
        seed: 0,
    })
}

/// Log-price increments normalized by `sqrt(Delta)` and their log squares.
#[derive(Debug, Clone)]
pub struct ObservationSeries {
    pub increments: Vec<f64>,
    /// `log(X_i^2)` with exact zero increments dropped.
    pub transformed: Vec<f64>,
    pub n: usize,
    pub delta: f64,
    pub dropped: usize,
}

impl ObservationSeries {
    pub fn from_increments(increments: Vec<f64>, delta: f64) -> Self {
        let transformed: Vec<f64> = increments
            .iter()
            .filter(|&&x| x != 0.0)
            .map(|&x| (x * x).ln())
            .collect();
        let n = increments.len();
        let dropped = n - transformed.len();
        Self {
            increments,
            transformed,
            n,
            delta,
            dropped,
        }
    }

    /// Series built directly from transformed values (synthetic data with
    /// no sampling structure; `delta = 0` marks that case).
    pub fn from_transformed(transformed: Vec<f64>, delta: f64) -> Self {
        let increments = transformed.iter().map(|y| (0.5 * y).exp()).collect();
        let n = transformed.len();
        Self {
            increments,
            transformed,
            n,
            delta,
            dropped: 0,
        }
    }

    pub fn retained(&self) -> usize {
        self.transformed.len()
    }
}

/// Sample the path at gap `Delta` (which must sit on the fine grid) and
/// form `n` normalized increments.
pub fn observe(path: &SamplePath, delta: f64, n: usize) -> Result<ObservationSeries> {
    if !(delta > 0.0) {
        return Err(Error::Domain(format!(
            "delta must be positive, got {delta}"
        )));
    }
    let ratio = delta / path.fine_step;
    let m = ratio.round();
    if m < 1.0 || (ratio - m).abs() > 1e-9 * m.max(1.0) {
        return Err(Error::MisalignedDelta {
            delta,
            fine_step: path.fine_step,
        });
    }
    let m = m as usize;
    let available = (path.logprice_values.len() - 1) / m;
    if n > available {
        return Err(Error::PathTooShort {
            requested: n,
            available,
        });
    }
    let sqrt_delta = delta.sqrt();
    let increments: Vec<f64> = (1..=n)
        .map(|i| (path.logprice_values[i * m] - path.logprice_values[(i - 1) * m]) / sqrt_delta)
        .collect();
    Ok(ObservationSeries::from_increments(increments, delta))
}

/// Short-horizon continuity diagnostic: Monte Carlo estimate of
/// `E |V_t - V_0|` under stationary start, and the slope of its log-log
/// regression against `t`.
#[derive(Debug, Clone)]
pub struct ConditionSigmaReport {
    pub t_grid: Vec<f64>,
    pub mean_abs_change: Vec<f64>,
    pub standard_errors: Vec<f64>,
    pub slope: f64,
    pub slope_se: f64,
}

pub fn condition_sigma_diagnostic(
    model: &ModelSpec,
    t_grid: &[f64],
    replicates: usize,
    seed: u64,
) -> Result<ConditionSigmaReport> {
    if t_grid.is_empty() || t_grid.iter().any(|&t| !(t > 0.0)) {
        return Err(Error::InvalidConfig(
            "condition-sigma needs a nonempty positive t grid".into(),
        ));
    }
    if replicates < 100 {
        return Err(Error::InvalidConfig(format!(
            "condition-sigma needs at least 100 replicates, got {replicates}"
        )));
    }
    use rayon::prelude::*;
    let mut means = Vec::with_capacity(t_grid.len());
    let mut ses = Vec::with_capacity(t_grid.len());
    for (ti, &t) in t_grid.iter().enumerate() {
        let fine = t / 100.0;
        let changes: Vec<f64> = (0..replicates)
            .into_par_iter()
            .map(|rep| {
                let sub = crate::rng::derive_seed(seed, (rep * t_grid.len() + ti) as u64);
                let path = simulate_path(model, t, fine, sub)?;
                Ok(
                    (path.sigma2_values[path.sigma2_values.len() - 1] - path.sigma2_values[0])
                        .abs(),
                )
            })
            .collect::<Result<Vec<f64>>>()?;
        let m = pairwise_sum(&changes) / replicates as f64;
        let devs: Vec<f64> = changes.iter().map(|c| (c - m) * (c - m)).collect();
        let var = pairwise_sum(&devs) / (replicates as f64 - 1.0);
        means.push(m);
        ses.push((var / replicates as f64).sqrt());
    }

    // Unweighted least squares of log mean on log t; the slope variance
    // comes from the per-point Monte Carlo errors by the delta method.
    let (slope, slope_se) = if means.iter().all(|&m| m > 0.0) {
        let lx: Vec<f64> = t_grid.iter().map(|t| t.ln()).collect();
        let ly: Vec<f64> = means.iter().map(|m| m.ln()).collect();
        let mx = lx.iter().sum::<f64>() / lx.len() as f64;
        let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
        let slope: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * y / sxx).sum();
        let var: f64 = lx
            .iter()
            .zip(means.iter().zip(&ses))
            .map(|(x, (m, se))| {
                let c = (x - mx) / sxx;
                c * c * (se / m) * (se / m)
            })
            .sum();
        (slope, var.sqrt())
    } else {
        (f64::NAN, f64::NAN)
    };

    Ok(ConditionSigmaReport {
        t_grid: t_grid.to_vec(),
        mean_abs_change: means,
        standard_errors: ses,
        slope,
        slope_se,
    })
}
