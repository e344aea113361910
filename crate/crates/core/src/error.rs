use thiserror::Error;

/// Errors raised by the numeric layers.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("bandwidth h = {h} is below the overflow-safe minimum {min}")]
    BandwidthTooSmall { h: f64, min: f64 },

    #[error("sample size n = {n} is too small (need n >= 2)")]
    SampleTooSmall { n: usize },

    #[error("empty observation series")]
    EmptyData,

    #[error("evaluation grid must be strictly increasing")]
    BadGrid,

    #[error("sampling gap {delta} is not an integer multiple of the fine step {fine_step}")]
    MisalignedDelta { delta: f64, fine_step: f64 },

    #[error("requested {requested} increments but the path only covers {available}")]
    PathTooShort { requested: usize, available: usize },

    #[error(
        "fine step {fine_step} is too coarse for horizon {horizon} (need fine_step <= horizon/100)"
    )]
    StepTooCoarse { fine_step: f64, horizon: f64 },

    #[error("invariant density does not integrate over ({lo}, {hi}): {detail}")]
    DivergentDensity { lo: f64, hi: f64, detail: String },

    #[error("volatility state left the state space at step {step}: x = {x}")]
    StateExited { step: usize, x: f64 },

    #[error("invalid kernel: {0}")]
    InvalidKernel(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("residual imaginary part {resid:.3e} exceeds {limit:.1e} at grid point {x}")]
    ImaginaryResidual { x: f64, resid: f64, limit: f64 },

    #[error("quadrature did not converge: {0}")]
    Quadrature(String),
}

pub type Result<T> = std::result::Result<T, Error>;
