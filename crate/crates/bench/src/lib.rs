//! Shared fixtures for the criterion benches.

use voldens::experiments::{exact_convolution_sample, TruthSpec};
use voldens::simmodel::ObservationSeries;

/// Synthetic observations from the exact convolution generator.
pub fn synthetic_observations(n: usize, seed: u64) -> ObservationSeries {
    exact_convolution_sample(&TruthSpec::Gaussian { mean: 0.0, sd: 1.0 }, n, seed)
}
