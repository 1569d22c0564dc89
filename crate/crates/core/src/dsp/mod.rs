//! Signal-processing primitives shared by the analysis, weighting and codec
//! stages.

mod filter;
mod lpc;
mod lsp;
mod spectrum;
mod window;

pub use filter::{pole_zero_filter, pole_zero_filter_into, FilterState};
pub use lpc::{
    autocorrelate, bandwidth_expand, levinson_durbin, AutocorrSequence, LevinsonResult, LpcFilter,
};
pub use lsp::{
    interpolate_lsp, lpc_to_lsp, lsp_to_lpc, subframe_weight, LspVector, MIN_LSP_GAP,
};
pub use spectrum::{autocorrelation_from_power, power_spectrum, Spectrum};
pub use window::{asymmetric_window, lag_window};

use crate::error::{Error, Result};

/// Sample rate of the narrowband codec.
pub const SAMPLE_RATE: u32 = 8000;

/// Finite, non-empty run of samples with its sample rate.
#[derive(Debug, Clone, PartialEq)]
pub struct SignalBuffer {
    samples: Vec<f64>,
    sample_rate: u32,
}

impl SignalBuffer {
    pub fn new(samples: Vec<f64>, sample_rate: u32) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::invalid("signal must not be empty"));
        }
        if samples.iter().any(|s| !s.is_finite()) {
            return Err(Error::invalid("signal contains non-finite samples"));
        }
        Ok(Self { samples, sample_rate })
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn sample_rate(&self) -> u32 {
        self.sample_rate
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }
}
