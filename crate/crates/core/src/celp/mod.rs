//! Narrowband analysis-by-synthesis codec.
//!
//! Frames are 160 samples (20 ms at 8 kHz) split into four 40-sample
//! subframes. The encoder sees 40 samples of lookahead, so a stream is
//! delayed by [`CODEC_DELAY`] samples end to end.

mod analysis;
mod codebook;
mod decoder;
mod encoder;
mod params;
mod quant;
mod search;

use std::fmt;
use std::str::FromStr;

use serde::Deserialize;

pub use analysis::{open_loop_pitch, FrameAnalysis, FrameAnalyzer};
pub use codebook::{GainCodebook, InnovationCodebook, Codebooks};
pub use decoder::{decode_stream, Decoder};
pub use encoder::{encode_signal, pad_signal, EncodedFrame, Encoder};
pub use params::{FrameParams, SubframeParams};
pub use quant::{
    dequantize_frame_gain, dequantize_lsp, dequantize_subframe_gain, quantize_frame_gain,
    quantize_gains, quantize_lsp, quantize_subframe_gain, LspQuantizer, FRAME_GAIN_BITS,
    FRAME_GAIN_MIN_DB, FRAME_GAIN_STEP_DB, LSP_BITS, SUBFRAME_GAIN_RANGE_DB,
};
pub use search::{
    adaptive_contribution, adaptive_search, fixed_search, weighted_synthesis_response,
    AdaptiveChoice, ExcitationMemory, FixedChoice,
};

use crate::error::{Error, Result};
use crate::psy::PsyConfig;
use crate::weighting::{ComplexityMode, WeightingMode};

pub const FRAME_LEN: usize = 160;
pub const SUBFRAME_LEN: usize = 40;
pub const SUBFRAMES: usize = 4;
pub const LOOKAHEAD: usize = 40;
pub const LPC_ORDER: usize = 10;
pub const PITCH_MIN: usize = 17;
pub const PITCH_MAX: usize = 144;
pub const PITCH_BITS: u32 = 7;
pub const GAIN3_BITS: u32 = 5;
/// Closed-loop pitch search covers `T_ol - 4 ..= T_ol + 4`.
pub const PITCH_SEARCH_RADIUS: usize = 4;
/// End-to-end delay of encode followed by decode, in samples.
pub const CODEC_DELAY: usize = LOOKAHEAD;
/// FFT size of the frame spectrum.
pub const N_FFT: usize = 256;

/// Bit-rate tier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Deserialize, PartialOrd, Ord)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// 20-sample sub-vectors from a 32-entry book.
    Low,
    /// 10-sample sub-vectors from a 64-entry book.
    Mid,
    /// 5-sample sub-vectors from a 256-entry book.
    High,
}

impl Mode {
    pub const ALL: [Mode; 3] = [Mode::Low, Mode::Mid, Mode::High];

    pub fn subvector_len(self) -> usize {
        match self {
            Mode::Low => 20,
            Mode::Mid => 10,
            Mode::High => 5,
        }
    }

    pub fn subvector_bits(self) -> u32 {
        match self {
            Mode::Low => 5,
            Mode::Mid => 6,
            Mode::High => 8,
        }
    }

    pub fn subvectors(self) -> usize {
        SUBFRAME_LEN / self.subvector_len()
    }

    pub fn subframe_gain_bits(self) -> u32 {
        match self {
            Mode::Low => 1,
            Mode::Mid => 2,
            Mode::High => 3,
        }
    }

    /// Bits in one frame before byte alignment.
    pub fn frame_bits(self) -> usize {
        let sub = PITCH_BITS + GAIN3_BITS + self.subframe_gain_bits()
            + self.subvector_bits() * self.subvectors() as u32;
        (LSP_BITS + FRAME_GAIN_BITS) as usize + SUBFRAMES * sub as usize
    }

    /// Bytes in one frame after zero-padding to a byte boundary.
    pub fn frame_bytes(self) -> usize {
        self.frame_bits().div_ceil(8)
    }

    /// Bit rate in bits per second, before byte alignment.
    pub fn bitrate(self) -> f64 {
        self.frame_bits() as f64 * 50.0
    }

    pub fn id(self) -> u8 {
        match self {
            Mode::Low => 0,
            Mode::Mid => 1,
            Mode::High => 2,
        }
    }

    pub fn from_id(id: u8) -> Result<Self> {
        match id {
            0 => Ok(Mode::Low),
            1 => Ok(Mode::Mid),
            2 => Ok(Mode::High),
            _ => Err(Error::UnsupportedFormat(format!("unknown mode byte {id}"))),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Low => "low",
            Mode::Mid => "mid",
            Mode::High => "high",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "low" => Ok(Mode::Low),
            "mid" => Ok(Mode::Mid),
            "high" => Ok(Mode::High),
            _ => Err(Error::invalid(format!("unknown mode '{s}'"))),
        }
    }
}

/// Encoder settings.
#[derive(Debug, Clone, PartialEq)]
pub struct EncoderConfig {
    pub mode: Mode,
    pub weighting: WeightingMode,
    pub complexity: ComplexityMode,
    pub psy: PsyConfig,
    /// Positive factor applied to every weighting filter. Selections do not
    /// depend on it; it exists to check exactly that.
    pub weighting_gain: f64,
}

impl Default for EncoderConfig {
    fn default() -> Self {
        Self {
            mode: Mode::High,
            weighting: WeightingMode::reference(),
            complexity: ComplexityMode::Full,
            psy: PsyConfig::default(),
            weighting_gain: 1.0,
        }
    }
}

impl EncoderConfig {
    pub fn new(mode: Mode, weighting: WeightingMode, complexity: ComplexityMode) -> Self {
        Self {
            mode,
            weighting,
            complexity,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let WeightingMode::Gamma { gamma1, gamma2 } = self.weighting {
            WeightingMode::gamma(gamma1, gamma2)?;
        }
        if !(self.weighting_gain > 0.0 && self.weighting_gain.is_finite()) {
            return Err(Error::invalid("weighting_gain must be positive"));
        }
        self.psy.validate()
    }
}
