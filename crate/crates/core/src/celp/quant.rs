//! Scalar quantizers for LSPs and gains.

use std::f64::consts::PI;

use crate::dsp::{LspVector, MIN_LSP_GAP};
use crate::error::{Error, Result};

/// Bits per LSP position, low to high frequency. Sums to [`LSP_BITS`].
const LSP_POSITION_BITS: [u32; 10] = [4, 4, 4, 3, 3, 3, 3, 2, 2, 2];
pub const LSP_BITS: u32 = 30;
/// Each position's grid spans `centre +- LSP_SPAN * pi / 11`.
const LSP_SPAN: f64 = 1.2;
const LSP_EDGE: f64 = 0.02;

/// Per-position uniform grids around the evenly spaced LSPs.
#[derive(Debug, Clone, PartialEq)]
pub struct LspQuantizer {
    lo: [f64; 10],
    step: [f64; 10],
}

impl Default for LspQuantizer {
    fn default() -> Self {
        let spacing = PI / 11.0;
        let mut lo = [0.0; 10];
        let mut step = [0.0; 10];
        for i in 0..10 {
            let centre = (i + 1) as f64 * spacing;
            let a = (centre - LSP_SPAN * spacing).max(LSP_EDGE);
            let b = (centre + LSP_SPAN * spacing).min(PI - LSP_EDGE);
            lo[i] = a;
            step[i] = (b - a) / ((1u32 << LSP_POSITION_BITS[i]) - 1) as f64;
        }
        Self { lo, step }
    }
}

impl LspQuantizer {
    pub fn bits(position: usize) -> u32 {
        LSP_POSITION_BITS[position]
    }

    pub fn levels(position: usize) -> usize {
        1 << LSP_POSITION_BITS[position]
    }

    pub fn step(&self, position: usize) -> f64 {
        self.step[position]
    }

    pub fn range(&self, position: usize) -> (f64, f64) {
        let top = self.lo[position] + self.step[position] * (Self::levels(position) - 1) as f64;
        (self.lo[position], top)
    }

    pub fn quantize_scalar(&self, position: usize, value: f64) -> u8 {
        let max = (Self::levels(position) - 1) as f64;
        ((value - self.lo[position]) / self.step[position]).round().clamp(0.0, max) as u8
    }

    pub fn level(&self, position: usize, index: u8) -> f64 {
        self.lo[position] + self.step[position] * index as f64
    }
}

pub fn quantize_lsp(lsp: &LspVector) -> Result<[u8; 10]> {
    if lsp.order() != 10 {
        return Err(Error::invalid("LSP quantizer expects order 10"));
    }
    let q = LspQuantizer::default();
    let mut idx = [0u8; 10];
    for (i, &f) in lsp.freqs().iter().enumerate() {
        idx[i] = q.quantize_scalar(i, f);
    }
    Ok(idx)
}

/// Grid values for `indices`, sorted and spaced by at least `MIN_LSP_GAP`.
pub fn dequantize_lsp(indices: &[u8; 10]) -> Result<LspVector> {
    let q = LspQuantizer::default();
    for (i, &ix) in indices.iter().enumerate() {
        if ix as usize >= LspQuantizer::levels(i) {
            return Err(Error::invalid(format!("LSP index {ix} out of range at {i}")));
        }
    }
    let freqs = indices.iter().enumerate().map(|(i, &ix)| q.level(i, ix)).collect();
    LspVector::from_unordered(freqs, MIN_LSP_GAP)
}

pub const FRAME_GAIN_BITS: u32 = 5;
/// Level of frame-gain index 1, in dB re unit RMS. Index 0 means silence.
pub const FRAME_GAIN_MIN_DB: f64 = -62.0;
pub const FRAME_GAIN_STEP_DB: f64 = 2.0;
/// Subframe corrections cover `+-SUBFRAME_GAIN_RANGE_DB`.
pub const SUBFRAME_GAIN_RANGE_DB: f64 = 9.0;

fn to_db(g: f64) -> f64 {
    20.0 * g.log10()
}

pub fn quantize_frame_gain(g: f64) -> u8 {
    let top = (1u32 << FRAME_GAIN_BITS) - 1;
    if !(g > 0.0) {
        return 0;
    }
    let db = to_db(g);
    // More than a step below the lowest level counts as silence.
    if db < FRAME_GAIN_MIN_DB - FRAME_GAIN_STEP_DB {
        return 0;
    }
    let i = ((db - FRAME_GAIN_MIN_DB) / FRAME_GAIN_STEP_DB).round();
    (i.clamp(0.0, (top - 1) as f64) as u8) + 1
}

pub fn dequantize_frame_gain(index: u8) -> f64 {
    if index == 0 {
        return 0.0;
    }
    10f64.powf((FRAME_GAIN_MIN_DB + FRAME_GAIN_STEP_DB * (index - 1) as f64) / 20.0)
}

fn subframe_levels(bits: u32) -> usize {
    1 << bits
}

/// Cell-centre level `j` of a `bits`-bit correction, in dB.
fn subframe_level_db(bits: u32, j: usize) -> f64 {
    let n = subframe_levels(bits) as f64;
    let width = 2.0 * SUBFRAME_GAIN_RANGE_DB / n;
    -SUBFRAME_GAIN_RANGE_DB + (j as f64 + 0.5) * width
}

/// Nearest correction index for a gain ratio given in dB.
pub fn quantize_subframe_gain(ratio_db: f64, bits: u32) -> u8 {
    let n = subframe_levels(bits);
    let width = 2.0 * SUBFRAME_GAIN_RANGE_DB / n as f64;
    let j = ((ratio_db + SUBFRAME_GAIN_RANGE_DB) / width - 0.5).round();
    if j.is_nan() {
        return ((n - 1) / 2) as u8;
    }
    j.clamp(0.0, (n - 1) as f64) as u8
}

/// Linear gain of correction `index`.
pub fn dequantize_subframe_gain(index: u8, bits: u32) -> f64 {
    10f64.powf(subframe_level_db(bits, index as usize) / 20.0)
}

/// Frame gain index and one correction index per subframe.
///
/// `subframe_rms` holds the innovation RMS each subframe wants; corrections
/// are taken relative to the dequantized frame gain.
pub fn quantize_gains(g_frame: f64, subframe_rms: &[f64], bits: u32) -> (u8, Vec<u8>) {
    let gi = quantize_frame_gain(g_frame);
    let gq = dequantize_frame_gain(gi);
    let subs = subframe_rms
        .iter()
        .map(|&r| {
            let ratio_db = if gq > 0.0 && r > 0.0 { to_db(r / gq) } else { 0.0 };
            quantize_subframe_gain(ratio_db, bits)
        })
        .collect();
    (gi, subs)
}
