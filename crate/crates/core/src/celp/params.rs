use super::quant::LspQuantizer;
use super::{Mode, GAIN3_BITS, PITCH_MAX, PITCH_MIN, SUBFRAMES};
use crate::error::{Error, Result};

/// One subframe's quantized parameters.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SubframeParams {
    /// Integer pitch lag `T` in `[17, 144]`.
    pub pitch: u16,
    pub gain3_index: u8,
    pub subframe_gain_index: u8,
    /// One codebook index per sub-vector, in time order.
    pub innovation: Vec<u16>,
}

/// One frame's quantized parameters.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FrameParams {
    pub lsp_indices: [u8; 10],
    pub frame_gain_index: u8,
    pub subframes: Vec<SubframeParams>,
}

impl FrameParams {
    /// Checks every index against the field widths of `mode`.
    pub fn validate(&self, mode: Mode) -> Result<()> {
        for (i, &ix) in self.lsp_indices.iter().enumerate() {
            if ix as usize >= LspQuantizer::levels(i) {
                return Err(Error::invalid(format!("LSP index {ix} out of range at {i}")));
            }
        }
        if self.frame_gain_index >= 32 {
            return Err(Error::invalid("frame gain index out of range"));
        }
        if self.subframes.len() != SUBFRAMES {
            return Err(Error::invalid(format!(
                "expected {SUBFRAMES} subframes, got {}",
                self.subframes.len()
            )));
        }
        for sf in &self.subframes {
            if !(PITCH_MIN..=PITCH_MAX).contains(&(sf.pitch as usize)) {
                return Err(Error::invalid(format!("pitch {} outside [17, 144]", sf.pitch)));
            }
            if sf.gain3_index as u32 >= 1 << GAIN3_BITS {
                return Err(Error::invalid("pitch gain index out of range"));
            }
            if sf.subframe_gain_index as u32 >= 1 << mode.subframe_gain_bits() {
                return Err(Error::invalid("subframe gain index out of range"));
            }
            if sf.innovation.len() != mode.subvectors() {
                return Err(Error::invalid(format!(
                    "expected {} innovation indices, got {}",
                    mode.subvectors(),
                    sf.innovation.len()
                )));
            }
            if sf.innovation.iter().any(|&i| i as u32 >= 1 << mode.subvector_bits()) {
                return Err(Error::invalid("innovation index out of range"));
            }
        }
        Ok(())
    }
}
