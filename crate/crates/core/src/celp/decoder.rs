use super::analysis::subframe_synthesis_filters;
use super::codebook::Codebooks;
use super::params::{FrameParams, SubframeParams};
use super::quant::{dequantize_frame_gain, dequantize_lsp, dequantize_subframe_gain};
use super::search::{adaptive_contribution, ExcitationMemory};
use super::{Mode, FRAME_LEN, LPC_ORDER, SUBFRAME_LEN};
use crate::dsp::{pole_zero_filter, FilterState, LpcFilter, LspVector};
use crate::error::{Error, Result};

/// Stateful frame decoder.
#[derive(Debug, Clone)]
pub struct Decoder {
    mode: Mode,
    books: Codebooks,
    pub(crate) memory: ExcitationMemory,
    pub(crate) synthesis_state: FilterState,
    prev_qlsp: LspVector,
}

impl Decoder {
    pub fn new(mode: Mode) -> Self {
        Self {
            mode,
            books: Codebooks::for_mode(mode),
            memory: ExcitationMemory::new(),
            synthesis_state: FilterState::new(LPC_ORDER),
            prev_qlsp: LspVector::uniform(LPC_ORDER),
        }
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn codebooks(&self) -> &Codebooks {
        &self.books
    }

    pub fn excitation_memory(&self) -> &ExcitationMemory {
        &self.memory
    }

    /// Back to the freshly constructed state.
    pub fn reset(&mut self) {
        self.memory.reset();
        self.synthesis_state.reset();
        self.prev_qlsp = LspVector::uniform(LPC_ORDER);
    }

    /// Synthesis filters `Â_k(z)` for a frame, advancing the LSP history.
    pub(crate) fn next_synthesis_filters(&mut self, indices: &[u8; 10]) -> Result<Vec<LpcFilter>> {
        let qlsp = dequantize_lsp(indices)?;
        let filters = subframe_synthesis_filters(&self.prev_qlsp, &qlsp);
        self.prev_qlsp = qlsp;
        Ok(filters)
    }

    /// Builds the excitation of one subframe, runs it through `1/Â(z)` and
    /// updates the memories. Returns `(excitation, output)`.
    pub(crate) fn synthesize_subframe(
        &mut self,
        synthesis: &LpcFilter,
        sf: &SubframeParams,
        frame_gain: f64,
    ) -> Result<(Vec<f64>, Vec<f64>)> {
        let gains = self
            .books
            .gain3
            .get(sf.gain3_index as usize)
            .ok_or_else(|| Error::invalid("pitch gain index out of range"))?;
        let mut e = adaptive_contribution(&self.memory, sf.pitch as usize, gains);
        let g = frame_gain * dequantize_subframe_gain(sf.subframe_gain_index, self.mode.subframe_gain_bits());
        let dim = self.books.innovation.dim();
        for (pos, &ix) in sf.innovation.iter().enumerate() {
            let cw = self.books.innovation.vector(ix as usize);
            for (v, c) in e[pos * dim..(pos + 1) * dim].iter_mut().zip(cw) {
                *v += g * c;
            }
        }
        let out = pole_zero_filter(&e, &[1.0], synthesis.coeffs(), &mut self.synthesis_state)?;
        self.memory.push(&e);
        Ok((e, out))
    }

    /// Decodes one frame to 160 samples.
    pub fn decode_frame(&mut self, params: &FrameParams) -> Result<Vec<f64>> {
        params.validate(self.mode)?;
        let filters = self.next_synthesis_filters(&params.lsp_indices)?;
        let frame_gain = dequantize_frame_gain(params.frame_gain_index);
        let mut pcm = Vec::with_capacity(FRAME_LEN);
        for (sf, a) in params.subframes.iter().zip(&filters) {
            let (_, out) = self.synthesize_subframe(a, sf, frame_gain)?;
            debug_assert_eq!(out.len(), SUBFRAME_LEN);
            pcm.extend(out);
        }
        Ok(pcm)
    }
}

/// Decodes a whole parameter stream with a fresh decoder.
pub fn decode_stream(frames: &[FrameParams], mode: Mode) -> Result<Vec<f64>> {
    let mut dec = Decoder::new(mode);
    let mut out = Vec::with_capacity(frames.len() * FRAME_LEN);
    for f in frames {
        out.extend(dec.decode_frame(f)?);
    }
    Ok(out)
}
