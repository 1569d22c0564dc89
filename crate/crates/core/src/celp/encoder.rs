use super::analysis::{fir_with_history, frame_gain_of, FrameAnalysis, FrameAnalyzer};
use super::decoder::Decoder;
use super::params::{FrameParams, SubframeParams};
use super::quant::{dequantize_subframe_gain, quantize_subframe_gain};
use super::search::{adaptive_search, fixed_search, weighted_synthesis_response};
use super::{
    EncoderConfig, FRAME_LEN, LOOKAHEAD, LPC_ORDER, PITCH_MAX, PITCH_MIN, PITCH_SEARCH_RADIUS,
    SUBFRAME_LEN,
};
use crate::dsp::{pole_zero_filter, FilterState};
use crate::error::{Error, Result};
use crate::weighting::{build_frame_weighting, WeightingFilter};

/// Output of [`Encoder::encode_frame`].
#[derive(Debug, Clone)]
pub struct EncodedFrame {
    pub params: FrameParams,
    /// The encoder's local decoder output for the frame.
    pub reconstruction: Vec<f64>,
    /// Excitation of the frame, as the decoder will rebuild it.
    pub excitation: Vec<f64>,
    pub analysis: FrameAnalysis,
    pub weighting: Vec<WeightingFilter>,
}

/// Analysis-by-synthesis frame encoder.
#[derive(Debug, Clone)]
pub struct Encoder {
    cfg: EncoderConfig,
    analyzer: FrameAnalyzer,
    local: Decoder,
    weighted_input_state: FilterState,
    weighted_output_state: FilterState,
    input_history: Vec<f64>,
}

impl Encoder {
    pub fn new(cfg: &EncoderConfig) -> Result<Self> {
        Ok(Self {
            cfg: cfg.clone(),
            analyzer: FrameAnalyzer::new(cfg)?,
            local: Decoder::new(cfg.mode),
            weighted_input_state: FilterState::new(LPC_ORDER),
            weighted_output_state: FilterState::new(LPC_ORDER),
            input_history: vec![0.0; LPC_ORDER],
        })
    }

    pub fn config(&self) -> &EncoderConfig {
        &self.cfg
    }

    /// Encodes `pcm`: 160 samples to code followed by 40 of lookahead.
    pub fn encode_frame(&mut self, pcm: &[f64]) -> Result<EncodedFrame> {
        if pcm.len() != FRAME_LEN + LOOKAHEAD {
            return Err(Error::invalid(format!(
                "encoder needs {} samples, got {}",
                FRAME_LEN + LOOKAHEAD,
                pcm.len()
            )));
        }
        let analysis = self.analyzer.analyze(pcm)?;
        let mut weighting =
            build_frame_weighting(&analysis.weighting, self.cfg.weighting, self.cfg.complexity)?;
        if self.cfg.weighting_gain != 1.0 {
            weighting = weighting
                .into_iter()
                .map(|w| w.with_gain(self.cfg.weighting_gain))
                .collect::<Result<_>>()?;
        }
        // The local decoder derives Â_k from the indices exactly as the far end.
        let synthesis = self.local.next_synthesis_filters(&analysis.lsp_indices)?;
        let frame_gain = frame_gain_of(&analysis);
        let mode = self.cfg.mode;
        let books = self.local.codebooks().clone();

        let lo = analysis.open_loop_pitch.saturating_sub(PITCH_SEARCH_RADIUS).max(PITCH_MIN);
        let hi = (analysis.open_loop_pitch + PITCH_SEARCH_RADIUS).min(PITCH_MAX);

        let mut subframes = Vec::with_capacity(synthesis.len());
        let mut reconstruction = Vec::with_capacity(FRAME_LEN);
        let mut excitation = Vec::with_capacity(FRAME_LEN);
        for (k, (a_hat, w)) in synthesis.iter().zip(&weighting).enumerate() {
            let s = &pcm[k * SUBFRAME_LEN..(k + 1) * SUBFRAME_LEN];
            let h = weighted_synthesis_response(w, a_hat, SUBFRAME_LEN)?;
            let sw = w.apply(s, &mut self.weighted_input_state)?;

            let mut syn = self.local.synthesis_state.clone();
            let ringing = pole_zero_filter(&[0.0; SUBFRAME_LEN], &[1.0], a_hat.coeffs(), &mut syn)?;
            let zir = w.apply(&ringing, &mut self.weighted_output_state.clone())?;
            let target: Vec<f64> = sw.iter().zip(&zir).map(|(a, b)| a - b).collect();

            let adaptive = adaptive_search(&target, &self.local.memory, &h, lo..=hi, &books.gain3)?;
            let target2: Vec<f64> = target
                .iter()
                .zip(&adaptive.filtered)
                .map(|(t, y)| t - y)
                .collect();

            // Open-loop innovation gain: LPC residual left after the pitch
            // contribution, relative to the frame gain.
            let residual = fir_with_history(a_hat, &self.input_history, s);
            let ideal_ms = residual
                .iter()
                .zip(&adaptive.excitation)
                .map(|(r, e)| (r - e).powi(2))
                .sum::<f64>()
                / SUBFRAME_LEN as f64;
            let bits = mode.subframe_gain_bits();
            let ratio_db = if frame_gain > 0.0 && ideal_ms > 0.0 {
                10.0 * ideal_ms.log10() - 20.0 * frame_gain.log10()
            } else {
                0.0
            };
            let subframe_gain_index = quantize_subframe_gain(ratio_db, bits);
            let gain = frame_gain * dequantize_subframe_gain(subframe_gain_index, bits);

            let fixed = fixed_search(&target2, &h, &books.innovation, gain)?;
            let sf = SubframeParams {
                pitch: adaptive.lag as u16,
                gain3_index: adaptive.gain_index as u8,
                subframe_gain_index,
                innovation: fixed.indices.iter().map(|&i| i as u16).collect(),
            };
            let (e, out) = self.local.synthesize_subframe(a_hat, &sf, frame_gain)?;
            w.apply(&out, &mut self.weighted_output_state)?;

            self.input_history.copy_from_slice(&s[SUBFRAME_LEN - LPC_ORDER..]);
            subframes.push(sf);
            excitation.extend(e);
            reconstruction.extend(out);
        }
        let params = FrameParams {
            lsp_indices: analysis.lsp_indices,
            frame_gain_index: analysis.frame_gain_index,
            subframes,
        };
        Ok(EncodedFrame {
            params,
            reconstruction,
            excitation,
            analysis,
            weighting,
        })
    }
}

/// The stream as the encoder frames it: `CODEC_DELAY` zeros in front, zeros
/// behind up to whole frames plus lookahead.
pub fn pad_signal(x: &[f64]) -> Vec<f64> {
    let frames = (x.len() + LOOKAHEAD).div_ceil(FRAME_LEN);
    let mut padded = vec![0.0; LOOKAHEAD];
    padded.extend_from_slice(x);
    padded.resize(frames * FRAME_LEN + LOOKAHEAD, 0.0);
    padded
}

/// Encodes a whole signal. Decoding the result yields the input delayed by
/// `CODEC_DELAY` samples.
pub fn encode_signal(x: &[f64], cfg: &EncoderConfig) -> Result<Vec<FrameParams>> {
    let padded = pad_signal(x);
    let mut enc = Encoder::new(cfg)?;
    let frames = (padded.len() - LOOKAHEAD) / FRAME_LEN;
    (0..frames)
        .map(|t| {
            enc.encode_frame(&padded[t * FRAME_LEN..t * FRAME_LEN + FRAME_LEN + LOOKAHEAD])
                .map(|f| f.params)
        })
        .collect()
}
