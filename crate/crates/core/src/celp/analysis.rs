//! Open-loop frame analysis: LPC, LSP quantization, frame gain, pitch
//! estimate and (for the masking backend) the noise mask.

use super::quant::{dequantize_frame_gain, dequantize_lsp, quantize_frame_gain, quantize_lsp};
use super::{
    EncoderConfig, FRAME_LEN, LOOKAHEAD, LPC_ORDER, N_FFT, PITCH_MAX, PITCH_MIN, SUBFRAMES,
};
use crate::dsp::{
    asymmetric_window, autocorrelate, interpolate_lsp, lag_window, levinson_durbin, lpc_to_lsp,
    lsp_to_lpc, power_spectrum, LpcFilter, LspVector, Spectrum, SAMPLE_RATE,
};
use crate::error::{Error, Result};
use crate::psy::{noise_mask_stages, MaskingCurve, NoiseMaskStages};
use crate::weighting::WeightingContext;

const LAG_WINDOW_HZ: f64 = 60.0;
const WHITE_NOISE_CORRECTION: f64 = 1e-4;

/// Everything the encoder derives from one frame before the closed-loop search.
#[derive(Debug, Clone)]
pub struct FrameAnalysis {
    /// Unquantized `A(z)` of this frame.
    pub lpc: LpcFilter,
    pub lsp: LspVector,
    pub lsp_indices: [u8; 10],
    pub quantized_lsp: LspVector,
    /// LSP conversion failed and the previous frame's LSPs were reused.
    pub lsp_fallback: bool,
    /// RMS of the LPC residual over the frame.
    pub frame_gain: f64,
    pub frame_gain_index: u8,
    pub open_loop_pitch: usize,
    /// LPC residual of the 160 coded samples.
    pub residual: Vec<f64>,
    pub spectrum: Spectrum,
    /// Noise-mask stages of this frame, when computed.
    pub mask_stages: Option<NoiseMaskStages>,
    pub weighting: WeightingContext,
}

impl FrameAnalysis {
    pub fn mask(&self) -> Option<&MaskingCurve> {
        self.mask_stages.as_ref().map(|s| &s.mask)
    }
}

/// Stateful per-stream analysis (previous LSPs, mask and residual history).
#[derive(Debug, Clone)]
pub struct FrameAnalyzer {
    cfg: EncoderConfig,
    always_mask: bool,
    window: Vec<f64>,
    lag_window: Vec<f64>,
    prev_lsp: LspVector,
    prev_indices: [u8; 10],
    prev_qlsp: LspVector,
    prev_mask: Option<MaskingCurve>,
    input_history: Vec<f64>,
    residual_history: Vec<f64>,
}

impl FrameAnalyzer {
    pub fn new(cfg: &EncoderConfig) -> Result<Self> {
        cfg.validate()?;
        let uniform = LspVector::uniform(LPC_ORDER);
        let prev_indices = quantize_lsp(&uniform)?;
        Ok(Self {
            cfg: cfg.clone(),
            always_mask: false,
            window: asymmetric_window(FRAME_LEN, LOOKAHEAD)?,
            lag_window: lag_window(LPC_ORDER, LAG_WINDOW_HZ, SAMPLE_RATE as f64),
            prev_lsp: uniform.clone(),
            prev_indices,
            prev_qlsp: uniform,
            prev_mask: None,
            input_history: vec![0.0; LPC_ORDER],
            residual_history: vec![0.0; PITCH_MAX],
        })
    }

    /// Computes the noise mask even when the weighting backend does not use it.
    pub fn with_mask(mut self) -> Self {
        self.always_mask = true;
        self
    }

    /// Analyzes `pcm`: 160 samples to code followed by 40 of lookahead.
    pub fn analyze(&mut self, pcm: &[f64]) -> Result<FrameAnalysis> {
        if pcm.len() != FRAME_LEN + LOOKAHEAD {
            return Err(Error::invalid(format!(
                "analysis needs {} samples, got {}",
                FRAME_LEN + LOOKAHEAD,
                pcm.len()
            )));
        }
        if pcm.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("non-finite input sample"));
        }
        let windowed: Vec<f64> = pcm.iter().zip(&self.window).map(|(x, w)| x * w).collect();
        let r = autocorrelate(&windowed, LPC_ORDER)?.conditioned(&self.lag_window, WHITE_NOISE_CORRECTION);
        let lpc = levinson_durbin(&r, LPC_ORDER)
            .map(|res| res.filter)
            .unwrap_or_else(|_| LpcFilter::flat(LPC_ORDER));

        let (lsp, lsp_indices, lsp_fallback) = match lpc_to_lsp(&lpc) {
            Ok(lsp) => {
                let idx = quantize_lsp(&lsp)?;
                (lsp, idx, false)
            }
            Err(_) => (self.prev_lsp.clone(), self.prev_indices, true),
        };
        let quantized_lsp = dequantize_lsp(&lsp_indices)?;

        let residual = self.residual(&lpc, &pcm[..FRAME_LEN]);
        let frame_gain =
            (residual.iter().map(|v| v * v).sum::<f64>() / FRAME_LEN as f64).sqrt();
        let frame_gain_index = quantize_frame_gain(frame_gain);

        let mut with_history = self.residual_history.clone();
        with_history.extend_from_slice(&residual);
        let open_loop_pitch = open_loop_pitch(&with_history, PITCH_MAX);

        let spectrum = power_spectrum(&windowed, N_FFT)?;
        let mask_stages = if self.cfg.weighting.is_psy() || self.always_mask {
            Some(noise_mask_stages(&spectrum, &self.cfg.psy)?)
        } else {
            None
        };
        let cur_mask = mask_stages.as_ref().map(|s| s.mask.clone());

        let sub_lpc = (0..SUBFRAMES)
            .map(|k| lsp_to_lpc(&interpolate_lsp(&self.prev_lsp, &lsp, k)))
            .collect();
        let sub_qlpc = subframe_synthesis_filters(&self.prev_qlsp, &quantized_lsp);
        let weighting = WeightingContext {
            lpc: sub_lpc,
            quantized_lpc: sub_qlpc,
            prev_mask: self.prev_mask.clone().or_else(|| cur_mask.clone()),
            cur_mask: cur_mask.clone(),
        };

        self.prev_lsp = lsp.clone();
        self.prev_indices = lsp_indices;
        self.prev_qlsp = quantized_lsp.clone();
        self.prev_mask = cur_mask;
        self.input_history
            .copy_from_slice(&pcm[FRAME_LEN - LPC_ORDER..FRAME_LEN]);
        self.residual_history = with_history[with_history.len() - PITCH_MAX..].to_vec();

        Ok(FrameAnalysis {
            lpc,
            lsp,
            lsp_indices,
            quantized_lsp,
            lsp_fallback,
            frame_gain,
            frame_gain_index,
            open_loop_pitch,
            residual,
            spectrum,
            mask_stages,
            weighting,
        })
    }

    /// `A(z)` applied to `frame` with the previous frame's tail as history.
    fn residual(&self, a: &LpcFilter, frame: &[f64]) -> Vec<f64> {
        fir_with_history(a, &self.input_history, frame)
    }
}

/// Dequantized frame gain of an analysis.
pub(crate) fn frame_gain_of(analysis: &FrameAnalysis) -> f64 {
    dequantize_frame_gain(analysis.frame_gain_index)
}

/// Interpolated quantized synthesis filters `Â_k(z)` for one frame.
pub(crate) fn subframe_synthesis_filters(prev: &LspVector, cur: &LspVector) -> Vec<LpcFilter> {
    (0..SUBFRAMES)
        .map(|k| lsp_to_lpc(&interpolate_lsp(prev, cur, k)))
        .collect()
}

/// `y[n] = sum_k a[k] x[n-k]`, reading `x[n-k]` for `n < k` from the end of
/// `history`.
pub(crate) fn fir_with_history(a: &LpcFilter, history: &[f64], x: &[f64]) -> Vec<f64> {
    let c = a.coeffs();
    (0..x.len())
        .map(|n| {
            c.iter()
                .enumerate()
                .map(|(k, &ck)| {
                    let v = if n >= k {
                        x[n - k]
                    } else {
                        let back = k - n;
                        if back <= history.len() {
                            history[history.len() - back]
                        } else {
                            0.0
                        }
                    };
                    ck * v
                })
                .sum()
        })
        .collect()
}

/// Lag in `[17, 144]` maximizing the normalized autocorrelation of
/// `signal[start..]` against its delayed copy. `signal[..start]` is history
/// and must hold at least 144 samples. Ties and silence give the lowest lag.
pub fn open_loop_pitch(signal: &[f64], start: usize) -> usize {
    assert!(start >= PITCH_MAX && start <= signal.len());
    let frame = &signal[start..];
    let energy: f64 = frame.iter().map(|v| v * v).sum();
    let mut best = (0.0, PITCH_MIN);
    for lag in PITCH_MIN..=PITCH_MAX {
        let delayed = &signal[start - lag..signal.len() - lag];
        let num: f64 = frame.iter().zip(delayed).map(|(a, b)| a * b).sum();
        let den = (energy * delayed.iter().map(|v| v * v).sum::<f64>()).sqrt();
        if den > 0.0 {
            let score = num / den;
            if score > best.0 {
                best = (score, lag);
            }
        }
    }
    best.1
}
