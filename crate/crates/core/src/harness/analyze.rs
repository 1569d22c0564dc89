//! Per-frame spectral curves: input spectrum, noise mask before and after
//! compression, and the noise shapes of both weighting rules.

use std::io::Write;

use crate::celp::{pad_signal, EncoderConfig, FrameAnalyzer, FRAME_LEN, LOOKAHEAD, N_FFT, SUBFRAMES};
use crate::dsp::SAMPLE_RATE;
use crate::error::{Error, Result};
use crate::weighting::{build_weighting, gamma_weighting, WeightingMode};

pub const CSV_HEADER: &str = "frequency_hz,input_spectrum_db,mask_uncompressed_db,mask_db,gamma_noise_shape_db,psy_noise_shape_db";
pub const CURVE_BINS: usize = N_FFT / 2 + 1;

/// All curves of one frame on the 129-bin grid.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameCurves {
    pub frequency_hz: Vec<f64>,
    pub input_spectrum_db: Vec<f64>,
    pub mask_uncompressed_db: Vec<f64>,
    pub mask_db: Vec<f64>,
    /// `|A(z/gamma2) / A(z/gamma1)|` in dB.
    pub gamma_noise_shape_db: Vec<f64>,
    /// `|W_n / W_d|` in dB for the last subframe of the frame.
    pub psy_noise_shape_db: Vec<f64>,
    /// The frame's LPC envelope `1 / |A|` in dB.
    pub lpc_envelope_db: Vec<f64>,
}

/// Number of frames the encoder produces for `len` input samples.
pub fn frame_count(len: usize) -> usize {
    (pad_signal(&vec![0.0; len]).len() - LOOKAHEAD) / FRAME_LEN
}

/// Curves for frame `frame` of `input` (frames as the encoder sees them).
///
/// The gamma rule uses the gammas of `cfg` (the reference pair when `cfg`
/// selects the masking backend); the masking rule uses `cfg`'s complexity.
pub fn analyze_frame(input: &[f64], frame: usize, cfg: &EncoderConfig) -> Result<FrameCurves> {
    let frames = frame_count(input.len());
    if frame >= frames {
        return Err(Error::invalid(format!("frame {frame} out of range (signal has {frames})")));
    }
    let (gamma1, gamma2) = match cfg.weighting {
        WeightingMode::Gamma { gamma1, gamma2 } => (gamma1, gamma2),
        WeightingMode::Psy => (WeightingMode::REFERENCE_GAMMA1, WeightingMode::REFERENCE_GAMMA2),
    };
    let psy_cfg = EncoderConfig {
        weighting: WeightingMode::Psy,
        ..cfg.clone()
    };
    let padded = pad_signal(input);
    let mut analyzer = FrameAnalyzer::new(&psy_cfg)?;
    let mut fa = None;
    for t in 0..=frame {
        fa = Some(analyzer.analyze(&padded[t * FRAME_LEN..t * FRAME_LEN + FRAME_LEN + LOOKAHEAD])?);
    }
    let fa = fa.expect("at least one frame analyzed");
    let stages = fa.mask_stages.as_ref().expect("masking analysis computes the mask");
    let gamma = gamma_weighting(&fa.lpc, gamma1, gamma2)?;
    let psy = build_weighting(&fa.weighting, WeightingMode::Psy, cfg.complexity, SUBFRAMES - 1)?;
    Ok(FrameCurves {
        frequency_hz: (0..CURVE_BINS).map(|k| fa.spectrum.bin_hz(k, SAMPLE_RATE as f64)).collect(),
        input_spectrum_db: stages.log_spectrum.clone(),
        mask_uncompressed_db: stages.uncompressed.clone(),
        mask_db: stages.mask.levels_db().to_vec(),
        gamma_noise_shape_db: gamma.noise_shape_db(CURVE_BINS),
        psy_noise_shape_db: psy.noise_shape_db(CURVE_BINS),
        lpc_envelope_db: fa.lpc.power_response(CURVE_BINS).iter().map(|p| -10.0 * p.log10()).collect(),
    })
}

impl FrameCurves {
    pub fn write_csv<W: Write>(&self, out: &mut W) -> Result<()> {
        writeln!(out, "{CSV_HEADER}")?;
        for k in 0..self.frequency_hz.len() {
            writeln!(
                out,
                "{:.3},{:.4},{:.4},{:.4},{:.4},{:.4}",
                self.frequency_hz[k],
                self.input_spectrum_db[k],
                self.mask_uncompressed_db[k],
                self.mask_db[k],
                self.gamma_noise_shape_db[k],
                self.psy_noise_shape_db[k]
            )?;
        }
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut out = Vec::new();
        self.write_csv(&mut out).expect("writing to memory");
        String::from_utf8(out).expect("ascii output")
    }

    /// Indices of the bins inside `[lo_hz, hi_hz]`.
    pub fn band(&self, lo_hz: f64, hi_hz: f64) -> std::ops::RangeInclusive<usize> {
        let lo = self.frequency_hz.iter().position(|&f| f >= lo_hz).unwrap_or(0);
        let hi = self.frequency_hz.iter().rposition(|&f| f <= hi_hz).unwrap_or(0);
        lo..=hi
    }
}
