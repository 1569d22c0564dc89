//! Objective quality measures.

use crate::celp::{
    pad_signal, EncoderConfig, FrameAnalyzer, FRAME_LEN, LOOKAHEAD, N_FFT, SUBFRAME_LEN,
};
use crate::dsp::power_spectrum;
use crate::error::{Error, Result};
use crate::weighting::{build_frame_weighting, WeightingFilter};

pub const SEGMENT_LEN: usize = 80;
pub const SEG_SNR_MIN_DB: f64 = -10.0;
pub const SEG_SNR_MAX_DB: f64 = 35.0;
const SILENT_SEGMENT_ENERGY: f64 = 1e-10;

/// Mean over 80-sample segments of `10 log10(sum ref^2 / sum (ref - deg)^2)`,
/// each clamped to `[-10, 35]` dB. Segments whose reference energy is below
/// `1e-10` are skipped, as is a trailing partial segment.
pub fn segmental_snr(reference: &[f64], degraded: &[f64]) -> Result<f64> {
    if reference.len() != degraded.len() {
        return Err(Error::invalid(format!(
            "length mismatch: {} vs {}",
            reference.len(),
            degraded.len()
        )));
    }
    let mut sum = 0.0;
    let mut count = 0usize;
    for (r, d) in reference
        .chunks_exact(SEGMENT_LEN)
        .zip(degraded.chunks_exact(SEGMENT_LEN))
    {
        let signal: f64 = r.iter().map(|v| v * v).sum();
        if signal < SILENT_SEGMENT_ENERGY {
            continue;
        }
        let noise: f64 = r.iter().zip(d).map(|(a, b)| (a - b).powi(2)).sum();
        let snr = if noise > 0.0 {
            10.0 * (signal / noise).log10()
        } else {
            SEG_SNR_MAX_DB
        };
        sum += snr.clamp(SEG_SNR_MIN_DB, SEG_SNR_MAX_DB);
        count += 1;
    }
    if count == 0 {
        return Err(Error::Degenerate("reference has no active segments".into()));
    }
    Ok(sum / count as f64)
}

/// The part of a decoder output that lines up with an input of `len`
/// samples, after removing the codec delay.
pub fn aligned(decoded: &[f64], len: usize) -> Result<&[f64]> {
    decoded
        .get(LOOKAHEAD..LOOKAHEAD + len)
        .ok_or_else(|| Error::invalid("decoded signal shorter than input plus delay"))
}

/// Segmental SNR of a decoder output against its (undelayed) input.
pub fn codec_segmental_snr(input: &[f64], decoded: &[f64]) -> Result<f64> {
    segmental_snr(input, aligned(decoded, input.len())?)
}

/// Per-subframe weighting filters the encoder would use on `input` under
/// `cfg`, in the delayed timeline of the decoder output.
pub fn weighting_track(input: &[f64], cfg: &EncoderConfig) -> Result<Vec<WeightingFilter>> {
    let padded = pad_signal(input);
    let frames = (padded.len() - LOOKAHEAD) / FRAME_LEN;
    let mut analyzer = FrameAnalyzer::new(cfg)?;
    let mut out = Vec::with_capacity(frames * 4);
    for t in 0..frames {
        let fa = analyzer.analyze(&padded[t * FRAME_LEN..t * FRAME_LEN + FRAME_LEN + LOOKAHEAD])?;
        out.extend(build_frame_weighting(&fa.weighting, cfg.weighting, cfg.complexity)?);
    }
    Ok(out)
}

fn apply_track(track: &[WeightingFilter], x: &[f64]) -> Result<Vec<f64>> {
    let mut state = track
        .first()
        .map(|w| w.new_state())
        .ok_or_else(|| Error::invalid("empty weighting track"))?;
    let mut out = Vec::with_capacity(x.len());
    for (w, chunk) in track.iter().zip(x.chunks(SUBFRAME_LEN)) {
        out.extend(w.apply(chunk, &mut state)?);
    }
    Ok(out)
}

/// Segmental SNR in the domain weighted by the filters of `measure`: both
/// the reference and the decoder output go through the same time-varying
/// `W(z)` computed from the input.
pub fn weighted_segmental_snr(
    input: &[f64],
    decoded: &[f64],
    measure: &EncoderConfig,
) -> Result<f64> {
    let track = weighting_track(input, measure)?;
    let n = track.len() * SUBFRAME_LEN;
    let reference = pad_signal(input);
    if decoded.len() < n {
        return Err(Error::invalid("decoded signal shorter than the encoded frames"));
    }
    let wr = apply_track(&track, &reference[..n])?;
    let wd = apply_track(&track, &decoded[..n])?;
    segmental_snr(&wr, &wd)
}

/// Mean Pearson correlation, over active frames, between the coding-noise
/// spectrum and the noise mask (both in dB) on 300-3400 Hz.
pub fn noise_mask_correlation(
    input: &[f64],
    decoded: &[f64],
    cfg: &EncoderConfig,
) -> Result<f64> {
    let padded = pad_signal(input);
    let frames = (padded.len() - LOOKAHEAD) / FRAME_LEN;
    if decoded.len() < frames * FRAME_LEN {
        return Err(Error::invalid("decoded signal shorter than the encoded frames"));
    }
    let mut analyzer = FrameAnalyzer::new(cfg)?.with_mask();
    let window = crate::dsp::asymmetric_window(FRAME_LEN, LOOKAHEAD)?;
    let lo = (300.0 * N_FFT as f64 / 8000.0).ceil() as usize;
    let hi = (3400.0 * N_FFT as f64 / 8000.0).floor() as usize;
    let mut total = 0.0;
    let mut count = 0usize;
    for t in 0..frames {
        let span = t * FRAME_LEN..t * FRAME_LEN + FRAME_LEN + LOOKAHEAD;
        let fa = analyzer.analyze(&padded[span.clone()])?;
        let signal: f64 = padded[span.start..span.start + FRAME_LEN].iter().map(|v| v * v).sum();
        if signal < SILENT_SEGMENT_ENERGY * 2.0 {
            continue;
        }
        // noise over the same window the mask was computed on; the lookahead
        // tail exists in the decoder output except for the final frame
        let end = span.end.min(decoded.len());
        let noise: Vec<f64> = (span.start..span.end)
            .zip(&window)
            .map(|(n, w)| if n < end { (padded[n] - decoded[n]) * w } else { 0.0 })
            .collect();
        let spec = power_spectrum(&noise, N_FFT)?;
        let mask = fa.mask().expect("analyzer computes masks");
        let a: Vec<f64> = spec.bins()[lo..=hi].iter().map(|p| 10.0 * p.max(1e-20).log10()).collect();
        let b = &mask.levels_db()[lo..=hi];
        if let Some(r) = pearson(&a, b) {
            total += r;
            count += 1;
        }
    }
    if count == 0 {
        return Err(Error::Degenerate("no active frames".into()));
    }
    Ok(total / count as f64)
}

fn pearson(a: &[f64], b: &[f64]) -> Option<f64> {
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        sab += (x - ma) * (y - mb);
        saa += (x - ma).powi(2);
        sbb += (y - mb).powi(2);
    }
    let den = (saa * sbb).sqrt();
    (den > 0.0).then(|| sab / den)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_signals_hit_the_ceiling() {
        let x: Vec<f64> = (0..400).map(|i| (i as f64 * 0.1).sin()).collect();
        assert_eq!(segmental_snr(&x, &x).unwrap(), SEG_SNR_MAX_DB);
    }

    #[test]
    fn zero_output_is_zero_db() {
        let x: Vec<f64> = (0..400).map(|i| (i as f64 * 0.1).sin() + 0.5).collect();
        let snr = segmental_snr(&x, &vec![0.0; 400]).unwrap();
        assert!(snr.abs() < 1e-12);
    }

    #[test]
    fn two_segment_hand_computation() {
        // segment 1: ref all 1, error all 0.1 -> 80 / 0.8 -> 20 dB
        // segment 2: ref all 2, error all 2   -> 320 / 320 -> 0 dB
        let mut r = vec![1.0; 80];
        r.extend(vec![2.0; 80]);
        let mut d = vec![0.9; 80];
        d.extend(vec![0.0; 80]);
        let snr = segmental_snr(&r, &d).unwrap();
        assert!((snr - 10.0).abs() < 1e-9, "{snr}");
    }

    #[test]
    fn silent_segments_are_skipped_and_clamped() {
        let mut r = vec![0.0; 80];
        r.extend(vec![1.0; 80]);
        let mut d = vec![5.0; 80];
        d.extend(vec![-3.0; 80]);
        // active segment: 80 / 1280 -> -12 dB, clamped to -10
        assert_eq!(segmental_snr(&r, &d).unwrap(), SEG_SNR_MIN_DB);
        assert!(segmental_snr(&[0.0; 160], &[0.0; 160]).is_err());
        assert!(segmental_snr(&[0.0; 160], &[0.0; 80]).is_err());
    }
}
