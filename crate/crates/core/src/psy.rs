//! Noise-mask curve from one frame's power spectrum.
//!
//! The log spectrum is smoothed with a median follower and an envelope
//! follower over a sliding window of about one Bark. The envelope is pulled
//! down where it stands far above the median (tonal regions), biased by a
//! noise offset, and finally its dynamic range is compressed so the curve is
//! usable as a CELP noise-shaping target.

use serde::Deserialize;

use crate::dsp::{Spectrum, SAMPLE_RATE};
use crate::error::{Error, Result};

/// Tunables of the noise-mask computation.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PsyConfig {
    /// Half-width of the sliding window, in Bark.
    pub bark_halfwidth: f64,
    /// Fraction of the envelope-to-median distance removed from the envelope.
    pub tonality_alpha: f64,
    /// Flat bias added to the companded envelope, in dB.
    pub noise_offset_db: f64,
    /// Optional `(frequency_hz, offset_db)` breakpoints added on top of
    /// `noise_offset_db`, linearly interpolated and held flat past the ends.
    pub noise_offset_bands: Vec<(f64, f64)>,
    /// Exponent applied to the mask; scales dB deviations around the pivot.
    pub compress_exponent: f64,
    /// Lower clamp for the log spectrum, in dB.
    pub floor_db: f64,
}

impl Default for PsyConfig {
    fn default() -> Self {
        Self {
            bark_halfwidth: 0.5,
            tonality_alpha: 0.5,
            noise_offset_db: -2.0,
            noise_offset_bands: Vec::new(),
            compress_exponent: 0.6,
            floor_db: -100.0,
        }
    }
}

impl PsyConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.compress_exponent > 0.0 && self.compress_exponent <= 1.0) {
            return Err(Error::invalid("compress_exponent must lie in (0, 1]"));
        }
        if !(self.bark_halfwidth > 0.0) {
            return Err(Error::invalid("bark_halfwidth must be positive"));
        }
        if !(self.tonality_alpha >= 0.0) || !self.noise_offset_db.is_finite() {
            return Err(Error::invalid("tonality_alpha must be >= 0 and offsets finite"));
        }
        if !self.floor_db.is_finite() {
            return Err(Error::invalid("floor_db must be finite"));
        }
        if self
            .noise_offset_bands
            .windows(2)
            .any(|w| !(w[0].0 < w[1].0))
        {
            return Err(Error::invalid("noise_offset_bands must be sorted by frequency"));
        }
        Ok(())
    }

    fn offset_at(&self, hz: f64) -> f64 {
        let bands = &self.noise_offset_bands;
        let extra = match bands.len() {
            0 => 0.0,
            _ if hz <= bands[0].0 => bands[0].1,
            _ if hz >= bands[bands.len() - 1].0 => bands[bands.len() - 1].1,
            _ => {
                let i = bands.partition_point(|b| b.0 <= hz);
                let (f0, d0) = bands[i - 1];
                let (f1, d1) = bands[i];
                d0 + (d1 - d0) * (hz - f0) / (f1 - f0)
            }
        };
        self.noise_offset_db + extra
    }
}

/// Masking level in dB on a half-spectrum grid.
#[derive(Debug, Clone, PartialEq)]
pub struct MaskingCurve {
    levels_db: Vec<f64>,
    n_fft: usize,
}

impl MaskingCurve {
    pub fn new(levels_db: Vec<f64>, n_fft: usize) -> Result<Self> {
        if !n_fft.is_power_of_two() || levels_db.len() != n_fft / 2 + 1 {
            return Err(Error::invalid("mask length does not match n_fft"));
        }
        if levels_db.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("mask levels must be finite"));
        }
        Ok(Self { levels_db, n_fft })
    }

    pub fn levels_db(&self) -> &[f64] {
        &self.levels_db
    }

    pub fn n_fft(&self) -> usize {
        self.n_fft
    }

    pub fn len(&self) -> usize {
        self.levels_db.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels_db.is_empty()
    }

    /// Linear power `10^(level/10)` per bin.
    pub fn power(&self) -> Vec<f64> {
        self.levels_db.iter().map(|d| 10f64.powf(d / 10.0)).collect()
    }
}

/// `10 log10(bin)`, clamped below at `floor_db`.
pub fn log_spectrum(s: &Spectrum, floor_db: f64) -> Vec<f64> {
    s.bins()
        .iter()
        .map(|&b| if b > 0.0 { (10.0 * b.log10()).max(floor_db) } else { floor_db })
        .collect()
}

/// Bark value of `hz`: `13 atan(0.00076 f) + 3.5 atan((f / 7500)^2)`.
pub fn bark_of_hz(hz: f64) -> Result<f64> {
    if !(hz >= 0.0) {
        return Err(Error::invalid(format!("frequency {hz} must be non-negative")));
    }
    Ok(13.0 * (0.00076 * hz).atan() + 3.5 * (hz / 7500.0).powi(2).atan())
}

/// Inclusive bin range `[lo, hi]` within `halfwidth` Bark of each bin.
///
/// `n_bins` bins span 0 Hz to Nyquist of the codec rate.
pub fn bark_windows(n_bins: usize, halfwidth: f64) -> Vec<(usize, usize)> {
    let nyquist = SAMPLE_RATE as f64 / 2.0;
    let step = if n_bins > 1 { nyquist / (n_bins - 1) as f64 } else { 0.0 };
    let barks: Vec<f64> = (0..n_bins)
        .map(|i| bark_of_hz(i as f64 * step).expect("grid is non-negative"))
        .collect();
    barks
        .iter()
        .map(|&z| {
            let lo = barks.partition_point(|&b| b < z - halfwidth);
            let hi = barks.partition_point(|&b| b <= z + halfwidth) - 1;
            (lo, hi)
        })
        .collect()
}

fn median_of(values: &mut [f64]) -> f64 {
    values.sort_by(|a, b| a.total_cmp(b));
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}

/// Median of the log spectrum over each bin's Bark window.
///
/// The median of dB values is the log of the geometric median of the powers.
pub fn sliding_median(logspec: &[f64], cfg: &PsyConfig) -> Vec<f64> {
    let mut scratch = Vec::new();
    bark_windows(logspec.len(), cfg.bark_halfwidth)
        .into_iter()
        .map(|(lo, hi)| {
            scratch.clear();
            scratch.extend_from_slice(&logspec[lo..=hi]);
            median_of(&mut scratch)
        })
        .collect()
}

/// Maximum of the log spectrum over each bin's Bark window, before smoothing.
pub fn sliding_max(logspec: &[f64], cfg: &PsyConfig) -> Vec<f64> {
    bark_windows(logspec.len(), cfg.bark_halfwidth)
        .into_iter()
        .map(|(lo, hi)| logspec[lo..=hi].iter().copied().fold(f64::NEG_INFINITY, f64::max))
        .collect()
}

/// Windowed maximum followed by a 3-bin moving average (2 bins at the edges).
pub fn sliding_envelope(logspec: &[f64], cfg: &PsyConfig) -> Vec<f64> {
    let max = sliding_max(logspec, cfg);
    let n = max.len();
    (0..n)
        .map(|i| {
            let lo = i.saturating_sub(1);
            let hi = (i + 1).min(n - 1);
            max[lo..=hi].iter().sum::<f64>() / (hi - lo + 1) as f64
        })
        .collect()
}

/// `env - alpha * max(0, env - med)`: depresses the envelope where it stands
/// above the median.
pub fn compand_envelope(env: &[f64], med: &[f64], cfg: &PsyConfig) -> Result<Vec<f64>> {
    if env.len() != med.len() {
        return Err(Error::invalid("envelope and median lengths differ"));
    }
    Ok(env
        .iter()
        .zip(med)
        .map(|(&e, &m)| e - cfg.tonality_alpha * (e - m).max(0.0))
        .collect())
}

/// Adds the configured noise offset to every bin.
pub fn apply_noise_offset(curve: &[f64], cfg: &PsyConfig) -> Vec<f64> {
    let n = curve.len();
    let step = if n > 1 { SAMPLE_RATE as f64 / 2.0 / (n - 1) as f64 } else { 0.0 };
    curve
        .iter()
        .enumerate()
        .map(|(i, &c)| c + cfg.offset_at(i as f64 * step))
        .collect()
}

/// Energy-weighted mean of `curve` (dB), skipping the DC and Nyquist bins.
pub fn mask_pivot(curve: &[f64]) -> f64 {
    let inner = if curve.len() > 2 { &curve[1..curve.len() - 1] } else { curve };
    // Shift by the maximum so the weights neither overflow nor underflow.
    let top = inner.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let (mut num, mut den) = (0.0, 0.0);
    for &d in inner {
        let w = 10f64.powf((d - top) / 10.0);
        num += w * d;
        den += w;
    }
    num / den
}

/// Scales dB deviations around the pivot by `compress_exponent`.
pub fn compress_mask(curve: &[f64], cfg: &PsyConfig, n_fft: usize) -> Result<MaskingCurve> {
    let pivot = mask_pivot(curve);
    let e = cfg.compress_exponent;
    MaskingCurve::new(curve.iter().map(|&d| pivot + e * (d - pivot)).collect(), n_fft)
}

/// Every intermediate curve of the noise-mask pipeline.
#[derive(Debug, Clone)]
pub struct NoiseMaskStages {
    pub log_spectrum: Vec<f64>,
    pub median: Vec<f64>,
    pub envelope: Vec<f64>,
    pub companded: Vec<f64>,
    /// Mask before dynamic-range compression.
    pub uncompressed: Vec<f64>,
    pub mask: MaskingCurve,
}

pub fn noise_mask_stages(s: &Spectrum, cfg: &PsyConfig) -> Result<NoiseMaskStages> {
    cfg.validate()?;
    let log_spectrum = log_spectrum(s, cfg.floor_db);
    let median = sliding_median(&log_spectrum, cfg);
    let envelope = sliding_envelope(&log_spectrum, cfg);
    let companded = compand_envelope(&envelope, &median, cfg)?;
    let uncompressed = apply_noise_offset(&companded, cfg);
    let mask = compress_mask(&uncompressed, cfg, s.n_fft())?;
    Ok(NoiseMaskStages {
        log_spectrum,
        median,
        envelope,
        companded,
        uncompressed,
        mask,
    })
}

/// Noise mask of one frame's power spectrum.
pub fn compute_noise_mask(s: &Spectrum, cfg: &PsyConfig) -> Result<MaskingCurve> {
    noise_mask_stages(s, cfg).map(|st| st.mask)
}
