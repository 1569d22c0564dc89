//! Per-subframe noise-weighting filters.
//!
//! A [`WeightingFilter`] stores the noise-shaping polynomials: coding noise is
//! shaped like `W_n(z) / W_d(z)`, so the filter applied to the error during
//! the codebook search is `W(z) = W_d(z) / W_n(z)`.

use serde::Deserialize;

use crate::dsp::{
    autocorrelation_from_power, bandwidth_expand, levinson_durbin, AutocorrSequence, FilterState,
    LpcFilter, pole_zero_filter,
};
use crate::dsp::subframe_weight;
use crate::error::{Error, Result};
use crate::psy::MaskingCurve;

/// Order of both weighting polynomials.
pub const WEIGHTING_ORDER: usize = 10;

/// Noise-shaping pair `W_n(z) / W_d(z)` plus a positive overall gain on `W`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightingFilter {
    num: LpcFilter,
    den: LpcFilter,
    gain: f64,
}

impl WeightingFilter {
    pub fn new(num: LpcFilter, den: LpcFilter) -> Self {
        Self { num, den, gain: 1.0 }
    }

    pub fn unity(order: usize) -> Self {
        Self::new(LpcFilter::flat(order), LpcFilter::flat(order))
    }

    /// `W_n`, the numerator of the noise shape.
    pub fn num(&self) -> &LpcFilter {
        &self.num
    }

    /// `W_d`, the denominator of the noise shape.
    pub fn den(&self) -> &LpcFilter {
        &self.den
    }

    pub fn gain(&self) -> f64 {
        self.gain
    }

    pub fn with_gain(mut self, gain: f64) -> Result<Self> {
        if !(gain > 0.0 && gain.is_finite()) {
            return Err(Error::invalid("weighting gain must be positive"));
        }
        self.gain = gain;
        Ok(self)
    }

    pub fn is_minimum_phase(&self) -> bool {
        self.num.is_minimum_phase() && self.den.is_minimum_phase()
    }

    /// Fresh memory for [`WeightingFilter::apply`].
    pub fn new_state(&self) -> FilterState {
        FilterState::for_filter(self.den.coeffs(), self.num.coeffs())
    }

    /// Filters `x` through `W(z) = gain * W_d(z) / W_n(z)`.
    pub fn apply(&self, x: &[f64], state: &mut FilterState) -> Result<Vec<f64>> {
        let mut y = pole_zero_filter(x, self.den.coeffs(), self.num.coeffs(), state)?;
        if self.gain != 1.0 {
            y.iter_mut().for_each(|v| *v *= self.gain);
        }
        Ok(y)
    }

    /// `10 log10(|W_n / W_d|^2)` on `n_bins` bins over `[0, pi]`.
    pub fn noise_shape_db(&self, n_bins: usize) -> Vec<f64> {
        let n = self.num.power_response(n_bins);
        let d = self.den.power_response(n_bins);
        n.iter().zip(&d).map(|(n, d)| 10.0 * (n / d).log10()).collect()
    }
}

/// Which rule produces the weighting filter.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WeightingMode {
    /// `W(z) = A(z/gamma1) / A(z/gamma2)`.
    Gamma { gamma1: f64, gamma2: f64 },
    /// Pole-zero fit of the noise-mask curve.
    Psy,
}

impl WeightingMode {
    pub const REFERENCE_GAMMA1: f64 = 0.9;
    pub const REFERENCE_GAMMA2: f64 = 0.6;

    pub fn gamma(gamma1: f64, gamma2: f64) -> Result<Self> {
        if !(0.0 < gamma2 && gamma2 < gamma1 && gamma1 <= 1.0) {
            return Err(Error::invalid(format!(
                "need 0 < gamma2 < gamma1 <= 1, got gamma1={gamma1} gamma2={gamma2}"
            )));
        }
        Ok(Self::Gamma { gamma1, gamma2 })
    }

    /// The classic filter with `gamma1 = 0.9`, `gamma2 = 0.6`.
    pub fn reference() -> Self {
        Self::Gamma {
            gamma1: Self::REFERENCE_GAMMA1,
            gamma2: Self::REFERENCE_GAMMA2,
        }
    }

    pub fn is_psy(&self) -> bool {
        matches!(self, Self::Psy)
    }
}

/// Complexity reductions for the masking-curve backend.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum ComplexityMode {
    /// Fitted denominator and numerator per subframe.
    #[default]
    Full,
    /// Numerator dropped (`W_n = 1`).
    C1,
    /// Denominator forced to the synthesis filter.
    C2,
    /// As `C2` with one numerator per frame.
    C3,
}

/// `W(z) = A(z/gamma1) / A(z/gamma2)`: `den = A(z/gamma1)`, `num = A(z/gamma2)`.
pub fn gamma_weighting(a: &LpcFilter, gamma1: f64, gamma2: f64) -> Result<WeightingFilter> {
    if gamma2 > gamma1 {
        return Err(Error::invalid(format!(
            "gamma2 ({gamma2}) must not exceed gamma1 ({gamma1})"
        )));
    }
    Ok(WeightingFilter::new(
        bandwidth_expand(a, gamma2)?,
        bandwidth_expand(a, gamma1)?,
    ))
}

/// All-pole fit of a masking curve.
#[derive(Debug, Clone)]
pub struct DenominatorFit {
    pub filter: LpcFilter,
    /// Prediction error, i.e. the all-pole model gain, in the mask's power units.
    pub gain: f64,
    /// The mask had no shape to fit; `filter` is flat.
    pub degenerate: bool,
}

/// Largest dB value, used to keep powers in range before exponentiation.
fn peak_db(levels: &[f64]) -> f64 {
    levels.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

fn all_pole_fit(power: &[f64], order: usize) -> Option<(LpcFilter, f64)> {
    let r = autocorrelation_from_power(power, order).ok()?;
    if !(r[0] > 0.0 && r[0].is_finite()) {
        return None;
    }
    let res = levinson_durbin(&AutocorrSequence(r), order).ok()?;
    Some((res.filter, res.prediction_error))
}

/// `W_d`: treats the mask as a power spectrum, takes its autocorrelation with
/// an inverse FFT and runs Levinson-Durbin, so that `gain / |W_d|^2`
/// approximates the mask.
pub fn mask_to_denominator(m: &MaskingCurve, order: usize) -> Result<DenominatorFit> {
    let levels = m.levels_db();
    let top = peak_db(levels);
    let bottom = levels.iter().copied().fold(f64::INFINITY, f64::min);
    if top - bottom < 1e-9 {
        return Ok(DenominatorFit {
            filter: LpcFilter::flat(order),
            gain: 10f64.powf(top / 10.0),
            degenerate: true,
        });
    }
    let power: Vec<f64> = levels.iter().map(|d| 10f64.powf((d - top) / 10.0)).collect();
    match all_pole_fit(&power, order) {
        Some((filter, err)) => Ok(DenominatorFit {
            filter,
            gain: err * 10f64.powf(top / 10.0),
            degenerate: false,
        }),
        None => Ok(DenominatorFit {
            filter: LpcFilter::flat(order),
            gain: 10f64.powf(top / 10.0),
            degenerate: true,
        }),
    }
}

/// `W_n`: all-pole fit of the inverse of the residual `mask * |W_d|^2`, so
/// that `|W_n|^2` follows the residual and `|W_n / W_d|^2` follows the mask
/// up to a constant.
pub fn estimate_numerator(m: &MaskingCurve, wd: &LpcFilter, order: usize) -> Result<LpcFilter> {
    let levels = m.levels_db();
    let wd_power = wd.power_response(levels.len());
    // inverse residual in dB, then normalised to a 0 dB peak
    let inv_db: Vec<f64> = levels
        .iter()
        .zip(&wd_power)
        .map(|(d, p)| -(d + 10.0 * p.log10()))
        .collect();
    if inv_db.iter().any(|v| !v.is_finite()) {
        return Err(Error::Degenerate("denominator has a spectral zero".into()));
    }
    let top = peak_db(&inv_db);
    let bottom = inv_db.iter().copied().fold(f64::INFINITY, f64::min);
    if top - bottom < 1e-9 {
        return Ok(LpcFilter::flat(order));
    }
    let power: Vec<f64> = inv_db.iter().map(|d| 10f64.powf((d - top) / 10.0)).collect();
    Ok(all_pole_fit(&power, order)
        .map(|(f, _)| f)
        .unwrap_or_else(|| LpcFilter::flat(order)))
}

/// Per-bin dB interpolation with weight `(k + 1) / 4` on `cur`.
pub fn interpolate_mask(prev: &MaskingCurve, cur: &MaskingCurve, k: usize) -> Result<MaskingCurve> {
    if prev.n_fft() != cur.n_fft() {
        return Err(Error::invalid("masks are on different grids"));
    }
    let w = subframe_weight(k);
    if w >= 1.0 {
        return Ok(cur.clone());
    }
    let levels = prev
        .levels_db()
        .iter()
        .zip(cur.levels_db())
        .map(|(p, c)| (1.0 - w) * p + w * c)
        .collect();
    MaskingCurve::new(levels, cur.n_fft())
}

/// RMS of `model_db - mask_db` after removing their mean difference.
///
/// Weighting is scale-invariant, so a constant dB offset is not an error.
pub fn fit_rms_db(mask_db: &[f64], model_db: &[f64]) -> f64 {
    let n = mask_db.len().min(model_db.len());
    if n == 0 {
        return 0.0;
    }
    let diff: Vec<f64> = model_db.iter().zip(mask_db).map(|(a, b)| a - b).collect();
    let mean = diff.iter().sum::<f64>() / n as f64;
    (diff.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / n as f64).sqrt()
}

/// `10 log10(1 / |W_d|^2)`: the shape of a denominator-only model.
pub fn all_pole_shape_db(den: &LpcFilter, n_bins: usize) -> Vec<f64> {
    den.power_response(n_bins).iter().map(|p| -10.0 * p.log10()).collect()
}

/// Everything the weighting rules need about one frame.
#[derive(Debug, Clone)]
pub struct WeightingContext {
    /// Interpolated unquantized `A(z)` per subframe.
    pub lpc: Vec<LpcFilter>,
    /// Interpolated quantized `Â(z)` per subframe (the synthesis filters).
    pub quantized_lpc: Vec<LpcFilter>,
    pub prev_mask: Option<MaskingCurve>,
    pub cur_mask: Option<MaskingCurve>,
}

impl WeightingContext {
    fn masks(&self) -> Result<(&MaskingCurve, &MaskingCurve)> {
        let cur = self
            .cur_mask
            .as_ref()
            .ok_or_else(|| Error::invalid("masking weighting needs the current mask"))?;
        Ok((self.prev_mask.as_ref().unwrap_or(cur), cur))
    }

    fn subframes(&self) -> usize {
        self.lpc.len()
    }
}

/// Weighting filter for subframe `k` under `mode` and `cm`.
pub fn build_weighting(
    ctx: &WeightingContext,
    mode: WeightingMode,
    cm: ComplexityMode,
    k: usize,
) -> Result<WeightingFilter> {
    if k >= ctx.subframes() || ctx.quantized_lpc.len() != ctx.subframes() {
        return Err(Error::invalid(format!("subframe {k} out of range")));
    }
    match mode {
        WeightingMode::Gamma { gamma1, gamma2 } => gamma_weighting(&ctx.lpc[k], gamma1, gamma2),
        WeightingMode::Psy => {
            let (prev, cur) = ctx.masks()?;
            let mask = interpolate_mask(prev, cur, k)?;
            match cm {
                ComplexityMode::Full => {
                    let den = mask_to_denominator(&mask, WEIGHTING_ORDER)?.filter;
                    let num = estimate_numerator(&mask, &den, WEIGHTING_ORDER)?;
                    Ok(WeightingFilter::new(num, den))
                }
                ComplexityMode::C1 => {
                    let den = mask_to_denominator(&mask, WEIGHTING_ORDER)?.filter;
                    Ok(WeightingFilter::new(LpcFilter::flat(WEIGHTING_ORDER), den))
                }
                ComplexityMode::C2 => {
                    let den = ctx.quantized_lpc[k].clone();
                    let num = estimate_numerator(&mask, &den, WEIGHTING_ORDER)?;
                    Ok(WeightingFilter::new(num, den))
                }
                ComplexityMode::C3 => {
                    let num = frame_numerator(ctx)?;
                    Ok(WeightingFilter::new(num, ctx.quantized_lpc[k].clone()))
                }
            }
        }
    }
}

/// The once-per-frame numerator of `C3`, fitted on the last subframe.
fn frame_numerator(ctx: &WeightingContext) -> Result<LpcFilter> {
    let (_, cur) = ctx.masks()?;
    let last = ctx.subframes() - 1;
    estimate_numerator(cur, &ctx.quantized_lpc[last], WEIGHTING_ORDER)
}

/// Weighting filters for every subframe of a frame.
///
/// `C3` fits its numerator once and shares it across the frame.
pub fn build_frame_weighting(
    ctx: &WeightingContext,
    mode: WeightingMode,
    cm: ComplexityMode,
) -> Result<Vec<WeightingFilter>> {
    if mode.is_psy() && cm == ComplexityMode::C3 {
        let num = frame_numerator(ctx)?;
        return Ok(ctx
            .quantized_lpc
            .iter()
            .map(|den| WeightingFilter::new(num.clone(), den.clone()))
            .collect());
    }
    (0..ctx.subframes())
        .map(|k| build_weighting(ctx, mode, cm, k))
        .collect()
}
