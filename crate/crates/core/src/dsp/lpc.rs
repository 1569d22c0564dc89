//! Autocorrelation, Levinson-Durbin and the prediction-error polynomial.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Lag-indexed autocorrelation values `r[0..=max_lag]`.
#[derive(Debug, Clone, PartialEq)]
pub struct AutocorrSequence(pub Vec<f64>);

impl AutocorrSequence {
    pub fn max_lag(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    /// Multiplies lag `k` by `window[k]` and inflates `r[0]` by `1 + white_noise`.
    pub fn conditioned(&self, window: &[f64], white_noise: f64) -> AutocorrSequence {
        let mut r: Vec<f64> = self.0.iter().zip(window).map(|(r, w)| r * w).collect();
        if let Some(r0) = r.first_mut() {
            *r0 *= 1.0 + white_noise;
        }
        AutocorrSequence(r)
    }
}

/// `r[k] = sum_n x[n] * x[n - k]` for `k = 0..=max_lag`.
pub fn autocorrelate(signal: &[f64], max_lag: usize) -> Result<AutocorrSequence> {
    if max_lag >= signal.len() {
        return Err(Error::invalid(format!(
            "max_lag {max_lag} must be below signal length {}",
            signal.len()
        )));
    }
    let r = (0..=max_lag)
        .map(|k| signal[k..].iter().zip(signal).map(|(a, b)| a * b).sum())
        .collect();
    Ok(AutocorrSequence(r))
}

/// Prediction-error polynomial `A(z) = sum_k a[k] z^-k` with `a[0] = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct LpcFilter {
    coeffs: Vec<f64>,
}

impl LpcFilter {
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.first() != Some(&1.0) {
            return Err(Error::invalid("LPC polynomial must have a leading 1"));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::invalid("LPC coefficients must be finite"));
        }
        Ok(Self { coeffs })
    }

    /// `A(z) = 1` padded to `order`.
    pub fn flat(order: usize) -> Self {
        let mut coeffs = vec![0.0; order + 1];
        coeffs[0] = 1.0;
        Self { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn is_flat(&self) -> bool {
        self.coeffs[1..].iter().all(|&c| c == 0.0)
    }

    /// Reflection coefficients from the step-down recursion, or `None` if some
    /// `|k| >= 1` (the polynomial is not minimum phase).
    pub fn reflection_coefficients(&self) -> Option<Vec<f64>> {
        let p = self.order();
        let mut a = self.coeffs.clone();
        let mut ks = vec![0.0; p];
        for i in (1..=p).rev() {
            let k = a[i];
            if !(k.abs() < 1.0) {
                return None;
            }
            ks[i - 1] = k;
            let denom = 1.0 - k * k;
            let prev: Vec<f64> = (0..i).map(|j| (a[j] - k * a[i - j]) / denom).collect();
            a[..i].copy_from_slice(&prev);
        }
        Some(ks)
    }

    pub fn is_minimum_phase(&self) -> bool {
        self.reflection_coefficients().is_some()
    }

    /// `|A(e^{jw})|^2` on `n_bins` frequencies uniformly spaced over `[0, pi]`.
    pub fn power_response(&self, n_bins: usize) -> Vec<f64> {
        let step = if n_bins > 1 { PI / (n_bins - 1) as f64 } else { 0.0 };
        (0..n_bins)
            .map(|i| {
                let w = step * i as f64;
                let (mut re, mut im) = (0.0, 0.0);
                for (k, &c) in self.coeffs.iter().enumerate() {
                    re += c * (w * k as f64).cos();
                    im -= c * (w * k as f64).sin();
                }
                re * re + im * im
            })
            .collect()
    }
}

/// Output of the Levinson-Durbin recursion.
#[derive(Debug, Clone)]
pub struct LevinsonResult {
    pub filter: LpcFilter,
    pub prediction_error: f64,
    pub reflections: Vec<f64>,
    /// Set when the recursion met `|k| >= 1` and stopped at this order; the
    /// remaining coefficients are zero.
    pub truncated_at: Option<usize>,
}

/// Solves the order-`order` normal equations for `r`.
pub fn levinson_durbin(r: &AutocorrSequence, order: usize) -> Result<LevinsonResult> {
    let r = r.as_slice();
    if r.is_empty() || !(r[0] > 0.0) || !r[0].is_finite() {
        return Err(Error::Degenerate("r[0] must be positive".into()));
    }
    if order + 1 > r.len() {
        return Err(Error::invalid(format!(
            "order {order} needs {} lags, got {}",
            order + 1,
            r.len()
        )));
    }
    let mut a = vec![0.0; order + 1];
    a[0] = 1.0;
    let mut err = r[0];
    let mut reflections = Vec::with_capacity(order);
    let mut truncated_at = None;
    let mut tmp = vec![0.0; order + 1];
    for i in 1..=order {
        let acc: f64 = r[i] + (1..i).map(|j| a[j] * r[i - j]).sum::<f64>();
        let k = -acc / err;
        if !(k.abs() < 1.0) {
            truncated_at = Some(i - 1);
            break;
        }
        tmp[..=i].copy_from_slice(&a[..=i]);
        for j in 1..i {
            a[j] = tmp[j] + k * tmp[i - j];
        }
        a[i] = k;
        err *= 1.0 - k * k;
        reflections.push(k);
    }
    Ok(LevinsonResult {
        filter: LpcFilter { coeffs: a },
        prediction_error: err.max(0.0),
        reflections,
        truncated_at,
    })
}

/// Realizes `A(z / gamma)`: coefficient `k` is scaled by `gamma^k`.
pub fn bandwidth_expand(a: &LpcFilter, gamma: f64) -> Result<LpcFilter> {
    if !(0.0..=1.0).contains(&gamma) {
        return Err(Error::invalid(format!("gamma {gamma} outside [0, 1]")));
    }
    let mut g = 1.0;
    let coeffs = a
        .coeffs
        .iter()
        .map(|&c| {
            let v = c * g;
            g *= gamma;
            v
        })
        .collect();
    Ok(LpcFilter { coeffs })
}
