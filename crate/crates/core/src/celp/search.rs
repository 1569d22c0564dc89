//! Closed-loop codebook searches in the weighted domain.
//!
//! `h` is the zero-state impulse response of the weighted synthesis filter
//! `W(z) / Â(z)`, truncated to the subframe. Every candidate excitation is
//! convolved with `h` and compared against the target.

use std::ops::RangeInclusive;

use super::codebook::{GainCodebook, InnovationCodebook};
use super::{PITCH_MAX, PITCH_MIN, SUBFRAME_LEN};
use crate::dsp::{pole_zero_filter, FilterState, LpcFilter};
use crate::error::{Error, Result};
use crate::weighting::WeightingFilter;

/// Past excitation, oldest first.
#[derive(Debug, Clone, PartialEq)]
pub struct ExcitationMemory {
    past: Vec<f64>,
}

impl ExcitationMemory {
    /// Long enough for the lag `T + 1` tap at the maximum pitch plus a subframe.
    pub const LEN: usize = 256;

    pub fn new() -> Self {
        Self {
            past: vec![0.0; Self::LEN],
        }
    }

    pub fn from_samples(past: &[f64]) -> Self {
        let mut mem = Self::new();
        let n = past.len().min(Self::LEN);
        mem.past[Self::LEN - n..].copy_from_slice(&past[past.len() - n..]);
        mem
    }

    pub fn samples(&self) -> &[f64] {
        &self.past
    }

    pub fn push(&mut self, excitation: &[f64]) {
        let n = excitation.len().min(Self::LEN);
        self.past.drain(..n);
        self.past.extend_from_slice(&excitation[excitation.len() - n..]);
    }

    pub fn reset(&mut self) {
        self.past.iter_mut().for_each(|v| *v = 0.0);
    }

    /// `x[n] = e[n - lag]`, repeating the last `lag` past samples when
    /// `n >= lag`.
    fn delayed(&self, lag: usize, out: &mut [f64]) {
        let start = self.past.len() - lag;
        for n in 0..out.len() {
            out[n] = if n < lag { self.past[start + n] } else { out[n - lag] };
        }
    }
}

impl Default for ExcitationMemory {
    fn default() -> Self {
        Self::new()
    }
}

/// `g0 e[n-T-1] + g1 e[n-T] + g2 e[n-T+1]` over one subframe.
pub fn adaptive_contribution(mem: &ExcitationMemory, lag: usize, gains: &[f64; 3]) -> Vec<f64> {
    let mut out = vec![0.0; SUBFRAME_LEN];
    let mut tap = vec![0.0; SUBFRAME_LEN];
    for (g, d) in gains.iter().zip([lag + 1, lag, lag - 1]) {
        mem.delayed(d, &mut tap);
        for (o, t) in out.iter_mut().zip(&tap) {
            *o += g * t;
        }
    }
    out
}

/// Zero-state impulse response of `W(z) / Â(z)`, `len` samples.
///
/// When `W_d` is `Â` itself the cascade reduces to `gain / W_n(z)` and is
/// computed that way.
pub fn weighted_synthesis_response(
    w: &WeightingFilter,
    synthesis: &LpcFilter,
    len: usize,
) -> Result<Vec<f64>> {
    let mut x = vec![0.0; len];
    if len > 0 {
        x[0] = 1.0;
    }
    if w.den() == synthesis {
        let num = [w.gain()];
        let mut st = FilterState::for_filter(&num, w.num().coeffs());
        return pole_zero_filter(&x, &num, w.num().coeffs(), &mut st);
    }
    let mut st = FilterState::for_filter(&[1.0], synthesis.coeffs());
    let y = pole_zero_filter(&x, &[1.0], synthesis.coeffs(), &mut st)?;
    w.apply(&y, &mut w.new_state())
}

/// First `out.len()` samples of `h * x`, both starting at time 0.
fn convolve_into(h: &[f64], x: &[f64], out: &mut [f64]) {
    for (n, o) in out.iter_mut().enumerate() {
        let kmax = n.min(x.len().saturating_sub(1));
        let mut acc = 0.0;
        for k in 0..=kmax {
            if n - k < h.len() {
                acc += x[k] * h[n - k];
            }
        }
        *o = acc;
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Winning adaptive-codebook candidate.
#[derive(Debug, Clone, PartialEq)]
pub struct AdaptiveChoice {
    pub lag: usize,
    pub gain_index: usize,
    /// Excitation-domain contribution `e_a`.
    pub excitation: Vec<f64>,
    /// `e_a` filtered by the weighted synthesis filter.
    pub filtered: Vec<f64>,
    pub error: f64,
}

/// Exhaustive search over `lags` and every gain entry for the pair with the
/// smallest weighted squared error. Ties go to the lowest lag, then the
/// lowest gain index.
pub fn adaptive_search(
    target: &[f64],
    mem: &ExcitationMemory,
    h: &[f64],
    lags: RangeInclusive<usize>,
    gains: &GainCodebook,
) -> Result<AdaptiveChoice> {
    if lags.is_empty() || gains.is_empty() {
        return Err(Error::invalid("empty adaptive search space"));
    }
    if *lags.start() < PITCH_MIN || *lags.end() > PITCH_MAX {
        return Err(Error::invalid(format!(
            "lags {lags:?} outside [{PITCH_MIN}, {PITCH_MAX}]"
        )));
    }
    let n = target.len();
    let tt = dot(target, target);
    let mut tap = vec![0.0; n];
    let mut ys = [vec![0.0; n], vec![0.0; n], vec![0.0; n]];
    let mut best: Option<(f64, usize, usize)> = None;
    for lag in lags {
        for (y, d) in ys.iter_mut().zip([lag + 1, lag, lag - 1]) {
            mem.delayed(d, &mut tap);
            convolve_into(h, &tap, y);
        }
        let c = [dot(target, &ys[0]), dot(target, &ys[1]), dot(target, &ys[2])];
        let mut r = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in i..3 {
                r[i][j] = dot(&ys[i], &ys[j]);
                r[j][i] = r[i][j];
            }
        }
        for (gi, g) in gains.entries().iter().enumerate() {
            let mut err = tt;
            for i in 0..3 {
                err -= 2.0 * g[i] * c[i];
                for j in 0..3 {
                    err += g[i] * g[j] * r[i][j];
                }
            }
            if best.is_none_or(|(b, _, _)| err < b) {
                best = Some((err, lag, gi));
            }
        }
    }
    let (error, lag, gain_index) = best.expect("search space is non-empty");
    let excitation = adaptive_contribution(mem, lag, &gains.entries()[gain_index]);
    let mut filtered = vec![0.0; n];
    convolve_into(h, &excitation, &mut filtered);
    Ok(AdaptiveChoice {
        lag,
        gain_index,
        excitation,
        filtered,
        error,
    })
}

/// Winning innovation.
#[derive(Debug, Clone, PartialEq)]
pub struct FixedChoice {
    pub indices: Vec<usize>,
    /// Unscaled concatenated codewords.
    pub innovation: Vec<f64>,
    /// `gain * innovation` filtered by the weighted synthesis filter.
    pub filtered: Vec<f64>,
    pub error: f64,
}

/// Greedy left-to-right sub-vector search.
///
/// At each position the codeword minimizing the error over the rest of the
/// subframe, given the already chosen prefix, is kept. Ties go to the
/// lowest index.
pub fn fixed_search(
    target: &[f64],
    h: &[f64],
    cb: &InnovationCodebook,
    gain: f64,
) -> Result<FixedChoice> {
    let n = target.len();
    let dim = cb.dim();
    if cb.is_empty() || dim == 0 || !n.is_multiple_of(dim) {
        return Err(Error::invalid("sub-vector length must divide the target"));
    }
    // Response of each codeword placed at time 0; a codeword at offset s
    // contributes the first n - s samples of it from s onwards.
    let responses: Vec<Vec<f64>> = cb
        .iter()
        .map(|c| {
            let mut y = vec![0.0; n];
            convolve_into(h, c, &mut y);
            y
        })
        .collect();
    let mut residual = target.to_vec();
    let mut indices = Vec::with_capacity(n / dim);
    let mut innovation = Vec::with_capacity(n);
    for start in (0..n).step_by(dim) {
        let tail = &residual[start..];
        let mut best = (f64::INFINITY, 0);
        for (j, y) in responses.iter().enumerate() {
            let err: f64 = tail
                .iter()
                .zip(y)
                .map(|(t, v)| {
                    let d = t - gain * v;
                    d * d
                })
                .sum();
            if err < best.0 {
                best = (err, j);
            }
        }
        let j = best.1;
        for (t, v) in residual[start..].iter_mut().zip(&responses[j]) {
            *t -= gain * v;
        }
        indices.push(j);
        innovation.extend_from_slice(cb.vector(j));
    }
    let filtered = target.iter().zip(&residual).map(|(t, r)| t - r).collect();
    let error = dot(&residual, &residual);
    Ok(FixedChoice {
        indices,
        innovation,
        filtered,
        error,
    })
}
