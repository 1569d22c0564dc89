use rustfft::{num_complex::Complex, FftPlanner};

use crate::error::{Error, Result};

/// Power values on the `n_fft / 2 + 1` bins covering `[0, pi]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    bins: Vec<f64>,
    n_fft: usize,
}

impl Spectrum {
    pub fn new(bins: Vec<f64>, n_fft: usize) -> Result<Self> {
        if !n_fft.is_power_of_two() || bins.len() != n_fft / 2 + 1 {
            return Err(Error::invalid("spectrum size does not match n_fft"));
        }
        if bins.iter().any(|b| !(b.is_finite() && *b >= 0.0)) {
            return Err(Error::invalid("spectrum bins must be finite and non-negative"));
        }
        Ok(Self { bins, n_fft })
    }

    pub fn bins(&self) -> &[f64] {
        &self.bins
    }

    pub fn n_fft(&self) -> usize {
        self.n_fft
    }

    /// Centre frequency of bin `i` in Hz.
    pub fn bin_hz(&self, i: usize, sample_rate: f64) -> f64 {
        i as f64 * sample_rate / self.n_fft as f64
    }
}

/// Squared DFT magnitude of `x`, zero-padded to `n_fft`.
pub fn power_spectrum(x: &[f64], n_fft: usize) -> Result<Spectrum> {
    if n_fft == 0 || !n_fft.is_power_of_two() {
        return Err(Error::invalid(format!("n_fft {n_fft} is not a power of two")));
    }
    if x.len() > n_fft {
        return Err(Error::invalid(format!(
            "frame of {} samples exceeds n_fft {n_fft}",
            x.len()
        )));
    }
    let mut buf: Vec<Complex<f64>> = x.iter().map(|&v| Complex::new(v, 0.0)).collect();
    buf.resize(n_fft, Complex::new(0.0, 0.0));
    FftPlanner::new().plan_fft_forward(n_fft).process(&mut buf);
    let bins = buf[..=n_fft / 2].iter().map(|c| c.norm_sqr()).collect();
    Ok(Spectrum { bins, n_fft })
}

/// Autocorrelation `r[0..=max_lag]` of the even, real spectrum described by
/// the half-spectrum `power` (length `n_fft / 2 + 1`), via an inverse FFT.
pub fn autocorrelation_from_power(power: &[f64], max_lag: usize) -> Result<Vec<f64>> {
    if power.len() < 2 {
        return Err(Error::invalid("power spectrum needs at least two bins"));
    }
    let n_fft = 2 * (power.len() - 1);
    if !n_fft.is_power_of_two() || max_lag >= n_fft / 2 {
        return Err(Error::invalid("unsupported spectrum size or lag"));
    }
    let mut buf: Vec<Complex<f64>> = (0..n_fft)
        .map(|i| {
            let j = if i <= n_fft / 2 { i } else { n_fft - i };
            Complex::new(power[j], 0.0)
        })
        .collect();
    FftPlanner::new().plan_fft_inverse(n_fft).process(&mut buf);
    let scale = 1.0 / n_fft as f64;
    Ok(buf[..=max_lag].iter().map(|c| c.re * scale).collect())
}
