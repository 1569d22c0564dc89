use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Analysis window spanning one frame plus lookahead.
///
/// The first `frame_len` samples rise along the left half of a Hamming
/// window and reach 1.0 at index `frame_len - 1`; the last `lookahead`
/// samples fall along the right half of a Hann window.
pub fn asymmetric_window(frame_len: usize, lookahead: usize) -> Result<Vec<f64>> {
    if frame_len == 0 || lookahead == 0 {
        return Err(Error::invalid("window lengths must be non-zero"));
    }
    let mut w = Vec::with_capacity(frame_len + lookahead);
    if frame_len == 1 {
        w.push(1.0);
    } else {
        let span = (frame_len - 1) as f64;
        w.extend((0..frame_len).map(|n| 0.54 - 0.46 * (PI * n as f64 / span).cos()));
    }
    let span = (lookahead + 1) as f64;
    w.extend((0..lookahead).map(|j| 0.5 * (1.0 + (PI * (j + 1) as f64 / span).cos())));
    Ok(w)
}

/// Gaussian lag window for a bandwidth of `bandwidth_hz` at `sample_rate` Hz.
///
/// This is the large-order limit of the binomial lag window; lag 0 is 1.0.
pub fn lag_window(max_lag: usize, bandwidth_hz: f64, sample_rate: f64) -> Vec<f64> {
    (0..=max_lag)
        .map(|k| {
            let x = 2.0 * PI * bandwidth_hz * k as f64 / sample_rate;
            (-0.5 * x * x).exp()
        })
        .collect()
}
