// Linear prediction of a two-formant signal, its line spectral pairs, and
// the trip back to LPC coefficients.
//
// Run with `cargo run --example lpc_lsp`.

use celpsy::celp::{dequantize_lsp, quantize_lsp, FRAME_LEN, LOOKAHEAD, LPC_ORDER};
use celpsy::dsp::{
    asymmetric_window, autocorrelate, lag_window, levinson_durbin, lpc_to_lsp, lsp_to_lpc,
    SAMPLE_RATE,
};
use celpsy::harness::corpus::steady_vowel;

pub fn run_example() -> celpsy::Result<()> {
    let x = steady_vowel(1, 0.1);
    let window = asymmetric_window(FRAME_LEN, LOOKAHEAD)?;
    let frame: Vec<f64> = x[..FRAME_LEN + LOOKAHEAD]
        .iter()
        .zip(&window)
        .map(|(s, w)| s * w)
        .collect();

    let r = autocorrelate(&frame, LPC_ORDER)?
        .conditioned(&lag_window(LPC_ORDER, 60.0, SAMPLE_RATE as f64), 1e-4);
    let fit = levinson_durbin(&r, LPC_ORDER)?;
    println!("A(z) coefficients: {:?}", fit.filter.coeffs());
    println!("prediction gain: {:.1} dB", 10.0 * (r.as_slice()[0] / fit.prediction_error).log10());

    let lsp = lpc_to_lsp(&fit.filter)?;
    let hz: Vec<String> = lsp
        .freqs()
        .iter()
        .map(|w| format!("{:.0}", w * SAMPLE_RATE as f64 / (2.0 * std::f64::consts::PI)))
        .collect();
    println!("LSP frequencies (Hz): {}", hz.join(" "));

    let back = lsp_to_lpc(&lsp);
    let err = back
        .coeffs()
        .iter()
        .zip(fit.filter.coeffs())
        .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    println!("LPC -> LSP -> LPC max coefficient error: {err:.2e}");
    assert!(err < 1e-8);

    let indices = quantize_lsp(&lsp)?;
    let q = dequantize_lsp(&indices)?;
    println!("30-bit LSP indices: {indices:?}");
    println!("quantized synthesis filter stable: {}", lsp_to_lpc(&q).is_minimum_phase());
    Ok(())
}

#[allow(dead_code)]
fn main() -> celpsy::Result<()> {
    run_example()
}
