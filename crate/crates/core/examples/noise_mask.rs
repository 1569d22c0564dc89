// The noise-mask pipeline on one frame of a steady vowel: log spectrum,
// Bark-window median, envelope, companding, offset and compression.
//
// Run with `cargo run --example noise_mask`.

use celpsy::celp::{FRAME_LEN, LOOKAHEAD, N_FFT};
use celpsy::dsp::{asymmetric_window, power_spectrum, SAMPLE_RATE};
use celpsy::harness::corpus::steady_vowel;
use celpsy::psy::{noise_mask_stages, PsyConfig};

pub fn run_example() -> celpsy::Result<()> {
    let x = steady_vowel(2, 0.1);
    let window = asymmetric_window(FRAME_LEN, LOOKAHEAD)?;
    let frame: Vec<f64> = x[..FRAME_LEN + LOOKAHEAD]
        .iter()
        .zip(&window)
        .map(|(s, w)| s * w)
        .collect();
    let spectrum = power_spectrum(&frame, N_FFT)?;
    let cfg = PsyConfig::default();
    let stages = noise_mask_stages(&spectrum, &cfg)?;

    println!("{:>7} {:>9} {:>9} {:>9} {:>9}", "Hz", "spectrum", "median", "uncompr", "mask");
    for k in (0..=N_FFT / 2).step_by(8) {
        println!(
            "{:>7.0} {:>9.2} {:>9.2} {:>9.2} {:>9.2}",
            spectrum.bin_hz(k, SAMPLE_RATE as f64),
            stages.log_spectrum[k],
            stages.median[k],
            stages.uncompressed[k],
            stages.mask.levels_db()[k]
        );
    }
    let span = |v: &[f64]| {
        v.iter().cloned().fold(f64::MIN, f64::max) - v.iter().cloned().fold(f64::MAX, f64::min)
    };
    let before = span(&stages.uncompressed);
    let after = span(stages.mask.levels_db());
    println!("dynamic range before/after compression: {before:.1} dB / {after:.1} dB");
    assert!(after < before);
    Ok(())
}

#[allow(dead_code)]
fn main() -> celpsy::Result<()> {
    run_example()
}
