// Builds every weighting variant for one frame and reports how closely
// each noise shape follows the noise mask.
//
// Run with `cargo run --example weighting_filters`.

use celpsy::celp::{pad_signal, EncoderConfig, FrameAnalyzer, Mode, FRAME_LEN, LOOKAHEAD, N_FFT};
use celpsy::harness::corpus::steady_vowel;
use celpsy::weighting::{build_frame_weighting, fit_rms_db, ComplexityMode, WeightingMode};

pub fn run_example() -> celpsy::Result<()> {
    let x = pad_signal(&steady_vowel(3, 0.2));
    let cfg = EncoderConfig::new(Mode::High, WeightingMode::Psy, ComplexityMode::Full);
    let mut analyzer = FrameAnalyzer::new(&cfg)?;
    let mut fa = analyzer.analyze(&x[..FRAME_LEN + LOOKAHEAD])?;
    for t in 1..4 {
        fa = analyzer.analyze(&x[t * FRAME_LEN..t * FRAME_LEN + FRAME_LEN + LOOKAHEAD])?;
    }
    let mask = fa.mask().expect("masking analysis").levels_db().to_vec();
    let bins = N_FFT / 2 + 1;

    let variants = [
        ("gamma 0.9/0.6", WeightingMode::reference(), ComplexityMode::Full),
        ("psy full", WeightingMode::Psy, ComplexityMode::Full),
        ("psy C1", WeightingMode::Psy, ComplexityMode::C1),
        ("psy C2", WeightingMode::Psy, ComplexityMode::C2),
        ("psy C3", WeightingMode::Psy, ComplexityMode::C3),
    ];
    for (label, mode, cm) in variants {
        let filters = build_frame_weighting(&fa.weighting, mode, cm)?;
        let last = filters.last().expect("four subframes");
        let rms = fit_rms_db(&mask, &last.noise_shape_db(bins));
        println!(
            "{label:<14} minimum phase: {:<5} noise shape vs mask: {rms:5.2} dB RMS",
            filters.iter().all(|w| w.is_minimum_phase())
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> celpsy::Result<()> {
    run_example()
}
