// Encodes a synthetic utterance at every rate with both weighting rules
// and scores the decoded audio.
//
// Run with `cargo run --release --example encode_decode`.

use celpsy::celp::{decode_stream, encode_signal, EncoderConfig, Mode};
use celpsy::harness::abtest::psy_measure;
use celpsy::harness::corpus::speech_like;
use celpsy::harness::metrics::{codec_segmental_snr, weighted_segmental_snr};
use celpsy::weighting::{ComplexityMode, WeightingMode};

pub fn run_example() -> celpsy::Result<()> {
    let x = speech_like(7, 1.0);
    println!("{:<5} {:<6} {:>8} {:>9} {:>10}", "mode", "weight", "bit/s", "segSNR", "psy wSNR");
    for mode in [Mode::Low, Mode::Mid, Mode::High] {
        for (label, w) in [("gamma", WeightingMode::reference()), ("psy", WeightingMode::Psy)] {
            let cfg = EncoderConfig::new(mode, w, ComplexityMode::Full);
            let frames = encode_signal(&x, &cfg)?;
            let y = decode_stream(&frames, mode)?;
            println!(
                "{:<5} {:<6} {:>8.0} {:>9.2} {:>10.2}",
                mode.to_string(),
                label,
                mode.bitrate(),
                codec_segmental_snr(&x, &y)?,
                weighted_segmental_snr(&x, &y, &psy_measure(mode))?
            );
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> celpsy::Result<()> {
    run_example()
}
