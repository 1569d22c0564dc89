// Writes the spectral curves of a voiced frame as CSV: input spectrum,
// mask before and after compression, and both noise shapes.
//
// Run with `cargo run --example noise_shaping_csv [out.csv]`; without an
// argument the CSV goes to standard output.

use celpsy::celp::EncoderConfig;
use celpsy::harness::analyze_frame;
use celpsy::harness::corpus::steady_vowel;

pub fn run_example() -> celpsy::Result<String> {
    let x = steady_vowel(5, 0.5);
    let curves = analyze_frame(&x, 2, &EncoderConfig::default())?;
    Ok(curves.to_csv())
}

#[allow(dead_code)]
fn main() -> celpsy::Result<()> {
    let csv = run_example()?;
    match std::env::args().nth(1) {
        Some(path) => std::fs::write(path, csv)?,
        None => print!("{csv}"),
    }
    Ok(())
}
