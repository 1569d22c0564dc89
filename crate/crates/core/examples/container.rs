// Writes a `.cpsy` stream, reads it back and checks that the decoder
// ignores the informational weighting byte.
//
// Run with `cargo run --example container`.

use celpsy::bitstream::{decode_container, encode_container, StreamHeader, HEADER_LEN};
use celpsy::celp::{decode_stream, encode_signal, EncoderConfig, Mode};
use celpsy::harness::corpus::speech_like;
use celpsy::weighting::{ComplexityMode, WeightingMode};

pub fn run_example() -> celpsy::Result<()> {
    let x = speech_like(11, 0.5);
    let cfg = EncoderConfig::new(Mode::Mid, WeightingMode::Psy, ComplexityMode::C3);
    let frames = encode_signal(&x, &cfg)?;
    let header = StreamHeader::new(cfg.mode, true, cfg.complexity, frames.len() as u32);
    let bytes = encode_container(&header, &frames)?;
    println!(
        "{} frames, {} bytes ({} header + {} per frame)",
        frames.len(),
        bytes.len(),
        HEADER_LEN,
        cfg.mode.frame_bytes()
    );

    let stream = decode_container(&bytes)?;
    assert_eq!(stream.frames, frames);
    let audio = decode_stream(&stream.frames, stream.header.mode)?;

    let mut flipped = bytes.clone();
    flipped[6] = 0;
    let again = decode_container(&flipped)?;
    assert!(!again.header.psy_weighting);
    assert_eq!(decode_stream(&again.frames, again.header.mode)?, audio);
    println!("weighting byte flipped: decoded audio unchanged");
    Ok(())
}

#[allow(dead_code)]
fn main() -> celpsy::Result<()> {
    run_example()
}
