//! 16-bit mono 8 kHz WAV files.

use std::path::Path;

use crate::dsp::SAMPLE_RATE;
use crate::error::{Error, Result};

/// PCM16 mono audio at 8 kHz.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WavAudio {
    pub samples: Vec<i16>,
    pub sample_rate: u32,
}

impl WavAudio {
    pub fn new(samples: Vec<i16>) -> Self {
        Self {
            samples,
            sample_rate: SAMPLE_RATE,
        }
    }

    /// Quantizes `[-1, 1]` floats to 16 bits, rounding and saturating.
    pub fn from_f64(x: &[f64]) -> Self {
        Self::new(
            x.iter()
                .map(|v| (v * 32768.0).round().clamp(i16::MIN as f64, i16::MAX as f64) as i16)
                .collect(),
        )
    }

    /// Samples scaled to `[-1, 1)`.
    pub fn to_f64(&self) -> Vec<f64> {
        self.samples.iter().map(|&s| s as f64 / 32768.0).collect()
    }
}

fn map_hound(e: hound::Error) -> Error {
    match e {
        hound::Error::IoError(io) => Error::Io(io),
        other => Error::UnsupportedFormat(other.to_string()),
    }
}

pub fn wav_read(path: impl AsRef<Path>) -> Result<WavAudio> {
    let path = path.as_ref();
    let reader = hound::WavReader::open(path).map_err(map_hound)?;
    let spec = reader.spec();
    let what = path.display();
    if spec.sample_format != hound::SampleFormat::Int || spec.bits_per_sample != 16 {
        return Err(Error::UnsupportedFormat(format!(
            "{what}: need 16-bit integer PCM, got {} bits {:?}",
            spec.bits_per_sample, spec.sample_format
        )));
    }
    if spec.channels != 1 {
        return Err(Error::UnsupportedFormat(format!(
            "{what}: need mono, got {} channels",
            spec.channels
        )));
    }
    if spec.sample_rate != SAMPLE_RATE {
        return Err(Error::UnsupportedFormat(format!(
            "{what}: need 8000 Hz, got {} Hz",
            spec.sample_rate
        )));
    }
    let samples = reader
        .into_samples::<i16>()
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(map_hound)?;
    Ok(WavAudio::new(samples))
}

pub fn wav_write(path: impl AsRef<Path>, audio: &WavAudio) -> Result<()> {
    if audio.sample_rate != SAMPLE_RATE {
        return Err(Error::UnsupportedFormat(format!(
            "can only write 8000 Hz, got {}",
            audio.sample_rate
        )));
    }
    let spec = hound::WavSpec {
        channels: 1,
        sample_rate: SAMPLE_RATE,
        bits_per_sample: 16,
        sample_format: hound::SampleFormat::Int,
    };
    let mut w = hound::WavWriter::create(path, spec).map_err(map_hound)?;
    for &s in &audio.samples {
        w.write_sample(s).map_err(map_hound)?;
    }
    w.finalize().map_err(map_hound)
}
