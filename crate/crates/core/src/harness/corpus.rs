//! Seeded speech-like test signals.
//!
//! Each utterance is a chain of syllables. A syllable is a harmonic source
//! with a slowly gliding, vibrato-modulated fundamental plus breath noise,
//! shaped by three formant resonators and a raised-cosine loudness envelope.
//! Short pauses separate syllables.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dsp::{pole_zero_filter, FilterState, SAMPLE_RATE};

/// Seed used for the default corpus.
pub const CORPUS_SEED: u64 = 0x5EED_C0DE;

/// One named signal of a corpus.
#[derive(Debug, Clone, PartialEq)]
pub struct CorpusItem {
    pub name: String,
    pub samples: Vec<f64>,
}

fn resonator(freq: f64, bandwidth: f64) -> [f64; 3] {
    let r = (-PI * bandwidth / SAMPLE_RATE as f64).exp();
    let w = 2.0 * PI * freq / SAMPLE_RATE as f64;
    [1.0, -2.0 * r * w.cos(), r * r]
}

fn formant_filter(formants: &[(f64, f64)]) -> Vec<f64> {
    formants.iter().fold(vec![1.0], |acc, &(f, b)| {
        let q = resonator(f, b);
        let mut out = vec![0.0; acc.len() + 2];
        for (i, a) in acc.iter().enumerate() {
            for (j, c) in q.iter().enumerate() {
                out[i + j] += a * c;
            }
        }
        out
    })
}

fn syllable<R: Rng>(rng: &mut R, len: usize, state: &mut FilterState) -> Vec<f64> {
    let fs = SAMPLE_RATE as f64;
    let f0_start = rng.gen_range(90.0..240.0);
    let f0_end = f0_start * rng.gen_range(0.8..1.25);
    let vibrato_rate = rng.gen_range(4.0..7.0);
    let vibrato_depth = rng.gen_range(0.0..0.03);
    let breath = rng.gen_range(0.02..0.15);
    let voiced = rng.gen_bool(0.85);
    let formants = [
        (rng.gen_range(300.0..850.0), rng.gen_range(60.0..120.0)),
        (rng.gen_range(900.0..2300.0), rng.gen_range(80.0..160.0)),
        (rng.gen_range(2400.0..3500.0), rng.gen_range(120.0..250.0)),
    ];
    let den = formant_filter(&formants);
    let level = rng.gen_range(0.05..0.3);

    let mut phase = rng.gen_range(0.0..2.0 * PI);
    let mut source = Vec::with_capacity(len);
    for n in 0..len {
        let t = n as f64 / len as f64;
        let f0 = (f0_start + (f0_end - f0_start) * t)
            * (1.0 + vibrato_depth * (2.0 * PI * vibrato_rate * n as f64 / fs).sin());
        phase += 2.0 * PI * f0 / fs;
        let mut v = 0.0;
        if voiced {
            let harmonics = (0.45 * fs / f0) as usize;
            for k in 1..=harmonics {
                v += (k as f64 * phase).sin() / k as f64;
            }
        }
        let noise: f64 = rng.gen_range(-1.0..1.0);
        v += if voiced { breath } else { 0.6 } * noise;
        source.push(v);
    }
    // the filter state carries across syllables, as a vocal tract would ring
    let gain = den.iter().map(|c| c.abs()).sum::<f64>() * 0.05;
    let shaped = pole_zero_filter(&source, &[gain], &den, state).expect("valid resonator");
    shaped
        .iter()
        .enumerate()
        .map(|(n, v)| {
            let env = 0.5 * (1.0 - (2.0 * PI * n as f64 / len as f64).cos());
            level * env * v
        })
        .collect()
}

/// A `seconds`-long speech-like signal at 8 kHz.
pub fn speech_like(seed: u64, seconds: f64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let total = (seconds * SAMPLE_RATE as f64) as usize;
    let mut out = Vec::with_capacity(total);
    let mut state = FilterState::new(6);
    while out.len() < total {
        let len = rng.gen_range(1200..2800);
        out.extend(syllable(&mut rng, len, &mut state));
        let pause = rng.gen_range(80..800);
        out.extend(std::iter::repeat_n(0.0, pause));
    }
    out.truncate(total);
    let peak = out.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if peak > 0.9 {
        out.iter_mut().for_each(|v| *v *= 0.9 / peak);
    }
    out
}

/// A steady vowel: a 120 Hz harmonic source through formants at 700, 1220
/// and 2600 Hz, with a little seeded breath noise and no loudness envelope.
pub fn steady_vowel(seed: u64, seconds: f64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fs = SAMPLE_RATE as f64;
    let len = (seconds * fs) as usize;
    let f0 = 120.0;
    let source: Vec<f64> = (0..len)
        .map(|n| {
            let phase = 2.0 * PI * f0 * n as f64 / fs;
            let harmonics: f64 = (1..=(0.45 * fs / f0) as usize)
                .map(|k| (k as f64 * phase).sin() / k as f64)
                .sum();
            harmonics + 0.02 * rng.gen_range(-1.0..1.0)
        })
        .collect();
    let den = formant_filter(&[(700.0, 80.0), (1220.0, 100.0), (2600.0, 160.0)]);
    let y = pole_zero_filter(&source, &[1.0], &den, &mut FilterState::new(6)).expect("valid resonator");
    let peak = y.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    y.iter().map(|v| 0.5 * v / peak).collect()
}

/// `files` utterances of `seconds` each, named `synth_00.wav`, `synth_01.wav`, ...
pub fn synthetic_corpus(seed: u64, files: usize, seconds: f64) -> Vec<CorpusItem> {
    (0..files)
        .map(|i| CorpusItem {
            name: format!("synth_{i:02}.wav"),
            samples: speech_like(seed.wrapping_add(i as u64), seconds),
        })
        .collect()
}

/// The default 30-second corpus: ten 3-second utterances.
pub fn default_corpus() -> Vec<CorpusItem> {
    synthetic_corpus(CORPUS_SEED, 10, 3.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproducible_and_bounded() {
        let a = speech_like(3, 1.0);
        assert_eq!(a, speech_like(3, 1.0));
        assert_ne!(a, speech_like(4, 1.0));
        assert_eq!(a.len(), 8000);
        assert!(a.iter().all(|v| v.abs() <= 0.9 + 1e-12));
        let rms = (a.iter().map(|v| v * v).sum::<f64>() / a.len() as f64).sqrt();
        assert!(rms > 1e-3, "{rms}");
    }
}
