mod common;

use std::f64::consts::PI;

use celpsy::celp::{pad_signal, EncoderConfig, FrameAnalyzer, Mode, FRAME_LEN, LOOKAHEAD};
use celpsy::dsp::{asymmetric_window, power_spectrum};
use celpsy::psy::{
    bark_of_hz, noise_mask_stages, sliding_max, sliding_median, PsyConfig,
};
use celpsy::weighting::{build_weighting, ComplexityMode, WeightingMode};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Bins within `halfwidth` Bark of bin `i`, found by scanning every bin.
fn neighbours(n: usize, i: usize, halfwidth: f64) -> Vec<usize> {
    let bark = |k: usize| bark_of_hz(k as f64 * 4000.0 / (n - 1) as f64).unwrap();
    let z = bark(i);
    (0..n).filter(|&k| (bark(k) - z).abs() <= halfwidth).collect()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn windowed_median_and_max_match_brute_force(
        spec in prop::collection::vec(-80.0f64..20.0, 129),
        halfwidth in 0.2f64..1.5,
    ) {
        let cfg = PsyConfig { bark_halfwidth: halfwidth, ..PsyConfig::default() };
        let med = sliding_median(&spec, &cfg);
        let max = sliding_max(&spec, &cfg);
        for i in 0..spec.len() {
            let mut vals: Vec<f64> = neighbours(spec.len(), i, halfwidth).iter().map(|&k| spec[k]).collect();
            vals.sort_by(|a, b| a.total_cmp(b));
            let n = vals.len();
            let m = if n % 2 == 1 { vals[n / 2] } else { 0.5 * (vals[n / 2 - 1] + vals[n / 2]) };
            prop_assert_eq!(med[i], m);
            prop_assert_eq!(max[i], vals[n - 1]);
        }
    }

    #[test]
    fn mask_moves_with_input_level(x in prop::collection::vec(-1.0f64..1.0, 200), gain in 0.01f64..20.0) {
        let cfg = PsyConfig::default();
        let a = noise_mask_stages(&power_spectrum(&x, 256).unwrap(), &cfg).unwrap();
        let y: Vec<f64> = x.iter().map(|v| v * gain).collect();
        let b = noise_mask_stages(&power_spectrum(&y, 256).unwrap(), &cfg).unwrap();
        let shift = 20.0 * gain.log10();
        for (p, q) in a.mask.levels_db().iter().zip(b.mask.levels_db()) {
            prop_assert!((q - p - shift).abs() < 1e-6);
        }
        // the smoothed envelope never falls meaningfully below the median
        for (e, m) in a.envelope.iter().zip(&a.median) {
            prop_assert!(*e >= m - 0.5);
        }
    }
}

#[test]
fn compression_halves_distance_to_pivot_at_half_exponent() {
    let x: Vec<f64> = (0..200).map(|n| (0.3 * n as f64).sin() + 0.1 * (1.7 * n as f64).cos()).collect();
    let spec = power_spectrum(&x, 256).unwrap();
    let cfg = PsyConfig { compress_exponent: 0.5, ..PsyConfig::default() };
    let full = noise_mask_stages(&spec, &PsyConfig { compress_exponent: 1.0, ..cfg.clone() }).unwrap();
    let half = noise_mask_stages(&spec, &cfg).unwrap();
    for (m, u) in full.mask.levels_db().iter().zip(&full.uncompressed) {
        assert!((m - u).abs() < 1e-12);
    }
    let pivot = celpsy::psy::mask_pivot(&full.uncompressed);
    for (h, u) in half.mask.levels_db().iter().zip(&full.uncompressed) {
        assert!((h - pivot - 0.5 * (u - pivot)).abs() < 1e-9);
    }
}

#[test]
fn tone_is_depressed_relative_to_the_uncompanded_envelope() {
    let window = asymmetric_window(FRAME_LEN, LOOKAHEAD).unwrap();
    let x: Vec<f64> = (0..200)
        .map(|n| (2.0 * PI * 3000.0 * n as f64 / 8000.0).sin() * window[n])
        .collect();
    let spec = power_spectrum(&x, 256).unwrap();
    let with = noise_mask_stages(&spec, &PsyConfig::default()).unwrap();
    let without = noise_mask_stages(&spec, &PsyConfig { tonality_alpha: 0.0, ..PsyConfig::default() }).unwrap();
    let peak = 96; // 3000 Hz on the 31.25 Hz grid
    let depression = without.uncompressed[peak] - with.uncompressed[peak];
    assert!(depression >= 3.0, "{depression}");
    assert_eq!(without.companded, without.envelope);
}

#[test]
fn white_noise_gives_flat_noise_shape() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let noise: Vec<f64> = (0..50 * FRAME_LEN).map(|_| rng.gen_range(-0.3..0.3)).collect();
    let x = pad_signal(&noise);
    let cfg = EncoderConfig::new(Mode::High, WeightingMode::Psy, ComplexityMode::Full);
    let mut analyzer = FrameAnalyzer::new(&cfg).unwrap();
    let mut mean = vec![0.0; 129];
    for t in 0..50 {
        let fa = analyzer.analyze(&x[t * FRAME_LEN..t * FRAME_LEN + FRAME_LEN + LOOKAHEAD]).unwrap();
        let w = build_weighting(&fa.weighting, cfg.weighting, cfg.complexity, 3).unwrap();
        for (m, v) in mean.iter_mut().zip(w.noise_shape_db(129)) {
            *m += v / 50.0;
        }
    }
    let band = &mean[10..=108];
    let centre = band.iter().sum::<f64>() / band.len() as f64;
    let worst = band.iter().fold(0.0f64, |m, v| m.max((v - centre).abs()));
    assert!(worst <= 3.0, "noise shape deviates {worst} dB from flat");
}
