mod common;

use celpsy::weighting::{
    all_pole_shape_db, estimate_numerator, fit_rms_db, mask_to_denominator, WeightingFilter,
    WEIGHTING_ORDER,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn recovers_known_all_pole_coefficients() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst_coef: f64 = 0.0;
    let mut worst_rms: f64 = 0.0;
    for _ in 0..100 {
        let a = common::random_all_pole(&mut rng, 0.3..0.85);
        let mask = common::all_pole_mask(&a, -30.0);
        let fit = mask_to_denominator(&mask, WEIGHTING_ORDER).unwrap();
        for (x, y) in fit.filter.coeffs().iter().zip(a.coeffs()) {
            worst_coef = worst_coef.max((x - y).abs());
        }
        let num = estimate_numerator(&mask, &fit.filter, WEIGHTING_ORDER).unwrap();
        for c in &num.coeffs()[1..] {
            assert!(c.abs() < 1e-3);
        }
        let w = WeightingFilter::new(num, fit.filter);
        worst_rms = worst_rms.max(fit_rms_db(mask.levels_db(), &w.noise_shape_db(129)));
    }
    eprintln!("worst coefficient error {worst_coef:e}, worst rms {worst_rms:e} dB");
    assert!(worst_coef <= 1e-3);
    assert!(worst_rms <= 0.1);
}

#[test]
fn numerator_never_hurts_on_smooth_masks() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut worst: f64 = 0.0;
    for i in 0..500 {
        let mask = common::random_smooth_mask(&mut rng);
        let fit = mask_to_denominator(&mask, WEIGHTING_ORDER).unwrap();
        assert!(fit.filter.is_minimum_phase());
        let den_only = fit_rms_db(mask.levels_db(), &all_pole_shape_db(&fit.filter, 129));
        let num = estimate_numerator(&mask, &fit.filter, WEIGHTING_ORDER).unwrap();
        let w = WeightingFilter::new(num, fit.filter);
        assert!(w.is_minimum_phase());
        let both = fit_rms_db(mask.levels_db(), &w.noise_shape_db(129));
        worst = worst.max(both);
        assert!(both <= den_only + 1e-9, "case {i}: {both} > {den_only}");
        assert!(both <= 6.0, "case {i}: {both}");
    }
    eprintln!("worst pole-zero fit {worst} dB");
}
