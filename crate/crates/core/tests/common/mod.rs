#![allow(dead_code)]

use std::f64::consts::PI;

use celpsy::dsp::LpcFilter;
use celpsy::psy::MaskingCurve;
use rand::Rng;

/// Expands `prod (1 - 2 r cos(t) z^-1 + r^2 z^-2)` for the given pole pairs.
pub fn poly_from_poles(poles: &[(f64, f64)]) -> LpcFilter {
    let mut c = vec![1.0];
    for &(r, t) in poles {
        let q = [1.0, -2.0 * r * t.cos(), r * r];
        let mut out = vec![0.0; c.len() + 2];
        for (i, &a) in c.iter().enumerate() {
            for (j, &b) in q.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        c = out;
    }
    LpcFilter::new(c).unwrap()
}

/// Order-10 all-pole polynomial with pole radii in `radius` and random angles.
pub fn random_all_pole<R: Rng>(rng: &mut R, radius: std::ops::Range<f64>) -> LpcFilter {
    let poles: Vec<(f64, f64)> = (0..5)
        .map(|_| (rng.gen_range(radius.clone()), rng.gen_range(0.05..PI - 0.05)))
        .collect();
    poly_from_poles(&poles)
}

/// Mask `10 log10(gain / |A|^2)` on the 129-bin grid.
pub fn all_pole_mask(a: &LpcFilter, gain_db: f64) -> MaskingCurve {
    let levels = a
        .power_response(129)
        .iter()
        .map(|p| gain_db - 10.0 * p.log10())
        .collect();
    MaskingCurve::new(levels, 256).unwrap()
}

/// Smooth random mask: a few random cosines in dB.
pub fn random_smooth_mask<R: Rng>(rng: &mut R) -> MaskingCurve {
    let terms: Vec<(f64, f64, f64)> = (0..6)
        .map(|_| (rng.gen_range(0.5..6.0), rng.gen_range(0.0..2.0 * PI), rng.gen_range(1.0..12.0)))
        .collect();
    let base = rng.gen_range(-60.0..0.0);
    let levels = (0..129)
        .map(|i| {
            let w = PI * i as f64 / 128.0;
            base + terms.iter().map(|(f, ph, amp)| amp * (f * w + ph).cos()).sum::<f64>()
        })
        .collect();
    MaskingCurve::new(levels, 256).unwrap()
}

/// Random minimum-phase filter from reflection coefficients in `(-kmax, kmax)`.
pub fn random_min_phase<R: Rng>(rng: &mut R, order: usize, kmax: f64) -> LpcFilter {
    let mut a = vec![1.0];
    for _ in 0..order {
        let k = rng.gen_range(-kmax..kmax);
        let mut next = a.clone();
        next.push(0.0);
        for j in 1..next.len() {
            next[j] += k * a.get(next.len() - 1 - j).copied().unwrap_or(0.0);
        }
        a = next;
    }
    LpcFilter::new(a).unwrap()
}

/// Solves `R a = -r[1..]` for the symmetric Toeplitz `R` built from
/// `r[0..order]` by Gaussian elimination with partial pivoting. Returns the
/// predictor polynomial `[1, a_1, ..., a_p]`.
pub fn toeplitz_predictor(r: &[f64], order: usize) -> Vec<f64> {
    let mut m: Vec<Vec<f64>> = (0..order)
        .map(|i| {
            let mut row: Vec<f64> = (0..order).map(|j| r[i.abs_diff(j)]).collect();
            row.push(-r[i + 1]);
            row
        })
        .collect();
    for col in 0..order {
        let pivot = (col..order)
            .max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))
            .unwrap();
        m.swap(col, pivot);
        let pivot_row = m[col].clone();
        for row in m.iter_mut().skip(col + 1) {
            let f = row[col] / pivot_row[col];
            for (x, p) in row.iter_mut().zip(&pivot_row).skip(col) {
                *x -= f * p;
            }
        }
    }
    let mut a = vec![0.0; order];
    for i in (0..order).rev() {
        let s: f64 = (i + 1..order).map(|k| m[i][k] * a[k]).sum();
        a[i] = (m[i][order] - s) / m[i][i];
    }
    let mut out = vec![1.0];
    out.extend(a);
    out
}

/// Filters `x` from rest through `num / den` with a plain difference equation.
pub fn direct_filter(x: &[f64], num: &[f64], den: &[f64]) -> Vec<f64> {
    let mut y = vec![0.0; x.len()];
    for n in 0..x.len() {
        let mut acc = 0.0;
        for (k, b) in num.iter().enumerate() {
            if k <= n {
                acc += b * x[n - k];
            }
        }
        for (k, a) in den.iter().enumerate().skip(1) {
            if k <= n {
                acc -= a * y[n - k];
            }
        }
        y[n] = acc / den[0];
    }
    y
}

/// `e` through `1 / synthesis` then through `gain * W_d / W_n`, from rest.
pub fn weighted_synthesis(
    e: &[f64],
    w: &celpsy::weighting::WeightingFilter,
    synthesis: &LpcFilter,
) -> Vec<f64> {
    let s = direct_filter(e, &[1.0], synthesis.coeffs());
    direct_filter(&s, w.den().coeffs(), w.num().coeffs())
        .into_iter()
        .map(|v| v * w.gain())
        .collect()
}

pub fn sq_err(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum()
}

pub fn pearson(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        sab += (x - ma) * (y - mb);
        saa += (x - ma).powi(2);
        sbb += (y - mb).powi(2);
    }
    sab / (saa * sbb).sqrt()
}
