//! Line spectral pair conversion.
//!
//! The sum and difference polynomials `P(z) = A(z) + z^-(p+1) A(1/z)` and
//! `Q(z) = A(z) - z^-(p+1) A(1/z)` have their roots on the unit circle. After
//! removing the trivial roots at `z = -1` (from `P`) and `z = 1` (from `Q`)
//! each becomes a symmetric polynomial that can be written as a Chebyshev
//! series in `x = cos(w)`. Roots are bracketed on a uniform frequency grid and
//! refined by bisection in `x`.

use std::f64::consts::PI;

use super::lpc::LpcFilter;
use crate::error::{Error, Result};

const GRID_POINTS: usize = 512;
const BISECTIONS: usize = 40;

/// Minimum spacing enforced between neighbouring LSPs after interpolation or
/// dequantization, in radians.
pub const MIN_LSP_GAP: f64 = 0.008;

/// LSP frequencies in radians, strictly increasing inside `(0, pi)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LspVector(Vec<f64>);

impl LspVector {
    pub fn new(freqs: Vec<f64>) -> Result<Self> {
        if freqs.is_empty() || !freqs.len().is_multiple_of(2) {
            return Err(Error::invalid("LSP order must be even and non-zero"));
        }
        if !freqs.iter().all(|&f| f > 0.0 && f < PI) {
            return Err(Error::invalid("LSP frequencies must lie in (0, pi)"));
        }
        if !freqs.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::invalid("LSP frequencies must be strictly increasing"));
        }
        Ok(Self(freqs))
    }

    /// Evenly spaced LSPs `k * pi / (order + 1)`, the LSPs of `A(z) = 1`.
    pub fn uniform(order: usize) -> Self {
        let step = PI / (order + 1) as f64;
        Self((1..=order).map(|k| k as f64 * step).collect())
    }

    /// Sorts and pushes values apart so that neighbours are at least `gap`
    /// apart and the ends stay `gap` away from 0 and pi.
    pub fn from_unordered(mut freqs: Vec<f64>, gap: f64) -> Result<Self> {
        let n = freqs.len();
        if n == 0 || !n.is_multiple_of(2) || (n + 1) as f64 * gap >= PI {
            return Err(Error::invalid("cannot space LSPs"));
        }
        if freqs.iter().any(|f| !f.is_finite()) {
            return Err(Error::invalid("LSP frequencies must be finite"));
        }
        freqs.sort_by(|a, b| a.total_cmp(b));
        let mut lo = gap;
        for f in freqs.iter_mut() {
            *f = f.max(lo);
            lo = *f + gap;
        }
        let mut hi = PI - gap;
        for f in freqs.iter_mut().rev() {
            *f = f.min(hi);
            hi = *f - gap;
        }
        Self::new(freqs)
    }

    pub fn order(&self) -> usize {
        self.0.len()
    }

    pub fn freqs(&self) -> &[f64] {
        &self.0
    }
}

/// Coefficients of `P(z)/(1+z^-1)` and `Q(z)/(1-z^-1)`, each symmetric of
/// degree `p`.
fn deflated_sum_difference(a: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let p = a.len() - 1;
    let coef = |k: usize| if k <= p { a[k] } else { 0.0 };
    let mut ps = vec![0.0; p + 1];
    let mut qs = vec![0.0; p + 1];
    let mut prev_p = 0.0;
    let mut prev_q = 0.0;
    for k in 0..=p {
        let sum = coef(k) + coef(p + 1 - k);
        let diff = coef(k) - coef(p + 1 - k);
        ps[k] = sum - prev_p;
        qs[k] = diff + prev_q;
        prev_p = ps[k];
        prev_q = qs[k];
    }
    (ps, qs)
}

/// Evaluates `e^{j p w / 2} C(z)` for symmetric `c` of even degree `p` as a
/// Chebyshev series in `x = cos(w)`.
fn chebyshev_eval(c: &[f64], x: f64) -> f64 {
    let half = (c.len() - 1) / 2;
    // sum_{k<half} 2 c[k] T_{half-k}(x) + c[half]
    let mut t_prev = 1.0;
    let mut t_cur = x;
    let mut acc = c[half];
    for n in 1..=half {
        acc += 2.0 * c[half - n] * t_cur;
        let t_next = 2.0 * x * t_cur - t_prev;
        t_prev = t_cur;
        t_cur = t_next;
    }
    acc
}

fn bracket_roots(c: &[f64], out: &mut Vec<f64>) {
    let mut w_lo = 0.0;
    let mut f_lo = chebyshev_eval(c, 1.0);
    for i in 1..=GRID_POINTS {
        let w_hi = PI * i as f64 / GRID_POINTS as f64;
        let f_hi = chebyshev_eval(c, w_hi.cos());
        if f_lo == 0.0 {
            if w_lo > 0.0 {
                out.push(w_lo);
            }
        } else if f_lo * f_hi < 0.0 {
            let (mut x_lo, mut x_hi) = (w_lo.cos(), w_hi.cos());
            let mut fx_lo = f_lo;
            for _ in 0..BISECTIONS {
                let mid = 0.5 * (x_lo + x_hi);
                let fm = chebyshev_eval(c, mid);
                if fm * fx_lo > 0.0 {
                    x_lo = mid;
                    fx_lo = fm;
                } else {
                    x_hi = mid;
                }
            }
            out.push((0.5 * (x_lo + x_hi)).acos());
        }
        w_lo = w_hi;
        f_lo = f_hi;
    }
}

/// Converts a minimum-phase `A(z)` of even order to its LSPs.
pub fn lpc_to_lsp(a: &LpcFilter) -> Result<LspVector> {
    let p = a.order();
    if p == 0 || !p.is_multiple_of(2) {
        return Err(Error::invalid("LSP conversion needs an even, non-zero order"));
    }
    let (ps, qs) = deflated_sum_difference(a.coeffs());
    let mut p_roots = Vec::with_capacity(p / 2);
    let mut q_roots = Vec::with_capacity(p / 2);
    bracket_roots(&ps, &mut p_roots);
    bracket_roots(&qs, &mut q_roots);
    let found = p_roots.len() + q_roots.len();
    if p_roots.len() != p / 2 || q_roots.len() != p / 2 {
        return Err(Error::LspConversion { found, expected: p });
    }
    let mut freqs = Vec::with_capacity(p);
    for (pr, qr) in p_roots.into_iter().zip(q_roots) {
        freqs.push(pr);
        freqs.push(qr);
    }
    // Interlacing must hold for a minimum-phase input; never hand back a
    // vector that breaks it.
    LspVector::new(freqs).map_err(|_| Error::LspConversion { found, expected: p })
}

fn multiply_quadratics(roots: impl Iterator<Item = f64>, p: usize) -> Vec<f64> {
    let mut poly = vec![0.0; p + 2];
    poly[0] = 1.0;
    let mut deg = 0;
    for w in roots {
        let c = -2.0 * w.cos();
        for k in (0..=deg + 2).rev() {
            let mut v = poly[k];
            if k >= 1 {
                v += c * poly[k - 1];
            }
            if k >= 2 {
                v += poly[k - 2];
            }
            poly[k] = v;
        }
        deg += 2;
    }
    poly
}

/// Rebuilds `A(z)` from its LSPs.
pub fn lsp_to_lpc(lsp: &LspVector) -> LpcFilter {
    let p = lsp.order();
    let freqs = lsp.freqs();
    let pp = multiply_quadratics(freqs.iter().step_by(2).copied(), p);
    let qq = multiply_quadratics(freqs.iter().skip(1).step_by(2).copied(), p);
    // P = pp * (1 + z^-1), Q = qq * (1 - z^-1), A = (P + Q) / 2
    let mut coeffs = vec![0.0; p + 1];
    for k in 0..=p {
        let prev_p = if k > 0 { pp[k - 1] } else { 0.0 };
        let prev_q = if k > 0 { qq[k - 1] } else { 0.0 };
        coeffs[k] = 0.5 * ((pp[k] + prev_p) + (qq[k] - prev_q));
    }
    coeffs[0] = 1.0;
    LpcFilter::new(coeffs).expect("LSP product yields leading 1")
}

/// Linear interpolation weight for subframe `k` of a 4-subframe frame.
pub fn subframe_weight(k: usize) -> f64 {
    (k + 1) as f64 / 4.0
}

/// `(1 - w) * prev + w * cur` with `w = (k + 1) / 4`, re-spaced if needed.
pub fn interpolate_lsp(prev: &LspVector, cur: &LspVector, k: usize) -> LspVector {
    let w = subframe_weight(k);
    if w >= 1.0 {
        return cur.clone();
    }
    let mixed: Vec<f64> = prev
        .0
        .iter()
        .zip(&cur.0)
        .map(|(p, c)| (1.0 - w) * p + w * c)
        .collect();
    match LspVector::new(mixed.clone()) {
        Ok(v) => v,
        Err(_) => LspVector::from_unordered(mixed, MIN_LSP_GAP).unwrap_or_else(|_| cur.clone()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_filter_gives_uniform_lsps() {
        // Roots of 1 + z^-11 and 1 - z^-11 other than z = +-1 are at
        // m * pi / 11, odd m from P and even m from Q.
        let lsp = lpc_to_lsp(&LpcFilter::flat(10)).unwrap();
        for (i, &f) in lsp.freqs().iter().enumerate() {
            let expected = (i + 1) as f64 * PI / 11.0;
            assert!((f - expected).abs() < 1e-12, "{i}: {f} vs {expected}");
        }
        let back = lsp_to_lpc(&lsp);
        for &c in &back.coeffs()[1..] {
            assert!(c.abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_unordered_vectors() {
        assert!(LspVector::new(vec![0.3, 0.2]).is_err());
        assert!(LspVector::new(vec![0.0, 0.2]).is_err());
        assert!(LspVector::new(vec![0.1, 0.2, 0.3]).is_err());
    }

    #[test]
    fn non_minimum_phase_input_fails() {
        let mut c = vec![0.0; 11];
        c[0] = 1.0;
        c[1] = -2.5;
        c[2] = 1.5;
        let a = LpcFilter::new(c).unwrap();
        assert!(matches!(lpc_to_lsp(&a), Err(Error::LspConversion { .. })));
    }

    #[test]
    fn interpolation_examples() {
        let prev = LspVector::new(vec![0.2, 0.6]).unwrap();
        let cur = LspVector::new(vec![0.4, 0.8]).unwrap();
        assert_eq!(interpolate_lsp(&prev, &cur, 3), cur);
        assert_eq!(interpolate_lsp(&cur, &cur, 0), cur);
        let mid = interpolate_lsp(&prev, &cur, 1);
        assert!((mid.freqs()[0] - 0.3).abs() < 1e-15);
        assert!((mid.freqs()[1] - 0.7).abs() < 1e-15);
    }

    #[test]
    fn spacing_is_enforced() {
        let v = LspVector::from_unordered(vec![0.5, 0.5, 0.0, 3.2], MIN_LSP_GAP).unwrap();
        let f = v.freqs();
        assert!(f[0] >= MIN_LSP_GAP);
        assert!(f.windows(2).all(|w| w[1] - w[0] >= MIN_LSP_GAP - 1e-15));
        assert!(f[3] <= PI - MIN_LSP_GAP);
    }
}
