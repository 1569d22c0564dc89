use crate::error::{Error, Result};

/// Memory of a direct-form II transposed pole-zero filter.
///
/// Kept separate from the coefficients so that a stream can switch filters
/// between subframes while preserving continuity.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FilterState(Vec<f64>);

impl FilterState {
    pub fn new(len: usize) -> Self {
        Self(vec![0.0; len])
    }

    /// State sized for the given numerator and denominator.
    pub fn for_filter(num: &[f64], den: &[f64]) -> Self {
        Self::new(num.len().max(den.len()).saturating_sub(1))
    }

    pub fn reset(&mut self) {
        self.0.iter_mut().for_each(|s| *s = 0.0);
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

/// Filters `x` through `num(z) / den(z)` with `den[0] == 1`, updating `state`.
pub fn pole_zero_filter(
    x: &[f64],
    num: &[f64],
    den: &[f64],
    state: &mut FilterState,
) -> Result<Vec<f64>> {
    let mut out = vec![0.0; x.len()];
    pole_zero_filter_into(x, num, den, state, &mut out)?;
    Ok(out)
}

/// Like [`pole_zero_filter`] but writes into `out`, which must match `x`.
pub fn pole_zero_filter_into(
    x: &[f64],
    num: &[f64],
    den: &[f64],
    state: &mut FilterState,
    out: &mut [f64],
) -> Result<()> {
    if den.first() != Some(&1.0) {
        return Err(Error::invalid("denominator must start with 1"));
    }
    if num.is_empty() {
        return Err(Error::invalid("numerator must be non-empty"));
    }
    if out.len() != x.len() {
        return Err(Error::invalid("output length must match input"));
    }
    let order = num.len().max(den.len()) - 1;
    if state.0.len() != order {
        return Err(Error::invalid(format!(
            "filter state has length {}, expected {order}",
            state.0.len()
        )));
    }
    let b = |i: usize| num.get(i).copied().unwrap_or(0.0);
    let a = |i: usize| den.get(i).copied().unwrap_or(0.0);
    let s = &mut state.0;
    for (xn, yn) in x.iter().zip(out.iter_mut()) {
        let y = b(0) * xn + s.first().copied().unwrap_or(0.0);
        for i in 0..order {
            let next = if i + 1 < order { s[i + 1] } else { 0.0 };
            s[i] = b(i + 1) * xn - a(i + 1) * y + next;
        }
        *yn = y;
    }
    Ok(())
}
