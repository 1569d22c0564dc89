//! Narrowband CELP speech codec with two interchangeable noise-weighting
//! backends: the classic bandwidth-expanded `A(z/g1)/A(z/g2)` filter and a
//! pole-zero filter fitted to a noise-masking curve.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bitstream;
pub mod celp;
pub mod dsp;
pub mod error;
pub mod harness;
pub mod psy;
pub mod weighting;

pub use error::{Error, Result};
