//! Generated codebooks shared by encoder and decoder.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::Mode;

/// Seed of the innovation codebooks; the mode id is added to it.
const INNOVATION_SEED: u64 = 0x4350_5359_0001;

const CENTER_TAPS: usize = 8;
const CENTER_MAX: f64 = 1.2;
const SIDE_TAPS: [f64; 4] = [-0.3, 0.0, 0.25, 0.5];

/// Jointly quantized 3-tap pitch gains `(g0, g1, g2)`, with `g0 == g2`.
#[derive(Debug, Clone, PartialEq)]
pub struct GainCodebook {
    entries: Vec<[f64; 3]>,
}

impl Default for GainCodebook {
    fn default() -> Self {
        let mut entries = Vec::with_capacity(CENTER_TAPS * SIDE_TAPS.len());
        for c in 0..CENTER_TAPS {
            let center = CENTER_MAX * c as f64 / (CENTER_TAPS - 1) as f64;
            for &side in &SIDE_TAPS {
                entries.push([side, center, side]);
            }
        }
        Self { entries }
    }
}

impl GainCodebook {
    pub fn from_entries(entries: Vec<[f64; 3]>) -> Self {
        Self { entries }
    }

    pub fn entries(&self) -> &[[f64; 3]] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, index: usize) -> Option<&[f64; 3]> {
        self.entries.get(index)
    }
}

/// Unit-RMS Gaussian sub-vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct InnovationCodebook {
    dim: usize,
    vectors: Vec<f64>,
}

impl InnovationCodebook {
    pub fn generate(entries: usize, dim: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut vectors = Vec::with_capacity(entries * dim);
        for _ in 0..entries {
            let v: Vec<f64> = (0..dim).map(|_| StandardNormal.sample(&mut rng)).collect();
            let rms = (v.iter().map(|x| x * x).sum::<f64>() / dim as f64).sqrt();
            vectors.extend(v.iter().map(|x| x / rms));
        }
        Self { dim, vectors }
    }

    pub fn for_mode(mode: Mode) -> Self {
        Self::generate(
            1 << mode.subvector_bits(),
            mode.subvector_len(),
            INNOVATION_SEED + mode.id() as u64,
        )
    }

    /// Builds a book from explicit vectors, all of length `dim`.
    pub fn from_vectors(dim: usize, vectors: Vec<Vec<f64>>) -> Self {
        assert!(vectors.iter().all(|v| v.len() == dim));
        Self {
            dim,
            vectors: vectors.concat(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.vectors.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vector(&self, index: usize) -> &[f64] {
        &self.vectors[index * self.dim..(index + 1) * self.dim]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[f64]> {
        self.vectors.chunks_exact(self.dim)
    }
}

/// All tables a codec instance needs for one mode.
#[derive(Debug, Clone, PartialEq)]
pub struct Codebooks {
    pub gain3: GainCodebook,
    pub innovation: InnovationCodebook,
}

impl Codebooks {
    pub fn for_mode(mode: Mode) -> Self {
        Self {
            gain3: GainCodebook::default(),
            innovation: InnovationCodebook::for_mode(mode),
        }
    }
}
