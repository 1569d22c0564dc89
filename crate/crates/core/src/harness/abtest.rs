//! A/B comparison of two encoder configurations over a corpus.

use std::fmt;
use std::path::Path;

use super::corpus::CorpusItem;
use super::metrics::{codec_segmental_snr, noise_mask_correlation, weighted_segmental_snr};
use super::wav::wav_read;
use crate::celp::{decode_stream, encode_signal, EncoderConfig, Mode};
use crate::error::{Error, Result};
use crate::weighting::{ComplexityMode, WeightingMode};

/// Quality figures for one signal under one configuration.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Metrics {
    pub seg_snr_db: f64,
    /// Weighted segmental SNR under the configuration's own weighting.
    pub weighted_snr_db: f64,
    /// Weighted segmental SNR under the masking weighting, common to both sides.
    pub psy_weighted_snr_db: f64,
    /// Correlation of the coding-noise spectrum with the noise mask.
    pub mask_correlation: f64,
}

impl Metrics {
    fn zip(self, o: Self, f: impl Fn(f64, f64) -> f64) -> Self {
        Self {
            seg_snr_db: f(self.seg_snr_db, o.seg_snr_db),
            weighted_snr_db: f(self.weighted_snr_db, o.weighted_snr_db),
            psy_weighted_snr_db: f(self.psy_weighted_snr_db, o.psy_weighted_snr_db),
            mask_correlation: f(self.mask_correlation, o.mask_correlation),
        }
    }

    fn mean(items: impl Iterator<Item = Self>) -> Self {
        let mut n = 0usize;
        let sum = items.fold(Self::default(), |acc, m| {
            n += 1;
            acc.zip(m, |a, b| a + b)
        });
        sum.zip(sum, |a, _| a / n.max(1) as f64)
    }

    fn is_finite(&self) -> bool {
        [self.seg_snr_db, self.weighted_snr_db, self.psy_weighted_snr_db, self.mask_correlation]
            .iter()
            .all(|v| v.is_finite())
    }
}

/// The masking weighting at `mode`, used as the common measuring domain.
pub fn psy_measure(mode: Mode) -> EncoderConfig {
    EncoderConfig::new(mode, WeightingMode::Psy, ComplexityMode::Full)
}

/// Encodes, decodes and scores one signal.
pub fn evaluate(input: &[f64], cfg: &EncoderConfig) -> Result<Metrics> {
    let frames = encode_signal(input, cfg)?;
    let decoded = decode_stream(&frames, cfg.mode)?;
    let measure = EncoderConfig {
        mode: cfg.mode,
        weighting: WeightingMode::Psy,
        complexity: ComplexityMode::Full,
        psy: cfg.psy.clone(),
        weighting_gain: 1.0,
    };
    let m = Metrics {
        seg_snr_db: codec_segmental_snr(input, &decoded)?,
        weighted_snr_db: weighted_segmental_snr(input, &decoded, cfg)?,
        psy_weighted_snr_db: weighted_segmental_snr(input, &decoded, &measure)?,
        mask_correlation: noise_mask_correlation(input, &decoded, &measure)?,
    };
    if !m.is_finite() {
        return Err(Error::Degenerate("non-finite metric".into()));
    }
    Ok(m)
}

#[derive(Debug, Clone, PartialEq)]
pub struct AbRow {
    pub name: String,
    pub a: Metrics,
    pub b: Metrics,
}

/// Per-file and aggregate comparison; aggregates are means of the rows.
#[derive(Debug, Clone, PartialEq)]
pub struct AbReport {
    pub rows: Vec<AbRow>,
    pub mean_a: Metrics,
    pub mean_b: Metrics,
}

impl AbReport {
    /// `B - A` for every aggregate metric.
    pub fn delta(&self) -> Metrics {
        self.mean_b.zip(self.mean_a, |b, a| b - a)
    }
}

/// Compares `a` and `b` on in-memory signals, in name order.
pub fn abtest_items(items: &[CorpusItem], a: &EncoderConfig, b: &EncoderConfig) -> Result<AbReport> {
    if items.is_empty() {
        return Err(Error::invalid("empty corpus"));
    }
    let mut sorted: Vec<&CorpusItem> = items.iter().collect();
    sorted.sort_by(|x, y| x.name.cmp(&y.name));
    let rows = sorted
        .into_iter()
        .map(|it| {
            Ok(AbRow {
                name: it.name.clone(),
                a: evaluate(&it.samples, a)?,
                b: if a == b { evaluate(&it.samples, a)? } else { evaluate(&it.samples, b)? },
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(AbReport {
        mean_a: Metrics::mean(rows.iter().map(|r| r.a)),
        mean_b: Metrics::mean(rows.iter().map(|r| r.b)),
        rows,
    })
}

/// Reads every `.wav` file directly inside `dir`.
pub fn load_corpus(dir: impl AsRef<Path>) -> Result<Vec<CorpusItem>> {
    let mut items = Vec::new();
    for entry in std::fs::read_dir(dir.as_ref())? {
        let path = entry?.path();
        let is_wav = path
            .extension()
            .is_some_and(|e| e.eq_ignore_ascii_case("wav"));
        if path.is_file() && is_wav {
            let name = path
                .file_name()
                .map(|n| n.to_string_lossy().into_owned())
                .unwrap_or_default();
            items.push(CorpusItem {
                name,
                samples: wav_read(&path)?.to_f64(),
            });
        }
    }
    items.sort_by(|x, y| x.name.cmp(&y.name));
    Ok(items)
}

/// Compares `a` and `b` on the WAV files of `dir`.
pub fn abtest(dir: impl AsRef<Path>, a: &EncoderConfig, b: &EncoderConfig) -> Result<AbReport> {
    let items = load_corpus(dir)?;
    abtest_items(&items, a, b)
}

fn metric_cells(m: &Metrics) -> String {
    format!(
        "{:>9.3} {:>9.3} {:>9.3} {:>7.3}",
        m.seg_snr_db, m.weighted_snr_db, m.psy_weighted_snr_db, m.mask_correlation
    )
}

impl fmt::Display for AbReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{:<20} {:>4} {:>9} {:>9} {:>9} {:>7}",
            "file", "side", "segSNR", "wSNR", "psySNR", "corr"
        )?;
        for r in &self.rows {
            writeln!(f, "{:<20} {:>4} {}", r.name, "A", metric_cells(&r.a))?;
            writeln!(f, "{:<20} {:>4} {}", "", "B", metric_cells(&r.b))?;
        }
        writeln!(f, "{:<20} {:>4} {}", "mean", "A", metric_cells(&self.mean_a))?;
        writeln!(f, "{:<20} {:>4} {}", "mean", "B", metric_cells(&self.mean_b))?;
        write!(f, "{:<20} {:>4} {}", "delta", "B-A", metric_cells(&self.delta()))
    }
}

/// Cited PESQ scores for the five complexity variants, for comparison
/// only: they need licensed PESQ, the original corpus and the original
/// codec, none of which this crate reproduces.
pub const CITED_PESQ: [(&str, f64); 5] = [
    ("proposed", 4.256),
    ("C1", 4.252),
    ("C2", 4.259),
    ("C3", 4.246),
    ("reference", 4.164),
];

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexityRow {
    pub label: &'static str,
    pub cited_pesq: f64,
    pub metrics: Metrics,
}

/// Complexity-reduction table: proposed, C1, C2, C3, reference.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexityTable {
    pub mode: Mode,
    pub rows: Vec<ComplexityRow>,
}

pub fn complexity_table(items: &[CorpusItem], mode: Mode) -> Result<ComplexityTable> {
    if items.is_empty() {
        return Err(Error::invalid("empty corpus"));
    }
    let rows = super::config::complexity_presets(mode)
        .into_iter()
        .zip(CITED_PESQ)
        .map(|((label, cfg), (_, pesq))| {
            let metrics = Metrics::mean(
                items
                    .iter()
                    .map(|it| evaluate(&it.samples, &cfg))
                    .collect::<Result<Vec<_>>>()?
                    .into_iter(),
            );
            Ok(ComplexityRow {
                label,
                cited_pesq: pesq,
                metrics,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ComplexityTable { mode, rows })
}

impl fmt::Display for ComplexityTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{:<10} {:>14} {:>9} {:>9} {:>9} {:>7}",
            "encoder", "PESQ (cited)", "segSNR", "wSNR", "psySNR", "corr"
        )?;
        for r in &self.rows {
            writeln!(
                f,
                "{:<10} {:>14.3} {}",
                r.label,
                r.cited_pesq,
                metric_cells(&r.metrics)
            )?;
        }
        write!(
            f,
            "cited PESQ values are not reproduced here; measured columns use mode {}",
            self.mode
        )
    }
}
