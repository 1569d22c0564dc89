//! Tooling around the codec: synthetic corpus, WAV I/O, quality metrics,
//! curve analysis, settings files and A/B reports.

pub mod abtest;
pub mod analyze;
pub mod config;
pub mod corpus;
pub mod metrics;
pub mod wav;

pub use abtest::{abtest, abtest_items, complexity_table, evaluate, AbReport, ComplexityTable, Metrics};
pub use analyze::{analyze_frame, FrameCurves, CSV_HEADER};
pub use config::{complexity_presets, ConfigFile, WeightingKind};
pub use corpus::{default_corpus, synthetic_corpus, CorpusItem};
pub use metrics::{codec_segmental_snr, segmental_snr, weighted_segmental_snr};
pub use wav::{wav_read, wav_write, WavAudio};
