//! Encoder settings from `key = value` files.
//!
//! ```text
//! mode = "high"            # low | mid | high
//! weighting = "psy"        # gamma | psy
//! complexity = "c2"        # full | c1 | c2 | c3
//! gamma1 = 0.9
//! gamma2 = 0.6
//! compress_exponent = 0.6  # any noise-mask parameter
//! ```
//!
//! Every key is optional and overrides the corresponding field of a base
//! configuration. Unknown keys are rejected.

use std::path::Path;

use serde::Deserialize;

use crate::celp::{EncoderConfig, Mode};
use crate::error::{Error, Result};
use crate::weighting::{ComplexityMode, WeightingMode};

/// Which weighting backend to use, without parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WeightingKind {
    Gamma,
    Psy,
}

impl std::str::FromStr for WeightingKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "gamma" => Ok(Self::Gamma),
            "psy" => Ok(Self::Psy),
            _ => Err(Error::invalid(format!("unknown weighting '{s}'"))),
        }
    }
}

pub fn parse_complexity(s: &str) -> Result<ComplexityMode> {
    match s.to_ascii_lowercase().as_str() {
        "full" => Ok(ComplexityMode::Full),
        "c1" => Ok(ComplexityMode::C1),
        "c2" => Ok(ComplexityMode::C2),
        "c3" => Ok(ComplexityMode::C3),
        _ => Err(Error::invalid(format!("unknown complexity '{s}'"))),
    }
}

/// Overrides read from a settings file.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub mode: Option<Mode>,
    pub weighting: Option<WeightingKind>,
    pub complexity: Option<ComplexityMode>,
    pub gamma1: Option<f64>,
    pub gamma2: Option<f64>,
    pub bark_halfwidth: Option<f64>,
    pub tonality_alpha: Option<f64>,
    pub noise_offset_db: Option<f64>,
    pub noise_offset_bands: Option<Vec<(f64, f64)>>,
    pub compress_exponent: Option<f64>,
    pub floor_db: Option<f64>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.message().to_string()))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    /// `base` with every key present in the file replaced.
    pub fn apply(&self, base: &EncoderConfig) -> Result<EncoderConfig> {
        let mut cfg = base.clone();
        if let Some(mode) = self.mode {
            cfg.mode = mode;
        }
        if let Some(c) = self.complexity {
            cfg.complexity = c;
        }
        let (g1, g2) = match base.weighting {
            WeightingMode::Gamma { gamma1, gamma2 } => (gamma1, gamma2),
            WeightingMode::Psy => (WeightingMode::REFERENCE_GAMMA1, WeightingMode::REFERENCE_GAMMA2),
        };
        let kind = self.weighting.unwrap_or(if base.weighting.is_psy() {
            WeightingKind::Psy
        } else {
            WeightingKind::Gamma
        });
        cfg.weighting = match kind {
            WeightingKind::Psy => WeightingMode::Psy,
            WeightingKind::Gamma => {
                WeightingMode::gamma(self.gamma1.unwrap_or(g1), self.gamma2.unwrap_or(g2))?
            }
        };
        let psy = &mut cfg.psy;
        if let Some(v) = self.bark_halfwidth {
            psy.bark_halfwidth = v;
        }
        if let Some(v) = self.tonality_alpha {
            psy.tonality_alpha = v;
        }
        if let Some(v) = self.noise_offset_db {
            psy.noise_offset_db = v;
        }
        if let Some(v) = &self.noise_offset_bands {
            psy.noise_offset_bands = v.clone();
        }
        if let Some(v) = self.compress_exponent {
            psy.compress_exponent = v;
        }
        if let Some(v) = self.floor_db {
            psy.floor_db = v;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

/// The five encoder variants compared in the complexity table, in row order.
pub fn complexity_presets(mode: Mode) -> Vec<(&'static str, EncoderConfig)> {
    vec![
        ("proposed", EncoderConfig::new(mode, WeightingMode::Psy, ComplexityMode::Full)),
        ("C1", EncoderConfig::new(mode, WeightingMode::Psy, ComplexityMode::C1)),
        ("C2", EncoderConfig::new(mode, WeightingMode::Psy, ComplexityMode::C2)),
        ("C3", EncoderConfig::new(mode, WeightingMode::Psy, ComplexityMode::C3)),
        ("reference", EncoderConfig::new(mode, WeightingMode::reference(), ComplexityMode::Full)),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overrides_only_present_keys() {
        let f = ConfigFile::parse("mode = \"low\"\nweighting = \"psy\"\ncompress_exponent = 0.5\n").unwrap();
        let cfg = f.apply(&EncoderConfig::default()).unwrap();
        assert_eq!(cfg.mode, Mode::Low);
        assert!(cfg.weighting.is_psy());
        assert_eq!(cfg.psy.compress_exponent, 0.5);
        assert_eq!(cfg.psy.tonality_alpha, 0.5);
        assert_eq!(cfg.complexity, ComplexityMode::Full);
    }

    #[test]
    fn gamma_keys_and_validation() {
        let cfg = ConfigFile::parse("gamma1 = 0.94\ngamma2 = 0.5")
            .unwrap()
            .apply(&EncoderConfig::default())
            .unwrap();
        assert_eq!(cfg.weighting, WeightingMode::Gamma { gamma1: 0.94, gamma2: 0.5 });
        let bad = ConfigFile::parse("gamma1 = 0.5\ngamma2 = 0.9").unwrap();
        assert!(bad.apply(&EncoderConfig::default()).is_err());
        assert!(matches!(ConfigFile::parse("colour = 1"), Err(Error::Config(_))));
        assert!(matches!(ConfigFile::parse("mode = \"ultra\""), Err(Error::Config(_))));
        let bad = ConfigFile::parse("compress_exponent = 2.0").unwrap();
        assert!(bad.apply(&EncoderConfig::default()).is_err());
    }
}
