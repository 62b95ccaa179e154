//! JSON sweep configuration, schema version 1.
//!
//! Only `schema` is required. `alpha_grid` is either an explicit list of
//! angles or `{"start", "stop", "points"}` for `points` angles evenly spaced
//! in `[start, stop)`.

use std::f64::consts::TAU;
use std::path::Path;

use hadamard_core::experiment::{EfficiencyModulation, SweepConfig, DETECTORS};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AlphaGrid {
    List(Vec<f64>),
    Range(GridRange),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridRange {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

impl Default for AlphaGrid {
    fn default() -> Self {
        AlphaGrid::Range(GridRange { start: 0.0, stop: TAU, points: 64 })
    }
}

impl AlphaGrid {
    pub fn points(&self) -> Vec<f64> {
        match self {
            AlphaGrid::List(v) => v.clone(),
            AlphaGrid::Range(r) => {
                let step = (r.stop - r.start) / r.points as f64;
                (0..r.points).map(|k| r.start + step * k as f64).collect()
            }
        }
    }
}

fn unit_efficiencies() -> [f64; DETECTORS] {
    [1.0; DETECTORS]
}

fn one() -> f64 {
    1.0
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepFile {
    pub schema: u32,
    #[serde(default)]
    pub alpha_grid: AlphaGrid,
    #[serde(default)]
    pub pair_rate: f64,
    #[serde(default)]
    pub singles_rate: f64,
    #[serde(default = "unit_efficiencies")]
    pub efficiencies: [f64; DETECTORS],
    #[serde(default)]
    pub accidental_rate: f64,
    #[serde(default = "one")]
    pub x: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub rail_phases: [f64; 3],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulation: Option<EfficiencyModulation>,
}

impl SweepFile {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::config(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text).map_err(|msg| CliError::config(format!("{}: {msg}", path.display())))
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let file: SweepFile = serde_path_to_error::deserialize(de).map_err(|e| {
            let field = e.path().to_string();
            if field == "." {
                e.inner().to_string()
            } else {
                format!("field `{field}`: {}", e.inner())
            }
        })?;
        if file.schema != SCHEMA_VERSION {
            return Err(format!("field `schema`: unsupported version {}, expected {SCHEMA_VERSION}", file.schema));
        }
        if let AlphaGrid::Range(r) = &file.alpha_grid {
            if r.points == 0 {
                return Err("field `alpha_grid.points`: must be positive".into());
            }
        }
        Ok(file)
    }

    /// Library configuration, with `seed` replacing the file's seed if given.
    pub fn resolve(&self, seed: Option<u64>) -> CliResult<SweepConfig> {
        let config = SweepConfig {
            alpha_grid: self.alpha_grid.points(),
            pair_rate: self.pair_rate,
            singles_rate: self.singles_rate,
            efficiencies: self.efficiencies,
            accidental_rate: self.accidental_rate,
            x: self.x,
            seed: seed.unwrap_or(self.seed),
            rail_phases: self.rail_phases,
            modulation: self.modulation,
        };
        config.validate().map_err(|e| CliError::config(format!("invalid config: {e}")))?;
        Ok(config)
    }

    /// The resolved configuration in file form, with the grid spelled out.
    pub fn resolved(config: &SweepConfig) -> Self {
        SweepFile {
            schema: SCHEMA_VERSION,
            alpha_grid: AlphaGrid::List(config.alpha_grid.clone()),
            pair_rate: config.pair_rate,
            singles_rate: config.singles_rate,
            efficiencies: config.efficiencies,
            accidental_rate: config.accidental_rate,
            x: config.x,
            seed: config.seed,
            rail_phases: config.rail_phases,
            modulation: config.modulation,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_takes_defaults() {
        let f = SweepFile::parse(r#"{"schema": 1}"#).unwrap();
        assert_eq!(f.efficiencies, [1.0; 4]);
        assert_eq!(f.x, 1.0);
        let grid = f.alpha_grid.points();
        assert_eq!(grid.len(), 64);
        assert!(grid.iter().all(|&a| (0.0..TAU).contains(&a)));
    }

    #[test]
    fn explicit_grid() {
        let f = SweepFile::parse(r#"{"schema": 1, "alpha_grid": [0.5, 0.25]}"#).unwrap();
        assert_eq!(f.alpha_grid.points(), vec![0.5, 0.25]);
    }

    #[test]
    fn diagnostics_name_the_field() {
        let err = SweepFile::parse("{\"schema\": 1,\n \"pair_rate\": \"lots\"}").unwrap_err();
        assert!(err.contains("pair_rate") && err.contains("line 2"), "{err}");
        let err = SweepFile::parse(r#"{"schema": 1, "pair_rat": 3}"#).unwrap_err();
        assert!(err.contains("pair_rat"), "{err}");
        let err = SweepFile::parse(r#"{"schema": 2}"#).unwrap_err();
        assert!(err.contains("schema"), "{err}");
        assert!(SweepFile::parse(r#"{"pair_rate": 1}"#).unwrap_err().contains("schema"));
        assert!(SweepFile::parse("{\"schema\": 1,").is_err());
    }

    #[test]
    fn validation_errors_are_config_errors() {
        let f = SweepFile::parse(r#"{"schema": 1, "x": 1.5}"#).unwrap();
        assert_eq!(f.resolve(None).unwrap_err().exit_code(), 2);
    }

    #[test]
    fn resolved_form_round_trips() {
        let f = SweepFile::parse(r#"{"schema": 1, "pair_rate": 10, "seed": 4}"#).unwrap();
        let config = f.resolve(Some(9)).unwrap();
        assert_eq!(config.seed, 9);
        let text = serde_json::to_string(&SweepFile::resolved(&config)).unwrap();
        assert_eq!(SweepFile::parse(&text).unwrap().resolve(None).unwrap(), config);
    }
}
