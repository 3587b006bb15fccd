use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::caption::RefinerConfig;
use crate::catalog::{parse_catalog, reference_catalog, Catalog};
use crate::error::ConfigError;
use crate::geometry::DegeneracyThresholds;
use crate::render::{CanvasSpec, MaskParams, Palette};
use crate::selector::{Complexity, SelectionRules};

/// Samples per image complexity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Counts {
    pub easy: usize,
    pub medium: usize,
    pub hard: usize,
}

impl Default for Counts {
    fn default() -> Self {
        Self {
            easy: 200,
            medium: 400,
            hard: 400,
        }
    }
}

impl Counts {
    pub fn new(easy: usize, medium: usize, hard: usize) -> Self {
        Self { easy, medium, hard }
    }

    pub fn total(&self) -> usize {
        self.easy + self.medium + self.hard
    }

    pub fn get(&self, c: Complexity) -> usize {
        match c {
            Complexity::Easy => self.easy,
            Complexity::Medium => self.medium,
            Complexity::Hard => self.hard,
        }
    }
}

impl FromStr for Counts {
    type Err = String;

    /// `E,M,H`, e.g. `200,400,400`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let [e, m, h] = parts[..] else {
            return Err(format!("expected E,M,H counts, got `{s}`"));
        };
        let p = |v: &str| {
            v.parse::<usize>()
                .map_err(|_| format!("`{v}` is not a non-negative integer"))
        };
        Ok(Self::new(p(e)?, p(m)?, p(h)?))
    }
}

impl fmt::Display for Counts {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.easy, self.medium, self.hard)
    }
}

/// Everything a build depends on. Loaded from a TOML file; every field has a
/// default.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GenConfig {
    pub master_seed: u64,
    /// Catalog document; the shipped reference catalog when unset.
    pub catalog: Option<PathBuf>,
    pub output_dir: PathBuf,
    /// Worker threads; 0 uses the available parallelism.
    pub workers: usize,
    pub counts: Counts,
    pub rules: SelectionRules,
    pub canvas: CanvasSpec,
    pub palette: Palette,
    pub mask: MaskParams,
    pub thresholds: DegeneracyThresholds,
    pub refiner: RefinerConfig,
}

impl Default for GenConfig {
    fn default() -> Self {
        Self {
            master_seed: 0,
            catalog: None,
            output_dir: PathBuf::from("out"),
            workers: 0,
            counts: Counts::default(),
            rules: SelectionRules::default(),
            canvas: CanvasSpec::default(),
            palette: Palette::default(),
            mask: MaskParams::default(),
            thresholds: DegeneracyThresholds::default(),
            refiner: RefinerConfig::default(),
        }
    }
}

impl GenConfig {
    pub fn from_toml_str(text: &str) -> Result<Self, ConfigError> {
        let cfg: GenConfig = toml::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Reads a config file. Relative `catalog` and `output_dir` paths are
    /// resolved against the file's directory.
    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        let mut cfg = Self::from_toml_str(&text)?;
        let base = path.parent().unwrap_or(Path::new(""));
        if let Some(c) = &cfg.catalog {
            if c.is_relative() {
                cfg.catalog = Some(base.join(c));
            }
        }
        if cfg.output_dir.is_relative() {
            cfg.output_dir = base.join(&cfg.output_dir);
        }
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let invalid = |m: String| ConfigError::Invalid(m);
        self.rules.validate().map_err(|e| invalid(e.to_string()))?;
        self.canvas.validate().map_err(invalid)?;
        self.palette.validate().map_err(invalid)?;
        self.mask.validate().map_err(invalid)?;
        self.thresholds.validate().map_err(invalid)?;
        if self.refiner.enabled && self.refiner.endpoint.is_none() {
            return Err(invalid("refiner.enabled requires refiner.endpoint".into()));
        }
        Ok(())
    }

    pub fn load_catalog(&self) -> Result<Catalog, ConfigError> {
        match &self.catalog {
            None => Ok(reference_catalog()),
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|source| ConfigError::Io {
                    path: p.display().to_string(),
                    source,
                })?;
                Ok(parse_catalog(&text)?)
            }
        }
    }

    pub fn worker_count(&self) -> usize {
        if self.workers > 0 {
            self.workers
        } else {
            std::thread::available_parallelism().map_or(1, |n| n.get())
        }
    }
}
