use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use nullcorr::cohom::{ExprError, SheafExpr};
use nullcorr::exactlin::{FieldSpec, LinalgError, DEFAULT_PRIME};
use nullcorr::monad::{MonadError, Weights};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("invalid job config: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported schema version {0}, expected {SCHEMA_VERSION}")]
    Schema(u32),
    #[error(transparent)]
    Field(#[from] LinalgError),
    #[error("field override must be p=<prime> or rational, got {0:?}")]
    FieldOverride(String),
    #[error("NULLCORR_SEED must be an unsigned integer, got {0:?}")]
    Seed(String),
    #[error("twist range [{0}, {1}] is empty")]
    EmptyTwistRange(i64, i64),
    #[error("task {index}: {reason}")]
    Task { index: usize, reason: String },
    #[error(transparent)]
    Monad(#[from] MonadError),
    #[error("unknown preset {0:?}")]
    Preset(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum Forms {
    Random {
        seed: u64,
    },
    /// Each form is a list of terms such as `"3*x0^2*x1"`.
    Explicit {
        f: Vec<Vec<String>>,
        g: Vec<Vec<String>>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "task", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Task {
    Validate,
    Chern,
    CohomTable { expr: SheafExpr },
    CertifyStability,
    Hoppe { j: usize },
    Kuranishi,
    VerifyPaper,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Output {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub json_path: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub csv_path: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobConfig {
    pub schema: u32,
    pub weights: Weights,
    #[serde(default = "default_field")]
    pub field: FieldSpec,
    pub forms: Forms,
    pub tasks: Vec<Task>,
    #[serde(default = "default_twists")]
    pub twist_range: (i64, i64),
    #[serde(default)]
    pub output: Output,
}

fn default_field() -> FieldSpec {
    FieldSpec::PrimeField { p: DEFAULT_PRIME }
}

fn default_twists() -> (i64, i64) {
    (-3, 3)
}

impl JobConfig {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        let cfg: JobConfig = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &std::path::Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.schema != SCHEMA_VERSION {
            return Err(ConfigError::Schema(self.schema));
        }
        self.field.validate()?;
        let (lo, hi) = self.twist_range;
        if lo > hi {
            return Err(ConfigError::EmptyTwistRange(lo, hi));
        }
        let n = self.weights.n();
        for (index, task) in self.tasks.iter().enumerate() {
            let reason = match task {
                Task::CohomTable { expr } => {
                    expr.check_scope().err().map(|e: ExprError| e.to_string())
                }
                Task::Hoppe { j } if 2 * j + 1 > n => {
                    Some(format!("Hoppe index j = {j} needs 2j+1 <= n = {n}"))
                }
                _ => None,
            };
            if let Some(reason) = reason {
                return Err(ConfigError::Task { index, reason });
            }
        }
        Ok(())
    }

    /// Applies `--field` and `NULLCORR_SEED`; the seed only matters for random forms.
    pub fn with_overrides(
        mut self,
        field: Option<FieldSpec>,
        seed: Option<u64>,
    ) -> Result<Self, ConfigError> {
        if let Some(f) = field {
            f.validate()?;
            self.field = f;
        }
        if let (Some(s), Forms::Random { seed }) = (seed, &mut self.forms) {
            *seed = s;
        }
        Ok(self)
    }
}

/// `p=<prime>` or `rational`.
pub fn parse_field(s: &str) -> Result<FieldSpec, ConfigError> {
    let spec = match s.trim() {
        "rational" | "rationals" => FieldSpec::Rationals,
        other => {
            let p = other
                .strip_prefix("p=")
                .and_then(|p| p.parse::<u64>().ok())
                .ok_or_else(|| ConfigError::FieldOverride(s.to_string()))?;
            FieldSpec::prime(p)?
        }
    };
    Ok(spec)
}

pub fn parse_seed(s: &str) -> Result<u64, ConfigError> {
    s.trim()
        .parse()
        .map_err(|_| ConfigError::Seed(s.to_string()))
}

pub const PRESETS: [(&str, &str); 2] = [
    ("classical", include_str!("../presets/classical.json")),
    ("p5-weighted", include_str!("../presets/p5-weighted.json")),
];

pub fn preset(name: &str) -> Result<JobConfig, ConfigError> {
    let (_, text) = PRESETS
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| ConfigError::Preset(name.to_string()))?;
    JobConfig::from_json(text)
}
