use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use etacert::npa::NpaLevel;
use serde::Deserialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Output {
    Qr,
    Npa,
    Analytic,
}

/// A level written either as a number (`2`) or a string (`"1+AB"`).
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum LevelSpec {
    Number(u32),
    Text(String),
}

impl LevelSpec {
    fn parse(&self) -> Result<NpaLevel> {
        let text = match self {
            LevelSpec::Number(n) => n.to_string(),
            LevelSpec::Text(s) => s.clone(),
        };
        Ok(text.parse()?)
    }
}

/// Settings read from `--config`. Every field is optional; command-line
/// flags override whatever is given here.
#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub e: Option<Vec<f64>>,
    pub e_min: Option<f64>,
    pub e_max: Option<f64>,
    pub points: Option<usize>,
    pub xi: Option<f64>,
    pub eta: Option<f64>,
    pub tol: Option<f64>,
    level: Option<LevelSpec>,
    levels: Option<Vec<LevelSpec>>,
    pub outputs: Option<Vec<Output>>,
    pub restarts: Option<usize>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub timing: Option<bool>,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }

    /// Levels named by `levels`, or by `level` when only that is present.
    pub fn levels(&self) -> Result<Option<Vec<NpaLevel>>> {
        if let Some(list) = &self.levels {
            return list
                .iter()
                .map(LevelSpec::parse)
                .collect::<Result<_>>()
                .map(Some);
        }
        self.level
            .as_ref()
            .map(|l| l.parse().map(|l| vec![l]))
            .transpose()
    }
}

pub fn parse_level(s: &str) -> std::result::Result<NpaLevel, String> {
    s.parse().map_err(|e: etacert::Error| e.to_string())
}

/// Thread cap from `ETACERT_THREADS`, if set.
pub fn thread_cap() -> Result<Option<usize>> {
    match std::env::var("ETACERT_THREADS") {
        Ok(v) => {
            let n: usize = v.trim().parse().with_context(|| {
                format!("ETACERT_THREADS must be a positive integer, got {v:?}")
            })?;
            if n == 0 {
                bail!("ETACERT_THREADS must be a positive integer, got 0");
            }
            Ok(Some(n))
        }
        Err(_) => Ok(None),
    }
}
