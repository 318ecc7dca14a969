use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use veritas_core::{PipelineKind, ScorerKind};
use veritas_eval::{DEFAULT_CALIBRATION_FRACTION, DEFAULT_SPLIT_SEED};
use veritas_retrieval::{DEFAULT_SEARCH_BASE, DEFAULT_TOP_K, DEFAULT_USER_AGENT};

use crate::args::GlobalArgs;
use crate::error::CliError;

pub const MOCK_BACKEND: &str = "mock";
pub const DEFAULT_BACKEND_URL: &str = "http://127.0.0.1:8000";
pub const DEFAULT_PIPELINE: PipelineKind = PipelineKind::Article;
pub const DEFAULT_SCORER: ScorerKind = ScorerKind::SummacZs;

/// Optional defaults read from `--config`.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub backend_url: Option<String>,
    pub user_agent: Option<String>,
    pub fixtures: Option<PathBuf>,
    pub search_url: Option<String>,
    pub k: Option<usize>,
    pub seed: Option<u64>,
    pub calib_frac: Option<f64>,
    pub pipeline: Option<PipelineKind>,
    pub scorer: Option<ScorerKind>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        toml::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
    }
}

/// Fully resolved run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub backend_url: String,
    pub user_agent: String,
    /// Set means offline replay: no live web traffic.
    pub fixtures: Option<PathBuf>,
    pub search_url: String,
    pub k: usize,
    pub seed: u64,
    pub calib_frac: f64,
    pub pipeline: PipelineKind,
    pub scorer: ScorerKind,
    pub json: bool,
}

impl RunConfig {
    pub fn resolve(args: &GlobalArgs) -> Result<Self, CliError> {
        let file = match &args.config {
            Some(p) => FileConfig::load(p)?,
            None => FileConfig::default(),
        };
        let base = args.config.as_ref().and_then(|p| p.parent()).map(Path::to_path_buf);
        let fixtures = args.fixtures.clone().or_else(|| {
            file.fixtures.as_ref().map(|f| match &base {
                Some(b) if f.is_relative() => b.join(f),
                _ => f.clone(),
            })
        });
        let cfg = RunConfig {
            backend_url: args.backend_url.clone().or(file.backend_url).unwrap_or_else(|| DEFAULT_BACKEND_URL.into()),
            user_agent: args.user_agent.clone().or(file.user_agent).unwrap_or_else(|| DEFAULT_USER_AGENT.into()),
            fixtures,
            search_url: args.search_url.clone().or(file.search_url).unwrap_or_else(|| DEFAULT_SEARCH_BASE.into()),
            k: args.k.or(file.k).unwrap_or(DEFAULT_TOP_K),
            seed: args.seed.or(file.seed).unwrap_or(DEFAULT_SPLIT_SEED),
            calib_frac: file.calib_frac.unwrap_or(DEFAULT_CALIBRATION_FRACTION),
            pipeline: file.pipeline.unwrap_or(DEFAULT_PIPELINE),
            scorer: file.scorer.unwrap_or(DEFAULT_SCORER),
            json: args.json,
        };
        if cfg.k == 0 {
            return Err(CliError::Usage("--k must be at least 1".into()));
        }
        Ok(cfg)
    }

    pub fn with_calib_frac(mut self, frac: Option<f64>) -> Result<Self, CliError> {
        if let Some(f) = frac {
            self.calib_frac = f;
        }
        if !(self.calib_frac > 0.0 && self.calib_frac < 1.0) {
            return Err(CliError::Usage(format!("--calib-frac must lie in (0, 1), got {}", self.calib_frac)));
        }
        Ok(self)
    }

    pub fn is_mock(&self) -> bool {
        self.backend_url.eq_ignore_ascii_case(MOCK_BACKEND)
    }

    pub fn is_offline(&self) -> bool {
        self.fixtures.is_some()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults() {
        let c = RunConfig::resolve(&GlobalArgs::default()).unwrap();
        assert_eq!(c.k, 3);
        assert_eq!(c.seed, 42);
        assert_eq!(c.calib_frac, 0.2);
        assert_eq!(c.backend_url, DEFAULT_BACKEND_URL);
        assert!(!c.is_offline());
    }

    #[test]
    fn flags_beat_config_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("veritas.toml");
        fs::write(&path, "k = 5\nseed = 7\nbackend_url = \"mock\"\nfixtures = \"fx\"\ncalib_frac = 0.5\n").unwrap();
        let args = GlobalArgs { config: Some(path), k: Some(2), ..Default::default() };
        let c = RunConfig::resolve(&args).unwrap();
        assert_eq!(c.k, 2);
        assert_eq!(c.seed, 7);
        assert!(c.is_mock());
        assert_eq!(c.fixtures, Some(dir.path().join("fx")));
        assert_eq!(c.clone().with_calib_frac(None).unwrap().calib_frac, 0.5);
        assert_eq!(c.with_calib_frac(Some(0.3)).unwrap().calib_frac, 0.3);
    }

    #[test]
    fn bad_values_are_usage_errors() {
        let c = RunConfig::resolve(&GlobalArgs::default()).unwrap();
        assert!(matches!(c.with_calib_frac(Some(1.0)), Err(CliError::Usage(_))));
        let args = GlobalArgs { k: Some(0), ..Default::default() };
        assert!(matches!(RunConfig::resolve(&args), Err(CliError::Usage(_))));
    }

    #[test]
    fn unknown_config_keys_are_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.toml");
        fs::write(&path, "colour = \"red\"\n").unwrap();
        let args = GlobalArgs { config: Some(path), ..Default::default() };
        assert!(matches!(RunConfig::resolve(&args), Err(CliError::Usage(_))));
    }
}
