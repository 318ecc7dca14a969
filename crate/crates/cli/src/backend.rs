use std::path::Path;
use std::sync::Arc;

use tracing::info;
use veritas_nli::mock::{LexicalConsistency, LexicalNli};
use veritas_nli::{ConvScorerConfigF64, SidecarClient};
use veritas_pipelines::{HttpSlm, MockSlm, PipelineConfig, PipelineDepsF64, Scorers, SlmBackend, DEFAULT_PREMISE_CAP};
use veritas_retrieval::{FixtureStore, Retriever};

use crate::config::RunConfig;
use crate::error::CliError;

pub const SLM_FIXTURE_FILE: &str = "slm.json";

pub fn retriever(cfg: &RunConfig) -> Result<Arc<Retriever>, CliError> {
    let r = match &cfg.fixtures {
        Some(dir) => {
            let store = FixtureStore::open(dir).map_err(|e| CliError::Input(e.to_string()))?;
            info!(dir = %dir.display(), offline = cfg.is_offline(), "replaying fixtures");
            Retriever::fixture(Arc::new(store))
        }
        None => Retriever::live(&cfg.user_agent, &cfg.search_url).map_err(|e| CliError::Usage(e.to_string()))?,
    };
    Ok(Arc::new(r))
}

/// Mock SLM answers come from `slm.json` in the fixture directory when
/// present.
fn mock_slm(cfg: &RunConfig) -> Result<MockSlm, CliError> {
    match cfg.fixtures.as_ref().map(|d| d.join(SLM_FIXTURE_FILE)) {
        Some(p) if p.is_file() => MockSlm::load(&p).map_err(|e| CliError::Input(e.to_string())),
        _ => Ok(MockSlm::new()),
    }
}

pub fn slm(cfg: &RunConfig) -> Result<Arc<dyn SlmBackend>, CliError> {
    if cfg.is_mock() {
        return Ok(Arc::new(mock_slm(cfg)?));
    }
    Ok(Arc::new(HttpSlm::new(client(cfg)?)))
}

fn client(cfg: &RunConfig) -> Result<SidecarClient, CliError> {
    SidecarClient::new(&cfg.backend_url).map_err(|e| CliError::Infrastructure(e.to_string()))
}

pub fn scorers(cfg: &RunConfig, conv: Option<&Path>) -> Result<Scorers<f64>, CliError> {
    let mut s = if cfg.is_mock() {
        Scorers::new(Arc::new(LexicalNli), Arc::new(LexicalConsistency))
    } else {
        let c = Arc::new(client(cfg)?);
        Scorers::new(c.clone(), c)
    };
    if let Some(path) = conv {
        let conv = ConvScorerConfigF64::load(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        s = s.with_conv(conv);
    }
    Ok(s)
}

pub fn deps(cfg: &RunConfig, conv: Option<&Path>) -> Result<PipelineDepsF64, CliError> {
    Ok(PipelineDepsF64::new(retriever(cfg)?, scorers(cfg, conv)?)
        .with_slm(slm(cfg)?)
        .with_config(PipelineConfig { k: cfg.k, premise_cap: DEFAULT_PREMISE_CAP }))
}
