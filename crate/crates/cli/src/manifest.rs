//! Run manifest: everything needed to reproduce a run bit for bit, plus
//! provenance (tool version, wall-clock duration, output list). Written as
//! JSON next to the tables; `--config manifest.json` re-ingests it.

use crate::config::RunConfig;
use cavity_cooling::SystemParams;
use serde::{Deserialize, Serialize};
use std::path::Path;
use std::time::Instant;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub subcommand: String,
    /// Unix seconds when the run started.
    pub started_unix: u64,
    pub duration_seconds: f64,
    /// Fully resolved human-unit configuration (re-ingestable).
    pub config: RunConfig,
    /// Angular-unit parameters actually used, rad/s and SI.
    pub params_angular: Option<SystemParams>,
    /// Extra per-run facts: grid metadata, seeds, convergence checks.
    #[serde(default, skip_serializing_if = "serde_json::Map::is_empty")]
    pub details: serde_json::Map<String, serde_json::Value>,
    /// Files written by the run, relative to the manifest's directory.
    pub outputs: Vec<String>,
    /// "ok" or the error rendering for partial failures.
    pub status: String,
}

pub struct ManifestBuilder {
    manifest: RunManifest,
    started: Instant,
}

impl ManifestBuilder {
    pub fn new(subcommand: &str, config: &RunConfig) -> Self {
        let started_unix = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        Self {
            manifest: RunManifest {
                tool: "cavity-cooling".into(),
                version: env!("CARGO_PKG_VERSION").into(),
                subcommand: subcommand.into(),
                started_unix,
                duration_seconds: 0.0,
                config: config.clone(),
                params_angular: None,
                details: serde_json::Map::new(),
                outputs: Vec::new(),
                status: "ok".into(),
            },
            started: Instant::now(),
        }
    }

    pub fn params(&mut self, p: &SystemParams) -> &mut Self {
        self.manifest.params_angular = Some(p.clone());
        self
    }

    pub fn detail(&mut self, key: &str, value: impl Serialize) -> &mut Self {
        if let Ok(v) = serde_json::to_value(value) {
            self.manifest.details.insert(key.to_string(), v);
        }
        self
    }

    pub fn output(&mut self, name: &str) -> &mut Self {
        self.manifest.outputs.push(name.to_string());
        self
    }

    pub fn status_err(&mut self, err: &anyhow::Error) -> &mut Self {
        self.manifest.status = format!("error: {err:#}");
        self
    }

    /// Write the manifest (atomically) into `dir`.
    pub fn write(mut self, dir: &Path) -> anyhow::Result<()> {
        self.manifest.duration_seconds = self.started.elapsed().as_secs_f64();
        let json = serde_json::to_string_pretty(&self.manifest)?;
        crate::output::write_atomic(&dir.join("manifest.json"), json.as_bytes())?;
        Ok(())
    }
}
