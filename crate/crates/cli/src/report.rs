//! Run manifests. Everything under `report` is deterministic for a given
//! cache and configuration and is what `hash` covers; timings and the cache
//! location live under `run`.

use std::path::Path;
use std::time::Duration;

use anyhow::Result;
use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};
use u35_core::suite::{time_limit, CheckOutcome};

use crate::cache::{hex, CacheFile, CacheProblem, CacheStatus};

pub const SCHEMA: &str = "u35-report/1";

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub config: Value,
    pub config_hash: String,
    pub cache_files: Vec<CacheFile>,
    pub checks: Vec<CheckOutcome>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub artifact: Option<Value>,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Timing {
    pub criterion: u8,
    pub seconds: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub limit_seconds: Option<u64>,
    pub within_limit: bool,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct RunInfo {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cache_dir: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cache_status: Option<CacheStatus>,
    pub total_seconds: f64,
    pub timings: Vec<Timing>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub schema: &'static str,
    pub hash: String,
    pub report: Report,
    pub run: RunInfo,
}

pub fn sha256_json<T: Serialize>(value: &T) -> String {
    let bytes = serde_json::to_vec(value).expect("serializable");
    hex(&Sha256::digest(bytes))
}

/// Accumulates checks for one command.
pub struct ManifestBuilder {
    command: String,
    config: Value,
    cache_files: Vec<CacheFile>,
    checks: Vec<CheckOutcome>,
    artifact: Option<Value>,
    run: RunInfo,
}

impl ManifestBuilder {
    pub fn new(command: impl Into<String>, config: Value) -> Self {
        Self {
            command: command.into(),
            config,
            cache_files: Vec::new(),
            checks: Vec::new(),
            artifact: None,
            run: RunInfo::default(),
        }
    }

    pub fn cache(&mut self, dir: &Path, status: Option<CacheStatus>, files: Vec<CacheFile>) {
        self.run.cache_dir = Some(dir.display().to_string());
        self.run.cache_status = status;
        self.cache_files = files;
    }

    pub fn artifact(&mut self, value: Value) {
        self.artifact = Some(value);
    }

    pub fn check(&mut self, outcome: CheckOutcome, elapsed: Duration) {
        let limit = time_limit(outcome.criterion);
        self.run.timings.push(Timing {
            criterion: outcome.criterion,
            seconds: elapsed.as_secs_f64(),
            limit_seconds: limit.map(|l| l.as_secs()),
            within_limit: limit.is_none_or(|l| elapsed <= l),
        });
        self.checks.push(outcome);
    }

    pub fn finish(mut self, total: Duration) -> RunManifest {
        self.run.total_seconds = total.as_secs_f64();
        let report = Report {
            config_hash: sha256_json(&(&self.command, &self.config)),
            command: self.command,
            config: self.config,
            cache_files: self.cache_files,
            passed: self.checks.iter().all(|c| c.passed),
            checks: self.checks,
            artifact: self.artifact,
        };
        RunManifest {
            schema: SCHEMA,
            hash: sha256_json(&report),
            report,
            run: self.run,
        }
    }
}

impl RunManifest {
    pub fn write(&self, path: &Path) -> Result<()> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        std::fs::write(path, text)
            .map_err(|e| CacheProblem(format!("writing {}: {e}", path.display())).into())
    }
}
