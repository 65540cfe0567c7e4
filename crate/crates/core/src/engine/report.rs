//! Machine-readable run reports.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{Config, PartitionEntry, PartitionReport, SampleStrategy, Stats, Status, SubStatus, Verdict};
use crate::error::Result;
use crate::propagation::Mode;
use crate::rounding::Precision;

/// Settings a run was made with, as written to the report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConfigSummary {
    pub precision: f64,
    pub timeout_secs: f64,
    pub max_depth: Option<usize>,
    pub workers: usize,
    pub mode: Mode,
    pub samples: SampleStrategy,
    pub fp32: bool,
    pub monotonicity: bool,
}

impl From<&Config> for ConfigSummary {
    fn from(c: &Config) -> Self {
        ConfigSummary {
            precision: c.precision,
            timeout_secs: c.timeout.as_secs_f64(),
            max_depth: c.max_depth,
            workers: c.workers,
            mode: c.mode,
            samples: c.sample_strategy,
            fp32: c.rounding.precision == Precision::Bits32,
            monotonicity: c.monotonicity,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PartitionSummary {
    pub secure: usize,
    pub insecure: usize,
    pub unknown: usize,
    pub secure_volume: f64,
    pub insecure_volume: f64,
    pub unknown_volume: f64,
}

impl From<&PartitionReport> for PartitionSummary {
    fn from(r: &PartitionReport) -> Self {
        PartitionSummary {
            secure: r.count(SubStatus::SecureSub),
            insecure: r.count(SubStatus::InsecureSub),
            unknown: r.count(SubStatus::UnknownSub),
            secure_volume: r.volume(SubStatus::SecureSub),
            insecure_volume: r.volume(SubStatus::InsecureSub),
            unknown_volume: r.volume(SubStatus::UnknownSub),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    /// `verify` or `enumerate`.
    pub command: String,
    pub network: Option<String>,
    pub property: Option<String>,
    pub config: ConfigSummary,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Vec<f64>>,
    pub stats: Stats,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub summary: Option<PartitionSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub partition: Option<Vec<PartitionEntry>>,
}

impl RunReport {
    pub fn from_verdict(v: &Verdict, cfg: &Config) -> Self {
        RunReport {
            command: "verify".into(),
            network: None,
            property: None,
            config: cfg.into(),
            status: v.status,
            counterexample: v.counterexample.clone(),
            stats: v.stats.clone(),
            summary: None,
            partition: None,
        }
    }

    pub fn from_partition(r: &PartitionReport, cfg: &Config) -> Self {
        RunReport {
            command: "enumerate".into(),
            network: None,
            property: None,
            config: cfg.into(),
            status: r.status(),
            counterexample: None,
            stats: r.stats.clone(),
            summary: Some(r.into()),
            partition: Some(r.entries.clone()),
        }
    }

    pub fn with_sources(mut self, network: impl Into<String>, property: impl Into<String>) -> Self {
        self.network = Some(network.into());
        self.property = Some(property.into());
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json() + "\n")?;
        Ok(())
    }
}
