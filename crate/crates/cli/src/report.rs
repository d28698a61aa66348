//! JSON report payloads and the run manifest embedded in every JSON report.
//!
//! Reports are plain data and round-trip through serde; identical inputs
//! produce byte-identical serialized output. Wall time is recorded for the
//! table footer only and never serialized, so reports stay reproducible.

use serde::{Deserialize, Serialize};

use curvecert_core::config::ConfigDocument;
use curvecert_core::connectivity::Conn;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub args: Vec<String>,
    pub seed: Option<u64>,
    pub max_candidates: u64,
    pub version: String,
    #[serde(skip)]
    pub wall_time_ms: Option<u64>,
}

impl RunManifest {
    pub fn new(command: &str, seed: Option<u64>, max_candidates: u64) -> Self {
        RunManifest {
            command: command.to_string(),
            args: std::env::args().skip(1).collect(),
            seed,
            max_candidates,
            version: env!("CARGO_PKG_VERSION").to_string(),
            wall_time_ms: None,
        }
    }
}

/// Every JSON report embeds its manifest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Envelope<T> {
    pub manifest: RunManifest,
    pub report: T,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecompositionJson {
    pub a: Vec<i64>,
    pub b: Vec<i64>,
    pub pairing: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalyzeReport {
    pub config: String,
    pub divisor: Vec<i64>,
    pub pa: i64,
    pub self_intersection: i64,
    pub k_degree: i64,
    pub conn: Conn,
    pub argmin: Option<DecompositionJson>,
    pub candidates_examined: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConnectReport {
    pub config: String,
    pub divisor: Vec<i64>,
    pub conn: Conn,
    pub argmin: Option<DecompositionJson>,
    pub candidates_examined: u64,
    pub m: Option<i64>,
    pub m_connected: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubcurveEntry {
    pub mult: Vec<i64>,
    pub pa: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubcurvesReport {
    pub config: String,
    pub divisor: Vec<i64>,
    pub count: u64,
    pub max_pa: i64,
    pub max_witness: Vec<i64>,
    pub all_nonpositive: bool,
    pub subcurves: Vec<SubcurveEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecomposeReport {
    pub config: String,
    pub divisor: Vec<i64>,
    pub part: Vec<i64>,
    pub complement: Vec<i64>,
    pub pairing: i64,
    pub found: bool,
    pub chain: Option<Vec<Vec<i64>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenReport {
    pub family: String,
    pub config: ConfigDocument,
    pub divisor: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceJson {
    pub config: ConfigDocument,
    pub divisor: Vec<i64>,
    pub box_size: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleReport {
    pub count: u64,
    pub filter: Option<String>,
    pub instances: Vec<InstanceJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteWitnessJson {
    pub config: Option<ConfigDocument>,
    pub divisors: Vec<Vec<i64>>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckSuiteReport {
    pub suite: String,
    pub scale: String,
    pub seed: Option<u64>,
    pub checked: u64,
    pub violations: u64,
    pub witness: Option<SuiteWitnessJson>,
}

pub fn csv(v: &[i64]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}
