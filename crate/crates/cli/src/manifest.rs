//! Run manifests: everything needed to reproduce an invocation exactly.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::RunConfig;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Manifest {
    pub command: String,
    pub seed: u64,
    pub n: usize,
    pub config_hash: String,
    pub guarantee_void: bool,
    pub wall_ms: u128,
    pub version: String,
}

/// SHA-256 over the canonical JSON form of the resolved config.
pub fn config_hash(cfg: &RunConfig) -> String {
    let canonical = serde_json::to_string(cfg).expect("config serializes");
    let digest = Sha256::digest(canonical.as_bytes());
    let mut hex = String::with_capacity(64);
    for byte in digest {
        hex.push_str(&format!("{byte:02x}"));
    }
    hex
}

impl Manifest {
    pub fn new(command: &str, cfg: &RunConfig, n: usize, guarantee_void: bool, wall_ms: u128) -> Self {
        Self {
            command: command.to_string(),
            seed: cfg.seed,
            n,
            config_hash: config_hash(cfg),
            guarantee_void,
            wall_ms,
            version: VERSION.to_string(),
        }
    }
}

/// `MM minutes and SS seconds` wall-time formatting for stage reports.
pub fn format_duration(d: std::time::Duration) -> String {
    let total = d.as_secs();
    format!("{:02} minutes and {:02} seconds", total / 60, total % 60)
}
