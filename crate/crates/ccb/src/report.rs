//! Structured run reports. The `results` record is a pure function of
//! (command, inputs, config): seeds drive all randomness, serde_json keeps
//! object keys sorted, and wall time sits outside the record so reruns can
//! be compared byte for byte.

use std::time::Instant;

use sha2::{Digest, Sha256};

use crate::caps::SearchCaps;
use crate::error::{Error, Result};
use crate::field::FieldTag;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum OutputFormat {
    #[serde(rename = "json")]
    Json,
    #[serde(rename = "tsv")]
    Tsv,
}

impl std::str::FromStr for OutputFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(OutputFormat::Json),
            "tsv" => Ok(OutputFormat::Tsv),
            other => Err(Error::parse(format!(
                "unknown format `{other}`, expected json or tsv"
            ))),
        }
    }
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct RunConfig {
    pub seed: Option<u64>,
    pub threads: usize,
    pub field: Option<FieldTag>,
    pub caps: SearchCaps,
    pub format: OutputFormat,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: None,
            threads: 1,
            field: None,
            caps: SearchCaps::default(),
            format: OutputFormat::Json,
        }
    }
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct Report {
    pub schema: u32,
    pub command: String,
    pub inputs_digest: String,
    pub config: RunConfig,
    pub results: serde_json::Value,
    /// measured, not part of the determinism contract
    pub wall_time_ms: u64,
}

impl Report {
    pub fn build(
        command: impl Into<String>,
        inputs_digest: String,
        config: RunConfig,
        results: serde_json::Value,
        started: Instant,
    ) -> Self {
        Report {
            schema: 1,
            command: command.into(),
            inputs_digest,
            config,
            results,
            wall_time_ms: started.elapsed().as_millis() as u64,
        }
    }

    /// The deterministic part, serialized canonically (sorted keys).
    pub fn results_bytes(&self) -> Vec<u8> {
        serde_json::to_vec(&self.results).expect("json values always serialize")
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports always serialize");
        s.push('\n');
        s
    }
}

/// SHA-256 over length-prefixed parts, so part boundaries cannot alias.
pub fn digest_parts(parts: &[&[u8]]) -> String {
    let mut h = Sha256::new();
    for p in parts {
        h.update((p.len() as u64).to_le_bytes());
        h.update(p);
    }
    let out = h.finalize();
    let mut hex = String::with_capacity(64);
    for byte in out {
        hex.push_str(&format!("{byte:02x}"));
    }
    hex
}

pub fn to_results<T: serde::Serialize>(value: &T) -> Result<serde_json::Value> {
    serde_json::to_value(value).map_err(|e| Error::invariant(format!("serialization failed: {e}")))
}

/// Big integers render as decimal strings, not limb arrays.
pub fn biguint_decimal<S: serde::Serializer>(
    b: &num::BigUint,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&b.to_string())
}
