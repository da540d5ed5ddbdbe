use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use intersective::ntheory::DETERMINISTIC_BOUND;

pub const SCHEMA_VERSION: &str = "1";

/// The one output format shared by all subcommands.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateDocument {
    pub schema_version: String,
    pub command: String,
    pub inputs: Value,
    pub result: Value,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub tool_version: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub choice_policy: Option<String>,
    pub bounds: BTreeMap<String, String>,
    /// Primality answers are proofs below this bound, probable above it.
    pub deterministic_primality_bound: String,
    /// The document passed the independent verifier before it was written.
    pub verified: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<String>,
}

impl Provenance {
    pub fn new(bounds: BTreeMap<String, String>) -> Self {
        Provenance {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            choice_policy: None,
            bounds,
            deterministic_primality_bound: DETERMINISTIC_BOUND.to_string(),
            verified: false,
            timestamp: None,
        }
    }
}

impl CertificateDocument {
    pub fn new(command: &str, inputs: Value, result: Value, provenance: Provenance) -> Self {
        CertificateDocument {
            schema_version: SCHEMA_VERSION.to_string(),
            command: command.to_string(),
            inputs,
            result,
            provenance,
        }
    }

    /// Pretty JSON with keys sorted at every level.
    pub fn render(&self) -> String {
        let value = serde_json::to_value(self).expect("documents serialize");
        let mut out = serde_json::to_string_pretty(&value).expect("values serialize");
        out.push('\n');
        out
    }
}

pub fn stamp() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true)
}
