//! Provenance block embedded in every output file.

use std::path::Path;

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub arguments: Vec<String>,
    pub inputs: Vec<InputDigest>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub version: String,
    /// Digest of the output payload; the timestamp is not part of it.
    pub payload_sha256: String,
    pub timestamp: String,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

pub fn digest_file(path: &Path) -> Result<InputDigest> {
    let bytes = std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(InputDigest {
        path: path.display().to_string(),
        sha256: sha256_hex(&bytes),
    })
}

/// RFC 3339 time of the run, or of `SOURCE_DATE_EPOCH` when set.
fn timestamp() -> String {
    let fixed = std::env::var("SOURCE_DATE_EPOCH")
        .ok()
        .and_then(|s| s.parse::<i64>().ok())
        .and_then(|s| chrono::DateTime::from_timestamp(s, 0));
    fixed
        .unwrap_or_else(chrono::Utc::now)
        .to_rfc3339_opts(chrono::SecondsFormat::Secs, true)
}

impl RunManifest {
    pub fn new(command: &str, inputs: Vec<InputDigest>, seed: Option<u64>, payload: &[u8]) -> Self {
        Self {
            command: command.to_string(),
            arguments: std::env::args().skip(1).collect(),
            inputs,
            seed,
            version: env!("CARGO_PKG_VERSION").to_string(),
            payload_sha256: sha256_hex(payload),
            timestamp: timestamp(),
        }
    }
}

/// `{"manifest": ..., "<key>": payload}` with the payload digested as
/// serialized.
pub fn wrap_json<T: Serialize>(
    command: &str,
    key: &str,
    payload: &T,
    inputs: Vec<InputDigest>,
    seed: Option<u64>,
) -> Result<String> {
    let body = serde_json::to_value(payload)?;
    let canonical = serde_json::to_vec(&body)?;
    let manifest = RunManifest::new(command, inputs, seed, &canonical);
    let mut out = serde_json::Map::new();
    out.insert("manifest".into(), serde_json::to_value(manifest)?);
    out.insert(key.into(), body);
    let mut text = serde_json::to_string_pretty(&serde_json::Value::Object(out))?;
    text.push('\n');
    Ok(text)
}

/// Reads the payload stored under `key` in a wrapped file, or the whole
/// document when it carries no manifest.
pub fn unwrap_json<T: for<'de> Deserialize<'de>>(text: &str, key: &str) -> Result<T> {
    let mut v: serde_json::Value = serde_json::from_str(text)?;
    if v.get("manifest").is_some() {
        if let Some(inner) = v.get_mut(key) {
            return Ok(serde_json::from_value(inner.take())?);
        }
    }
    Ok(serde_json::from_value(v)?)
}
