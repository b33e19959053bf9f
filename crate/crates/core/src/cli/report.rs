use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::support::IndexValue;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize)]
pub struct ExactIndex {
    pub log2_num: i64,
    pub log2_den: i64,
}

impl From<&IndexValue> for ExactIndex {
    fn from(v: &IndexValue) -> Self {
        ExactIndex {
            log2_num: v.log2_num,
            log2_den: IndexValue::LOG2_DEN,
        }
    }
}

/// Machine-readable result of one command.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: String,
    pub inputs_digest: String,
    pub result: Value,
    pub index: Option<ExactIndex>,
    pub diagnostics: Vec<String>,
}

pub fn digest<'a, I: IntoIterator<Item = &'a [u8]>>(parts: I) -> String {
    let mut h = Sha256::new();
    for p in parts {
        h.update((p.len() as u64).to_le_bytes());
        h.update(p);
    }
    hex::encode(h.finalize())
}

impl Report {
    pub fn new(command: &str, inputs_digest: String, result: Value) -> Self {
        Report {
            schema_version: SCHEMA_VERSION,
            command: command.to_string(),
            inputs_digest,
            result,
            index: None,
            diagnostics: Vec::new(),
        }
    }

    pub fn with_index(mut self, v: &IndexValue) -> Self {
        self.index = Some(v.into());
        self
    }

    pub fn note(mut self, msg: impl Into<String>) -> Self {
        self.diagnostics.push(msg.into());
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}
