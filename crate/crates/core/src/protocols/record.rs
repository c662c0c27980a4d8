use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::measurement::RandomSource;

/// One self-contained run record: the randomness that drove it, the
/// parameters and everything it produced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TranscriptRecord {
    pub kind: String,
    pub seed: u64,
    pub stream_id: u64,
    pub params: Value,
    pub result: Value,
}

impl TranscriptRecord {
    pub fn new<P: Serialize, R: Serialize>(
        kind: &str,
        rng: &RandomSource,
        params: &P,
        result: &R,
    ) -> serde_json::Result<Self> {
        Ok(Self {
            kind: kind.to_string(),
            seed: rng.seed(),
            stream_id: rng.stream_id(),
            params: serde_json::to_value(params)?,
            result: serde_json::to_value(result)?,
        })
    }
}

/// Serializes a record as a single JSON line, newline included.
pub fn transcript_line(record: &TranscriptRecord) -> serde_json::Result<String> {
    let mut line = serde_json::to_string(record)?;
    line.push('\n');
    Ok(line)
}
