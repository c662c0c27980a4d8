//! Versioned result documents and bit-exact replay.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::config::ExperimentConfig;
use crate::error::CliError;
use crate::experiments::run_experiment;

pub const SCHEMA_VERSION: u64 = 1;
pub const TOOL: &str = "onebit";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultDocument {
    pub schema_version: u64,
    pub tool: String,
    pub config: ExperimentConfig,
    pub results: Value,
}

impl ResultDocument {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("documents serialize");
        s.push('\n');
        s
    }
}

/// Runs `config` and wraps the results. `jobs` never changes the output.
pub fn execute(config: &ExperimentConfig, jobs: usize) -> Result<(ResultDocument, String), CliError> {
    let out = run_experiment(config, jobs)?;
    Ok((
        ResultDocument {
            schema_version: SCHEMA_VERSION,
            tool: TOOL.to_string(),
            config: config.clone(),
            results: out.results,
        },
        out.summary,
    ))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail { field: String, reported: String, recomputed: String },
}

/// Parses a result document, failing with a schema error that names what
/// is missing or malformed.
pub fn parse_document(text: &str) -> Result<ResultDocument, CliError> {
    let raw: Value = serde_json::from_str(text).map_err(|e| CliError::Schema(format!("not JSON: {e}")))?;
    let obj = raw
        .as_object()
        .ok_or_else(|| CliError::Schema("document is not an object".into()))?;
    for key in ["schema_version", "tool", "config", "results"] {
        if !obj.contains_key(key) {
            return Err(CliError::Schema(format!("missing field `{key}`")));
        }
    }
    if obj["schema_version"].as_u64() != Some(SCHEMA_VERSION) {
        return Err(CliError::Schema(format!(
            "unsupported schema_version {}, expected {SCHEMA_VERSION}",
            obj["schema_version"]
        )));
    }
    if obj["tool"] != TOOL {
        return Err(CliError::Schema(format!("tool {} is not {TOOL}", obj["tool"])));
    }
    serde_json::from_value(raw).map_err(|e| CliError::Schema(format!("config: {e}")))
}

/// Re-runs the document's config and compares every result field
/// bit-for-bit.
pub fn replay(doc: &ResultDocument) -> Result<Verdict, CliError> {
    let (fresh, _) = execute(&doc.config, 1)?;
    Ok(match first_mismatch(&doc.results, &fresh.results, "results") {
        None => Verdict::Pass,
        Some((field, reported, recomputed)) => Verdict::Fail { field, reported, recomputed },
    })
}

fn same_number(a: &serde_json::Number, b: &serde_json::Number) -> bool {
    match (a.as_u64(), b.as_u64(), a.as_i64(), b.as_i64()) {
        (Some(x), Some(y), _, _) => x == y,
        (_, _, Some(x), Some(y)) => x == y,
        _ => match (a.as_f64(), b.as_f64()) {
            (Some(x), Some(y)) => x.to_bits() == y.to_bits(),
            _ => false,
        },
    }
}

fn first_mismatch(reported: &Value, fresh: &Value, path: &str) -> Option<(String, String, String)> {
    let differ = || Some((path.to_string(), reported.to_string(), fresh.to_string()));
    match (reported, fresh) {
        (Value::Object(a), Value::Object(b)) => {
            for (k, va) in a {
                let child = format!("{path}.{k}");
                match b.get(k) {
                    Some(vb) => {
                        if let Some(m) = first_mismatch(va, vb, &child) {
                            return Some(m);
                        }
                    }
                    None => return Some((child, va.to_string(), "absent".into())),
                }
            }
            b.keys()
                .find(|k| !a.contains_key(*k))
                .map(|k| (format!("{path}.{k}"), "absent".into(), b[k].to_string()))
        }
        (Value::Array(a), Value::Array(b)) => {
            if a.len() != b.len() {
                return differ();
            }
            a.iter()
                .zip(b)
                .enumerate()
                .find_map(|(i, (x, y))| first_mismatch(x, y, &format!("{path}[{i}]")))
        }
        (Value::Number(x), Value::Number(y)) => (!same_number(x, y)).then(&differ).flatten(),
        _ => (reported != fresh).then(differ).flatten(),
    }
}
