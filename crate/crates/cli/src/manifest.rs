use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use serde_json::{Map, Value};

use itergcd::Budget;

/// Set to a non-empty value to pin timestamps to zero.
pub const TEST_MODE_VAR: &str = "ITERGCD_TEST_MODE";

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub config: Value,
    pub seed: Option<u64>,
    pub version: String,
    pub started_unix: u64,
    pub finished_unix: u64,
    pub budgets: Budget,
}

fn now() -> u64 {
    if std::env::var(TEST_MODE_VAR).is_ok_and(|v| !v.is_empty()) {
        return 0;
    }
    SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs())
}

pub struct Run {
    command: String,
    config: Value,
    seed: Option<u64>,
    started: u64,
    pub budget: Budget,
}

impl Run {
    pub fn start(command: &str, config: Value, seed: Option<u64>) -> Self {
        Run {
            command: command.to_string(),
            config,
            seed,
            started: now(),
            budget: Budget::from_env(),
        }
    }

    pub fn manifest(&self) -> RunManifest {
        RunManifest {
            command: self.command.clone(),
            config: self.config.clone(),
            seed: self.seed,
            version: env!("CARGO_PKG_VERSION").to_string(),
            started_unix: self.started,
            finished_unix: now(),
            budgets: self.budget,
        }
    }

    /// `result` as a JSON object with the manifest under `"manifest"`.
    pub fn wrap(&self, result: impl Serialize) -> Value {
        let mut obj = match serde_json::to_value(result).expect("results serialize") {
            Value::Object(m) => m,
            other => {
                let mut m = Map::new();
                m.insert("result".into(), other);
                m
            }
        };
        obj.insert(
            "manifest".into(),
            serde_json::to_value(self.manifest()).expect("manifest serializes"),
        );
        Value::Object(obj)
    }
}
