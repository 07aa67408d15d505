use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

/// Output of one CLI run. Byte-identical for identical inputs and seed.
#[derive(Debug, Serialize)]
pub struct RunReport {
    pub command: String,
    pub version: String,
    pub config: Value,
    pub config_hash: String,
    pub cases: Vec<Case>,
    pub pass: bool,
}

#[derive(Debug, Serialize)]
pub struct Case {
    pub name: String,
    pub pass: bool,
    pub data: Value,
}

impl Case {
    pub fn new(name: impl Into<String>, pass: bool, data: Value) -> Self {
        Case {
            name: name.into(),
            pass,
            data,
        }
    }
}

impl RunReport {
    pub fn new(command: &str, config: Value, cases: Vec<Case>) -> Self {
        let canonical = serde_json::to_string(&config).expect("config serializes");
        let config_hash = hex::encode(Sha256::digest(format!("{command}\n{canonical}").as_bytes()));
        let pass = cases.iter().all(|c| c.pass);
        RunReport {
            command: command.to_string(),
            version: format!("loopalg {}", env!("CARGO_PKG_VERSION")),
            config,
            config_hash,
            cases,
            pass,
        }
    }

    pub fn render(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }
}
