//! The single report shape every subcommand fills in, with a text and a
//! JSON rendering that carry the same facts.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::Serialize;

#[derive(Serialize)]
pub struct RunReport {
    pub command: String,
    pub inputs: BTreeMap<String, String>,
    pub verdict: String,
    pub confidence: String,
    pub justification: Vec<String>,
    pub witnesses: Vec<String>,
    pub timing_ms: u128,
    /// Exit-code routing only; never part of the emitted report.
    #[serde(skip)]
    pub undecided: bool,
}

impl RunReport {
    pub fn new(command: &str) -> RunReport {
        RunReport {
            command: command.to_string(),
            inputs: BTreeMap::new(),
            verdict: String::new(),
            confidence: "exact".to_string(),
            justification: Vec::new(),
            witnesses: Vec::new(),
            timing_ms: 0,
            undecided: false,
        }
    }

    pub fn input(&mut self, key: &str, value: impl Into<String>) {
        self.inputs.insert(key.to_string(), value.into());
    }

    pub fn note(&mut self, line: impl Into<String>) {
        self.justification.push(line.into());
    }

    pub fn witness(&mut self, line: impl Into<String>) {
        self.witnesses.push(line.into());
    }

    pub fn finish(&mut self, started: Instant) {
        self.timing_ms = started.elapsed().as_millis();
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("command: {}\n", self.command));
        for (key, value) in &self.inputs {
            out.push_str(&format!("input {}: {}\n", key, value));
        }
        out.push_str(&format!("verdict: {}\n", self.verdict));
        out.push_str(&format!("confidence: {}\n", self.confidence));
        for line in &self.justification {
            out.push_str(&format!("  {}\n", line));
        }
        for line in &self.witnesses {
            out.push_str(&format!("witness: {}\n", line));
        }
        out.push_str(&format!("timing_ms: {}\n", self.timing_ms));
        out
    }

    pub fn render_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report serializes");
        text.push('\n');
        text
    }
}
