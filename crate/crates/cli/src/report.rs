use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use clap::ValueEnum;
use serde_json::{json, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

/// What a command found: its verdict, text lines and a JSON body.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub command: String,
    pub pass: bool,
    pub lines: Vec<String>,
    pub body: Value,
    /// Printed verbatim in text mode instead of the line report.
    pub raw: Option<String>,
}

impl Outcome {
    pub fn new(command: &str) -> Self {
        Outcome {
            command: command.to_string(),
            pass: true,
            lines: Vec::new(),
            body: json!({}),
            raw: None,
        }
    }

    pub fn line(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }

    pub fn render(&self, format: Format, seed: u64) -> String {
        match format {
            Format::Text if self.raw.is_some() => self.raw.clone().unwrap_or_default(),
            Format::Text => {
                let mut s = String::new();
                let _ = writeln!(s, "command: {}", self.command);
                let _ = writeln!(s, "seed: {seed}");
                for l in &self.lines {
                    let _ = writeln!(s, "{l}");
                }
                let _ = writeln!(s, "verdict: {}", if self.pass { "PASS" } else { "FAIL" });
                s
            }
            Format::Json => {
                let v = json!({
                    "command": self.command,
                    "seed": seed,
                    "pass": self.pass,
                    "report": self.body,
                });
                let mut s = serde_json::to_string_pretty(&v).expect("reports serialize");
                s.push('\n');
                s
            }
        }
    }
}

pub fn emit(text: &str, out: Option<&Path>) -> std::io::Result<()> {
    match out {
        Some(p) => std::fs::write(p, text),
        None => std::io::stdout().write_all(text.as_bytes()),
    }
}
