//! Plain-text or JSON-lines output with a fixed field order.

use std::fmt::Display;

use serde_json::{json, Value};

pub struct Report {
    json: bool,
    lines: Vec<String>,
}

impl Report {
    pub fn new(json: bool) -> Report {
        Report {
            json,
            lines: Vec::new(),
        }
    }

    /// `key: value`, or `{"key": "value"}`.
    pub fn field(&mut self, key: &str, value: impl Display) {
        let value = value.to_string();
        self.push(key, value.clone(), Value::String(value));
    }

    pub fn number(&mut self, key: &str, value: usize) {
        self.push(key, value.to_string(), value.into());
    }

    /// Same field with a structured JSON value.
    pub fn push(&mut self, key: &str, text: String, value: Value) {
        if self.json {
            self.lines.push(json!({ key: value }).to_string());
        } else {
            self.lines.push(format!("{key}: {text}"));
        }
    }

    /// Multi-line text printed as is; a single string field in JSON.
    pub fn block(&mut self, key: &str, text: &str) {
        if self.json {
            self.lines.push(json!({ key: text.trim_end() }).to_string());
        } else {
            self.lines.extend(text.trim_end().lines().map(str::to_string));
        }
    }

    pub fn render(&self) -> String {
        let mut out = self.lines.join("\n");
        out.push('\n');
        out
    }
}
