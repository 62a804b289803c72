use std::fs;
use std::path::Path;

use cellcov_core::covers::{Certificate, Condition, Status};
use serde::Serialize;
use serde_json::Value;

use crate::files::InputRecord;
use crate::CliError;

#[derive(Debug, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub inputs: Vec<InputRecord>,
    pub verdict: Status,
    pub result: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Certificate>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Self {
            tool: "cellcov",
            version: env!("CARGO_PKG_VERSION"),
            command: command.into(),
            inputs: Vec::new(),
            verdict: Status::Pass,
            result: Value::Null,
            certificate: None,
        }
    }

    pub fn exit_code(&self) -> u8 {
        if self.verdict.passed() {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("{} {} {}\n", self.tool, self.version, self.command));
        for i in &self.inputs {
            out.push_str(&format!("input {} {} sha256={}\n", i.role, i.path.display(), i.sha256));
        }
        text_value(&mut out, &self.result, 0);
        if let Some(c) = &self.certificate {
            text_certificate(&mut out, c, 0);
        }
        out.push_str(&format!("verdict: {}\n", status_word(self.verdict)));
        out
    }

    pub fn write_to_dir(&self, dir: &Path) -> Result<(), CliError> {
        fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
        let path = dir.join(format!("{}.json", self.command));
        fs::write(&path, self.to_json()).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
    }
}

fn status_word(s: Status) -> &'static str {
    match s {
        Status::Pass => "pass",
        Status::Fail => "fail",
    }
}

fn text_value(out: &mut String, v: &Value, depth: usize) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                match x {
                    Value::Object(_) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        text_value(out, x, depth + 1);
                    }
                    _ => out.push_str(&format!("{pad}{k}: {}\n", inline(x))),
                }
            }
        }
        Value::Null => {}
        other => out.push_str(&format!("{pad}{}\n", inline(other))),
    }
}

fn inline(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn text_condition(out: &mut String, c: &Condition, depth: usize) {
    let pad = "  ".repeat(depth);
    out.push_str(&format!("{pad}[{}] {}: {}\n", status_word(c.status), c.label, c.detail));
    if let Some(w) = &c.witness {
        out.push_str(&format!("{pad}    witness: {}\n", serde_json::to_string(w).expect("witness serializes")));
    }
}

fn text_certificate(out: &mut String, c: &Certificate, depth: usize) {
    let pad = "  ".repeat(depth);
    out.push_str(&format!("{pad}certificate {}: {}\n", c.subject, status_word(c.verdict)));
    for x in &c.conditions {
        text_condition(out, x, depth + 1);
    }
    for a in &c.attachments {
        text_certificate(out, a, depth + 1);
    }
}
