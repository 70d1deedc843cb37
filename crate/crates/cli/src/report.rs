use std::io::Write;

use freecurve::constructions::{Check, VerificationReport};
use serde::Serialize;
use serde_json::Value;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// One line of a report.
#[derive(Clone, Debug, Serialize)]
pub struct Item {
    pub name: String,
    pub paper_anchor: Option<String>,
    pub pass: bool,
    pub details: String,
}

/// The JSON document every subcommand emits.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub tool_version: &'static str,
    pub command: String,
    pub field: Option<String>,
    pub checks: Vec<Item>,
    /// Comparisons against printed values that disagree; they never fail
    /// the run.
    pub findings: Vec<Item>,
    pub result: Value,
}

impl Report {
    pub fn new(command: &str, field: Option<String>) -> Report {
        Report {
            tool_version: TOOL_VERSION,
            command: command.into(),
            field,
            checks: Vec::new(),
            findings: Vec::new(),
            result: Value::Null,
        }
    }

    pub fn check(&mut self, name: impl Into<String>, anchor: Option<&str>, pass: bool, details: impl Into<String>) {
        self.checks.push(Item {
            name: name.into(),
            paper_anchor: anchor.map(str::to_string),
            pass,
            details: details.into(),
        });
    }

    /// Copies the checks of a library report, prefixing their names.
    /// Findings that agree with the printed value count as passing checks.
    pub fn absorb(&mut self, prefix: &str, r: &VerificationReport, anchor: impl Fn(&str) -> Option<&'static str>) {
        for c in &r.checks {
            let item = Item {
                name: format!("{prefix}{}", c.check_name),
                paper_anchor: anchor(&c.check_name).map(str::to_string),
                pass: c.pass,
                details: details(c),
            };
            if c.finding && !c.pass {
                self.findings.push(item);
            } else {
                self.checks.push(item);
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn render_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    pub fn render_plain(&self) -> String {
        let mut out = String::new();
        let width = self.checks.iter().chain(&self.findings).map(|c| c.name.len()).max().unwrap_or(0);
        match &self.field {
            Some(f) => out.push_str(&format!("{} over {f}\n", self.command)),
            None => out.push_str(&format!("{}\n", self.command)),
        }
        for c in &self.checks {
            let tag = if c.pass { "PASS" } else { "FAIL" };
            out.push_str(&format!("  {tag}  {:width$}  {}\n", c.name, c.details));
        }
        for c in &self.findings {
            out.push_str(&format!("  NOTE  {:width$}  {}\n", c.name, c.details));
        }
        if !self.result.is_null() {
            out.push_str(&format!("result: {}\n", plain_value(&self.result)));
        }
        let failed = self.checks.iter().filter(|c| !c.pass).count();
        out.push_str(&format!(
            "{} checks, {failed} failed, {} findings\n",
            self.checks.len(),
            self.findings.len()
        ));
        out
    }

    pub fn emit(&self, json: bool, out: Option<&std::path::Path>) -> std::io::Result<()> {
        let text = if json { self.render_json() } else { self.render_plain() };
        std::io::stdout().write_all(text.as_bytes())?;
        if let Some(path) = out {
            std::fs::write(path, self.render_json())?;
        }
        Ok(())
    }
}

fn details(c: &Check) -> String {
    let mut s = if c.lhs == c.rhs { c.lhs.clone() } else { format!("{} vs {}", c.lhs, c.rhs) };
    if let Some(w) = &c.witness {
        s.push_str(&format!(" (witness: {w})"));
    }
    s
}

fn plain_value(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}
