//! Report assembly and rendering.
//!
//! Every command produces one [`Report`]: an ordered list of key-value
//! pairs. Structured mode prints it verbatim as `key=value` lines, first
//! line `schema=groupgeom.v1`; text mode is derived from the same pairs.
//! Nothing machine-dependent (timings, thread counts) ever enters a
//! report, so identical inputs render byte-identically at any `--jobs`.

use std::fmt::Display;
use std::fmt::Write as _;

use clap::ValueEnum;

/// Version tag carried as the first structured line.
pub const SCHEMA: &str = "groupgeom.v1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// Human-readable, derived from the structured fields.
    Text,
    /// Line-oriented `key=value` pairs with a schema header.
    Structured,
}

/// Ordered key-value document produced by one command run.
pub struct Report {
    fields: Vec<(String, String)>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        let mut report = Report { fields: Vec::new() };
        report.push("schema", SCHEMA);
        report.push("command", command);
        report
    }

    pub fn push(&mut self, key: impl Into<String>, value: impl Display) {
        self.fields.push((key.into(), value.to_string()));
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.fields
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Structured => self.render_structured(),
            Format::Text => {
                if self.get("command") == Some("scan") {
                    self.render_scan_table()
                } else {
                    self.render_text()
                }
            }
        }
    }

    fn render_structured(&self) -> String {
        let mut out = String::new();
        for (key, value) in &self.fields {
            let _ = writeln!(out, "{key}={value}");
        }
        out
    }

    /// Aligned `key  value` pairs. Runs of fields sharing a top-level
    /// prefix stay together; a blank line sets off any multi-line run.
    fn render_text(&self) -> String {
        let width = self
            .fields
            .iter()
            .map(|(k, _)| k.len())
            .max()
            .unwrap_or(0);
        let mut runs: Vec<Vec<String>> = Vec::new();
        let mut last_prefix: Option<&str> = None;
        for (key, value) in &self.fields {
            if key == "schema" {
                continue;
            }
            let prefix = key.split('.').next().unwrap_or(key);
            if last_prefix != Some(prefix) {
                runs.push(Vec::new());
            }
            last_prefix = Some(prefix);
            runs.last_mut()
                .expect("just pushed")
                .push(format!("{key:<width$}  {value}"));
        }
        let mut out = String::new();
        for (i, run) in runs.iter().enumerate() {
            if i > 0 && (run.len() > 1 || runs[i - 1].len() > 1) {
                out.push('\n');
            }
            for line in run {
                out.push_str(line);
                out.push('\n');
            }
        }
        out
    }

    /// The scan table: preamble pairs, one row per catalog entry, then
    /// status and warnings. Reconstructed from the structured fields.
    fn render_scan_table(&self) -> String {
        let mut out = String::new();
        for (key, value) in &self.fields {
            if key == "schema" || key == "status" || key.contains('.') {
                continue;
            }
            let _ = writeln!(out, "{key} = {value}");
        }

        let count: usize = self
            .get("catalog.size")
            .and_then(|v| v.parse().ok())
            .unwrap_or(0);
        if count > 0 {
            let columns = [
                ("spec", "group"),
                ("order", "order"),
                ("sets_examined", "sets"),
                ("fully_characteristic", "fully-char"),
                ("characteristic_not_fully", "char-not-fully"),
                ("oracle_agreement", "agreement"),
                ("truncated", "truncated"),
            ];
            let mut rows: Vec<Vec<String>> = Vec::with_capacity(count + 1);
            rows.push(columns.iter().map(|(_, h)| h.to_string()).collect());
            for i in 0..count {
                rows.push(
                    columns
                        .iter()
                        .map(|(field, _)| {
                            self.get(&format!("group.{i}.{field}"))
                                .unwrap_or("-")
                                .to_string()
                        })
                        .collect(),
                );
            }
            let widths: Vec<usize> = (0..columns.len())
                .map(|c| rows.iter().map(|r| r[c].len()).max().unwrap_or(0))
                .collect();
            out.push('\n');
            for row in &rows {
                let line: Vec<String> = row
                    .iter()
                    .zip(&widths)
                    .map(|(cell, w)| format!("{cell:<w$}"))
                    .collect();
                let _ = writeln!(out, "{}", line.join("  ").trim_end());
            }
        }

        let warnings: Vec<&str> = self
            .fields
            .iter()
            .filter(|(k, _)| k.starts_with("warning."))
            .map(|(_, v)| v.as_str())
            .collect();
        if !warnings.is_empty() {
            out.push('\n');
            for w in warnings {
                let _ = writeln!(out, "WARNING: {w}");
            }
        }
        if let Some(status) = self.get("status") {
            out.push('\n');
            let _ = writeln!(out, "status = {status}");
        }
        out
    }
}

/// Space-joined element indices; the canonical tuple spelling in reports.
pub fn fmt_tuple(tuple: &[usize]) -> String {
    tuple
        .iter()
        .map(|e| e.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}
