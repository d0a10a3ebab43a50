//! Line-oriented key–value reports.
//!
//! The machine format is `key=value`, one pair per line, in insertion
//! order, with `format_version` first. Values are written with `Display`,
//! so floats use the shortest representation that round-trips and equal
//! runs produce byte-identical files. No timestamps are ever embedded.

use std::fmt::Display;

use crate::error::{Error, Result};
use crate::evaluate::ConfusionMatrix;

pub const FORMAT_VERSION: u32 = 1;

/// Ordered key–value report.
#[derive(Debug, Clone, Default)]
pub struct Report {
    entries: Vec<(String, String)>,
}

impl Report {
    pub fn new(command: &str) -> Report {
        let mut report = Report::default();
        report.push("format_version", FORMAT_VERSION);
        report.push("command", command);
        report
    }

    pub fn push(&mut self, key: impl Into<String>, value: impl Display) {
        self.entries.push((key.into(), value.to_string()));
    }

    pub fn entries(&self) -> &[(String, String)] {
        &self.entries
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn to_machine_string(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.entries {
            out.push_str(k);
            out.push('=');
            out.push_str(v);
            out.push('\n');
        }
        out
    }

    /// Parses the machine format back into an ordered report.
    pub fn parse_machine(text: &str) -> Result<Report> {
        let mut entries = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                Error::parse((idx + 1) as u64, format!("expected key=value, got {raw:?}"))
            })?;
            entries.push((k.trim().to_string(), v.trim().to_string()));
        }
        if entries.is_empty() {
            return Err(Error::EmptyInput("no report entries".into()));
        }
        Ok(Report { entries })
    }

    /// All values whose key starts with `prefix`, in insertion order.
    pub fn values_with_prefix<'a>(&'a self, prefix: &'a str) -> impl Iterator<Item = (&'a str, &'a str)> {
        self.entries
            .iter()
            .filter(move |(k, _)| k.starts_with(prefix))
            .map(|(k, v)| (k.as_str(), v.as_str()))
    }
}

/// Aligned confusion-matrix table for human output. Rows are true
/// classes, columns predicted classes.
pub fn render_confusion(confusion: &ConfusionMatrix, class_names: &[String]) -> String {
    let width = class_names
        .iter()
        .map(|n| n.len())
        .max()
        .unwrap_or(0)
        .max(5);
    let mut out = String::new();
    out.push_str(&format!("{:>width$} |", "true\\pred"));
    for name in class_names {
        out.push_str(&format!(" {name:>width$}"));
    }
    out.push('\n');
    for (t, name) in class_names.iter().enumerate() {
        out.push_str(&format!("{name:>width$} |"));
        for p in 0..class_names.len() {
            out.push_str(&format!(" {:>width$}", confusion.count(t, p)));
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn machine_format_round_trips_in_order() {
        let mut report = Report::new("evaluate");
        report.push("alpha", 1);
        report.push("beta", 0.04);
        let text = report.to_machine_string();
        assert!(text.starts_with("format_version=1\ncommand=evaluate\n"));
        let parsed = Report::parse_machine(&text).unwrap();
        assert_eq!(parsed.entries(), report.entries());
        assert_eq!(parsed.get("beta"), Some("0.04"));
    }

    #[test]
    fn malformed_line_is_rejected_with_its_number() {
        let err = Report::parse_machine("format_version=1\nnot a pair\n").unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn confusion_table_lists_every_class() {
        let cm = ConfusionMatrix::from_pairs(&[0, 1, 1], &[0, 1, 0], 2);
        let table = render_confusion(&cm, &["a".into(), "b".into()]);
        assert_eq!(table.lines().count(), 3);
        assert!(table.contains('1'));
    }
}
