//! Rendering command results as json, csv or plain text.

use serde_json::{Map, Number, Value};

use css_purify::sweep::format_sig;
use css_purify::verify::VerifyReport;

use crate::config::Format;

#[derive(Debug, Clone, PartialEq)]
pub enum Field {
    Num(f64),
    Text(String),
    Bool(bool),
}

impl Field {
    fn json(&self) -> Value {
        match self {
            Field::Num(v) => Number::from_f64(*v)
                .map(Value::Number)
                .unwrap_or(Value::Null),
            Field::Text(s) => Value::String(s.clone()),
            Field::Bool(b) => Value::Bool(*b),
        }
    }

    /// Shortest text that reads back to the same value.
    fn full(&self) -> String {
        match self {
            Field::Num(v) => v.to_string(),
            Field::Text(s) => s.clone(),
            Field::Bool(b) => b.to_string(),
        }
    }

    fn short(&self) -> String {
        match self {
            Field::Num(v) => format_sig(*v, 6),
            other => other.full(),
        }
    }
}

/// Ordered key/value result of one command.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report {
    fields: Vec<(&'static str, Field)>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, key: &'static str, value: Field) {
        self.fields.push((key, value));
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let map: Map<String, Value> = self
                    .fields
                    .iter()
                    .map(|(k, v)| (k.to_string(), v.json()))
                    .collect();
                let mut s =
                    serde_json::to_string_pretty(&Value::Object(map)).expect("serializable");
                s.push('\n');
                s
            }
            Format::Csv => csv_lines(
                &[self.fields.iter().map(|(k, _)| k.to_string()).collect()],
                &[self.fields.iter().map(|(_, v)| v.full()).collect()],
            ),
            Format::Plain => self
                .fields
                .iter()
                .map(|(k, v)| format!("{k}: {}\n", v.short()))
                .collect(),
        }
    }
}

fn csv_lines(header: &[Vec<String>], rows: &[Vec<String>]) -> String {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    for record in header.iter().chain(rows) {
        w.write_record(record).expect("write to memory");
    }
    String::from_utf8(w.into_inner().expect("flush to memory")).expect("utf-8 fields")
}

pub fn render_verify(report: &VerifyReport, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("serializable");
            s.push('\n');
            s
        }
        Format::Csv => {
            let header = vec!["check", "draws", "max_error", "tolerance", "passed"]
                .into_iter()
                .map(String::from)
                .collect();
            let rows: Vec<Vec<String>> = report
                .checks
                .iter()
                .map(|c| {
                    vec![
                        c.name.to_string(),
                        c.draws.to_string(),
                        c.max_error.to_string(),
                        c.tolerance.to_string(),
                        c.passed().to_string(),
                    ]
                })
                .collect();
            csv_lines(&[header], &rows)
        }
        Format::Plain => {
            let mut s = format!("seed: {}\n", report.seed);
            for c in &report.checks {
                s.push_str(&format!(
                    "{} {}: max error {} (tolerance {}) over {} draws\n",
                    if c.passed() { "PASS" } else { "FAIL" },
                    c.name,
                    format_sig(c.max_error, 6),
                    format_sig(c.tolerance, 6),
                    c.draws
                ));
            }
            s
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        let mut r = Report::new();
        r.push("p_out", Field::Num(0.6127004234567891));
        r.push("verdict", Field::Text("no net purification".into()));
        r.push("ok", Field::Bool(true));
        r
    }

    #[test]
    fn plain_uses_six_digits() {
        assert_eq!(
            sample().render(Format::Plain),
            "p_out: 0.6127\nverdict: no net purification\nok: true\n"
        );
    }

    #[test]
    fn json_keeps_full_precision() {
        let v: Value = serde_json::from_str(&sample().render(Format::Json)).unwrap();
        assert_eq!(v["p_out"].as_f64(), Some(0.6127004234567891));
    }

    #[test]
    fn csv_is_header_and_row() {
        assert_eq!(
            sample().render(Format::Csv),
            "p_out,verdict,ok\n0.6127004234567891,no net purification,true\n"
        );
    }
}
