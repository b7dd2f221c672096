//! Rendering of command results as aligned text, CSV or JSON lines.

use std::fmt::Write as _;

use clap::ValueEnum;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Csv,
    /// One JSON object per line.
    #[value(alias = "json-lines", alias = "jsonl")]
    Json,
}

/// A rectangular result with a header row.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Sheet {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Sheet {
    pub fn new(headers: &[&str]) -> Self {
        Sheet {
            headers: headers.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.headers).expect("in-memory write");
        for r in &self.rows {
            w.write_record(r).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("utf-8 input")
    }

    pub fn to_text(&self) -> String {
        let mut widths: Vec<usize> = self.headers.iter().map(|h| h.chars().count()).collect();
        for r in &self.rows {
            for (w, c) in widths.iter_mut().zip(r) {
                *w = (*w).max(c.chars().count());
            }
        }
        let mut out = String::new();
        let line = |out: &mut String, cells: &[String]| {
            let parts: Vec<String> = cells
                .iter()
                .zip(&widths)
                .map(|(c, &w)| format!("{c:>w$}"))
                .collect();
            let _ = writeln!(out, "{}", parts.join("  ").trim_end());
        };
        line(&mut out, &self.headers);
        for r in &self.rows {
            line(&mut out, r);
        }
        out
    }
}

/// Everything a command prints.
#[derive(Debug, Default)]
pub struct Emit {
    /// `key: value` lines shown above the sheet in table format.
    pub summary: Vec<(String, String)>,
    pub sheet: Option<Sheet>,
    pub records: Vec<serde_json::Value>,
}

impl Emit {
    pub fn summary(&mut self, key: &str, value: impl ToString) {
        self.summary.push((key.to_string(), value.to_string()));
    }

    pub fn record(&mut self, value: &impl Serialize) {
        self.records
            .push(serde_json::to_value(value).expect("records are plain data"));
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => self.records.iter().map(|r| format!("{r}\n")).collect(),
            Format::Csv => match &self.sheet {
                Some(s) => s.to_csv(),
                None => {
                    let mut s = Sheet::new(&["key", "value"]);
                    for (k, v) in &self.summary {
                        s.push(vec![k.clone(), v.clone()]);
                    }
                    s.to_csv()
                }
            },
            Format::Table => {
                let mut out = String::new();
                let width = self.summary.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
                for (k, v) in &self.summary {
                    let _ = writeln!(out, "{:<width$}  {v}", format!("{k}:"), width = width + 1);
                }
                if let Some(s) = &self.sheet {
                    if !self.summary.is_empty() {
                        out.push('\n');
                    }
                    out.push_str(&s.to_text());
                }
                out
            }
        }
    }
}

/// `x` to `digits` significant digits, trailing zeros removed (`0.660162`, `1.3067`).
pub fn sig(x: f64, digits: u32) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let mut exp = x.abs().log10().floor() as i32;
    // Rounding can carry into the next decade (0.9999996 -> 1.00000).
    let scale = 10f64.powi(digits as i32 - 1 - exp);
    if ((x.abs() * scale).round()) >= 10f64.powi(digits as i32) {
        exp += 1;
    }
    let decimals = (digits as i32 - 1 - exp).max(0) as usize;
    let mut s = format!("{x:.decimals$}");
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(sig(0.6601618197, 6), "0.660162");
        assert_eq!(sig(1.320323632, 6), "1.32032");
        assert_eq!(sig(0.08247721, 6), "0.0824772");
        assert_eq!(sig(1.3067, 6), "1.3067");
        assert_eq!(sig(0.99999996, 6), "1");
        assert_eq!(sig(50_849_234.4, 6), "50849234");
        assert_eq!(sig(-3.70004, 3), "-3.7");
    }

    #[test]
    fn csv_and_text() {
        let mut s = Sheet::new(&["k", "value"]);
        s.push(vec!["2".into(), "0.660162".into()]);
        assert_eq!(s.to_csv(), "k,value\n2,0.660162\n");
        assert_eq!(s.to_text(), "k     value\n2  0.660162\n");
    }
}
