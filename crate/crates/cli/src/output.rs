use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct OutputSpec {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Significant digits of printed numbers.
    #[arg(long, default_value_t = 12, value_parser = clap::value_parser!(u8).range(6..=17))]
    pub precision: u8,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(String),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

/// A rectangular result with `#` metadata lines and optional footer lines.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub meta: Vec<(String, String)>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    pub footer: Vec<(String, f64)>,
}

impl Table {
    pub fn new(command: &str, columns: Vec<&'static str>) -> Self {
        let meta = vec![
            ("version".to_string(), env!("CARGO_PKG_VERSION").to_string()),
            ("command".to_string(), command.to_string()),
        ];
        Self { meta, columns, ..Self::default() }
    }

    pub fn meta(&mut self, key: &str, value: impl ToString) {
        self.meta.push((key.to_string(), value.to_string()));
    }

    pub fn render(&self, out: &OutputSpec) -> String {
        match out.format {
            Format::Csv => self.csv(out.precision),
            Format::Json => self.json(out.precision),
        }
    }

    fn csv(&self, precision: u8) -> String {
        let mut s = String::new();
        for (k, v) in &self.meta {
            s.push_str(&format!("# {k}: {v}\n"));
        }
        s.push_str(&self.columns.join(","));
        s.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row
                .iter()
                .map(|c| match c {
                    Cell::Num(v) => fmt_num(*v, precision),
                    Cell::Text(t) => t.clone(),
                })
                .collect();
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        for (k, v) in &self.footer {
            s.push_str(&format!("# {k}: {}\n", fmt_num(*v, precision)));
        }
        s
    }

    fn json(&self, precision: u8) -> String {
        let num = |v: f64| -> Value {
            fmt_num(v, precision)
                .parse::<f64>()
                .ok()
                .and_then(serde_json::Number::from_f64)
                .map_or(Value::Null, Value::Number)
        };
        let meta: Map<String, Value> = self.meta.iter().map(|(k, v)| (k.clone(), Value::String(v.clone()))).collect();
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> = self
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(k, c)| {
                        let v = match c {
                            Cell::Num(v) => num(*v),
                            Cell::Text(t) => Value::String(t.clone()),
                        };
                        (k.to_string(), v)
                    })
                    .collect();
                Value::Object(obj)
            })
            .collect();
        let mut doc = Map::new();
        doc.insert("meta".into(), Value::Object(meta));
        doc.insert("columns".into(), Value::from(self.columns.clone()));
        doc.insert("rows".into(), Value::Array(rows));
        if !self.footer.is_empty() {
            let f: Map<String, Value> = self.footer.iter().map(|(k, v)| (k.clone(), num(*v))).collect();
            doc.insert("footer".into(), Value::Object(f));
        }
        let mut s = serde_json::to_string_pretty(&Value::Object(doc)).expect("JSON values are finite or null");
        s.push('\n');
        s
    }
}

/// `precision` significant digits in scientific notation.
pub fn fmt_num(v: f64, precision: u8) -> String {
    if v == 0.0 {
        return "0".into();
    }
    format!("{:.*e}", usize::from(precision) - 1, v)
}

/// Writes the whole document at once: to a temporary file in the target
/// directory which is then renamed into place, or to standard output.
pub fn emit(text: &str, path: Option<&Path>) -> std::io::Result<()> {
    match path {
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()
        }
        Some(p) => {
            let dir = match p.parent() {
                Some(d) if !d.as_os_str().is_empty() => d,
                _ => Path::new("."),
            };
            let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
            tmp.write_all(text.as_bytes())?;
            tmp.flush()?;
            tmp.persist(p).map_err(|e| e.error)?;
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_round_trip_to_precision() {
        for &v in &[0.1572992070502851, -3.0e-200, 12345.678, 1.0] {
            for p in [6u8, 12, 17] {
                let back: f64 = fmt_num(v, p).parse().unwrap();
                assert!((back - v).abs() <= v.abs() * 10f64.powi(1 - p as i32), "{v} {p}");
            }
        }
        assert_eq!(fmt_num(0.5, 6), "5.00000e-1");
    }

    #[test]
    fn csv_layout() {
        let mut t = Table::new("demo", vec!["x", "m"]);
        t.meta("alpha", 0.5);
        t.rows.push(vec![Cell::Num(1.0), Cell::from("contour")]);
        t.footer.push(("normalization".into(), 1.0));
        let spec = OutputSpec { format: Format::Csv, out: None, precision: 6 };
        let s = t.render(&spec);
        assert!(s.contains("# alpha: 0.5\nx,m\n1.00000e0,contour\n# normalization: 1.00000e0\n"), "{s}");
    }
}
