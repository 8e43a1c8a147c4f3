//! Tables and reports in CSV or JSON. Floats always carry 17 significant
//! digits so that every double survives a round trip through the text.

use serde::Serialize;
use serde_json::{Map, Number, Value};
use std::io::Write;

use crate::config::{Format, RunConfig};
use crate::error::CliError;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(String),
    Bool(bool),
    Empty,
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

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Empty, Cell::Num)
    }
}

pub fn fmt_f64(v: f64) -> String {
    if v.is_finite() {
        // explicit sign on the exponent, as JSON number parsing would add it anyway
        let s = format!("{v:.16e}");
        match s.split_once('e') {
            Some((m, e)) if !e.starts_with('-') => format!("{m}e+{e}"),
            _ => s,
        }
    } else {
        v.to_string()
    }
}

fn num_value(v: f64) -> Value {
    if v.is_finite() {
        // the arbitrary_precision feature keeps the digits as written
        Value::Number(
            fmt_f64(v)
                .parse::<Number>()
                .expect("formatted float is a JSON number"),
        )
    } else {
        Value::Null
    }
}

/// Rewrites every non-integer number with the fixed float format.
pub fn normalize_numbers(v: Value) -> Value {
    match v {
        Value::Number(n) if !(n.is_i64() || n.is_u64()) => {
            num_value(n.as_f64().unwrap_or(f64::NAN))
        }
        Value::Array(a) => Value::Array(a.into_iter().map(normalize_numbers).collect()),
        Value::Object(o) => Value::Object(
            o.into_iter()
                .map(|(k, v)| (k, normalize_numbers(v)))
                .collect(),
        ),
        other => other,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub headers: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(headers: &[&'static str]) -> Self {
        Self {
            headers: headers.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Result<String, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.headers)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|c| match c {
                Cell::Num(v) => fmt_f64(*v),
                Cell::Text(s) => s.clone(),
                Cell::Bool(b) => b.to_string(),
                Cell::Empty => String::new(),
            }))?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| CliError::Io(e.to_string()))
    }

    pub fn to_json_value(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|row| {
                    let mut m = Map::new();
                    for (h, c) in self.headers.iter().zip(row) {
                        let v = match c {
                            Cell::Num(v) => num_value(*v),
                            Cell::Text(s) => Value::String(s.clone()),
                            Cell::Bool(b) => Value::Bool(*b),
                            Cell::Empty => Value::Null,
                        };
                        m.insert(h.to_string(), v);
                    }
                    Value::Object(m)
                })
                .collect(),
        )
    }
}

fn write_out(cfg: &RunConfig, mut text: String) -> Result<(), CliError> {
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match &cfg.out {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
        }
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

pub fn emit_table(cfg: &RunConfig, table: &Table) -> Result<(), CliError> {
    let text = match cfg.format {
        Format::Csv => table.to_csv()?,
        Format::Json => pretty(&table.to_json_value())?,
    };
    write_out(cfg, text)
}

/// JSON gets the whole report; CSV gets the summary table.
pub fn emit_report<T: Serialize>(
    cfg: &RunConfig,
    report: &T,
    table: &Table,
) -> Result<(), CliError> {
    match cfg.format {
        Format::Csv => write_out(cfg, table.to_csv()?),
        Format::Json => {
            let v = serde_json::to_value(report).map_err(|e| CliError::Io(e.to_string()))?;
            write_out(cfg, pretty(&normalize_numbers(v))?)
        }
    }
}

fn pretty(v: &Value) -> Result<String, CliError> {
    serde_json::to_string_pretty(v).map_err(|e| CliError::Io(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits() {
        assert_eq!(fmt_f64(0.1), "1.0000000000000001e-1");
        assert_eq!(fmt_f64(-2.0), "-2.0000000000000000e+0");
        for v in [
            0.1,
            1.0 / 3.0,
            6.02214076e23,
            1e300,
            -1e-300,
            f64::MIN_POSITIVE,
        ] {
            assert_eq!(fmt_f64(v).parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn csv_and_json_agree() {
        let mut t = Table::new(&["tau", "route", "value"]);
        t.push(vec![1.0.into(), "direct".into(), 0.25.into()]);
        t.push(vec![2.0.into(), "a,b".into(), Cell::Empty]);
        let csv = t.to_csv().unwrap();
        assert_eq!(
            csv,
            "tau,route,value\n1.0000000000000000e+0,direct,2.5000000000000000e-1\n2.0000000000000000e+0,\"a,b\",\n"
        );
        let json = serde_json::to_string(&t.to_json_value()).unwrap();
        assert_eq!(
            json,
            r#"[{"route":"direct","tau":1.0000000000000000e+0,"value":2.5000000000000000e-1},{"route":"a,b","tau":2.0000000000000000e+0,"value":null}]"#
        );
    }

    #[test]
    fn report_numbers_normalized() {
        let v = serde_json::json!({"a": 0.5, "n": 3, "nested": [1.5e-20]});
        let s = serde_json::to_string(&normalize_numbers(v)).unwrap();
        assert_eq!(
            s,
            r#"{"a":5.0000000000000000e-1,"n":3,"nested":[1.5000000000000001e-20]}"#
        );
    }
}
