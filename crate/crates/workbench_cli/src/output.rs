//! Deterministic CSV and JSON emission.

use std::io::Write;

use serde_json::Value;

use crate::CliError;

pub const SIGNIFICANT_DIGITS: usize = 9;

/// `x` with nine significant digits, fixed notation for moderate exponents
/// and scientific otherwise; trailing zeros are dropped.
pub fn fmt_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..9).contains(&exp) {
        let decimals = (SIGNIFICANT_DIGITS as i32 - 1 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    let t = s.trim_end_matches('0').trim_end_matches('.');
    if t == "-0" {
        "0".into()
    } else {
        t.to_string()
    }
}

/// Rounds to nine significant digits, so JSON numbers print the same digits
/// as the CSV columns.
pub fn round_sig(x: f64) -> f64 {
    fmt_sig(x).parse().unwrap_or(x)
}

/// A table of named columns; every cell is already formatted.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub kind: &'static str,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
    Bool(bool),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Num(x) => fmt_sig(*x),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(x) => number(*x),
            Cell::Int(i) => Value::from(*i),
            Cell::Text(s) => Value::from(s.clone()),
            Cell::Bool(b) => Value::from(*b),
        }
    }
}

pub fn number(x: f64) -> Value {
    serde_json::Number::from_f64(round_sig(x)).map_or(Value::Null, Value::Number)
}

/// Replaces every float in `v` by its nine-digit rounding.
pub fn round_json(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => number(n.as_f64().expect("f64 number")),
        Value::Array(a) => Value::Array(a.into_iter().map(round_json).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, round_json(v))).collect()),
        other => other,
    }
}

impl Table {
    pub fn to_csv(&self) -> Result<String, CliError> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        w.write_record(&self.columns)
            .map_err(|e| CliError::Output(e.to_string()))?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render))
                .map_err(|e| CliError::Output(e.to_string()))?;
        }
        let bytes = w
            .into_inner()
            .map_err(|e| CliError::Output(e.to_string()))?;
        let mut out = format!("# cddcomb {} schema {}\n", self.kind, crate::SCHEMA_VERSION);
        out.push_str(&String::from_utf8(bytes).map_err(|e| CliError::Output(e.to_string()))?);
        Ok(out)
    }

    pub fn to_json_rows(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|row| {
                    Value::Object(
                        self.columns
                            .iter()
                            .zip(row)
                            .map(|(c, cell)| (c.to_string(), cell.json()))
                            .collect(),
                    )
                })
                .collect(),
        )
    }
}

/// `{"schema_version", "kind", ...body}` with floats rounded.
pub fn envelope(kind: &str, body: Value) -> Value {
    let mut obj = serde_json::Map::new();
    obj.insert("schema_version".into(), Value::from(crate::SCHEMA_VERSION));
    obj.insert("kind".into(), Value::from(kind));
    match round_json(body) {
        Value::Object(o) => obj.extend(o),
        other => {
            obj.insert("data".into(), other);
        }
    }
    Value::Object(obj)
}

pub fn json_text(v: &Value) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(v).map_err(|e| CliError::Output(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

/// Writes `text` to `path`, or to stdout when `path` is `None`.
pub fn emit(text: &str, path: Option<&std::path::Path>) -> Result<(), CliError> {
    match path {
        Some(p) => {
            std::fs::write(p, text).map_err(|e| CliError::Output(format!("{}: {e}", p.display())))
        }
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .map_err(|e| CliError::Output(e.to_string()))
        }
    }
}
