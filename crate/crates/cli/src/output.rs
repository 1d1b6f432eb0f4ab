use std::fs;
use std::io::Write;
use std::path::Path;

use aqec::report::{round_sig, Table};
use clap::ValueEnum;
use serde::Serialize;
use serde_json::{Number, Value};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Writes `text` to `out`, or to stdout when no path is given.
pub fn write(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| CliError::Config(format!("{}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).map_err(|e| CliError::Config(format!("stdout: {e}")))
        }
    }
}

/// Non-integer numbers are rounded to 12 significant digits, as in CSV.
fn round_floats(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            if let Some(x) = n.as_f64().and_then(|x| Number::from_f64(round_sig(x))) {
                *n = x;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_floats),
        Value::Object(map) => map.values_mut().for_each(round_floats),
        _ => {}
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut tree = serde_json::to_value(value).expect("reports serialize");
    round_floats(&mut tree);
    let mut s = serde_json::to_string_pretty(&tree).expect("reports serialize");
    s.push('\n');
    s
}

/// Renders a table as CSV, or `json_body` (which must mirror the table) as JSON.
pub fn emit_report<T: Serialize>(table: &Table, json_body: &T, format: Format, out: Option<&Path>) -> Result<(), CliError> {
    if table.is_empty() {
        return Err(CliError::Config("nothing to report".into()));
    }
    let text = match format {
        Format::Csv => table.to_csv(),
        Format::Json => to_json(json_body),
    };
    write(out, &text)
}
