//! Projection of JSON reports onto CSV columns for plotting.

use serde_json::Value;

use super::{Command, RotorCommand};
use crate::error::{Error, Result};

/// The export kind a command's report projects onto, if any.
pub fn natural_kind(cmd: &Command) -> Option<&'static str> {
    match cmd {
        Command::Stutter(_) => Some("stutter"),
        Command::Rotor(RotorCommand::Attractor(_)) => Some("attractor"),
        Command::Rotor(RotorCommand::Rotnum(_)) => Some("staircase"),
        _ => None,
    }
}

fn body(report: &Value) -> &Value {
    match report.get("report") {
        Some(inner) if report.get("schema_version").is_some() => inner,
        _ => report,
    }
}

fn array<'a>(v: &'a Value, key: &str) -> Result<&'a Vec<Value>> {
    v.get(key).and_then(Value::as_array).ok_or_else(|| Error::Validation(format!("report has no {:?} array", key)))
}

fn field(v: &Value, path: &[&str]) -> String {
    let mut cur = v;
    for p in path {
        match cur.get(*p) {
            Some(x) => cur = x,
            None => return String::new(),
        }
    }
    match cur {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

/// CSV text for `kind`: `staircase`, `attractor` or `stutter`.
pub fn export_plot_data(report: &Value, kind: &str) -> Result<String> {
    let b = body(report);
    let (header, rows): (&[&str], Vec<Vec<String>>) = match kind {
        "stutter" => (
            &["n", "r_n", "s_n", "spread", "log_r_n"],
            array(b, "records")?
                .iter()
                .map(|r| vec![field(r, &["n"]), field(r, &["r"]), field(r, &["s"]), field(r, &["diagnostics", "spread"]), field(r, &["diagnostics", "log_r", "mid"])])
                .collect(),
        ),
        "attractor" => (&["index", "point"], array(b, "points")?.iter().enumerate().map(|(i, p)| vec![i.to_string(), field(p, &["mid"])]).collect()),
        "staircase" => (
            &["delta", "rotation_mid", "rotation_rad"],
            array(b, "samples")?.iter().map(|s| vec![field(s, &["delta"]), field(s, &["rotation", "mid"]), field(s, &["rotation", "rad"])]).collect(),
        ),
        other => return Err(Error::UnknownKind(other.to_string())),
    };
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).map_err(csv_err)?;
    for r in rows {
        w.write_record(&r).map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("utf-8 fields"))
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}
