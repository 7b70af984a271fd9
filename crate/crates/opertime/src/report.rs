//! Machine-readable report primitives: JSON with fixed-width floats and
//! plain CSV curves.
//!
//! Reports must be byte-identical across reruns with the same seed, so
//! every float is serialized with 17 significant digits (round-trip
//! exact) through a raw JSON number, map-like data lives in ordered
//! containers, and nothing time- or path-dependent enters the payload.

use serde::{Serialize, Serializer};
use serde_json::value::RawValue;
use std::fs;
use std::io::Write;
use std::path::Path;

/// JSON schema version stamped into every report.
pub const SCHEMA_VERSION: u32 = 1;

/// A float serialized as a raw JSON number with 17 significant digits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct F17(pub f64);

impl From<f64> for F17 {
    fn from(v: f64) -> Self {
        F17(v)
    }
}

impl Serialize for F17 {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0.is_finite() {
            let raw = format!("{:.16e}", self.0);
            let rv = RawValue::from_string(raw).map_err(serde::ser::Error::custom)?;
            rv.serialize(s)
        } else {
            s.serialize_str(&self.0.to_string())
        }
    }
}

/// Write a serializable report as pretty JSON with a trailing newline.
pub fn write_json<T: Serialize>(path: &Path, value: &T) -> crate::Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)?;
    }
    let mut body = serde_json::to_string_pretty(value)?;
    body.push('\n');
    fs::write(path, body)?;
    Ok(())
}

/// Write a CSV curve with a header row; floats use the same 17-digit
/// format as the JSON side.
pub fn write_csv(path: &Path, header: &[&str], rows: &[Vec<f64>]) -> crate::Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)?;
    }
    let mut file = fs::File::create(path)?;
    writeln!(file, "{}", header.join(","))?;
    for row in rows {
        let cells: Vec<String> = row.iter().map(|v| format!("{v:.16e}")).collect();
        writeln!(file, "{}", cells.join(","))?;
    }
    Ok(())
}

/// A named verdict with the tolerance that was actually enforced.
#[derive(Debug, Clone, Serialize)]
pub struct Verdict {
    pub name: String,
    pub value: F17,
    pub tolerance: F17,
    pub pass: bool,
}

impl Verdict {
    /// Pass when the value does not exceed the tolerance.
    pub fn leq(name: &str, value: f64, tolerance: f64) -> Self {
        Verdict {
            name: name.to_string(),
            value: F17(value),
            tolerance: F17(tolerance),
            pass: value <= tolerance,
        }
    }

    /// Pass when the value is at least the bound (stored as tolerance).
    pub fn geq(name: &str, value: f64, bound: f64) -> Self {
        Verdict {
            name: name.to_string(),
            value: F17(value),
            tolerance: F17(bound),
            pass: value >= bound,
        }
    }

    pub fn boolean(name: &str, pass: bool) -> Self {
        Verdict {
            name: name.to_string(),
            value: F17(if pass { 1.0 } else { 0.0 }),
            tolerance: F17(0.5),
            pass,
        }
    }
}

pub fn all_pass(verdicts: &[Verdict]) -> bool {
    verdicts.iter().all(|v| v.pass)
}
