//! Machine-readable reports: `{meta: {version, params}, results: [...]}`.
//!
//! Objects are emitted with sorted keys and every float is rounded to 12
//! significant digits before printing, so parsing a report and writing it
//! again reproduces the same bytes.

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};

use crate::constants::BoundContext;
use crate::error::{Error, Result};
use crate::optimizer::SearchPoint;
use crate::verify::CheckReport;

pub const REPORT_VERSION: &str = env!("CARGO_PKG_VERSION");
pub const SIGNIFICANT_DIGITS: usize = 12;

/// Rounds to [`SIGNIFICANT_DIGITS`] significant digits.
pub fn round_sig(v: f64) -> f64 {
    if !v.is_finite() || v == 0.0 {
        return v;
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, v).parse().expect("formatted float parses")
}

/// Rounds every float in a JSON tree. Integers are left alone.
pub fn canonicalize(value: Value) -> Value {
    match value {
        Value::Number(n) if n.is_f64() => {
            let v = round_sig(n.as_f64().expect("f64 number"));
            serde_json::Number::from_f64(v).map(Value::Number).unwrap_or(Value::Null)
        }
        Value::Array(items) => Value::Array(items.into_iter().map(canonicalize).collect()),
        Value::Object(map) => Value::Object(map.into_iter().map(|(k, v)| (k, canonicalize(v))).collect()),
        other => other,
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report {
    pub params: BTreeMap<String, Value>,
    pub results: Vec<Value>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.params.insert(key.to_string(), value.into());
        self
    }

    pub fn push(&mut self, value: Value) {
        self.results.push(value);
    }

    pub fn to_value(&self) -> Value {
        let params: Map<String, Value> = self.params.clone().into_iter().collect();
        canonicalize(json!({
            "meta": { "version": REPORT_VERSION, "params": params },
            "results": self.results,
        }))
    }

    pub fn to_json(&self) -> String {
        to_canonical_string(&self.to_value())
    }

    /// Parses a report and checks the top-level layout.
    pub fn parse(text: &str) -> Result<Self> {
        let value: Value = serde_json::from_str(text).map_err(|e| Error::Domain(format!("invalid report: {e}")))?;
        let bad = || Error::Domain("report must have meta.params and results".into());
        let meta = value.get("meta").and_then(Value::as_object).ok_or_else(bad)?;
        let params = meta.get("params").and_then(Value::as_object).ok_or_else(bad)?;
        let results = value.get("results").and_then(Value::as_array).ok_or_else(bad)?;
        Ok(Self {
            params: params.clone().into_iter().collect(),
            results: results.clone(),
        })
    }
}

pub fn to_canonical_string(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(&canonicalize(value.clone())).expect("JSON values serialize");
    s.push('\n');
    s
}

pub fn search_point_value(p: &SearchPoint<f64>, ctx: &BoundContext<f64>) -> Value {
    let extra: Map<String, Value> = p.extra.iter().map(|(k, v)| (k.to_string(), json!(v))).collect();
    json!({
        "kind": "search_point",
        "objective": p.objective.to_string(),
        "mode": ctx.mode,
        "B": ctx.b,
        "ell": p.ell,
        "omega": p.omega,
        "nu": p.nu,
        "lambda": p.lambda,
        "alpha": p.alpha,
        "value": p.value,
        "delta": p.delta,
        "admissible": p.admissible,
        "extra": extra,
    })
}

pub fn check_report_value(r: &CheckReport) -> Value {
    let mut v = serde_json::to_value(r).expect("check reports serialize");
    v.as_object_mut().expect("object").insert("kind".into(), json!("check"));
    v
}

/// Flattens nested objects into dotted keys, for CSV and text output.
pub fn flatten(value: &Value) -> BTreeMap<String, String> {
    fn walk(prefix: &str, v: &Value, out: &mut BTreeMap<String, String>) {
        match v {
            Value::Object(map) => {
                for (k, inner) in map {
                    let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                    walk(&key, inner, out);
                }
            }
            Value::String(s) => {
                out.insert(prefix.to_string(), s.clone());
            }
            Value::Null => {
                out.insert(prefix.to_string(), String::new());
            }
            other => {
                out.insert(prefix.to_string(), other.to_string());
            }
        }
    }
    let mut out = BTreeMap::new();
    walk("", &canonicalize(value.clone()), &mut out);
    out
}

/// CSV with one row per result and the union of flattened keys as header.
pub fn to_csv(results: &[Value]) -> String {
    let rows: Vec<_> = results.iter().map(flatten).collect();
    let mut header: Vec<String> = rows.iter().flat_map(|r| r.keys().cloned()).collect();
    header.sort();
    header.dedup();
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&header).expect("in-memory write");
    for row in rows {
        w.write_record(header.iter().map(|h| row.get(h).map_or("", String::as_str))).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("CSV of UTF-8 fields")
}

/// One `key=value` line per result.
pub fn to_text(results: &[Value]) -> String {
    let mut out = String::new();
    for r in results {
        let flat = flatten(r);
        let head = flat.get("name").or_else(|| flat.get("objective")).or_else(|| flat.get("quantity"));
        let mut parts = Vec::new();
        if let Some(h) = head {
            parts.push(h.clone());
        }
        for (k, v) in &flat {
            if Some(v) != head && !v.is_empty() {
                parts.push(format!("{k}={v}"));
            }
        }
        out.push_str(&parts.join(" "));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding() {
        assert_eq!(round_sig(1.0 / 3.0), 0.333333333333);
        assert_eq!(round_sig(0.0), 0.0);
        assert_eq!(round_sig(123456789012345.0), 123456789012000.0);
        assert_eq!(round_sig(-2.5e-300), -2.5e-300);
    }

    #[test]
    fn report_round_trips_byte_for_byte() {
        let mut r = Report::new().param("X", 1e7).param("mode", "unconditional");
        r.push(json!({"value": std::f64::consts::PI, "name": "a", "nested": {"z": 1, "a": 0.1 + 0.2}}));
        r.push(json!({"value": null, "name": "b"}));
        let text = r.to_json();
        let again = Report::parse(&text).unwrap().to_json();
        assert_eq!(text, again);
        assert!(text.find("\"meta\"").unwrap() < text.find("\"results\"").unwrap());
        assert!(text.contains("3.14159265359"));
        assert!(text.contains("0.3,") || text.contains("0.3\n"));
    }

    #[test]
    fn parse_rejects_other_layouts() {
        assert!(Report::parse("{}").is_err());
        assert!(Report::parse("[1]").is_err());
        assert!(Report::parse("not json").is_err());
    }

    #[test]
    fn csv_and_text() {
        let rows = vec![json!({"name": "a", "params": {"X": 10}, "pass": true}), json!({"name": "b,c", "lhs": 1.5})];
        let csv = to_csv(&rows);
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "lhs,name,params.X,pass");
        assert_eq!(lines.next().unwrap(), ",a,10,true");
        assert_eq!(lines.next().unwrap(), "1.5,\"b,c\",,");
        let text = to_text(&rows);
        assert!(text.starts_with("a params.X=10 pass=true"));
    }
}
