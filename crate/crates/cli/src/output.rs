use std::fmt::Write as _;

use serde_json::{json, Value};

use ssav::report::EnumerationReport;
use ssav::Error;

use crate::commands::Outcome;
use crate::Format;

pub enum Output {
    Enumeration(EnumerationReport),
    Value(Value),
}

pub fn render(out: &Output, format: Format) -> String {
    match (out, format) {
        (Output::Enumeration(r), Format::Json) => r.to_json() + "\n",
        (Output::Enumeration(r), Format::Csv) => r.to_csv(),
        (Output::Enumeration(r), Format::Md) => r.to_markdown(),
        (Output::Value(v), Format::Json) => {
            serde_json::to_string_pretty(v).expect("value serializes") + "\n"
        }
        (Output::Value(v), Format::Csv) => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["key", "value"]).expect("in-memory write");
            for (k, val) in flatten(v) {
                w.write_record([k, val]).expect("in-memory write");
            }
            String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
        }
        (Output::Value(v), Format::Md) => {
            let mut s = String::from("| key | value |\n|---|---|\n");
            for (k, val) in flatten(v) {
                let _ = writeln!(s, "| {k} | {} |", val.replace('|', "\\|"));
            }
            s
        }
    }
}

/// `(path, value)` pairs; arrays of scalars become one comma-separated cell.
pub fn flatten(v: &Value) -> Vec<(String, String)> {
    fn go(v: &Value, path: String, out: &mut Vec<(String, String)>) {
        let scalar = |v: &Value| match v {
            Value::String(s) => s.clone(),
            other => other.to_string(),
        };
        match v {
            Value::Object(m) => {
                for (k, x) in m {
                    let p = if path.is_empty() { k.clone() } else { format!("{path}.{k}") };
                    go(x, p, out);
                }
            }
            Value::Array(a) if a.iter().all(|x| !x.is_object() && !x.is_array()) => {
                out.push((path, a.iter().map(scalar).collect::<Vec<_>>().join(",")));
            }
            Value::Array(a) => {
                for (i, x) in a.iter().enumerate() {
                    go(x, format!("{path}.{i}"), out);
                }
            }
            other => out.push((path, scalar(other))),
        }
    }
    let mut out = Vec::new();
    go(v, String::new(), &mut out);
    out
}

pub fn error_json(e: &Error, code: u8) -> String {
    let kind = match e {
        Error::InvalidInput(_) => "invalid-input",
        Error::NoRoot => "no-root",
        Error::NotCyclotomicProduct => "not-supersingular",
        Error::Refused(_) => "refused",
        Error::Syntax { .. } => "syntax",
        Error::Inconsistent(_) => "inconsistent",
        Error::Template(_) => "template",
    };
    json!({ "error": { "kind": kind, "exit_code": code, "message": e.to_string() } }).to_string()
}

pub fn negative_json(o: &Outcome) -> String {
    let result = match &o.output {
        Output::Enumeration(r) => serde_json::to_value(r).expect("report serializes"),
        Output::Value(v) => v.clone(),
    };
    json!({ "error": { "kind": "negative", "exit_code": o.exit, "message": o.message, "result": result } })
        .to_string()
}
