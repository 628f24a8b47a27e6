//! Output plumbing shared by every subcommand.
//!
//! Reports are built as ordered JSON values. `--json` prints them as-is;
//! the default text form flattens them into `key: value` lines.

use serde_json::Value;
use std::io::Write;

/// Writes a report to stdout. A closed pipe (`| head`) is not an error.
pub fn emit(value: &Value, json: bool) {
    let out = if json {
        let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
        s.push('\n');
        s
    } else {
        let mut s = String::new();
        text_lines(value, 0, &mut s);
        s
    };
    let _ = std::io::stdout().lock().write_all(out.as_bytes());
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(items) if items.iter().all(|i| !i.is_object() && !i.is_string()) => {
            let parts: Vec<String> = items.iter().map(inline).collect();
            Some(format!("[{}]", parts.join(", ")))
        }
        _ => None,
    }
}

/// Single-line rendering of any value.
fn inline(v: &Value) -> String {
    if let Some(s) = scalar(v) {
        return s;
    }
    match v {
        Value::Object(map) => {
            let parts: Vec<String> = map.iter().map(|(k, v)| format!("{k}={}", inline(v))).collect();
            parts.join(" ")
        }
        Value::Array(items) => {
            let parts: Vec<String> = items.iter().map(|i| format!("{{{}}}", inline(i))).collect();
            parts.join(", ")
        }
        _ => unreachable!("scalars handled above"),
    }
}

fn text_lines(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(map) => {
            for (k, v) in map {
                match scalar(v) {
                    Some(s) => out.push_str(&format!("{pad}{k}: {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        text_lines(v, indent + 1, out);
                    }
                }
            }
        }
        Value::Array(items) => {
            for item in items {
                out.push_str(&format!("{pad}- {}\n", inline(item)));
            }
        }
        other => out.push_str(&format!("{pad}{}\n", inline(other))),
    }
}
