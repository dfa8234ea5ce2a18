//! Report output: pretty JSON or aligned `key  value` text.

use anyhow::Context;
use serde_json::Value;

use crate::config::RunConfig;

/// Arrays longer than this are summarized in text output.
const INLINE_ITEMS: usize = 8;
const TABLE_ROWS: usize = 64;

pub struct Outcome {
    pub command: &'static str,
    pub passed: bool,
    pub report: Value,
}

impl Outcome {
    pub fn new(command: &'static str, passed: bool, report: Value) -> Self {
        Self {
            command,
            passed,
            report,
        }
    }
}

pub fn emit(outcome: &Outcome, config: &RunConfig) -> anyhow::Result<()> {
    let json = serde_json::to_string_pretty(&outcome.report)?;
    if let Some(path) = &config.report {
        std::fs::write(path, format!("{json}\n"))
            .with_context(|| format!("writing {}", path.display()))?;
    }
    if config.json {
        println!("{json}");
    } else {
        print!("{}", render_text(outcome));
    }
    Ok(())
}

pub fn render_text(outcome: &Outcome) -> String {
    let mut rows = Vec::new();
    let mut tables = Vec::new();
    flatten("", &outcome.report, &mut rows, &mut tables);
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    let mut out = format!(
        "{}: {}\n",
        outcome.command,
        if outcome.passed { "ok" } else { "FAILED" }
    );
    for (k, v) in rows {
        out.push_str(&format!("  {k:<width$}  {v}\n"));
    }
    for (name, table) in tables {
        out.push_str(&format!("  {name}:\n"));
        let widths: Vec<usize> = (0..table[0].len())
            .map(|c| table.iter().map(|row| row[c].len()).max().unwrap_or(0))
            .collect();
        for row in &table {
            let cells: Vec<String> = row
                .iter()
                .zip(&widths)
                .map(|(cell, w)| format!("{cell:<w$}"))
                .collect();
            out.push_str(&format!("    {}\n", cells.join("  ").trim_end()));
        }
    }
    out
}

type Table = Vec<Vec<String>>;

/// Arrays of objects with the same scalar fields become a table.
fn as_table(items: &[Value]) -> Option<Table> {
    let first = items.first()?.as_object()?;
    let header: Vec<&String> = first.keys().collect();
    let mut table = vec![header.iter().map(|k| k.to_string()).collect::<Vec<_>>()];
    for item in items {
        let obj = item.as_object()?;
        if obj.len() != header.len() {
            return None;
        }
        let mut row = Vec::with_capacity(header.len());
        for k in &header {
            let v = obj.get(*k)?;
            if v.is_object() || v.is_array() {
                return None;
            }
            row.push(scalar(v));
        }
        table.push(row);
    }
    Some(table)
}

fn flatten(
    prefix: &str,
    value: &Value,
    rows: &mut Vec<(String, String)>,
    tables: &mut Vec<(String, Table)>,
) {
    let key = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                flatten(&key(k), v, rows, tables);
            }
        }
        Value::Array(items)
            if !items.is_empty() && items.len() <= TABLE_ROWS && as_table(items).is_some() =>
        {
            tables.push((prefix.to_string(), as_table(items).expect("checked")));
        }
        Value::Array(items) if items.iter().all(|v| !v.is_object() && !v.is_array()) => {
            let shown = if items.len() > INLINE_ITEMS {
                format!("[{} items]", items.len())
            } else {
                format!(
                    "[{}]",
                    items.iter().map(scalar).collect::<Vec<_>>().join(", ")
                )
            };
            rows.push((prefix.to_string(), shown));
        }
        Value::Array(items) if items.len() > INLINE_ITEMS => {
            rows.push((prefix.to_string(), format!("[{} items]", items.len())));
        }
        Value::Array(items) => {
            for (i, v) in items.iter().enumerate() {
                flatten(&key(&i.to_string()), v, rows, tables);
            }
        }
        v => rows.push((prefix.to_string(), scalar(v))),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::Null => "-".into(),
        Value::String(s) => s.clone(),
        Value::Number(n) => match n.as_f64() {
            Some(f) if n.is_f64() => format!("{f:.6}")
                .trim_end_matches('0')
                .trim_end_matches('.')
                .to_string(),
            _ => n.to_string(),
        },
        other => other.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn text_is_aligned_and_flattened() {
        let o = Outcome::new(
            "eval",
            true,
            json!({"n": 4, "size": {"k": 2, "mean": 1.5}, "ids": [1, 2]}),
        );
        let text = render_text(&o);
        assert_eq!(
            text,
            "eval: ok\n  n          4\n  size.k     2\n  size.mean  1.5\n  ids        [1, 2]\n"
        );
    }

    #[test]
    fn object_arrays_render_as_tables() {
        let o = Outcome::new(
            "bench",
            true,
            json!({"rows": [{"name": "a", "ms": 1}, {"name": "bbb", "ms": 20}]}),
        );
        assert_eq!(
            render_text(&o),
            "bench: ok\n  rows:\n    name  ms\n    a     1\n    bbb   20\n"
        );
    }

    #[test]
    fn long_arrays_are_summarized() {
        let o = Outcome::new("x", false, json!({"v": (0..20).collect::<Vec<_>>()}));
        assert!(render_text(&o).contains("[20 items]"));
        assert!(render_text(&o).starts_with("x: FAILED"));
    }
}
