//! Command reports and their three output formats.

use std::fmt::Write as _;
use std::time::Duration;

use gradjet::jetalg::{GradedForm, ModelContext};
use serde_json::{json, Map};

use crate::render::{form_json, form_latex, form_text};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
    Latex,
}

/// Structured result tree. Maps keep insertion order in text and LaTeX;
/// JSON objects are emitted with sorted keys.
#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Form(GradedForm),
    Text(String),
    Int(i64),
    Bool(bool),
    List(Vec<Value>),
    Map(Vec<(String, Value)>),
}

impl Value {
    pub fn map<K: Into<String>>(entries: impl IntoIterator<Item = (K, Value)>) -> Value {
        Value::Map(entries.into_iter().map(|(k, v)| (k.into(), v)).collect())
    }

    pub fn text(s: impl Into<String>) -> Value {
        Value::Text(s.into())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    /// A mathematical precondition failed; the result carries the witness.
    Refused,
}

/// One re-asserted identity and its residual, which should be zero.
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub identity: String,
    pub residual: GradedForm,
}

impl Check {
    pub fn new(identity: impl Into<String>, residual: GradedForm) -> Self {
        Check {
            identity: identity.into(),
            residual,
        }
    }

    pub fn holds(&self) -> bool {
        self.residual.is_zero()
    }
}

#[derive(Clone, Debug)]
pub struct Report {
    pub command: String,
    pub status: Status,
    pub result: Value,
    pub verification: Option<Vec<Check>>,
    pub elapsed: Duration,
    /// Model in which the forms of the report live.
    pub ctx: ModelContext,
}

impl Report {
    pub fn verified(&self) -> bool {
        self.verification.iter().flatten().all(Check::holds)
    }

    pub fn exit_code(&self) -> i32 {
        match (self.status, self.verified()) {
            (_, false) => 1,
            (Status::Refused, true) => 2,
            (Status::Ok, true) => 0,
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.to_json()).expect("serializable");
                s.push('\n');
                s
            }
            Format::Text | Format::Latex => self.render_tree(format),
        }
    }

    fn status_str(&self) -> &'static str {
        match (self.status, self.verified()) {
            (_, false) => "verification-failed",
            (Status::Ok, true) => "ok",
            (Status::Refused, true) => "refused",
        }
    }

    /// Timing is left out so that identical inputs give identical bytes.
    pub fn to_json(&self) -> serde_json::Value {
        let mut out = Map::new();
        out.insert("command".into(), json!(self.command));
        out.insert("status".into(), json!(self.status_str()));
        out.insert("result".into(), value_json(&self.ctx, &self.result));
        if let Some(checks) = &self.verification {
            let checks: Vec<_> = checks
                .iter()
                .map(|c| {
                    json!({
                        "identity": c.identity,
                        "holds": c.holds(),
                        "residual": form_json(&self.ctx, &c.residual),
                    })
                })
                .collect();
            out.insert("verification".into(), json!(checks));
        }
        serde_json::Value::Object(out)
    }

    fn render_tree(&self, format: Format) -> String {
        let mut out = String::new();
        let comment = if format == Format::Latex { "% " } else { "" };
        let _ = writeln!(out, "{comment}command: {}", self.command);
        let _ = writeln!(out, "{comment}status: {}", self.status_str());
        let _ = writeln!(out, "{comment}result:");
        write_value(&mut out, &self.ctx, &self.result, 1, format);
        if let Some(checks) = &self.verification {
            let _ = writeln!(out, "{comment}verification:");
            for c in checks {
                let verdict = if c.holds() { "holds" } else { "FAILS" };
                let _ = writeln!(out, "{comment}  {}: {verdict}", c.identity);
                if !c.holds() {
                    write_form(&mut out, &self.ctx, "residual", &c.residual, 2, format);
                }
            }
        }
        let _ = writeln!(out, "{comment}time: {:.3} ms", self.elapsed.as_secs_f64() * 1e3);
        out
    }
}

fn value_json(ctx: &ModelContext, v: &Value) -> serde_json::Value {
    match v {
        Value::Form(f) => form_json(ctx, f),
        Value::Text(s) => json!(s),
        Value::Int(k) => json!(k),
        Value::Bool(b) => json!(b),
        Value::List(items) => serde_json::Value::Array(items.iter().map(|x| value_json(ctx, x)).collect()),
        Value::Map(entries) => {
            serde_json::Value::Object(entries.iter().map(|(k, x)| (k.clone(), value_json(ctx, x))).collect())
        }
    }
}

fn write_form(out: &mut String, ctx: &ModelContext, key: &str, f: &GradedForm, depth: usize, format: Format) {
    let pad = "  ".repeat(depth);
    match format {
        Format::Latex => {
            let _ = writeln!(out, "% {pad}{key}: {}", form_text(ctx, f));
            let _ = writeln!(out, "{key} &= {} \\\\", form_latex(ctx, f));
        }
        _ => {
            let _ = writeln!(out, "{pad}{key}: {}", form_text(ctx, f));
        }
    }
}

fn write_value(out: &mut String, ctx: &ModelContext, v: &Value, depth: usize, format: Format) {
    let Value::Map(entries) = v else {
        write_entry(out, ctx, "value", v, depth, format);
        return;
    };
    for (k, x) in entries {
        write_entry(out, ctx, k, x, depth, format);
    }
}

fn write_entry(out: &mut String, ctx: &ModelContext, key: &str, v: &Value, depth: usize, format: Format) {
    let pad = "  ".repeat(depth);
    let comment = if format == Format::Latex { "% " } else { "" };
    match v {
        Value::Form(f) => write_form(out, ctx, key, f, depth, format),
        Value::Text(s) => {
            let _ = writeln!(out, "{comment}{pad}{key}: {s}");
        }
        Value::Int(k) => {
            let _ = writeln!(out, "{comment}{pad}{key}: {k}");
        }
        Value::Bool(b) => {
            let _ = writeln!(out, "{comment}{pad}{key}: {b}");
        }
        Value::List(items) if items.is_empty() => {
            let _ = writeln!(out, "{comment}{pad}{key}: []");
        }
        Value::List(items) => {
            let _ = writeln!(out, "{comment}{pad}{key}:");
            for (i, x) in items.iter().enumerate() {
                write_entry(out, ctx, &format!("[{i}]"), x, depth + 1, format);
            }
        }
        Value::Map(entries) => {
            let _ = writeln!(out, "{comment}{pad}{key}:");
            for (k, x) in entries {
                write_entry(out, ctx, k, x, depth + 1, format);
            }
        }
    }
}
