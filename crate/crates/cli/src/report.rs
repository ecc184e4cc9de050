//! Command results and their text and JSON renderings.

use serde_json::{json, Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    /// A well-posed check that came out false.
    Invalid,
    Error,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Invalid => "invalid",
            Status::Error => "error",
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Invalid => 1,
            Status::Error => 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub message: String,
    /// 1-based position, for parse errors.
    pub location: Option<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CommandResult {
    pub status: Status,
    pub verdict: Value,
    pub certificates: Option<Value>,
    pub diagnostic: Option<Diagnostic>,
}

impl CommandResult {
    pub fn new(ok: bool, verdict: Value) -> Self {
        CommandResult {
            status: if ok { Status::Ok } else { Status::Invalid },
            verdict,
            certificates: None,
            diagnostic: None,
        }
    }

    pub fn error(message: impl Into<String>) -> Self {
        CommandResult {
            status: Status::Error,
            verdict: Value::Null,
            certificates: None,
            diagnostic: Some(Diagnostic {
                message: message.into(),
                location: None,
            }),
        }
    }

    pub fn located(message: impl Into<String>, line: usize, column: usize) -> Self {
        let mut r = Self::error(message);
        r.diagnostic.as_mut().unwrap().location = Some((line, column));
        r
    }

    pub fn exit_code(&self) -> i32 {
        self.status.exit_code()
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("status".into(), json!(self.status.as_str()));
        m.insert("verdict".into(), self.verdict.clone());
        m.insert("certificates".into(), self.certificates.clone().unwrap_or(Value::Null));
        if let Some(d) = &self.diagnostic {
            let mut e = Map::new();
            e.insert("message".into(), json!(d.message));
            if let Some((line, column)) = d.location {
                e.insert("line".into(), json!(line));
                e.insert("column".into(), json!(column));
            }
            m.insert("error".into(), Value::Object(e));
        }
        Value::Object(m)
    }

    pub fn render_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("serializable") + "\n"
    }

    pub fn render_text(&self) -> String {
        let mut out = format!("{}\n", self.status.as_str());
        if let Some(d) = &self.diagnostic {
            match d.location {
                Some((l, c)) => out.push_str(&format!("error: {l}:{c}: {}\n", d.message)),
                None => out.push_str(&format!("error: {}\n", d.message)),
            }
        }
        if let Value::Object(m) = &self.verdict {
            for (k, v) in m {
                write_value(&mut out, k, v, 0);
            }
        }
        if let Some(c) = &self.certificates {
            write_value(&mut out, "certificates", c, 0);
        }
        out
    }
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("none".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        _ => None,
    }
}

fn write_value(out: &mut String, key: &str, v: &Value, depth: usize) {
    let pad = "  ".repeat(depth);
    if let Some(s) = scalar(v) {
        out.push_str(&format!("{pad}{key}: {s}\n"));
        return;
    }
    match v {
        Value::Array(items) if items.is_empty() => out.push_str(&format!("{pad}{key}: []\n")),
        Value::Array(items) => {
            out.push_str(&format!("{pad}{key}:\n"));
            for item in items {
                match (scalar(item), item) {
                    (Some(s), _) => out.push_str(&format!("{pad}  - {s}\n")),
                    (None, Value::Object(m)) => {
                        let mut first = true;
                        for (k, v) in m {
                            let mut sub = String::new();
                            write_value(&mut sub, k, v, depth + 2);
                            if first {
                                // put the first field on the bullet line
                                let trimmed = sub.trim_start_matches(' ');
                                out.push_str(&format!("{pad}  - {trimmed}"));
                                first = false;
                            } else {
                                out.push_str(&sub);
                            }
                        }
                    }
                    (None, other) => write_value(out, "-", other, depth + 1),
                }
            }
        }
        Value::Object(m) => {
            out.push_str(&format!("{pad}{key}:\n"));
            for (k, v) in m {
                write_value(out, k, v, depth + 1);
            }
        }
        _ => unreachable!(),
    }
}
