//! Key/value reports rendered as text or JSON from the same entries.

use serde_json::{Map, Number, Value as Json};

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Num(f64),
    Int(i64),
    Bool(bool),
    Text(String),
}

impl From<f64> for Value {
    fn from(v: f64) -> Self {
        Value::Num(v)
    }
}

impl From<i64> for Value {
    fn from(v: i64) -> Self {
        Value::Int(v)
    }
}

impl From<u64> for Value {
    fn from(v: u64) -> Self {
        Value::Int(v as i64)
    }
}

impl From<usize> for Value {
    fn from(v: usize) -> Self {
        Value::Int(v as i64)
    }
}

impl From<bool> for Value {
    fn from(v: bool) -> Self {
        Value::Bool(v)
    }
}

impl From<&str> for Value {
    fn from(v: &str) -> Self {
        Value::Text(v.to_string())
    }
}

impl From<String> for Value {
    fn from(v: String) -> Self {
        Value::Text(v)
    }
}

/// Shortest representation that parses back to the same f64.
pub fn format_number(v: f64) -> String {
    let a = v.abs();
    if v == 0.0 || (1e-4..1e6).contains(&a) || !v.is_finite() {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

#[derive(Debug, Default, Clone, PartialEq)]
pub struct Report {
    pub entries: Vec<(String, Value)>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.entries.push((key.to_string(), value.into()));
        self
    }

    pub fn text(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.entries {
            let shown = match v {
                Value::Num(x) => format_number(*x),
                Value::Int(i) => i.to_string(),
                Value::Bool(b) => b.to_string(),
                Value::Text(s) => s.clone(),
            };
            out.push_str(&format!("{k} = {shown}\n"));
        }
        out
    }

    pub fn json(&self) -> Json {
        let mut m = Map::new();
        for (k, v) in &self.entries {
            let j = match v {
                Value::Num(x) => Number::from_f64(*x).map(Json::Number).unwrap_or(Json::Null),
                Value::Int(i) => Json::from(*i),
                Value::Bool(b) => Json::Bool(*b),
                Value::Text(s) => Json::String(s.clone()),
            };
            m.insert(k.clone(), j);
        }
        Json::Object(m)
    }
}
