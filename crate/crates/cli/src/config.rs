//! Configuration files: `{"dimension", "strings": [{"x", "e"}], "options"}`.
//!
//! Rationals are accepted as JSON integers or as strings such as `"-3/4"`.
//! Every validation error names the offending field path.

use causalchop::minkowski::{causal_class, CausalClass, ExactVector};
use causalchop::rational;
use causalchop::{Rational, StringGeom};
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct FileOptions {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub refine_limit: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub jobs: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
}

#[derive(Debug, Clone)]
pub struct ConfigFile {
    pub dimension: usize,
    pub strings: Vec<StringGeom>,
    pub options: FileOptions,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    pub path: String,
    pub message: String,
}

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.path.is_empty() {
            write!(f, "{}", self.message)
        } else {
            write!(f, "{}: {}", self.path, self.message)
        }
    }
}

fn err(path: impl Into<String>, message: impl Into<String>) -> ConfigError {
    ConfigError { path: path.into(), message: message.into() }
}

fn field<'a>(obj: &'a Value, path: &str, key: &str) -> Result<&'a Value, ConfigError> {
    obj.get(key).ok_or_else(|| err(join(path, key), "missing field"))
}

fn join(path: &str, key: &str) -> String {
    if path.is_empty() {
        key.to_string()
    } else {
        format!("{path}.{key}")
    }
}

fn parse_rational(v: &Value, path: &str) -> Result<Rational, ConfigError> {
    match v {
        Value::String(s) => rational::parse(s).map_err(|_| err(path, format!("invalid rational {s:?}"))),
        Value::Number(n) if n.is_i64() || n.is_u64() => {
            rational::parse(&n.to_string()).map_err(|_| err(path, format!("invalid rational {n}")))
        }
        Value::Number(n) => Err(err(path, format!("{n} is not exact; write rationals as \"p/q\""))),
        other => Err(err(path, format!("expected a rational, found {other}"))),
    }
}

fn parse_vector(v: &Value, path: &str, dim: usize) -> Result<ExactVector, ConfigError> {
    let items = v.as_array().ok_or_else(|| err(path, "expected an array"))?;
    if items.len() != dim {
        return Err(err(path, format!("expected {dim} components, found {}", items.len())));
    }
    let coords = items
        .iter()
        .enumerate()
        .map(|(k, c)| parse_rational(c, &format!("{path}[{k}]")))
        .collect::<Result<Vec<_>, _>>()?;
    ExactVector::new(coords).map_err(|e| err(path, e.to_string()))
}

fn parse_options(v: Option<&Value>) -> Result<FileOptions, ConfigError> {
    let mut opts = FileOptions::default();
    let Some(v) = v else { return Ok(opts) };
    let obj = v.as_object().ok_or_else(|| err("options", "expected an object"))?;
    for (key, value) in obj {
        let path = format!("options.{key}");
        match key.as_str() {
            "refine_limit" => {
                let n = value.as_u64().ok_or_else(|| err(&path, "expected a non-negative integer"))?;
                opts.refine_limit = Some(u32::try_from(n).map_err(|_| err(&path, "out of range"))?);
            }
            "jobs" => {
                let n = value.as_u64().filter(|&n| n > 0).ok_or_else(|| err(&path, "expected a positive integer"))?;
                opts.jobs = Some(n as usize);
            }
            "output" => {
                opts.output = Some(value.as_str().ok_or_else(|| err(&path, "expected a string"))?.to_string());
            }
            _ => return Err(err(&path, "unknown option")),
        }
    }
    Ok(opts)
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let root: Value = serde_json::from_str(text)
            .map_err(|e| err("", format!("invalid JSON at line {}, column {}: {e}", e.line(), e.column())))?;
        Self::from_value(&root)
    }

    pub fn from_value(root: &Value) -> Result<Self, ConfigError> {
        if !root.is_object() {
            return Err(err("", "expected a JSON object"));
        }
        let dimension = field(root, "", "dimension")?
            .as_u64()
            .ok_or_else(|| err("dimension", "expected a positive integer"))? as usize;
        if dimension < 2 {
            return Err(err("dimension", format!("dimension {dimension} is below the minimum of 2")));
        }
        let items = field(root, "", "strings")?.as_array().ok_or_else(|| err("strings", "expected an array"))?;
        let mut strings = Vec::with_capacity(items.len());
        for (i, item) in items.iter().enumerate() {
            let path = format!("strings[{i}]");
            if !item.is_object() {
                return Err(err(&path, "expected an object with fields x and e"));
            }
            let x = parse_vector(field(item, &path, "x")?, &join(&path, "x"), dimension)?;
            let e = parse_vector(field(item, &path, "e")?, &join(&path, "e"), dimension)?;
            if causal_class(&e) != CausalClass::Spacelike {
                return Err(err(join(&path, "e"), "direction is not spacelike"));
            }
            strings.push(StringGeom::new(x, e).map_err(|e| err(&path, e.to_string()))?);
        }
        let options = parse_options(root.get("options"))?;
        Ok(ConfigFile { dimension, strings, options })
    }

    pub fn to_value(&self) -> Value {
        let vec = |v: &ExactVector| Value::Array(v.coords().iter().map(|c| json!(rational::format(c))).collect());
        let strings: Vec<Value> = self.strings.iter().map(|s| json!({"x": vec(&s.base), "e": vec(&s.dir)})).collect();
        let mut out = json!({"dimension": self.dimension, "strings": strings});
        if self.options != FileOptions::default() {
            out["options"] = serde_json::to_value(&self.options).expect("options serialize");
        }
        out
    }
}
