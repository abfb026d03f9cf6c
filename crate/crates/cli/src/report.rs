use std::path::Path;

use arcnash::{Cone, Face, LatticeVector};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::CliError;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConeDocument {
    pub lattice_rank: usize,
    pub rays: Vec<Vec<i64>>,
}

impl ConeDocument {
    pub fn load(path: &Path) -> Result<(ConeDocument, Cone), CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
        let doc: ConeDocument = serde_json::from_str(&text).map_err(|e| {
            CliError::Input(format!("{}:{}:{}: {e}", path.display(), e.line(), e.column()))
        })?;
        for (i, r) in doc.rays.iter().enumerate() {
            if r.len() != doc.lattice_rank {
                return Err(CliError::Input(format!(
                    "{}: ray {} has {} entries, lattice_rank is {}",
                    path.display(),
                    i + 1,
                    r.len(),
                    doc.lattice_rank
                )));
            }
        }
        if doc.lattice_rank == 0 {
            return Err(arcnash::Error::ZeroRank.into());
        }
        let rays: Vec<LatticeVector> = doc.rays.iter().map(|r| LatticeVector::from_slice(r)).collect();
        let cone = Cone::new(&rays).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        Ok((doc, cone))
    }
}

pub fn int(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => Value::from(v),
        None => Value::String(x.to_string()),
    }
}

pub fn vector(v: &LatticeVector) -> Value {
    Value::Array(v.coords().iter().map(int).collect())
}

pub fn vectors<'a>(vs: impl IntoIterator<Item = &'a LatticeVector>) -> Vec<Value> {
    vs.into_iter().map(vector).collect()
}

#[derive(Serialize)]
pub struct Tool {
    pub name: &'static str,
    pub version: &'static str,
}

pub const TOOL: Tool = Tool {
    name: "arcnash",
    version: env!("CARGO_PKG_VERSION"),
};

#[derive(Serialize)]
pub struct Report<I: Serialize, R: Serialize> {
    pub command: &'static str,
    pub tool: Tool,
    pub inputs: I,
    pub results: R,
}

impl<I: Serialize, R: Serialize> Report<I, R> {
    pub fn new(command: &'static str, inputs: I, results: R) -> Self {
        Report {
            command,
            tool: TOOL,
            inputs,
            results,
        }
    }

    pub fn render(&self) -> String {
        let value = serde_json::to_value(self).expect("reports serialize");
        let mut out = String::new();
        write_value(&value, 0, &mut out);
        out.push('\n');
        out
    }
}

/// Pretty JSON with arrays of scalars kept on one line.
fn write_value(v: &Value, indent: usize, out: &mut String) {
    let pad = |n: usize| "  ".repeat(n);
    match v {
        Value::Object(map) if !map.is_empty() => {
            out.push_str("{\n");
            for (i, (k, x)) in map.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                out.push_str(&Value::String(k.clone()).to_string());
                out.push_str(": ");
                write_value(x, indent + 1, out);
                out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push('}');
        }
        Value::Array(items) if items.iter().any(|x| x.is_array() || x.is_object()) => {
            out.push_str("[\n");
            for (i, x) in items.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                write_value(x, indent + 1, out);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push(']');
        }
        Value::Array(items) => {
            let parts: Vec<String> = items.iter().map(Value::to_string).collect();
            out.push('[');
            out.push_str(&parts.join(", "));
            out.push(']');
        }
        other => out.push_str(&other.to_string()),
    }
}

#[derive(Serialize)]
pub struct FaceReport {
    pub dim: usize,
    pub rays: Vec<Value>,
    pub regular: bool,
}

impl FaceReport {
    pub fn new(f: &Face) -> Self {
        FaceReport {
            dim: f.dim(),
            rays: vectors(&f.rays()),
            regular: f.is_regular(),
        }
    }
}
