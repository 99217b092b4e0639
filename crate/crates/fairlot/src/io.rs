//! JSON file formats. Every rational is written as a `"p/q"` string (plain
//! `"p"` for integers); on input, numbers, decimals and `"p/q"` strings are
//! all read exactly.

use std::fs;
use std::path::Path;

use fairlot_core::rational::{format_rational, parse_rational};
use fairlot_core::{FractionalAllocation, Instance, IntegralAllocation, Lottery, Rational};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("cannot read `{path}`")]
    Read {
        path: String,
        source: std::io::Error,
    },
    #[error("cannot write `{path}`")]
    Write {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Model(#[from] fairlot_core::Error),
}

pub type Result<T> = std::result::Result<T, FormatError>;

fn invalid(msg: impl Into<String>) -> FormatError {
    FormatError::Invalid(msg.into())
}

/// A number or a string holding an integer, a decimal or `p/q`.
pub fn rational_from_json(v: &Value) -> Result<Rational> {
    match v {
        Value::Number(n) => Ok(parse_rational(&n.to_string())?),
        Value::String(s) => Ok(parse_rational(s)?),
        other => Err(invalid(format!("expected a number or a rational string, got {other}"))),
    }
}

pub fn rational_to_json(q: &Rational) -> Value {
    Value::String(format_rational(q))
}

fn rational_row(row: &[Rational]) -> Vec<String> {
    row.iter().map(format_rational).collect()
}

fn rational_rows(rows: &[Value]) -> Result<Vec<Vec<Rational>>> {
    rows.iter()
        .enumerate()
        .map(|(i, row)| match row {
            Value::Array(cells) => cells.iter().map(rational_from_json).collect(),
            _ => Err(invalid(format!("row {i} is not an array"))),
        })
        .collect()
}

pub fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| FormatError::Read {
        path: path.display().to_string(),
        source,
    })
}

/// Writes `value` as pretty JSON with a trailing newline, to `path` or to
/// standard output.
pub fn emit(value: &impl Serialize, path: Option<&Path>) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    match path {
        Some(p) => fs::write(p, text).map_err(|source| FormatError::Write {
            path: p.display().to_string(),
            source,
        }),
        None => {
            use std::io::Write;
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|source| FormatError::Write {
                    path: "<stdout>".into(),
                    source,
                })
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct InstanceFile {
    agents: usize,
    items: usize,
    values: Vec<Value>,
}

pub fn parse_instance(text: &str) -> Result<Instance> {
    let file: InstanceFile = serde_json::from_str(text)?;
    let values = rational_rows(&file.values)?;
    if values.len() != file.agents {
        return Err(invalid(format!(
            "`agents` is {} but `values` has {} rows",
            file.agents,
            values.len()
        )));
    }
    if let Some((i, row)) = values.iter().enumerate().find(|(_, r)| r.len() != file.items) {
        return Err(invalid(format!(
            "`items` is {} but row {i} has {} values",
            file.items,
            row.len()
        )));
    }
    Ok(Instance::new(values)?)
}

pub fn load_instance(path: &Path) -> Result<Instance> {
    parse_instance(&read_file(path)?)
}

pub fn instance_json(inst: &Instance) -> Value {
    serde_json::json!({
        "agents": inst.agents(),
        "items": inst.items(),
        "values": inst.values().iter().map(|r| rational_row(r)).collect::<Vec<_>>(),
    })
}

#[derive(Debug, Serialize, Deserialize)]
struct PartFile {
    weight: Value,
    bundles: Vec<Vec<usize>>,
}

#[derive(Debug, Serialize, Deserialize)]
struct LotteryFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    items: Option<usize>,
    support: Vec<PartFile>,
}

/// Reads a lottery. The item count comes from the file's `items` field,
/// else from `items`, else from the largest index mentioned.
pub fn parse_lottery(text: &str, items: Option<usize>) -> Result<Lottery> {
    let file: LotteryFile = serde_json::from_str(text)?;
    let m = match (file.items, items) {
        (Some(a), Some(b)) if a != b => {
            return Err(invalid(format!("lottery has {a} items, instance has {b}")));
        }
        (Some(a), _) | (None, Some(a)) => a,
        (None, None) => file
            .support
            .iter()
            .flat_map(|p| p.bundles.iter().flatten())
            .max()
            .map_or(0, |&j| j + 1),
    };
    let entries = file
        .support
        .iter()
        .map(|p| Ok((rational_from_json(&p.weight)?, IntegralAllocation::from_bundles(m, &p.bundles)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(Lottery::new(entries)?)
}

pub fn load_lottery(path: &Path, items: Option<usize>) -> Result<Lottery> {
    parse_lottery(&read_file(path)?, items)
}

/// Canonical form: support sorted by allocation matrix.
pub fn lottery_json(lottery: &Lottery) -> Value {
    let sorted = lottery.sorted();
    let support: Vec<Value> = sorted
        .support()
        .iter()
        .map(|(w, a)| serde_json::json!({ "weight": rational_to_json(w), "bundles": a.bundles() }))
        .collect();
    serde_json::json!({ "items": lottery.items(), "support": support })
}

/// Either flavour of allocation, as read from a file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Allocation {
    Fractional(FractionalAllocation),
    Integral(IntegralAllocation),
}

impl Allocation {
    pub fn to_fractional(&self) -> FractionalAllocation {
        match self {
            Allocation::Fractional(x) => x.clone(),
            Allocation::Integral(a) => a.to_fractional(),
        }
    }

    /// The integral allocation itself, or a 0/1 matrix read as one.
    pub fn to_integral(&self) -> Option<IntegralAllocation> {
        match self {
            Allocation::Fractional(x) => x.to_integral(),
            Allocation::Integral(a) => Some(a.clone()),
        }
    }
}

#[derive(Debug, Deserialize)]
struct AllocationFile {
    matrix: Option<Vec<Value>>,
    bundles: Option<Vec<Vec<usize>>>,
    items: Option<usize>,
}

/// Reads `{"matrix": [...]}` or `{"bundles": [...], "items": m}`; other
/// fields (diagnostics) are ignored.
pub fn parse_allocation(text: &str, items: Option<usize>) -> Result<Allocation> {
    let file: AllocationFile = serde_json::from_str(text)?;
    match (file.matrix, file.bundles) {
        (Some(rows), None) => Ok(Allocation::Fractional(FractionalAllocation::new(rational_rows(&rows)?)?)),
        (None, Some(bundles)) => {
            let m = file
                .items
                .or(items)
                .or_else(|| bundles.iter().flatten().max().map(|&j| j + 1))
                .unwrap_or(0);
            Ok(Allocation::Integral(IntegralAllocation::from_bundles(m, &bundles)?))
        }
        (Some(_), Some(_)) => Err(invalid("allocation has both `matrix` and `bundles`")),
        (None, None) => Err(invalid("allocation needs `matrix` or `bundles`")),
    }
}

pub fn load_allocation(path: &Path, items: Option<usize>) -> Result<Allocation> {
    parse_allocation(&read_file(path)?, items)
}

pub fn fractional_json(x: &FractionalAllocation) -> Value {
    serde_json::json!({ "matrix": x.rows().iter().map(|r| rational_row(r)).collect::<Vec<_>>() })
}

pub fn integral_json(a: &IntegralAllocation) -> Value {
    serde_json::json!({ "items": a.items(), "bundles": a.bundles() })
}
