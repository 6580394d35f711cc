//! JSON ingestion of external decompositions, report emission, caching of
//! computed decompositions and batch scans over levels.
//!
//! All integers in the JSON formats are exact: polynomial coefficients are
//! listed constant term first, as JSON numbers when they fit in 64 bits and as
//! decimal strings otherwise.

mod cache;
mod scan;

use std::fmt::Write as _;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};

use crate::criterion::{CriterionReport, RankInput};
use crate::decomposition::{Decomposition, DecompositionSource, IsogenyFactor};
use crate::poly::{classify_hecke_field, FieldClass, IntPolynomial};
use crate::{Error, Result};

pub use cache::{decomposition_for, DecompositionCache};
pub use scan::{emit_scan, parse_rank_source, scan, ScanOptions, ScanReport, ScanRow, ScanSummary};

/// Version of every JSON document this crate writes.
pub const SCHEMA_VERSION: u64 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Text,
    Json,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "text" => Ok(Format::Text),
            "json" => Ok(Format::Json),
            _ => Err(format!("unknown format {s:?}, expected \"text\" or \"json\"")),
        }
    }
}

fn schema(path: &str, message: impl Into<String>) -> Error {
    Error::schema(path, message)
}

fn json_integer(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => Value::from(v),
        None => Value::from(x.to_string()),
    }
}

fn parse_integer(v: &Value, path: &str) -> Result<BigInt> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .or_else(|| n.as_u64().map(BigInt::from))
            .ok_or_else(|| schema(path, "expected an integer")),
        Value::String(s) => BigInt::from_str(s.trim())
            .map_err(|_| schema(path, format!("{s:?} is not a decimal integer"))),
        _ => Err(schema(path, "expected an integer")),
    }
}

fn parse_count(v: &Value, path: &str) -> Result<u64> {
    v.as_u64()
        .ok_or_else(|| schema(path, "expected a nonnegative integer"))
}

fn get<'a>(obj: &'a Map<String, Value>, key: &str) -> Option<&'a Value> {
    obj.get(key).filter(|v| !v.is_null())
}

fn as_object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| schema(path, "expected an object"))
}

fn class_name(c: FieldClass) -> &'static str {
    match c {
        FieldClass::TotallyReal => "real",
        FieldClass::Cm { .. } => "cm",
    }
}

pub fn source_to_json(s: &DecompositionSource) -> Value {
    match s {
        DecompositionSource::Computed { level } => json!({"kind": "computed", "level": level}),
        DecompositionSource::Ingested { label } => json!({"kind": "ingested", "label": label}),
    }
}

pub fn rank_to_json(r: &RankInput) -> Value {
    match r {
        RankInput::Exact(r) => json!({ "exact": r }),
        RankInput::Interval { lo, hi } => json!({"interval": {"lo": lo, "hi": hi}}),
        RankInput::Unknown => json!("unknown"),
    }
}

/// Accepts `{"exact": r}`, `{"interval": {"lo": a, "hi": b}}`, `"unknown"` or a bare integer.
pub fn parse_rank(v: &Value, path: &str) -> Result<RankInput> {
    match v {
        Value::Null => Ok(RankInput::Unknown),
        Value::String(s) if s == "unknown" => Ok(RankInput::Unknown),
        Value::Number(_) => Ok(RankInput::Exact(parse_count(v, path)?)),
        Value::Object(obj) => {
            let keys: Vec<&String> = obj.keys().collect();
            match keys.as_slice() {
                [k] if *k == "exact" => Ok(RankInput::Exact(parse_count(
                    &obj["exact"],
                    &format!("{path}.exact"),
                )?)),
                [k] if *k == "interval" => {
                    let ipath = format!("{path}.interval");
                    let iv = as_object(&obj["interval"], &ipath)?;
                    let lo_path = format!("{ipath}.lo");
                    let hi_path = format!("{ipath}.hi");
                    let lo = parse_count(iv.get("lo").unwrap_or(&Value::Null), &lo_path)?;
                    let hi = parse_count(iv.get("hi").unwrap_or(&Value::Null), &hi_path)?;
                    RankInput::interval(lo, hi).map_err(|e| schema(&ipath, e.to_string()))
                }
                _ => Err(schema(
                    path,
                    "expected {\"exact\": r}, {\"interval\": {\"lo\": a, \"hi\": b}} or \"unknown\"",
                )),
            }
        }
        _ => Err(schema(path, "expected a rank object or \"unknown\"")),
    }
}

fn factor_to_json(f: &IsogenyFactor) -> Value {
    let mut obj = Map::new();
    obj.insert("label".into(), json!(f.label));
    obj.insert("degree".into(), json!(f.degree));
    obj.insert("class".into(), json!(class_name(f.field_class)));
    obj.insert("multiplicity".into(), json!(f.multiplicity));
    if let Some(p) = &f.field_poly {
        obj.insert(
            "min_poly".into(),
            Value::Array(p.coeffs().iter().map(json_integer).collect()),
        );
    }
    Value::Object(obj)
}

/// `{schema_version, source, genus, factors}`: the decomposition alone.
pub fn decomposition_to_json(d: &Decomposition) -> Value {
    json!({
        "schema_version": SCHEMA_VERSION,
        "source": source_to_json(d.source()),
        "genus": d.genus(),
        "factors": d.factors().iter().map(factor_to_json).collect::<Vec<_>>(),
    })
}

fn parse_source(obj: &Map<String, Value>) -> Result<DecompositionSource> {
    if let Some(v) = get(obj, "source") {
        let s = as_object(v, "source")?;
        let kind = get(s, "kind")
            .and_then(Value::as_str)
            .ok_or_else(|| schema("source.kind", "expected \"computed\" or \"ingested\""))?;
        return match kind {
            "computed" => {
                let level = parse_count(get(s, "level").unwrap_or(&Value::Null), "source.level")?;
                if level == 0 {
                    return Err(schema("source.level", "level must be positive"));
                }
                Ok(DecompositionSource::Computed { level })
            }
            "ingested" => {
                let label = get(s, "label")
                    .and_then(Value::as_str)
                    .ok_or_else(|| schema("source.label", "expected a string"))?;
                Ok(DecompositionSource::Ingested {
                    label: label.to_string(),
                })
            }
            other => Err(schema(
                "source.kind",
                format!("unknown kind {other:?}, expected \"computed\" or \"ingested\""),
            )),
        };
    }
    match get(obj, "curve_label") {
        Some(Value::String(s)) => Ok(DecompositionSource::Ingested { label: s.clone() }),
        Some(_) => Err(schema("curve_label", "expected a string")),
        None => Err(schema("curve_label", "missing; give curve_label or source")),
    }
}

fn parse_factor(v: &Value, i: usize, curve: &str) -> Result<IsogenyFactor> {
    let path = format!("factors[{i}]");
    let obj = as_object(v, &path)?;
    let at = |key: &str| format!("{path}.{key}");

    let degree = parse_count(get(obj, "degree").unwrap_or(&Value::Null), &at("degree"))?;
    if degree == 0 {
        return Err(schema(&at("degree"), "degree must be positive"));
    }
    let degree = degree as usize;

    let class = match get(obj, "class").and_then(Value::as_str) {
        Some("real") => FieldClass::TotallyReal,
        Some("cm") => {
            if degree % 2 != 0 {
                return Err(schema(
                    &at("class"),
                    format!("a CM field has even degree, got {degree}"),
                ));
            }
            FieldClass::Cm {
                real_subfield_degree: degree / 2,
            }
        }
        _ => return Err(schema(&at("class"), "expected \"real\" or \"cm\"")),
    };

    let multiplicity = match get(obj, "multiplicity") {
        None => 1,
        Some(m) => parse_count(m, &at("multiplicity"))? as usize,
    };
    if multiplicity == 0 {
        return Err(schema(&at("multiplicity"), "multiplicity must be positive"));
    }

    let field_poly = match get(obj, "min_poly") {
        None => None,
        Some(Value::Array(cs)) => {
            let coeffs = cs
                .iter()
                .enumerate()
                .map(|(j, c)| parse_integer(c, &format!("{}[{j}]", at("min_poly"))))
                .collect::<Result<Vec<_>>>()?;
            let f = IntPolynomial::new(coeffs);
            if f.degree() != Some(degree) {
                return Err(schema(
                    &at("min_poly"),
                    format!("polynomial {f} does not have degree {degree}"),
                ));
            }
            let found = classify_hecke_field(&f).map_err(|e| schema(&at("min_poly"), e.to_string()))?;
            if found != class {
                return Err(schema(
                    &at("min_poly"),
                    format!(
                        "polynomial {f} defines a {} field but class is {:?}",
                        class_name(found),
                        class_name(class)
                    ),
                ));
            }
            Some(f)
        }
        Some(_) => return Err(schema(&at("min_poly"), "expected a list of integers")),
    };

    let label = match get(obj, "label") {
        None => format!("{curve}.{}", i + 1),
        Some(Value::String(s)) => s.clone(),
        Some(_) => return Err(schema(&at("label"), "expected a string")),
    };

    IsogenyFactor::new(degree, class, multiplicity, field_poly, label)
        .map_err(|e| schema(&path, e.to_string()))
}

fn parse_decomposition_value(root: &Value) -> Result<(Decomposition, RankInput)> {
    let obj = as_object(root, "$")?;
    if let Some(v) = get(obj, "schema_version") {
        let version = parse_count(v, "schema_version")?;
        if version != SCHEMA_VERSION {
            return Err(schema(
                "schema_version",
                format!("unsupported version {version}, expected {SCHEMA_VERSION}"),
            ));
        }
    }
    let source = parse_source(obj)?;
    let curve = source.name();
    let factors = match get(obj, "factors") {
        Some(Value::Array(fs)) if !fs.is_empty() => fs
            .iter()
            .enumerate()
            .map(|(i, f)| parse_factor(f, i, &curve))
            .collect::<Result<Vec<_>>>()?,
        Some(Value::Array(_)) => return Err(schema("factors", "at least one factor is required")),
        _ => return Err(schema("factors", "expected a list of factors")),
    };
    let total: u64 = factors.iter().map(IsogenyFactor::dimension).sum();
    let genus = match get(obj, "genus") {
        None => total,
        Some(v) => {
            let g = parse_count(v, "genus")?;
            if g != total {
                return Err(schema(
                    "genus",
                    format!("genus {g} but degree x multiplicity sums to {total}"),
                ));
            }
            g
        }
    };
    let rank = match get(obj, "rank") {
        None => RankInput::Unknown,
        Some(v) => parse_rank(v, "rank")?,
    };
    let d = Decomposition::new(source, factors, genus).map_err(|e| schema("factors", e.to_string()))?;
    Ok((d, rank))
}

/// Parses a decomposition file (or a JSON report) into a validated decomposition and rank.
pub fn parse_decomposition_file(bytes: &[u8]) -> Result<(Decomposition, RankInput)> {
    let text = std::str::from_utf8(bytes).map_err(|e| Error::Json(format!("not UTF-8: {e}")))?;
    let root: Value = serde_json::from_str(text).map_err(|e| Error::Json(e.to_string()))?;
    parse_decomposition_value(&root)
}

pub fn report_to_json(r: &CriterionReport) -> Value {
    let d = &r.decomposition;
    json!({
        "schema_version": SCHEMA_VERSION,
        "source": source_to_json(d.source()),
        "genus": r.genus,
        "factors": d.factors().iter().map(factor_to_json).collect::<Vec<_>>(),
        "ns_lower_bound": r.ns_lower_bound,
        "classical_bound": r.classical_bound,
        "quadratic_bound": r.quadratic_bound,
        "rank": rank_to_json(&r.rank),
        "classical_verdict": r.classical_verdict.as_str(),
        "quadratic_verdict": r.quadratic_verdict.as_str(),
        "conclusion_scope": r.conclusion_scope,
        "sharpness_note": r.sharpness_note,
    })
}

/// Serializes a report; the output ends with a newline.
pub fn emit_report(r: &CriterionReport, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&report_to_json(r)).expect("serializable");
            s.push('\n');
            s
        }
        Format::Text => report_text(r),
    }
}

fn report_text(r: &CriterionReport) -> String {
    let d = &r.decomposition;
    let mut out = String::new();
    let _ = writeln!(out, "{:<28}{}", "curve", d.source().name());
    let _ = writeln!(out, "{:<28}{}", "genus", r.genus);
    let _ = writeln!(out);
    let _ = writeln!(
        out,
        "  {:<12}{:>6}  {:<6}{:>5}  {}",
        "factor", "degree", "class", "mult", "field polynomial"
    );
    for f in d.factors() {
        let poly = f
            .field_poly
            .as_ref()
            .map_or_else(|| "-".to_string(), |p| p.to_string());
        let _ = writeln!(
            out,
            "  {:<12}{:>6}  {:<6}{:>5}  {}",
            f.label,
            f.degree,
            class_name(f.field_class),
            f.multiplicity,
            poly
        );
    }
    let _ = writeln!(out);
    let _ = writeln!(out, "{:<28}{}", "NS rank lower bound rNS", r.ns_lower_bound);
    let _ = writeln!(out, "{:<28}{}", "classical bound g", r.classical_bound);
    let _ = writeln!(out, "{:<28}{}", "quadratic bound g-1+rNS", r.quadratic_bound);
    let _ = writeln!(out, "{:<28}{}", "rank J(Q)", r.rank);
    let _ = writeln!(out);
    let _ = writeln!(
        out,
        "{:<28}{:<9}(rank < {})",
        "classical verdict", r.classical_verdict, r.classical_bound
    );
    let _ = writeln!(
        out,
        "{:<28}{:<9}(rank < {})",
        "quadratic verdict", r.quadratic_verdict, r.quadratic_bound
    );
    let _ = writeln!(out);
    let _ = writeln!(out, "scope: {}", r.conclusion_scope);
    let _ = writeln!(out, "note:  {}", r.sharpness_note);
    out
}
