use std::collections::BTreeMap;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde_json::{json, Value};

use super::{parse_rank, rank_to_json, schema, DecompositionCache, Format, SCHEMA_VERSION};
use crate::criterion::{evaluate, RankInput, Verdict};
use crate::io::cache::decomposition_for;
use crate::modsym::genus_formula;
use crate::{Error, Result};

#[derive(Clone, Debug, Default)]
pub struct ScanOptions {
    pub rank_source: BTreeMap<u64, RankInput>,
    pub cache: Option<DecompositionCache>,
    /// Worker threads; `0` lets the thread pool choose.
    pub jobs: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanRow {
    pub level: u64,
    pub genus: u64,
    /// `(degree, multiplicity, is_cm)` per factor, in label order.
    pub factors: Vec<(usize, usize, bool)>,
    pub ns_lower_bound: u64,
    pub classical_bound: u64,
    pub quadratic_bound: u64,
    pub rank: RankInput,
    pub classical_verdict: Verdict,
    pub quadratic_verdict: Verdict,
}

impl ScanRow {
    /// Compact factor list such as `1 2x2`: degrees, with `xM` marking multiplicity `M > 1`.
    pub fn factor_summary(&self) -> String {
        self.factors
            .iter()
            .map(|&(d, m, cm)| {
                let cm = if cm { "cm" } else { "" };
                if m > 1 {
                    format!("{d}{cm}x{m}")
                } else {
                    format!("{d}{cm}")
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanSummary {
    pub from: u64,
    pub to: u64,
    pub rows: usize,
    /// Levels of genus at least 3 with `rNS < 2`; each one is a fatal inconsistency.
    pub violations: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanReport {
    pub rows: Vec<ScanRow>,
    pub summary: ScanSummary,
}

/// Parses a rank-source map `{"N": rank, …}`; values as accepted by [`parse_rank`].
pub fn parse_rank_source(bytes: &[u8]) -> Result<BTreeMap<u64, RankInput>> {
    let root: Value = serde_json::from_slice(bytes).map_err(|e| Error::Json(e.to_string()))?;
    let obj = root
        .as_object()
        .ok_or_else(|| schema("$", "expected an object mapping levels to ranks"))?;
    let mut out = BTreeMap::new();
    for (key, value) in obj {
        if key == "schema_version" {
            let v = value.as_u64();
            if v != Some(SCHEMA_VERSION) {
                return Err(schema(
                    "schema_version",
                    format!("unsupported version, expected {SCHEMA_VERSION}"),
                ));
            }
            continue;
        }
        let level: u64 = key
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| schema(key, "keys must be positive levels"))?;
        out.insert(level, parse_rank(value, key)?);
    }
    Ok(out)
}

fn scan_level(level: u64, genus: u64, opts: &ScanOptions) -> Result<ScanRow> {
    let d = decomposition_for(level, opts.cache.as_ref())?;
    if d.genus() != genus {
        return Err(Error::Invariant(format!(
            "level {level}: decomposition has genus {} but the genus formula gives {genus}",
            d.genus()
        )));
    }
    let rank = opts.rank_source.get(&level).copied().unwrap_or(RankInput::Unknown);
    let r = evaluate(&d, rank);
    Ok(ScanRow {
        level,
        genus,
        factors: d
            .factors()
            .iter()
            .map(|f| (f.degree, f.multiplicity, f.field_class.is_cm()))
            .collect(),
        ns_lower_bound: r.ns_lower_bound,
        classical_bound: r.classical_bound,
        quadratic_bound: r.quadratic_bound,
        rank,
        classical_verdict: r.classical_verdict,
        quadratic_verdict: r.quadratic_verdict,
    })
}

/// One row per level `from ≤ N ≤ to` with genus at least 2, computed in parallel.
pub fn scan(from: u64, to: u64, opts: &ScanOptions) -> Result<ScanReport> {
    if from == 0 || from > to {
        return Err(Error::Usage(format!(
            "scan range {from}..{to} is empty; need 1 <= from <= to"
        )));
    }
    let levels: Vec<(u64, u64)> = (from..=to)
        .map(|n| (n, genus_formula(n)))
        .filter(|&(_, g)| g >= 2)
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.jobs)
        .build()
        .map_err(|e| Error::Usage(format!("cannot start {} workers: {e}", opts.jobs)))?;
    let rows: Vec<ScanRow> = pool.install(|| {
        levels
            .par_iter()
            .map(|&(n, g)| scan_level(n, g, opts))
            .collect::<Result<_>>()
    })?;
    let violations = rows
        .iter()
        .filter(|r| r.genus >= 3 && (r.ns_lower_bound < 2 || r.quadratic_bound < r.genus + 1))
        .map(|r| r.level)
        .collect();
    let summary = ScanSummary {
        from,
        to,
        rows: rows.len(),
        violations,
    };
    Ok(ScanReport { rows, summary })
}

pub fn emit_scan(report: &ScanReport, format: Format) -> String {
    match format {
        Format::Json => {
            let rows: Vec<Value> = report
                .rows
                .iter()
                .map(|r| {
                    json!({
                        "level": r.level,
                        "genus": r.genus,
                        "factors": r.factors.iter().map(|&(d, m, cm)| json!({
                            "degree": d,
                            "multiplicity": m,
                            "class": if cm { "cm" } else { "real" },
                        })).collect::<Vec<_>>(),
                        "ns_lower_bound": r.ns_lower_bound,
                        "classical_bound": r.classical_bound,
                        "quadratic_bound": r.quadratic_bound,
                        "rank": rank_to_json(&r.rank),
                        "classical_verdict": r.classical_verdict.as_str(),
                        "quadratic_verdict": r.quadratic_verdict.as_str(),
                    })
                })
                .collect();
            let s = &report.summary;
            let doc = json!({
                "schema_version": SCHEMA_VERSION,
                "rows": rows,
                "summary": {
                    "from": s.from,
                    "to": s.to,
                    "rows": s.rows,
                    "violations": s.violations,
                },
            });
            let mut out = serde_json::to_string_pretty(&doc).expect("serializable");
            out.push('\n');
            out
        }
        Format::Text => {
            let mut out = String::new();
            let _ = writeln!(
                out,
                "{:>6} {:>5} {:>4} {:>4} {:>4}  {:<10} {:<9} {:<9} factors",
                "level", "genus", "rNS", "B1", "B2", "rank", "classical", "quadratic"
            );
            for r in &report.rows {
                let _ = writeln!(
                    out,
                    "{:>6} {:>5} {:>4} {:>4} {:>4}  {:<10} {:<9} {:<9} {}",
                    r.level,
                    r.genus,
                    r.ns_lower_bound,
                    r.classical_bound,
                    r.quadratic_bound,
                    r.rank.to_string(),
                    r.classical_verdict,
                    r.quadratic_verdict,
                    r.factor_summary()
                );
            }
            let s = &report.summary;
            let _ = writeln!(
                out,
                "\nscanned levels {}..{}: {} with genus >= 2",
                s.from, s.to, s.rows
            );
            if s.violations.is_empty() {
                let _ = writeln!(out, "rNS >= 2 for every level of genus >= 3");
            } else {
                let list: Vec<String> = s.violations.iter().map(u64::to_string).collect();
                let _ = writeln!(out, "FATAL: rNS < 2 at genus >= 3 for levels {}", list.join(", "));
            }
            out
        }
    }
}
