//! Sweeps weight systems, certifies each candidate, and persists the rows.
//!
//! Output is labeled "candidates with verdicts": it makes no completeness
//! claim about any classification.

use std::fs;
use std::path::Path;
use std::time::{Duration, Instant};

use num::integer::gcd;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::certify::{certify, CertReport, TigerVerdict};
use crate::error::{Error, Result};
use crate::quasismooth::check_quasismooth;
use crate::wps::{normalize_weights, Surface, WeightSystem};

pub const SCHEMA_VERSION: u32 = 1;
pub const CSV_HEADER: [&str; 11] = [
    "q0",
    "q1",
    "q2",
    "q3",
    "d",
    "quasismooth",
    "verdict_tiger",
    "verdict_ke",
    "tiger_witness",
    "borderline",
    "notes",
];

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SearchResult {
    pub weights: [u64; 4],
    pub d: u64,
    /// `Y`/`N` for the three quasi-smoothness conditions.
    pub quasismooth: String,
    pub verdict_tiger: String,
    pub verdict_ke: String,
    pub tiger_witness: String,
    pub borderline: Vec<String>,
    pub notes: String,
    #[serde(skip)]
    pub elapsed: Duration,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<CertReport>,
}

// Timing is not part of a row's identity.
impl PartialEq for SearchResult {
    fn eq(&self, other: &Self) -> bool {
        self.weights == other.weights
            && self.d == other.d
            && self.quasismooth == other.quasismooth
            && self.verdict_tiger == other.verdict_tiger
            && self.verdict_ke == other.verdict_ke
            && self.tiger_witness == other.tiger_witness
            && self.borderline == other.borderline
            && self.notes == other.notes
            && self.report == other.report
    }
}

impl SearchResult {
    pub fn passes_quasismooth(&self) -> bool {
        self.quasismooth == "YYY"
    }

    /// The row without its embedded report.
    pub fn summary(&self) -> SearchResult {
        SearchResult {
            report: None,
            ..self.clone()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

/// Sorted quadruples with `q3 <= max_weight` and coprime triples, each with
/// the anticanonical degree, in lexicographic order.
pub fn enumerate_weight_systems(max_weight: u64) -> impl Iterator<Item = WeightSystem> {
    let n = max_weight;
    (1..=n).flat_map(move |a| {
        (a..=n).flat_map(move |b| {
            (b..=n).flat_map(move |c| {
                (c..=n).filter_map(move |e| {
                    let triples = [(a, b, c), (a, b, e), (a, c, e), (b, c, e)];
                    if triples.iter().any(|&(x, y, z)| gcd(gcd(x, y), z) > 1) {
                        return None;
                    }
                    normalize_weights([a, b, c, e], None).ok()
                })
            })
        })
    })
}

/// Certifies a single generic surface into a row.
pub fn analyze_row(ws: WeightSystem) -> SearchResult {
    let start = Instant::now();
    let surface = Surface::generic(ws);
    let qs = check_quasismooth(&surface);
    let mut row = SearchResult {
        weights: ws.q(),
        d: ws.d(),
        quasismooth: qs.flags(),
        verdict_tiger: "n/a".into(),
        verdict_ke: "n/a".into(),
        tiger_witness: String::new(),
        borderline: Vec::new(),
        notes: String::new(),
        elapsed: Duration::ZERO,
        report: None,
    };
    match certify(&surface) {
        Ok(report) => {
            row.verdict_tiger = report.verdict.tiger_free.tag().into();
            row.verdict_ke = report.verdict.ke.tag().into();
            if let TigerVerdict::TigerWitness(w) = &report.verdict.tiger_free {
                row.tiger_witness = w.clone();
            }
            row.borderline = report.verdict.borderline.clone();
            row.notes = report.verdict.reasons.join("; ");
            row.report = Some(report);
        }
        Err(e) => row.notes = format!("inapplicable: {e}"),
    }
    row.elapsed = start.elapsed();
    row
}

/// Runs every weight system up to `max_weight`. Output order is canonical
/// regardless of `jobs`.
pub fn run_batch(max_weight: u64, quasismooth_only: bool, jobs: Option<usize>) -> Vec<SearchResult> {
    let systems: Vec<WeightSystem> = enumerate_weight_systems(max_weight).collect();
    let work = || -> Vec<SearchResult> {
        systems
            .par_iter()
            .map(|ws| analyze_row(*ws))
            .filter(|r| !quasismooth_only || r.passes_quasismooth())
            .collect()
    };
    let mut rows = match jobs {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build() {
            Ok(pool) => pool.install(work),
            Err(_) => work(),
        },
        None => work(),
    };
    rows.sort_by_key(|a| (a.weights, a.d));
    rows
}

#[derive(Serialize, Deserialize)]
struct JsonRow {
    schema_version: u32,
    #[serde(flatten)]
    row: SearchResult,
}

pub fn to_json(results: &[SearchResult]) -> String {
    let rows: Vec<JsonRow> = results
        .iter()
        .map(|r| JsonRow {
            schema_version: SCHEMA_VERSION,
            row: r.clone(),
        })
        .collect();
    let mut s = serde_json::to_string_pretty(&rows).expect("rows serialize");
    s.push('\n');
    s
}

pub fn to_csv(results: &[SearchResult]) -> String {
    let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
    w.write_record(CSV_HEADER).expect("in-memory write");
    for r in results {
        let [a, b, c, e] = r.weights;
        w.write_record([
            a.to_string(),
            b.to_string(),
            c.to_string(),
            e.to_string(),
            r.d.to_string(),
            r.quasismooth.clone(),
            r.verdict_tiger.clone(),
            r.verdict_ke.clone(),
            r.tiger_witness.clone(),
            r.borderline.join("; "),
            r.notes.clone(),
        ])
        .expect("in-memory write");
    }
    let body = String::from_utf8(w.into_inner().expect("flush")).expect("utf8");
    format!("# schema_version={SCHEMA_VERSION}; candidates with verdicts\n{body}")
}

pub fn render(results: &[SearchResult], format: Format) -> String {
    match format {
        Format::Csv => to_csv(results),
        Format::Json => to_json(results),
    }
}

pub fn persist(results: &[SearchResult], path: &Path, format: Format) -> Result<()> {
    fs::write(path, render(results, format)).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Loads a file written by [`persist`], detecting the format from content.
pub fn load(path: &Path) -> Result<Vec<SearchResult>> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    if text.trim_start().starts_with('[') {
        from_json(&text, path)
    } else {
        from_csv(&text, path)
    }
}

fn format_err(path: &Path, message: impl ToString) -> Error {
    Error::Format {
        path: path.to_path_buf(),
        message: message.to_string(),
    }
}

fn from_json(text: &str, path: &Path) -> Result<Vec<SearchResult>> {
    let raw: Vec<serde_json::Value> = serde_json::from_str(text).map_err(|e| format_err(path, e))?;
    raw.into_iter()
        .map(|v| {
            let version = v.get("schema_version").cloned().unwrap_or(serde_json::Value::Null);
            if version.as_u64() != Some(SCHEMA_VERSION as u64) {
                return Err(Error::SchemaVersion {
                    path: path.to_path_buf(),
                    found: version.to_string(),
                    expected: SCHEMA_VERSION,
                });
            }
            let row: JsonRow = serde_json::from_value(v).map_err(|e| format_err(path, e))?;
            Ok(row.row)
        })
        .collect()
}

fn from_csv(text: &str, path: &Path) -> Result<Vec<SearchResult>> {
    let (first, body) = text.split_once('\n').unwrap_or((text, ""));
    let found = first
        .strip_prefix("# schema_version=")
        .map(|rest| rest.split(';').next().unwrap_or("").trim().to_string());
    match found.as_deref() {
        Some(v) if v == SCHEMA_VERSION.to_string() => {}
        other => {
            return Err(Error::SchemaVersion {
                path: path.to_path_buf(),
                found: other.unwrap_or("missing").to_string(),
                expected: SCHEMA_VERSION,
            })
        }
    }
    let mut rdr = csv::ReaderBuilder::new().from_reader(body.as_bytes());
    let header = rdr.headers().map_err(|e| format_err(path, e))?.clone();
    if header.iter().ne(CSV_HEADER.iter().copied()) {
        return Err(format_err(path, format!("unexpected CSV columns {header:?}")));
    }
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| format_err(path, e))?;
        let num = |i: usize| -> Result<u64> {
            rec[i]
                .parse()
                .map_err(|_| format_err(path, format!("bad integer {:?} in column {}", &rec[i], CSV_HEADER[i])))
        };
        out.push(SearchResult {
            weights: [num(0)?, num(1)?, num(2)?, num(3)?],
            d: num(4)?,
            quasismooth: rec[5].to_string(),
            verdict_tiger: rec[6].to_string(),
            verdict_ke: rec[7].to_string(),
            tiger_witness: rec[8].to_string(),
            borderline: if rec[9].is_empty() {
                Vec::new()
            } else {
                rec[9].split("; ").map(str::to_string).collect()
            },
            notes: rec[10].to_string(),
            elapsed: Duration::ZERO,
            report: None,
        });
    }
    Ok(out)
}
