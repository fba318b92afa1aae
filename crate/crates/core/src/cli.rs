//! Command-line front end.
//!
//! Exit codes: 0 success (including in-band per-surface inapplicability),
//! 1 invalid weights or flags, 2 internal consistency failure.

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::certify::{certify, CertReport, KeVerdict, TigerVerdict};
use crate::error::Error;
use crate::search::{self, Format};
use crate::wps::{enumerate_monomials, normalize_weights, singular_points, Monomial, Surface};

#[derive(Parser, Debug)]
#[command(name = "ldp-cert", version, about = "Certify KE and tiger-freeness criteria for log del Pezzo hypersurfaces in weighted P^3")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Analyze a single surface X_d in P(q0,q1,q2,q3).
    Analyze(AnalyzeArgs),
    /// Sweep weight systems and certify each candidate.
    Search(SearchArgs),
    /// List the monomials of a given weighted degree.
    Monomials(MonomialArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Tiger,
    Ke,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TableFormat {
    Csv,
    Json,
}

#[derive(clap::Args, Debug)]
pub struct AnalyzeArgs {
    /// Four positive weights, any order.
    #[arg(num_args = 4, required = true, value_name = "Q")]
    pub weights: Vec<u64>,
    /// Degree; anything but q0+q1+q2+q3-1 gives an inspection-only report.
    #[arg(long)]
    pub degree: Option<u64>,
    /// Exponent vector a0,a1,a2,a3 of a monomial with zero coefficient.
    #[arg(long = "zero-coeff", value_name = "A0,A1,A2,A3")]
    pub zero_coeff: Vec<String>,
    /// POINT,CURVE: the tangent cone of (x_CURVE=0) at P_POINT is a double line.
    #[arg(long = "coincident-tangents", value_name = "POINT,CURVE")]
    pub coincident_tangents: Vec<String>,
    #[arg(long, value_enum, default_value_t = Mode::Both)]
    pub mode: Mode,
    #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
    pub format: ReportFormat,
    /// Print every derivation step.
    #[arg(long)]
    pub trace: bool,
}

#[derive(clap::Args, Debug)]
pub struct SearchArgs {
    #[arg(long = "max-weight")]
    pub max_weight: u64,
    /// Worker threads; defaults to available parallelism.
    #[arg(long)]
    pub jobs: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
    pub format: TableFormat,
    /// Keep only weight systems passing the quasi-smoothness conditions.
    #[arg(long = "quasismooth-only")]
    pub quasismooth_only: bool,
}

#[derive(clap::Args, Debug)]
pub struct MonomialArgs {
    #[arg(num_args = 4, required = true, value_name = "Q")]
    pub weights: Vec<u64>,
    #[arg(long)]
    pub degree: u64,
    /// Allowed variables, e.g. 1,2,3.
    #[arg(long)]
    pub support: Option<String>,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{rendered}");
                    0
                }
                _ => {
                    let _ = write!(err, "{rendered}");
                    1
                }
            };
        }
    };
    let result = match cli.command {
        Command::Analyze(a) => cmd_analyze(&a, out, err),
        Command::Search(a) => cmd_search(&a, out, err),
        Command::Monomials(a) => cmd_monomials(&a, out),
    };
    match result {
        Ok(code) => code,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            1
        }
    }
}

fn four(v: &[u64]) -> [u64; 4] {
    [v[0], v[1], v[2], v[3]]
}

fn parse_pair(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("expected POINT,CURVE, got {s:?}"))?;
    let p = a.trim().parse().map_err(|_| format!("bad index in {s:?}"))?;
    let c = b.trim().parse().map_err(|_| format!("bad index in {s:?}"))?;
    Ok((p, c))
}

#[derive(Serialize)]
struct ReportDocument<'a> {
    schema_version: u32,
    input_weights: [u64; 4],
    reordered: bool,
    mode: &'static str,
    report: &'a CertReport,
    trace_lines: Vec<String>,
}

#[derive(Serialize)]
struct InspectionDocument {
    schema_version: u32,
    input_weights: [u64; 4],
    weights: [u64; 4],
    degree: u64,
    anticanonical_degree: u64,
    monomials: Vec<String>,
    singular_points: Result<Vec<String>, String>,
}

fn mode_name(mode: Mode) -> &'static str {
    match mode {
        Mode::Tiger => "tiger",
        Mode::Ke => "ke",
        Mode::Both => "both",
    }
}

pub fn cmd_analyze(args: &AnalyzeArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, String> {
    let raw = four(&args.weights);
    let ws = normalize_weights(raw, args.degree).map_err(|e| e.to_string())?;
    let reordered = ws.q() != raw;

    if !ws.is_anticanonical() {
        let sp = singular_points(&Surface::generic(ws))
            .map(|pts| pts.iter().map(|p| p.to_string()).collect::<Vec<_>>())
            .map_err(|e| e.to_string());
        let doc = InspectionDocument {
            schema_version: search::SCHEMA_VERSION,
            input_weights: raw,
            weights: ws.q(),
            degree: ws.d(),
            anticanonical_degree: ws.anticanonical_degree(),
            monomials: enumerate_monomials(&ws, ws.d(), None).iter().map(|m| m.to_string()).collect(),
            singular_points: sp,
        };
        match args.format {
            ReportFormat::Json => {
                let _ = writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("serializable"));
            }
            ReportFormat::Text => {
                let _ = writeln!(out, "{ws} (inspection only; certification needs degree {})", doc.anticanonical_degree);
                if reordered {
                    let _ = writeln!(out, "note: weights sorted from input {raw:?}");
                }
                let _ = writeln!(out, "monomials ({}): {}", doc.monomials.len(), doc.monomials.join(", "));
                match &doc.singular_points {
                    Ok(p) => {
                        let _ = writeln!(out, "singular points: {}", list_or_none(p));
                    }
                    Err(e) => {
                        let _ = writeln!(out, "singular points: {e}");
                    }
                }
            }
        }
        return Ok(0);
    }

    let zeros = args
        .zero_coeff
        .iter()
        .map(|s| s.parse::<Monomial>())
        .collect::<Result<Vec<_>, _>>()?;
    let mut surface = Surface::with_zeros(ws, zeros).map_err(|e| e.to_string())?;
    for t in &args.coincident_tangents {
        let (p, c) = parse_pair(t)?;
        surface = surface.with_coincident_tangents(p, c).map_err(|e| e.to_string())?;
    }

    let report = match certify(&surface) {
        Ok(r) => r,
        Err(e @ (Error::UnsupportedDegeneration(_) | Error::BadIndex(_))) => return Err(e.to_string()),
        Err(e) => {
            match args.format {
                ReportFormat::Json => {
                    let doc = serde_json::json!({
                        "schema_version": search::SCHEMA_VERSION,
                        "input_weights": raw,
                        "weights": ws.q(),
                        "degree": ws.d(),
                        "inapplicable": e.to_string(),
                    });
                    let _ = writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("serializable"));
                }
                ReportFormat::Text => {
                    let _ = writeln!(out, "{ws}");
                    let _ = writeln!(out, "inapplicable: {e}");
                }
            }
            return Ok(0);
        }
    };
    if let Err(msg) = report.check_invariants() {
        let _ = writeln!(err, "internal consistency failure: {msg}");
        return Ok(2);
    }

    match args.format {
        ReportFormat::Json => {
            let doc = ReportDocument {
                schema_version: search::SCHEMA_VERSION,
                input_weights: raw,
                reordered,
                mode: mode_name(args.mode),
                report: &report,
                trace_lines: report.trace.iter().map(|t| t.to_string()).collect(),
            };
            let _ = writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("serializable"));
        }
        ReportFormat::Text => {
            let text = render_text(&report, &surface, args.mode, args.trace, reordered.then_some(raw));
            let _ = write!(out, "{text}");
        }
    }
    Ok(0)
}

fn list_or_none(items: &[String]) -> String {
    if items.is_empty() {
        "none".to_string()
    } else {
        items.join(", ")
    }
}

/// Plain-text rendering of a report.
pub fn render_text(
    report: &CertReport,
    surface: &Surface,
    mode: Mode,
    trace: bool,
    input_order: Option<[u64; 4]>,
) -> String {
    let mut s = String::new();
    let mut line = |t: String| {
        s.push_str(&t);
        s.push('\n');
    };
    line(surface.ws.to_string());
    if let Some(raw) = input_order {
        line(format!("note: weights sorted from input {raw:?}"));
    }
    line("assumptions:".into());
    for a in &report.verdict.assumptions {
        line(format!("  - {a}"));
    }
    let qs = &report.quasismooth;
    let yn = |b: bool| if b { "Y" } else { "N" };
    line(format!(
        "quasi-smooth: (I) {} (II) {} (III) {}",
        yn(qs.passes_i()),
        yn(qs.passes_ii()),
        yn(qs.passes_iii())
    ));
    let pts: Vec<String> = report.singular_points.iter().map(|p| p.to_string()).collect();
    line(format!("singular points: {}", list_or_none(&pts)));

    line("smooth points:".into());
    let sm = &report.smooth;
    for st in &sm.strategies {
        line(format!(
            "  separating pencil on x{}!=0 (projection from P{}, l={}): {}",
            st.avoid, st.projection, st.l, st.bound
        ));
    }
    for b in &sm.curves {
        let used = sm.boundary.iter().any(|u| u.v == b.v);
        let status = match (&b.reason, used) {
            (None, true) => "used".to_string(),
            (None, false) => "available".to_string(),
            (Some(r), _) => format!("unavailable: {r}"),
        };
        line(format!("  boundary curve (x{}=0): {} [{status}]", b.v, b.value));
    }
    let left: Vec<String> = sm
        .leftover
        .iter()
        .map(|l| format!("{} ({} singular point(s))", l.label, l.points))
        .collect();
    line(format!("  leftover strata: {}", list_or_none(&left)));
    match sm.overall_bound {
        Some(b) => line(format!("  overall bound: {b}")),
        None => line("  overall bound: no cover".into()),
    }

    line("singular bounds:".into());
    for sb in &report.singular {
        let mut parts = vec![match sb.basic {
            Some(b) => format!("pencil estimate {b}"),
            None => "pencil estimate inf".to_string(),
        }];
        if let Some(r) = &sb.refined {
            parts.push(format!(
                "split along (x{}=0): m={}, B'={}, bound {}",
                r.v, r.m, r.bprime, r.value
            ));
        }
        if let Some(p) = &sb.lct_path {
            parts.push(format!(
                "lct along (x{}=0) = {} ({:?}), {}",
                p.v,
                p.lct,
                p.method,
                if p.passed { "KE pass" } else { "KE fail" }
            ));
        }
        line(format!("  {}: {}", sb.point.label(), parts.join("; ")));
    }
    line(format!(
        "tiger witness: {}",
        report
            .tiger_witness
            .as_ref()
            .map_or("none".to_string(), |w| w.describe())
    ));
    line("verdict:".into());
    if mode != Mode::Ke {
        let t = match &report.verdict.tiger_free {
            TigerVerdict::Certified => "no-tiger (certified)".to_string(),
            TigerVerdict::TigerWitness(w) => format!("tiger {w}"),
            TigerVerdict::Unknown => "unknown".to_string(),
        };
        line(format!("  tiger: {t}"));
    }
    if mode != Mode::Tiger {
        let k = match report.verdict.ke {
            KeVerdict::Certified => "KE certified",
            KeVerdict::Inconclusive => "inconclusive",
        };
        line(format!("  ke: {k}"));
    }
    if !report.verdict.borderline.is_empty() {
        line("borderline:".into());
        for b in &report.verdict.borderline {
            line(format!("  - {b}"));
        }
    }
    if !report.verdict.reasons.is_empty() {
        line("reasons:".into());
        for r in &report.verdict.reasons {
            line(format!("  - {r}"));
        }
    }
    if trace {
        line("trace:".into());
        for t in &report.trace {
            line(format!("  {t}"));
        }
    }
    s
}

pub fn cmd_search(args: &SearchArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, String> {
    if args.max_weight == 0 {
        return Err("--max-weight must be at least 1".into());
    }
    if args.jobs == Some(0) {
        return Err("--jobs must be at least 1".into());
    }
    let start = std::time::Instant::now();
    let rows = search::run_batch(args.max_weight, args.quasismooth_only, args.jobs);
    let format = match args.format {
        TableFormat::Csv => Format::Csv,
        TableFormat::Json => Format::Json,
    };
    match &args.out {
        Some(path) => search::persist(&rows, path, format).map_err(|e| e.to_string())?,
        None => {
            let _ = write!(out, "{}", search::render(&rows, format));
        }
    }
    let inapplicable = rows.iter().filter(|r| r.verdict_ke == "n/a").count();
    let _ = writeln!(
        err,
        "{} candidates with verdicts ({} inapplicable) in {:.2?}",
        rows.len(),
        inapplicable,
        start.elapsed()
    );
    Ok(0)
}

pub fn cmd_monomials(args: &MonomialArgs, out: &mut dyn Write) -> Result<i32, String> {
    let ws = normalize_weights(four(&args.weights), None).map_err(|e| e.to_string())?;
    let support = match &args.support {
        None => None,
        Some(s) => {
            let idx = s
                .split(',')
                .map(|p| match p.trim().parse::<usize>() {
                    Ok(i) if i <= 3 => Ok(i),
                    _ => Err(format!("bad support index {p:?}")),
                })
                .collect::<Result<Vec<_>, _>>()?;
            Some(idx)
        }
    };
    let monos = enumerate_monomials(&ws, args.degree, support.as_deref());
    let rendered: Vec<String> = monos.iter().map(|m| m.to_string()).collect();
    let _ = writeln!(out, "{}", if rendered.is_empty() { "(none)".to_string() } else { rendered.join(", ") });
    Ok(0)
}
