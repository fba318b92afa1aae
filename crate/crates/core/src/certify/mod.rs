//! Verdict assembly.
//!
//! `(X, D)` is klt for every effective `D ≡ -K_X` (no tiger) when the
//! smooth-point bound is `< 1` and every singular point has a chart bound
//! `<= 1`. X is Kähler-Einstein when `(X, (2+e)/3 D)` is klt for some `e > 0`,
//! which needs the same bounds strictly below `3/2`, or an lct path.

pub mod newton;
pub mod singular;
pub mod smooth;

use std::fmt;

use num::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{Rat, Q};
use crate::quasismooth::{check_quasismooth, QuasiSmoothReport};
use crate::wps::{singular_points, SingularPoint, Surface};

pub use newton::{diagonal_depth, newton_lct, newton_lct_points, shear_double_line};
pub use singular::{
    boundary_lct, lct_path, pencil_estimate, refined_split_bound, tiger_witness, LctMethod, LctMode,
    LctPath, SplitBound, TigerWitness,
};
pub use smooth::{
    boundary_bound, separating_degree, smooth_point_certificate, BoundaryBound, Leftover,
    SeparatingStrategy, SmoothCertificate,
};

/// One derivation step: which rule, where, with what inputs, and the value.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceLine {
    pub rule: String,
    pub at: String,
    pub detail: String,
    pub value: Option<Q>,
}

impl TraceLine {
    fn new(rule: &str, at: impl Into<String>, detail: impl Into<String>, value: Option<Rat>) -> Self {
        TraceLine {
            rule: rule.to_string(),
            at: at.into(),
            detail: detail.into(),
            value: value.map(Q),
        }
    }
}

impl fmt::Display for TraceLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at {}", self.rule, self.at)?;
        if !self.detail.is_empty() {
            write!(f, " with {}", self.detail)?;
        }
        match self.value {
            Some(v) => write!(f, ": {v}"),
            None => write!(f, ": inf"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SingularBound {
    pub point: SingularPoint,
    /// Pencil estimate; `None` when no chart pair is admissible.
    pub basic: Option<Q>,
    pub basic_pair: Option<[usize; 2]>,
    /// Least split bound over usable boundary curves.
    pub refined: Option<SplitBound>,
    /// Kähler-Einstein lct path: the first passing curve, else the best lct.
    pub lct_path: Option<LctPath>,
    pub tiger_lct_passed: bool,
    pub derivation: Vec<String>,
}

impl SingularBound {
    /// `min(basic, refined)`.
    pub fn best(&self) -> Option<Q> {
        match (self.basic, self.refined.as_ref().map(|r| r.value)) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TigerVerdict {
    Certified,
    TigerWitness(String),
    Unknown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum KeVerdict {
    Certified,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub tiger_free: TigerVerdict,
    pub ke: KeVerdict,
    pub assumptions: Vec<String>,
    /// Bounds exactly equal to a threshold.
    pub borderline: Vec<String>,
    pub reasons: Vec<String>,
}

impl TigerVerdict {
    pub fn tag(&self) -> &'static str {
        match self {
            TigerVerdict::Certified => "no-tiger",
            TigerVerdict::TigerWitness(_) => "tiger",
            TigerVerdict::Unknown => "unknown",
        }
    }
}

impl KeVerdict {
    pub fn tag(&self) -> &'static str {
        match self {
            KeVerdict::Certified => "ke-certified",
            KeVerdict::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertReport {
    pub weights: [u64; 4],
    pub degree: u64,
    pub quasismooth: QuasiSmoothReport,
    pub singular_points: Vec<SingularPoint>,
    pub smooth: SmoothCertificate,
    pub singular: Vec<SingularBound>,
    pub tiger_witness: Option<TigerWitness>,
    pub verdict: Verdict,
    pub trace: Vec<TraceLine>,
}

fn three_halves() -> Rat {
    Rat::new(3, 2)
}

fn bound_singular_point(surface: &Surface, point: &SingularPoint, trace: &mut Vec<TraceLine>) -> SingularBound {
    let at = match point.coordinate() {
        Some(i) => format!("P{i}"),
        None => point.label(),
    };
    let mut derivation = Vec::new();
    let basic = pencil_estimate(surface, point);
    let line = match basic {
        Some((v, [j, k])) => TraceLine::new("pencil estimate", &at, format!("pair ({j},{k})"), Some(v)),
        None => TraceLine::new("pencil estimate", &at, "no admissible pair", None),
    };
    derivation.push(line.to_string());
    trace.push(line);

    let mut refined: Option<SplitBound> = None;
    let mut ke_path: Option<LctPath> = None;
    let mut tiger_lct_passed = false;
    if point.coordinate().is_some() {
        for v in (0..4).filter(|&v| point.vanishes(v)) {
            let Ok(split) = refined_split_bound(surface, point, v) else {
                continue;
            };
            let line = TraceLine::new(
                "split bound",
                &at,
                format!("(x{v}=0), m={}, B'={}", split.m, split.bprime),
                Some(split.value.0),
            );
            derivation.push(line.to_string());
            trace.push(line);
            if refined.as_ref().is_none_or(|r| split.value < r.value) {
                refined = Some(split);
            }
            match lct_path(surface, point, v, LctMode::Ke) {
                Ok(path) => {
                    let line = TraceLine::new(
                        "lct path",
                        &at,
                        format!(
                            "(x{v}=0), {:?}, B'={}, {}",
                            path.method,
                            path.bprime,
                            if path.passed { "pass" } else { "fail" }
                        ),
                        Some(path.lct.0),
                    );
                    derivation.push(line.to_string());
                    trace.push(line);
                    let better = match &ke_path {
                        None => true,
                        Some(old) => !old.passed && (path.passed || path.lct > old.lct),
                    };
                    if better {
                        ke_path = Some(path);
                    }
                }
                Err(e) => {
                    derivation.push(format!("lct path at {at} with (x{v}=0): {e}"));
                }
            }
            if let Ok(path) = lct_path(surface, point, v, LctMode::Tiger) {
                tiger_lct_passed |= path.passed;
            }
        }
    }
    SingularBound {
        point: point.clone(),
        basic: basic.map(|(v, _)| Q(v)),
        basic_pair: basic.map(|(_, p)| p),
        refined,
        lct_path: ke_path,
        tiger_lct_passed,
        derivation,
    }
}

fn assumptions(surface: &Surface, points: &[SingularPoint]) -> Vec<String> {
    let mut out = vec!["coefficients generic unless listed".to_string()];
    for m in surface.zeroed() {
        out.push(format!("coefficient of {m} is zero"));
    }
    for t in &surface.tangents {
        out.push(format!("tangent cone of (x{}=0) at P{} is a double line", t.curve, t.point));
    }
    if points.iter().any(|p| p.coordinate().is_none()) {
        out.push("singular-line point counts assume distinct roots (generic)".to_string());
    }
    out
}

/// Every coincident-tangent condition must sit at a singular coordinate point
/// whose boundary germ admits the double-line shear.
pub fn validate_degenerations(surface: &Surface, points: &[SingularPoint]) -> Result<()> {
    for t in &surface.tangents {
        let point = points
            .iter()
            .find(|p| p.coordinate() == Some(t.point))
            .ok_or_else(|| {
                Error::UnsupportedDegeneration(format!("P{} is not a singular point of X", t.point))
            })?;
        if t.curve == t.point {
            return Err(Error::UnsupportedDegeneration(format!(
                "x{} does not vanish at P{}",
                t.curve, t.point
            )));
        }
        let vars: Vec<usize> = (0..4).filter(|&k| k != t.curve).collect();
        let chart = crate::wps::chart_localize(&surface.support_in(Some(&vars)), t.point, point, &[t.curve])?;
        shear_double_line(&chart)?;
    }
    Ok(())
}

/// Runs the full pipeline on an anticanonical quasi-smooth surface.
pub fn certify(surface: &Surface) -> Result<CertReport> {
    let ws = &surface.ws;
    if !ws.is_anticanonical() {
        return Err(Error::NotAnticanonical {
            degree: ws.d(),
            expected: ws.anticanonical_degree(),
        });
    }
    let quasismooth = check_quasismooth(surface);
    if !quasismooth.passes() {
        return Err(Error::NotQuasiSmooth(quasismooth.failures().join("; ")));
    }
    let points = singular_points(surface)?;
    validate_degenerations(surface, &points)?;
    let mut trace = Vec::new();

    let smooth = smooth_point_certificate(surface);
    for s in &smooth.strategies {
        trace.push(TraceLine::new(
            "separating pencil",
            format!("x{}!=0", s.avoid),
            format!("projection from P{}, l={}", s.projection, s.l),
            Some(s.bound.0),
        ));
    }
    for b in &smooth.curves {
        let detail = match &b.reason {
            None => "available".to_string(),
            Some(r) => format!("unavailable: {r}"),
        };
        trace.push(TraceLine::new("boundary split", format!("(x{}=0)", b.v), detail, Some(b.value.0)));
    }
    let leftover: Vec<&str> = smooth.leftover.iter().map(|l| l.label.as_str()).collect();
    trace.push(TraceLine::new(
        "smooth cover",
        "smooth locus",
        if smooth.leftover_check {
            format!("leftover singular strata [{}]", leftover.join(", "))
        } else {
            "no cover found".to_string()
        },
        smooth.overall_bound.map(|q| q.0),
    ));

    let singular: Vec<SingularBound> = points
        .iter()
        .map(|p| bound_singular_point(surface, p, &mut trace))
        .collect();

    let witness = tiger_witness(surface, &points);
    if let Some(w) = &witness {
        trace.push(TraceLine::new(
            "tiger witness",
            format!("P{}", w.point),
            format!("{} has multiplicity {}", w.describe(), w.multiplicity),
            None,
        ));
    }

    let one = Rat::one();
    let mut reasons = Vec::new();
    let mut borderline = Vec::new();
    let smooth_bound = smooth.overall_bound.map(|q| q.0);
    match smooth_bound {
        None => reasons.push("no cover of the smooth locus".to_string()),
        Some(b) if b == one => borderline.push(format!("smooth-point bound = {} (no-tiger needs < 1)", Q(b))),
        Some(b) if b == three_halves() => {
            borderline.push(format!("smooth-point bound = {} (KE needs < 3/2)", Q(b)))
        }
        _ => {}
    }
    for s in &singular {
        let at = s.point.label();
        for (name, v) in [("pencil estimate", s.basic), ("split bound", s.refined.as_ref().map(|r| r.value))] {
            if let Some(v) = v {
                if v.0 == one || v.0 == three_halves() {
                    borderline.push(format!("{name} at {at} = {v}"));
                }
            }
        }
        if let Some(p) = &s.lct_path {
            let qv = surface.ws.weight(p.v) as i64;
            if p.lct.0 == Rat::new(2, 3 * qv) {
                borderline.push(format!("lct at {at} along (x{}=0) = {} (KE needs > it)", p.v, p.lct));
            }
        }
    }

    let tiger_smooth = smooth_bound.is_some_and(|b| b < one);
    let tiger_points = singular
        .iter()
        .all(|s| s.best().is_some_and(|b| b.0 <= one) || s.tiger_lct_passed);
    let tiger_free = match &witness {
        Some(w) => TigerVerdict::TigerWitness(w.describe()),
        None if tiger_smooth && tiger_points => TigerVerdict::Certified,
        None => TigerVerdict::Unknown,
    };

    let ke_smooth = smooth_bound.is_some_and(|b| b < three_halves());
    if let (Some(b), false) = (smooth_bound, ke_smooth) {
        reasons.push(format!("smooth-point bound {} is not below 3/2", Q(b)));
    }
    let mut ke_points = true;
    for s in &singular {
        let by_bound = s.best().is_some_and(|b| b.0 < three_halves());
        let by_lct = s.lct_path.as_ref().is_some_and(|p| p.passed);
        if !(by_bound || by_lct) {
            ke_points = false;
            let mut why = format!("{}: chart bound ", s.point.label());
            match s.best() {
                Some(b) => why.push_str(&b.to_string()),
                None => why.push_str("inf"),
            }
            match &s.lct_path {
                Some(p) => why.push_str(&format!(", lct {} along (x{}=0) fails", p.lct, p.v)),
                None => why.push_str(", no lct path"),
            }
            reasons.push(why);
        }
    }
    let ke = if tiger_free == TigerVerdict::Certified || (ke_smooth && ke_points) {
        KeVerdict::Certified
    } else {
        KeVerdict::Inconclusive
    };

    let verdict = Verdict {
        tiger_free,
        ke,
        assumptions: assumptions(surface, &points),
        borderline,
        reasons,
    };
    Ok(CertReport {
        weights: ws.q(),
        degree: ws.d(),
        quasismooth,
        singular_points: points,
        smooth,
        singular,
        tiger_witness: witness,
        verdict,
        trace,
    })
}

impl CertReport {
    /// Internal consistency checks; an error here is a bug, not a verdict.
    pub fn check_invariants(&self) -> std::result::Result<(), String> {
        if self.verdict.tiger_free == TigerVerdict::Certified && self.verdict.ke != KeVerdict::Certified {
            return Err("no-tiger certified without KE".into());
        }
        for s in &self.singular {
            if let (Some(best), Some(basic)) = (s.best(), s.basic) {
                if best > basic {
                    return Err(format!("reported bound at {} exceeds the pencil estimate", s.point.label()));
                }
            }
            if let Some(r) = &s.refined {
                let qv = self.weights[r.v] as i64;
                let want = Rat::new(r.m as i64, qv).max(r.bprime.0);
                if r.value.0 != want {
                    return Err(format!("split bound at {} is not max(m/q_v, B')", s.point.label()));
                }
            }
            if let Some(p) = &s.lct_path {
                if p.lct.0 <= Rat::new(0, 1) || p.lct.0 > Rat::one() {
                    return Err(format!("lct at {} outside (0,1]", s.point.label()));
                }
            }
        }
        Ok(())
    }
}
