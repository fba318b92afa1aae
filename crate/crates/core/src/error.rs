use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("weights must be positive, got {0:?}")]
    NonPositiveWeight([u64; 4]),
    #[error("weights {weights:?}: triple ({a},{b},{c}) has gcd {gcd}; any three weights must be coprime")]
    TripleGcd {
        weights: [u64; 4],
        a: u64,
        b: u64,
        c: u64,
        gcd: u64,
    },
    #[error("degree must be positive")]
    ZeroDegree,
    #[error("index {0} out of range 0..=3")]
    BadIndex(usize),
    #[error("monomial {monomial} has degree {actual}, expected {expected}")]
    WrongDegree {
        monomial: String,
        actual: u64,
        expected: u64,
    },
    #[error("degree {degree} is not anticanonical (expected {expected}); certification is unavailable")]
    NotAnticanonical { degree: u64, expected: u64 },
    #[error("non-isolated singularities: the singular line (x{a}=x{b}=0) lies on X; multiplicity conditions inapplicable")]
    NonIsolated { a: usize, b: usize },
    #[error("surface is not quasi-smooth: {0}")]
    NotQuasiSmooth(String),
    #[error("chart x{chart} does not contain the point {point}")]
    ChartMissesPoint { chart: usize, point: String },
    #[error("projection from P{0} may have an infinite fiber: no pure power x{0}^m of the surface degree")]
    InfiniteFiber(usize),
    #[error("boundary curve (x{v}=0) cannot be used at {point}: {reason}")]
    BoundaryUnusable {
        v: usize,
        point: String,
        reason: String,
    },
    #[error("unsupported coefficient degeneration: {0}")]
    UnsupportedDegeneration(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Format { path: PathBuf, message: String },
    #[error("{path}: unsupported schema version {found} (expected {expected})")]
    SchemaVersion {
        path: PathBuf,
        found: String,
        expected: u32,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
