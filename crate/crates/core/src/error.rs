use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported newform spec: {0}")]
    UnsupportedSpec(String),
    #[error("parse error in {path}: line {line}: {msg}")]
    FileParse { path: PathBuf, line: usize, msg: String },
    #[error("coefficient expansion overflow: {0}")]
    Overflow(String),
    #[error("Deligne bound violated at p = {p}: |a_p| = {value}")]
    DeligneViolation { p: u64, value: f64 },
    #[error("coefficient invariant violated: {0}")]
    InvariantViolation(String),
    #[error("index {index} outside table range [1, {max}]")]
    OutOfRange { index: u64, max: u64 },
    #[error("zero ordinates not strictly ascending at line {line}")]
    NonMonotone { line: usize },
    #[error("non-positive zero ordinate {value} at line {line}")]
    NegativeOrdinate { line: usize, value: f64 },
    #[error("ordinate {value} exceeds declared coverage {coverage}")]
    AboveCoverage { value: f64, coverage: f64 },
    #[error("insufficient zero coverage: need {needed}, have {available}")]
    InsufficientCoverage { needed: f64, available: f64 },
    #[error("network error: {0}")]
    Network(String),
    #[error("not found: {0}")]
    NotFound(String),
    #[error("cache entry corrupt: {0}")]
    CacheCorrupt(String),
    #[error("pole of the weight function at s = {0}")]
    PoleAt(String),
    #[error("x = {0} is within 1e-9 of an integer")]
    IntegerX(f64),
    #[error("pair budget exceeded: {needed} term operations requested, budget {budget}")]
    PairBudgetExceeded { needed: u128, budget: u128 },
    #[error("quadrature did not converge: {0}")]
    QuadratureNonConvergence(String),
    #[error("empty zero set")]
    EmptyZeroSet,
    #[error("invalid interval [{0}, {1}]")]
    BadInterval(f64, f64),
    #[error("too few primes below {x}: {count} < 100")]
    TooFewPrimes { x: f64, count: usize },
    #[error("main term vanishes at x = {0}")]
    MainTermZero(f64),
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
