use thiserror::Error;

use crate::complexes::FormatError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero in F_q")]
    DivisionByZero,
    #[error("non-unit in O")]
    NonUnit,
    #[error("invalid field parameters: {0}")]
    InvalidField(String),
    #[error("matrix is singular over F_q((t))")]
    Singular,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("color {k} out of range 1..={max}")]
    ColorOutOfRange { k: usize, max: usize },
    #[error("ball would hold about {estimate:.0} vertices, above the cap of {cap}")]
    CapExceeded { estimate: f64, cap: usize },
    #[error("distance {n} exceeds ball radius {radius}")]
    BeyondRadius { n: u32, radius: u32 },
    #[error("function is supported outside the ball interior (vertex {0})")]
    SupportOutsideInterior(usize),
    #[error("canonicalization produced duplicate neighbors of vertex {0}")]
    DuplicateNeighbor(usize),
    #[error("root finder did not converge for polynomial with coefficients {0:?}")]
    RootFinding(Vec<(f64, f64)>),
    #[error("no uniform gap for d=2")]
    NoGapForDTwo,
    #[error("t-index {t} does not divide d = {d}")]
    BadTIndex { t: usize, d: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("simultaneous diagonalization failed: worst residual {worst:.3e}")]
    Diagonalization { worst: f64 },
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
