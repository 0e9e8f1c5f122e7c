use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("degenerate wavefunction: norm is zero")]
    DegenerateWavefunction,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("wavefunction is not real-valued (max imaginary part {0:e})")]
    NotReal(f64),
    #[error("window too small: |f g| mass {mass:e} lies outside |q| <= {window}")]
    WindowTooSmall { window: f64, mass: f64 },
    #[error("parity violation: {0}")]
    Parity(String),
    #[error("quadrature did not converge: achieved {achieved:e}, requested {requested:e}")]
    Quadrature { achieved: f64, requested: f64 },
    #[error("bracket too small: maximum at bracket edge {edge}")]
    BracketTooSmall { edge: f64 },
    #[error("impossible outcome: probability {0:e}")]
    ImpossibleOutcome(f64),
    #[error("index out of range: {what} {index} (limit {limit})")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        limit: usize,
    },
    #[error("inconsistent result: {0}")]
    Inconsistent(String),
    #[error("reference data: {0}")]
    Reference(String),
}

pub type Result<T> = std::result::Result<T, Error>;
