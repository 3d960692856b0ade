use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Coarse classification used by front ends to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Bad input: out-of-range parameters, malformed grids, inconsistent shapes.
    Validation,
    /// A numerical guard fired (truncation, conditioning, convergence).
    Numerical,
    /// Reading or writing files.
    Io,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("pole of the gamma function at z = {0}")]
    Pole(Complex64),

    #[error("Re s = {re} lies outside the strip ({lo}, {hi})")]
    OutsideStrip { re: f64, lo: f64, hi: f64 },

    #[error("{what} did not converge (last change {change:e})")]
    NoConvergence { what: &'static str, change: f64 },

    #[error("truncation guard: {0}")]
    Truncation(String),

    #[error("ill-conditioned: {0}")]
    IllConditioned(String),

    #[error("imaginary residue {residue:e} exceeds {limit:e} in {what}")]
    ImaginaryResidue {
        what: &'static str,
        residue: f64,
        limit: f64,
    },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::InvalidArgument(_) | Error::Pole(_) | Error::OutsideStrip { .. } | Error::Parse(_) => {
                ErrorKind::Validation
            }
            Error::NoConvergence { .. }
            | Error::Truncation(_)
            | Error::IllConditioned(_)
            | Error::ImaginaryResidue { .. } => ErrorKind::Numerical,
            Error::Io(_) => ErrorKind::Io,
        }
    }
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}

pub(crate) fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidArgument(msg()))
    }
}
