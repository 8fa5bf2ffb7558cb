use thiserror::Error;

/// A numeric input fell outside the domain of the model it was passed to.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum DomainError {
    #[error("{name} = {value} violates {bound}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        bound: String,
    },

    #[error("passive wedge jams: shear plane {beta_deg}° + friction {friction_deg}° reaches 90°")]
    Jamming { beta_deg: f64, friction_deg: f64 },

    #[error("empty shear-plane scan: {0}")]
    EmptyScan(String),

    #[error("tractive efficiency undefined: push work and penetration work are both zero")]
    ZeroWork,
}

impl DomainError {
    pub(crate) fn out_of_range(name: &'static str, value: f64, bound: impl Into<String>) -> Self {
        DomainError::OutOfRange {
            name,
            value,
            bound: bound.into(),
        }
    }
}

/// Checks `value` with `ok` and turns a failure into [`DomainError::OutOfRange`].
pub(crate) fn ensure(
    name: &'static str,
    value: f64,
    ok: bool,
    bound: &str,
) -> Result<(), DomainError> {
    if ok && !value.is_nan() {
        Ok(())
    } else {
        Err(DomainError::out_of_range(name, value, bound))
    }
}

/// A trial-log or configuration file could not be read.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    /// 1-based line number in the input.
    pub line: usize,
    pub message: String,
}

impl ParseError {
    pub(crate) fn new(line: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            message: message.into(),
        }
    }
}
