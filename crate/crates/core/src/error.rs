use thiserror::Error;

/// Errors raised by the emulation engine.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum EmulationError {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("passivity violation: memductance {memductance} S is negative")]
    Passivity { memductance: f64 },

    #[error("numeric error at t = {t} s: {reason}")]
    Numeric { t: f64, reason: String },

    #[error("fixed-point iteration diverged at t = {t} s (sweep deltas {deltas:?} V)")]
    Divergence { t: f64, deltas: Vec<f64> },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("format error: {0}")]
    Format(String),

    #[error("identification error: {0}")]
    Identification(String),

    #[error("analysis error: {0}")]
    Analysis(String),
}

impl EmulationError {
    /// Attach the failing sample instant to numeric errors that do not carry one yet.
    pub fn at(self, t: f64) -> Self {
        match self {
            EmulationError::Numeric { t: old, reason } if old.is_nan() => EmulationError::Numeric { t, reason },
            EmulationError::Divergence { t: old, deltas } if old.is_nan() => EmulationError::Divergence { t, deltas },
            other => other,
        }
    }

    pub(crate) fn numeric(reason: impl Into<String>) -> Self {
        EmulationError::Numeric {
            t: f64::NAN,
            reason: reason.into(),
        }
    }

    /// True for errors produced while stepping (as opposed to setup errors).
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            EmulationError::Numeric { .. } | EmulationError::Divergence { .. } | EmulationError::Passivity { .. }
        )
    }
}

pub type Result<T, E = EmulationError> = std::result::Result<T, E>;
