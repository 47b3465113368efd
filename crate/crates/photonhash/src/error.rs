use thiserror::Error;

/// Errors produced by the simulator and benchmark harness.
///
/// The two broad classes matter for callers: `ToleranceExceeded` flags a
/// numerical-accuracy failure (a moment-engine bug or an insufficient Fock
/// cutoff), everything else is an input/precondition problem.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dimension mismatch for {what}: expected {expected}, got {actual}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        actual: usize,
    },

    #[error("matrix is not unitary: max |U\u{2020}U - I| entry = {deviation:.3e} (tolerance {tolerance:.1e})")]
    NotUnitary { deviation: f64, tolerance: f64 },

    #[error("numerical tolerance exceeded in {what}: |{value:.6e}| > {limit:.1e}")]
    ToleranceExceeded {
        what: &'static str,
        value: f64,
        limit: f64,
    },

    #[error("Fock cutoff too small: truncated-state norm deficit {deficit:.3e} exceeds {limit:.1e}")]
    InsufficientCutoff { deficit: f64, limit: f64 },

    #[error("enumeration over 2^{n} inputs exceeds the cap of 2^{cap}; raise the cap to proceed")]
    EnumerationCapExceeded { n: usize, cap: usize },

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for failures of numerical accuracy rather than of input validity.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::ToleranceExceeded { .. } | Error::InsufficientCutoff { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
