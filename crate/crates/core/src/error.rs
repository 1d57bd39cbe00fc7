use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter record violates one of its invariants.
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// A denominator or determinant vanished (e.g. an undamped mode driven on resonance).
    #[error("singular parameters: {0}")]
    SingularParameters(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    /// Euler-Maruyama blew up; the time step is too large for the generator.
    #[error(
        "integration diverged in trajectory {trajectory} at step {step}; reduce time_step (currently {time_step})"
    )]
    IntegrationDiverged {
        trajectory: u64,
        step: usize,
        time_step: f64,
    },

    #[error("curve has no finite samples")]
    EmptyCurve,
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
