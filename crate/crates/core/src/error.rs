use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// A drift-diffusion law with zero volatility has no continuous
    /// stationary density.
    #[error("degenerate diffusion: {0}")]
    DegenerateDiffusion(String),

    #[error("singular linear system at row {row}")]
    SingularSystem { row: usize },

    #[error("survival probability underflow at cutoff {cutoff}")]
    SurvivalUnderflow { cutoff: f64 },

    #[error("inactive firm: productivity {z} is below the cutoff {z_min}")]
    InactiveFirm { z: f64, z_min: f64 },

    #[error("no valid equilibrium: {0}")]
    InvalidEquilibrium(String),

    #[error("density integrates to {integral}, expected 1")]
    NotNormalized { integral: f64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter { name, reason: reason.into() }
    }
}

/// Rejects non-finite or out-of-range values with a named error.
pub(crate) fn ensure(cond: bool, name: &'static str, reason: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::param(name, reason))
    }
}
