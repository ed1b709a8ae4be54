use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid basis: {0}")]
    InvalidBasis(&'static str),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter {
        name: &'static str,
        reason: &'static str,
    },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("state is not normalized (norm^2 = {norm_sqr})")]
    NotNormalized { norm_sqr: f64 },

    #[error("operator is not Hermitian")]
    NotHermitian,

    #[error("Fock truncation too small: at least {required_dim} levels are needed")]
    Truncation { required_dim: usize },

    #[error("phase is undefined: <E> vanishes{}", match .sample {
        Some(i) => alloc::format!(" at sample {i}"),
        None => alloc::string::String::new(),
    })]
    UndefinedPhase { sample: Option<usize> },

    #[error("state has support in both halves of the doubled space")]
    MixedSupport,

    #[error("unsupported configuration: {0}")]
    Unsupported(&'static str),

    #[error("wavepacket reaches the grid boundary at t = {time}")]
    BoundaryViolation { time: f64 },

    #[error("momentum content exceeds the grid Nyquist limit {limit}")]
    MomentumAliasing { limit: f64 },
}

impl Error {
    /// True for failures of a numerical contract (truncation, boundary,
    /// aliasing, undefined phase) as opposed to rejected input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Truncation { .. }
                | Error::UndefinedPhase { .. }
                | Error::BoundaryViolation { .. }
                | Error::MomentumAliasing { .. }
                | Error::NotNormalized { .. }
        )
    }

    pub(crate) fn param(name: &'static str, reason: &'static str) -> Self {
        Error::InvalidParameter { name, reason }
    }
}
