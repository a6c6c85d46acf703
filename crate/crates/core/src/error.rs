//! Error type shared by all modules.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A numeric argument was NaN or infinite.
    #[error("non-finite input in {0}")]
    NonFinite(&'static str),

    /// Polar angle outside `[0, pi]`.
    #[error("polar angle {0} outside [0, pi]")]
    PolarRange(f64),

    /// Rapidity beyond the supported range.
    #[error("rapidity {eta} outside |eta| <= {max}")]
    RapidityRange { eta: f64, max: f64 },

    /// Closed-form Wigner angle evaluated at a singular point.
    #[error("Wigner angle singular at (varpi={varpi}, theta={theta}, phi={phi})")]
    WignerSingular { varpi: f64, theta: f64, phi: f64 },

    /// The operation excludes directions coinciding with the standard
    /// momentum.
    #[error("direction coincides with the standard momentum (theta = {0:e})")]
    ExcludedDirection(f64),

    /// The extracted stabilizer element does not fix the standard
    /// momentum within tolerance.
    #[error("stabilizer element moves the standard momentum (residual {0:e})")]
    StabilizerResidual(f64),

    /// A momentum pair does not satisfy its declared correlation.
    #[error("momentum pair violates the {tag} correlation (residual {residual:e})")]
    BrokenCorrelation { tag: &'static str, residual: f64 },

    /// Two floored states live on different momentum pairs.
    #[error("mismatched momentum pairs")]
    MismatchedPairs,

    /// A state had the wrong form (full vs floored) for the operation.
    #[error("expected a {expected}-form two-mode state")]
    WrongForm { expected: &'static str },

    /// A full-form state was not a combination of the four helicity
    /// tensor products.
    #[error("state leaves the two-helicity span (residual {0:e})")]
    OutsideHelicitySpan(f64),

    /// Projection produced a vector of negligible norm.
    #[error("projected state has negligible norm ({0:e}); null outcome")]
    NullOutcome(f64),

    /// A vector that must not vanish did.
    #[error("degenerate input: {0}")]
    Degenerate(&'static str),

    /// Quadrature produced no usable samples.
    #[error("empty packet: {0}")]
    EmptyPacket(&'static str),

    /// Every sample of a packet was projected out.
    #[error("all samples yield null outcomes")]
    AllNull,

    /// Invalid run or file configuration.
    #[error("invalid configuration: {0}")]
    Config(String),
}
