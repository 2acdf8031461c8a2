use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("gamma function has a pole at {0}")]
    GammaPole(f64),

    #[error("{func}: argument {arg} outside domain ({reason})")]
    Domain {
        func: &'static str,
        arg: f64,
        reason: &'static str,
    },

    #[error("{func}: result overflows at argument {arg}")]
    Overflow { func: &'static str, arg: f64 },

    #[error("{func}: result underflows at argument {arg}")]
    Underflow { func: &'static str, arg: f64 },

    #[error("quadrature did not converge: {0}")]
    Quadrature(String),

    #[error("unknown potential kind `{0}`")]
    UnknownKind(String),

    #[error("invalid potential: {0}")]
    InvalidPotential(String),

    #[error("invalid grid: {0}")]
    Grid(String),

    #[error("ODE integration failed: {0}")]
    Integration(String),

    #[error("root bracketing failed: {0}")]
    Bracket(String),

    #[error("no bound state: {0}")]
    NoBoundState(String),

    #[error("matching radius {r_match} exceeds grid extent {r_max}")]
    MatchingRadius { r_match: f64, r_max: f64 },

    #[error("eps = {eps} not supported: {reason}")]
    UnsupportedDimension { eps: f64, reason: &'static str },

    #[error("asymptotic validity guard violated: {0}")]
    ValidityGuard(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("exponent fit failed: {0}")]
    Fit(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
