use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("cannot parse `{token}`: {reason}")]
    Parse { token: String, reason: String },

    #[error("invalid scale: {0}")]
    InvalidScale(String),

    #[error("interval refinement hit the {bits}-bit cap before deciding")]
    PrecisionExhausted { bits: u32 },

    #[error("m-sequence infeasible at index {index}: {reason}")]
    Infeasible { index: usize, reason: String },

    #[error("wormhole digits out of range: {0}")]
    DigitRange(String),

    #[error("no wormhole level of order {order} {direction} {height}")]
    NotFound {
        order: usize,
        direction: &'static str,
        height: String,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("point not representable at depth {depth}: {reason}")]
    NotRepresentable { depth: usize, reason: String },

    #[error("approximation graph needs {vertices} vertices, over the budget of {budget}")]
    Budget { vertices: u128, budget: u128 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
