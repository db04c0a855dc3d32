use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("coordinate is not finite: ({x}, {y})")]
    NonFinite { x: f64, y: f64 },

    #[error("angle is undefined: apex coincides with an endpoint")]
    DegenerateAngle,

    #[error("degenerate segment: endpoints coincide")]
    DegenerateSegment,

    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("index {index} out of range for {len} points")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("points {first} and {second} coincide")]
    DuplicatePoint { first: usize, second: usize },

    #[error("point set is empty")]
    EmptyPointSet,

    #[error("source and target are the same vertex ({0})")]
    SameEndpoints(usize),

    #[error("vertex {t} is unreachable from vertex {s}")]
    Unreachable { s: usize, t: usize },

    #[error("graph has no connected vertex pair")]
    NoConnectedPair,

    #[error("routing requires beta <= 1, got {0}")]
    UnsupportedBeta(f64),

    #[error("no witness blocks missing edge ({s}, {t}); graph is not the beta-skeleton of its points")]
    NoWitness { s: usize, t: usize },

    #[error("routing recursion did not shorten segment ({a}, {b})")]
    NonDecreasing { a: usize, b: usize },

    #[error("malformed triangle tree: {0}")]
    MalformedTree(String),
}

pub(crate) fn invalid(name: &'static str, value: f64, reason: &'static str) -> Error {
    Error::InvalidParameter { name, value, reason }
}
