use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("generator block must be nonempty")]
    EmptyBlock,
    #[error("standard-interval label must be nonempty")]
    EmptyLabel,
    #[error("finite completion point must be nonempty")]
    EmptyFinitePoint,
    #[error("no difference found within {cap} entries")]
    DepthCapExceeded { cap: usize },
    #[error("terms are not strictly {direction}")]
    NotMonotone { direction: &'static str },
    #[error("sequences are not tail-equivalent")]
    NotTailEquivalent,
    #[error("point is not in the interval or image: {0}")]
    NotInInterval(String),
    #[error("point is not in the domain: {0}")]
    NotInDomain(String),
    #[error("interval is empty: lower bound is not below upper bound")]
    EmptyInterval,
    #[error("chain tracing exceeded {cap} steps")]
    StepCapExceeded { cap: usize },
    #[error("ill-formed map: {0}")]
    IllFormedMap(String),
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("iterate left the representable range at step {step}")]
    DomainEscape { step: i64 },
    #[error("iteration cap of {cap} exceeded")]
    IterationCapExceeded { cap: usize },
    #[error("no sign change across the bracket: f-g^N is {left:e} at the left end and {right:e} at the right end")]
    NoSignChange { left: f64, right: f64 },
    #[error("tolerance {tol:e} not reached after {steps} bisection steps (residual {residual:e})")]
    ToleranceUnreachable { tol: f64, steps: usize, residual: f64 },
    #[error("invalid automorphism: {0}")]
    InvalidAutomorphism(String),
    #[error("no order-compatible point within the first {searched} enumerated points")]
    NoCompatiblePoint { searched: usize },
    #[error("unknown verification suite `{0}`")]
    UnknownSuite(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
