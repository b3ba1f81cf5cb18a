use thiserror::Error;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is numerically singular (pivot {pivot} of {size})")]
    SingularMatrix { pivot: usize, size: usize },
    #[error("{what} did not converge after {iterations} iterations")]
    NoConvergence { what: String, iterations: usize },
    #[error("jacobian is singular at iteration {iteration}")]
    SingularJacobian { iteration: usize },
    #[error("oscillatory tail diverges: zero frequency with nonzero 1/t coefficient")]
    DivergentTail,
    #[error("argument hits a pole: {0}")]
    PoleArgument(String),
    #[error("argument outside the validity domain of the route: {0}")]
    RouteDomain(String),
    #[error("argument lies on the real axis")]
    RealAxisArgument,
    #[error("could not bracket the hole for quantum number {qnum}")]
    HoleBracketFailure { qnum: f64 },
    #[error("precision exhausted at {bits} bits (relative change {rel_diff:e})")]
    PrecisionExhausted { bits: u32, rel_diff: f64 },
    #[error("chain length {m} outside the supported range {min}..={max}")]
    SizeLimit { m: usize, min: usize, max: usize },
    #[error("no matching eigenstate: {0}")]
    NoMatch(String),
    #[error("degenerate eigenstates cannot be told apart: {0}")]
    DegenerateAmbiguity(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("cache i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("cache format: {0}")]
    Format(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
