use thiserror::Error;

/// Errors produced by the solver library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("weights are asymmetric at ({i}, {j}): {upper} vs {lower}")]
    Asymmetric {
        i: usize,
        j: usize,
        upper: f64,
        lower: f64,
    },

    #[error("input matrix is not symmetric")]
    NotSymmetric,

    #[error("self-loop at vertex {k} with weight {value}")]
    NonzeroDiagonal { k: usize, value: f64 },

    #[error("weight {value} at ({i}, {j}) lies outside [0, {wbar}]")]
    OutOfBox {
        i: usize,
        j: usize,
        value: f64,
        wbar: f64,
    },

    #[error("length mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("regularity fails: largest eigenvalue of phi*g is {lambda}, need < 1")]
    SingularSystem { lambda: f64 },

    #[error("phi must be nonzero")]
    PhiZero,

    #[error("bad size: {0}")]
    BadSize(String),

    #[error("index {index} out of range for {n} players")]
    BadIndex { index: usize, n: usize },

    #[error("no convergence after {iterations} iterations")]
    NonConvergence { iterations: usize },

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("link cost exceeds the budget by {overshoot}")]
    BudgetExhausted { overshoot: f64 },

    #[error("instance too large: n = {n}, limit is {max}")]
    TooLarge { n: usize, max: usize },

    #[error("principal eigenvalue of phi*g is not simple")]
    DegenerateEigenvalue,

    #[error("initial link ({i}, {j}) is on the boundary of the weight box")]
    BoundaryGhat { i: usize, j: usize },

    #[error("all payoffs are zero and no eigencentrality fallback was supplied")]
    AllZeroWithoutContext,

    #[error("single-intervention limit needs the initial network")]
    MissingGhat,
}

pub type Result<T> = std::result::Result<T, Error>;
