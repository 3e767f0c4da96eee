use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("chain length {0} is not supported (need even L with 4 <= L <= 24)")]
    InvalidLength(usize),

    #[error("sector n_up = {n_up} is out of range for L = {length}")]
    InvalidSector { length: usize, n_up: usize },

    #[error("configuration {0:#b} is not in the basis")]
    NotInBasis(u32),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("toroidal boundary conditions need a full-space or parity basis")]
    IncompatibleBasis,

    #[error("twist angle {0} needs complex scalars")]
    ComplexRequired(f64),

    #[error("{what} = {value} is outside its domain ({domain})")]
    OutOfDomain {
        what: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("Lanczos did not converge at L = {length}: residual {residual:e} after {iterations} iterations")]
    NotConverged {
        length: usize,
        residual: f64,
        iterations: usize,
    },

    #[error("empty operator")]
    EmptyOperator,

    #[error("invalid fidelity series: {0}")]
    InvalidSeries(String),

    #[error("lattice {l1}x{l2} is too large for the transfer matrix (max 6x6)")]
    LatticeTooLarge { l1: usize, l2: usize },

    #[error("config error: {0}")]
    Config(String),

    #[error("{failed} of {total} oracle checks exceeded tolerance")]
    OracleMismatch { failed: usize, total: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit status for the command-line front end: 2 for bad
    /// configuration or input, 3 for solver failures, 4 for oracle mismatches.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::NotConverged { .. } | Error::EmptyOperator | Error::Io(_) | Error::Json(_) => 3,
            Error::OracleMismatch { .. } => 4,
            _ => 2,
        }
    }

    pub(crate) fn domain(what: &'static str, value: f64, domain: &'static str) -> Self {
        Error::OutOfDomain {
            what,
            value,
            domain,
        }
    }
}
