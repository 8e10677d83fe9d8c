use thiserror::Error;

/// Errors raised anywhere in the laboratory.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not square ({rows} rows, row {row} has {cols} entries)")]
    NonSquare { rows: usize, row: usize, cols: usize },
    #[error("torus dimension must be at least 2, got {0}")]
    DimensionTooSmall(usize),
    #[error("matrix is not unimodular: det = {0}")]
    NotUnimodular(i128),
    #[error("characteristic polynomial has the cyclotomic factor Phi_{0}; the map is not ergodic")]
    RootOfUnitySpectrum(u32),
    #[error("integer overflow in exact matrix arithmetic")]
    Overflow,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("window half-width {requested} exceeds the cap {cap}")]
    WindowTooLarge { requested: usize, cap: usize },
    #[error("window half-width {half_width} does not cover excursion {needed}")]
    WindowTooSmall { half_width: usize, needed: usize },

    #[error("bad resolution: {0}")]
    BadResolution(String),
    #[error("variance must be nonnegative, got {0}")]
    NegativeVariance(f64),
    #[error("empty sample")]
    EmptySample,
    #[error("sample contains a NaN")]
    NanSample,

    #[error("need at least {needed} replicates, got {got}")]
    InsufficientReps { needed: usize, got: usize },
    #[error("work budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("invalid block specification: {0}")]
    InvalidBlocks(String),
    #[error("lag {requested} exceeds the orbit cap {cap}")]
    OrbitCapExceeded { requested: usize, cap: usize },
    #[error("degenerate variance: {0}")]
    DegenerateVariance(String),

    #[error("config error: {0}")]
    Config(String),
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
