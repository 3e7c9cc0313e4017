use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("a star graph needs at least 2 bonds, got {0}")]
    TooFewBonds(usize),

    #[error("length number {} is not positive: {value}", .index + 1)]
    NonPositiveLength { index: usize, value: f64 },

    #[error("non-finite input: {0}")]
    NonFiniteInput(String),

    #[error("value count {values} does not match grid point count {points}")]
    LengthMismatch { values: usize, points: usize },

    #[error("composite Simpson needs an odd point count, got {0}")]
    EvenPointCount(usize),

    #[error("grid needs at least 3 points, got {0}")]
    TooFewPoints(usize),

    #[error("bond index {bond} out of range for a graph with {n_bonds} bonds")]
    BondOutOfRange { bond: usize, n_bonds: usize },

    #[error("x = {x} lies outside bond {bond} = [0, {length}]")]
    OutOfDomain { bond: usize, x: f64, length: f64 },

    #[error("non-finite function value on bond {bond} at x = {x}")]
    EvaluationFailure { bond: usize, x: f64 },

    #[error("unknown boundary-condition family `{0}`")]
    UnknownFamily(String),

    #[error("family {0} has no closed-form spectrum")]
    UnsupportedFamily(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("functions live on different graphs")]
    GraphMismatch,

    #[error("basis holds {available} modes, {requested} requested")]
    InsufficientBasis { requested: usize, available: usize },

    #[error("resolution {0} is too coarse for the derivative stencil (need at least 5 points)")]
    ResolutionTooCoarse(usize),

    #[error("invalid wavenumber window [{k_min}, {k_max}]")]
    InvalidWindow { k_min: f64, k_max: f64 },

    #[error("scan step {step} exceeds the safe limit {limit}")]
    StepTooLarge { step: f64, limit: f64 },

    #[error("tolerance must be positive and finite, got {0}")]
    InvalidTolerance(f64),

    #[error("k = {k} is not a secular root (residual {residual:e})")]
    NotARoot { k: f64, residual: f64 },

    #[error("k = {k} is a degenerate root (some sin(k L_j) vanishes)")]
    DegenerateMode { k: f64 },

    #[error("Gram matrix is numerically singular (condition number {condition:e})")]
    SingularGram { condition: f64 },

    #[error("spectral basis is empty")]
    EmptyBasis,

    #[error("got {found} coefficients for a basis of {expected} modes")]
    CoefficientMismatch { expected: usize, found: usize },

    #[error("time grid is not increasing at index {0}")]
    UnsortedGrid(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
