use thiserror::Error;

/// Errors produced by the engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("sample space must contain at least one atom")]
    EmptySpace,

    #[error("invalid probability vector: {0}")]
    InvalidProbabilities(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("atom count mismatch: expected {expected}, found {found}")]
    AtomCountMismatch { expected: usize, found: usize },

    #[error("state kind mismatch: {0}")]
    KindMismatch(String),

    #[error("invalid random element: {0}")]
    InvalidElement(String),

    #[error("block {block} has zero probability mass; drop null atoms first")]
    ZeroMassBlock { block: usize },

    #[error("{what} = {value} is out of range (allowed {min}..={max})")]
    OutOfRange {
        what: &'static str,
        value: usize,
        min: usize,
        max: usize,
    },

    #[error("invalid weighted states: {0}")]
    InvalidWeights(String),

    #[error("numeric Bayes-act search needs a bounded action space ({0})")]
    UnboundedSearch(String),

    #[error("loss evaluated to a non-finite value during the solve ({0})")]
    NonFiniteEval(String),

    #[error("Bayes-act solver did not converge within {iterations} iterations")]
    NoConvergence { iterations: usize },

    #[error("action space {0} has no Bayes-act solver")]
    UnsupportedActionSpace(String),

    #[error("indeterminate difference: {0}")]
    Indeterminate(String),

    #[error("identity check needs finite terms, got {0}")]
    InfiniteTerm(String),

    #[error("outside the generator domain: {0}")]
    OutsideDomain(String),

    #[error("element is not measurable with respect to the partition: {0}")]
    NotMeasurable(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("grid too coarse for n = {n}: step {step} exceeds {max_step}")]
    GridTooCoarse { n: f64, step: f64, max_step: f64 },

    #[error("density does not normalize: integral = {integral}")]
    NotNormalizable { integral: f64 },

    #[error("zero density at interior node ({ix}, {iy})")]
    ZeroDensity { ix: usize, iy: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
