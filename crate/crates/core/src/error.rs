use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("level must be odd and at least 3, got {0}")]
    InvalidLevel(u32),
    #[error("color out of range: {color} at level {level}")]
    ColorOutOfRange { color: i64, level: u32 },
    #[error("inadmissible triple ({0}, {1}, {2})")]
    InadmissibleTriple(u32, u32, u32),
    #[error("inadmissible six-tuple {0:?}")]
    InadmissibleTuple([u32; 6]),
    #[error("oracle limited to small levels (r = {0})")]
    OracleLevelTooLarge(u32),
    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("tuple not admissible")]
    NotAdmissible,
    #[error("not a generalized hyperbolic tetrahedron")]
    NotHyperbolic,
    #[error("inconsistent Gram data: {0}")]
    InconsistentGram(String),
    #[error("thread pool: {0}")]
    ThreadPool(String),
    #[error("unclassified pattern")]
    UnclassifiedPattern,
    #[error("line misses the ball")]
    LineMissesBall,
    #[error("no hyperbolic critical point")]
    NoCriticalPoint,
    #[error("no hyperideal vertex")]
    NoHyperidealVertex,
    #[error("concavity check failed at xi = {0}")]
    ConcavityFailed(f64),
    #[error("step crosses stratum")]
    StepCrossesStratum,
    #[error("no admissible rounding at this level (r = {0})")]
    NoAdmissibleRounding(u32),
    #[error("prediction undefined at ideal vertex")]
    PredictionUndefined,
    #[error("need at least {needed} samples for a fit, got {got}")]
    TooFewSamples { needed: usize, got: usize },
    #[error("fit design matrix is rank deficient")]
    RankDeficient,
    #[error("apex not hyperideal")]
    ApexNotHyperideal,
    #[error("tetrahedron {index} failed: {source}")]
    Tetrahedron {
        index: usize,
        #[source]
        source: Box<Error>,
    },
    #[error("vertex {0} does not exist in the graph")]
    UnknownVertex(usize),
    #[error("expected {expected} edge colors, got {got}")]
    ColoringLength { expected: usize, got: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
