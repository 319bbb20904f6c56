use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("edge `{edge}` references missing node `{node}`")]
    DanglingEdge { edge: String, node: String },

    #[error("edges labelled `{label}` connect inconsistent endpoint labels ({first} vs {second})")]
    LabelHeterogeneity {
        label: String,
        first: String,
        second: String,
    },

    #[error("duplicate id `{0}`")]
    DuplicateId(String),

    #[error("unsupported `{format}` file version {found} (expected {expected})")]
    VersionMismatch {
        format: String,
        found: u32,
        expected: u32,
    },

    #[error("graph is not an instance of the graph type ({0} violations)")]
    InvalidInstance(usize),

    #[error("relationship cardinalities have not been computed for this graph type")]
    CardinalitiesMissing,

    #[error("unknown node type `{0}`")]
    UnknownNodeType(String),

    #[error("indicator `{indicator}`: {reason}")]
    TypeMismatch { indicator: String, reason: String },

    #[error("cannot scale against an empty collection")]
    EmptyCollection,

    #[error("need at least 2 overlapping non-null rows, found {0}")]
    InsufficientOverlap(usize),

    #[error("no indicator survived validation")]
    NoIndicatorsSurvive,

    #[error("constraint violated: {0}")]
    ConstraintViolation(String),

    #[error("all rows are identical; the neighbour graph is degenerate")]
    DegenerateGraph,

    #[error("need at least {needed} rows, found {found}")]
    TooFewRows { needed: usize, found: usize },

    #[error("coefficient of variation is undefined for a zero-mean column")]
    ZeroMean,

    #[error("elbow detection needs at least 2 scores, got {0}")]
    TooShort(usize),

    #[error("need at least 2 indicators, got {0}")]
    TooFewIndicators(usize),

    #[error("{indicators} indicators exceed the exhaustive search limit of {limit}")]
    SearchSpaceTooLarge { indicators: usize, limit: usize },

    #[error("cannot form {k} clusters of at least 2 nodes from {rows} rows")]
    InfeasibleK { k: usize, rows: usize },

    #[error("inconsistent synthetic graph spec: {0}")]
    InconsistentSpec(String),

    #[error("null cell at row {row}, column {col}")]
    NullCell { row: usize, col: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

impl Error {
    /// Process exit code used by the `gc` binary.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidInstance(_) => 2,
            Error::NoIndicatorsSurvive => 3,
            Error::InfeasibleK { .. }
            | Error::SearchSpaceTooLarge { .. }
            | Error::InvalidConfig(_)
            | Error::TooFewIndicators(_)
            | Error::TooFewRows { .. }
            | Error::UnknownNodeType(_) => 4,
            _ => 1,
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

impl From<toml::de::Error> for Error {
    fn from(e: toml::de::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
