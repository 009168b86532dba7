use thiserror::Error;

/// Errors raised by the library. Validation routines that report a verdict
/// (tree decompositions, shortcut systems, minors) return their own
/// violation types instead.
#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for graph on {n} vertices")]
    InvalidVertex { vertex: usize, n: usize },

    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),

    #[error("vertex count product {0} x {1} exceeds platform capacity")]
    Capacity(usize, usize),

    #[error("graph carries no coordinates")]
    MissingCoords,

    #[error("coordinate tuples have inconsistent arity (expected {expected}, vertex {vertex} has {found})")]
    CoordArity {
        expected: usize,
        vertex: usize,
        found: usize,
    },

    #[error("axis {axis} out of range for coordinate arity {arity}")]
    AxisOutOfRange { axis: usize, arity: usize },

    #[error("malformed coordinates: {0}")]
    MalformedCoords(String),

    #[error("instance has {n} vertices, above the exact-search cap of {cap}; use the heuristic instead")]
    ExactCapExceeded { n: usize, cap: usize },

    #[error("invalid tree decomposition: {0}")]
    InvalidDecomposition(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("distribution f(r={r}) does not sum to 1")]
    InvalidDistribution { r: usize },

    #[error("no valid radius found up to search cap {0}")]
    RadiusSearchCap(usize),

    #[error("radius {r} is below the certified threshold r0 = {r0} for exponent {c}")]
    RadiusBelowThreshold { r: usize, r0: usize, c: u32 },

    #[error("ball N^{r}[{vertex}] has {size} vertices, above the growth bound {bound}")]
    GrowthViolated {
        vertex: usize,
        r: usize,
        size: usize,
        bound: u128,
    },

    #[error("neither factor satisfies the growth bound at radius {r}")]
    NoSmallGrowthFactor { r: usize },

    #[error("no fragment met the weight bound within {0} draws")]
    StatisticalFailure(usize),

    #[error("invalid shortcut system: {0}")]
    InvalidShortcuts(String),

    #[error("cell {cell:?} sub-cube {subcube:?} holds {count} points, so the graph has a clique larger than {k}")]
    CliqueBound {
        cell: Vec<i64>,
        subcube: Vec<usize>,
        count: usize,
        k: usize,
    },

    #[error("non-finite coordinate in point {0}")]
    NonFinitePoint(usize),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for errors caused by unreadable or malformed input rather than a
    /// violated mathematical precondition.
    pub fn is_input_error(&self) -> bool {
        matches!(self, Error::Parse(_) | Error::Io(_))
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

pub type Result<T, E = Error> = std::result::Result<T, E>;
