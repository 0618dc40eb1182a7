use thiserror::Error;

/// Errors surfaced by the library. Solver verdicts (Unsat, unrealizable) are
/// results, not errors; only malformed input and exhausted budgets land here.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("points {0}, {1}, {2} are collinear")]
    CollinearInput(usize, usize, usize),
    #[error("point set is not in canonical form (x-coordinates must be strictly increasing)")]
    NotCanonical,
    #[error("vertices are not in convex position")]
    NotConvexPosition,
    #[error("coloring does not match the problem mode: {0}")]
    SpecMismatch(String),
    #[error("invalid problem specification: {0}")]
    SpecInvalid(String),
    #[error("encoding exceeds the configured literal budget ({0} literals)")]
    SizeOverflow(usize),
    #[error("abscissa grid has {grid} entries but the problem has {n} points")]
    GridMismatch { grid: usize, n: usize },
    #[error("index {0} out of range for {1} elements")]
    IndexOutOfRange(usize, usize),
    #[error("n = {n} exceeds the enumeration cap {cap}")]
    CapExceeded { n: usize, cap: usize },
    #[error("resource limit reached: {0}")]
    ResourceLimit(String),
    #[error("external solver failed: {0}")]
    SolverCrash(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("no Sat/Unsat boundary in the range {0}..={1}")]
    BoundaryNotInRange(usize, usize),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
