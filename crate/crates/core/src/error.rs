use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Failures are sorted by who is at fault: the caller's input, the degree
/// window they chose, or the engine itself.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid group table: {0}")]
    InvalidGroup(String),

    #[error("invalid representation: {0}")]
    InvalidRepresentation(String),

    #[error("invalid ring data: {0}")]
    InvalidRing(String),

    #[error("elements do not belong to the same ring: {0}")]
    RingMismatch(String),

    #[error("relation {index} is not homogeneous: {detail}")]
    Inhomogeneous { index: usize, detail: String },

    #[error("map is not equivariant: {0}")]
    NotEquivariant(String),

    #[error("map is not surjective: rank {rank}, target dimension {target}")]
    NotSurjective { rank: usize, target: usize },

    #[error("composite of consecutive maps is nonzero at position {position}, degree {degree}")]
    NotAComplex { position: usize, degree: i64 },

    #[error("invalid DG algebra: {0}")]
    InvalidDga(String),

    #[error("formality construction failed in degree {degree}: {detail}")]
    Formality { degree: i64, detail: String },

    #[error("parse error: {0}")]
    Parse(String),

    /// The requested answer depends on degrees that were not realized.
    #[error("window too small: {detail} (needed degrees {needed_lo}..={needed_hi}, available {available_lo}..={available_hi})")]
    Window {
        detail: String,
        needed_lo: i64,
        needed_hi: i64,
        available_lo: i64,
        available_hi: i64,
    },

    /// A mathematical invariant failed; always a bug.
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    pub fn window(detail: impl Into<String>, needed: (i64, i64), available: (i64, i64)) -> Self {
        Error::Window {
            detail: detail.into(),
            needed_lo: needed.0,
            needed_hi: needed.1,
            available_lo: available.0,
            available_hi: available.1,
        }
    }

    pub fn is_window(&self) -> bool {
        matches!(self, Error::Window { .. })
    }

    pub fn is_invariant(&self) -> bool {
        matches!(self, Error::Invariant(_) | Error::NotAComplex { .. })
    }
}
