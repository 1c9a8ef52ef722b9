use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("empty input")]
    EmptyInput,
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("need more than {dim} vertices, got {count}")]
    TooFewVertices { dim: usize, count: usize },
    #[error("vertex hull is not full-dimensional (rank of [V;1] is {rank}, expected {expected})")]
    RankDeficient { rank: usize, expected: usize },
    #[error("vertices {} and {} coincide (1-based)", .first + 1, .second + 1)]
    DuplicateVertex { first: usize, second: usize },
    #[error("vertex {} (1-based) is a convex combination of the other vertices", .0 + 1)]
    NonExtremeVertex(usize),
    #[error("point is not in the polytope")]
    Infeasible,
    #[error("columns outside the zero pattern are affinely dependent")]
    SingularPattern,
    #[error("inconsistent inputs: {0}")]
    InconsistentInputs(String),
    #[error("coordinate polytope is not an interval (kernel dimension {0})")]
    NotAnInterval(usize),
    #[error("kernel direction is unbounded against the basepoint")]
    UnboundedDirection,
    #[error("point is not in the convex hull of the vertices")]
    NotMember,
    #[error("probe leaves the polytope")]
    LeavesPolytope,
    #[error("selection is not feasible at the basepoint")]
    InfeasibleSelection,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            Error::SingularMatrix => "singular_matrix",
            Error::EmptyInput => "empty_input",
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::TooFewVertices { .. } => "too_few_vertices",
            Error::RankDeficient { .. } => "rank_deficient",
            Error::DuplicateVertex { .. } => "duplicate_vertex",
            Error::NonExtremeVertex(_) => "non_extreme_vertex",
            Error::Infeasible => "infeasible",
            Error::SingularPattern => "singular_pattern",
            Error::InconsistentInputs(_) => "inconsistent_inputs",
            Error::NotAnInterval(_) => "not_an_interval",
            Error::UnboundedDirection => "unbounded_direction",
            Error::NotMember => "not_member",
            Error::LeavesPolytope => "leaves_polytope",
            Error::InfeasibleSelection => "infeasible_selection",
            Error::InvalidArgument(_) => "invalid_argument",
            Error::Parse(_) => "parse_error",
        }
    }
}
