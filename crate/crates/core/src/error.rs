use thiserror::Error;

/// Failures raised by the quadric, basket, line and sphere routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is zero and has no projective class")]
    ZeroMatrix,
    #[error("quadrics are projectively dependent")]
    DependentQuadrics,
    #[error("pencil lies inside the determinantal hypersurface; sample ranks along it instead")]
    PencilInsideDeterminantal,
    #[error("pencil determinant does not vanish identically")]
    NotSingularPencil,
    #[error("expected rank {expected}, found {found}")]
    RankMismatch { expected: usize, found: usize },
    #[error("quadric has rank {0}, baskets need rank at least three")]
    RankTooLow(usize),
    #[error("cross-ratio is indeterminate (0/0)")]
    Indeterminate,
    #[error("parameter at an excluded tangency point")]
    DegenerateParameter,
    #[error("lines in quadric space do not meet (residual {0:.3e})")]
    NoIntersection(f64),
    #[error("pencil does not have a fixed vertex")]
    NotFixedVertex,
    #[error("rank-two points are not distinct")]
    ClusteredRoots,
    #[error("triangles are not in perspective (residual {0:.3e})")]
    NotInPerspective(f64),
    #[error("no admissible solution")]
    NoSolution,
    #[error("plane passes through a vertex of the tetrahedron")]
    PlaneThroughVertex,
    #[error("quadrilateral vertices coincide; common-vertex case")]
    CoincidentVertices,
    #[error("points coincide")]
    CoincidentPoints,
    #[error("line lies at infinity")]
    AtInfinity,
    #[error("line direction is isotropic")]
    NullDirection,
    #[error("quadric is singular")]
    Singular,
    #[error("pair of quadrics is not generic: {0}")]
    NonGenericPair(&'static str),
    #[error("intersection curve could not be sampled")]
    SingularIntersection,
    #[error("two centers coincide")]
    DuplicateCenters,
    #[error("solution count {found} differs from {expected}")]
    DefectiveCount { expected: usize, found: usize },
    #[error("three centers are collinear")]
    ThreeCollinear,
    #[error("reference frame is degenerate")]
    FrameDegenerate,
    #[error("elimination failed after {0} frame changes")]
    EliminationFailed(usize),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
