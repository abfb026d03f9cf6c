use thiserror::Error;

use crate::lattice::LatticeVector;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero vector has no primitive part")]
    ZeroVector,
    #[error("rank mismatch: expected {expected}, found {found}")]
    RankMismatch { expected: usize, found: usize },
    #[error("lattice rank {rank} exceeds the configured maximum {max}")]
    RankTooLarge { rank: usize, max: usize },
    #[error("lattice rank must be positive")]
    ZeroRank,
    #[error("empty ray list")]
    EmptyRayList,
    #[error("not strongly convex")]
    NotStronglyConvex,
    #[error("not full-dimensional (unsupported)")]
    NotFullDimensional,
    #[error("{0} is not in the cone")]
    NotInCone(LatticeVector),
    #[error("cone is not simplicial")]
    NotSimplicial,
    #[error("{0} is not primitive")]
    NotPrimitive(LatticeVector),
    #[error("{0} is already a ray of the fan")]
    AlreadyRay(LatticeVector),
    #[error("{0} is not in S")]
    NotInS(LatticeVector),
    #[error("cannot avoid an essential divisor: {0} is minimal in S")]
    EssentialRay(LatticeVector),
    #[error("fan is not a subdivision of the cone")]
    NotASubdivision,
    #[error("fan and cone have different ambient cones")]
    AmbientMismatch,
    #[error("expected an ambient lattice of rank 2, found rank {0}")]
    NotRankTwo(usize),
    #[error("order undetermined at this truncation (component {component})")]
    OrderUndetermined { component: usize },
    #[error("arc does not extend to this chart: valuation {0} is not in the cone")]
    ArcDoesNotExtend(LatticeVector),
    #[error("parse error at column {column}: {message}")]
    Parse { column: usize, message: String },
    #[error("variable sets differ: {0}")]
    VariableMismatch(String),
    #[error("zero series has no homogeneous decomposition")]
    ZeroSeries,
    #[error("polynomial does not vanish at the origin")]
    NotAtOrigin,
    #[error("degenerate line: the two columns are linearly dependent")]
    DegenerateLine,
    #[error("line does not lie on the tangent cone")]
    LineNotOnCone,
    #[error("direction does not lie on the tangent cone")]
    NotOnTangentCone,
    #[error("singular point of the tangent cone: gradient vanishes at the direction")]
    SingularTangentPoint,
    #[error("curve tangent direction does not match the first column of the line")]
    TangentMismatch,
    #[error("curve residual order {found} is below the required {required}")]
    CurveResidualTooLow { found: String, required: usize },
    #[error("surjectivity hypothesis violated")]
    SurjectivityViolated,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("internal assertion failed: {0}")]
    Internal(String),
}

/// Coarse classification used for process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Malformed or unsupported input.
    Input,
    /// Well-formed input on which the mathematics says no.
    Refusal,
    /// A checked invariant failed.
    Internal,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        use Error::*;
        match self {
            NotInS(_) | EssentialRay(_) | ArcDoesNotExtend(_) | LineNotOnCone | NotOnTangentCone
            | SingularTangentPoint | TangentMismatch | CurveResidualTooLow { .. } | SurjectivityViolated => {
                ErrorKind::Refusal
            }
            Internal(_) => ErrorKind::Internal,
            _ => ErrorKind::Input,
        }
    }
}
