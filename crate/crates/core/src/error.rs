use thiserror::Error;

/// Errors surfaced by the exact-arithmetic and geometry layers.
///
/// Conditions reachable from user input are reported through this enum;
/// violations of internal invariants panic instead.
#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} exceeds 2^31")]
    ModulusTooLarge(u64),
    #[error("cannot parse scalar {text:?}: {reason}")]
    ParseScalar { text: String, reason: String },
    #[error("gcd of an all-zero family is undefined")]
    AllZero,
    #[error("map is not fiberwise surjective (maximal minors share a root)")]
    NotSurjective,
    #[error("kernel generator scan exceeded its degree cap {0}")]
    CapExceeded(i64),
    #[error("section vanishes at a point, quotient is not locally free")]
    SectionVanishes,
    #[error("modification points must be pairwise distinct")]
    DuplicatePoint,
    #[error("modification direction is zero")]
    ZeroDirection,
    #[error("curve does not lie on the hypersurface")]
    CurveNotOnHypersurface,
    #[error("hypersurface is singular at a point of the curve")]
    SingularPoint,
    #[error("parametrization is not an immersion (derivative drops rank)")]
    NotImmersion,
    #[error("direction is tangent to the curve, its normal class is zero")]
    DirectionTangentToLine,
    #[error("direction does not lie in the tangent space of the hypersurface")]
    DirectionNotInTangentSpace,
    #[error("argument out of range: {0}")]
    OutOfRange(String),
    #[error("inconsistent incidence marking: {0}")]
    InconsistentMarking(String),
    #[error("linear system is empty")]
    EmptySystem,
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("node is not transversal: {0}")]
    NonTransversalNode(String),
    #[error("cross-check failed: {0}")]
    CheckFailed(String),
    #[error("invalid input: {0}")]
    BadInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
