use alloc::string::String;

/// Errors raised at the boundaries of the algebra engine.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("series constant term must be zero")]
    NonzeroConstantTerm,
    #[error("series constant term must be one")]
    ConstantTermNotOne,
    #[error("scalar {0} is not invertible (only nonzero monomials are units)")]
    NotInvertible(String),
    #[error("monomial z^{p}*zb^{q} is not Z2-invariant (p+q must be even)")]
    ParityViolation { p: u32, q: u32 },
    #[error("element has a g-component and is not spherical")]
    NotSpherical,
    #[error("expected a single monomial")]
    NotMonomial,
    #[error("degree {degree} must be even and at most {bound}")]
    DegreeOutOfRange { degree: u32, bound: u32 },
    #[error("form polynomial has a nonzero form-degree-0 part")]
    NonzeroDegreeZero,
    #[error("index form needs n >= 1, got {0}")]
    InvalidDimension(u32),
    #[error("expected {expected} symplectic curvature symbols, got {found}")]
    CurvatureCount { expected: usize, found: usize },
    #[error("base variable p{index}/q{index} is outside the model of dimension n = {n}")]
    BaseVariableOutOfRange { index: usize, n: u32 },
    #[error("generator {0} does not belong to this algebra")]
    ForeignGenerator(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
}
