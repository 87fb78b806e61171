use thiserror::Error;

/// Errors raised anywhere in the invariant pipeline.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("polynomial must be non-constant")]
    ConstantPolynomial,
    #[error("elements belong to different number fields")]
    MixedFields,
    #[error("inversion of zero in a number field")]
    ZeroInverse,
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("matrix shape mismatch: {0}")]
    Shape(String),
    #[error("malformed PD code: {0}")]
    PdSyntax(String),
    #[error("invalid PD code: {0}")]
    PdInvalid(String),
    #[error("PD code describes a link with {0} components, expected a knot")]
    MultiComponent(usize),
    #[error("inconsistent evidence for {phi}: {reason}")]
    InconsistentEvidence { phi: String, reason: String },
    #[error("coefficient does not fit the serialized integer range")]
    CoefficientOverflow,
}

pub type Result<T> = std::result::Result<T, Error>;
