use thiserror::Error;

/// Errors raised by the exact and numeric layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("operator has negative z-powers; {0} needs an affine-line operator")]
    NegativePowers(&'static str),
    #[error("zero operator has no indicial polynomial")]
    ZeroOperator,
    #[error("invalid substitution: {0}")]
    InvalidSubstitution(String),
    #[error("invalid hypergeometric parameters: {0}")]
    InvalidParams(String),
    #[error("lower parameter {0} is a non-positive integer")]
    IllegalLowerParameter(String),
    #[error("polynomial has irrational roots; only rational roots are supported")]
    IrrationalRoots,
    #[error("series truncated at order {order} is too short for an operator of z-span {span}")]
    InsufficientTruncation { order: usize, span: usize },
    #[error("Laplace transform needs rational coefficients, found {0}")]
    NonRationalCoefficient(String),
    #[error("gamma function has a pole at {0}")]
    GammaPole(String),
    #[error("gamma derivative symbols have no numeric evaluation: {0}")]
    GammaDerivative(String),
    #[error("residue class r must be 0 or 2, got {0}")]
    InvalidResidue(u32),
    #[error("expected a monic quartic, got {0}")]
    NotMonicQuartic(String),
    #[error("divisor error: {0}")]
    Divisor(String),
    #[error("coincident points: {0}")]
    CoincidentPoints(String),
    #[error("root iteration did not converge: {0}")]
    RootIteration(String),
    #[error("quadrature did not converge: {0}")]
    Quadrature(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
