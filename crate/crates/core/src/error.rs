use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A request would exceed a configured memory or size budget.
    #[error("capacity exceeded: {what} needs {requested} but the budget is {budget}")]
    Capacity {
        what: &'static str,
        requested: u64,
        budget: u64,
    },
    #[error("out of range: {0}")]
    Range(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("expected a polynomial of degree {expected}, found degree {found}")]
    Degree { expected: usize, found: usize },
    #[error("zero polynomial is not allowed here")]
    ZeroPolynomial,
    #[error("constant polynomial is not allowed here")]
    ConstantPolynomial,
    #[error("polynomial vanishes identically modulo {0}")]
    VanishesModulo(u64),
    #[error("family is not admissible: {0}")]
    Inadmissible(String),
    #[error("duplicate family member: {0}")]
    DuplicateMember(String),
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("sequence is not quadratic: {0}")]
    NotQuadratic(String),
    #[error("{0} is a quadratic residue modulo {1}, expected a nonresidue")]
    NotNonresidue(u64, u64),
    #[error("quadratic hypothesis violated: {0}")]
    Quadratic(QuadraticViolation),
    #[error("not enough checkpoints: {0}")]
    InsufficientCheckpoints(String),
}

/// Hypotheses on `a t^2 + b t + c` for the quadratic closed form.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuadraticViolation {
    #[error("leading coefficient {0} is not positive")]
    NonPositiveLeading(i64),
    #[error("gcd(a, b, c) = {0}, coefficients must be relatively prime")]
    CommonDivisor(u64),
    #[error("a + b and c are both even")]
    BothEven,
    #[error("discriminant {0} is a perfect square")]
    SquareDiscriminant(i128),
}
