//! Hall-Littlewood polynomials, alternating and Hermitian structure
//! coefficients, and singular-number laws for p-adic random matrices, with a
//! sampling laboratory that checks each law.

pub mod exactnum;
pub mod heckecoeff;
pub mod hlpoly;
pub mod lawbook;
pub mod padicring;
pub mod randmat;
pub mod sigcore;
pub mod veristat;

pub use exactnum::{Field, IntPoly, RationalFunction};
pub use sigcore::Signature;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("invalid signature: {0}")]
    InvalidSignature(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("interlacing violated: {0}")]
    Interlacing(String),
    #[error("guard exceeded: {0}")]
    Guard(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("pole: {0}")]
    Pole(String),
    #[error("infinite specialization not allowed here")]
    TailNotAllowed,
    #[error("divergent product: {0}")]
    Divergence(String),
    #[error("polynomial is not symmetric")]
    NonSymmetric,
    #[error("integrality failure: {0}")]
    Integrality(String),
    #[error("element is not a unit")]
    NonUnit,
    #[error("ring configuration: {0}")]
    RingConfig(String),
    #[error("precision: {0}")]
    Precision(String),
    #[error("unresolved: {0}")]
    Unresolved(String),
    #[error("search space too large: {0}")]
    SpaceTooLarge(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("negative mass: {0}")]
    NegativeMass(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{0}")]
    Domain(String),
}

pub type Result<T> = std::result::Result<T, Error>;
