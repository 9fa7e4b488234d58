//! Exact construction of the matrix-valued Chebyshev polynomials of the
//! second kind, their weight, recurrence and differential operators, with
//! exact verification of the identities they satisfy.
//!
//! Half-integer spins `ℓ` are always passed as the integer `two_l = 2ℓ`.

pub mod diffops;
pub mod exact;
pub mod hypergeometric;
pub mod recurrence;
pub mod special;
pub mod verify;
pub mod weight;

pub use exact::{
    int, q, GaussianRational, Grid, LaurentGrid, LaurentPoly, MatPoly, PiGrid, PiRational, Poly, RatGrid, Rational,
    Ring,
};

/// Errors raised by the constructions in this crate.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("hypergeometric series does not terminate")]
    NonTerminating,
    #[error("denominator parameter vanishes at term {index}")]
    DenominatorPole { index: usize },
    #[error("singular bracket factor C + {index}")]
    SingularBracket { index: usize },
    #[error("degenerate alpha {alpha}: {reason}")]
    Degenerate { alpha: String, reason: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
