use crate::Int;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{x} is not invertible modulo {n}")]
    NotInvertible { x: Int, n: Int },

    #[error("{a} is not a quadratic residue modulo {p}")]
    NotAResidue { a: Int, p: Int },

    #[error("{0} is not prime")]
    NotPrime(Int),

    #[error("exponent must be at least 1")]
    ZeroExponent,

    #[error("modulus {0} is outside the supported range [2, 2^31]")]
    ModulusOutOfRange(Int),

    #[error("p-adic valuation of zero is undefined")]
    ZeroInput,

    #[error("leading coefficient {a} is divisible by {p}")]
    BadLeadingCoefficient { a: Int, p: Int },

    #[error("even prime powers are not supported here")]
    EvenPrime,

    #[error("gcd({a}, {n}) != 1")]
    NotCoprime { a: Int, n: Int },

    #[error("modulus {0} is not a prime power")]
    NotPrimePower(Int),

    #[error("cannot form a line from a repeated point")]
    DegeneratePair,

    #[error("census needs at least 2 points, got {0}")]
    TooFewPoints(usize),

    #[error("out of scope: {0}")]
    OutOfScope(String),

    #[error("{a} has no square root modulo {p}")]
    NoSquareRoot { a: Int, p: Int },

    #[error("missing square root of a modulo p")]
    MissingRoot,

    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("infeasible scale: {0}")]
    InfeasibleScale(String),
}
