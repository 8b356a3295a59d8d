use thiserror::Error;

/// Errors raised by the algebra and reduction routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("lattices live in ambient spaces of rank {left} and {right}")]
    AmbientMismatch { left: usize, right: usize },

    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("elements over different primes ({left} and {right})")]
    MixedPrimes { left: u64, right: u64 },

    #[error("ring element ({r1}, {r2}) violates r1 = r2 mod {p}")]
    NotCongruent { p: u64, r1: String, r2: String },

    #[error("map is not well defined: {0}")]
    IllDefinedMap(String),

    #[error("lattice is not closed under the ring action: {0}")]
    NotRClosed(String),

    #[error("map is not R-linear: {0}")]
    NotRLinear(String),

    #[error("squares of the diagram morphism do not commute ({0})")]
    NotCommuting(String),

    #[error("diagram is not separated: {0}")]
    NotSeparated(String),

    #[error("reduction hypothesis violated: {condition}")]
    Hypothesis { condition: &'static str },

    #[error("differential value cannot be expressed in the kernel presentation (column {column})")]
    Expression { column: usize },

    #[error("divisibility by p fails for {0}")]
    Divisibility(String),

    #[error("invalid chain complex: {0}")]
    InvalidComplex(String),

    #[error("degree {degree} out of range 0..={max}")]
    InvalidDegree { degree: usize, max: usize },

    #[error("invalid R-diagram: {0}")]
    InvalidRDiagram(String),

    #[error("internal consistency failure: {0}")]
    Consistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;
