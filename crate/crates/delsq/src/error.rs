use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),

    #[error("{q} is not coprime to {p}")]
    NotCoprime { p: u64, q: u64 },

    #[error("0 is not invertible mod {0}")]
    NotInvertible(u64),

    #[error("modulus mismatch: p = {0} vs p = {1}")]
    ModulusMismatch(u64, u64),

    #[error("not a unit in R_p for p = {p}: gcd with 1 + t + ... + t^(p-1) is {factor}")]
    NotAUnit { p: u64, factor: String },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("exponent {exponent} is outside the canonical range 0..{} for p = {p}", .p - 1)]
    ExponentOutOfRange { p: u64, exponent: u64 },

    #[error("q = {q} must satisfy 0 < q < {p}/2")]
    QOutOfRange { p: u64, q: u64 },

    #[error("the triple <1,1,1> has no stated representative; it is 0 by convention only inside full trilinear expansions")]
    DiagonalMonomial,

    #[error("the constraint (k, l) = (0, 0) is excluded: its source side is the triple <1,1,1>")]
    DiagonalConstraint,

    #[error("search space for p = {p} holds about {candidates} candidates, above the configured bound p <= {max_p}")]
    SearchBoundExceeded {
        p: u64,
        max_p: u64,
        candidates: String,
    },
}
