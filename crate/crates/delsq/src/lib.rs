//! Exact invariants of deleted squares of 3-dimensional lens spaces.
//!
//! The deleted square of a manifold is its two-point configuration space:
//! the square of the manifold minus the diagonal. Its homotopy type is not
//! determined by the homotopy type of the manifold, and for lens spaces
//! L(p, q) with p an odd prime this crate computes, in exact arithmetic, the
//! invariants that detect the difference:
//!
//! * (co)homology tables of L, L x L, the deleted square, and the universal
//!   cover of the deleted square ([`homology`]);
//! * Cheeger-Simons character values on the third homology of squares and
//!   deleted squares ([`chern_simons`]);
//! * the character-level compatibility system any homotopy equivalence of
//!   deleted squares must satisfy, with a brute-force enumerator and its
//!   closed-form classification ([`heq`]);
//! * triple Massey products on the second cohomology of the universal
//!   cover, carried by the cyclotomic ring `R_p = F2[t]/(1 + t + ... +
//!   t^(p-1))` ([`massey`], [`cyclo`]);
//! * the naturality search: for each admissible scalar, an exhaustive scan
//!   for pullback polynomials compatible with the Massey products, ending
//!   in a homotopy-equivalence verdict for the deleted squares
//!   ([`naturality`]).
//!
//! The companion `delsq` binary exposes each pipeline with text tables and
//! JSON reports.

pub mod chern_simons;
pub mod cyclo;
mod error;
pub mod heq;
pub mod homology;
pub mod massey;
pub mod modp;
pub mod naturality;
#[cfg(test)]
mod testutil;

pub use chern_simons::{QZp, Rep};
pub use cyclo::CycloPoly;
pub use error::Error;
pub use heq::{AdmissibleAlpha, Sign};
pub use massey::MasseyStructure;
pub use modp::LensPair;
pub use naturality::{SearchOptions, SearchReport, Verdict};
