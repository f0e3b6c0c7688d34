//! Truncated formal deformations of hom-associative algebras over `F_p`.
//!
//! Everything is evaluated on basis elements: every identity involved is
//! multilinear over `F_p[t]/(t^(N+1))`, so agreement on basis tuples is
//! agreement everywhere. All comparisons are exact.

use thiserror::Error;

pub mod algebra;
pub mod field;
pub mod formal;
pub mod io;
pub mod series;
pub mod sweep;

pub use algebra::{
    conjugate_twist, transport_multiplication, AssociativeTwisting, ConjugateTwist,
    LinearHomAlgebra,
};
pub use field::{Bilinear, Matrix, PrimeField};
pub use formal::{
    associativity_defect, equivalence_check, formal_twist_defect, hom_assoc_defect,
    nondegeneracy_preserved_check, transport_deformation, transport_formal_twisting,
    twist_deformation, untwist_deformation, DefectSeries, DeformationTriple, FormalConjugation,
    FormalIsomorphism, NondegeneracyReport,
};
pub use series::{BilinearSeries, LinearSeries, VectorSeries};

/// Largest supported algebra dimension.
pub const MAX_DIM: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DeformError {
    #[error("{0} is not a supported prime modulus")]
    NotPrime(u32),
    #[error("shape error: {0}")]
    Shape(&'static str),
    #[error("dimension {0} exceeds the maximum of {MAX_DIM}")]
    DimensionTooLarge(usize),
    #[error("index out of range: entry {value} is not below p = {p}")]
    EntryOutOfRange { value: u32, p: u32 },
    #[error("leading coefficient is singular")]
    SingularLeadingTerm,
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("base is not hom-associative on basis triple ({0}, {1}, {2})")]
    NotHomAssociative(usize, usize, usize),
    #[error("multiplication is not associative on basis triple ({0}, {1}, {2})")]
    NotAssociative(usize, usize, usize),
    #[error("twisting map violates the compatibility relation on basis triple ({0}, {1}, {2})")]
    IncompatibleTwisting(usize, usize, usize),
    #[error("series orders differ: {0} vs {1}")]
    OrderMismatch(usize, usize),
    #[error("degree-zero term does not match the base ({0})")]
    BaseMismatch(&'static str),
    #[error("formal isomorphism must have the identity in degree zero")]
    LeadingNotIdentity,
    #[error("base is strongly degenerate: {0:?} annihilates from both sides")]
    StronglyDegenerate(Vec<u32>),
    #[error("not a hom-associative deformation: defect at order {0}")]
    NotDeformation(usize),
    #[error("deformed product is not associative at order {0}")]
    NotAssociativeSeries(usize),
    #[error("not a formal twisting: defect at order {0}")]
    NotFormalTwisting(usize),
    #[error("phi is not a multiplicative isomorphism on basis pair ({0}, {1})")]
    NotIsomorphism(usize, usize),
    #[error("hom-algebra isomorphism identity fails on basis pair ({0}, {1})")]
    HomIsomorphismFails(usize, usize),
    #[error("untwisted series fails associativity at order {0}")]
    UntwistNotAssociative(usize),
    #[error("search space of {0} candidates is over budget")]
    SearchTooLarge(u128),
}
