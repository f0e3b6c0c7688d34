//! Enumeration, classification and verification of finite hom-associative
//! structures, plus truncated formal deformations of hom-associative algebras
//! over prime fields.
//!
//! A hom-associative structure is a set `A` with a binary operation `⋆` and a
//! self-map `α` such that `α(x) ⋆ (y ⋆ z) = (x ⋆ y) ⋆ α(z)` for all `x, y, z`.
//!
//! * [`structure`] and [`identities`] hold the finite representation and the
//!   pointwise identity checks.
//! * [`twist`] builds twists `x ⋆ y = α(x · y)` and searches for untwists.
//! * [`search`] enumerates structures with pruning and isomorphism filtering.
//! * [`harness`] sweeps the enumeration and checks the structure theorems.
//! * [`deform`] is the truncated power-series calculus over `F_p`.

use thiserror::Error;

pub mod deform;
pub mod harness;
pub mod identities;
pub mod par;
pub mod search;
pub mod structure;
pub mod twist;

pub use identities::{
    alpha_properties, check_context_associativity, check_helper_identities, degeneracy_report,
    is_hom_associative, opposite, AlphaProperties, DegeneracyReport, IdentityCheck, IdentityReport,
};
pub use structure::{FiniteHomStructure, Section, StructureError, Table};
pub use twist::{is_twist, sections, twist, untwist_via_section, UntwistResult};

/// Errors from operations on finite hom-structures.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HomError {
    #[error("expected length {expected}, found {found}")]
    SizeMismatch { expected: usize, found: usize },
    #[error("index out of range: alpha({x}) is not below {size}")]
    AlphaOutOfRange { x: usize, size: usize },
    #[error("not a section: alpha(beta({x})) != {x}")]
    InvalidSection { x: usize },
    #[error("structure is not hom-associative at ({0}, {1}, {2})")]
    NotHomAssociative(usize, usize, usize),
    #[error("multiplication is not associative at ({0}, {1}, {2})")]
    NotAssociative(usize, usize, usize),
    #[error("alpha violates the twisting compatibility relation at ({0}, {1}, {2})")]
    IncompatibleTwisting(usize, usize, usize),
    #[error("untwist search is limited to size {max}, got {size}")]
    TooLarge { size: usize, max: usize },
}
