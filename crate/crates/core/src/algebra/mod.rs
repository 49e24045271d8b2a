//! Exact arithmetic in free graded-commutative algebras and their
//! quotients by homogeneous relations.

mod field;
mod poly;
mod presentation;
mod text;

use thiserror::Error;

pub(crate) use field::is_prime;
pub use field::{format_scalar, parse_scalar, FieldKind, FieldSpec, Scalar};
pub use poly::{is_decomposable, Algebra, Generator, Monomial, Parity, Poly};
pub use presentation::{
    complete_intersection_series, hilbert_function, is_complete_intersection, quadratic_terms, Presentation,
    QuadraticTerm, Relation, RelationBody,
};
pub use text::{format_monomial, format_poly, parse_poly, PRESENTATION_HEADER};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("characteristic {0} is neither 0 nor a prime")]
    InvalidCharacteristic(u32),
    #[error("coefficient {value} is undefined in characteristic {characteristic}")]
    UndefinedCoefficient { value: String, characteristic: u32 },
    #[error("generator table mismatch: expected {expected} generators, got {found}")]
    TableMismatch { expected: usize, found: usize },
    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("invalid generator `{name}`: {reason}")]
    InvalidGenerator { name: String, reason: String },
    #[error("invalid monomial: {0}")]
    InvalidMonomial(String),
    #[error("invalid relation {index}: {reason}")]
    InvalidRelation { index: usize, reason: String },
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("relation {0} is partial; an explicit body is required")]
    PartialRelation(usize),
    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),
    #[error("parse error (line {line}): {message}")]
    Parse { line: usize, message: String },
}
