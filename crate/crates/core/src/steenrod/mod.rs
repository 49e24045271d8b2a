//! Steenrod squares and odd-primary powers on characteristic classes by the
//! splitting principle, stable operations on suspensions, and the
//! six-condition Whitehead-product criterion.

mod classes;
mod criterion;
mod suspension;
mod torus;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::algebra::AlgebraError;

pub use classes::{char_class_operation, CharClass, Group, TorusModel};
pub use criterion::{
    check_steenrod_criterion, ActionEntry, ActionProvenance, OperationAction, SourceMap, SpaceCohomology,
    SteenrodCriterionInstance,
};
pub use suspension::{evaluate_on_suspension, SuspensionBase, SuspensionClass, SuspensionModel};
pub use torus::{
    check_symmetric, express_symmetric, operation_component, total_operation_on_torus, ElementaryPoly, TorusPoly,
};

/// A single Steenrod square `Sq^k` or reduced power `P^k` at an odd prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Operation {
    Sq(u32),
    P { k: u32, prime: u32 },
}

impl Operation {
    pub fn prime(&self) -> u32 {
        match *self {
            Operation::Sq(_) => 2,
            Operation::P { prime, .. } => prime,
        }
    }

    pub fn index(&self) -> u32 {
        match *self {
            Operation::Sq(k) | Operation::P { k, .. } => k,
        }
    }

    /// Degree raised by the operation.
    pub fn shift(&self) -> u32 {
        match *self {
            Operation::Sq(k) => k,
            Operation::P { k, prime } => 2 * k * (prime - 1),
        }
    }

    /// The same family with another index.
    pub fn with_index(&self, k: u32) -> Operation {
        match *self {
            Operation::Sq(_) => Operation::Sq(k),
            Operation::P { prime, .. } => Operation::P { k, prime },
        }
    }

    /// Parses `sq<k>` or `p<k>`; the prime applies to reduced powers.
    pub fn parse(s: &str, prime: u32) -> Result<Operation, SteenrodError> {
        let lower = s.to_ascii_lowercase();
        let bad = || SteenrodError::Contract(format!("unrecognized operation `{s}`; expected sq<k> or p<k>"));
        if let Some(k) = lower.strip_prefix("sq") {
            if prime != 2 {
                return Err(SteenrodError::Contract(format!("Sq needs prime 2, got {prime}")));
            }
            return Ok(Operation::Sq(u32::from_str(k).map_err(|_| bad())?));
        }
        if let Some(k) = lower.strip_prefix('p') {
            if prime == 2 || !crate::algebra::is_prime(prime) {
                return Err(SteenrodError::Contract(format!("P needs an odd prime, got {prime}")));
            }
            return Ok(Operation::P { k: u32::from_str(k).map_err(|_| bad())?, prime });
        }
        Err(bad())
    }
}

impl fmt::Display for Operation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Operation::Sq(k) => write!(f, "Sq^{k}"),
            Operation::P { k, .. } => write!(f, "P^{k}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SteenrodError {
    #[error("contract violation: {0}")]
    Contract(String),
    #[error("polynomial is not symmetric: swapping t{i} and t{j} changes it")]
    NotSymmetric { i: usize, j: usize },
    #[error("unknown class `{class}` in {model}")]
    UnknownClass { class: String, model: String },
    #[error("{op} on {class} in {model} is not recorded")]
    Unrecorded { model: String, class: String, op: String },
    #[error("data incomplete: {0}")]
    DataIncomplete(String),
    #[error("inconsistent instance: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}
