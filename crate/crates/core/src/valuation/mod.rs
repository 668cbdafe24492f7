//! Valuations on finite sets of rank-1 projections.
//!
//! A valuation picks an eigenvalue (0 or 1) for every projection so that each
//! commuting subfamily lands on a point of its joint spectrum. For rank-1
//! projections, commuting distinct projections are orthogonal, so the commuting
//! subfamilies are the cliques of the orthogonality graph and it suffices to
//! constrain the maximal ones.

mod bootstrap;
mod catalog;
mod constraints;
mod family;
mod set;
mod solver;

pub use bootstrap::{bootstrap_dim_plus_one, tensor_lift};
pub use catalog::{catalog_names, ks_catalog};
pub use constraints::{
    build_constraints, build_constraints_via_spectrum, verify_valuation, CliqueConstraint,
};
pub use family::{find_family_valuation, FamilyResult};
pub use set::{ProjectionSet, Scalar, VectorSetJson, ORTHO_TOL, UNIT_TOL};
pub use solver::{count_valuations, find_valuation, SolveReport, SolveResult, SolveStatus};

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::opalg::OpError;
use crate::surd::SurdError;

#[derive(Debug, Error)]
pub enum ValuationError {
    #[error("invalid projection set: {0}")]
    InvalidSet(String),
    #[error("vector {index} has length {len}, expected {dim}")]
    WrongLength {
        index: usize,
        len: usize,
        dim: usize,
    },
    #[error("vector {index} has norm {norm}, expected 1")]
    NotUnit { index: usize, norm: f64 },
    #[error("vector {0} is zero")]
    ZeroVector(usize),
    #[error("vectors {first} and {second} are parallel")]
    Parallel { first: usize, second: usize },
    #[error("valuation has no value for index {0}")]
    MissingIndex(usize),
    #[error("bootstrap precondition violated: input admits a valuation {witness}")]
    PreconditionViolated { witness: Valuation },
    #[error("unknown catalog set {name:?}; available: {}", available.join(", "))]
    UnknownCatalog {
        name: String,
        available: Vec<String>,
    },
    #[error(transparent)]
    Surd(#[from] SurdError),
    #[error(transparent)]
    Op(#[from] OpError),
}

/// Assignment of 0/1 values to projection indices.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Valuation {
    pub assignment: BTreeMap<usize, u8>,
}

impl Valuation {
    pub fn from_values(values: &[u8]) -> Self {
        Self {
            assignment: values.iter().copied().enumerate().collect(),
        }
    }

    pub fn get(&self, index: usize) -> Option<u8> {
        self.assignment.get(&index).copied()
    }

    /// Values in index order.
    pub fn values(&self) -> Vec<u8> {
        self.assignment.values().copied().collect()
    }

    /// Values for indices `0..n`; fails on the first missing index.
    pub fn dense(&self, n: usize) -> Result<Vec<u8>, ValuationError> {
        (0..n)
            .map(|i| self.get(i).ok_or(ValuationError::MissingIndex(i)))
            .collect()
    }

    /// Re-indexes onto `indices`, so that position `k` takes the value of `indices[k]`.
    pub fn restrict(&self, indices: &[usize]) -> Result<Self, ValuationError> {
        let values = indices
            .iter()
            .map(|&i| self.get(i).ok_or(ValuationError::MissingIndex(i)))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::from_values(&values))
    }
}

impl std::fmt::Display for Valuation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{}",
            serde_json::to_string(self).map_err(|_| std::fmt::Error)?
        )
    }
}
