use std::collections::BTreeSet;

use super::{ProjectionSet, Valuation, ValuationError};
use crate::opalg::joint_spectrum;

/// One maximal clique of mutually orthogonal projections and the 0/1 tuples
/// its joint spectrum allows.
#[derive(Debug, Clone, PartialEq)]
pub struct CliqueConstraint {
    pub clique: Vec<usize>,
    pub allowed: BTreeSet<Vec<u8>>,
}

impl CliqueConstraint {
    /// A clique spanning the whole space must carry exactly one 1.
    pub fn is_complete(&self, dim: usize) -> bool {
        self.clique.len() == dim
    }
}

/// Fast path: mutually orthogonal rank-1 projections have joint spectrum
/// "exactly one 1" when they form a basis and "at most one 1" otherwise.
pub fn build_constraints(set: &ProjectionSet) -> Vec<CliqueConstraint> {
    set.maximal_cliques()
        .into_iter()
        .map(|clique| {
            let allowed = allowed_tuples(clique.len(), set.dim());
            CliqueConstraint { clique, allowed }
        })
        .collect()
}

pub(crate) fn allowed_tuples(k: usize, dim: usize) -> BTreeSet<Vec<u8>> {
    let mut allowed: BTreeSet<Vec<u8>> = (0..k)
        .map(|hot| (0..k).map(|i| u8::from(i == hot)).collect())
        .collect();
    if k < dim {
        allowed.insert(vec![0; k]);
    }
    allowed
}

/// Slow path: the same constraints read off the numerical joint spectrum of
/// each clique's projections.
pub fn build_constraints_via_spectrum(
    set: &ProjectionSet,
) -> Result<Vec<CliqueConstraint>, ValuationError> {
    set.maximal_cliques()
        .into_iter()
        .map(|clique| {
            let family: Vec<_> = clique.iter().map(|&i| set.projection(i)).collect();
            let spectrum = joint_spectrum(&family)?;
            let allowed = spectrum
                .points
                .iter()
                .map(|p| {
                    p.tuple
                        .iter()
                        .map(|&x| x.round().clamp(0.0, 1.0) as u8)
                        .collect()
                })
                .collect();
            Ok(CliqueConstraint { clique, allowed })
        })
        .collect()
}

/// Checks every maximal-clique constraint, re-deriving the constraints from the set.
pub fn verify_valuation(set: &ProjectionSet, v: &Valuation) -> Result<bool, ValuationError> {
    let values = v.dense(set.len())?;
    if values.iter().any(|&x| x > 1) {
        return Ok(false);
    }
    Ok(build_constraints(set).iter().all(|c| {
        let tuple: Vec<u8> = c.clique.iter().map(|&i| values[i]).collect();
        c.allowed.contains(&tuple)
    }))
}
