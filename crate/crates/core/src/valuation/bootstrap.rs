use nalgebra::DVector;
use num_complex::Complex64;

use super::{find_valuation, ProjectionSet, ValuationError};
use crate::opalg::{tensor_with_identity, HermitianOperator};

/// Raises a valuation-free set in dimension `d` to one in dimension `d + 1`.
///
/// Copy one: the set placed in `span(e₁..e_d)` plus `e_{d+1}`. Copy two: the set
/// shifted into `span(e₂..e_{d+1})` plus `e₁`. Any valuation of copy one must
/// send `e_{d+1}` to 1 and any valuation of copy two must send `e₁` to 1, which
/// the orthogonal pair `e₁, e_{d+1}` forbids. Vectors shared by both copies are
/// merged up to phase.
pub fn bootstrap_dim_plus_one(set: &ProjectionSet) -> Result<ProjectionSet, ValuationError> {
    let check = find_valuation(set);
    if let Some(witness) = check.witness {
        return Err(ValuationError::PreconditionViolated { witness });
    }
    let d = set.dim();
    let zero = Complex64::new(0.0, 0.0);
    let unit = |k: usize| {
        DVector::from_fn(d + 1, |i, _| {
            if i == k {
                Complex64::new(1.0, 0.0)
            } else {
                zero
            }
        })
    };

    let mut vectors = Vec::with_capacity(2 * set.len() + 2);
    vectors.extend(set.vectors().iter().map(|v| v.clone().insert_row(d, zero)));
    vectors.push(unit(d));
    vectors.extend(set.vectors().iter().map(|v| v.clone().insert_row(0, zero)));
    vectors.push(unit(0));
    ProjectionSet::merging_duplicates(format!("{}+1", set.name()), d + 1, vectors)
}

/// Lifts every projection `P` of the set to `P ⊗ I_env`.
pub fn tensor_lift(
    set: &ProjectionSet,
    env_dim: usize,
) -> Result<Vec<HermitianOperator>, ValuationError> {
    set.projections()
        .iter()
        .map(|p| Ok(tensor_with_identity(p, env_dim)?))
        .collect()
}
