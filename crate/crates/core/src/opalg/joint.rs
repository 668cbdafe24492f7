use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{commutator_norm, eig_hermitian, HermitianOperator, OpError, DEFAULT_COMMUTE_TOL};

/// Relative width of an eigenvalue cluster: `1e-8 · (1 + ‖A‖_max)`.
pub const CLUSTER_TOL: f64 = 1e-8;

/// One point of a joint spectrum together with its joint eigenspace.
#[derive(Debug, Clone)]
pub struct JointEigenspace {
    pub tuple: Vec<f64>,
    /// Orthonormal columns spanning the common eigenspace; its width is the multiplicity.
    pub basis: DMatrix<Complex64>,
}

impl JointEigenspace {
    pub fn multiplicity(&self) -> usize {
        self.basis.ncols()
    }
}

/// The joint spectrum of a commuting family: distinct tuples with multiplicities
/// summing to the ambient dimension.
#[derive(Debug, Clone)]
pub struct JointSpectrum {
    pub points: Vec<JointEigenspace>,
}

impl JointSpectrum {
    pub fn tuples(&self) -> Vec<Vec<f64>> {
        self.points.iter().map(|p| p.tuple.clone()).collect()
    }

    pub fn multiplicities(&self) -> Vec<usize> {
        self.points
            .iter()
            .map(JointEigenspace::multiplicity)
            .collect()
    }

    /// Whether some tuple matches `values` componentwise within `tol`.
    pub fn contains(&self, values: &[f64], tol: f64) -> bool {
        self.points.iter().any(|p| {
            p.tuple.len() == values.len()
                && p.tuple
                    .iter()
                    .zip(values)
                    .all(|(a, b)| (a - b).abs() <= tol)
        })
    }
}

/// Simultaneous diagonalization: split on the eigenspaces of the first operator,
/// compress the next operator to each block, and recurse.
pub fn joint_spectrum(family: &[HermitianOperator]) -> Result<JointSpectrum, OpError> {
    let first = family.first().ok_or(OpError::EmptyFamily)?;
    let dim = first.dim();
    for (i, a) in family.iter().enumerate() {
        if a.dim() != dim {
            return Err(OpError::DimensionMismatch {
                left: dim,
                right: a.dim(),
            });
        }
        for (j, b) in family.iter().enumerate().skip(i + 1) {
            let deviation = commutator_norm(a, b)?;
            if deviation > DEFAULT_COMMUTE_TOL * (a.norm_max() * b.norm_max()).max(1.0) {
                return Err(OpError::NonCommuting {
                    first: i,
                    second: j,
                    deviation,
                });
            }
        }
    }
    let mut points = Vec::new();
    refine(
        family,
        DMatrix::identity(dim, dim),
        &mut Vec::with_capacity(family.len()),
        &mut points,
    );
    Ok(JointSpectrum { points })
}

fn refine(
    family: &[HermitianOperator],
    basis: DMatrix<Complex64>,
    prefix: &mut Vec<f64>,
    out: &mut Vec<JointEigenspace>,
) {
    let level = prefix.len();
    if level == family.len() {
        out.push(JointEigenspace {
            tuple: prefix.clone(),
            basis,
        });
        return;
    }
    let op = &family[level];
    let compressed = HermitianOperator::symmetrized(basis.adjoint() * op.matrix() * &basis);
    let spec = eig_hermitian(&compressed);
    let tol = CLUSTER_TOL * (1.0 + op.norm_max());
    for (value, cols) in spec.clusters(tol) {
        let sub = DMatrix::from_fn(basis.ncols(), cols.len(), |r, c| {
            spec.eigenvectors[(r, cols[c])]
        });
        prefix.push(value);
        refine(family, &basis * sub, prefix, out);
        prefix.pop();
    }
}
