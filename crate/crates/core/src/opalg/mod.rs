//! Dense Hermitian linear algebra on small complex matrices.
//!
//! Everything here works on [`HermitianOperator`], a square complex matrix
//! whose self-adjointness is checked once at construction. Tolerance checks
//! compare matrices by their max-abs entry norm.

mod joint;
mod poly;

pub use joint::{joint_spectrum, JointEigenspace, JointSpectrum, CLUSTER_TOL};
pub use poly::{poly_vanishing_check, Monomial, Polynomial, VanishingCheck};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Relative tolerance used by [`commutes`] when the caller has no opinion.
pub const DEFAULT_COMMUTE_TOL: f64 = 1e-10;

/// Allowed deviation from `a[i][j] == conj(a[j][i])`, scaled by `max(1, |A|_max)`.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Minimum-eigenvalue floor below which an operator is not considered positive.
pub const PSD_TOL: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OpError {
    #[error("operator must have dimension at least 1")]
    Empty,
    #[error("matrix is {rows}x{cols}, expected a square matrix")]
    NotSquare { rows: usize, cols: usize },
    #[error(
        "matrix is not Hermitian: entry ({row},{col}) deviates from its adjoint by {deviation:e}"
    )]
    NotHermitian {
        row: usize,
        col: usize,
        deviation: f64,
    },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("operators {first} and {second} do not commute (commutator max-abs {deviation:e})")]
    NonCommuting {
        first: usize,
        second: usize,
        deviation: f64,
    },
    #[error("cannot embed a dimension-{dim} operator into dimension {target}")]
    TargetTooSmall { dim: usize, target: usize },
    #[error("environment dimension must be at least 1, got {0}")]
    InvalidEnvDim(usize),
    #[error("operator family is empty")]
    EmptyFamily,
    #[error("polynomial has {got} variables but the family has {expected} operators")]
    ArityMismatch { expected: usize, got: usize },
    #[error("malformed operator JSON: {0}")]
    Json(String),
}

/// A self-adjoint operator on `C^dim`.
///
/// The stored matrix is exactly Hermitian: construction checks the input
/// against [`HERMITIAN_TOL`] and then replaces it with `(A + A†)/2`.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    mat: DMatrix<Complex64>,
}

impl HermitianOperator {
    pub fn new(mat: DMatrix<Complex64>) -> Result<Self, OpError> {
        let (rows, cols) = mat.shape();
        if rows != cols {
            return Err(OpError::NotSquare { rows, cols });
        }
        if rows == 0 {
            return Err(OpError::Empty);
        }
        let scale = max_abs(&mat).max(1.0);
        for i in 0..rows {
            for j in i..rows {
                let deviation = (mat[(i, j)] - mat[(j, i)].conj()).norm();
                if deviation > HERMITIAN_TOL * scale || !deviation.is_finite() {
                    return Err(OpError::NotHermitian {
                        row: i,
                        col: j,
                        deviation,
                    });
                }
            }
        }
        Ok(Self::symmetrized(mat))
    }

    /// Wraps a matrix already known to be Hermitian up to rounding.
    pub(crate) fn symmetrized(mat: DMatrix<Complex64>) -> Self {
        let adj = mat.adjoint();
        Self {
            mat: (mat + adj).scale(0.5),
        }
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self, OpError> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(OpError::NotSquare {
                rows: n,
                cols: rows.first().map_or(0, Vec::len),
            });
        }
        Self::new(DMatrix::from_fn(n, n, |i, j| {
            Complex64::new(rows[i][j], 0.0)
        }))
    }

    pub fn diagonal(values: &[f64]) -> Result<Self, OpError> {
        if values.is_empty() {
            return Err(OpError::Empty);
        }
        let n = values.len();
        Ok(Self {
            mat: DMatrix::from_fn(n, n, |i, j| {
                if i == j {
                    Complex64::new(values[i], 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            }),
        })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            mat: DMatrix::identity(dim, dim),
        }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            mat: DMatrix::zeros(dim, dim),
        }
    }

    /// `|v⟩⟨v|`. The vector is used as given; pass a unit vector to get a projection.
    pub fn projector(v: &DVector<Complex64>) -> Self {
        Self {
            mat: v * v.adjoint(),
        }
    }

    /// `U · diag(values) · U†`.
    pub fn conjugated_diagonal(unitary: &DMatrix<Complex64>, values: &[f64]) -> Self {
        let d = DMatrix::from_diagonal(&DVector::from_iterator(
            values.len(),
            values.iter().map(|&x| Complex64::new(x, 0.0)),
        ));
        Self::symmetrized(unitary * d * unitary.adjoint())
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.mat
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.mat
    }

    pub fn norm_max(&self) -> f64 {
        max_abs(&self.mat)
    }

    pub fn trace(&self) -> f64 {
        self.mat.trace().re
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            mat: self.mat.scale(s),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, OpError> {
        check_dims(self, other)?;
        Ok(Self {
            mat: &self.mat + &other.mat,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, OpError> {
        check_dims(self, other)?;
        Ok(Self {
            mat: &self.mat - &other.mat,
        })
    }

    /// Plain matrix product; not Hermitian in general.
    pub fn product(&self, other: &Self) -> Result<DMatrix<Complex64>, OpError> {
        check_dims(self, other)?;
        Ok(&self.mat * &other.mat)
    }

    /// `Tr(self · other)`, real for a pair of Hermitian operators.
    pub fn trace_product(&self, other: &Self) -> Result<f64, OpError> {
        check_dims(self, other)?;
        let n = self.dim();
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..n {
            for k in 0..n {
                acc += self.mat[(i, k)] * other.mat[(k, i)];
            }
        }
        Ok(acc.re)
    }

    /// `⟨ψ|A|ψ⟩`.
    pub fn expectation(&self, psi: &DVector<Complex64>) -> Result<f64, OpError> {
        if psi.len() != self.dim() {
            return Err(OpError::DimensionMismatch {
                left: self.dim(),
                right: psi.len(),
            });
        }
        Ok(psi.dotc(&(&self.mat * psi)).re)
    }

    pub fn eig(&self) -> Spectrum {
        eig_hermitian(self)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eig().eigenvalues[0]
    }

    pub fn is_psd(&self) -> bool {
        self.min_eigenvalue() >= -PSD_TOL
    }

    /// Number of eigenvalues with magnitude above `tol`.
    pub fn rank(&self, tol: f64) -> usize {
        self.eig()
            .eigenvalues
            .iter()
            .filter(|l| l.abs() > tol)
            .count()
    }

    /// `P² = P` within `tol` (max-abs).
    pub fn is_projection(&self, tol: f64) -> bool {
        max_abs(&(&self.mat * &self.mat - &self.mat)) <= tol
    }

    pub fn to_json(&self) -> OperatorJson {
        OperatorJson {
            dim: self.dim(),
            entries: (0..self.dim())
                .map(|i| {
                    (0..self.dim())
                        .map(|j| [self.mat[(i, j)].re, self.mat[(i, j)].im])
                        .collect()
                })
                .collect(),
        }
    }

    pub fn from_json(json: &OperatorJson) -> Result<Self, OpError> {
        let n = json.dim;
        if n == 0 {
            return Err(OpError::Empty);
        }
        if json.entries.len() != n || json.entries.iter().any(|r| r.len() != n) {
            return Err(OpError::Json(format!(
                "entries must be a {n}x{n} array of [re, im] pairs"
            )));
        }
        Self::new(DMatrix::from_fn(n, n, |i, j| {
            let [re, im] = json.entries[i][j];
            Complex64::new(re, im)
        }))
    }
}

/// Exchange format: `{"dim": n, "entries": [[[re, im], ...], ...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorJson {
    pub dim: usize,
    pub entries: Vec<Vec<[f64; 2]>>,
}

impl Serialize for HermitianOperator {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for HermitianOperator {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let json = OperatorJson::deserialize(d)?;
        Self::from_json(&json).map_err(serde::de::Error::custom)
    }
}

/// Eigen-decomposition with eigenvalues in ascending order.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    /// Orthonormal eigenvectors as columns, matching `eigenvalues`.
    pub eigenvectors: DMatrix<Complex64>,
}

impl Spectrum {
    pub fn reconstruct(&self) -> DMatrix<Complex64> {
        let d = DMatrix::from_diagonal(&DVector::from_iterator(
            self.eigenvalues.len(),
            self.eigenvalues.iter().map(|&x| Complex64::new(x, 0.0)),
        ));
        &self.eigenvectors * d * self.eigenvectors.adjoint()
    }

    /// Groups ascending eigenvalues into runs whose neighbours lie within `tol`.
    /// Returns `(representative value, column indices)` per cluster.
    pub fn clusters(&self, tol: f64) -> Vec<(f64, Vec<usize>)> {
        let mut out: Vec<(f64, Vec<usize>)> = Vec::new();
        for (i, &lambda) in self.eigenvalues.iter().enumerate() {
            match out.last_mut() {
                Some((_, idx)) if lambda - self.eigenvalues[*idx.last().unwrap()] <= tol => {
                    idx.push(i)
                }
                _ => out.push((lambda, vec![i])),
            }
        }
        for (value, idx) in &mut out {
            *value = idx.iter().map(|&i| self.eigenvalues[i]).sum::<f64>() / idx.len() as f64;
        }
        out
    }
}

pub fn eig_hermitian(a: &HermitianOperator) -> Spectrum {
    let eig = a.mat.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..a.dim()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let eigenvalues = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let eigenvectors = DMatrix::from_fn(a.dim(), a.dim(), |r, c| eig.eigenvectors[(r, order[c])]);
    Spectrum {
        eigenvalues,
        eigenvectors,
    }
}

/// `‖AB − BA‖_max ≤ tol · max(1, ‖A‖_max · ‖B‖_max)`.
pub fn commutes(a: &HermitianOperator, b: &HermitianOperator, tol: f64) -> Result<bool, OpError> {
    Ok(commutator_norm(a, b)? <= tol * (a.norm_max() * b.norm_max()).max(1.0))
}

pub(crate) fn commutator_norm(
    a: &HermitianOperator,
    b: &HermitianOperator,
) -> Result<f64, OpError> {
    check_dims(a, b)?;
    Ok(max_abs(&(&a.mat * &b.mat - &b.mat * &a.mat)))
}

/// Positive and negative parts with orthogonal supports: `A = positive − negative`.
#[derive(Debug, Clone)]
pub struct JordanPair {
    pub positive: HermitianOperator,
    pub negative: HermitianOperator,
}

impl JordanPair {
    /// `Tr(A₊) + Tr(A₋)`.
    pub fn trace_norm(&self) -> f64 {
        self.positive.trace() + self.negative.trace()
    }
}

pub fn jordan_decompose(a: &HermitianOperator) -> JordanPair {
    let spec = a.eig();
    let n = a.dim();
    let mut pos = DMatrix::<Complex64>::zeros(n, n);
    let mut neg = DMatrix::<Complex64>::zeros(n, n);
    for (k, &lambda) in spec.eigenvalues.iter().enumerate() {
        let v = spec.eigenvectors.column(k);
        let proj = v * v.adjoint();
        if lambda >= 0.0 {
            pos += proj.scale(lambda);
        } else {
            neg += proj.scale(-lambda);
        }
    }
    JordanPair {
        positive: HermitianOperator::symmetrized(pos),
        negative: HermitianOperator::symmetrized(neg),
    }
}

/// Zero-padded block embedding `C^dim → C^target` (top-left block).
pub fn embed(a: &HermitianOperator, target: usize) -> Result<HermitianOperator, OpError> {
    let n = a.dim();
    if target < n {
        return Err(OpError::TargetTooSmall { dim: n, target });
    }
    let mut mat = DMatrix::<Complex64>::zeros(target, target);
    mat.view_mut((0, 0), (n, n)).copy_from(&a.mat);
    Ok(HermitianOperator { mat })
}

/// Kronecker product `P ⊗ I_env`.
pub fn tensor_with_identity(
    p: &HermitianOperator,
    env_dim: usize,
) -> Result<HermitianOperator, OpError> {
    if env_dim < 1 {
        return Err(OpError::InvalidEnvDim(env_dim));
    }
    let id = DMatrix::<Complex64>::identity(env_dim, env_dim);
    Ok(HermitianOperator {
        mat: p.mat.kronecker(&id),
    })
}

pub fn max_abs(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn check_dims(a: &HermitianOperator, b: &HermitianOperator) -> Result<(), OpError> {
    if a.dim() != b.dim() {
        return Err(OpError::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    Ok(())
}

/// The three Pauli matrices, in x, y, z order.
pub fn pauli() -> [HermitianOperator; 3] {
    let c = |re: f64, im: f64| Complex64::new(re, im);
    [
        HermitianOperator {
            mat: DMatrix::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)]),
        },
        HermitianOperator {
            mat: DMatrix::from_row_slice(2, 2, &[c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)]),
        },
        HermitianOperator {
            mat: DMatrix::from_row_slice(2, 2, &[c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)]),
        },
    ]
}
