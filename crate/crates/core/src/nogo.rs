//! Finite witnesses for the expectation-representation no-go argument.
//!
//! The argument needs, for two rank-1 projections `A` and `B`, an operator `H`
//! with all four of `H`, `A − H`, `B − H`, `I − A − B + H` positive. For
//! distinct, non-orthogonal projections no such `H` exists: `H ⪯ A` and `H ⪯ B`
//! force `H = 0`, and then `I − A − B` has the negative eigenvalue `−|⟨a|b⟩|`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::opalg::{embed, max_abs, HermitianOperator, OpError, PSD_TOL};
use crate::random::{random_density, random_rank1_projection, random_unit_vector};

/// Overlaps within this distance of 0 or 1 count as orthogonal or equal.
pub const OVERLAP_TOL: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NogoError {
    #[error("{which} is not a rank-1 projection")]
    NotRankOneProjection { which: &'static str },
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("expected dimension 2, got {0}")]
    NotQubit(usize),
    #[error("A and B must be distinct projections")]
    IdenticalProjections,
    #[error("precondition violated: {which} has minimum eigenvalue {eigenvalue:e}")]
    NotPositive {
        which: &'static str,
        eigenvalue: f64,
    },
    #[error("sampled value {value} at index {index} is outside [0, 1]")]
    OutOfRange { index: usize, value: f64 },
    #[error("sampled functions have sizes {0} and {1}")]
    SizeMismatch(usize, usize),
    #[error("invalid mixture: {0}")]
    InvalidMixture(String),
    #[error("invalid dimensions: small {small}, large {large}")]
    InvalidDims { small: usize, large: usize },
    #[error(transparent)]
    Op(#[from] OpError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum FeasibilityStatus {
    Feasible,
    Infeasible,
}

/// Certificate of infeasibility: a unit vector on which `I − A − B` is negative.
#[derive(Debug, Clone, PartialEq)]
pub struct Obstruction {
    /// Eigenvector for the minimum eigenvalue of `I − A − B`, in the computational
    /// basis for qubits and in the basis `(a, b⊥)` of the span otherwise.
    pub vector: DVector<Complex64>,
    /// Minimum eigenvalue of `I − A − B`, equal to `−|⟨a|b⟩|`.
    pub value: f64,
    /// `⟨a|(I − A − B)|a⟩ = −|⟨a|b⟩|²`.
    pub diagonal_element: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Feasibility {
    pub status: FeasibilityStatus,
    pub overlap: f64,
    pub witness: Option<HermitianOperator>,
    pub obstruction: Option<Obstruction>,
}

/// Minimum eigenvalues of `H`, `A − H`, `B − H`, `I − A − B + H`.
pub fn subeffect_margins(
    a: &HermitianOperator,
    b: &HermitianOperator,
    h: &HermitianOperator,
) -> Result<[f64; 4], NogoError> {
    let id = HermitianOperator::identity(a.dim());
    Ok([
        h.min_eigenvalue(),
        a.sub(h)?.min_eigenvalue(),
        b.sub(h)?.min_eigenvalue(),
        id.sub(a)?.sub(b)?.add(h)?.min_eigenvalue(),
    ])
}

/// Unit vector spanning the range of a rank-1 projection.
fn direction(p: &HermitianOperator, which: &'static str) -> Result<DVector<Complex64>, NogoError> {
    if !p.is_projection(1e-10) || (p.trace() - 1.0).abs() > 1e-10 {
        return Err(NogoError::NotRankOneProjection { which });
    }
    let spec = p.eig();
    Ok(spec.eigenvectors.column(p.dim() - 1).into_owned())
}

/// Decides whether some `H` makes `H`, `A − H`, `B − H`, `I − A − B + H` all positive.
pub fn subeffect_feasible(
    a: &HermitianOperator,
    b: &HermitianOperator,
) -> Result<Feasibility, NogoError> {
    if a.dim() != b.dim() {
        return Err(NogoError::DimensionMismatch(a.dim(), b.dim()));
    }
    let va = direction(a, "A")?;
    let vb = direction(b, "B")?;
    let inner = va.dotc(&vb);
    let overlap = inner.norm();
    if overlap >= 1.0 - OVERLAP_TOL {
        return Ok(Feasibility {
            status: FeasibilityStatus::Feasible,
            overlap,
            witness: Some(a.clone()),
            obstruction: None,
        });
    }
    if overlap <= OVERLAP_TOL {
        return Ok(Feasibility {
            status: FeasibilityStatus::Feasible,
            overlap,
            witness: Some(HermitianOperator::zeros(a.dim())),
            obstruction: None,
        });
    }
    let rest = HermitianOperator::identity(a.dim()).sub(a)?.sub(b)?;
    let compressed = if a.dim() == 2 {
        rest
    } else {
        let perp = &vb - va.scale(1.0) * inner;
        let perp = perp.unscale(perp.norm());
        let q = DMatrix::from_columns(&[va.clone(), perp]);
        HermitianOperator::symmetrized(q.adjoint() * rest.matrix() * &q)
    };
    let spec = compressed.eig();
    let mut vector = spec.eigenvectors.column(0).into_owned();
    if let Some(pivot) = vector.iter().find(|z| z.norm() > 1e-12).copied() {
        let phase = pivot.conj() / pivot.norm();
        vector = vector.map(|z| z * phase);
    }
    Ok(Feasibility {
        status: FeasibilityStatus::Infeasible,
        overlap,
        witness: None,
        obstruction: Some(Obstruction {
            vector,
            value: spec.eigenvalues[0],
            diagonal_element: -overlap * overlap,
        }),
    })
}

/// Given `H`, `A − H`, `B − H` positive for distinct qubit projections, checks
/// that `H` vanishes.
pub fn forced_h_annihilation(
    a: &HermitianOperator,
    b: &HermitianOperator,
    h: &HermitianOperator,
) -> Result<bool, NogoError> {
    for op in [a, b, h] {
        if op.dim() != 2 {
            return Err(NogoError::NotQubit(op.dim()));
        }
    }
    let va = direction(a, "A")?;
    let vb = direction(b, "B")?;
    if va.dotc(&vb).norm() >= 1.0 - OVERLAP_TOL {
        return Err(NogoError::IdenticalProjections);
    }
    let checks: [(&'static str, HermitianOperator); 3] =
        [("H", h.clone()), ("A - H", a.sub(h)?), ("B - H", b.sub(h)?)];
    for (which, op) in checks {
        let eigenvalue = op.min_eigenvalue();
        if eigenvalue < -PSD_TOL {
            return Err(NogoError::NotPositive { which, eigenvalue });
        }
    }
    Ok(h.norm_max() <= 1e-9)
}

/// A function on a finite sample space with values in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction {
    values: Vec<f64>,
}

impl SampledFunction {
    pub fn new(values: Vec<f64>) -> Result<Self, NogoError> {
        if let Some((index, &value)) = values
            .iter()
            .enumerate()
            .find(|(_, v)| !(0.0..=1.0).contains(*v))
        {
            return Err(NogoError::OutOfRange { index, value });
        }
        Ok(Self { values })
    }

    pub fn domain_size(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

pub fn pointwise_min(
    f: &SampledFunction,
    g: &SampledFunction,
) -> Result<SampledFunction, NogoError> {
    if f.domain_size() != g.domain_size() {
        return Err(NogoError::SizeMismatch(f.domain_size(), g.domain_size()));
    }
    Ok(SampledFunction {
        values: f
            .values
            .iter()
            .zip(&g.values)
            .map(|(a, b)| a.min(*b))
            .collect(),
    })
}

/// All four of `h`, `f − h`, `g − h`, `1 − f − g + h` are nonnegative everywhere.
pub fn claim_conditions_hold(
    f: &SampledFunction,
    g: &SampledFunction,
    h: &SampledFunction,
) -> bool {
    f.values
        .iter()
        .zip(&g.values)
        .zip(&h.values)
        .all(|((&f, &g), &h)| h >= 0.0 && f - h >= 0.0 && g - h >= 0.0 && 1.0 - f - g + h >= 0.0)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransportReport {
    pub dim: usize,
    pub target: usize,
    pub trials: usize,
    pub seed: u64,
    pub passed: bool,
    /// Largest `|Tr(ρ̄Ē) − Tr(ρE)|` over the trials.
    pub max_abs_diff: f64,
    /// Largest max-abs gap between an embedded pure state and the projector of its padded vector.
    pub max_pure_state_gap: f64,
}

/// Embeds random density operators and rank-1 projections into a larger space
/// and checks that `Tr(ρE)` is unchanged.
pub fn representation_transport_check(
    dim_small: usize,
    dim_large: usize,
    trials: usize,
    seed: u64,
) -> Result<TransportReport, NogoError> {
    if dim_small < 1 || dim_small > dim_large {
        return Err(NogoError::InvalidDims {
            small: dim_small,
            large: dim_large,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_abs_diff: f64 = 0.0;
    let mut max_pure_state_gap: f64 = 0.0;
    for _ in 0..trials {
        let rho = random_density(dim_small, &mut rng);
        let e = random_rank1_projection(dim_small, &mut rng);
        let small = rho.trace_product(&e)?;
        let large = embed(&rho, dim_large)?.trace_product(&embed(&e, dim_large)?)?;
        max_abs_diff = max_abs_diff.max((small - large).abs());

        let psi = random_unit_vector(dim_small, &mut rng);
        let padded = psi
            .clone()
            .resize_vertically(dim_large, Complex64::new(0.0, 0.0));
        let gap = max_abs(
            &(embed(&HermitianOperator::projector(&psi), dim_large)?.matrix()
                - HermitianOperator::projector(&padded).matrix()),
        );
        max_pure_state_gap = max_pure_state_gap.max(gap);
    }
    Ok(TransportReport {
        dim: dim_small,
        target: dim_large,
        trials,
        seed,
        passed: max_abs_diff <= 1e-12 && max_pure_state_gap <= 1e-12,
        max_abs_diff,
        max_pure_state_gap,
    })
}

/// A convex combination of pure states `Σ wᵢ |ψᵢ⟩⟨ψᵢ|`.
pub type Mixture = [(f64, DVector<Complex64>)];

pub fn mixture_density(mix: &Mixture) -> Result<HermitianOperator, NogoError> {
    let (_, first) = mix
        .first()
        .ok_or_else(|| NogoError::InvalidMixture("empty decomposition".into()))?;
    let dim = first.len();
    let mut total = 0.0;
    let mut rho = HermitianOperator::zeros(dim);
    for (w, psi) in mix {
        if *w < 0.0 || !w.is_finite() {
            return Err(NogoError::InvalidMixture(format!("negative weight {w}")));
        }
        if psi.len() != dim {
            return Err(NogoError::DimensionMismatch(dim, psi.len()));
        }
        if (psi.norm() - 1.0).abs() > 1e-10 {
            return Err(NogoError::InvalidMixture(format!(
                "state has norm {}",
                psi.norm()
            )));
        }
        total += w;
        rho = rho.add(&HermitianOperator::projector(psi).scale(*w))?;
    }
    if (total - 1.0).abs() > 1e-12 {
        return Err(NogoError::InvalidMixture(format!("weights sum to {total}")));
    }
    Ok(rho)
}

/// Whether two pure-state decompositions describe the same density operator.
pub fn mixture_consistency_check(first: &Mixture, second: &Mixture) -> Result<bool, NogoError> {
    let a = mixture_density(first)?;
    let b = mixture_density(second)?;
    if a.dim() != b.dim() {
        return Err(NogoError::DimensionMismatch(a.dim(), b.dim()));
    }
    Ok(max_abs(&(a.matrix() - b.matrix())) <= 1e-10)
}
