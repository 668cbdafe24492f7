//! Random matrices and states for sweeps and property checks.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::opalg::HermitianOperator;

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-distributed unitary: QR of a complex Ginibre matrix with the phases of R's diagonal removed.
pub fn random_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DMatrix<Complex64> {
    let g = DMatrix::from_fn(dim, dim, |_, _| gaussian(rng));
    let qr = g.qr();
    let (mut q, r) = qr.unpack();
    for j in 0..dim {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        for i in 0..dim {
            q[(i, j)] *= phase;
        }
    }
    q
}

pub fn random_unit_vector<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DVector<Complex64> {
    let v = DVector::from_fn(dim, |_, _| gaussian(rng));
    let n = v.norm();
    v.unscale(n)
}

pub fn random_hermitian<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> HermitianOperator {
    let g = DMatrix::from_fn(dim, dim, |_, _| gaussian(rng));
    HermitianOperator::symmetrized(&g + g.adjoint())
}

/// `G G† / Tr(G G†)` for complex Ginibre `G`: a full-rank density operator.
pub fn random_density<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> HermitianOperator {
    let g = DMatrix::from_fn(dim, dim, |_, _| gaussian(rng));
    let m = &g * g.adjoint();
    let tr = m.trace().re;
    HermitianOperator::symmetrized(m.unscale(tr))
}

pub fn random_rank1_projection<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> HermitianOperator {
    HermitianOperator::projector(&random_unit_vector(dim, rng))
}
