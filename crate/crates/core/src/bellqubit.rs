//! Spin-½ hidden-variable model on the Bloch sphere.
//!
//! A qubit observable is `a₀I + a·σ`; a pure state is the `+1` eigenvector
//! `|n⟩` of `n·σ`. The hidden variable is a point `m` drawn uniformly from the
//! unit sphere, and the value assigned to the observable is
//! `a₀ + ‖a‖` when `(m + n)·a ≥ 0` and `a₀ − ‖a‖` otherwise.
//!
//! Monte Carlo runs split the samples into fixed-size chunks, each drawn from
//! its own ChaCha stream of the caller's seed, so the result does not depend on
//! how many worker threads process the chunks.

use nalgebra::DVector;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::opalg::{joint_spectrum, pauli, HermitianOperator, OpError};

/// Unit-norm tolerance for Bloch vectors.
pub const BLOCH_TOL: f64 = 1e-12;

/// Samples per random stream.
pub const CHUNK: usize = 1 << 16;

const STREAM_EXPECT: u64 = 0;
const STREAM_SPHERE: u64 = 1 << 40;
const STREAM_X_MIXTURE: u64 = 2 << 40;
const STREAM_Z_MIXTURE: u64 = 3 << 40;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BellError {
    #[error("expected a 2x2 operator, got dimension {0}")]
    NotQubit(usize),
    #[error("Bloch vector has norm {0}, expected 1")]
    NotUnit(f64),
    #[error("cannot normalize a zero or non-finite vector")]
    ZeroVector,
    #[error("observable has a = 0; the + branch probability is undefined")]
    ZeroAxis,
    #[error("sample count must be at least 1")]
    NoSamples,
    #[error("observables do not commute: |a x b| = {0:e}")]
    NonCommuting(f64),
    #[error(transparent)]
    Op(#[from] OpError),
}

/// `a₀I + a·σ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PauliObservable {
    pub a0: f64,
    pub a: [f64; 3],
}

impl PauliObservable {
    pub fn new(a0: f64, a: [f64; 3]) -> Self {
        Self { a0, a }
    }

    pub fn axis_norm(&self) -> f64 {
        norm(self.a)
    }

    /// `(a₀ − ‖a‖, a₀ + ‖a‖)`.
    pub fn eigenvalues(&self) -> (f64, f64) {
        let r = self.axis_norm();
        (self.a0 - r, self.a0 + r)
    }

    pub fn matrix(&self) -> HermitianOperator {
        let [x, y, z] = pauli();
        HermitianOperator::identity(2)
            .scale(self.a0)
            .add(&x.scale(self.a[0]))
            .and_then(|m| m.add(&y.scale(self.a[1])))
            .and_then(|m| m.add(&z.scale(self.a[2])))
            .expect("all operands are 2x2")
    }

    /// The quantum expectation `⟨n|A|n⟩ = a₀ + a·n`.
    pub fn expectation(&self, n: &BlochVector) -> f64 {
        self.a0 + dot(self.a, n.0)
    }
}

/// Unit vector in ℝ³ labelling the pure state `|n⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BlochVector([f64; 3]);

impl BlochVector {
    pub fn new(n: [f64; 3]) -> Result<Self, BellError> {
        let r = norm(n);
        if (r - 1.0).abs() > BLOCH_TOL || !r.is_finite() {
            return Err(BellError::NotUnit(r));
        }
        Ok(Self(n))
    }

    /// Scales to unit length; also returns the original norm.
    pub fn normalized(n: [f64; 3]) -> Result<(Self, f64), BellError> {
        let r = norm(n);
        if r == 0.0 || !r.is_finite() {
            return Err(BellError::ZeroVector);
        }
        Ok((Self(n.map(|x| x / r)), r))
    }

    pub fn x() -> Self {
        Self([1.0, 0.0, 0.0])
    }

    pub fn z() -> Self {
        Self([0.0, 0.0, 1.0])
    }

    pub fn components(&self) -> [f64; 3] {
        self.0
    }

    pub fn neg(&self) -> Self {
        Self(self.0.map(|x| -x))
    }
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn norm(a: [f64; 3]) -> f64 {
    dot(a, a).sqrt()
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// `a₀ = Tr(A)/2`, `aᵢ = Tr(A σᵢ)/2`.
pub fn pauli_decompose(a: &HermitianOperator) -> Result<PauliObservable, BellError> {
    if a.dim() != 2 {
        return Err(BellError::NotQubit(a.dim()));
    }
    let [x, y, z] = pauli();
    Ok(PauliObservable {
        a0: a.trace() / 2.0,
        a: [
            a.trace_product(&x)? / 2.0,
            a.trace_product(&y)? / 2.0,
            a.trace_product(&z)? / 2.0,
        ],
    })
}

/// `|n⟩ = (cos θ/2, e^{iφ} sin θ/2)`, with the first nonzero entry real and positive.
pub fn eigenstate_plus(n: &BlochVector) -> DVector<Complex64> {
    let [nx, ny, nz] = n.0;
    let c = ((1.0 + nz) / 2.0).max(0.0).sqrt();
    if c == 0.0 {
        return DVector::from_vec(vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)]);
    }
    DVector::from_vec(vec![
        Complex64::new(c, 0.0),
        Complex64::new(nx, ny) / (2.0 * c),
    ])
}

/// Whether the hidden variable `m` selects the upper eigenvalue; ties go up.
pub fn plus_branch(n: &BlochVector, m: &BlochVector, a: &PauliObservable) -> bool {
    let s = [n.0[0] + m.0[0], n.0[1] + m.0[1], n.0[2] + m.0[2]];
    dot(s, a.a) >= 0.0
}

pub fn value_map(n: &BlochVector, m: &BlochVector, a: &PauliObservable) -> f64 {
    let (lo, hi) = a.eigenvalues();
    if plus_branch(n, m, a) {
        hi
    } else {
        lo
    }
}

/// Direction of three independent standard normals.
pub fn sample_unit_sphere<R: Rng + ?Sized>(rng: &mut R) -> BlochVector {
    loop {
        let v: [f64; 3] = [
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
        ];
        if let Ok((b, _)) = BlochVector::normalized(v) {
            return b;
        }
    }
}

/// Probability `(1 + n·â)/2` of the upper branch.
pub fn closed_form_plus_probability(
    n: &BlochVector,
    a: &PauliObservable,
) -> Result<f64, BellError> {
    let r = a.axis_norm();
    if r == 0.0 {
        return Err(BellError::ZeroAxis);
    }
    Ok((1.0 + dot(n.0, a.a) / r) / 2.0)
}

/// Monte Carlo estimate of the average assigned value.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimReport {
    pub estimate: f64,
    pub reference: f64,
    #[serde(rename = "n")]
    pub samples: u64,
    pub seed: u64,
    pub std_error: f64,
    /// Number of samples on the upper branch.
    #[serde(skip)]
    pub plus_count: u64,
}

impl SimReport {
    pub fn plus_fraction(&self) -> f64 {
        self.plus_count as f64 / self.samples as f64
    }
}

fn stream(seed: u64, id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

/// `(chunk index, chunk length)` pairs covering `samples`.
fn chunks(samples: usize) -> impl IndexedParallelIterator<Item = (u64, usize)> {
    let count = samples.div_ceil(CHUNK);
    (0..count)
        .into_par_iter()
        .map(move |c| (c as u64, CHUNK.min(samples - c * CHUNK)))
}

pub fn simulate_expectation(
    n: &BlochVector,
    a: &PauliObservable,
    samples: usize,
    seed: u64,
) -> Result<SimReport, BellError> {
    if samples < 1 {
        return Err(BellError::NoSamples);
    }
    let per_chunk: Vec<u64> = chunks(samples)
        .map(|(c, len)| {
            let mut rng = stream(seed, STREAM_EXPECT + c);
            (0..len)
                .filter(|_| plus_branch(n, &sample_unit_sphere(&mut rng), a))
                .count() as u64
        })
        .collect();
    let plus: u64 = per_chunk.iter().sum();
    let total = samples as f64;
    let (lo, hi) = a.eigenvalues();
    let p = plus as f64 / total;
    let estimate = (plus as f64 * hi + (samples as u64 - plus) as f64 * lo) / total;
    let variance = if samples > 1 {
        (hi - lo).powi(2) * p * (1.0 - p) * total / (total - 1.0)
    } else {
        0.0
    };
    Ok(SimReport {
        estimate,
        reference: a.expectation(n),
        samples: samples as u64,
        seed,
        std_error: (variance / total).sqrt(),
        plus_count: plus,
    })
}

/// `count` seeded uniform points on the sphere, reproducible for a given seed.
pub fn sample_sphere_points(count: usize, seed: u64) -> Vec<BlochVector> {
    chunks(count)
        .flat_map_iter(|(c, len)| {
            let mut rng = stream(seed, STREAM_SPHERE + c);
            (0..len)
                .map(move |_| sample_unit_sphere(&mut rng))
                .collect::<Vec<_>>()
        })
        .collect()
}

/// Kolmogorov–Smirnov distance between the sample and the uniform law on `[lo, hi]`.
pub fn ks_uniform_statistic(samples: &[f64], lo: f64, hi: f64) -> f64 {
    let mut xs = samples.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    xs.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = ((x - lo) / (hi - lo)).clamp(0.0, 1.0);
            (f - i as f64 / n).max((i + 1) as f64 / n - f)
        })
        .fold(0.0, f64::max)
}

/// Checks that `(V(A), V(B))` lies in the joint spectrum of a commuting pair.
pub fn commuting_tuple_check(
    n: &BlochVector,
    m: &BlochVector,
    a: &PauliObservable,
    b: &PauliObservable,
) -> Result<bool, BellError> {
    let c = norm(cross(a.a, b.a));
    if c > 1e-10 * (a.axis_norm() * b.axis_norm()).max(1.0) {
        return Err(BellError::NonCommuting(c));
    }
    let spectrum = joint_spectrum(&[a.matrix(), b.matrix()])?;
    let tuple = [value_map(n, m, a), value_map(n, m, b)];
    let scale = 1.0 + a.a0.abs() + a.axis_norm() + b.a0.abs() + b.axis_norm();
    Ok(spectrum.contains(&tuple, 1e-8 * scale))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvexityReport {
    pub mean_abs_vx_x_mixture: f64,
    pub mean_abs_vx_z_mixture: f64,
    /// Fraction of x-mixture samples with `|‖v‖² − 2|v_x|| > 1e-9`.
    pub support_violation_x: f64,
    pub samples: u64,
    pub seed: u64,
}

/// Draws `v = m + n` with `n` uniform on `{±x̂}` and, separately, on `{±ẑ}`.
pub fn convexity_failure_demo(samples: usize, seed: u64) -> Result<ConvexityReport, BellError> {
    if samples < 1 {
        return Err(BellError::NoSamples);
    }
    let run = |base: u64, axis: BlochVector| -> Vec<(f64, u64)> {
        chunks(samples)
            .map(|(c, len)| {
                let mut rng = stream(seed, base + c);
                let mut sum = 0.0;
                let mut violations = 0;
                for _ in 0..len {
                    let m = sample_unit_sphere(&mut rng);
                    let n = if rng.random::<bool>() {
                        axis
                    } else {
                        axis.neg()
                    };
                    let v = [m.0[0] + n.0[0], m.0[1] + n.0[1], m.0[2] + n.0[2]];
                    sum += v[0].abs();
                    if (dot(v, v) - 2.0 * v[0].abs()).abs() > 1e-9 {
                        violations += 1;
                    }
                }
                (sum, violations)
            })
            .collect()
    };
    let x = run(STREAM_X_MIXTURE, BlochVector::x());
    let z = run(STREAM_Z_MIXTURE, BlochVector::z());
    let total = samples as f64;
    Ok(ConvexityReport {
        mean_abs_vx_x_mixture: x.iter().map(|c| c.0).sum::<f64>() / total,
        mean_abs_vx_z_mixture: z.iter().map(|c| c.0).sum::<f64>() / total,
        support_violation_x: x.iter().map(|c| c.1).sum::<u64>() as f64 / total,
        samples: samples as u64,
        seed,
    })
}

/// `⟨ψ|E|ψ⟩`: the pure state itself serves as the hidden variable.
pub fn trivial_pure_state_model(
    e: &HermitianOperator,
    psi: &DVector<Complex64>,
) -> Result<f64, BellError> {
    Ok(e.expectation(psi)?)
}

/// `(I + n·σ)/2`.
pub fn bloch_density(n: &BlochVector) -> HermitianOperator {
    PauliObservable::new(0.5, n.0.map(|x| x / 2.0)).matrix()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opalg::max_abs;
    use rand::SeedableRng;

    const S: f64 = std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn decompositions() {
        let [_, _, z] = pauli();
        assert_eq!(
            pauli_decompose(&z).unwrap(),
            PauliObservable::new(0.0, [0.0, 0.0, 1.0])
        );
        assert_eq!(
            pauli_decompose(&HermitianOperator::identity(2)).unwrap(),
            PauliObservable::new(1.0, [0.0; 3])
        );
        let ket0 = HermitianOperator::diagonal(&[1.0, 0.0]).unwrap();
        assert_eq!(
            pauli_decompose(&ket0).unwrap(),
            PauliObservable::new(0.5, [0.0, 0.0, 0.5])
        );
        assert_eq!(
            pauli_decompose(&HermitianOperator::identity(3)),
            Err(BellError::NotQubit(3))
        );
    }

    #[test]
    fn decomposition_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let a = crate::random::random_hermitian(2, &mut rng);
            let back = pauli_decompose(&a).unwrap().matrix();
            assert!(max_abs(&(back.matrix() - a.matrix())) <= 1e-12);
        }
    }

    #[test]
    fn eigenstates() {
        let z = eigenstate_plus(&BlochVector::z());
        assert_eq!(z[0], Complex64::new(1.0, 0.0));
        assert_eq!(z[1], Complex64::new(0.0, 0.0));
        let x = eigenstate_plus(&BlochVector::x());
        assert!((x[0].re - S).abs() < 1e-15 && (x[1].re - S).abs() < 1e-15);
        let down = eigenstate_plus(&BlochVector::z().neg());
        assert_eq!(down[1], Complex64::new(1.0, 0.0));

        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..200 {
            let n = sample_unit_sphere(&mut rng);
            let psi = eigenstate_plus(&n);
            let ns = PauliObservable::new(0.0, n.components()).matrix();
            assert!((ns.matrix() * &psi - &psi).norm() <= 1e-10);
            assert!(psi[0].im == 0.0 && psi[0].re >= 0.0);
            let a = PauliObservable::new(
                rng.random_range(-2.0..2.0),
                sample_unit_sphere(&mut rng).components().map(|x| 1.5 * x),
            );
            let lhs = a.matrix().expectation(&psi).unwrap();
            assert!((lhs - a.expectation(&n)).abs() < 1e-12);
        }
    }

    #[test]
    fn value_map_cases() {
        let z = PauliObservable::new(0.0, [0.0, 0.0, 1.0]);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..1000 {
            let m = sample_unit_sphere(&mut rng);
            assert_eq!(value_map(&BlochVector::z(), &m, &z), 1.0);
            let flat = PauliObservable::new(2.5, [0.0; 3]);
            assert_eq!(value_map(&m, &BlochVector::x(), &flat), 2.5);
        }
        // (m + n)·a = 0 exactly: n = x̂, m = −x̂
        assert_eq!(
            value_map(&BlochVector::x(), &BlochVector::x().neg(), &z),
            1.0
        );
        let x = PauliObservable::new(0.0, [1.0, 0.0, 0.0]);
        assert_eq!(
            value_map(&BlochVector::x(), &BlochVector::x().neg(), &x),
            1.0
        );
    }

    #[test]
    fn closed_form_cases() {
        let z = PauliObservable::new(0.0, [0.0, 0.0, 1.0]);
        assert_eq!(
            closed_form_plus_probability(&BlochVector::z(), &z).unwrap(),
            1.0
        );
        assert_eq!(
            closed_form_plus_probability(&BlochVector::x(), &z).unwrap(),
            0.5
        );
        assert_eq!(
            closed_form_plus_probability(&BlochVector::z().neg(), &z).unwrap(),
            0.0
        );
        assert_eq!(
            closed_form_plus_probability(&BlochVector::z(), &PauliObservable::new(1.0, [0.0; 3])),
            Err(BellError::ZeroAxis)
        );
    }

    #[test]
    fn simulate_exact_cases() {
        let z = PauliObservable::new(0.0, [0.0, 0.0, 1.0]);
        for (samples, seed) in [(1, 0), (17, 3), (100_000, 42)] {
            let r = simulate_expectation(&BlochVector::z(), &z, samples, seed).unwrap();
            assert_eq!(r.estimate, 1.0);
            assert_eq!(r.std_error, 0.0);
        }
        let three = PauliObservable::new(3.0, [0.0; 3]);
        let r = simulate_expectation(&BlochVector::x(), &three, 1000, 9).unwrap();
        assert_eq!(r.estimate, 3.0);
        assert_eq!(
            simulate_expectation(&BlochVector::x(), &z, 0, 1),
            Err(BellError::NoSamples)
        );
    }

    #[test]
    fn simulate_is_deterministic_per_seed() {
        let a = PauliObservable::new(0.3, [0.2, -0.7, 0.4]);
        let n = BlochVector::normalized([1.0, 2.0, -0.5]).unwrap().0;
        let r1 = simulate_expectation(&n, &a, 200_000, 77).unwrap();
        let r2 = simulate_expectation(&n, &a, 200_000, 77).unwrap();
        assert_eq!(r1, r2);
        let r3 = simulate_expectation(&n, &a, 200_000, 78).unwrap();
        assert_ne!(r1.estimate, r3.estimate);
    }

    #[test]
    fn bloch_unit_checks() {
        assert!(matches!(
            BlochVector::new([1.0, 1.0, 0.0]),
            Err(BellError::NotUnit(_))
        ));
        assert_eq!(
            BlochVector::normalized([0.0; 3]),
            Err(BellError::ZeroVector)
        );
        let (b, r) = BlochVector::normalized([0.0, 3.0, 4.0]).unwrap();
        assert_eq!(r, 5.0);
        assert_eq!(b.components(), [0.0, 0.6, 0.8]);
    }

    #[test]
    fn commuting_tuples() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let a = PauliObservable::new(0.5, [0.3, -0.4, 1.2]);
        let b = PauliObservable::new(-1.0, a.a.map(|x| -2.0 * x));
        for _ in 0..100 {
            let n = sample_unit_sphere(&mut rng);
            let m = sample_unit_sphere(&mut rng);
            assert!(commuting_tuple_check(&n, &m, &a, &a).unwrap());
            assert!(commuting_tuple_check(&n, &m, &a, &b).unwrap());
            let va = value_map(&n, &m, &a);
            let vb = value_map(&n, &m, &b);
            // antiparallel axes pick opposite branches unless the tie rule fires
            assert_eq!(va == a.eigenvalues().1, vb == b.eigenvalues().0);
        }
        let x = PauliObservable::new(0.0, [1.0, 0.0, 0.0]);
        let z = PauliObservable::new(0.0, [0.0, 0.0, 1.0]);
        assert!(matches!(
            commuting_tuple_check(&BlochVector::z(), &BlochVector::z(), &x, &z),
            Err(BellError::NonCommuting(_))
        ));
    }

    #[test]
    fn convexity_demo_small() {
        let r = convexity_failure_demo(50_000, 4).unwrap();
        assert_eq!(r.support_violation_x, 0.0);
        assert!((r.mean_abs_vx_x_mixture - 1.0).abs() < 0.02);
        assert!((r.mean_abs_vx_z_mixture - 0.5).abs() < 0.02);
        assert_eq!(convexity_failure_demo(0, 4), Err(BellError::NoSamples));
    }

    #[test]
    fn ks_statistic_sanity() {
        let grid: Vec<f64> = (0..1000)
            .map(|i| -1.0 + (2 * i + 1) as f64 / 1000.0)
            .collect();
        assert!(ks_uniform_statistic(&grid, -1.0, 1.0) <= 0.0005 + 1e-12);
        let skewed: Vec<f64> = grid.iter().map(|x| x.abs()).collect();
        assert!(ks_uniform_statistic(&skewed, -1.0, 1.0) > 0.4);
    }

    #[test]
    fn pure_state_model() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let psi = crate::random::random_unit_vector(3, &mut rng);
        assert!(
            (trivial_pure_state_model(&HermitianOperator::identity(3), &psi).unwrap() - 1.0).abs()
                < 1e-15
        );
        let p = HermitianOperator::projector(&psi);
        assert!((trivial_pure_state_model(&p, &psi).unwrap() - 1.0).abs() < 1e-15);
        assert!(trivial_pure_state_model(&HermitianOperator::identity(2), &psi).is_err());
    }
}
