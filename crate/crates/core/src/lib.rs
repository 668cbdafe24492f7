//! Computational witnesses for hidden-variable no-go arguments.
//!
//! - [`opalg`]: dense Hermitian linear algebra (spectra, joint spectra, Jordan parts, embeddings).
//! - [`valuation`]: valuations on sets of rank-1 projections, a complete backtracking
//!   solver, a catalog of Kochen–Specker sets, and dimension-raising constructions.
//! - [`bellqubit`]: the spin-½ value model on the Bloch sphere with seeded Monte Carlo.
//! - [`nogo`]: finite witnesses for the expectation-representation no-go argument.

pub mod bellqubit;
pub mod nogo;
pub mod opalg;
pub mod random;
pub mod surd;
pub mod valuation;

pub use nalgebra::{DMatrix, DVector};
pub use num_complex::Complex64;

pub use opalg::{HermitianOperator, JointSpectrum, JordanPair, OpError, Spectrum};
pub use valuation::{ProjectionSet, SolveResult, SolveStatus, Valuation};
