use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{joint_spectrum, max_abs, HermitianOperator, OpError};

/// Threshold for both sides of the vanishing check.
pub const VANISHING_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct Monomial {
    pub coeff: f64,
    /// Exponent per variable; shorter vectors are padded with zeros.
    pub powers: Vec<u32>,
}

/// A real multivariate polynomial in commuting variables.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Polynomial {
    pub terms: Vec<Monomial>,
}

impl Polynomial {
    pub fn new(terms: Vec<Monomial>) -> Self {
        Self { terms }
    }

    pub fn term(mut self, coeff: f64, powers: &[u32]) -> Self {
        self.terms.push(Monomial {
            coeff,
            powers: powers.to_vec(),
        });
        self
    }

    /// Number of variables actually referenced.
    pub fn arity(&self) -> usize {
        self.terms
            .iter()
            .map(|t| t.powers.iter().rposition(|&p| p > 0).map_or(0, |i| i + 1))
            .max()
            .unwrap_or(0)
    }

    pub fn degree(&self) -> u32 {
        self.terms
            .iter()
            .map(|t| t.powers.iter().sum())
            .max()
            .unwrap_or(0)
    }

    pub fn eval(&self, point: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|t| {
                t.powers
                    .iter()
                    .enumerate()
                    .fold(t.coeff, |acc, (i, &p)| acc * point[i].powi(p as i32))
            })
            .sum()
    }

    /// `f(A₁, …, Aₙ)` for a commuting family; the product order is irrelevant.
    pub fn eval_operators(
        &self,
        family: &[HermitianOperator],
    ) -> Result<DMatrix<Complex64>, OpError> {
        if self.arity() > family.len() {
            return Err(OpError::ArityMismatch {
                expected: family.len(),
                got: self.arity(),
            });
        }
        let dim = family.first().ok_or(OpError::EmptyFamily)?.dim();
        let mut acc = DMatrix::<Complex64>::zeros(dim, dim);
        for t in &self.terms {
            let mut m = DMatrix::<Complex64>::identity(dim, dim);
            for (i, &p) in t.powers.iter().enumerate() {
                for _ in 0..p {
                    m = &m * family[i].matrix();
                }
            }
            acc += m.scale(t.coeff);
        }
        Ok(acc)
    }
}

/// Outcome of evaluating a polynomial both as an operator and on the joint spectrum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VanishingCheck {
    pub operator_zero: bool,
    pub vanishes_on_spectrum: bool,
    pub operator_norm: f64,
    pub max_on_spectrum: f64,
}

impl VanishingCheck {
    pub fn agrees(&self) -> bool {
        self.operator_zero == self.vanishes_on_spectrum
    }
}

pub fn poly_vanishing_check(
    family: &[HermitianOperator],
    f: &Polynomial,
) -> Result<VanishingCheck, OpError> {
    let spectrum = joint_spectrum(family)?;
    let operator_norm = max_abs(&f.eval_operators(family)?);
    let max_on_spectrum = spectrum
        .points
        .iter()
        .map(|p| f.eval(&p.tuple).abs())
        .fold(0.0, f64::max);
    Ok(VanishingCheck {
        operator_zero: operator_norm <= VANISHING_TOL,
        vanishes_on_spectrum: max_on_spectrum <= VANISHING_TOL,
        operator_norm,
        max_on_spectrum,
    })
}
