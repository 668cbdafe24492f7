use std::collections::BTreeSet;

use nalgebra::DVector;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::ValuationError;
use crate::opalg::HermitianOperator;
use crate::surd;

/// Inner products at or below this magnitude count as orthogonal.
pub const ORTHO_TOL: f64 = 1e-10;
/// Unit-norm tolerance for stored vectors.
pub const UNIT_TOL: f64 = 1e-10;

/// A named family of rank-1 projections `|v⟩⟨v|` with their orthogonality graph.
///
/// The graph is always rebuilt from the vectors; it is never read from input.
#[derive(Debug, Clone)]
pub struct ProjectionSet {
    name: String,
    dim: usize,
    vectors: Vec<DVector<Complex64>>,
    adjacency: Vec<Vec<usize>>,
}

impl ProjectionSet {
    /// Validates unit norms and pairwise non-parallelism, then builds the graph.
    pub fn new(
        name: impl Into<String>,
        dim: usize,
        vectors: Vec<DVector<Complex64>>,
    ) -> Result<Self, ValuationError> {
        if dim == 0 {
            return Err(ValuationError::InvalidSet(
                "dimension must be at least 1".into(),
            ));
        }
        for (i, v) in vectors.iter().enumerate() {
            if v.len() != dim {
                return Err(ValuationError::WrongLength {
                    index: i,
                    len: v.len(),
                    dim,
                });
            }
            let norm = v.norm();
            if !norm.is_finite() || (norm - 1.0).abs() > UNIT_TOL {
                return Err(ValuationError::NotUnit { index: i, norm });
            }
        }
        let n = vectors.len();
        let mut adjacency = vec![Vec::new(); n];
        for i in 0..n {
            for j in (i + 1)..n {
                let overlap = vectors[i].dotc(&vectors[j]).norm();
                if overlap >= 1.0 - UNIT_TOL {
                    return Err(ValuationError::Parallel {
                        first: i,
                        second: j,
                    });
                }
                if overlap <= ORTHO_TOL {
                    adjacency[i].push(j);
                    adjacency[j].push(i);
                }
            }
        }
        Ok(Self {
            name: name.into(),
            dim,
            vectors,
            adjacency,
        })
    }

    /// Normalizes every vector first; zero vectors are rejected.
    pub fn normalized(
        name: impl Into<String>,
        dim: usize,
        vectors: Vec<DVector<Complex64>>,
    ) -> Result<Self, ValuationError> {
        let vectors = vectors
            .into_iter()
            .enumerate()
            .map(|(i, v)| {
                let n = v.norm();
                if n == 0.0 || !n.is_finite() {
                    Err(ValuationError::ZeroVector(i))
                } else {
                    Ok(v.unscale(n))
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(name, dim, vectors)
    }

    /// Like [`ProjectionSet::normalized`], but silently drops vectors parallel
    /// (up to phase) to an earlier one.
    pub fn merging_duplicates(
        name: impl Into<String>,
        dim: usize,
        vectors: Vec<DVector<Complex64>>,
    ) -> Result<Self, ValuationError> {
        let mut kept: Vec<DVector<Complex64>> = Vec::with_capacity(vectors.len());
        for v in vectors {
            let n = v.norm();
            if n == 0.0 {
                continue;
            }
            let v = v.unscale(n);
            if !kept.iter().any(|w| w.dotc(&v).norm() >= 1.0 - UNIT_TOL) {
                kept.push(v);
            }
        }
        Self::new(name, dim, kept)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[DVector<Complex64>] {
        &self.vectors
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.adjacency[i]
    }

    pub fn adjacency(&self) -> &[Vec<usize>] {
        &self.adjacency
    }

    pub fn are_orthogonal(&self, i: usize, j: usize) -> bool {
        self.adjacency[i].binary_search(&j).is_ok()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn projection(&self, i: usize) -> HermitianOperator {
        HermitianOperator::projector(&self.vectors[i])
    }

    pub fn projections(&self) -> Vec<HermitianOperator> {
        (0..self.len()).map(|i| self.projection(i)).collect()
    }

    /// Maximal cliques of the orthogonality graph, each sorted, listed in lexicographic order.
    pub fn maximal_cliques(&self) -> Vec<Vec<usize>> {
        maximal_cliques(&self.adjacency)
    }

    /// Restriction to the listed indices (in the given order).
    pub fn subset(&self, indices: &[usize]) -> Result<Self, ValuationError> {
        let vectors = indices
            .iter()
            .map(|&i| {
                self.vectors
                    .get(i)
                    .cloned()
                    .ok_or(ValuationError::MissingIndex(i))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(format!("{}[subset]", self.name), self.dim, vectors)
    }

    pub fn to_json(&self) -> VectorSetJson {
        VectorSetJson {
            name: self.name.clone(),
            dim: self.dim,
            vectors: self
                .vectors
                .iter()
                .map(|v| {
                    v.iter()
                        .map(|z| [Scalar::Number(z.re), Scalar::Number(z.im)])
                        .collect()
                })
                .collect(),
        }
    }
}

/// A component entry: either a plain number or an exact expression such as `"1/sqrt(2)"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Scalar {
    Number(f64),
    Expr(String),
}

impl Scalar {
    pub fn value(&self) -> Result<f64, ValuationError> {
        match self {
            Scalar::Number(x) => Ok(*x),
            Scalar::Expr(s) => Ok(surd::eval(s)?),
        }
    }
}

/// Vector-set file format: `{"name": str, "dim": n, "vectors": [[[re, im], ...], ...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VectorSetJson {
    pub name: String,
    pub dim: usize,
    pub vectors: Vec<Vec<[Scalar; 2]>>,
}

impl VectorSetJson {
    /// Evaluates every component; no normalization or validation beyond parsing.
    pub fn raw_vectors(&self) -> Result<Vec<DVector<Complex64>>, ValuationError> {
        self.vectors
            .iter()
            .map(|v| {
                let comps = v
                    .iter()
                    .map(|[re, im]| Ok(Complex64::new(re.value()?, im.value()?)))
                    .collect::<Result<Vec<_>, ValuationError>>()?;
                Ok(DVector::from_vec(comps))
            })
            .collect()
    }
}

/// Bron–Kerbosch with pivoting over sorted adjacency lists.
pub(crate) fn maximal_cliques(adjacency: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let sets: Vec<BTreeSet<usize>> = adjacency
        .iter()
        .map(|a| a.iter().copied().collect())
        .collect();
    let mut out = Vec::new();
    let mut r = Vec::new();
    let p: BTreeSet<usize> = (0..adjacency.len()).collect();
    bron_kerbosch(&sets, &mut r, p, BTreeSet::new(), &mut out);
    for c in &mut out {
        c.sort_unstable();
    }
    out.sort();
    out
}

fn bron_kerbosch(
    adj: &[BTreeSet<usize>],
    r: &mut Vec<usize>,
    mut p: BTreeSet<usize>,
    mut x: BTreeSet<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if p.is_empty() {
        if x.is_empty() {
            out.push(r.clone());
        }
        return;
    }
    let pivot = p
        .iter()
        .chain(x.iter())
        .copied()
        .max_by_key(|&u| (p.intersection(&adj[u]).count(), std::cmp::Reverse(u)))
        .expect("p is non-empty");
    let candidates: Vec<usize> = p.difference(&adj[pivot]).copied().collect();
    for v in candidates {
        r.push(v);
        bron_kerbosch(
            adj,
            r,
            p.intersection(&adj[v]).copied().collect(),
            x.intersection(&adj[v]).copied().collect(),
            out,
        );
        r.pop();
        p.remove(&v);
        x.insert(v);
    }
}
