use super::set::maximal_cliques;
use super::{SolveStatus, ValuationError};
use crate::opalg::{commutes, joint_spectrum, HermitianOperator, CLUSTER_TOL, DEFAULT_COMMUTE_TOL};

/// Result of a valuation search over arbitrary Hermitian operators.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilyResult {
    pub status: SolveStatus,
    /// One eigenvalue per operator, when a valuation exists.
    pub witness: Option<Vec<f64>>,
    pub nodes_explored: u64,
    pub cliques_used: usize,
}

struct Problem {
    domains: Vec<Vec<f64>>,
    cliques: Vec<Vec<usize>>,
    /// Allowed rows per clique, as indices into each member's domain.
    tables: Vec<Vec<Vec<usize>>>,
    cliques_of: Vec<Vec<usize>>,
}

/// Valuation search for a general operator family: vertices are operators,
/// edges join commuting pairs, and every maximal commuting clique is constrained
/// to its numerically computed joint spectrum.
pub fn find_family_valuation(ops: &[HermitianOperator]) -> Result<FamilyResult, ValuationError> {
    let n = ops.len();
    let mut adjacency = vec![Vec::new(); n];
    for i in 0..n {
        for j in (i + 1)..n {
            if commutes(&ops[i], &ops[j], DEFAULT_COMMUTE_TOL)? {
                adjacency[i].push(j);
                adjacency[j].push(i);
            }
        }
    }
    let domains: Vec<Vec<f64>> = ops
        .iter()
        .map(|a| {
            a.eig()
                .clusters(CLUSTER_TOL * (1.0 + a.norm_max()))
                .into_iter()
                .map(|(value, _)| value)
                .collect()
        })
        .collect();
    let cliques = maximal_cliques(&adjacency);
    let mut tables = Vec::with_capacity(cliques.len());
    for clique in &cliques {
        let family: Vec<HermitianOperator> = clique.iter().map(|&i| ops[i].clone()).collect();
        let spectrum = joint_spectrum(&family)?;
        let rows = spectrum
            .points
            .iter()
            .map(|p| {
                clique
                    .iter()
                    .zip(&p.tuple)
                    .map(|(&i, &x)| nearest(&domains[i], x))
                    .collect()
            })
            .collect();
        tables.push(rows);
    }
    let mut cliques_of = vec![Vec::new(); n];
    for (c, members) in cliques.iter().enumerate() {
        for &v in members {
            cliques_of[v].push(c);
        }
    }
    let problem = Problem {
        domains,
        cliques,
        tables,
        cliques_of,
    };

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(adjacency[v].len()), v));
    let mut assignment: Vec<Option<usize>> = vec![None; n];
    let mut nodes = 0;
    let found = search(&problem, &order, 0, &mut assignment, &mut nodes);
    Ok(FamilyResult {
        status: if found {
            SolveStatus::Sat
        } else {
            SolveStatus::Unsat
        },
        witness: found.then(|| {
            assignment
                .iter()
                .enumerate()
                .map(|(i, a)| problem.domains[i][a.expect("complete assignment")])
                .collect()
        }),
        nodes_explored: nodes,
        cliques_used: problem.cliques.len(),
    })
}

fn nearest(domain: &[f64], x: f64) -> usize {
    domain
        .iter()
        .enumerate()
        .min_by(|a, b| (a.1 - x).abs().total_cmp(&(b.1 - x).abs()))
        .map(|(i, _)| i)
        .expect("every operator has an eigenvalue")
}

fn search(
    p: &Problem,
    order: &[usize],
    pos: usize,
    assignment: &mut [Option<usize>],
    nodes: &mut u64,
) -> bool {
    let Some(&var) = order.get(pos) else {
        return true;
    };
    for value in 0..p.domains[var].len() {
        *nodes += 1;
        assignment[var] = Some(value);
        if consistent(p, var, assignment) && search(p, order, pos + 1, assignment, nodes) {
            return true;
        }
    }
    assignment[var] = None;
    false
}

/// Every clique through `var` still has a table row matching the partial assignment.
fn consistent(p: &Problem, var: usize, assignment: &[Option<usize>]) -> bool {
    p.cliques_of[var].iter().all(|&c| {
        p.tables[c].iter().any(|row| {
            p.cliques[c]
                .iter()
                .zip(row)
                .all(|(&v, &x)| assignment[v].is_none_or(|a| a == x))
        })
    })
}
