use serde::Serialize;

use super::constraints::build_constraints;
use super::{ProjectionSet, Valuation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum SolveStatus {
    Sat,
    Unsat,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult {
    pub status: SolveStatus,
    pub witness: Option<Valuation>,
    pub nodes_explored: u64,
    pub cliques_used: usize,
}

impl SolveResult {
    pub fn is_sat(&self) -> bool {
        self.status == SolveStatus::Sat
    }

    pub fn report(&self) -> SolveReport {
        SolveReport {
            status: self.status,
            witness: self.witness.clone(),
            nodes: self.nodes_explored,
        }
    }
}

/// Serialized form: `{"status": "SAT"|"UNSAT", "witness": {index: 0|1}|null, "nodes": int}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveReport {
    pub status: SolveStatus,
    pub witness: Option<Valuation>,
    pub nodes: u64,
}

/// Complete backtracking search for a 0/1 valuation.
///
/// Branches on vertices by descending degree (ties by index), trying 0 before 1.
/// Setting a vertex to 1 zeroes its neighbours; a complete clique whose other
/// members are all 0 forces its last member to 1.
pub fn find_valuation(set: &ProjectionSet) -> SolveResult {
    let mut search = Search::new(set);
    let found = search.run(0, &mut |_| true);
    SolveResult {
        status: if found {
            SolveStatus::Sat
        } else {
            SolveStatus::Unsat
        },
        witness: found.then(|| search.solution.take()).flatten(),
        nodes_explored: search.nodes,
        cliques_used: search.clique_count,
    }
}

/// Number of distinct valuations, stopping once `limit` have been seen.
pub fn count_valuations(set: &ProjectionSet, limit: u64) -> u64 {
    let mut search = Search::new(set);
    let mut count = 0u64;
    search.run(0, &mut |_| {
        count += 1;
        count >= limit
    });
    count
}

const UNSET: i8 = -1;

struct Search<'a> {
    adjacency: &'a [Vec<usize>],
    /// Complete cliques (bases), as vertex lists.
    bases: Vec<Vec<usize>>,
    bases_of: Vec<Vec<usize>>,
    clique_count: usize,
    order: Vec<usize>,
    value: Vec<i8>,
    trail: Vec<usize>,
    queue: Vec<(usize, i8)>,
    nodes: u64,
    solution: Option<Valuation>,
}

impl<'a> Search<'a> {
    fn new(set: &'a ProjectionSet) -> Self {
        let n = set.len();
        let constraints = build_constraints(set);
        let clique_count = constraints.len();
        let bases: Vec<Vec<usize>> = constraints
            .into_iter()
            .filter(|c| c.is_complete(set.dim()))
            .map(|c| c.clique)
            .collect();
        let mut bases_of = vec![Vec::new(); n];
        for (b, members) in bases.iter().enumerate() {
            for &v in members {
                bases_of[v].push(b);
            }
        }
        let adjacency = set.adjacency();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&v| (std::cmp::Reverse(adjacency[v].len()), v));
        Self {
            adjacency,
            bases,
            bases_of,
            clique_count,
            order,
            value: vec![UNSET; n],
            trail: Vec::with_capacity(n),
            queue: Vec::new(),
            nodes: 0,
            solution: None,
        }
    }

    /// Depth-first search from position `pos` of the branching order. `on_leaf`
    /// returns true to stop the search.
    fn run(&mut self, pos: usize, on_leaf: &mut dyn FnMut(&Valuation) -> bool) -> bool {
        let Some(next) = (pos..self.order.len()).find(|&p| self.value[self.order[p]] == UNSET)
        else {
            let v =
                Valuation::from_values(&self.value.iter().map(|&x| x as u8).collect::<Vec<_>>());
            let stop = on_leaf(&v);
            if stop {
                self.solution = Some(v);
            }
            return stop;
        };
        let var = self.order[next];
        for val in [0, 1] {
            self.nodes += 1;
            let mark = self.trail.len();
            if self.assign(var, val) && self.run(next + 1, on_leaf) {
                return true;
            }
            self.undo(mark);
        }
        false
    }

    fn assign(&mut self, var: usize, val: i8) -> bool {
        self.queue.clear();
        self.queue.push((var, val));
        while let Some((v, x)) = self.queue.pop() {
            match self.value[v] {
                UNSET => {}
                cur if cur == x => continue,
                _ => return false,
            }
            self.value[v] = x;
            self.trail.push(v);
            if x == 1 {
                for &u in &self.adjacency[v] {
                    match self.value[u] {
                        1 => return false,
                        UNSET => self.queue.push((u, 0)),
                        _ => {}
                    }
                }
            } else {
                for &b in &self.bases_of[v] {
                    let mut open = None;
                    let mut open_count = 0;
                    let mut has_one = false;
                    for &u in &self.bases[b] {
                        match self.value[u] {
                            1 => has_one = true,
                            UNSET => {
                                open = Some(u);
                                open_count += 1;
                            }
                            _ => {}
                        }
                    }
                    if has_one {
                        continue;
                    }
                    match (open_count, open) {
                        (0, _) => return false,
                        (1, Some(u)) => self.queue.push((u, 1)),
                        _ => {}
                    }
                }
            }
        }
        true
    }

    fn undo(&mut self, mark: usize) {
        for v in self.trail.drain(mark..) {
            self.value[v] = UNSET;
        }
    }
}
