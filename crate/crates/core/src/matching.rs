//! Maximum-weight matching by primal cutting planes.
//!
//! The solver keeps an integral matching `xhat` and the LP over the degree
//! constraints plus the cuts found so far. Each round either returns, adds a
//! `{0, 1/2}`-cut that is tight at `xhat` and cuts off the LP optimum, or
//! moves `xhat` to a heavier matching along an alternating path or cycle.

use thiserror::Error;

use crate::lp::{lp_solve, LinearProgram, LpOutcome, Sense};
use crate::model::{compute_context, Cut, IlpInstance, ModelError, Point};
use crate::rational::{self, Rational};
use crate::sep_col::{primal_separate_col, SepColError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatchingError {
    #[error("edge {edge} has an endpoint outside 1..={nodes}")]
    EndpointOutOfRange { edge: usize, nodes: usize },
    #[error("edge {edge} is a loop")]
    Loop { edge: usize },
    #[error("edge {edge} duplicates edge {first}")]
    ParallelEdge { edge: usize, first: usize },
    #[error("edge {edge} has negative weight {weight}")]
    NegativeWeight { edge: usize, weight: i64 },
    #[error("internal consistency failure: {0}")]
    Internal(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Separation(#[from] SepColError),
}

/// Simple undirected graph with nonnegative integer edge weights.
/// Nodes are `0..node_count`; error messages count edges from one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedGraph {
    nodes: usize,
    edges: Vec<(usize, usize, i64)>,
}

impl WeightedGraph {
    pub fn new(nodes: usize, edges: Vec<(usize, usize, i64)>) -> Result<Self, MatchingError> {
        let mut seen = std::collections::BTreeMap::new();
        for (k, &(u, v, w)) in edges.iter().enumerate() {
            if u >= nodes || v >= nodes {
                return Err(MatchingError::EndpointOutOfRange { edge: k + 1, nodes });
            }
            if u == v {
                return Err(MatchingError::Loop { edge: k + 1 });
            }
            if w < 0 {
                return Err(MatchingError::NegativeWeight {
                    edge: k + 1,
                    weight: w,
                });
            }
            if let Some(first) = seen.insert((u.min(v), u.max(v)), k + 1) {
                return Err(MatchingError::ParallelEdge { edge: k + 1, first });
            }
        }
        Ok(WeightedGraph { nodes, edges })
    }

    pub fn node_count(&self) -> usize {
        self.nodes
    }

    pub fn edges(&self) -> &[(usize, usize, i64)] {
        &self.edges
    }

    pub fn weight_of(&self, matching: &[usize]) -> i64 {
        matching.iter().map(|&e| self.edges[e].2).sum()
    }

    pub fn is_matching(&self, edge_set: &[usize]) -> bool {
        let mut used = vec![false; self.nodes];
        for &e in edge_set {
            let (u, v, _) = self.edges[e];
            if used[u] || used[v] {
                return false;
            }
            used[u] = true;
            used[v] = true;
        }
        true
    }
}

/// Degree constraints `x(delta(v)) <= 1` with `0 <= x <= 1`, objective = weights.
/// Needs at least one edge.
pub fn incidence_instance(graph: &WeightedGraph) -> Result<IlpInstance, ModelError> {
    let mut a = vec![vec![0; graph.edges.len()]; graph.nodes];
    for (e, &(u, v, _)) in graph.edges.iter().enumerate() {
        a[u][e] = 1;
        a[v][e] = 1;
    }
    let objective = graph.edges.iter().map(|e| e.2).collect();
    IlpInstance::with_full_box(a, vec![1; graph.nodes])?.with_objective(objective)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct MatchingCounters {
    pub sep_calls: usize,
    /// Largest number of min-cut computations in a single separation call.
    pub max_mincuts_per_sep: usize,
    pub total_mincuts: usize,
    pub lp_solves: usize,
    pub cuts_added: usize,
    pub augmentations: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchingResult {
    /// Edge indices, ascending.
    pub edges: Vec<usize>,
    pub weight: i64,
    pub counters: MatchingCounters,
    /// Cuts added to the LP, in order.
    pub cuts: Vec<Cut>,
}

fn edges_of(x: &[Rational]) -> Vec<usize> {
    (0..x.len()).filter(|&e| x[e] == rational::one()).collect()
}

/// Best weight gain obtainable by toggling a simple alternating path or an
/// even alternating cycle that uses only `allowed` edges. Ties go to the
/// first structure found in edge order.
fn best_alternating(
    graph: &WeightedGraph,
    matched: &[bool],
    allowed: &[bool],
) -> Option<(i64, Vec<usize>)> {
    struct Walk<'a> {
        graph: &'a WeightedGraph,
        matched: &'a [bool],
        adjacency: Vec<Vec<usize>>,
        on_path: Vec<bool>,
        path: Vec<usize>,
        best: Option<(i64, Vec<usize>)>,
    }

    impl Walk<'_> {
        fn gain(&self) -> i64 {
            self.path
                .iter()
                .map(|&e| {
                    let w = self.graph.edges[e].2;
                    if self.matched[e] {
                        -w
                    } else {
                        w
                    }
                })
                .sum()
        }

        fn consider(&mut self) {
            let toggled: Vec<usize> = (0..self.matched.len())
                .filter(|&e| self.matched[e] != self.path.contains(&e))
                .collect();
            let gain = self.gain();
            if gain > 0
                && self.best.as_ref().is_none_or(|b| gain > b.0)
                && self.graph.is_matching(&toggled)
            {
                self.best = Some((gain, self.path.clone()));
            }
        }

        fn extend(&mut self, start: usize, at: usize) {
            let last_matched = self.path.last().map(|&e| self.matched[e]);
            for k in 0..self.adjacency[at].len() {
                let e = self.adjacency[at][k];
                if last_matched == Some(self.matched[e]) || self.path.contains(&e) {
                    continue;
                }
                let (u, v, _) = self.graph.edges[e];
                let next = if u == at { v } else { u };
                if next == start {
                    // Closing a cycle; it alternates only if the first and
                    // last edges differ in status.
                    if self.matched[self.path[0]] != self.matched[e] {
                        self.path.push(e);
                        self.consider();
                        self.path.pop();
                    }
                    continue;
                }
                if self.on_path[next] {
                    continue;
                }
                self.path.push(e);
                self.on_path[next] = true;
                self.consider();
                self.extend(start, next);
                self.on_path[next] = false;
                self.path.pop();
            }
        }
    }

    let mut adjacency = vec![Vec::new(); graph.nodes];
    for (e, &(u, v, _)) in graph.edges.iter().enumerate() {
        if allowed[e] {
            adjacency[u].push(e);
            adjacency[v].push(e);
        }
    }
    let mut walk = Walk {
        graph,
        matched,
        adjacency,
        on_path: vec![false; graph.nodes],
        path: Vec::new(),
        best: None,
    };
    for start in 0..graph.nodes {
        walk.on_path[start] = true;
        walk.extend(start, start);
        walk.on_path[start] = false;
    }
    walk.best
}

/// Maximum-weight matching of `graph`.
///
/// Every separation call works on the column-parity case (each edge column
/// has two odd entries), so it spends at most `|V| + 2|E|` min cuts.
/// Finding an improving alternating structure is exhaustive and meant for
/// small graphs.
pub fn solve_matching(graph: &WeightedGraph) -> Result<MatchingResult, MatchingError> {
    let mut counters = MatchingCounters::default();
    if graph.edges.is_empty() {
        return Ok(MatchingResult {
            edges: Vec::new(),
            weight: 0,
            counters,
            cuts: Vec::new(),
        });
    }
    let instance = incidence_instance(graph)?;
    let c: Vec<Rational> = graph.edges.iter().map(|e| rational::int(e.2)).collect();
    let mut lp = LinearProgram::from_instance(&instance);
    let mut xhat = Point::zeros(graph.edges.len());
    let mut cuts = Vec::new();

    loop {
        counters.lp_solves += 1;
        let sol = match lp_solve(&lp, &c, Sense::Maximize) {
            LpOutcome::Optimal(sol) => sol,
            other => {
                return Err(MatchingError::Internal(format!(
                    "matching LP not optimal: {other:?}"
                )))
            }
        };
        if sol.x.is_integral() {
            xhat = sol.x;
            break;
        }
        let current = graph.weight_of(&edges_of(&xhat));
        if sol.value == rational::int(current) {
            break;
        }
        let ctx = compute_context(&instance, &xhat, &sol.x)?;
        let outcome = primal_separate_col(&ctx)?;
        counters.sep_calls += 1;
        counters.total_mincuts += outcome.stats.min_cut_calls;
        counters.max_mincuts_per_sep = counters
            .max_mincuts_per_sep
            .max(outcome.stats.min_cut_calls);
        if let Some(found) = outcome.best {
            lp.add_cut(&found.cut);
            cuts.push(found.cut);
            counters.cuts_added += 1;
            continue;
        }

        let matched: Vec<bool> = xhat.iter().map(|v| *v == rational::one()).collect();
        let support: Vec<bool> = (0..xhat.len()).map(|e| sol.x[e] != xhat[e]).collect();
        let step = best_alternating(graph, &matched, &support)
            .or_else(|| best_alternating(graph, &matched, &vec![true; matched.len()]));
        let Some((_, path)) = step else {
            // No improving structure: xhat is a maximum matching.
            break;
        };
        let coords = (0..matched.len())
            .map(|e| rational::int(i64::from(matched[e] != path.contains(&e))))
            .collect();
        xhat = Point::new(coords);
        counters.augmentations += 1;
    }

    let edges = edges_of(&xhat);
    if !graph.is_matching(&edges) {
        return Err(MatchingError::Internal("result is not a matching".into()));
    }
    Ok(MatchingResult {
        weight: graph.weight_of(&edges),
        edges,
        counters,
        cuts,
    })
}
