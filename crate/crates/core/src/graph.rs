//! Exact max-flow/min-cut and nonnegative shortest paths on small undirected
//! graphs whose edges carry an origin tag.

use std::collections::VecDeque;

use num_traits::{Signed, Zero};

use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge<T> {
    pub ends: (usize, usize),
    pub weight: Rational,
    pub tag: T,
}

/// Undirected graph with nonnegative rational capacities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CapacitatedGraph<T> {
    nodes: usize,
    edges: Vec<Edge<T>>,
}

/// Undirected graph with nonnegative rational lengths.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LengthGraph<T> {
    nodes: usize,
    edges: Vec<Edge<T>>,
}

macro_rules! graph_common {
    ($ty:ident) => {
        impl<T> $ty<T> {
            pub fn new(nodes: usize) -> Self {
                $ty {
                    nodes,
                    edges: Vec::new(),
                }
            }

            /// Adds an edge and returns its index.
            ///
            /// Panics on a self-loop, an out-of-range endpoint, or a negative weight.
            pub fn add_edge(&mut self, u: usize, v: usize, weight: Rational, tag: T) -> usize {
                assert!(u != v, "self-loop at node {u}");
                assert!(u < self.nodes && v < self.nodes, "endpoint out of range");
                assert!(!weight.is_negative(), "negative edge weight {weight}");
                self.edges.push(Edge {
                    ends: (u, v),
                    weight,
                    tag,
                });
                self.edges.len() - 1
            }

            pub fn node_count(&self) -> usize {
                self.nodes
            }

            pub fn edges(&self) -> &[Edge<T>] {
                &self.edges
            }

            pub fn edge(&self, e: usize) -> &Edge<T> {
                &self.edges[e]
            }
        }
    };
}

graph_common!(CapacitatedGraph);
graph_common!(LengthGraph);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinCut {
    pub value: Rational,
    /// `source_side[v]` is true for nodes on the source side.
    pub source_side: Vec<bool>,
}

impl MinCut {
    pub fn source_nodes(&self) -> Vec<usize> {
        (0..self.source_side.len())
            .filter(|&v| self.source_side[v])
            .collect()
    }
}

impl<T> CapacitatedGraph<T> {
    /// Total capacity of edges with exactly one endpoint in `side`.
    pub fn cut_capacity(&self, side: &[bool]) -> Rational {
        self.edges
            .iter()
            .filter(|e| side[e.ends.0] != side[e.ends.1])
            .fold(Rational::zero(), |acc, e| acc + &e.weight)
    }
}

/// Minimum `s`-`t` cut by shortest augmenting paths.
///
/// The returned source side is the set of nodes reachable from `s` in the final
/// residual network, so it is the inclusion-minimal minimum cut. A source that
/// cannot reach `t` yields value zero and its connected component.
pub fn min_cut<T>(graph: &CapacitatedGraph<T>, s: usize, t: usize) -> MinCut {
    assert!(s != t, "source and sink coincide");
    assert!(s < graph.nodes && t < graph.nodes, "terminal out of range");

    // Arc 2e runs ends.0 -> ends.1, arc 2e+1 the reverse; both start with the
    // full capacity, which is how an undirected edge behaves in the residual.
    let mut residual: Vec<Rational> = graph
        .edges
        .iter()
        .flat_map(|e| [e.weight.clone(), e.weight.clone()])
        .collect();
    let mut adjacency = vec![Vec::new(); graph.nodes];
    for (e, edge) in graph.edges.iter().enumerate() {
        adjacency[edge.ends.0].push(2 * e);
        adjacency[edge.ends.1].push(2 * e + 1);
    }
    let head = |arc: usize| {
        let (u, v) = graph.edges[arc / 2].ends;
        if arc % 2 == 0 {
            v
        } else {
            u
        }
    };

    let mut flow = Rational::zero();
    loop {
        let mut pred: Vec<Option<usize>> = vec![None; graph.nodes];
        let mut seen = vec![false; graph.nodes];
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            if u == t {
                break;
            }
            for &arc in &adjacency[u] {
                let v = head(arc);
                if !seen[v] && residual[arc].is_positive() {
                    seen[v] = true;
                    pred[v] = Some(arc);
                    queue.push_back(v);
                }
            }
        }
        if !seen[t] {
            debug_assert_eq!(graph.cut_capacity(&seen), flow, "max-flow/min-cut mismatch");
            return MinCut {
                value: flow,
                source_side: seen,
            };
        }
        let mut path = Vec::new();
        let mut v = t;
        while let Some(arc) = pred[v] {
            path.push(arc);
            v = head(arc ^ 1);
        }
        let bottleneck = path
            .iter()
            .map(|&arc| &residual[arc])
            .min()
            .cloned()
            .expect("augmenting path is nonempty");
        for &arc in &path {
            residual[arc] -= &bottleneck;
            residual[arc ^ 1] += &bottleneck;
        }
        flow += bottleneck;
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShortestPath {
    pub length: Rational,
    /// Edge indices in order from `s` to `t`.
    pub edges: Vec<usize>,
}

/// Label-setting shortest `s`-`t` path ignoring every edge whose tag equals
/// `forbidden`. Ties between labels are broken by the smaller node index.
pub fn shortest_path<T: PartialEq>(
    graph: &LengthGraph<T>,
    s: usize,
    t: usize,
    forbidden: Option<&T>,
) -> Option<ShortestPath> {
    assert!(s < graph.nodes && t < graph.nodes, "terminal out of range");
    let mut adjacency = vec![Vec::new(); graph.nodes];
    for (e, edge) in graph.edges.iter().enumerate() {
        if forbidden.is_some_and(|f| *f == edge.tag) {
            continue;
        }
        adjacency[edge.ends.0].push((e, edge.ends.1));
        adjacency[edge.ends.1].push((e, edge.ends.0));
    }

    let mut dist: Vec<Option<Rational>> = vec![None; graph.nodes];
    let mut pred: Vec<Option<(usize, usize)>> = vec![None; graph.nodes];
    let mut done = vec![false; graph.nodes];
    dist[s] = Some(Rational::zero());
    loop {
        let next = (0..graph.nodes)
            .filter(|&v| !done[v])
            .filter_map(|v| dist[v].as_ref().map(|d| (d, v)))
            .min();
        let Some((_, u)) = next else { break };
        if u == t {
            break;
        }
        done[u] = true;
        let du = dist[u].clone().expect("settled node has a label");
        for &(e, v) in &adjacency[u] {
            if done[v] {
                continue;
            }
            let candidate = &du + &graph.edges[e].weight;
            if dist[v].as_ref().is_none_or(|d| candidate < *d) {
                dist[v] = Some(candidate);
                pred[v] = Some((e, u));
            }
        }
    }

    let length = dist[t].clone()?;
    let mut edges = Vec::new();
    let mut v = t;
    while let Some((e, u)) = pred[v] {
        edges.push(e);
        v = u;
    }
    edges.reverse();
    Some(ShortestPath { length, edges })
}
