//! Seeded random instances for tests and the `gen` command.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::lp::{lp_solve, LinearProgram, LpOutcome, Sense};
use crate::matching::WeightedGraph;
use crate::model::{IlpInstance, Point};
use crate::rational::{self, Rational};

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Parity structure of generated matrices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Profile {
    /// At most two odd entries per column.
    Col2,
    /// At most two odd entries per row.
    Row2,
    /// No parity restriction.
    Mixed,
}

impl FromStr for Profile {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "col2" => Ok(Profile::Col2),
            "row2" => Ok(Profile::Row2),
            "mixed" => Ok(Profile::Mixed),
            other => Err(format!("unknown profile `{other}` (col2, row2, mixed)")),
        }
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Profile::Col2 => "col2",
            Profile::Row2 => "row2",
            Profile::Mixed => "mixed",
        })
    }
}

/// An instance with an integral feasible `xhat` and a nearby fractional
/// `xstar`, also feasible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeparationCase {
    pub instance: IlpInstance,
    pub xhat: Point,
    pub xstar: Point,
}

const ODD: [i64; 4] = [1, -1, 3, -3];
const EVEN: [i64; 6] = [0, 0, 0, 0, 2, -2];
const FRACTIONS: [(i64, i64); 5] = [(1, 4), (1, 3), (1, 2), (2, 3), (3, 4)];

fn parity_pattern(rng: &mut ChaCha8Rng, rows: usize, cols: usize, profile: Profile) -> Vec<Vec<bool>> {
    let mut odd = vec![vec![false; cols]; rows];
    match profile {
        Profile::Col2 => {
            for i in 0..cols {
                let count = rng.gen_range(0..=2.min(rows));
                let mut idx: Vec<usize> = (0..rows).collect();
                idx.shuffle(rng);
                for &j in &idx[..count] {
                    odd[j][i] = true;
                }
            }
        }
        Profile::Row2 => {
            for row in odd.iter_mut() {
                let count = rng.gen_range(0..=2.min(cols));
                let mut idx: Vec<usize> = (0..cols).collect();
                idx.shuffle(rng);
                for &i in &idx[..count] {
                    row[i] = true;
                }
            }
        }
        Profile::Mixed => {
            for row in odd.iter_mut() {
                for cell in row.iter_mut() {
                    *cell = rng.gen_bool(0.4);
                }
            }
        }
    }
    odd
}

fn random_box(rng: &mut ChaCha8Rng, cols: usize) -> (Vec<bool>, Vec<bool>) {
    if rng.gen_bool(0.5) {
        return (vec![true; cols], vec![true; cols]);
    }
    let lower = (0..cols).map(|_| rng.gen_bool(0.75)).collect();
    let upper = (0..cols).map(|_| rng.gen_bool(0.75)).collect();
    (lower, upper)
}

/// Random separation case with `|a_ji| <= 3`.
///
/// `xhat` is a 0/1 vector, except that a coordinate without lower (upper)
/// bound occasionally sits at `-1` (`2`). `xstar` moves some coordinates of
/// `xhat` towards the unit interval by one of 1/4, 1/3, 1/2, 2/3, 3/4, and
/// `b` is chosen so both points are feasible, sometimes with one extra unit of
/// slack.
pub fn separation_case(
    rng: &mut ChaCha8Rng,
    rows: usize,
    cols: usize,
    profile: Profile,
) -> SeparationCase {
    let odd = parity_pattern(rng, rows, cols, profile);
    let a: Vec<Vec<i64>> = odd
        .iter()
        .map(|row| {
            row.iter()
                .map(|&o| {
                    if o {
                        *ODD.choose(rng).expect("nonempty")
                    } else {
                        *EVEN.choose(rng).expect("nonempty")
                    }
                })
                .collect()
        })
        .collect();
    let (lower, upper) = random_box(rng, cols);

    let xhat: Vec<i64> = (0..cols)
        .map(|i| {
            if !lower[i] && rng.gen_bool(0.1) {
                -1
            } else if !upper[i] && rng.gen_bool(0.1) {
                2
            } else {
                i64::from(rng.gen_bool(0.5))
            }
        })
        .collect();
    let mut moved = false;
    let mut xstar: Vec<Rational> = xhat
        .iter()
        .map(|&v| {
            if rng.gen_bool(0.6) {
                moved = true;
                let (p, q) = *FRACTIONS.choose(rng).expect("nonempty");
                let f = rational::frac(p, q);
                if v <= 0 {
                    rational::int(v) + f
                } else {
                    rational::int(v) - f
                }
            } else {
                rational::int(v)
            }
        })
        .collect();
    if !moved && cols > 0 {
        let i = rng.gen_range(0..cols);
        xstar[i] = if xhat[i] <= 0 {
            rational::int(xhat[i]) + rational::half()
        } else {
            rational::int(xhat[i]) - rational::half()
        };
    }

    let b: Vec<i64> = a
        .iter()
        .map(|row| {
            let at_hat = rational::dot_i64(row, &xhat);
            let at_star = rational::dot_int(row, &xstar).ceil().to_integer();
            let at_star = i64::try_from(at_star).expect("small");
            at_hat.max(at_star) + i64::from(rng.gen_range(0..4) == 0)
        })
        .collect();
    let instance = IlpInstance::new(a, b, lower, upper, None).expect("generated instance is valid");
    SeparationCase {
        instance,
        xhat: Point::from_ints(&xhat),
        xstar: Point::new(xstar),
    }
}

/// Box-free instance with objective, `b >= 1`, `c >= 0`, and a bounded LP.
/// `0` is feasible because `b > 0`.
pub fn ptas_instance(rng: &mut ChaCha8Rng, max_rows: usize, max_cols: usize) -> IlpInstance {
    loop {
        let rows = rng.gen_range(1..=max_rows);
        let cols = rng.gen_range(1..=max_cols);
        let a: Vec<Vec<i64>> = (0..rows)
            .map(|_| (0..cols).map(|_| rng.gen_range(-2..=3)).collect())
            .collect();
        let b: Vec<i64> = (0..rows).map(|_| rng.gen_range(1..=6)).collect();
        let c: Vec<i64> = (0..cols).map(|_| rng.gen_range(0..=4)).collect();
        let instance = IlpInstance::without_box(a, b)
            .and_then(|inst| inst.with_objective(c.clone()))
            .expect("generated instance is valid");
        let obj: Vec<Rational> = c.iter().map(|&v| rational::int(v)).collect();
        let lp = LinearProgram::from_instance(&instance);
        if matches!(lp_solve(&lp, &obj, Sense::Maximize), LpOutcome::Optimal(_)) {
            return instance;
        }
    }
}

/// Random simple graph on `1..=max_nodes` nodes with weights in `0..=max_weight`.
pub fn random_graph(rng: &mut ChaCha8Rng, max_nodes: usize, max_weight: i64) -> WeightedGraph {
    let nodes = rng.gen_range(1..=max_nodes);
    let density = *[0.3, 0.5, 0.8].choose(rng).expect("nonempty");
    let mut edges = Vec::new();
    for u in 0..nodes {
        for v in u + 1..nodes {
            if rng.gen_bool(density) {
                edges.push((u, v, rng.gen_range(0..=max_weight)));
            }
        }
    }
    WeightedGraph::new(nodes, edges).expect("generated graph is simple")
}

/// Every simple graph on `nodes` labelled nodes, edges in lexicographic
/// order, weights drawn by `weight`.
pub fn all_graphs(
    nodes: usize,
    mut weight: impl FnMut() -> i64,
) -> impl Iterator<Item = WeightedGraph> {
    let pairs: Vec<(usize, usize)> = (0..nodes)
        .flat_map(|u| (u + 1..nodes).map(move |v| (u, v)))
        .collect();
    (0u64..1 << pairs.len()).map(move |mask| {
        let edges = pairs
            .iter()
            .enumerate()
            .filter(|(k, _)| mask >> k & 1 == 1)
            .map(|(_, &(u, v))| (u, v, weight()))
            .collect();
        WeightedGraph::new(nodes, edges).expect("simple graph")
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{compute_context, parity_profile};

    #[test]
    fn cases_are_consistent() {
        let mut rng = rng_from_seed(7);
        for profile in [Profile::Col2, Profile::Row2, Profile::Mixed] {
            for _ in 0..50 {
                let rows = rng.gen_range(1..=8);
                let cols = rng.gen_range(1..=6);
                let case = separation_case(&mut rng, rows, cols, profile);
                compute_context(&case.instance, &case.xhat, &case.xstar).unwrap();
                let pp = parity_profile(&case.instance);
                match profile {
                    Profile::Col2 => assert!(pp.column_method),
                    Profile::Row2 => assert!(pp.row_method),
                    Profile::Mixed => {}
                }
                assert!(case.instance.matrix().iter().flatten().all(|a| a.abs() <= 3));
                assert!(!case.xstar.is_integral());
            }
        }
    }

    #[test]
    fn same_seed_same_case() {
        let a = separation_case(&mut rng_from_seed(3), 4, 3, Profile::Col2);
        let b = separation_case(&mut rng_from_seed(3), 4, 3, Profile::Col2);
        assert_eq!(a, b);
    }

    #[test]
    fn ptas_instances_meet_preconditions() {
        let mut rng = rng_from_seed(11);
        for _ in 0..20 {
            let inst = ptas_instance(&mut rng, 7, 5);
            assert!(inst.rhs().iter().all(|&b| b >= 1));
            assert!(inst.objective().unwrap().iter().all(|&c| c >= 0));
            assert!(inst.lower_present().iter().all(|&f| !f));
        }
    }

    #[test]
    fn graph_counts() {
        assert_eq!(all_graphs(4, || 1).count(), 64);
        assert_eq!(all_graphs(1, || 1).count(), 1);
        let g = random_graph(&mut rng_from_seed(1), 7, 9);
        assert!(g.node_count() <= 7);
    }

    #[test]
    fn profile_names_round_trip() {
        for p in [Profile::Col2, Profile::Row2, Profile::Mixed] {
            assert_eq!(p.to_string().parse::<Profile>().unwrap(), p);
        }
        assert!("diag".parse::<Profile>().is_err());
    }
}
