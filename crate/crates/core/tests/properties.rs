use std::collections::BTreeSet;

use num_traits::Signed;
use proptest::prelude::*;
use zerohalf::gen::{rng_from_seed, separation_case, Profile, SeparationCase};
use zerohalf::graph::{min_cut, CapacitatedGraph};
use zerohalf::model::strongest_cuts;
use zerohalf::oracle::BruteOracle;
use zerohalf::rational::{int, Rational};
use zerohalf::sep_col::{self, build_cut_graph, extract_multipliers, primal_separate_col};
use zerohalf::sep_row::{self, build_parity_graph, multipliers_from_path, primal_separate_row};
use zerohalf::{
    compute_context, derive_cut, is_tight_nontrivial, parity_profile, violation, IlpInstance,
    Multipliers, Point,
};

fn case(seed: u64, rows: usize, cols: usize, profile: Profile) -> SeparationCase {
    separation_case(&mut rng_from_seed(seed), rows, cols, profile)
}

/// Every `(lambda, mu_down, mu_up)` in `{0, 1/2}` with admissible box use and
/// an integral combination, built by plain recursion.
fn recursive_multipliers(inst: &IlpInstance) -> BTreeSet<Multipliers> {
    fn go(inst: &IlpInstance, pos: usize, numbers: &mut Vec<u32>, out: &mut BTreeSet<Multipliers>) {
        let (m, n) = (inst.rows(), inst.cols());
        if pos == m + 2 * n {
            let lambda = numbers[..m].to_vec();
            let down = numbers[m..m + n].to_vec();
            let up = numbers[m + n..].to_vec();
            if let Ok(mult) = Multipliers::new(2, lambda, down, up) {
                if derive_cut(inst, &mult).is_ok() {
                    out.insert(mult);
                }
            }
            return;
        }
        let allowed = if pos < m {
            true
        } else if pos < m + n {
            inst.lower_present()[pos - m]
        } else {
            inst.upper_present()[pos - m - n]
        };
        numbers.push(0);
        go(inst, pos + 1, numbers, out);
        numbers.pop();
        if allowed {
            numbers.push(1);
            go(inst, pos + 1, numbers, out);
            numbers.pop();
        }
    }
    let mut out = BTreeSet::new();
    go(inst, 0, &mut Vec::new(), &mut out);
    out
}

/// Integral points of the instance inside `[-1, 2]^n`.
fn integral_points(inst: &IlpInstance) -> Vec<Point> {
    let n = inst.cols();
    let mut out = Vec::new();
    let mut x = vec![-1i64; n];
    loop {
        let p = Point::from_ints(&x);
        if inst.contains(p.coords()) {
            out.push(p);
        }
        let mut i = 0;
        while i < n && x[i] == 2 {
            x[i] = -1;
            i += 1;
        }
        if i == n {
            return out;
        }
        x[i] += 1;
    }
}

fn sizes() -> impl Strategy<Value = (u64, usize, usize)> {
    (any::<u64>(), 1usize..=5, 1usize..=4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn enumeration_matches_recursion((seed, rows, cols) in sizes()) {
        let c = case(seed, rows.min(4), cols.min(3), Profile::Mixed);
        let enumerated: BTreeSet<Multipliers> = BruteOracle::default()
            .enumerate_valid_multipliers(&c.instance, None)
            .map(|m| m.unwrap())
            .collect();
        prop_assert_eq!(enumerated, recursive_multipliers(&c.instance));
    }

    #[test]
    fn standard_separation_is_complete((seed, rows, cols) in sizes()) {
        let c = case(seed, rows, cols, Profile::Mixed);
        let found = BruteOracle::default().standard_separate(&c.instance, &c.xstar).unwrap();
        let any_violated = recursive_multipliers(&c.instance)
            .iter()
            .any(|m| violation(&derive_cut(&c.instance, m).unwrap(), c.xstar.coords()).is_positive());
        prop_assert_eq!(found.is_some(), any_violated);
    }

    #[test]
    fn derived_cuts_hold_on_integral_points((seed, rows, cols) in sizes()) {
        let c = case(seed, rows, cols.min(3), Profile::Mixed);
        let cuts = BruteOracle::default().all_cuts(&c.instance).unwrap();
        for p in integral_points(&c.instance) {
            for cut in &cuts {
                prop_assert!(cut.is_satisfied_by(p.coords()), "{} cuts off {}", cut, p);
            }
        }
    }

    #[test]
    fn tightness_matches_weighted_slack_for_mod3((seed, rows, cols) in sizes()) {
        let c = case(seed, rows.min(3), cols.min(2), Profile::Mixed);
        let ctx = compute_context(&c.instance, &c.xhat, &c.xhat).unwrap();
        for mult in BruteOracle::with_modulus(3).enumerate_valid_multipliers(&c.instance, None) {
            let mult = mult.unwrap();
            let ws = ctx.weighted_slack_hat(&mult);
            let expected = ws.is_positive() && ws < int(1);
            prop_assert_eq!(is_tight_nontrivial(&ctx, &mult).unwrap(), expected);
            let cut = derive_cut(&c.instance, &mult).unwrap();
            let tight = cut.lhs(c.xhat.coords()) == int(cut.rhs);
            prop_assert_eq!(expected, tight && !cut.unrounded_rhs.is_integer());
        }
    }

    #[test]
    fn cut_capacity_is_twice_weighted_slack((seed, rows, cols) in sizes()) {
        let c = case(seed, rows, cols, Profile::Col2);
        let ctx = compute_context(&c.instance, &c.xhat, &c.xstar).unwrap();
        for cand in sep_col::candidates(&ctx) {
            let Some(cg) = build_cut_graph(&ctx, &cand).unwrap() else { continue };
            let free: Vec<usize> = (0..cg.graph.node_count())
                .filter(|&v| v != cg.source && v != cg.sink)
                .collect();
            for mask in 0u32..1 << free.len() {
                let mut side = vec![false; cg.graph.node_count()];
                side[cg.source] = true;
                for (k, &v) in free.iter().enumerate() {
                    side[v] = mask >> k & 1 == 1;
                }
                let mult = extract_multipliers(&ctx, &cg, &side).unwrap();
                let lhs = &cand.fixed_cost + cg.graph.cut_capacity(&side);
                prop_assert_eq!(lhs, ctx.weighted_slack_star(&mult) * int(2));
                prop_assert_eq!(ctx.weighted_slack_hat(&mult), Rational::new(1.into(), 2.into()));
            }
        }
    }

    #[test]
    fn path_length_is_twice_weighted_slack((seed, rows, cols) in sizes()) {
        let c = case(seed, rows, cols, Profile::Row2);
        let ctx = compute_context(&c.instance, &c.xhat, &c.xstar).unwrap();
        let pg = build_parity_graph(&ctx).unwrap();
        for cand in sep_row::candidates(&ctx) {
            let (fixed, ends, forbidden) = match cand {
                sep_row::RowCandidate::Row(j) => {
                    let odd: Vec<usize> = (0..c.instance.cols())
                        .filter(|&i| c.instance.row(j)[i] % 2 != 0)
                        .collect();
                    let ends = match odd.as_slice() {
                        [v] => Some((*v, pg.sink)),
                        [v, w] => Some((*v, *w)),
                        _ => None,
                    };
                    (ctx.slack_star()[j].clone(), ends, None)
                }
                sep_row::RowCandidate::Box { coord, rounding } => (
                    ctx.rounding_cost(coord, rounding),
                    Some((coord, pg.sink)),
                    Some(sep_row::RowEdge::Box(coord)),
                ),
            };
            let path = match ends {
                None => Vec::new(),
                Some((s, t)) => match zerohalf::graph::shortest_path(&pg.graph, s, t, forbidden.as_ref()) {
                    Some(p) => p.edges,
                    None => continue,
                },
            };
            let mult = multipliers_from_path(&ctx, &pg, &cand, &path).unwrap();
            let length = path.iter().fold(int(0), |acc, &e| acc + &pg.graph.edge(e).weight);
            prop_assert_eq!(fixed + length, ctx.weighted_slack_star(&mult) * int(2));
            prop_assert!(is_tight_nontrivial(&ctx, &mult).unwrap());
        }
    }

    #[test]
    fn separators_agree_when_both_apply((seed, rows, cols) in sizes()) {
        let c = case(seed, rows, cols, Profile::Col2);
        let profile = parity_profile(&c.instance);
        prop_assume!(profile.row_method);
        let ctx = compute_context(&c.instance, &c.xhat, &c.xstar).unwrap();
        let col = primal_separate_col(&ctx).unwrap().best.map(|s| s.violation);
        let row = primal_separate_row(&ctx).unwrap().best.map(|s| s.violation);
        prop_assert_eq!(col, row);
    }

    #[test]
    fn returned_cuts_are_valid_and_tight((seed, rows, cols) in sizes()) {
        let c = case(seed, rows, cols.min(3), Profile::Col2);
        let ctx = compute_context(&c.instance, &c.xhat, &c.xstar).unwrap();
        if let Some(found) = primal_separate_col(&ctx).unwrap().best {
            prop_assert_eq!(found.cut.lhs(c.xhat.coords()), int(found.cut.rhs));
            prop_assert!(found.violation.is_positive());
            for p in integral_points(&c.instance) {
                prop_assert!(found.cut.is_satisfied_by(p.coords()));
            }
        }
    }
}

#[test]
fn min_cut_matches_exhaustive_cut() {
    let mut rng = rng_from_seed(99);
    use rand::Rng;
    for _ in 0..200 {
        let nodes = rng.gen_range(2..=6);
        let mut g = CapacitatedGraph::new(nodes);
        for u in 0..nodes {
            for v in u + 1..nodes {
                if rng.gen_bool(0.6) {
                    g.add_edge(u, v, Rational::new(rng.gen_range(0..6).into(), rng.gen_range(1..4).into()), ());
                }
            }
        }
        let cut = min_cut(&g, 0, nodes - 1);
        let mut best: Option<Rational> = None;
        for mask in 0u32..1 << nodes {
            let side: Vec<bool> = (0..nodes).map(|v| mask >> v & 1 == 1).collect();
            if side[0] && !side[nodes - 1] {
                let cap = g.cut_capacity(&side);
                if best.as_ref().is_none_or(|b| cap < *b) {
                    best = Some(cap);
                }
            }
        }
        assert_eq!(Some(cut.value), best);
    }
}

/// Some point violates only cuts that are not tight at `xhat`: standard
/// separation finds one, primal separation reports none.
#[test]
fn primal_separation_can_miss_standard_cuts() {
    let oracle = BruteOracle::default();
    let mut witnesses = 0;
    for seed in 0..400 {
        let c = case(seed, 4, 3, Profile::Col2);
        let ctx = compute_context(&c.instance, &c.xhat, &c.xstar).unwrap();
        let standard = oracle.standard_separate(&c.instance, &c.xstar).unwrap();
        let primal = oracle.primal_separate(&ctx).unwrap();
        if standard.is_some() && primal.is_none() {
            witnesses += 1;
            assert!(primal_separate_col(&ctx).unwrap().best.is_none());
        }
    }
    assert!(witnesses > 0, "no witness among generated instances");
}

#[test]
fn strongest_cuts_are_idempotent() {
    let c = case(5, 4, 3, Profile::Mixed);
    let cuts = BruteOracle::default().all_cuts(&c.instance).unwrap();
    assert_eq!(strongest_cuts(cuts.clone()), cuts);
}
