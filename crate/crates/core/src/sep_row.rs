//! Primal separation of `{0, 1/2}`-cuts when every row of `A` has at most two
//! odd entries.
//!
//! Coordinates are nodes, plus an extra node `t`. A tight row with two odd
//! entries joins them, one with a single odd entry joins it to `t`, and a
//! tight box constraint joins its coordinate to `t`. Lengths are slacks at
//! `xstar`. Repairing the parity of a slack-one inequality is a path between
//! its odd coordinates (through `t` when only one is odd), so a shortest path
//! per candidate finds the most violated cut.

use num_traits::Signed;
use rayon::prelude::*;
use thiserror::Error;

use crate::graph::{shortest_path, LengthGraph};
use crate::model::{
    derive_cut, is_odd, is_tight_nontrivial, parity_profile, violation, ModelError, Multipliers,
    Rounding, Separated, SeparationContext,
};
use crate::rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SepRowError {
    #[error("row {row} has {count} odd entries; at most two are allowed")]
    Inapplicable { row: usize, count: usize },
    #[error("invalid candidate: {0}")]
    InvalidCandidate(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Origin of an edge in the parity graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RowEdge {
    /// A tight row of `A`.
    Row(usize),
    /// The tight box constraint of a coordinate.
    Box(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RowCandidate {
    /// A row with slack one at `xhat`.
    Row(usize),
    /// The box constraint of `coord` with slack one at `xhat`.
    Box { coord: usize, rounding: Rounding },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParityGraph {
    pub graph: LengthGraph<RowEdge>,
    /// The extra node; coordinates are `0..sink`.
    pub sink: usize,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RowStats {
    pub path_calls: usize,
    pub candidates: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowOutcome {
    pub best: Option<Separated>,
    pub stats: RowStats,
}

fn odd_entries(row: &[i64]) -> Vec<usize> {
    (0..row.len()).filter(|&i| is_odd(row[i])).collect()
}

fn check_applicable(ctx: &SeparationContext) -> Result<(), SepRowError> {
    let profile = parity_profile(ctx.instance());
    match profile.row_odd.iter().position(|&c| c > 2) {
        Some(j) => Err(SepRowError::Inapplicable {
            row: j + 1,
            count: profile.row_odd[j],
        }),
        None => Ok(()),
    }
}

pub fn build_parity_graph(ctx: &SeparationContext) -> Result<ParityGraph, SepRowError> {
    check_applicable(ctx)?;
    let instance = ctx.instance();
    let sink = instance.cols();
    let mut graph = LengthGraph::new(sink + 1);
    for &j in ctx.tight_rows() {
        let length = ctx.slack_star()[j].clone();
        match odd_entries(instance.row(j)).as_slice() {
            [v, w] => {
                graph.add_edge(*v, *w, length, RowEdge::Row(j));
            }
            [v] => {
                graph.add_edge(*v, sink, length, RowEdge::Row(j));
            }
            _ => {}
        }
    }
    for v in 0..sink {
        if let Some(r) = ctx.tight_rounding(v) {
            graph.add_edge(v, sink, ctx.rounding_cost(v, r), RowEdge::Box(v));
        }
    }
    Ok(ParityGraph { graph, sink })
}

/// Candidates in evaluation order: slack rows ascending, then slack boxes by
/// coordinate.
pub fn candidates(ctx: &SeparationContext) -> Vec<RowCandidate> {
    let rows = ctx.slack_rows().iter().map(|&j| RowCandidate::Row(j));
    let boxes = (0..ctx.instance().cols()).filter_map(|i| {
        ctx.slack_rounding(i)
            .map(|rounding| RowCandidate::Box { coord: i, rounding })
    });
    rows.chain(boxes).collect()
}

/// Multipliers for a candidate repaired along `path` (edge indices of the
/// parity graph).
pub fn multipliers_from_path(
    ctx: &SeparationContext,
    parity: &ParityGraph,
    candidate: &RowCandidate,
    path: &[usize],
) -> Result<Multipliers, SepRowError> {
    let (m, n) = (ctx.instance().rows(), ctx.instance().cols());
    let mut rows = Vec::new();
    let mut down = Vec::new();
    let mut up = Vec::new();
    let mut push = |i: usize, r: Rounding| match r {
        Rounding::Down => down.push(i),
        Rounding::Up => up.push(i),
    };
    match *candidate {
        RowCandidate::Row(j) => rows.push(j),
        RowCandidate::Box { coord, rounding } => push(coord, rounding),
    }
    for &e in path {
        match parity.graph.edge(e).tag {
            RowEdge::Row(j) => rows.push(j),
            RowEdge::Box(v) => {
                let r = ctx.tight_rounding(v).ok_or_else(|| {
                    SepRowError::Internal(format!("coordinate {} has no tight box", v + 1))
                })?;
                push(v, r);
            }
        }
    }
    rows.sort_unstable();
    down.sort_unstable();
    up.sort_unstable();
    Ok(Multipliers::halves(m, n, &rows, &down, &up)?)
}

/// Evaluates one candidate; the flag reports whether a path was computed.
fn evaluate(
    ctx: &SeparationContext,
    parity: &ParityGraph,
    candidate: &RowCandidate,
) -> Result<(bool, Option<Separated>), SepRowError> {
    let instance = ctx.instance();
    let (fixed, found) = match *candidate {
        RowCandidate::Row(j) => {
            if ctx.slack_hat()[j] != 1 {
                return Err(SepRowError::InvalidCandidate(format!(
                    "row {} does not have slack one at xhat",
                    j + 1
                )));
            }
            let fixed = ctx.slack_star()[j].clone();
            match odd_entries(instance.row(j)).as_slice() {
                [] => (fixed, None),
                [v] => (fixed, Some(shortest_path(&parity.graph, *v, parity.sink, None))),
                [v, w] => (fixed, Some(shortest_path(&parity.graph, *v, *w, None))),
                _ => unreachable!("row parity checked above"),
            }
        }
        RowCandidate::Box { coord, rounding } => {
            if ctx.slack_rounding(coord) != Some(rounding) {
                return Err(SepRowError::InvalidCandidate(format!(
                    "coordinate {} has no slack-one box on that side",
                    coord + 1
                )));
            }
            let path = shortest_path(&parity.graph, coord, parity.sink, Some(&RowEdge::Box(coord)));
            (ctx.rounding_cost(coord, rounding), Some(path))
        }
    };
    let called = found.is_some();
    let (length, path) = match found {
        None => (rational::zero(), Vec::new()),
        Some(None) => return Ok((called, None)),
        Some(Some(p)) => (p.length, p.edges),
    };
    let total = &fixed + &length;
    if total >= rational::one() {
        return Ok((called, None));
    }
    let mult = multipliers_from_path(ctx, parity, candidate, &path)?;
    let cut = derive_cut(instance, &mult)?;
    let v = violation(&cut, ctx.xstar());
    let expected = (rational::one() - &total) / rational::int(2);
    if v != expected || !v.is_positive() || !is_tight_nontrivial(ctx, &mult)? {
        return Err(SepRowError::Internal(format!(
            "path of weight {total} produced a cut with violation {v}"
        )));
    }
    Ok((called, Some(Separated { cut, violation: v })))
}

/// Most violated `{0, 1/2}`-cut tight at `xhat` and violated by `xstar`, with
/// the number of shortest-path computations spent (at most `m + n`).
/// Among equally violated cuts the earliest candidate wins.
pub fn primal_separate_row(ctx: &SeparationContext) -> Result<RowOutcome, SepRowError> {
    let parity = build_parity_graph(ctx)?;
    let cands = candidates(ctx);
    let results: Vec<_> = cands
        .par_iter()
        .map(|c| evaluate(ctx, &parity, c))
        .collect();
    let mut stats = RowStats {
        candidates: cands.len(),
        ..RowStats::default()
    };
    let mut best: Option<Separated> = None;
    for result in results {
        let (called, found) = result?;
        stats.path_calls += usize::from(called);
        if let Some(found) = found {
            if best.as_ref().is_none_or(|b| found.violation > b.violation) {
                best = Some(found);
            }
        }
    }
    Ok(RowOutcome { best, stats })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{compute_context, IlpInstance, Point};
    use crate::rational::{frac, half, int};

    fn triangle_ctx() -> SeparationContext {
        let inst = IlpInstance::with_full_box(
            vec![vec![1, 1, 0], vec![1, 0, 1], vec![0, 1, 1]],
            vec![1, 1, 1],
        )
        .unwrap();
        compute_context(
            &inst,
            &Point::from_ints(&[1, 0, 0]),
            &Point::new(vec![half(), half(), half()]),
        )
        .unwrap()
    }

    #[test]
    fn triangle_parity_graph() {
        let ctx = triangle_ctx();
        let pg = build_parity_graph(&ctx).unwrap();
        assert_eq!(pg.sink, 3);
        let edges: Vec<_> = pg
            .graph
            .edges()
            .iter()
            .map(|e| (e.ends, e.weight.clone(), e.tag))
            .collect();
        // Rows 1, 2 tight; coordinate 1 sits at its upper bound, 2 and 3 at
        // their lower bounds.
        assert_eq!(
            edges,
            vec![
                ((0, 1), int(0), RowEdge::Row(0)),
                ((0, 2), int(0), RowEdge::Row(1)),
                ((0, 3), half(), RowEdge::Box(0)),
                ((1, 3), half(), RowEdge::Box(1)),
                ((2, 3), half(), RowEdge::Box(2)),
            ]
        );
    }

    #[test]
    fn triangle_separates_blossom() {
        let out = primal_separate_row(&triangle_ctx()).unwrap();
        let best = out.best.unwrap();
        assert_eq!(best.cut.coeffs, vec![1, 1, 1]);
        assert_eq!(best.cut.rhs, 1);
        assert_eq!(best.violation, half());
        assert!(out.stats.path_calls <= 3 + 3);
    }

    #[test]
    fn even_slack_row_needs_no_path() {
        let inst = IlpInstance::with_full_box(vec![vec![2, 2]], vec![3]).unwrap();
        let xstar = Point::new(vec![int(1), frac(1, 4)]);
        let ctx = compute_context(&inst, &Point::from_ints(&[1, 0]), &xstar).unwrap();
        let out = primal_separate_row(&ctx).unwrap();
        let best = out.best.unwrap();
        assert_eq!(best.cut.coeffs, vec![1, 1]);
        assert_eq!(best.violation, frac(1, 4));
        // The even row needs no path; each slack box needs one.
        assert_eq!(out.stats.path_calls, 2);
    }

    #[test]
    fn box_candidate_forbids_own_box() {
        // 2 x1 <= 1 is tight at 0 and has no odd entry; only the box route exists.
        let inst = IlpInstance::with_full_box(vec![vec![1, 1]], vec![1]).unwrap();
        let ctx = compute_context(&inst, &Point::from_ints(&[1, 0]), &Point::from_ints(&[1, 0]))
            .unwrap();
        let pg = build_parity_graph(&ctx).unwrap();
        assert_eq!(pg.graph.edges().len(), 3);
        assert!(primal_separate_row(&ctx).unwrap().best.is_none());
    }

    #[test]
    fn inapplicable_instance() {
        let inst = IlpInstance::with_full_box(vec![vec![1, 1, 1]], vec![1]).unwrap();
        let ctx = compute_context(&inst, &Point::zeros(3), &Point::zeros(3)).unwrap();
        assert_eq!(
            primal_separate_row(&ctx).unwrap_err(),
            SepRowError::Inapplicable { row: 1, count: 3 }
        );
    }

    #[test]
    fn path_multipliers() {
        let ctx = triangle_ctx();
        let pg = build_parity_graph(&ctx).unwrap();
        let mult = multipliers_from_path(&ctx, &pg, &RowCandidate::Row(2), &[0, 1]).unwrap();
        assert_eq!(mult, Multipliers::halves(3, 3, &[0, 1, 2], &[], &[]).unwrap());
    }
}
