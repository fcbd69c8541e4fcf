//! Primal separation of `{0, 1/2}`-cuts when every column of `A` has at most
//! two odd entries.
//!
//! A nontrivial cut tight at `xhat` involves tight inequalities plus exactly
//! one inequality with slack one. For every choice of that slack inequality
//! (a row with slack one, or a box constraint paired with a tight row that has
//! an odd entry in its coordinate) one minimum cut decides whether some cut of
//! that shape is violated by `xstar`: a source-side set `U` stands for
//! `lambda = 1/2 chi_U`, and the cut capacity is twice the weighted slack of
//! the resulting inequality at `xstar`.

use num_traits::Signed;
use rayon::prelude::*;
use thiserror::Error;

use crate::graph::{min_cut, CapacitatedGraph};
use crate::model::{
    derive_cut, is_odd, is_tight_nontrivial, parity_profile, violation, ModelError, Multipliers,
    Rounding, Separated, SeparationContext,
};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SepColError {
    #[error("column {column} has {count} odd entries; at most two are allowed")]
    Inapplicable { column: usize, count: usize },
    #[error("coordinate {coord} has no box constraint with slack one at xhat")]
    AbsentSlackBox { coord: usize },
    #[error("invalid candidate: {0}")]
    InvalidCandidate(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Which inequality plays the role of the unique slack-one inequality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CandidateKind {
    /// A row of `A` with slack exactly one at `xhat`.
    Row(usize),
    /// The box constraint at `coord` with slack one at `xhat`, repairing
    /// `coord` for the tight row `committed_row`.
    Box {
        coord: usize,
        committed_row: usize,
        rounding: Rounding,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlackCandidate {
    pub kind: CandidateKind,
    /// Weighted slack at `xstar` contributed outside the graph: zero for rows,
    /// the box slack for box candidates.
    pub fixed_cost: Rational,
}

/// Origin of an edge in the cut graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ColEdge {
    /// Slack of a row at `xstar`.
    RowSlack(usize),
    /// Rounding of a coordinate.
    Coordinate(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutGraph {
    pub graph: CapacitatedGraph<ColEdge>,
    pub source: usize,
    pub sink: usize,
    /// Rows represented by each node after contraction. Rows merged into the
    /// sink never receive a multiplier.
    pub members: Vec<Vec<usize>>,
    pub candidate: SlackCandidate,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ColStats {
    pub min_cut_calls: usize,
    pub candidates: usize,
    /// Candidates whose source was contracted into the sink.
    pub skipped: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColOutcome {
    pub best: Option<Separated>,
    pub stats: ColStats,
}

fn check_applicable(ctx: &SeparationContext) -> Result<(), SepColError> {
    let profile = parity_profile(ctx.instance());
    match profile.column_odd.iter().position(|&c| c > 2) {
        Some(i) => Err(SepColError::Inapplicable {
            column: i + 1,
            count: profile.column_odd[i],
        }),
        None => Ok(()),
    }
}

/// Tight rows with an odd entry in column `i`.
fn odd_tight_rows(ctx: &SeparationContext, i: usize) -> Vec<usize> {
    ctx.tight_rows()
        .iter()
        .copied()
        .filter(|&j| is_odd(ctx.instance().row(j)[i]))
        .collect()
}

/// All slack candidates in evaluation order: slack rows ascending, then box
/// candidates by coordinate and committed row.
pub fn candidates(ctx: &SeparationContext) -> Vec<SlackCandidate> {
    let mut out: Vec<SlackCandidate> = ctx
        .slack_rows()
        .iter()
        .map(|&j| SlackCandidate {
            kind: CandidateKind::Row(j),
            fixed_cost: rational::zero(),
        })
        .collect();
    for i in 0..ctx.instance().cols() {
        let Some(rounding) = ctx.slack_rounding(i) else {
            continue;
        };
        for committed_row in odd_tight_rows(ctx, i) {
            out.push(SlackCandidate {
                kind: CandidateKind::Box {
                    coord: i,
                    committed_row,
                    rounding,
                },
                fixed_cost: ctx.rounding_cost(i, rounding),
            });
        }
    }
    out
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, v: usize) -> usize {
        let mut root = v;
        while self.0[root] != root {
            root = self.0[root];
        }
        let mut v = v;
        while self.0[v] != root {
            let next = self.0[v];
            self.0[v] = root;
            v = next;
        }
        root
    }

    /// Keeps the larger index as representative so the sink stays a root.
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.0[lo] = hi;
        }
    }
}

/// Builds the min-cut network for one candidate.
///
/// Returns `Ok(None)` when contraction merges the source into the sink: no
/// cut of this shape exists.
pub fn build_cut_graph(
    ctx: &SeparationContext,
    candidate: &SlackCandidate,
) -> Result<Option<CutGraph>, SepColError> {
    check_applicable(ctx)?;
    let instance = ctx.instance();

    let (rows, source_row, excluded) = match candidate.kind {
        CandidateKind::Row(j) => {
            if ctx.slack_hat()[j] != 1 {
                return Err(SepColError::InvalidCandidate(format!(
                    "row {} does not have slack one at xhat",
                    j + 1
                )));
            }
            let mut rows = ctx.tight_rows().to_vec();
            rows.push(j);
            rows.sort_unstable();
            (rows, j, None)
        }
        CandidateKind::Box {
            coord,
            committed_row,
            rounding,
        } => {
            if ctx.slack_rounding(coord) != Some(rounding) {
                return Err(SepColError::AbsentSlackBox { coord: coord + 1 });
            }
            if !ctx.is_tight(committed_row) || !is_odd(instance.row(committed_row)[coord]) {
                return Err(SepColError::InvalidCandidate(format!(
                    "row {} is not tight with an odd entry in column {}",
                    committed_row + 1,
                    coord + 1
                )));
            }
            (ctx.tight_rows().to_vec(), committed_row, Some(coord))
        }
    };

    let node_of = |row: usize| rows.binary_search(&row).expect("row is a graph node");
    let sink = rows.len();
    let mut uf = UnionFind((0..=sink).collect());
    let mut pending: Vec<(usize, usize, Rational, ColEdge)> = Vec::new();

    for (v, &row) in rows.iter().enumerate() {
        pending.push((v, sink, ctx.slack_star()[row].clone(), ColEdge::RowSlack(row)));
    }
    for i in 0..instance.cols() {
        let odd: Vec<usize> = rows
            .iter()
            .enumerate()
            .filter(|(_, &row)| is_odd(instance.row(row)[i]))
            .map(|(v, _)| v)
            .collect();
        if excluded == Some(i) {
            // The slack box repairs this coordinate for the committed row; the
            // other odd row would make the coordinate integral again, so it
            // must stay out of U.
            for &v in &odd {
                if rows[v] != source_row {
                    uf.union(v, sink);
                }
            }
            continue;
        }
        let far_end = match odd.as_slice() {
            [] => continue,
            [v] => (*v, sink),
            [v, w] => (*v, *w),
            _ => unreachable!("column parity checked above"),
        };
        match ctx.tight_rounding(i) {
            Some(r) => pending.push((far_end.0, far_end.1, ctx.rounding_cost(i, r), ColEdge::Coordinate(i))),
            None => uf.union(far_end.0, far_end.1),
        }
    }

    let source_node = node_of(source_row);
    let sink_root = uf.find(sink);
    if uf.find(source_node) == sink_root {
        return Ok(None);
    }
    // Compact classes: non-sink classes in order of their smallest node, sink last.
    let mut class_of_root = vec![usize::MAX; sink + 1];
    let mut members: Vec<Vec<usize>> = Vec::new();
    for v in 0..sink {
        let root = uf.find(v);
        if root == sink_root {
            continue;
        }
        if class_of_root[root] == usize::MAX {
            class_of_root[root] = members.len();
            members.push(Vec::new());
        }
        members[class_of_root[root]].push(rows[v]);
    }
    let sink_class = members.len();
    class_of_root[sink_root] = sink_class;
    members.push(
        (0..sink)
            .filter(|&v| uf.find(v) == sink_root)
            .map(|v| rows[v])
            .collect(),
    );

    let mut graph = CapacitatedGraph::new(members.len());
    for (u, v, cap, tag) in pending {
        let cu = class_of_root[uf.find(u)];
        let cv = class_of_root[uf.find(v)];
        if cu != cv {
            graph.add_edge(cu, cv, cap, tag);
        }
    }
    Ok(Some(CutGraph {
        graph,
        source: class_of_root[uf.find(source_node)],
        sink: sink_class,
        members,
        candidate: candidate.clone(),
    }))
}

/// Reads `lambda = 1/2 chi_U` off a source side `U` and repairs every
/// coordinate left fractional.
pub fn extract_multipliers(
    ctx: &SeparationContext,
    cut_graph: &CutGraph,
    source_side: &[bool],
) -> Result<Multipliers, SepColError> {
    if !source_side[cut_graph.source] || source_side[cut_graph.sink] {
        return Err(SepColError::Internal(
            "source side must contain the source and exclude the sink".into(),
        ));
    }
    let instance = ctx.instance();
    let (m, n) = (instance.rows(), instance.cols());
    let mut selected: Vec<usize> = cut_graph
        .members
        .iter()
        .enumerate()
        .filter(|(node, _)| source_side[*node])
        .flat_map(|(_, rows)| rows.iter().copied())
        .collect();
    selected.sort_unstable();

    let slack_box = match cut_graph.candidate.kind {
        CandidateKind::Box {
            coord, rounding, ..
        } => Some((coord, rounding)),
        CandidateKind::Row(_) => None,
    };
    let mut down = Vec::new();
    let mut up = Vec::new();
    for i in 0..n {
        let odd = selected
            .iter()
            .filter(|&&j| is_odd(instance.row(j)[i]))
            .count()
            % 2
            == 1;
        let rounding = match slack_box {
            Some((coord, r)) if coord == i => {
                if !odd {
                    return Err(SepColError::Internal(format!(
                        "slack box coordinate {} is integral",
                        i + 1
                    )));
                }
                Some(r)
            }
            _ if odd => Some(ctx.tight_rounding(i).ok_or_else(|| {
                SepColError::Internal(format!("coordinate {} cannot be repaired", i + 1))
            })?),
            _ => None,
        };
        match rounding {
            Some(Rounding::Down) => down.push(i),
            Some(Rounding::Up) => up.push(i),
            None => {}
        }
    }
    Ok(Multipliers::halves(m, n, &selected, &down, &up)?)
}

/// Min-cut evaluation of one candidate. `Ok(None)` for skipped candidates.
fn evaluate(
    ctx: &SeparationContext,
    candidate: &SlackCandidate,
) -> Result<Option<Option<Separated>>, SepColError> {
    let Some(cg) = build_cut_graph(ctx, candidate)? else {
        return Ok(None);
    };
    let cut = min_cut(&cg.graph, cg.source, cg.sink);
    let total = &candidate.fixed_cost + &cut.value;
    if total >= rational::one() {
        return Ok(Some(None));
    }
    let mult = extract_multipliers(ctx, &cg, &cut.source_side)?;
    let derived = derive_cut(ctx.instance(), &mult)?;
    let v = violation(&derived, ctx.xstar());
    let expected = (rational::one() - &total) / rational::int(2);
    if v != expected || !v.is_positive() || !is_tight_nontrivial(ctx, &mult)? {
        return Err(SepColError::Internal(format!(
            "min cut of weight {total} produced a cut with violation {v}"
        )));
    }
    Ok(Some(Some(Separated {
        cut: derived,
        violation: v,
    })))
}

/// Most violated `{0, 1/2}`-cut that is tight at `xhat` and violated by
/// `xstar`, with the number of min-cut computations spent.
///
/// Candidates are evaluated in parallel; among equally violated cuts the one
/// from the earliest candidate wins.
pub fn primal_separate_col(ctx: &SeparationContext) -> Result<ColOutcome, SepColError> {
    check_applicable(ctx)?;
    let cands = candidates(ctx);
    let results: Vec<_> = cands.par_iter().map(|c| evaluate(ctx, c)).collect();
    let mut stats = ColStats {
        candidates: cands.len(),
        ..ColStats::default()
    };
    let mut best: Option<Separated> = None;
    for result in results {
        match result? {
            None => stats.skipped += 1,
            Some(found) => {
                stats.min_cut_calls += 1;
                if let Some(found) = found {
                    if best.as_ref().is_none_or(|b| found.violation > b.violation) {
                        best = Some(found);
                    }
                }
            }
        }
    }
    Ok(ColOutcome { best, stats })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{compute_context, IlpInstance, Point};
    use crate::rational::{half, int};

    fn triangle() -> IlpInstance {
        IlpInstance::with_full_box(
            vec![vec![1, 1, 0], vec![1, 0, 1], vec![0, 1, 1]],
            vec![1, 1, 1],
        )
        .unwrap()
    }

    fn triangle_ctx() -> SeparationContext {
        compute_context(
            &triangle(),
            &Point::from_ints(&[1, 0, 0]),
            &Point::new(vec![half(), half(), half()]),
        )
        .unwrap()
    }

    fn row_candidate(j: usize) -> SlackCandidate {
        SlackCandidate {
            kind: CandidateKind::Row(j),
            fixed_cost: int(0),
        }
    }

    #[test]
    fn triangle_graph_matches_hand_construction() {
        let ctx = triangle_ctx();
        let cg = build_cut_graph(&ctx, &row_candidate(2)).unwrap().unwrap();
        assert_eq!(cg.members, vec![vec![0], vec![1], vec![2], vec![]]);
        assert_eq!((cg.source, cg.sink), (2, 3));
        let edges: Vec<_> = cg
            .graph
            .edges()
            .iter()
            .map(|e| (e.ends, e.weight.clone(), e.tag))
            .collect();
        assert_eq!(
            edges,
            vec![
                ((0, 3), int(0), ColEdge::RowSlack(0)),
                ((1, 3), int(0), ColEdge::RowSlack(1)),
                ((2, 3), int(0), ColEdge::RowSlack(2)),
                ((0, 1), half(), ColEdge::Coordinate(0)),
                ((0, 2), half(), ColEdge::Coordinate(1)),
                ((1, 2), half(), ColEdge::Coordinate(2)),
            ]
        );
        let cut = min_cut(&cg.graph, cg.source, cg.sink);
        assert_eq!(cut.value, int(0));
        assert_eq!(cut.source_side, vec![true, true, true, false]);
        let mult = extract_multipliers(&ctx, &cg, &cut.source_side).unwrap();
        assert_eq!(mult, Multipliers::halves(3, 3, &[0, 1, 2], &[], &[]).unwrap());
    }

    #[test]
    fn triangle_separates_blossom() {
        let out = primal_separate_col(&triangle_ctx()).unwrap();
        let best = out.best.unwrap();
        assert_eq!(best.cut.coeffs, vec![1, 1, 1]);
        assert_eq!(best.cut.rhs, 1);
        assert_eq!(best.violation, half());
        assert!(out.stats.min_cut_calls <= 3 + 2 * 3);
    }

    #[test]
    fn no_tight_rows_gives_star_graph() {
        // Single row with slack one at xhat = 0; odd entries in columns 1, 2.
        let inst = IlpInstance::with_full_box(vec![vec![1, 1, 2]], vec![1]).unwrap();
        let zero = Point::zeros(3);
        let ctx = compute_context(&inst, &zero, &zero).unwrap();
        let cg = build_cut_graph(&ctx, &row_candidate(0)).unwrap().unwrap();
        assert_eq!(cg.graph.node_count(), 2);
        let tags: Vec<_> = cg.graph.edges().iter().map(|e| e.tag).collect();
        assert_eq!(
            tags,
            vec![ColEdge::RowSlack(0), ColEdge::Coordinate(0), ColEdge::Coordinate(1)]
        );
    }

    #[test]
    fn all_even_slack_row() {
        // 2x1 + 2x2 <= 3 at xhat = (1, 0): slack one, no odd entries.
        let inst = IlpInstance::with_full_box(vec![vec![2, 2]], vec![3]).unwrap();
        let xstar = Point::new(vec![int(1), crate::rational::frac(1, 4)]);
        let ctx = compute_context(&inst, &Point::from_ints(&[1, 0]), &xstar).unwrap();
        let cg = build_cut_graph(&ctx, &row_candidate(0)).unwrap().unwrap();
        assert_eq!(cg.graph.edges().len(), 1);
        let side = vec![true, false];
        let mult = extract_multipliers(&ctx, &cg, &side).unwrap();
        assert_eq!(mult, Multipliers::halves(1, 2, &[0], &[], &[]).unwrap());
        let out = primal_separate_col(&ctx).unwrap();
        let best = out.best.unwrap();
        assert_eq!(best.cut.coeffs, vec![1, 1]);
        assert_eq!(best.cut.rhs, 1);
        assert_eq!(best.violation, crate::rational::frac(1, 4));
    }

    #[test]
    fn rounding_down_cut_edge() {
        // Row 0 (slack one): x1 + x2 <= 1 at xhat = 0, x* = (1/4, 1/4).
        let inst = IlpInstance::with_full_box(vec![vec![1, 1]], vec![1]).unwrap();
        let quarter = crate::rational::frac(1, 4);
        let xstar = Point::new(vec![quarter.clone(), quarter]);
        let ctx = compute_context(&inst, &Point::zeros(2), &xstar).unwrap();
        let cg = build_cut_graph(&ctx, &row_candidate(0)).unwrap().unwrap();
        let mult = extract_multipliers(&ctx, &cg, &[true, false]).unwrap();
        assert_eq!(mult.mu_down_numerators(), &[1, 1]);
        // 1/2 (slack 1/2) + 1/4 + 1/4 = 1, not violated.
        assert!(primal_separate_col(&ctx).unwrap().best.is_none());
    }

    #[test]
    fn missing_box_contracts_source_into_sink() {
        // Odd entry in column 1 without a lower bound at xhat_1 = 0.
        let inst =
            IlpInstance::new(vec![vec![1]], vec![1], vec![false], vec![true], None).unwrap();
        let ctx = compute_context(&inst, &Point::zeros(1), &Point::zeros(1)).unwrap();
        assert!(build_cut_graph(&ctx, &row_candidate(0)).unwrap().is_none());
        let out = primal_separate_col(&ctx).unwrap();
        assert!(out.best.is_none());
        assert_eq!(out.stats.skipped, 1);
    }

    #[test]
    fn identical_points_give_nothing() {
        let xhat = Point::from_ints(&[1, 0, 0]);
        let ctx = compute_context(&triangle(), &xhat, &xhat).unwrap();
        assert!(primal_separate_col(&ctx).unwrap().best.is_none());
    }

    #[test]
    fn inapplicable_instance() {
        let inst = IlpInstance::with_full_box(vec![vec![1], vec![1], vec![1]], vec![1, 1, 1])
            .unwrap();
        let ctx = compute_context(&inst, &Point::zeros(1), &Point::zeros(1)).unwrap();
        assert_eq!(
            primal_separate_col(&ctx).unwrap_err(),
            SepColError::Inapplicable {
                column: 1,
                count: 3
            }
        );
    }

    #[test]
    fn box_candidate_with_absent_slack_box_is_rejected() {
        let inst = IlpInstance::new(vec![vec![1, 1]], vec![1], vec![true; 2], vec![false; 2], None)
            .unwrap();
        let ctx = compute_context(&inst, &Point::from_ints(&[1, 0]), &Point::from_ints(&[1, 0]))
            .unwrap();
        let cand = SlackCandidate {
            kind: CandidateKind::Box {
                coord: 1,
                committed_row: 0,
                rounding: Rounding::Up,
            },
            fixed_cost: int(1),
        };
        assert_eq!(
            build_cut_graph(&ctx, &cand).unwrap_err(),
            SepColError::AbsentSlackBox { coord: 2 }
        );
    }
}
