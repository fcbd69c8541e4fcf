//! Exhaustive ground truth for small instances.
//!
//! Every multiplier vector on the mod-`q` grid is enumerated, together with
//! every admissible way of repairing fractional coordinates through the box
//! constraints. Nothing here is polynomial; a hard candidate budget makes
//! misuse on large instances fail loudly instead of hanging.

use std::collections::VecDeque;

use num_traits::Signed;
use thiserror::Error;

use crate::lp::{solve_with_cut_pool, LinearProgram, LpOutcome, Sense};
use crate::matching::WeightedGraph;
use crate::model::{
    derive_cut, is_tight_nontrivial, strongest_cuts, violation, Cut, IlpInstance, ModelError,
    Multipliers, Point, Separated, SeparationContext,
};
use crate::rational::{self, Rational};

/// Default cap on enumerated multiplier candidates.
pub const DEFAULT_BUDGET: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("enumeration budget of {budget} candidates exceeded")]
    BudgetExceeded { budget: u64 },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("relaxation is infeasible")]
    Infeasible,
    #[error("relaxation is unbounded")]
    Unbounded,
}

/// Configuration for exhaustive enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BruteOracle {
    pub modulus: u32,
    pub budget: u64,
}

impl Default for BruteOracle {
    fn default() -> Self {
        BruteOracle {
            modulus: 2,
            budget: DEFAULT_BUDGET,
        }
    }
}

/// Lazily yields every valid [`Multipliers`] of an instance.
///
/// A candidate is one `(lambda, rounding choice)` pair; a `lambda` that cannot
/// be repaired at all still counts as one candidate.
pub struct MultiplierEnumerator<'a> {
    instance: &'a IlpInstance,
    modulus: u32,
    /// Largest admissible `sum(lambda numerators)`.
    numer_bound: Option<u64>,
    budget: u64,
    examined: u64,
    lambda: Vec<u32>,
    exhausted: bool,
    pending: VecDeque<Multipliers>,
    failed: bool,
}

impl<'a> MultiplierEnumerator<'a> {
    fn new(
        instance: &'a IlpInstance,
        modulus: u32,
        support_bound: Option<&Rational>,
        budget: u64,
    ) -> Self {
        let numer_bound = support_bound.map(|bound| {
            let scaled = bound * rational::int(i64::from(modulus));
            let floor = scaled.floor().to_integer();
            u64::try_from(floor).unwrap_or(0)
        });
        MultiplierEnumerator {
            instance,
            modulus,
            numer_bound,
            budget,
            examined: 0,
            lambda: vec![0; instance.rows()],
            exhausted: false,
            pending: VecDeque::new(),
            failed: false,
        }
    }

    /// Number of candidates examined so far.
    pub fn examined(&self) -> u64 {
        self.examined
    }

    fn advance_lambda(&mut self) {
        for v in self.lambda.iter_mut() {
            *v += 1;
            if *v < self.modulus {
                return;
            }
            *v = 0;
        }
        self.exhausted = true;
    }

    /// Expands the current `lambda` into all valid rounding choices.
    fn expand(&mut self) -> u64 {
        let q = i64::from(self.modulus);
        let n = self.instance.cols();
        let mut residues = vec![0i64; n];
        for (j, &l) in self.lambda.iter().enumerate() {
            if l == 0 {
                continue;
            }
            for (r, &a) in residues.iter_mut().zip(self.instance.row(j)) {
                *r += i64::from(l) * a;
            }
        }
        // Per fractional coordinate: the admissible (mu_down, mu_up) pairs.
        let mut options: Vec<(usize, Vec<(u32, u32)>)> = Vec::new();
        for (i, r) in residues.iter().enumerate() {
            let r = r.rem_euclid(q) as u32;
            if r == 0 {
                continue;
            }
            let mut choices = Vec::with_capacity(2);
            if self.instance.lower_present()[i] {
                choices.push((r, 0));
            }
            if self.instance.upper_present()[i] {
                choices.push((0, self.modulus - r));
            }
            if choices.is_empty() {
                return 1;
            }
            options.push((i, choices));
        }
        let total: u64 = options.iter().map(|(_, c)| c.len() as u64).product();
        let mut counters = vec![0usize; options.len()];
        for _ in 0..total {
            let mut mu_down = vec![0; n];
            let mut mu_up = vec![0; n];
            for ((i, choices), &k) in options.iter().zip(&counters) {
                mu_down[*i] = choices[k].0;
                mu_up[*i] = choices[k].1;
            }
            self.pending.push_back(
                Multipliers::new(self.modulus, self.lambda.clone(), mu_down, mu_up)
                    .expect("enumerated multipliers lie on the grid"),
            );
            for (slot, (_, choices)) in counters.iter_mut().zip(&options) {
                *slot += 1;
                if *slot < choices.len() {
                    break;
                }
                *slot = 0;
            }
        }
        total.max(1)
    }
}

impl Iterator for MultiplierEnumerator<'_> {
    type Item = Result<Multipliers, OracleError>;

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            if self.failed {
                return None;
            }
            if let Some(m) = self.pending.pop_front() {
                return Some(Ok(m));
            }
            if self.exhausted {
                return None;
            }
            let within_bound = self.numer_bound.is_none_or(|bound| {
                self.lambda.iter().map(|&v| u64::from(v)).sum::<u64>() <= bound
            });
            if within_bound {
                self.examined += self.expand();
                if self.examined > self.budget {
                    self.failed = true;
                    self.pending.clear();
                    return Some(Err(OracleError::BudgetExceeded {
                        budget: self.budget,
                    }));
                }
            }
            self.advance_lambda();
        }
    }
}

impl BruteOracle {
    pub fn with_modulus(modulus: u32) -> Self {
        BruteOracle {
            modulus,
            ..Self::default()
        }
    }

    pub fn enumerate_valid_multipliers<'a>(
        &self,
        instance: &'a IlpInstance,
        support_bound: Option<&Rational>,
    ) -> MultiplierEnumerator<'a> {
        MultiplierEnumerator::new(instance, self.modulus, support_bound, self.budget)
    }

    /// Every derived cut, reduced to the strongest per coefficient vector.
    pub fn all_cuts(&self, instance: &IlpInstance) -> Result<Vec<Cut>, OracleError> {
        let mut cuts = Vec::new();
        for mult in self.enumerate_valid_multipliers(instance, None) {
            cuts.push(derive_cut(instance, &mult?)?);
        }
        Ok(strongest_cuts(cuts))
    }

    /// Most violated derived cut at `xstar`, if any cut is violated.
    pub fn standard_separate(
        &self,
        instance: &IlpInstance,
        xstar: &Point,
    ) -> Result<Option<Separated>, OracleError> {
        let mut best = None;
        for mult in self.enumerate_valid_multipliers(instance, None) {
            let cut = derive_cut(instance, &mult?)?;
            let v = violation(&cut, xstar);
            if v.is_positive() {
                best = Separated::better_of(best, Separated { cut, violation: v });
            }
        }
        Ok(best)
    }

    /// Most violated derived cut that is nontrivial and tight at `xhat`.
    pub fn primal_separate(
        &self,
        ctx: &SeparationContext,
    ) -> Result<Option<Separated>, OracleError> {
        Ok(self.primal_separate_counted(ctx)?.0)
    }

    /// [`Self::primal_separate`] plus the number of candidates examined.
    pub fn primal_separate_counted(
        &self,
        ctx: &SeparationContext,
    ) -> Result<(Option<Separated>, u64), OracleError> {
        let instance = ctx.instance();
        let mut best = None;
        let mut candidates = self.enumerate_valid_multipliers(instance, None);
        for mult in candidates.by_ref() {
            let mult = mult?;
            let cut = derive_cut(instance, &mult)?;
            let v = violation(&cut, ctx.xstar());
            if v.is_positive() && is_tight_nontrivial(ctx, &mult)? {
                best = Separated::better_of(best, Separated { cut, violation: v });
            }
        }
        Ok((best, candidates.examined()))
    }

    /// Exact `max c^T x` over the instance intersected with all of its
    /// derived mod-`q` cuts.
    pub fn closure_optimize(
        &self,
        instance: &IlpInstance,
        c: &[i64],
    ) -> Result<ClosureOptimum, OracleError> {
        let cuts = self.all_cuts(instance)?;
        let base = LinearProgram::from_instance(instance);
        let obj: Vec<Rational> = c.iter().map(|&v| rational::int(v)).collect();
        match solve_with_cut_pool(&base, &cuts, &obj, Sense::Maximize).0 {
            LpOutcome::Optimal(sol) => Ok(ClosureOptimum {
                value: sol.value,
                argmax: sol.x,
                cuts,
            }),
            LpOutcome::Infeasible => Err(OracleError::Infeasible),
            LpOutcome::Unbounded => Err(OracleError::Unbounded),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureOptimum {
    pub value: Rational,
    pub argmax: Point,
    /// The full cut family the optimum was taken over.
    pub cuts: Vec<Cut>,
}

/// Maximum-weight matching by depth-first enumeration of all matchings.
///
/// Returns the edge indices (ascending) and the weight. Ties go to the
/// matching found first, which makes the result deterministic.
pub fn brute_max_matching(
    graph: &WeightedGraph,
    budget: u64,
) -> Result<(Vec<usize>, i64), OracleError> {
    struct Search<'g> {
        graph: &'g WeightedGraph,
        used: Vec<bool>,
        current: Vec<usize>,
        weight: i64,
        best: (Vec<usize>, i64),
        visited: u64,
        budget: u64,
    }

    impl Search<'_> {
        fn go(&mut self, from: usize) -> Result<(), OracleError> {
            self.visited += 1;
            if self.visited > self.budget {
                return Err(OracleError::BudgetExceeded {
                    budget: self.budget,
                });
            }
            if self.weight > self.best.1 {
                self.best = (self.current.clone(), self.weight);
            }
            for e in from..self.graph.edges().len() {
                let (u, v, w) = self.graph.edges()[e];
                if self.used[u] || self.used[v] {
                    continue;
                }
                self.used[u] = true;
                self.used[v] = true;
                self.current.push(e);
                self.weight += w;
                self.go(e + 1)?;
                self.weight -= w;
                self.current.pop();
                self.used[u] = false;
                self.used[v] = false;
            }
            Ok(())
        }
    }

    let mut search = Search {
        graph,
        used: vec![false; graph.node_count()],
        current: Vec::new(),
        weight: 0,
        best: (Vec::new(), 0),
        visited: 0,
        budget,
    };
    search.go(0)?;
    Ok(search.best)
}
