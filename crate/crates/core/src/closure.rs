//! `(1 + eps)`-approximate optimization over the `{0, 1/2}`- and mod-`q`
//! closures of `{x : Ax <= b}` with `b > 0`.
//!
//! Only cuts whose multipliers sum to at most `k = ceil(1 + 1/eps)` are
//! generated. For `c >= 0` the optimum over the resulting relaxation lies
//! between the closure optimum and `1 + eps` times it.
//!
//! Box flags of the instance enter the LP as constraints but are never used to
//! round coefficients: every generated cut needs `lambda^T A` integral.

use num_traits::{Signed, ToPrimitive};
use thiserror::Error;

use crate::lp::{solve_with_cut_pool, LinearProgram, LpOutcome, Sense};
use crate::model::{derive_cut, strongest_cuts, Cut, IlpInstance, ModelError, Multipliers, Point};
use crate::oracle::DEFAULT_BUDGET;
use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClosureError {
    #[error("epsilon must be positive, got {0}")]
    NonPositiveEpsilon(Rational),
    #[error("modulus must be at least 2, got {0}")]
    ModulusTooSmall(u32),
    #[error("row {row} has right-hand side {value}; every row needs b > 0")]
    NonPositiveRhs { row: usize, value: i64 },
    #[error("entry ({row}, {col}) is negative; monotone presolve needs A >= 0")]
    NegativeEntry { row: usize, col: usize },
    #[error("row {row} reads 0 <= {value}, so the instance is infeasible")]
    InfeasibleRow { row: usize, value: i64 },
    #[error("enumeration budget of {budget} multiplier vectors exceeded")]
    BudgetExceeded { budget: u64 },
    #[error("objective has {found} entries, expected {expected}")]
    ObjectiveLength { expected: usize, found: usize },
    #[error("relaxation is unbounded")]
    Unbounded,
    #[error("relaxation is infeasible")]
    Infeasible,
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// `ceil(1 + 1/eps)`.
pub fn k_of_epsilon(epsilon: &Rational) -> Result<u64, ClosureError> {
    if !epsilon.is_positive() {
        return Err(ClosureError::NonPositiveEpsilon(epsilon.clone()));
    }
    let k = (rational::one() + epsilon.recip()).ceil();
    Ok(k.to_integer().to_u64().expect("k fits in u64"))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApproxParams {
    pub epsilon: Rational,
    pub modulus: u32,
    pub k: u64,
    /// Cap on enumerated multiplier vectors.
    pub budget: u64,
}

impl ApproxParams {
    pub fn new(epsilon: Rational, modulus: u32) -> Result<Self, ClosureError> {
        if modulus < 2 {
            return Err(ClosureError::ModulusTooSmall(modulus));
        }
        let k = k_of_epsilon(&epsilon)?;
        Ok(ApproxParams {
            epsilon,
            modulus,
            k,
            budget: DEFAULT_BUDGET,
        })
    }
}

/// The base instance with its generated bounded-support cuts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relaxation {
    pub base: IlpInstance,
    /// Strongest cut per coefficient vector, ordered by coefficients.
    pub cuts: Vec<Cut>,
    /// Multiplier vectors examined.
    pub examined: u64,
    /// Multiplier vectors with `lambda^T A` integral.
    pub integral: u64,
}

fn check_positive_rhs(instance: &IlpInstance) -> Result<(), ClosureError> {
    match instance.rhs().iter().position(|&b| b <= 0) {
        Some(j) => Err(ClosureError::NonPositiveRhs {
            row: j + 1,
            value: instance.rhs()[j],
        }),
        None => Ok(()),
    }
}

/// Every cut from `lambda` on the mod-`q` grid with `sum(lambda) <= k` and
/// `lambda^T A` integral, reduced to the strongest per coefficient vector.
pub fn enumerate_bounded_cuts(
    instance: &IlpInstance,
    params: &ApproxParams,
) -> Result<Relaxation, ClosureError> {
    check_positive_rhs(instance)?;
    let (m, n) = (instance.rows(), instance.cols());
    let q = params.modulus;
    let qi = i64::from(q);
    let numer_bound = params.k.saturating_mul(u64::from(q));

    // Odometer over lambda numerators, pruned by the numerator sum.
    let mut lambda = vec![0u32; m];
    let mut sum: u64 = 0;
    let mut acc = vec![0i64; n];
    let mut examined = 0u64;
    let mut integral = 0u64;
    let mut cuts = Vec::new();
    loop {
        examined += 1;
        if examined > params.budget {
            return Err(ClosureError::BudgetExceeded {
                budget: params.budget,
            });
        }
        if sum > 0 && acc.iter().all(|v| v.rem_euclid(qi) == 0) {
            integral += 1;
            let mult = Multipliers::new(q, lambda.clone(), vec![0; n], vec![0; n])?;
            cuts.push(derive_cut(instance, &mult)?);
        }
        // Advance: find the lowest position that can be incremented.
        let mut pos = 0;
        loop {
            if pos == m {
                return Ok(Relaxation {
                    base: instance.clone(),
                    cuts: strongest_cuts(cuts),
                    examined,
                    integral,
                });
            }
            if lambda[pos] + 1 < q && sum < numer_bound {
                lambda[pos] += 1;
                sum += 1;
                for (a, &v) in acc.iter_mut().zip(instance.row(pos)) {
                    *a += v;
                }
                break;
            }
            let l = i64::from(lambda[pos]);
            for (a, &v) in acc.iter_mut().zip(instance.row(pos)) {
                *a -= l * v;
            }
            sum -= u64::from(lambda[pos]);
            lambda[pos] = 0;
            pos += 1;
        }
    }
}

/// Result of [`approx_optimize`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApproxOptimum {
    pub alpha: Rational,
    pub argmax: Point,
    pub cut_count: usize,
    pub k: u64,
}

fn objective(instance: &IlpInstance, c: &[i64]) -> Result<Vec<Rational>, ClosureError> {
    if c.len() != instance.cols() {
        return Err(ClosureError::ObjectiveLength {
            expected: instance.cols(),
            found: c.len(),
        });
    }
    Ok(c.iter().map(|&v| rational::int(v)).collect())
}

/// `max c^T x` over the instance intersected with its bounded-support cuts.
pub fn approx_optimize(
    instance: &IlpInstance,
    c: &[i64],
    params: &ApproxParams,
) -> Result<ApproxOptimum, ClosureError> {
    let obj = objective(instance, c)?;
    let relaxation = enumerate_bounded_cuts(instance, params)?;
    let base = LinearProgram::from_instance(instance);
    match solve_with_cut_pool(&base, &relaxation.cuts, &obj, Sense::Maximize).0 {
        LpOutcome::Optimal(sol) => Ok(ApproxOptimum {
            alpha: sol.value,
            argmax: sol.x,
            cut_count: relaxation.cuts.len(),
            k: params.k,
        }),
        LpOutcome::Unbounded => Err(ClosureError::Unbounded),
        LpOutcome::Infeasible => Err(ClosureError::Infeasible),
    }
}

/// Outcome of [`monotone_presolve`]. Indices refer to the original instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presolved {
    /// `None` when no column survives.
    pub reduced: Option<IlpInstance>,
    /// Columns fixed to zero, ascending.
    pub fixed: Vec<usize>,
    /// Rows deleted, ascending.
    pub removed_rows: Vec<usize>,
    /// Surviving columns in their new order.
    pub kept_cols: Vec<usize>,
}

impl Presolved {
    /// Embeds a point of the reduced instance back into the original space.
    pub fn lift(&self, reduced_point: &Point, n: usize) -> Point {
        let mut coords = vec![rational::zero(); n];
        for (k, &i) in self.kept_cols.iter().enumerate() {
            coords[i] = reduced_point[k].clone();
        }
        Point::new(coords)
    }
}

/// For `A >= 0`: a row with `b_j = 0` forces every variable in its support to
/// zero, so those columns and the row are deleted, repeatedly. Afterwards every
/// remaining row has `b >= 1`. If every row goes away but columns remain, a
/// single row `0 <= 1` keeps the instance well formed.
pub fn monotone_presolve(instance: &IlpInstance) -> Result<Presolved, ClosureError> {
    let (m, n) = (instance.rows(), instance.cols());
    for j in 0..m {
        if let Some(i) = instance.row(j).iter().position(|&a| a < 0) {
            return Err(ClosureError::NegativeEntry { row: j + 1, col: i + 1 });
        }
    }
    let mut fixed = vec![false; n];
    let mut removed = vec![false; m];
    loop {
        let mut changed = false;
        for j in 0..m {
            if removed[j] || instance.rhs()[j] > 0 {
                continue;
            }
            let live = (0..n).filter(|&i| !fixed[i] && instance.row(j)[i] != 0);
            let support: Vec<usize> = live.collect();
            if instance.rhs()[j] < 0 {
                return Err(ClosureError::InfeasibleRow {
                    row: j + 1,
                    value: instance.rhs()[j],
                });
            }
            for i in support {
                fixed[i] = true;
            }
            removed[j] = true;
            changed = true;
        }
        if !changed {
            break;
        }
    }
    let kept_cols: Vec<usize> = (0..n).filter(|&i| !fixed[i]).collect();
    let kept_rows: Vec<usize> = (0..m).filter(|&j| !removed[j]).collect();
    let reduced = if kept_cols.is_empty() {
        None
    } else {
        let project = |row: &[i64]| kept_cols.iter().map(|&i| row[i]).collect::<Vec<_>>();
        let (a, b) = if kept_rows.is_empty() {
            (vec![vec![0; kept_cols.len()]], vec![1])
        } else {
            (
                kept_rows.iter().map(|&j| project(instance.row(j))).collect(),
                kept_rows.iter().map(|&j| instance.rhs()[j]).collect(),
            )
        };
        let pick = |flags: &[bool]| kept_cols.iter().map(|&i| flags[i]).collect::<Vec<_>>();
        Some(IlpInstance::new(
            a,
            b,
            pick(instance.lower_present()),
            pick(instance.upper_present()),
            instance.objective().map(project),
        )?)
    };
    Ok(Presolved {
        reduced,
        fixed: (0..n).filter(|&i| fixed[i]).collect(),
        removed_rows: (0..m).filter(|&j| removed[j]).collect(),
        kept_cols,
    })
}

/// [`approx_optimize`] after [`monotone_presolve`]; the argmax is reported in
/// the original coordinates.
pub fn approx_optimize_presolved(
    instance: &IlpInstance,
    c: &[i64],
    params: &ApproxParams,
) -> Result<(ApproxOptimum, Presolved), ClosureError> {
    objective(instance, c)?;
    let pre = monotone_presolve(instance)?;
    let n = instance.cols();
    let Some(reduced) = &pre.reduced else {
        let opt = ApproxOptimum {
            alpha: rational::zero(),
            argmax: Point::zeros(n),
            cut_count: 0,
            k: params.k,
        };
        return Ok((opt, pre));
    };
    let reduced_c: Vec<i64> = pre.kept_cols.iter().map(|&i| c[i]).collect();
    let opt = approx_optimize(reduced, &reduced_c, params)?;
    let argmax = pre.lift(&opt.argmax, n);
    Ok((ApproxOptimum { argmax, ..opt }, pre))
}

/// `sum_{s <= s_max} C(m, s) (q - 1)^s` with `s_max = floor(q k / (q - 1))`,
/// the number of mod-`q` multiplier support patterns the enumeration can
/// reach when each row takes one nonzero value. For `q = 2` it bounds the
/// number of generated cuts.
pub fn support_count_bound(m: usize, q: u32, k: u64) -> u128 {
    let s_max = (u64::from(q) * k / u64::from(q - 1)).min(m as u64) as usize;
    let mut total: u128 = 0;
    let mut binom: u128 = 1;
    let mut power: u128 = 1;
    for s in 0..=s_max {
        if s > 0 {
            binom = binom * (m - s + 1) as u128 / s as u128;
            power *= u128::from(q - 1);
        }
        total += binom * power;
    }
    total
}
