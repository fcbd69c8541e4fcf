//! Exact rational linear programming.
//!
//! Dense two-phase tableau simplex with Bland's rule. Instances here have at
//! most a few dozen columns, so the dense tableau is fine and Bland's rule
//! rules out cycling without any tolerance.

use num_traits::{Signed, Zero};

use crate::model::{Cut, IlpInstance, Point};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Maximize,
    Minimize,
}

/// `coeffs^T x <= rhs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub rhs: Rational,
}

impl Constraint {
    pub fn from_ints(coeffs: &[i64], rhs: i64) -> Self {
        Constraint {
            coeffs: coeffs.iter().map(|&a| rational::int(a)).collect(),
            rhs: rational::int(rhs),
        }
    }
}

/// Linear constraints over variables that are either free or nonnegative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearProgram {
    nonneg: Vec<bool>,
    rows: Vec<Constraint>,
}

impl LinearProgram {
    pub fn new(num_vars: usize) -> Self {
        LinearProgram {
            nonneg: vec![false; num_vars],
            rows: Vec::new(),
        }
    }

    /// Rows `Ax <= b`, `x_i >= 0` as a variable sign restriction for present
    /// lower bounds and an explicit row `x_i <= 1` for present upper bounds.
    pub fn from_instance(instance: &IlpInstance) -> Self {
        let n = instance.cols();
        let mut lp = LinearProgram::new(n);
        for j in 0..instance.rows() {
            lp.add(Constraint::from_ints(instance.row(j), instance.rhs()[j]));
        }
        for i in 0..n {
            if instance.lower_present()[i] {
                lp.set_nonneg(i);
            }
            if instance.upper_present()[i] {
                let mut unit = vec![0; n];
                unit[i] = 1;
                lp.add(Constraint::from_ints(&unit, 1));
            }
        }
        lp
    }

    pub fn num_vars(&self) -> usize {
        self.nonneg.len()
    }

    pub fn set_nonneg(&mut self, var: usize) {
        self.nonneg[var] = true;
    }

    pub fn add(&mut self, row: Constraint) {
        assert_eq!(row.coeffs.len(), self.num_vars(), "constraint width");
        self.rows.push(row);
    }

    pub fn add_cut(&mut self, cut: &Cut) {
        self.add(Constraint::from_ints(&cut.coeffs, cut.rhs));
    }

    pub fn rows(&self) -> &[Constraint] {
        &self.rows
    }

    pub fn is_feasible(&self, x: &[Rational]) -> bool {
        self.nonneg
            .iter()
            .zip(x)
            .all(|(&nn, xi)| !nn || !xi.is_negative())
            && self
                .rows
                .iter()
                .all(|r| dot(&r.coeffs, x) <= r.rhs)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpSolution {
    pub value: Rational,
    pub x: Point,
    /// One multiplier per row of the maximization form; see
    /// [`verify_certificate`].
    pub duals: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal(LpSolution),
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn optimal(self) -> Option<LpSolution> {
        match self {
            LpOutcome::Optimal(s) => Some(s),
            _ => None,
        }
    }
}

fn dot(a: &[Rational], x: &[Rational]) -> Rational {
    a.iter()
        .zip(x)
        .filter(|(a, _)| !a.is_zero())
        .fold(Rational::zero(), |acc, (a, x)| acc + a * x)
}

/// Checks that `solution` is primal feasible and that its duals certify
/// optimality for `max obj^T x` (the objective already negated for
/// minimization).
pub fn verify_certificate(lp: &LinearProgram, obj: &[Rational], solution: &LpSolution) -> bool {
    if !lp.is_feasible(&solution.x) || dot(obj, &solution.x) != solution.value {
        return false;
    }
    if solution.duals.len() != lp.rows.len() || solution.duals.iter().any(Signed::is_negative) {
        return false;
    }
    for (var, c) in obj.iter().enumerate() {
        let reduced = lp
            .rows
            .iter()
            .zip(&solution.duals)
            .fold(Rational::zero(), |acc, (r, y)| acc + &r.coeffs[var] * y);
        let ok = if lp.nonneg[var] {
            reduced >= *c
        } else {
            reduced == *c
        };
        if !ok {
            return false;
        }
    }
    let dual_value = lp
        .rows
        .iter()
        .zip(&solution.duals)
        .fold(Rational::zero(), |acc, (r, y)| acc + &r.rhs * y);
    dual_value == solution.value
}

/// Solves `max` or `min` of `c^T x` over `lp` exactly.
pub fn lp_solve(lp: &LinearProgram, c: &[Rational], sense: Sense) -> LpOutcome {
    assert_eq!(c.len(), lp.num_vars(), "objective width");
    let obj: Vec<Rational> = match sense {
        Sense::Maximize => c.to_vec(),
        Sense::Minimize => c.iter().map(|v| -v).collect(),
    };
    let outcome = Tableau::build(lp).solve(&obj);
    match outcome {
        LpOutcome::Optimal(mut sol) => {
            debug_assert!(
                verify_certificate(lp, &obj, &sol),
                "simplex optimum without a matching dual certificate"
            );
            if sense == Sense::Minimize {
                sol.value = -sol.value;
            }
            LpOutcome::Optimal(sol)
        }
        other => other,
    }
}

/// Optimizes over `base` intersected with every cut of `pool`, adding pool
/// cuts lazily: solve, add the most violated pool cuts, repeat. The result is
/// the exact optimum over the full intersection. Returns the outcome and the
/// number of pool cuts that ended up in the final program.
pub fn solve_with_cut_pool(
    base: &LinearProgram,
    pool: &[Cut],
    c: &[Rational],
    sense: Sense,
) -> (LpOutcome, usize) {
    const BATCH: usize = 8;
    let mut lp = base.clone();
    let mut active = vec![false; pool.len()];
    let mut added = 0;
    loop {
        match lp_solve(&lp, c, sense) {
            LpOutcome::Optimal(sol) => {
                let mut violated: Vec<(Rational, usize)> = pool
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| !active[*k])
                    .map(|(k, cut)| (crate::model::violation(cut, &sol.x), k))
                    .filter(|(v, _)| v.is_positive())
                    .collect();
                if violated.is_empty() {
                    return (LpOutcome::Optimal(sol), added);
                }
                violated.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
                for &(_, k) in violated.iter().take(BATCH) {
                    active[k] = true;
                    lp.add_cut(&pool[k]);
                    added += 1;
                }
            }
            LpOutcome::Unbounded if added < pool.len() => {
                // A subset of the cuts may leave a ray the full pool closes.
                for (k, cut) in pool.iter().enumerate() {
                    if !active[k] {
                        active[k] = true;
                        lp.add_cut(cut);
                        added += 1;
                    }
                }
            }
            other => return (other, added),
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum Column {
    /// Variable `var` entering with sign `+1` or `-1`.
    Structural { var: usize, negated: bool },
    Slack,
    Artificial,
}

struct Tableau {
    /// `rows x (cols + 1)`, last entry is the right-hand side.
    t: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    columns: Vec<Column>,
    /// Column index of each original row's slack.
    slack_of_row: Vec<usize>,
    num_vars: usize,
}

impl Tableau {
    fn build(lp: &LinearProgram) -> Self {
        let mut columns = Vec::new();
        let mut structural_cols: Vec<Vec<(usize, bool)>> = vec![Vec::new(); lp.num_vars()];
        for var in 0..lp.num_vars() {
            structural_cols[var].push((columns.len(), false));
            columns.push(Column::Structural {
                var,
                negated: false,
            });
            if !lp.nonneg[var] {
                structural_cols[var].push((columns.len(), true));
                columns.push(Column::Structural { var, negated: true });
            }
        }
        let slack_start = columns.len();
        columns.extend(std::iter::repeat_n(Column::Slack, lp.rows.len()));
        let negative_rows: Vec<usize> = (0..lp.rows.len())
            .filter(|&i| lp.rows[i].rhs.is_negative())
            .collect();
        let art_start = columns.len();
        columns.extend(std::iter::repeat_n(Column::Artificial, negative_rows.len()));
        let width = columns.len() + 1;

        let mut t = Vec::with_capacity(lp.rows.len());
        let mut basis = Vec::with_capacity(lp.rows.len());
        let mut next_art = art_start;
        for (i, row) in lp.rows.iter().enumerate() {
            let mut line = vec![Rational::zero(); width];
            for (var, cols) in structural_cols.iter().enumerate() {
                for &(col, negated) in cols {
                    line[col] = if negated {
                        -&row.coeffs[var]
                    } else {
                        row.coeffs[var].clone()
                    };
                }
            }
            line[slack_start + i] = rational::one();
            line[width - 1] = row.rhs.clone();
            if row.rhs.is_negative() {
                for v in line.iter_mut() {
                    *v = -&*v;
                }
                line[next_art] = rational::one();
                basis.push(next_art);
                next_art += 1;
            } else {
                basis.push(slack_start + i);
            }
            t.push(line);
        }
        Tableau {
            t,
            basis,
            columns,
            slack_of_row: (slack_start..slack_start + lp.rows.len()).collect(),
            num_vars: lp.num_vars(),
        }
    }

    fn rhs_col(&self) -> usize {
        self.columns.len()
    }

    fn pivot(&mut self, row: usize, col: usize, reduced: &mut [Rational]) {
        let pivot = self.t[row][col].clone();
        for v in self.t[row].iter_mut() {
            if !v.is_zero() {
                *v /= &pivot;
            }
        }
        let support: Vec<usize> = (0..self.t[row].len())
            .filter(|&j| !self.t[row][j].is_zero())
            .collect();
        let pivot_row = self.t[row].clone();
        for (r, line) in self.t.iter_mut().enumerate() {
            if r == row || line[col].is_zero() {
                continue;
            }
            let factor = line[col].clone();
            for &j in &support {
                line[j] -= &factor * &pivot_row[j];
            }
        }
        if !reduced[col].is_zero() {
            let factor = reduced[col].clone();
            for &j in &support {
                reduced[j] -= &factor * &pivot_row[j];
            }
        }
        self.basis[row] = col;
    }

    /// Reduced-cost row `c_j - c_B^T T_j` plus `-c_B^T b` in the last slot.
    fn reduced_costs(&self, cost: &[Rational]) -> Vec<Rational> {
        let mut reduced: Vec<Rational> = cost.to_vec();
        reduced.push(Rational::zero());
        for (r, &b) in self.basis.iter().enumerate() {
            if cost[b].is_zero() {
                continue;
            }
            for (j, v) in self.t[r].iter().enumerate() {
                if !v.is_zero() {
                    reduced[j] -= &cost[b] * v;
                }
            }
        }
        reduced
    }

    /// Bland's rule; returns false when the objective is unbounded.
    fn run(&mut self, reduced: &mut [Rational], allowed: &[bool]) -> bool {
        let rhs = self.rhs_col();
        loop {
            let entering = (0..self.columns.len()).find(|&j| allowed[j] && reduced[j].is_positive());
            let Some(col) = entering else {
                return true;
            };
            let mut best: Option<(Rational, usize, usize)> = None;
            for r in 0..self.t.len() {
                let a = &self.t[r][col];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.t[r][rhs] / a;
                let better = match &best {
                    None => true,
                    Some((br, bb, _)) => ratio < *br || (ratio == *br && self.basis[r] < *bb),
                };
                if better {
                    best = Some((ratio, self.basis[r], r));
                }
            }
            let Some((_, _, row)) = best else {
                return false;
            };
            self.pivot(row, col, reduced);
        }
    }

    fn solve(mut self, obj: &[Rational]) -> LpOutcome {
        let ncols = self.columns.len();
        let rhs = self.rhs_col();
        let is_art: Vec<bool> = self
            .columns
            .iter()
            .map(|c| matches!(c, Column::Artificial))
            .collect();

        if is_art.iter().any(|&a| a) {
            let cost: Vec<Rational> = is_art
                .iter()
                .map(|&a| if a { rational::int(-1) } else { Rational::zero() })
                .collect();
            let mut reduced = self.reduced_costs(&cost);
            let all = vec![true; ncols];
            self.run(&mut reduced, &all);
            // reduced[rhs] holds -(phase-one objective) = sum of artificials.
            if !reduced[rhs].is_zero() {
                return LpOutcome::Infeasible;
            }
            let mut r = 0;
            while r < self.t.len() {
                if is_art[self.basis[r]] {
                    let col = (0..ncols).find(|&j| !is_art[j] && !self.t[r][j].is_zero());
                    match col {
                        Some(col) => self.pivot(r, col, &mut reduced),
                        None => {
                            self.t.remove(r);
                            self.basis.remove(r);
                            continue;
                        }
                    }
                }
                r += 1;
            }
        }

        let mut cost = vec![Rational::zero(); ncols];
        for (j, column) in self.columns.iter().enumerate() {
            if let Column::Structural { var, negated } = *column {
                cost[j] = if negated {
                    -&obj[var]
                } else {
                    obj[var].clone()
                };
            }
        }
        let mut reduced = self.reduced_costs(&cost);
        let allowed: Vec<bool> = is_art.iter().map(|a| !a).collect();
        if !self.run(&mut reduced, &allowed) {
            return LpOutcome::Unbounded;
        }

        let mut x = vec![Rational::zero(); self.num_vars];
        for (r, &b) in self.basis.iter().enumerate() {
            if let Column::Structural { var, negated } = self.columns[b] {
                if negated {
                    x[var] -= &self.t[r][rhs];
                } else {
                    x[var] += &self.t[r][rhs];
                }
            }
        }
        let duals = self.slack_of_row.iter().map(|&j| -&reduced[j]).collect();
        LpOutcome::Optimal(LpSolution {
            value: -&reduced[rhs],
            x: Point::new(x),
            duals,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&a| int(a)).collect()
    }

    #[test]
    fn single_bounded_variable() {
        let mut lp = LinearProgram::new(1);
        lp.set_nonneg(0);
        lp.add(Constraint::from_ints(&[1], 1));
        let sol = lp_solve(&lp, &ints(&[1]), Sense::Maximize).optimal().unwrap();
        assert_eq!(sol.value, int(1));
        assert_eq!(sol.x.coords(), &[int(1)]);
        assert!(verify_certificate(&lp, &ints(&[1]), &sol));
    }

    #[test]
    fn unbounded_ray() {
        let mut lp = LinearProgram::new(1);
        lp.set_nonneg(0);
        assert_eq!(lp_solve(&lp, &ints(&[1]), Sense::Maximize), LpOutcome::Unbounded);
    }

    #[test]
    fn infeasible_system() {
        let mut lp = LinearProgram::new(1);
        lp.add(Constraint::from_ints(&[1], 0));
        lp.add(Constraint::from_ints(&[-1], -1));
        assert_eq!(lp_solve(&lp, &ints(&[0]), Sense::Maximize), LpOutcome::Infeasible);
    }

    #[test]
    fn triangle_matching_with_blossom() {
        let inst = IlpInstance::with_full_box(
            vec![vec![1, 1, 0], vec![1, 0, 1], vec![0, 1, 1]],
            vec![1, 1, 1],
        )
        .unwrap();
        let mut lp = LinearProgram::from_instance(&inst);
        let c = ints(&[1, 1, 1]);
        let relaxed = lp_solve(&lp, &c, Sense::Maximize).optimal().unwrap();
        assert_eq!(relaxed.value, frac(3, 2));
        lp.add(Constraint::from_ints(&[1, 1, 1], 1));
        let sol = lp_solve(&lp, &ints(&[1, 1, 0]), Sense::Maximize).optimal().unwrap();
        assert_eq!(sol.value, int(1));
        let sol = lp_solve(&lp, &c, Sense::Maximize).optimal().unwrap();
        assert_eq!(sol.value, int(1));
        assert!(verify_certificate(&lp, &c, &sol));
    }

    #[test]
    fn free_variables_and_minimization() {
        // min x + y s.t. x >= -2, y >= -3, x + y >= -4 (all as <= rows).
        let mut lp = LinearProgram::new(2);
        lp.add(Constraint::from_ints(&[-1, 0], 2));
        lp.add(Constraint::from_ints(&[0, -1], 3));
        lp.add(Constraint::from_ints(&[-1, -1], 4));
        let sol = lp_solve(&lp, &ints(&[1, 1]), Sense::Minimize).optimal().unwrap();
        assert_eq!(sol.value, int(-4));
        assert!(lp.is_feasible(&sol.x));
    }

    #[test]
    fn degenerate_redundant_equalities() {
        // x + y <= 1, -x - y <= -1 twice (redundant), maximize x.
        let mut lp = LinearProgram::new(2);
        lp.set_nonneg(0);
        lp.set_nonneg(1);
        lp.add(Constraint::from_ints(&[1, 1], 1));
        lp.add(Constraint::from_ints(&[-1, -1], -1));
        lp.add(Constraint::from_ints(&[-2, -2], -2));
        let c = ints(&[1, 0]);
        let sol = lp_solve(&lp, &c, Sense::Maximize).optimal().unwrap();
        assert_eq!(sol.value, int(1));
        assert!(verify_certificate(&lp, &c, &sol));
    }

    #[test]
    fn fractional_vertex() {
        // max x + y s.t. 2x + y <= 2, x + 3y <= 3, x, y >= 0 -> (3/5, 4/5).
        let mut lp = LinearProgram::new(2);
        lp.set_nonneg(0);
        lp.set_nonneg(1);
        lp.add(Constraint::from_ints(&[2, 1], 2));
        lp.add(Constraint::from_ints(&[1, 3], 3));
        let c = ints(&[1, 1]);
        let sol = lp_solve(&lp, &c, Sense::Maximize).optimal().unwrap();
        assert_eq!(sol.value, frac(7, 5));
        assert_eq!(sol.x.coords(), &[frac(3, 5), frac(4, 5)]);
        assert!(verify_certificate(&lp, &c, &sol));
    }
}
