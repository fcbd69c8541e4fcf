//! Instances, points, multipliers, derived cuts and the predicates that every
//! separator is checked against.
//!
//! An instance is `P = {x : Ax <= b}` together with optional box constraints
//! `0 <= x_i` and `x_i <= 1`, modeled as presence flags rather than rows.
//! Multipliers live on the grid `{0, 1/q, ..., (q-1)/q}` and are stored as
//! integer numerators over the modulus `q`.

use std::fmt;
use std::ops::Deref;

use num_bigint::BigInt;
use num_traits::Signed;
use thiserror::Error;

use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("instance must have at least one row and one column (got {rows}x{cols})")]
    EmptyInstance { rows: usize, cols: usize },
    #[error("{what}: expected length {expected}, found {found}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("xhat is not integral at coordinate {0}")]
    NotIntegral(usize),
    #[error("xhat is infeasible: {0}")]
    XhatInfeasible(String),
    #[error("xstar is infeasible: {0}")]
    XstarInfeasible(String),
    #[error("invalid multipliers: {0}")]
    InvalidMultipliers(String),
    #[error("rounding multiplier on coordinate {coord} uses an absent {side} bound")]
    AbsentBox { coord: usize, side: Bound },
    #[error("derived coefficient of x{coord} is not integral")]
    NonIntegralCut { coord: usize },
}

/// Which side of the box `0 <= x_i <= 1` a rounding multiplier lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Bound {
    Lower,
    Upper,
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::Lower => f.write_str("lower"),
            Bound::Upper => f.write_str("upper"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IlpInstance {
    a: Vec<Vec<i64>>,
    b: Vec<i64>,
    lower: Vec<bool>,
    upper: Vec<bool>,
    objective: Option<Vec<i64>>,
}

impl IlpInstance {
    pub fn new(
        a: Vec<Vec<i64>>,
        b: Vec<i64>,
        lower: Vec<bool>,
        upper: Vec<bool>,
        objective: Option<Vec<i64>>,
    ) -> Result<Self, ModelError> {
        let rows = a.len();
        let cols = a.first().map_or(0, Vec::len);
        if rows == 0 || cols == 0 {
            return Err(ModelError::EmptyInstance { rows, cols });
        }
        for row in &a {
            check_len("row of A", cols, row.len())?;
        }
        check_len("b", rows, b.len())?;
        check_len("lower flags", cols, lower.len())?;
        check_len("upper flags", cols, upper.len())?;
        if let Some(c) = &objective {
            check_len("objective", cols, c.len())?;
        }
        Ok(IlpInstance {
            a,
            b,
            lower,
            upper,
            objective,
        })
    }

    /// Instance with every box constraint present.
    pub fn with_full_box(a: Vec<Vec<i64>>, b: Vec<i64>) -> Result<Self, ModelError> {
        let n = a.first().map_or(0, Vec::len);
        Self::new(a, b, vec![true; n], vec![true; n], None)
    }

    /// Instance with no box constraints at all.
    pub fn without_box(a: Vec<Vec<i64>>, b: Vec<i64>) -> Result<Self, ModelError> {
        let n = a.first().map_or(0, Vec::len);
        Self::new(a, b, vec![false; n], vec![false; n], None)
    }

    pub fn with_objective(mut self, c: Vec<i64>) -> Result<Self, ModelError> {
        check_len("objective", self.cols(), c.len())?;
        self.objective = Some(c);
        Ok(self)
    }

    pub fn rows(&self) -> usize {
        self.a.len()
    }

    pub fn cols(&self) -> usize {
        self.lower.len()
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.a
    }

    pub fn row(&self, j: usize) -> &[i64] {
        &self.a[j]
    }

    pub fn rhs(&self) -> &[i64] {
        &self.b
    }

    pub fn lower_present(&self) -> &[bool] {
        &self.lower
    }

    pub fn upper_present(&self) -> &[bool] {
        &self.upper
    }

    pub fn has_bound(&self, i: usize, side: Bound) -> bool {
        match side {
            Bound::Lower => self.lower[i],
            Bound::Upper => self.upper[i],
        }
    }

    pub fn objective(&self) -> Option<&[i64]> {
        self.objective.as_deref()
    }

    /// `b - Ax` for a rational point.
    pub fn slack(&self, x: &[Rational]) -> Vec<Rational> {
        self.a
            .iter()
            .zip(&self.b)
            .map(|(row, &bj)| rational::int(bj) - rational::dot_int(row, x))
            .collect()
    }

    /// Describes the first violated row or present box constraint, if any.
    pub fn first_violation(&self, x: &[Rational]) -> Option<String> {
        for (j, s) in self.slack(x).iter().enumerate() {
            if s.is_negative() {
                return Some(format!("row {} has slack {}", j + 1, s));
            }
        }
        for (i, xi) in x.iter().enumerate() {
            if self.lower[i] && xi.is_negative() {
                return Some(format!("x{} = {} violates x{} >= 0", i + 1, xi, i + 1));
            }
            if self.upper[i] && *xi > rational::one() {
                return Some(format!("x{} = {} violates x{} <= 1", i + 1, xi, i + 1));
            }
        }
        None
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        x.len() == self.cols() && self.first_violation(x).is_none()
    }
}

fn check_len(what: &'static str, expected: usize, found: usize) -> Result<(), ModelError> {
    if expected == found {
        Ok(())
    } else {
        Err(ModelError::DimensionMismatch {
            what,
            expected,
            found,
        })
    }
}

/// A point with exact rational coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Point(Vec<Rational>);

impl Point {
    pub fn new(coords: Vec<Rational>) -> Self {
        Point(coords)
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        Point(coords.iter().map(|&v| rational::int(v)).collect())
    }

    pub fn zeros(n: usize) -> Self {
        Point(vec![rational::zero(); n])
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<Rational> {
        self.0
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|v| v.is_integer())
    }

    /// Integer coordinates, or the index of the first fractional one.
    pub fn to_ints(&self) -> Result<Vec<i64>, usize> {
        self.0
            .iter()
            .enumerate()
            .map(|(i, v)| rational::to_i64(v).ok_or(i))
            .collect()
    }

    pub fn scaled(&self, factor: &Rational) -> Point {
        Point(self.0.iter().map(|v| v * factor).collect())
    }
}

impl Deref for Point {
    type Target = [Rational];

    fn deref(&self) -> &[Rational] {
        &self.0
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&rational::render_all(&self.0))
    }
}

/// Row multipliers and rounding multipliers on the mod-`q` grid.
///
/// Entries are stored as numerators over `modulus`; `lambda[j] = 2` with
/// `modulus = 3` means the multiplier `2/3`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Multipliers {
    modulus: u32,
    lambda: Vec<u32>,
    mu_down: Vec<u32>,
    mu_up: Vec<u32>,
}

impl Multipliers {
    pub fn new(
        modulus: u32,
        lambda: Vec<u32>,
        mu_down: Vec<u32>,
        mu_up: Vec<u32>,
    ) -> Result<Self, ModelError> {
        if modulus < 2 {
            return Err(ModelError::InvalidMultipliers(format!(
                "modulus {modulus} < 2"
            )));
        }
        check_len("mu_up", mu_down.len(), mu_up.len())?;
        if let Some(v) = lambda
            .iter()
            .chain(&mu_down)
            .chain(&mu_up)
            .find(|&&v| v >= modulus)
        {
            return Err(ModelError::InvalidMultipliers(format!(
                "numerator {v} is off the grid for modulus {modulus}"
            )));
        }
        if let Some(i) = (0..mu_down.len()).find(|&i| mu_down[i] != 0 && mu_up[i] != 0) {
            return Err(ModelError::InvalidMultipliers(format!(
                "both rounding multipliers are nonzero at coordinate {}",
                i + 1
            )));
        }
        Ok(Multipliers {
            modulus,
            lambda,
            mu_down,
            mu_up,
        })
    }

    /// `{0, 1/2}` multipliers: `lambda = 1/2` on `rows`, rounding on the given
    /// coordinates.
    pub fn halves(
        m: usize,
        n: usize,
        rows: &[usize],
        down: &[usize],
        up: &[usize],
    ) -> Result<Self, ModelError> {
        let mut lambda = vec![0; m];
        let mut mu_down = vec![0; n];
        let mut mu_up = vec![0; n];
        for &j in rows {
            lambda[j] = 1;
        }
        for &i in down {
            mu_down[i] = 1;
        }
        for &i in up {
            mu_up[i] = 1;
        }
        Self::new(2, lambda, mu_down, mu_up)
    }

    /// Builds multipliers from explicit rational values, which must lie on the
    /// mod-`modulus` grid.
    pub fn from_values(
        modulus: u32,
        lambda: &[Rational],
        mu_down: &[Rational],
        mu_up: &[Rational],
    ) -> Result<Self, ModelError> {
        let to_grid = |v: &Rational| -> Result<u32, ModelError> {
            let scaled = v * Rational::from_integer(BigInt::from(modulus));
            rational::to_i64(&scaled)
                .and_then(|k| u32::try_from(k).ok())
                .filter(|&k| k < modulus)
                .ok_or_else(|| {
                    ModelError::InvalidMultipliers(format!(
                        "{v} is not in {{0, 1/{modulus}, ..., {}/{modulus}}}",
                        modulus - 1
                    ))
                })
        };
        let conv = |vs: &[Rational]| vs.iter().map(to_grid).collect::<Result<Vec<_>, _>>();
        Self::new(modulus, conv(lambda)?, conv(mu_down)?, conv(mu_up)?)
    }

    pub fn zero(modulus: u32, m: usize, n: usize) -> Self {
        Multipliers {
            modulus,
            lambda: vec![0; m],
            mu_down: vec![0; n],
            mu_up: vec![0; n],
        }
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn lambda_numerators(&self) -> &[u32] {
        &self.lambda
    }

    pub fn mu_down_numerators(&self) -> &[u32] {
        &self.mu_down
    }

    pub fn mu_up_numerators(&self) -> &[u32] {
        &self.mu_up
    }

    fn value(&self, numer: u32) -> Rational {
        rational::frac(i64::from(numer), i64::from(self.modulus))
    }

    pub fn lambda(&self) -> Vec<Rational> {
        self.lambda.iter().map(|&v| self.value(v)).collect()
    }

    pub fn mu_down(&self) -> Vec<Rational> {
        self.mu_down.iter().map(|&v| self.value(v)).collect()
    }

    pub fn mu_up(&self) -> Vec<Rational> {
        self.mu_up.iter().map(|&v| self.value(v)).collect()
    }

    /// `lambda^T 1`.
    pub fn lambda_sum(&self) -> Rational {
        self.value(self.lambda.iter().sum())
    }

    /// Row indices with nonzero multiplier, ascending.
    pub fn support(&self) -> Vec<usize> {
        (0..self.lambda.len())
            .filter(|&j| self.lambda[j] != 0)
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.lambda
            .iter()
            .chain(&self.mu_down)
            .chain(&self.mu_up)
            .all(|&v| v == 0)
    }

    /// Deterministic ordering key: lexicographically smallest support first,
    /// then the raw numerator vectors.
    pub fn tie_key(&self) -> (Vec<usize>, &[u32], &[u32], &[u32]) {
        (self.support(), &self.lambda, &self.mu_down, &self.mu_up)
    }

    /// Checks dimensions and box-presence flags against `instance`.
    pub fn check_against(&self, instance: &IlpInstance) -> Result<(), ModelError> {
        check_len("lambda", instance.rows(), self.lambda.len())?;
        check_len("mu_down", instance.cols(), self.mu_down.len())?;
        check_len("mu_up", instance.cols(), self.mu_up.len())?;
        for i in 0..instance.cols() {
            if self.mu_down[i] != 0 && !instance.lower[i] {
                return Err(ModelError::AbsentBox {
                    coord: i + 1,
                    side: Bound::Lower,
                });
            }
            if self.mu_up[i] != 0 && !instance.upper[i] {
                return Err(ModelError::AbsentBox {
                    coord: i + 1,
                    side: Bound::Upper,
                });
            }
        }
        Ok(())
    }

    /// Extended weighted slack at `x`: `lambda^T (b - Ax)` plus the box
    /// contributions `mu_down_i * x_i` and `mu_up_i * (1 - x_i)`.
    pub fn weighted_slack(&self, instance: &IlpInstance, x: &[Rational]) -> Rational {
        let q = rational::int(i64::from(self.modulus));
        let mut total = rational::zero();
        for (j, &l) in self.lambda.iter().enumerate() {
            if l != 0 {
                let s = rational::int(instance.b[j]) - rational::dot_int(&instance.a[j], x);
                total += s * BigInt::from(l);
            }
        }
        for (i, xi) in x.iter().enumerate() {
            if self.mu_down[i] != 0 {
                total += xi * BigInt::from(self.mu_down[i]);
            }
            if self.mu_up[i] != 0 {
                total += (rational::one() - xi) * BigInt::from(self.mu_up[i]);
            }
        }
        total / q
    }
}

/// A derived inequality `coeffs^T x <= rhs`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cut {
    pub coeffs: Vec<i64>,
    pub rhs: i64,
    /// `lambda^T b + mu_up^T 1` before flooring.
    pub unrounded_rhs: Rational,
    pub provenance: Multipliers,
}

impl Cut {
    pub fn lhs(&self, x: &[Rational]) -> Rational {
        rational::dot_int(&self.coeffs, x)
    }

    pub fn is_satisfied_by(&self, x: &[Rational]) -> bool {
        violation(self, x) <= rational::zero()
    }

    /// The floor actually removed something from the right-hand side.
    pub fn is_nontrivial(&self) -> bool {
        !self.unrounded_rhs.is_integer()
    }
}

impl fmt::Display for Cut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let coeffs: Vec<String> = self.coeffs.iter().map(i64::to_string).collect();
        write!(f, "{} <= {}", coeffs.join(" "), self.rhs)
    }
}

/// `coeffs = lambda^T A - mu_down + mu_up`, `rhs = floor(lambda^T b + mu_up^T 1)`.
pub fn derive_cut(instance: &IlpInstance, mult: &Multipliers) -> Result<Cut, ModelError> {
    mult.check_against(instance)?;
    let q = i64::from(mult.modulus);
    let n = instance.cols();
    let mut numer = vec![0i64; n];
    let mut rhs_numer = 0i64;
    for (j, &l) in mult.lambda.iter().enumerate() {
        if l == 0 {
            continue;
        }
        let l = i64::from(l);
        for (acc, &a) in numer.iter_mut().zip(&instance.a[j]) {
            *acc += l * a;
        }
        rhs_numer += l * instance.b[j];
    }
    for i in 0..n {
        numer[i] += i64::from(mult.mu_up[i]) - i64::from(mult.mu_down[i]);
        rhs_numer += i64::from(mult.mu_up[i]);
    }
    let mut coeffs = Vec::with_capacity(n);
    for (i, v) in numer.into_iter().enumerate() {
        if v % q != 0 {
            return Err(ModelError::NonIntegralCut { coord: i + 1 });
        }
        coeffs.push(v / q);
    }
    Ok(Cut {
        coeffs,
        rhs: rhs_numer.div_euclid(q),
        unrounded_rhs: rational::frac(rhs_numer, q),
        provenance: mult.clone(),
    })
}

/// `coeffs^T x - rhs`; positive means `x` violates the cut.
pub fn violation(cut: &Cut, x: &[Rational]) -> Rational {
    cut.lhs(x) - rational::int(cut.rhs)
}

/// Keeps one cut per coefficient vector, the one with the smallest
/// right-hand side (ties: smaller [`Multipliers::tie_key`]). Cuts with an
/// all-zero coefficient vector and nonnegative right-hand side say nothing
/// and are dropped. Output is ordered by coefficient vector.
pub fn strongest_cuts(cuts: impl IntoIterator<Item = Cut>) -> Vec<Cut> {
    let mut best: std::collections::BTreeMap<Vec<i64>, Cut> = std::collections::BTreeMap::new();
    for cut in cuts {
        if cut.rhs >= 0 && cut.coeffs.iter().all(|&a| a == 0) {
            continue;
        }
        match best.get(&cut.coeffs) {
            Some(kept)
                if (kept.rhs, kept.provenance.tie_key())
                    <= (cut.rhs, cut.provenance.tie_key()) => {}
            _ => {
                best.insert(cut.coeffs.clone(), cut);
            }
        }
    }
    best.into_values().collect()
}

/// A cut together with its violation at the separated point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Separated {
    pub cut: Cut,
    pub violation: Rational,
}

impl Separated {
    /// Keeps the more violated of the two; ties go to the smaller
    /// [`Multipliers::tie_key`].
    pub fn better_of(current: Option<Separated>, candidate: Separated) -> Option<Separated> {
        match current {
            None => Some(candidate),
            Some(best) => {
                let wins = candidate.violation > best.violation
                    || (candidate.violation == best.violation
                        && candidate.cut.provenance.tie_key() < best.cut.provenance.tie_key());
                Some(if wins { candidate } else { best })
            }
        }
    }
}

/// Direction in which a box constraint repairs a fractional coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rounding {
    /// Add `1/2 (-x_i <= 0)`.
    Down,
    /// Add `1/2 (x_i <= 1)`.
    Up,
}

impl Rounding {
    pub fn bound(self) -> Bound {
        match self {
            Rounding::Down => Bound::Lower,
            Rounding::Up => Bound::Upper,
        }
    }
}

/// An instance with an integral feasible point, a fractional feasible point,
/// and the row partition the separators work on.
#[derive(Debug, Clone)]
pub struct SeparationContext {
    instance: IlpInstance,
    xhat: Point,
    xhat_int: Vec<i64>,
    xstar: Point,
    slack_hat: Vec<i64>,
    slack_star: Vec<Rational>,
    slack_rows: Vec<usize>,
    tight_rows: Vec<usize>,
}

pub fn compute_context(
    instance: &IlpInstance,
    xhat: &Point,
    xstar: &Point,
) -> Result<SeparationContext, ModelError> {
    check_len("xhat", instance.cols(), xhat.len())?;
    check_len("xstar", instance.cols(), xstar.len())?;
    let xhat_int = xhat.to_ints().map_err(|i| ModelError::NotIntegral(i + 1))?;
    if let Some(why) = instance.first_violation(xhat) {
        return Err(ModelError::XhatInfeasible(why));
    }
    if let Some(why) = instance.first_violation(xstar) {
        return Err(ModelError::XstarInfeasible(why));
    }
    let slack_hat: Vec<i64> = instance
        .a
        .iter()
        .zip(&instance.b)
        .map(|(row, &bj)| bj - rational::dot_i64(row, &xhat_int))
        .collect();
    let slack_rows = (0..slack_hat.len()).filter(|&j| slack_hat[j] == 1).collect();
    let tight_rows = (0..slack_hat.len()).filter(|&j| slack_hat[j] == 0).collect();
    Ok(SeparationContext {
        instance: instance.clone(),
        xhat: xhat.clone(),
        xhat_int,
        slack_star: instance.slack(xstar),
        xstar: xstar.clone(),
        slack_hat,
        slack_rows,
        tight_rows,
    })
}

impl SeparationContext {
    pub fn instance(&self) -> &IlpInstance {
        &self.instance
    }

    pub fn xhat(&self) -> &Point {
        &self.xhat
    }

    pub fn xhat_int(&self) -> &[i64] {
        &self.xhat_int
    }

    pub fn xstar(&self) -> &Point {
        &self.xstar
    }

    pub fn slack_hat(&self) -> &[i64] {
        &self.slack_hat
    }

    pub fn slack_star(&self) -> &[Rational] {
        &self.slack_star
    }

    /// Rows with slack exactly one at `xhat`.
    pub fn slack_rows(&self) -> &[usize] {
        &self.slack_rows
    }

    /// Rows tight at `xhat`.
    pub fn tight_rows(&self) -> &[usize] {
        &self.tight_rows
    }

    pub fn is_tight(&self, j: usize) -> bool {
        self.slack_hat[j] == 0
    }

    /// Rounding of coordinate `i` through a box constraint tight at `xhat`.
    pub fn tight_rounding(&self, i: usize) -> Option<Rounding> {
        match self.xhat_int[i] {
            0 if self.instance.lower[i] => Some(Rounding::Down),
            1 if self.instance.upper[i] => Some(Rounding::Up),
            _ => None,
        }
    }

    /// Rounding of coordinate `i` through a box constraint with slack exactly
    /// one at `xhat`.
    pub fn slack_rounding(&self, i: usize) -> Option<Rounding> {
        match self.xhat_int[i] {
            0 if self.instance.upper[i] => Some(Rounding::Up),
            1 if self.instance.lower[i] => Some(Rounding::Down),
            _ => None,
        }
    }

    /// Slack of the box constraint used by `rounding` at `xstar`.
    pub fn rounding_cost(&self, i: usize, rounding: Rounding) -> Rational {
        match rounding {
            Rounding::Down => self.xstar[i].clone(),
            Rounding::Up => rational::one() - &self.xstar[i],
        }
    }

    pub fn weighted_slack_hat(&self, mult: &Multipliers) -> Rational {
        mult.weighted_slack(&self.instance, &self.xhat)
    }

    pub fn weighted_slack_star(&self, mult: &Multipliers) -> Rational {
        mult.weighted_slack(&self.instance, &self.xstar)
    }
}

/// Whether the cut derived from `mult` is nontrivial and tight at `xhat`.
///
/// Holds iff the extended weighted slack at `xhat` lies strictly between 0
/// and 1; for `{0, 1/2}` multipliers that means it equals exactly 1/2.
pub fn is_tight_nontrivial(
    ctx: &SeparationContext,
    mult: &Multipliers,
) -> Result<bool, ModelError> {
    derive_cut(&ctx.instance, mult)?;
    let ws = ctx.weighted_slack_hat(mult);
    Ok(ws.is_positive() && ws < rational::one())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParityProfile {
    pub column_odd: Vec<usize>,
    pub row_odd: Vec<usize>,
    pub column_method: bool,
    pub row_method: bool,
}

impl fmt::Display for ParityProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[usize]| {
            v.iter()
                .map(usize::to_string)
                .collect::<Vec<_>>()
                .join(" ")
        };
        writeln!(f, "COLUMN_ODD {}", join(&self.column_odd))?;
        writeln!(f, "ROW_ODD {}", join(&self.row_odd))?;
        writeln!(f, "COL_METHOD {}", yes_no(self.column_method))?;
        write!(f, "ROW_METHOD {}", yes_no(self.row_method))
    }
}

pub(crate) fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

pub fn parity_profile(instance: &IlpInstance) -> ParityProfile {
    let mut column_odd = vec![0; instance.cols()];
    let mut row_odd = vec![0; instance.rows()];
    for (j, row) in instance.a.iter().enumerate() {
        for (i, &a) in row.iter().enumerate() {
            if a % 2 != 0 {
                column_odd[i] += 1;
                row_odd[j] += 1;
            }
        }
    }
    ParityProfile {
        column_method: column_odd.iter().all(|&c| c <= 2),
        row_method: row_odd.iter().all(|&c| c <= 2),
        column_odd,
        row_odd,
    }
}

pub(crate) fn is_odd(a: i64) -> bool {
    a % 2 != 0
}
