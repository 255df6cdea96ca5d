//! Exact primal/dual simplex for linear fractional programs
//! `min (pᵀx + α) / (qᵀx + β)` over `{x >= 0 | rows}`.
//!
//! Pricing uses the reduced fractional gradients
//! `γ̄_j = Q(x)·η_j − P(x)·ϑ_j`, where `η_j`, `ϑ_j` are the linear reduced
//! costs of numerator and denominator. A basis is optimal iff `γ̄_j >= 0` on
//! every nonbasic column. Pivot choices follow Bland's rule under the
//! reversed variable order: the largest eligible index enters, and ratio
//! ties leave by the largest basic index. Any fixed order keeps Bland's
//! termination guarantee; this one reproduces the reference tableaux of the
//! worked example.
//!
//! Variables live in a registry: originals `0..n`, then one slack per row in
//! the order rows were added. Rows may reference earlier slacks.

use std::fmt;

use crate::error::{Error, Result};
use crate::instance::{FractionalObjective, Polyhedron};
use crate::rational::{dot, int, zero, Lit, Rat};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sense {
    Le,
    Ge,
}

/// `Σ coeff·x_var (<= | >=) rhs` over registry variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstraintRow {
    pub coeffs: Vec<(usize, Rat)>,
    pub sense: Sense,
    pub rhs: Rat,
}

impl ConstraintRow {
    pub fn le(coeffs: Vec<(usize, Rat)>, rhs: Rat) -> Self {
        ConstraintRow {
            coeffs,
            sense: Sense::Le,
            rhs,
        }
    }

    pub fn ge(coeffs: Vec<(usize, Rat)>, rhs: Rat) -> Self {
        ConstraintRow {
            coeffs,
            sense: Sense::Ge,
            rhs,
        }
    }

    /// `x_var <= bound`
    pub fn upper_bound(var: usize, bound: i64) -> Self {
        Self::le(vec![(var, int(1))], int(bound))
    }

    /// `x_var >= bound`
    pub fn lower_bound(var: usize, bound: i64) -> Self {
        Self::ge(vec![(var, int(1))], int(bound))
    }

    /// The row as `Σ a_j x_j <= b` (a `>=` row is negated).
    pub fn normalized(&self) -> (Vec<(usize, Rat)>, Rat) {
        match self.sense {
            Sense::Le => (self.coeffs.clone(), self.rhs.clone()),
            Sense::Ge => (
                self.coeffs.iter().map(|(j, a)| (*j, -a)).collect(),
                -self.rhs.clone(),
            ),
        }
    }

    pub fn lhs(&self, values: &[Rat]) -> Rat {
        self.coeffs
            .iter()
            .fold(zero(), |acc, (j, a)| acc + a * &values[*j])
    }

    pub fn is_satisfied(&self, values: &[Rat]) -> bool {
        let lhs = self.lhs(values);
        match self.sense {
            Sense::Le => lhs <= self.rhs,
            Sense::Ge => lhs >= self.rhs,
        }
    }

    pub fn normalized_display(&self) -> String {
        let (coeffs, rhs) = self.normalized();
        ConstraintRow::le(coeffs, rhs).to_string()
    }
}

impl fmt::Display for ConstraintRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (j, a) in &self.coeffs {
            if *a == zero() {
                continue;
            }
            let neg = *a < zero();
            let mag = if neg { -a.clone() } else { a.clone() };
            match (first, neg) {
                (true, true) => f.write_str("-")?,
                (true, false) => {}
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
            }
            if mag != int(1) {
                write!(f, "{} ", Lit(&mag))?;
            }
            write!(f, "x{}", j + 1)?;
            first = false;
        }
        if first {
            f.write_str("0")?;
        }
        let op = match self.sense {
            Sense::Le => "<=",
            Sense::Ge => ">=",
        };
        write!(f, " {op} {}", Lit(&self.rhs))
    }
}

/// Rows over a growing variable registry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstraintSystem {
    n: usize,
    rows: Vec<ConstraintRow>,
}

impl ConstraintSystem {
    pub fn new(n: usize) -> Self {
        ConstraintSystem {
            n,
            rows: Vec::new(),
        }
    }

    pub fn from_polyhedron(n: usize, poly: &Polyhedron) -> Self {
        let mut sys = Self::new(n);
        for (row, &b) in poly.a.iter().zip(&poly.b) {
            let coeffs = row
                .iter()
                .enumerate()
                .filter(|(_, &a)| a != 0)
                .map(|(j, &a)| (j, int(a)))
                .collect();
            sys.rows.push(ConstraintRow::le(coeffs, int(b)));
        }
        sys
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[ConstraintRow] {
        &self.rows
    }

    pub fn registry_len(&self) -> usize {
        self.n + self.rows.len()
    }

    pub fn slack_of(&self, row: usize) -> usize {
        self.n + row
    }

    /// Appends a row and returns the registry index of its slack.
    pub fn push(&mut self, row: ConstraintRow) -> Result<usize> {
        check_row(&row, self.registry_len())?;
        self.rows.push(row);
        Ok(self.registry_len() - 1)
    }

    pub fn with_rows(&self, extra: &[ConstraintRow]) -> Result<Self> {
        let mut sys = self.clone();
        for row in extra {
            sys.push(row.clone())?;
        }
        Ok(sys)
    }

    /// Values of every registry variable at `x` (slacks computed row by row).
    pub fn extend_point(&self, x: &[Rat]) -> Vec<Rat> {
        assert_eq!(x.len(), self.n, "point dimension");
        let mut values = x.to_vec();
        for row in &self.rows {
            let (coeffs, rhs) = row.normalized();
            let lhs = coeffs
                .iter()
                .fold(zero(), |acc, (j, a)| acc + a * &values[*j]);
            values.push(rhs - lhs);
        }
        values
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        self.extend_point(x).iter().all(|v| *v >= zero())
    }
}

fn check_row(row: &ConstraintRow, registry_len: usize) -> Result<()> {
    match row.coeffs.iter().find(|(j, _)| *j >= registry_len) {
        Some((j, _)) => Err(Error::Dimension(format!(
            "row references x{} but only {registry_len} variables exist",
            j + 1
        ))),
        None => Ok(()),
    }
}

/// Pricing data for one nonbasic column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedGradient {
    pub column: usize,
    pub eta: Rat,
    pub theta: Rat,
    pub gamma: Rat,
}

/// Numerator/denominator values at the basic solution and the reduced
/// gradients of every nonbasic column, ascending by column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FracState {
    pub numerator: Rat,
    pub denominator: Rat,
    pub columns: Vec<ReducedGradient>,
}

impl FracState {
    pub fn value(&self) -> Rat {
        &self.numerator / &self.denominator
    }

    pub fn gamma(&self, column: usize) -> Option<&Rat> {
        self.columns
            .iter()
            .find(|c| c.column == column)
            .map(|c| &c.gamma)
    }
}

/// Dense coefficients of a fractional objective over all current columns.
struct Pricing {
    p: Vec<Rat>,
    q: Vec<Rat>,
    alpha: Rat,
    beta: Rat,
}

impl Pricing {
    fn new(obj: &FractionalObjective, ncols: usize) -> Self {
        let pad = |v: &[Rat]| {
            let mut out = v.to_vec();
            out.resize(ncols, zero());
            out
        };
        Pricing {
            p: pad(&obj.p),
            q: pad(&obj.q),
            alpha: obj.alpha.clone(),
            beta: obj.beta.clone(),
        }
    }

    /// `min x_art`
    fn phase_one(ncols: usize, art: usize) -> Self {
        let mut p = vec![zero(); ncols];
        p[art] = int(1);
        Pricing {
            p,
            q: vec![zero(); ncols],
            alpha: zero(),
            beta: int(1),
        }
    }
}

struct PivotBudget {
    used: usize,
    limit: usize,
}

impl PivotBudget {
    fn for_size(rows: usize, cols: usize) -> Self {
        let size = rows + cols + 1;
        PivotBudget {
            used: 0,
            limit: 10 * size * size,
        }
    }

    fn tick(&mut self) -> Result<()> {
        self.used += 1;
        if self.used > self.limit {
            return Err(Error::CyclingGuard { limit: self.limit });
        }
        Ok(())
    }
}

enum PrimalEnd {
    Optimal,
    Unbounded,
}

/// Simplex tableau `x_B = b̂ − Σ â_j x_j` in exact rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tableau {
    n: usize,
    ncols: usize,
    basis: Vec<usize>,
    body: Vec<Vec<Rat>>,
    rhs: Vec<Rat>,
    objective: FractionalObjective,
}

impl Tableau {
    fn empty(n: usize, objective: FractionalObjective) -> Self {
        Tableau {
            n,
            ncols: n,
            basis: Vec::new(),
            body: Vec::new(),
            rhs: Vec::new(),
            objective,
        }
    }

    pub fn num_original(&self) -> usize {
        self.n
    }

    pub fn registry_len(&self) -> usize {
        self.ncols
    }

    pub fn num_rows(&self) -> usize {
        self.basis.len()
    }

    /// Basic variable of each row.
    pub fn basis(&self) -> &[usize] {
        &self.basis
    }

    /// Nonbasic registry variables, ascending.
    pub fn nonbasis(&self) -> Vec<usize> {
        let mut is_basic = vec![false; self.ncols];
        for &k in &self.basis {
            is_basic[k] = true;
        }
        (0..self.ncols).filter(|&j| !is_basic[j]).collect()
    }

    pub fn row_of(&self, var: usize) -> Option<usize> {
        self.basis.iter().position(|&k| k == var)
    }

    /// Updated coefficient `â` in row `row`, column `col`.
    pub fn entry(&self, row: usize, col: usize) -> &Rat {
        &self.body[row][col]
    }

    pub fn rhs(&self) -> &[Rat] {
        &self.rhs
    }

    pub fn objective(&self) -> &FractionalObjective {
        &self.objective
    }

    /// Values of all registry variables at the basic solution.
    pub fn values(&self) -> Vec<Rat> {
        let mut v = vec![zero(); self.ncols];
        for (r, &k) in self.basis.iter().enumerate() {
            v[k] = self.rhs[r].clone();
        }
        v
    }

    /// Basic solution restricted to the original variables.
    pub fn point(&self) -> Vec<Rat> {
        let mut v = self.values();
        v.truncate(self.n);
        v
    }

    pub fn is_primal_feasible(&self) -> bool {
        self.rhs.iter().all(|b| *b >= zero())
    }

    /// Reduced gradients of `obj` (over the original variables) at this basis.
    pub fn reduced_gradients(&self, obj: &FractionalObjective) -> FracState {
        self.frac_state(&Pricing::new(obj, self.ncols))
    }

    /// Optimality certificate for the tableau's own objective:
    /// every nonbasic `γ̄_j >= 0`.
    pub fn is_optimal(&self) -> bool {
        self.is_primal_feasible()
            && self
                .reduced_gradients(&self.objective)
                .columns
                .iter()
                .all(|c| c.gamma >= zero())
    }

    /// Swaps a nonbasic column into the basis in place of a basic one. Used to
    /// move between alternative optimal bases; a nonzero pivot entry is
    /// required and feasibility is not checked.
    pub fn exchange(&mut self, entering: usize, leaving: usize) -> Result<()> {
        let bad = |reason| Error::BadExchange {
            entering: entering + 1,
            leaving: leaving + 1,
            reason,
        };
        if entering >= self.ncols || self.row_of(entering).is_some() {
            return Err(bad("entering variable is not nonbasic"));
        }
        let row = self
            .row_of(leaving)
            .ok_or_else(|| bad("leaving variable is not basic"))?;
        if self.body[row][entering] == zero() {
            return Err(bad("zero pivot entry"));
        }
        self.pivot(row, entering);
        Ok(())
    }

    fn frac_state(&self, pricing: &Pricing) -> FracState {
        let values = self.values();
        let numerator = dot(&pricing.p, &values) + &pricing.alpha;
        let denominator = dot(&pricing.q, &values) + &pricing.beta;
        let columns = self
            .nonbasis()
            .into_iter()
            .map(|j| {
                let mut eta = pricing.p[j].clone();
                let mut theta = pricing.q[j].clone();
                for (r, &k) in self.basis.iter().enumerate() {
                    let a = &self.body[r][j];
                    if *a != zero() {
                        eta -= &pricing.p[k] * a;
                        theta -= &pricing.q[k] * a;
                    }
                }
                let gamma = &denominator * &eta - &numerator * &theta;
                ReducedGradient {
                    column: j,
                    eta,
                    theta,
                    gamma,
                }
            })
            .collect();
        FracState {
            numerator,
            denominator,
            columns,
        }
    }

    /// Adds a row with a fresh basic slack, expressed over the current nonbasis.
    fn append_row(&mut self, row: &ConstraintRow) -> Result<()> {
        check_row(row, self.ncols)?;
        for r in &mut self.body {
            r.push(zero());
        }
        self.ncols += 1;
        let (coeffs, mut rhs) = row.normalized();
        let mut dense = vec![zero(); self.ncols];
        for (j, a) in coeffs {
            dense[j] += a;
        }
        dense[self.ncols - 1] = int(1);
        for (r, &k) in self.basis.iter().enumerate() {
            if dense[k] == zero() {
                continue;
            }
            let factor = dense[k].clone();
            for (d, a) in dense.iter_mut().zip(&self.body[r]) {
                if *a != zero() {
                    *d -= &factor * a;
                }
            }
            rhs -= &factor * &self.rhs[r];
        }
        self.body.push(dense);
        self.rhs.push(rhs);
        self.basis.push(self.ncols - 1);
        Ok(())
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let piv = self.body[row][col].clone();
        debug_assert!(piv != zero(), "zero pivot");
        for a in &mut self.body[row] {
            *a /= &piv;
        }
        self.rhs[row] /= &piv;
        let pivot_row = self.body[row].clone();
        let pivot_rhs = self.rhs[row].clone();
        for r in 0..self.body.len() {
            if r == row || self.body[r][col] == zero() {
                continue;
            }
            let factor = self.body[r][col].clone();
            for (a, p) in self.body[r].iter_mut().zip(&pivot_row) {
                if *p != zero() {
                    *a -= &factor * p;
                }
            }
            self.rhs[r] -= &factor * &pivot_rhs;
        }
        self.basis[row] = col;
    }

    fn budget(&self) -> PivotBudget {
        PivotBudget::for_size(self.num_rows(), self.ncols)
    }

    fn reoptimize(mut self) -> Result<LfpOutcome> {
        let mut budget = self.budget();
        if !self.restore_feasibility(&mut budget)? {
            return Ok(LfpOutcome::Infeasible);
        }
        let pricing = Pricing::new(&self.objective, self.ncols);
        match self.primal(&pricing, &mut budget)? {
            PrimalEnd::Unbounded => Ok(LfpOutcome::Unbounded),
            PrimalEnd::Optimal => {
                let x = self.point();
                let value = self.objective.numerator(&x) / self.objective.denominator(&x);
                debug_assert!(self.is_optimal());
                Ok(LfpOutcome::Optimal(LfpOptimum {
                    x,
                    value,
                    tableau: self,
                }))
            }
        }
    }

    /// Dual simplex on the `γ̄` row while the basis stays dual feasible; an
    /// auxiliary phase otherwise. Returns `false` when the rows are infeasible.
    fn restore_feasibility(&mut self, budget: &mut PivotBudget) -> Result<bool> {
        let pricing = Pricing::new(&self.objective, self.ncols);
        let dual_cap = 4 * (self.num_rows() + self.ncols);
        let mut dual_pivots = 0;
        loop {
            let leaving = (0..self.num_rows())
                .filter(|&r| self.rhs[r] < zero())
                .max_by_key(|&r| self.basis[r]);
            let Some(r) = leaving else {
                return Ok(true);
            };
            let nonbasis = self.nonbasis();
            let candidates: Vec<usize> = nonbasis
                .iter()
                .copied()
                .filter(|&j| self.body[r][j] < zero())
                .collect();
            if candidates.is_empty() {
                // x_B(r) = b̂_r − Σ â_rj x_j < 0 for every x >= 0
                return Ok(false);
            }
            let state = self.frac_state(&pricing);
            let dual_feasible =
                state.denominator > zero() && state.columns.iter().all(|c| c.gamma >= zero());
            if !dual_feasible || dual_pivots >= dual_cap {
                return self.phase_one(budget);
            }
            let mut best: Option<(usize, Rat)> = None;
            for j in candidates {
                let gamma = state.gamma(j).expect("nonbasic column");
                let ratio = gamma / -self.body[r][j].clone();
                if best.as_ref().is_none_or(|(_, b)| ratio <= *b) {
                    best = Some((j, ratio));
                }
            }
            let (j, _) = best.expect("nonempty candidates");
            self.pivot(r, j);
            budget.tick()?;
            dual_pivots += 1;
        }
    }

    /// Single-artificial feasibility phase: `min x_a` with `x_a` entering every
    /// infeasible row.
    fn phase_one(&mut self, budget: &mut PivotBudget) -> Result<bool> {
        let art = self.ncols;
        for (r, row) in self.body.iter_mut().enumerate() {
            row.push(if self.rhs[r] < zero() {
                int(-1)
            } else {
                zero()
            });
        }
        self.ncols += 1;
        let worst = (0..self.num_rows())
            .min_by(|&a, &b| self.rhs[a].cmp(&self.rhs[b]).then(a.cmp(&b)))
            .expect("phase one needs an infeasible row");
        self.pivot(worst, art);
        budget.tick()?;

        let pricing = Pricing::phase_one(self.ncols, art);
        if let PrimalEnd::Unbounded = self.primal(&pricing, budget)? {
            unreachable!("x_a >= 0 bounds the auxiliary objective");
        }
        let feasible = match self.row_of(art) {
            None => true,
            Some(r) if self.rhs[r] == zero() => {
                // [A | I] has full row rank, so a real column can replace x_a
                let j = (0..art)
                    .find(|&j| self.body[r][j] != zero() && self.row_of(j).is_none())
                    .expect("full row rank");
                self.pivot(r, j);
                budget.tick()?;
                true
            }
            Some(_) => false,
        };
        for row in &mut self.body {
            row.pop();
        }
        self.ncols -= 1;
        Ok(feasible)
    }

    fn primal(&mut self, pricing: &Pricing, budget: &mut PivotBudget) -> Result<PrimalEnd> {
        loop {
            let state = self.frac_state(pricing);
            let Some(j) = state
                .columns
                .iter()
                .rfind(|c| c.gamma < zero())
                .map(|c| c.column)
            else {
                return Ok(PrimalEnd::Optimal);
            };
            let mut best: Option<(usize, Rat)> = None;
            for r in 0..self.num_rows() {
                let a = &self.body[r][j];
                if *a <= zero() {
                    continue;
                }
                let ratio = &self.rhs[r] / a;
                let better = match &best {
                    None => true,
                    Some((br, b)) => ratio < *b || (ratio == *b && self.basis[r] > self.basis[*br]),
                };
                if better {
                    best = Some((r, ratio));
                }
            }
            let Some((r, _)) = best else {
                return Ok(PrimalEnd::Unbounded);
            };
            self.pivot(r, j);
            budget.tick()?;
        }
    }
}

impl fmt::Display for Tableau {
    /// Basic rows over nonbasic columns, then the `γ̄` row of the tableau's
    /// objective with the objective value in the RHS column.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let nonbasis = self.nonbasis();
        let mut grid: Vec<Vec<String>> = Vec::new();
        let mut header = vec!["B".to_string()];
        header.extend(nonbasis.iter().map(|j| format!("x{}", j + 1)));
        header.push("RHS".into());
        grid.push(header);
        let mut order: Vec<usize> = (0..self.num_rows()).collect();
        order.sort_by_key(|&r| self.basis[r]);
        for r in order {
            let mut line = vec![format!("x{}", self.basis[r] + 1)];
            line.extend(nonbasis.iter().map(|&j| Lit(&self.body[r][j]).to_string()));
            line.push(Lit(&self.rhs[r]).to_string());
            grid.push(line);
        }
        let state = self.reduced_gradients(&self.objective);
        let mut line = vec!["gamma".to_string()];
        line.extend(state.columns.iter().map(|c| Lit(&c.gamma).to_string()));
        if state.denominator != zero() {
            line.push(Lit(&state.value()).to_string());
        } else {
            line.push("-".into());
        }
        grid.push(line);

        let ncol = grid[0].len();
        let widths: Vec<usize> = (0..ncol)
            .map(|c| grid.iter().map(|l| l[c].len()).max().unwrap_or(0))
            .collect();
        for line in &grid {
            let cells: Vec<String> = line
                .iter()
                .zip(&widths)
                .map(|(s, w)| format!("{s:>w$}"))
                .collect();
            writeln!(f, "{}", cells.join("  ").trim_end())?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LfpOptimum {
    pub x: Vec<Rat>,
    pub value: Rat,
    pub tableau: Tableau,
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[allow(clippy::large_enum_variant)]
pub enum LfpOutcome {
    Optimal(LfpOptimum),
    Infeasible,
    /// Only reachable on unbounded regions, which validated instances exclude.
    Unbounded,
}

impl LfpOutcome {
    pub fn optimum(self) -> Option<LfpOptimum> {
        match self {
            LfpOutcome::Optimal(opt) => Some(opt),
            _ => None,
        }
    }
}

/// Minimizes `objective` over `{x >= 0 | system}`.
pub fn solve_lfp(system: &ConstraintSystem, objective: &FractionalObjective) -> Result<LfpOutcome> {
    if objective.dim() != system.n() {
        return Err(Error::Dimension(format!(
            "objective has {} coefficients, system has {} variables",
            objective.dim(),
            system.n()
        )));
    }
    let mut t = Tableau::empty(system.n(), objective.clone());
    for row in system.rows() {
        t.append_row(row)?;
    }
    t.reoptimize()
}

/// Appends `row` (fresh slack at the end of the registry) to an optimal
/// tableau and restores optimality.
pub fn add_row_and_reoptimize(t: Tableau, row: &ConstraintRow) -> Result<LfpOutcome> {
    add_rows_and_reoptimize(t, std::slice::from_ref(row))
}

pub fn add_rows_and_reoptimize(mut t: Tableau, rows: &[ConstraintRow]) -> Result<LfpOutcome> {
    for row in rows {
        t.append_row(row)?;
    }
    t.reoptimize()
}

/// `j ↦ γ̄_j` over the nonbasic columns for `obj`.
pub fn reduced_gradient_row(t: &Tableau, obj: &FractionalObjective) -> Vec<(usize, Rat)> {
    t.reduced_gradients(obj)
        .columns
        .into_iter()
        .map(|c| (c.column, c.gamma))
        .collect()
}
