//! Efficient cuts at an integer optimum of the relaxation.
//!
//! `H` collects nonbasic directions along which some quadratic criterion does
//! not increase to first order (or all criteria are flat); `H′` collects
//! directions along which `ψ²` decreases, or both preferences are flat. Any
//! integer point with `x_j = 0` on all of `H` (resp. `H′`) other than `x*` is
//! dominated by `x*`, so the successor node keeps only points with
//! `Σ_{j∈H} x_j >= 1` and `Σ_{j∈H′} x_j >= 1`.

use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::rational::{int, zero, Rat};
use crate::simplex::{ConstraintRow, Tableau};

/// `f̄_{i,j}` for every criterion `i` and nonbasic column `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedCriteria {
    /// Nonbasic registry columns, ascending.
    pub columns: Vec<usize>,
    /// `rows[i][c]` is `f̄_i` at `columns[c]`.
    pub rows: Vec<Vec<Rat>>,
}

impl ReducedCriteria {
    pub fn column(&self, var: usize) -> Option<Vec<Rat>> {
        let c = self.columns.iter().position(|&j| j == var)?;
        Some(self.rows.iter().map(|row| row[c].clone()).collect())
    }
}

/// `f̄_{i,j} = ρ_j − Σ_{k basic, original} ∇f_i(x*)_k · â_{p(k)j}` with
/// `ρ_j = ∇f_i(x*)_j` for original `j` and `0` for slack `j`.
pub fn reduced_criterion_rows(
    t: &Tableau,
    inst: &Instance,
    x_star: &[Rat],
) -> Result<ReducedCriteria> {
    let columns = t.nonbasis();
    let n = t.num_original();
    let basic_original: Vec<(usize, usize)> = t
        .basis()
        .iter()
        .enumerate()
        .filter(|(_, &k)| k < n)
        .map(|(r, &k)| (r, k))
        .collect();
    let mut rows = Vec::with_capacity(inst.r());
    for f in &inst.quadratics {
        let grad = f.gradient(x_star)?;
        let row = columns
            .iter()
            .map(|&j| {
                let rho = if j < n { grad[j].clone() } else { zero() };
                basic_original
                    .iter()
                    .fold(rho, |acc, &(r, k)| acc - &grad[k] * t.entry(r, j))
            })
            .collect();
        rows.push(row);
    }
    Ok(ReducedCriteria { columns, rows })
}

/// `H = {j | ∃i f̄_{i,j} < 0} ∪ {j | ∀i f̄_{i,j} = 0}`.
pub fn build_h(f_bar: &ReducedCriteria) -> Vec<usize> {
    f_bar
        .columns
        .iter()
        .enumerate()
        .filter(|&(c, _)| {
            let any_negative = f_bar.rows.iter().any(|row| row[c] < zero());
            let all_zero = f_bar.rows.iter().all(|row| row[c] == zero());
            any_negative || all_zero
        })
        .map(|(_, &j)| j)
        .collect()
}

/// `H′ = {j | γ̄²_j < 0} ∪ {j | γ̄¹_j = 0 ∧ γ̄²_j = 0}`; the tableau's own
/// objective is `ψ¹`.
pub fn build_h_prime(t: &Tableau, secondary: &crate::instance::FractionalObjective) -> Vec<usize> {
    let first = t.reduced_gradients(t.objective());
    let second = t.reduced_gradients(secondary);
    first
        .columns
        .iter()
        .zip(&second.columns)
        .filter(|(g1, g2)| g2.gamma < zero() || (g1.gamma == zero() && g2.gamma == zero()))
        .map(|(g1, _)| g1.column)
        .collect()
}

/// `Σ_{j∈indices} x_j >= 1`.
pub fn make_cut(indices: &[usize]) -> Result<ConstraintRow> {
    if indices.is_empty() {
        return Err(Error::EmptyCut);
    }
    Ok(ConstraintRow::ge(
        indices.iter().map(|&j| (j, int(1))).collect(),
        int(1),
    ))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CutReport {
    pub h: Vec<usize>,
    pub h_prime: Vec<usize>,
    pub f_bar: ReducedCriteria,
    pub cut_moiqp: Option<ConstraintRow>,
    pub cut_boilfp: Option<ConstraintRow>,
}

impl CutReport {
    /// Builds both sets and cuts at the optimal tableau of an integer node.
    pub fn build(t: &Tableau, inst: &Instance, x_star: &[Rat]) -> Result<Self> {
        let f_bar = reduced_criterion_rows(t, inst, x_star)?;
        let h = build_h(&f_bar);
        let h_prime = build_h_prime(t, &inst.fractionals[1]);
        let cut_moiqp = make_cut(&h).ok();
        let cut_boilfp = make_cut(&h_prime).ok();
        Ok(CutReport {
            h,
            h_prime,
            f_bar,
            cut_moiqp,
            cut_boilfp,
        })
    }

    /// Either set empty: the node holds no further efficient point.
    pub fn fathoms(&self) -> bool {
        self.h.is_empty() || self.h_prime.is_empty()
    }

    /// Rows for the successor node; a cut identical to the first is emitted once.
    pub fn successor_rows(&self) -> Vec<ConstraintRow> {
        if self.fathoms() {
            return Vec::new();
        }
        let mut rows: Vec<ConstraintRow> = self.cut_moiqp.iter().cloned().collect();
        if self.h_prime != self.h {
            rows.extend(self.cut_boilfp.iter().cloned());
        }
        rows
    }

    /// Whether a full registry assignment satisfies every emitted cut.
    pub fn admits(&self, values: &[Rat]) -> bool {
        self.cut_moiqp
            .iter()
            .chain(&self.cut_boilfp)
            .all(|row| row.is_satisfied(values))
    }
}
