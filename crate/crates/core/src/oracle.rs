//! Brute-force reference: enumerate every feasible integer point and filter
//! by pairwise dominance.

use crate::error::{Error, Result};
use crate::instance::{FractionalObjective, Instance};
use crate::rational::{floor_i64, from_ints, int, zero, Rat};
use crate::simplex::{solve_lfp, LfpOutcome};

pub const DEFAULT_ENUMERATION_CAP: u64 = 10_000_000;

pub type Point = Vec<i64>;

/// Largest integer value of each coordinate over the continuous region.
pub fn feasible_box(inst: &Instance) -> Result<Vec<i64>> {
    let system = inst.system();
    (0..inst.n)
        .map(|k| {
            let mut p = vec![zero(); inst.n];
            p[k] = int(-1);
            match solve_lfp(&system, &FractionalObjective::linear(p, zero()))? {
                LfpOutcome::Optimal(opt) => {
                    Ok(floor_i64(&opt.x[k]).expect("coordinate bound fits in i64"))
                }
                LfpOutcome::Infeasible => Err(Error::EmptyRegion),
                LfpOutcome::Unbounded => Err(Error::UnboundedRegion(k)),
            }
        })
        .collect()
}

/// Every integer point of `{x >= 0 | Ax <= b}` in lexicographic order.
pub fn enumerate_feasible(inst: &Instance, cap: u64) -> Result<Vec<Point>> {
    let upper = feasible_box(inst)?;
    let volume = upper
        .iter()
        .try_fold(1u128, |acc, &u| acc.checked_mul(u as u128 + 1))
        .unwrap_or(u128::MAX);
    if volume > cap as u128 {
        return Err(Error::EnumerationCap { volume, cap });
    }
    let mut out = Vec::new();
    let mut x = vec![0i64; inst.n];
    loop {
        if inst.polyhedron.contains(&x) {
            out.push(x.clone());
        }
        // odometer, last coordinate fastest
        let mut k = inst.n;
        loop {
            if k == 0 {
                return Ok(out);
            }
            k -= 1;
            if x[k] < upper[k] {
                x[k] += 1;
                break;
            }
            x[k] = 0;
        }
    }
}

/// `a` dominates `b`: no worse anywhere, strictly better somewhere.
pub fn dominates(a: &[Rat], b: &[Rat]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y) && a.iter().zip(b).any(|(x, y)| x < y)
}

/// Keeps the items whose criterion vectors no other item dominates, in input order.
pub fn pareto_filter<T: Clone>(items: &[T], criteria: impl Fn(&T) -> Vec<Rat>) -> Vec<T> {
    let values: Vec<Vec<Rat>> = items.iter().map(criteria).collect();
    items
        .iter()
        .zip(&values)
        .filter(|(_, v)| !values.iter().any(|w| dominates(w, v)))
        .map(|(item, _)| item.clone())
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParetoSets {
    pub d: Vec<Point>,
    pub x_q: Vec<Point>,
    pub x_f: Vec<Point>,
    pub x_eff: Vec<Point>,
}

pub fn quadratic_criteria(inst: &Instance, x: &[i64]) -> Vec<Rat> {
    inst.criteria(&from_ints(x))
        .expect("point matches instance dimension")
}

pub fn fractional_criteria(inst: &Instance, x: &[i64]) -> Vec<Rat> {
    inst.preferences(&from_ints(x))
        .expect("denominators positive on validated instances")
}

pub fn oracle_solve(inst: &Instance, cap: u64) -> Result<ParetoSets> {
    let d = enumerate_feasible(inst, cap)?;
    let x_q = pareto_filter(&d, |x| quadratic_criteria(inst, x));
    let x_f = pareto_filter(&d, |x| fractional_criteria(inst, x));
    let x_eff = x_q.iter().filter(|x| x_f.contains(x)).cloned().collect();
    Ok(ParetoSets { d, x_q, x_f, x_eff })
}
