//! Efficiency tests for a candidate integer point.
//!
//! T¹ maximizes `Σ ε_i` subject to `f_i(y) + ε_i <= f_i(x*)`, `ε >= 0`,
//! `y ∈ D`. T² maximizes `w₁ + w₂` subject to
//! `(p^s − ψ^s(x*) q^s) y + w_s <= ψ^s(x*) β^s − α^s`, `w >= 0`, `y ∈ D`.
//! Once `y` is fixed the auxiliaries sit at their upper bounds, so both
//! programs are solved exactly by scanning `D`.

use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::oracle::{enumerate_feasible, Point, DEFAULT_ENUMERATION_CAP};
use crate::rational::{from_ints, zero, Rat};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EfficiencyVerdict {
    pub efficient: bool,
    /// `φ` for T¹, `w₁ + w₂` for T².
    pub objective_value: Rat,
    /// First optimizer in lexicographic order when the value is positive.
    pub witness: Option<Point>,
}

impl EfficiencyVerdict {
    fn from_best(best: Option<(Rat, Point)>) -> Self {
        match best {
            Some((value, y)) if value > zero() => EfficiencyVerdict {
                efficient: false,
                objective_value: value,
                witness: Some(y),
            },
            _ => EfficiencyVerdict {
                efficient: true,
                objective_value: zero(),
                witness: None,
            },
        }
    }
}

/// Runs both tests against a cached enumeration of `D`.
pub struct EfficiencyTester<'a> {
    inst: &'a Instance,
    points: Vec<Point>,
    criteria: Vec<Vec<Rat>>,
    /// `(P^s(y), Q^s(y))` for s = 1, 2.
    fractions: Vec<[(Rat, Rat); 2]>,
}

impl<'a> EfficiencyTester<'a> {
    pub fn new(inst: &'a Instance, cap: u64) -> Result<Self> {
        let points = enumerate_feasible(inst, cap)?;
        let mut criteria = Vec::with_capacity(points.len());
        let mut fractions = Vec::with_capacity(points.len());
        for y in &points {
            let yr = from_ints(y);
            criteria.push(inst.criteria(&yr)?);
            fractions.push(
                inst.fractionals
                    .each_ref()
                    .map(|g| (g.numerator(&yr), g.denominator(&yr))),
            );
        }
        Ok(EfficiencyTester {
            inst,
            points,
            criteria,
            fractions,
        })
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    fn check_feasible(&self, x: &[i64]) -> Result<()> {
        if x.len() != self.inst.n || !self.inst.polyhedron.contains(x) {
            return Err(Error::InfeasiblePoint);
        }
        Ok(())
    }

    /// T¹: `φ = max Σ_i (f_i(x*) − f_i(y))` over `y ∈ D` with `f(y) <= f(x*)`.
    pub fn moiqp(&self, x_star: &[i64]) -> Result<EfficiencyVerdict> {
        self.check_feasible(x_star)?;
        let reference = self.inst.criteria(&from_ints(x_star))?;
        let mut best: Option<(Rat, Point)> = None;
        for (y, fy) in self.points.iter().zip(&self.criteria) {
            if fy.iter().zip(&reference).any(|(a, b)| a > b) {
                continue;
            }
            let phi = reference
                .iter()
                .zip(fy)
                .fold(zero(), |acc, (b, a)| acc + b - a);
            if best.as_ref().is_none_or(|(v, _)| phi > *v) {
                best = Some((phi, y.clone()));
            }
        }
        Ok(EfficiencyVerdict::from_best(best))
    }

    /// T²: `w_s = ψ^s(x*)·(q^s y + β^s) − (p^s y + α^s)`, both required `>= 0`.
    pub fn boilfp(&self, x_star: &[i64]) -> Result<EfficiencyVerdict> {
        self.check_feasible(x_star)?;
        let psi_star = self.inst.preferences(&from_ints(x_star))?;
        let mut best: Option<(Rat, Point)> = None;
        for (y, parts) in self.points.iter().zip(&self.fractions) {
            let w: Vec<Rat> = parts
                .iter()
                .zip(&psi_star)
                .map(|((num, den), psi)| psi * den - num)
                .collect();
            if w.iter().any(|v| *v < zero()) {
                continue;
            }
            let total = &w[0] + &w[1];
            if best.as_ref().is_none_or(|(v, _)| total > *v) {
                best = Some((total, y.clone()));
            }
        }
        Ok(EfficiencyVerdict::from_best(best))
    }
}

pub fn test_moiqp_efficiency(x_star: &[i64], inst: &Instance) -> Result<EfficiencyVerdict> {
    EfficiencyTester::new(inst, DEFAULT_ENUMERATION_CAP)?.moiqp(x_star)
}

pub fn test_boilfp_efficiency(x_star: &[i64], inst: &Instance) -> Result<EfficiencyVerdict> {
    EfficiencyTester::new(inst, DEFAULT_ENUMERATION_CAP)?.boilfp(x_star)
}
