//! Problem instances: r convex quadratic criteria, two linear fractional
//! preference functions, and the polyhedron `{x >= 0 | Ax <= b}`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::document;
use crate::error::{Error, Result};
use crate::rational::{dot, from_ints, int, zero, Rat, RatLit};
use crate::simplex::{solve_lfp, ConstraintSystem, LfpOutcome};

/// `f(x) = ½ xᵀQx + cᵀx` with integer data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticObjective {
    pub q: Vec<Vec<i64>>,
    pub c: Vec<i64>,
}

impl QuadraticObjective {
    pub fn dim(&self) -> usize {
        self.c.len()
    }

    pub fn eval(&self, x: &[Rat]) -> Result<Rat> {
        self.check_dim(x.len())?;
        let qx = self.q_times(x);
        let half = Rat::new(1.into(), 2.into());
        Ok(half * dot(x, &qx) + dot(&from_ints(&self.c), x))
    }

    /// `Qx + c`.
    pub fn gradient(&self, x: &[Rat]) -> Result<Vec<Rat>> {
        self.check_dim(x.len())?;
        Ok(self
            .q_times(x)
            .into_iter()
            .zip(&self.c)
            .map(|(v, &c)| v + int(c))
            .collect())
    }

    fn q_times(&self, x: &[Rat]) -> Vec<Rat> {
        self.q
            .iter()
            .map(|row| {
                row.iter()
                    .zip(x)
                    .fold(zero(), |acc, (&a, xi)| acc + int(a) * xi)
            })
            .collect()
    }

    fn check_dim(&self, len: usize) -> Result<()> {
        if len != self.dim() {
            return Err(Error::Dimension(format!(
                "point has {len} coordinates, objective expects {}",
                self.dim()
            )));
        }
        Ok(())
    }

    /// Exact PSD test by symmetric-pivoting LDLᵀ: every pivot must be
    /// nonnegative, and a zero diagonal forces a zero row.
    pub fn is_psd(&self) -> bool {
        let mut m: Vec<Vec<Rat>> = self.q.iter().map(|row| from_ints(row)).collect();
        let mut active: Vec<usize> = (0..m.len()).collect();
        while !active.is_empty() {
            if active.iter().any(|&i| m[i][i] < zero()) {
                return false;
            }
            let Some(pos) = active.iter().position(|&i| m[i][i] > zero()) else {
                // all remaining diagonals are zero
                return active
                    .iter()
                    .all(|&i| active.iter().all(|&j| m[i][j] == zero()));
            };
            let p = active.remove(pos);
            let pivot = m[p][p].clone();
            for &i in &active {
                if m[i][p] == zero() {
                    continue;
                }
                let factor = &m[i][p] / &pivot;
                for &j in &active {
                    let delta = &factor * &m[p][j];
                    m[i][j] -= delta;
                }
            }
        }
        true
    }
}

/// `ψ(x) = (pᵀx + α) / (qᵀx + β)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FractionalObjective {
    pub p: Vec<Rat>,
    pub q: Vec<Rat>,
    pub alpha: Rat,
    pub beta: Rat,
}

impl FractionalObjective {
    /// A linear objective `pᵀx + α` seen as a fraction with denominator 1.
    pub fn linear(p: Vec<Rat>, alpha: Rat) -> Self {
        let n = p.len();
        FractionalObjective {
            p,
            q: vec![zero(); n],
            alpha,
            beta: int(1),
        }
    }

    pub fn dim(&self) -> usize {
        self.p.len()
    }

    pub fn numerator(&self, x: &[Rat]) -> Rat {
        dot(&self.p, x) + &self.alpha
    }

    pub fn denominator(&self, x: &[Rat]) -> Rat {
        dot(&self.q, x) + &self.beta
    }

    pub fn eval(&self, x: &[Rat]) -> Result<Rat> {
        if x.len() != self.dim() {
            return Err(Error::Dimension(format!(
                "point has {} coordinates, objective expects {}",
                x.len(),
                self.dim()
            )));
        }
        let den = self.denominator(x);
        if den == zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(self.numerator(x) / den)
    }
}

/// `{x >= 0 | Ax <= b}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polyhedron {
    pub a: Vec<Vec<i64>>,
    pub b: Vec<i64>,
}

impl Polyhedron {
    pub fn rows(&self) -> usize {
        self.b.len()
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        x.iter().all(|&v| v >= 0)
            && self.a.iter().zip(&self.b).all(|(row, &rhs)| {
                let lhs: i128 = row
                    .iter()
                    .zip(x)
                    .map(|(&a, &v)| a as i128 * v as i128)
                    .sum();
                lhs <= rhs as i128
            })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub n: usize,
    pub quadratics: Vec<QuadraticObjective>,
    pub fractionals: [FractionalObjective; 2],
    pub polyhedron: Polyhedron,
}

impl Instance {
    /// Builds an instance after checking dimensions and symmetry of every Q.
    pub fn new(
        n: usize,
        quadratics: Vec<QuadraticObjective>,
        fractionals: [FractionalObjective; 2],
        polyhedron: Polyhedron,
    ) -> Result<Self> {
        let inst = Instance {
            n,
            quadratics,
            fractionals,
            polyhedron,
        };
        if let Some(msg) = inst.dimension_problem() {
            return Err(Error::Dimension(msg));
        }
        if let Some((objective, row, col)) = inst.asymmetry() {
            return Err(Error::NonSymmetric {
                objective,
                row,
                col,
            });
        }
        Ok(inst)
    }

    pub fn r(&self) -> usize {
        self.quadratics.len()
    }

    /// Criterion vector `(f_1(x), ..., f_r(x))`.
    pub fn criteria(&self, x: &[Rat]) -> Result<Vec<Rat>> {
        self.quadratics.iter().map(|f| f.eval(x)).collect()
    }

    /// Preference vector `(ψ¹(x), ψ²(x))`.
    pub fn preferences(&self, x: &[Rat]) -> Result<Vec<Rat>> {
        self.fractionals.iter().map(|f| f.eval(x)).collect()
    }

    /// The continuous relaxation as a constraint system over `x`.
    pub fn system(&self) -> ConstraintSystem {
        ConstraintSystem::from_polyhedron(self.n, &self.polyhedron)
    }

    fn dimension_problem(&self) -> Option<String> {
        let n = self.n;
        if n == 0 {
            return Some("n must be at least 1".into());
        }
        if self.r() < 2 {
            return Some(format!(
                "r = {} but at least 2 quadratic objectives are required",
                self.r()
            ));
        }
        for (i, f) in self.quadratics.iter().enumerate() {
            if f.q.len() != n || f.q.iter().any(|row| row.len() != n) {
                return Some(format!("Q[{i}] is not {n}x{n}"));
            }
            if f.c.len() != n {
                return Some(format!("c[{i}] has length {}, expected {n}", f.c.len()));
            }
        }
        for (s, g) in self.fractionals.iter().enumerate() {
            if g.p.len() != n || g.q.len() != n {
                return Some(format!("fractional[{s}] vectors must have length {n}"));
            }
        }
        let poly = &self.polyhedron;
        if poly.a.len() != poly.b.len() {
            return Some(format!(
                "A has {} rows but b has {} entries",
                poly.a.len(),
                poly.b.len()
            ));
        }
        if let Some(k) = poly.a.iter().position(|row| row.len() != n) {
            return Some(format!(
                "A row {k} has length {}, expected {n}",
                poly.a[k].len()
            ));
        }
        None
    }

    fn asymmetry(&self) -> Option<(usize, usize, usize)> {
        for (k, f) in self.quadratics.iter().enumerate() {
            for i in 0..self.n {
                for j in (i + 1)..self.n {
                    if f.q[i][j] != f.q[j][i] {
                        return Some((k, i, j));
                    }
                }
            }
        }
        None
    }
}

pub fn eval_quadratic(obj: &QuadraticObjective, x: &[Rat]) -> Result<Rat> {
    obj.eval(x)
}

pub fn eval_fractional(obj: &FractionalObjective, x: &[Rat]) -> Result<Rat> {
    obj.eval(x)
}

pub fn gradient_quadratic(obj: &QuadraticObjective, x: &[Rat]) -> Result<Vec<Rat>> {
    obj.gradient(x)
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceDoc {
    n: usize,
    r: usize,
    #[serde(rename = "Q")]
    q: Vec<Vec<Vec<i64>>>,
    c: Vec<Vec<i64>>,
    fractional: Vec<FractionalDoc>,
    #[serde(rename = "A")]
    a: Vec<Vec<i64>>,
    b: Vec<i64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FractionalDoc {
    p: Vec<RatLit>,
    q: Vec<RatLit>,
    alpha: RatLit,
    beta: RatLit,
}

impl From<FractionalDoc> for FractionalObjective {
    fn from(d: FractionalDoc) -> Self {
        FractionalObjective {
            p: d.p.into_iter().map(|v| v.0).collect(),
            q: d.q.into_iter().map(|v| v.0).collect(),
            alpha: d.alpha.0,
            beta: d.beta.0,
        }
    }
}

impl From<&FractionalObjective> for FractionalDoc {
    fn from(f: &FractionalObjective) -> Self {
        FractionalDoc {
            p: f.p.iter().cloned().map(RatLit).collect(),
            q: f.q.iter().cloned().map(RatLit).collect(),
            alpha: RatLit(f.alpha.clone()),
            beta: RatLit(f.beta.clone()),
        }
    }
}

/// Parses an instance document (JSON with `a/b` rational strings).
pub fn parse_instance(text: &str) -> Result<Instance> {
    let doc: InstanceDoc = serde_json::from_str(text).map_err(|e| Error::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    if doc.q.len() != doc.r || doc.c.len() != doc.r {
        return Err(Error::Dimension(format!(
            "r = {} but {} Q matrices and {} c vectors given",
            doc.r,
            doc.q.len(),
            doc.c.len()
        )));
    }
    let Ok(fractionals) = <[FractionalDoc; 2]>::try_from(doc.fractional) else {
        return Err(Error::Dimension(
            "exactly 2 fractional objectives are required".into(),
        ));
    };
    let quadratics = doc
        .q
        .into_iter()
        .zip(doc.c)
        .map(|(q, c)| QuadraticObjective { q, c })
        .collect();
    Instance::new(
        doc.n,
        quadratics,
        fractionals.map(FractionalObjective::from),
        Polyhedron { a: doc.a, b: doc.b },
    )
}

pub fn render_instance(inst: &Instance) -> String {
    let doc = InstanceDoc {
        n: inst.n,
        r: inst.r(),
        q: inst.quadratics.iter().map(|f| f.q.clone()).collect(),
        c: inst.quadratics.iter().map(|f| f.c.clone()).collect(),
        fractional: inst.fractionals.iter().map(FractionalDoc::from).collect(),
        a: inst.polyhedron.a.clone(),
        b: inst.polyhedron.b.clone(),
    };
    document::to_pretty(&doc)
}

/// A failed instance assumption, returned as data by [`validate_instance`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    Dimension(String),
    NotSymmetric {
        objective: usize,
    },
    NotPsd {
        objective: usize,
    },
    EmptyRegion,
    UnboundedRegion {
        coordinate: usize,
    },
    DenominatorNonpositive {
        objective: usize,
        minimum: Option<Rat>,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Dimension(msg) => write!(f, "dimension mismatch: {msg}"),
            Violation::NotSymmetric { objective } => {
                write!(f, "Q[{objective}] not symmetric")
            }
            Violation::NotPsd { objective } => {
                write!(f, "Q[{objective}] not positive semi-definite")
            }
            Violation::EmptyRegion => write!(f, "empty region"),
            Violation::UnboundedRegion { coordinate } => {
                write!(
                    f,
                    "unbounded region (x{} has no finite maximum)",
                    coordinate + 1
                )
            }
            Violation::DenominatorNonpositive { objective, minimum } => {
                write!(f, "denominator nonpositive for fractional[{objective}]")?;
                if let Some(m) = minimum {
                    write!(f, " (minimum {})", crate::rational::Lit(m))?;
                }
                Ok(())
            }
        }
    }
}

/// Checks every instance assumption. An empty list means the instance is
/// solvable: PSD criteria, nonempty bounded region, positive denominators.
pub fn validate_instance(inst: &Instance) -> Vec<Violation> {
    let mut out = Vec::new();
    if let Some(msg) = inst.dimension_problem() {
        out.push(Violation::Dimension(msg));
        return out;
    }
    if let Some((objective, _, _)) = inst.asymmetry() {
        out.push(Violation::NotSymmetric { objective });
    }
    for (objective, f) in inst.quadratics.iter().enumerate() {
        if !f.is_psd() {
            out.push(Violation::NotPsd { objective });
        }
    }

    let system = inst.system();
    let mut bounded = true;
    for k in 0..inst.n {
        let mut p = vec![zero(); inst.n];
        p[k] = int(-1);
        match solve_lfp(&system, &FractionalObjective::linear(p, zero())) {
            Ok(LfpOutcome::Infeasible) => {
                out.push(Violation::EmptyRegion);
                return out;
            }
            Ok(LfpOutcome::Unbounded) => {
                bounded = false;
                out.push(Violation::UnboundedRegion { coordinate: k });
            }
            Ok(LfpOutcome::Optimal(_)) => {}
            Err(_) => {
                bounded = false;
                out.push(Violation::UnboundedRegion { coordinate: k });
            }
        }
    }
    for (objective, g) in inst.fractionals.iter().enumerate() {
        let minimum = if bounded {
            match solve_lfp(
                &system,
                &FractionalObjective::linear(g.q.clone(), g.beta.clone()),
            ) {
                Ok(LfpOutcome::Optimal(opt)) => Some(opt.value),
                _ => None,
            }
        } else {
            None
        };
        match minimum {
            Some(m) if m > zero() => {}
            minimum => out.push(Violation::DenominatorNonpositive { objective, minimum }),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    const ONE_POINT: &str = r#"{
        "n": 1, "r": 2,
        "Q": [[[0]], [[0]]],
        "c": [[5], [-2]],
        "fractional": [
            {"p": [1], "q": [0], "alpha": 0, "beta": 1},
            {"p": [-1], "q": [1], "alpha": "1/2", "beta": 2}
        ],
        "A": [[1]],
        "b": [0]
    }"#;

    fn with_fractional(doc: &str, from: &str, to: &str) -> String {
        assert!(doc.contains(from));
        doc.replacen(from, to, 1)
    }

    #[test]
    fn parses_single_point_instance() {
        let inst = parse_instance(ONE_POINT).unwrap();
        assert_eq!(inst.n, 1);
        assert_eq!(inst.r(), 2);
        assert_eq!(inst.fractionals[1].alpha, frac(1, 2));
        assert!(validate_instance(&inst).is_empty());
    }

    #[test]
    fn reports_syntax_position() {
        let err = parse_instance("{\n  \"n\": 1,\n  \"r\": ]\n}").unwrap_err();
        match err {
            Error::Syntax { line, column, .. } => {
                assert_eq!(line, 3);
                assert!(column > 0);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_wrong_q_shape() {
        let text = r#"{
            "n": 3, "r": 2,
            "Q": [[[1,0],[0,1]], [[1,0,0],[0,1,0],[0,0,1]]],
            "c": [[0,0,0],[0,0,0]],
            "fractional": [
                {"p": [1,0,0], "q": [0,0,0], "alpha": 0, "beta": 1},
                {"p": [0,1,0], "q": [0,0,0], "alpha": 0, "beta": 1}
            ],
            "A": [[1,1,1]], "b": [3]
        }"#;
        assert!(matches!(parse_instance(text), Err(Error::Dimension(_))));
    }

    #[test]
    fn rejects_asymmetric_q() {
        let text = r#"{
            "n": 2, "r": 2,
            "Q": [[[1,2],[0,1]], [[1,0],[0,1]]],
            "c": [[0,0],[0,0]],
            "fractional": [
                {"p": [1,0], "q": [0,0], "alpha": 0, "beta": 1},
                {"p": [0,1], "q": [0,0], "alpha": 0, "beta": 1}
            ],
            "A": [[1,1]], "b": [3]
        }"#;
        assert!(matches!(
            parse_instance(text),
            Err(Error::NonSymmetric {
                objective: 0,
                row: 0,
                col: 1
            })
        ));
    }

    #[test]
    fn rejects_one_fractional_and_unknown_fields() {
        let three = with_fractional(
            ONE_POINT,
            r#"{"p": [1], "q": [0], "alpha": 0, "beta": 1},"#,
            "",
        );
        assert!(matches!(parse_instance(&three), Err(Error::Dimension(_))));
        let extra = ONE_POINT.replacen("\"n\": 1,", "\"n\": 1, \"m\": 1,", 1);
        assert!(matches!(parse_instance(&extra), Err(Error::Syntax { .. })));
    }

    #[test]
    fn negative_denominator_is_reported() {
        let text = with_fractional(
            ONE_POINT,
            r#""q": [0], "alpha": 0, "beta": 1"#,
            r#""q": [0], "alpha": 0, "beta": -10"#,
        );
        let inst = parse_instance(&text).unwrap();
        let v = validate_instance(&inst);
        assert_eq!(v.len(), 1);
        assert!(v[0].to_string().starts_with("denominator nonpositive"));
    }

    #[test]
    fn unbounded_region_is_reported() {
        let text = r#"{
            "n": 2, "r": 2,
            "Q": [[[1,0],[0,1]], [[1,0],[0,1]]],
            "c": [[0,0],[0,0]],
            "fractional": [
                {"p": [1,0], "q": [0,0], "alpha": 0, "beta": 1},
                {"p": [0,1], "q": [0,0], "alpha": 0, "beta": 1}
            ],
            "A": [[1,-1]], "b": [0]
        }"#;
        let v = validate_instance(&parse_instance(text).unwrap());
        assert!(v
            .iter()
            .any(|v| v.to_string().starts_with("unbounded region")));
    }

    #[test]
    fn empty_region_is_reported() {
        let text = ONE_POINT.replacen("\"b\": [0]", "\"b\": [-1]", 1);
        let v = validate_instance(&parse_instance(&text).unwrap());
        assert_eq!(v, vec![Violation::EmptyRegion]);
    }

    #[test]
    fn psd_check() {
        let psd = |q: Vec<Vec<i64>>| {
            QuadraticObjective {
                c: vec![0; q.len()],
                q,
            }
            .is_psd()
        };
        assert!(psd(vec![vec![2, 1], vec![1, 2]]));
        assert!(psd(vec![vec![1, 1], vec![1, 1]]));
        assert!(psd(vec![vec![0, 0], vec![0, 3]]));
        assert!(!psd(vec![vec![1, 2], vec![2, 1]]));
        assert!(!psd(vec![vec![0, 1], vec![1, 0]]));
        assert!(!psd(vec![vec![-1]]));
    }

    #[test]
    fn zero_denominator_is_an_error() {
        let g = FractionalObjective {
            p: vec![int(1)],
            q: vec![int(1)],
            alpha: zero(),
            beta: int(-2),
        };
        assert!(matches!(g.eval(&[int(2)]), Err(Error::ZeroDenominator)));
    }
}
