//! Branch-and-cut over the efficient set.
//!
//! Each node minimizes `ψ¹` over the root region plus the node's extra rows.
//! Infeasible nodes are fathomed, fractional optima are split on one
//! coordinate, and integer optima are tested (T¹, then T² if T¹ passes),
//! recorded on a double pass, and either fathomed (`H` or `H′` empty) or
//! continued in one successor carrying both efficient cuts. Exploration is
//! depth first with the `<=` child first.

use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::cuts::CutReport;
use crate::efficiency::EfficiencyTester;
use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::oracle::{Point, DEFAULT_ENUMERATION_CAP};
use crate::rational::{floor_i64, frac, to_i64, Lit, Rat, RatLit};
use crate::simplex::{
    add_rows_and_reoptimize, solve_lfp, ConstraintRow, ConstraintSystem, LfpOptimum, LfpOutcome,
    Tableau,
};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, clap::ValueEnum)]
pub enum BranchingRule {
    /// Smallest index with a fractional value.
    #[default]
    FirstFractional,
    /// Value closest to one half away from an integer; ties to the smallest index.
    MostFractional,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolverConfig {
    pub branching: BranchingRule,
    pub node_budget: usize,
    pub enumeration_cap: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            branching: BranchingRule::FirstFractional,
            node_budget: 10_000,
            enumeration_cap: DEFAULT_ENUMERATION_CAP,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeStatus {
    Open,
    FathomedInfeasible,
    FathomedExplored,
    Branched,
    CutApplied,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Node {
    pub id: usize,
    pub parent: Option<usize>,
    /// Branch bounds and cuts added along the path from the root, in order.
    pub extra_rows: Vec<ConstraintRow>,
    pub status: NodeStatus,
}

impl Node {
    pub fn root() -> Self {
        Node {
            id: 0,
            parent: None,
            extra_rows: Vec::new(),
            status: NodeStatus::Open,
        }
    }

    fn child(&self, id: usize, rows: &[ConstraintRow]) -> Node {
        let mut extra_rows = self.extra_rows.clone();
        extra_rows.extend_from_slice(rows);
        Node {
            id,
            parent: Some(self.id),
            extra_rows,
            status: NodeStatus::Open,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Action {
    LfpSolved,
    Infeasible,
    Branched,
    IntegerFound,
    T1,
    T2,
    Recorded,
    CutsAdded,
    Fathomed,
}

/// One trace record. `H` and `H_prime` list 1-based registry variable
/// numbers, matching the `x<j>` labels of tableau dumps.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceEvent {
    pub node: usize,
    pub parent: Option<usize>,
    pub action: Action,
    pub point: Option<Vec<RatLit>>,
    pub value: Option<RatLit>,
    #[serde(rename = "H")]
    pub h: Option<Vec<usize>>,
    #[serde(rename = "H_prime")]
    pub h_prime: Option<Vec<usize>>,
}

impl TraceEvent {
    fn new(node: &Node, action: Action) -> Self {
        TraceEvent {
            node: node.id,
            parent: node.parent,
            action,
            point: None,
            value: None,
            h: None,
            h_prime: None,
        }
    }

    fn point(mut self, x: &[Rat]) -> Self {
        self.point = Some(x.iter().cloned().map(RatLit).collect());
        self
    }

    fn value(mut self, v: &Rat) -> Self {
        self.value = Some(RatLit(v.clone()));
        self
    }

    fn sets(mut self, report: &CutReport) -> Self {
        self.h = Some(report.h.iter().map(|j| j + 1).collect());
        self.h_prime = Some(report.h_prime.iter().map(|j| j + 1).collect());
        self
    }

    /// One JSON object per line, fields in declaration order.
    pub fn to_line(&self) -> String {
        serde_json::to_string(self).expect("trace events serialize")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveResult {
    /// Recorded points, lexicographically sorted.
    pub x_eff: Vec<Point>,
    /// False when the node budget ran out with open nodes left.
    pub complete: bool,
    /// Nodes whose relaxation was solved.
    pub node_count: usize,
    pub cut_count: usize,
    pub t1_tests: usize,
    pub t2_tests: usize,
    pub trace: Vec<TraceEvent>,
    /// Every created node indexed by id.
    pub nodes: Vec<Node>,
}

impl SolveResult {
    pub fn trace_lines(&self) -> String {
        self.trace.iter().map(|e| e.to_line() + "\n").collect()
    }
}

/// Observation points exposed to callers that want to check properties at
/// each node.
#[derive(Debug)]
pub enum SearchEvent<'a> {
    Optimum {
        node: &'a Node,
        optimum: &'a LfpOptimum,
    },
    Integer {
        node: &'a Node,
        system: &'a ConstraintSystem,
        optimum: &'a LfpOptimum,
        point: &'a [i64],
        report: &'a CutReport,
    },
}

/// Picks the branching coordinate of a fractional point.
pub fn select_branch_variable(x: &[Rat], rule: BranchingRule) -> Result<usize> {
    let fractional = x.iter().enumerate().filter(|(_, v)| !v.is_integer());
    let chosen = match rule {
        BranchingRule::FirstFractional => fractional.map(|(k, _)| k).next(),
        BranchingRule::MostFractional => {
            let half = frac(1, 2);
            let mut best: Option<(usize, Rat)> = None;
            for (k, v) in fractional {
                let dist = (v - v.floor() - &half).abs();
                if best.as_ref().is_none_or(|(_, d)| dist < *d) {
                    best = Some((k, dist));
                }
            }
            best.map(|(k, _)| k)
        }
    };
    chosen.ok_or_else(|| {
        let shown: Vec<String> = x.iter().map(|v| Lit(v).to_string()).collect();
        Error::IntegralValue(format!("({})", shown.join(", ")))
    })
}

/// Splits `node` into `x_k <= ⌊v⌋` and `x_k >= ⌊v⌋ + 1`, taking ids from
/// `next_id`.
pub fn branch(node: &Node, k: usize, v: &Rat, next_id: &mut usize) -> Result<(Node, Node)> {
    if v.is_integer() {
        return Err(Error::IntegralValue(Lit(v).to_string()));
    }
    let fl = floor_i64(v).expect("branch value fits in i64");
    let down = node.child(*next_id, &[ConstraintRow::upper_bound(k, fl)]);
    let up = node.child(*next_id + 1, &[ConstraintRow::lower_bound(k, fl + 1)]);
    *next_id += 2;
    Ok((down, up))
}

pub fn solve(inst: &Instance, config: &SolverConfig) -> Result<SolveResult> {
    solve_observed(inst, config, &mut |_| {})
}

struct Pending {
    id: usize,
    /// Parent's optimal tableau plus the rows this node adds to it.
    warm: Option<(Tableau, Vec<ConstraintRow>)>,
}

pub fn solve_observed(
    inst: &Instance,
    config: &SolverConfig,
    observer: &mut dyn FnMut(SearchEvent<'_>),
) -> Result<SolveResult> {
    let tester = EfficiencyTester::new(inst, config.enumeration_cap)?;
    let root_system = inst.system();
    let psi1 = &inst.fractionals[0];

    let mut result = SolveResult {
        x_eff: Vec::new(),
        complete: true,
        node_count: 0,
        cut_count: 0,
        t1_tests: 0,
        t2_tests: 0,
        trace: Vec::new(),
        nodes: vec![Node::root()],
    };
    let mut next_id = 1;
    let mut stack = vec![Pending { id: 0, warm: None }];

    while let Some(pending) = stack.pop() {
        if result.node_count >= config.node_budget {
            stack.push(pending);
            result.complete = false;
            break;
        }
        result.node_count += 1;
        let id = pending.id;
        let outcome = match pending.warm {
            None => solve_lfp(&root_system.with_rows(&result.nodes[id].extra_rows)?, psi1)?,
            Some((tableau, rows)) => add_rows_and_reoptimize(tableau, &rows)?,
        };
        let optimum = match outcome {
            LfpOutcome::Optimal(opt) => opt,
            LfpOutcome::Infeasible => {
                let node = &mut result.nodes[id];
                node.status = NodeStatus::FathomedInfeasible;
                result.trace.push(TraceEvent::new(node, Action::Infeasible));
                continue;
            }
            LfpOutcome::Unbounded => return Err(Error::UnboundedRegion(0)),
        };
        let node = result.nodes[id].clone();
        result.trace.push(
            TraceEvent::new(&node, Action::LfpSolved)
                .point(&optimum.x)
                .value(&optimum.value),
        );
        observer(SearchEvent::Optimum {
            node: &node,
            optimum: &optimum,
        });

        let integral: Option<Point> = optimum.x.iter().map(to_i64).collect();
        let Some(point) = integral else {
            let k = select_branch_variable(&optimum.x, config.branching)?;
            let (down, up) = branch(&node, k, &optimum.x[k], &mut next_id)?;
            result.nodes[id].status = NodeStatus::Branched;
            result
                .trace
                .push(TraceEvent::new(&node, Action::Branched).point(&optimum.x));
            let rows_of = |child: &Node| child.extra_rows[node.extra_rows.len()..].to_vec();
            let (up_rows, down_rows) = (rows_of(&up), rows_of(&down));
            let (up_id, down_id) = (up.id, down.id);
            result.nodes.push(down);
            result.nodes.push(up);
            stack.push(Pending {
                id: up_id,
                warm: Some((optimum.tableau.clone(), up_rows)),
            });
            stack.push(Pending {
                id: down_id,
                warm: Some((optimum.tableau, down_rows)),
            });
            continue;
        };

        result
            .trace
            .push(TraceEvent::new(&node, Action::IntegerFound).point(&optimum.x));
        result.t1_tests += 1;
        let t1 = tester.moiqp(&point)?;
        let mut event = TraceEvent::new(&node, Action::T1).value(&t1.objective_value);
        if let Some(w) = &t1.witness {
            event = event.point(&crate::rational::from_ints(w));
        }
        result.trace.push(event);
        if t1.efficient {
            result.t2_tests += 1;
            let t2 = tester.boilfp(&point)?;
            let mut event = TraceEvent::new(&node, Action::T2).value(&t2.objective_value);
            if let Some(w) = &t2.witness {
                event = event.point(&crate::rational::from_ints(w));
            }
            result.trace.push(event);
            if t2.efficient {
                if let Err(pos) = result.x_eff.binary_search(&point) {
                    result.x_eff.insert(pos, point.clone());
                }
                result
                    .trace
                    .push(TraceEvent::new(&node, Action::Recorded).point(&optimum.x));
            }
        }

        let report = CutReport::build(&optimum.tableau, inst, &optimum.x)?;
        let system = root_system.with_rows(&node.extra_rows)?;
        observer(SearchEvent::Integer {
            node: &node,
            system: &system,
            optimum: &optimum,
            point: &point,
            report: &report,
        });
        if report.fathoms() {
            result.nodes[id].status = NodeStatus::FathomedExplored;
            result
                .trace
                .push(TraceEvent::new(&node, Action::Fathomed).sets(&report));
            continue;
        }
        let rows = report.successor_rows();
        result.cut_count += rows.len();
        let child = node.child(next_id, &rows);
        next_id += 1;
        result.nodes[id].status = NodeStatus::CutApplied;
        result
            .trace
            .push(TraceEvent::new(&node, Action::CutsAdded).sets(&report));
        stack.push(Pending {
            id: child.id,
            warm: Some((optimum.tableau, rows)),
        });
        result.nodes.push(child);
    }
    Ok(result)
}
