//! Command-line front end: `validate`, `solve`, `oracle`, and `check` modes.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::document;
use crate::error::{Error, Result};
use crate::instance::{parse_instance, validate_instance, Instance};
use crate::oracle::{oracle_solve, ParetoSets, Point, DEFAULT_ENUMERATION_CAP};
use crate::search::{solve, BranchingRule, SolveResult, SolverConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_BUDGET: i32 = 2;
pub const EXIT_MISMATCH: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Validate,
    Solve,
    Oracle,
    /// Solve, run the oracle, and compare the efficient sets.
    Check,
}

#[derive(Clone, Debug, Parser)]
#[command(
    name = "effcut",
    version,
    about = "Branch-and-cut over the efficient set of a multi-objective integer quadratic program"
)]
pub struct RunConfig {
    /// Instance document.
    #[arg(long = "instance")]
    pub instance_path: PathBuf,

    #[arg(long, value_enum, default_value = "solve")]
    pub mode: Mode,

    #[arg(long = "branching", value_enum, default_value = "first-fractional")]
    pub branching_rule: BranchingRule,

    #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub node_budget: u64,

    #[arg(long = "enum-cap", default_value_t = DEFAULT_ENUMERATION_CAP, value_parser = clap::value_parser!(u64).range(1..))]
    pub enumeration_cap: u64,

    /// Write the search trace here, one JSON record per line.
    #[arg(long = "trace")]
    pub trace_path: Option<PathBuf>,

    /// Write the result document here instead of standard output.
    #[arg(long = "output")]
    pub output_path: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(instance_path: impl Into<PathBuf>, mode: Mode) -> Self {
        RunConfig {
            instance_path: instance_path.into(),
            mode,
            branching_rule: BranchingRule::FirstFractional,
            node_budget: 10_000,
            enumeration_cap: DEFAULT_ENUMERATION_CAP,
            trace_path: None,
            output_path: None,
        }
    }

    fn solver_config(&self) -> SolverConfig {
        SolverConfig {
            branching: self.branching_rule,
            node_budget: usize::try_from(self.node_budget).unwrap_or(usize::MAX),
            enumeration_cap: self.enumeration_cap,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ValidateDoc {
    pub valid: bool,
    pub violations: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolveDoc {
    /// `complete` or `incomplete`.
    pub status: String,
    pub x_eff: Vec<Point>,
    pub nodes: usize,
    pub cuts: usize,
    pub t1_tests: usize,
    pub t2_tests: usize,
}

impl From<&SolveResult> for SolveDoc {
    fn from(r: &SolveResult) -> Self {
        SolveDoc {
            status: if r.complete { "complete" } else { "incomplete" }.into(),
            x_eff: r.x_eff.clone(),
            nodes: r.node_count,
            cuts: r.cut_count,
            t1_tests: r.t1_tests,
            t2_tests: r.t2_tests,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleDoc {
    #[serde(rename = "D")]
    pub d: Vec<Point>,
    #[serde(rename = "X_Q")]
    pub x_q: Vec<Point>,
    #[serde(rename = "X_F")]
    pub x_f: Vec<Point>,
    #[serde(rename = "X_Eff")]
    pub x_eff: Vec<Point>,
}

impl From<&ParetoSets> for OracleDoc {
    fn from(s: &ParetoSets) -> Self {
        OracleDoc {
            d: s.d.clone(),
            x_q: s.x_q.clone(),
            x_f: s.x_f.clone(),
            x_eff: s.x_eff.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckDoc {
    pub verdict: String,
    pub solver: SolveDoc,
    pub oracle_x_eff: Vec<Point>,
    /// Oracle points the solver did not return.
    pub missing: Vec<Point>,
    /// Solver points absent from the oracle set.
    pub extra: Vec<Point>,
}

pub const AGREE: &str = "solver and oracle agree";
pub const DIFFER: &str = "solver and oracle differ";

/// Runs one mode and returns the process exit status. Diagnostics go to
/// standard error; the result document goes to `output_path` or `stdout`.
pub fn run(config: &RunConfig, stdout: &mut dyn Write) -> i32 {
    match run_inner(config, stdout) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("effcut: {err}");
            match err {
                Error::EnumerationCap { .. } => EXIT_BUDGET,
                _ => EXIT_INVALID,
            }
        }
    }
}

fn run_inner(config: &RunConfig, stdout: &mut dyn Write) -> Result<i32> {
    let text = fs::read_to_string(&config.instance_path)?;
    let inst = parse_instance(&text)?;
    let violations = validate_instance(&inst);
    if config.mode == Mode::Validate || !violations.is_empty() {
        for v in &violations {
            eprintln!("effcut: violation: {v}");
        }
        let doc = ValidateDoc {
            valid: violations.is_empty(),
            violations: violations.iter().map(ToString::to_string).collect(),
        };
        emit(config, stdout, &document::to_pretty(&doc))?;
        return Ok(if doc.valid { EXIT_OK } else { EXIT_INVALID });
    }
    match config.mode {
        Mode::Validate => unreachable!(),
        Mode::Solve => {
            let result = run_solver(config, &inst)?;
            emit(
                config,
                stdout,
                &document::to_pretty(&SolveDoc::from(&result)),
            )?;
            Ok(if result.complete {
                EXIT_OK
            } else {
                EXIT_BUDGET
            })
        }
        Mode::Oracle => {
            let sets = oracle_solve(&inst, config.enumeration_cap)?;
            emit(
                config,
                stdout,
                &document::to_pretty(&OracleDoc::from(&sets)),
            )?;
            Ok(EXIT_OK)
        }
        Mode::Check => {
            let result = run_solver(config, &inst)?;
            let sets = oracle_solve(&inst, config.enumeration_cap)?;
            let missing: Vec<Point> = sets
                .x_eff
                .iter()
                .filter(|x| !result.x_eff.contains(x))
                .cloned()
                .collect();
            let extra: Vec<Point> = result
                .x_eff
                .iter()
                .filter(|x| !sets.x_eff.contains(x))
                .cloned()
                .collect();
            let agree = missing.is_empty() && extra.is_empty();
            let doc = CheckDoc {
                verdict: if agree { AGREE } else { DIFFER }.into(),
                solver: SolveDoc::from(&result),
                oracle_x_eff: sets.x_eff,
                missing,
                extra,
            };
            eprintln!("effcut: {}", doc.verdict);
            emit(config, stdout, &document::to_pretty(&doc))?;
            Ok(if !result.complete {
                EXIT_BUDGET
            } else if agree {
                EXIT_OK
            } else {
                EXIT_MISMATCH
            })
        }
    }
}

fn run_solver(config: &RunConfig, inst: &Instance) -> Result<SolveResult> {
    let result = solve(inst, &config.solver_config())?;
    if let Some(path) = &config.trace_path {
        fs::write(path, result.trace_lines())?;
    }
    if !result.complete {
        eprintln!(
            "effcut: node budget of {} exhausted; result is partial",
            config.node_budget
        );
    }
    Ok(result)
}

fn emit(config: &RunConfig, stdout: &mut dyn Write, text: &str) -> Result<()> {
    match &config.output_path {
        Some(path) => fs::write(path, text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}
