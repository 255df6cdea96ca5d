//! Regressions against the reference tableaux of the small three-variable
//! example shipped in `fixtures/`.

mod common;

use std::collections::BTreeMap;

use common::{ints, worked_example};
use effcut::cuts::{build_h, build_h_prime, reduced_criterion_rows, CutReport};
use effcut::efficiency::EfficiencyTester;
use effcut::oracle::{enumerate_feasible, oracle_solve, DEFAULT_ENUMERATION_CAP};
use effcut::rational::{frac, int, Rat};
use effcut::search::{solve_observed, Action, SearchEvent};
use effcut::simplex::{
    add_row_and_reoptimize, add_rows_and_reoptimize, reduced_gradient_row, solve_lfp,
    ConstraintRow, LfpOptimum, Tableau,
};
use effcut::{eval_fractional, eval_quadratic, gradient_quadratic, solve, SolverConfig};

fn labelled(row: &[(usize, Rat)]) -> Vec<(usize, Rat)> {
    row.iter().map(|(j, v)| (j + 1, v.clone())).collect()
}

fn expect(pairs: &[(usize, Rat)]) -> Vec<(usize, Rat)> {
    pairs.to_vec()
}

/// Optimal tableau of every node up to `last`, keyed by node id.
fn node_optima(last: usize) -> BTreeMap<usize, LfpOptimum> {
    let inst = worked_example();
    let mut seen = BTreeMap::new();
    solve_observed(&inst, &SolverConfig::default(), &mut |event| {
        if let SearchEvent::Optimum { node, optimum } = event {
            if node.id <= last {
                seen.insert(node.id, optimum.clone());
            }
        }
    })
    .unwrap();
    seen
}

fn root() -> LfpOptimum {
    let inst = worked_example();
    solve_lfp(&inst.system(), &inst.fractionals[0])
        .unwrap()
        .optimum()
        .unwrap()
}

#[test]
fn criterion_values_at_sample_points() {
    let inst = worked_example();
    assert_eq!(
        eval_quadratic(&inst.quadratics[0], &ints(&[0, 3, 0])).unwrap(),
        int(-33)
    );
    assert_eq!(
        eval_quadratic(&inst.quadratics[2], &ints(&[0, 1, 1])).unwrap(),
        int(-53)
    );
    assert_eq!(
        eval_fractional(&inst.fractionals[0], &ints(&[0, 3, 0])).unwrap(),
        frac(-19, 3)
    );
    assert_eq!(
        eval_fractional(&inst.fractionals[1], &ints(&[0, 3, 0])).unwrap(),
        frac(1, 5)
    );
    assert_eq!(
        gradient_quadratic(&inst.quadratics[0], &ints(&[0, 3, 0])).unwrap(),
        ints(&[35, 52, 23])
    );
    assert_eq!(
        gradient_quadratic(&inst.quadratics[2], &ints(&[0, 1, 1])).unwrap(),
        ints(&[96, 1, -17])
    );
}

#[test]
fn root_tableau_regression() {
    let inst = worked_example();
    let opt = root();
    assert_eq!(opt.x, ints(&[0, 3, 0]));
    assert_eq!(opt.value, frac(-19, 3));
    let t = &opt.tableau;
    assert_eq!(t.nonbasis(), vec![0, 2, 4]);
    assert_eq!(
        labelled(&reduced_gradient_row(t, &inst.fractionals[0])),
        expect(&[(1, int(16)), (3, int(34)), (5, int(6))])
    );
    assert_eq!(
        labelled(&reduced_gradient_row(t, &inst.fractionals[1])),
        expect(&[(1, int(-9)), (3, int(-22)), (5, int(-2))])
    );
    let f_bar = reduced_criterion_rows(t, &inst, &opt.x).unwrap();
    assert_eq!(f_bar.columns, vec![0, 2, 4]);
    assert_eq!(f_bar.rows[0], ints(&[61, -55, -26]));
    assert_eq!(
        f_bar.rows[1],
        vec![frac(297, 2), frac(-425, 2), frac(-153, 2)]
    );
    assert_eq!(f_bar.rows[2], ints(&[86, -22, 1]));
    assert_eq!(build_h(&f_bar), vec![2, 4]);
    assert_eq!(build_h_prime(t, &inst.fractionals[1]), vec![0, 2, 4]);
}

#[test]
fn root_cuts_lead_to_the_half_integral_node() {
    let opt = root();
    let inst = worked_example();
    let report = CutReport::build(&opt.tableau, &inst, &opt.x).unwrap();
    let rows = report.successor_rows();
    let shown: Vec<String> = rows.iter().map(ToString::to_string).collect();
    assert_eq!(shown, vec!["x3 + x5 >= 1", "x1 + x3 + x5 >= 1"]);
    let n1 = add_rows_and_reoptimize(opt.tableau, &rows)
        .unwrap()
        .optimum()
        .unwrap();
    assert_eq!(n1.x, vec![int(0), frac(5, 2), int(0)]);
    // the reference tableau shows -17/2 here; ψ¹(0, 5/2, 0) is -17/3
    assert_eq!(n1.value, frac(-17, 3));
    assert_eq!(n1.tableau.nonbasis(), vec![0, 2, 6]);
}

#[test]
fn branching_the_half_integral_node() {
    let n1 = node_optima(1).remove(&1).unwrap();
    let down = add_row_and_reoptimize(n1.tableau.clone(), &ConstraintRow::upper_bound(1, 2))
        .unwrap()
        .optimum()
        .unwrap();
    assert_eq!(down.x, ints(&[0, 2, 0]));
    assert_eq!(down.value, int(-5));
    let up = add_row_and_reoptimize(n1.tableau, &ConstraintRow::lower_bound(1, 3)).unwrap();
    assert!(up.optimum().is_none(), "x2 >= 3 leaves the node empty");
}

#[test]
fn integer_node_two_tableau() {
    let inst = worked_example();
    let opt = node_optima(2).remove(&2).unwrap();
    let t: &Tableau = &opt.tableau;
    assert_eq!(t.nonbasis(), vec![0, 2, 7]);
    assert_eq!(
        labelled(&reduced_gradient_row(t, &inst.fractionals[0])),
        expect(&[(1, int(18)), (3, int(12)), (8, int(12))])
    );
    assert_eq!(
        labelled(&reduced_gradient_row(t, &inst.fractionals[1])),
        expect(&[(1, int(-8)), (3, int(-12)), (8, int(-4))])
    );
    let report = CutReport::build(t, &inst, &opt.x).unwrap();
    assert_eq!(report.f_bar.rows[0], ints(&[-8, 3, -10]));
    assert_eq!(report.f_bar.rows[1], ints(&[50, -1, -132]));
    assert_eq!(report.f_bar.rows[2], ints(&[70, -40, 8]));
    assert_eq!(report.h, vec![0, 2, 7]);
    assert_eq!(report.h_prime, vec![0, 2, 7]);
    assert_eq!(
        report.successor_rows().len(),
        1,
        "identical cuts are added once"
    );
}

#[test]
fn integer_node_five_tableau() {
    let inst = worked_example();
    let opt = node_optima(5).remove(&5).unwrap();
    assert_eq!(opt.x, ints(&[0, 1, 0]));
    assert_eq!(opt.value, frac(-11, 3));
    let t = &opt.tableau;
    assert_eq!(t.nonbasis(), vec![0, 8, 9]);
    assert_eq!(
        labelled(&reduced_gradient_row(t, &inst.fractionals[0])),
        expect(&[(1, int(6)), (9, int(8)), (10, int(4))])
    );
    assert_eq!(
        labelled(&reduced_gradient_row(t, &inst.fractionals[1])),
        expect(&[(1, int(3)), (9, int(-8)), (10, int(4))])
    );
    let report = CutReport::build(t, &inst, &opt.x).unwrap();
    assert_eq!(report.f_bar.column(8).unwrap(), ints(&[-17, -19, -55]));
    assert_eq!(report.f_bar.rows[0], ints(&[-34, -17, 49]));
    assert_eq!(report.f_bar.rows[1], ints(&[47, -19, -92]));
    assert_eq!(report.f_bar.rows[2], ints(&[108, -55, 69]));
    assert_eq!(report.h, vec![0, 8, 9]);
    assert_eq!(report.h_prime, vec![8]);
}

#[test]
fn fractional_nodes_four_and_six() {
    let optima = node_optima(6);
    assert_eq!(optima[&4].x, vec![int(0), frac(7, 4), frac(3, 4)]);
    assert_eq!(optima[&4].value, frac(-59, 15));
    assert_eq!(optima[&6].x, vec![frac(1, 3), int(2), frac(2, 3)]);
}

/// The reference tableau for node 7 is an alternative optimal basis of the same vertex.
/// Moving there by one degenerate exchange reproduces its reduced rows; the
/// sets then follow from the definitions applied to those rows.
#[test]
fn alternative_basis_at_node_seven() {
    let inst = worked_example();
    let opt = node_optima(7).remove(&7).unwrap();
    assert_eq!(opt.x, ints(&[0, 1, 1]));
    assert_eq!(opt.value, int(-3));
    let mut t = opt.tableau;
    t.exchange(0, 10).unwrap();
    assert_eq!(t.nonbasis(), vec![9, 10, 11]);
    assert!(t.is_optimal());
    assert_eq!(t.point(), ints(&[0, 1, 1]));
    assert_eq!(
        labelled(&reduced_gradient_row(&t, &inst.fractionals[0])),
        expect(&[(10, int(0)), (11, int(8)), (12, int(0))])
    );
    assert_eq!(
        labelled(&reduced_gradient_row(&t, &inst.fractionals[1])),
        expect(&[(10, int(-4)), (11, int(4)), (12, int(-12))])
    );
    let report = CutReport::build(&t, &inst, &opt.x).unwrap();
    assert_eq!(report.f_bar.rows[0], ints(&[43, -25, 19]));
    assert_eq!(report.f_bar.rows[1], ints(&[-182, 30, -7]));
    // the reference tableau shows -113 for the middle entry
    assert_eq!(report.f_bar.rows[2], ints(&[-97, 113, -130]));
    assert_eq!(report.h, vec![9, 10, 11]);
    assert_eq!(report.h_prime, vec![9, 11]);
}

#[test]
fn trace_records_the_cut_sets() {
    let result = solve(&worked_example(), &SolverConfig::default()).unwrap();
    let sets: Vec<(usize, Vec<usize>, Vec<usize>)> = result
        .trace
        .iter()
        .filter(|e| e.action == Action::CutsAdded && e.node <= 5)
        .map(|e| (e.node, e.h.clone().unwrap(), e.h_prime.clone().unwrap()))
        .collect();
    assert_eq!(
        sets,
        vec![
            (0, vec![3, 5], vec![1, 3, 5]),
            (2, vec![1, 3, 8], vec![1, 3, 8]),
            (5, vec![1, 9, 10], vec![9]),
        ]
    );
    assert!(result
        .trace
        .iter()
        .any(|e| e.node == 3 && e.action == Action::Infeasible));
}

#[test]
fn efficiency_tests_on_sample_points() {
    let inst = worked_example();
    let tester = EfficiencyTester::new(&inst, DEFAULT_ENUMERATION_CAP).unwrap();
    assert!(!tester.moiqp(&[0, 3, 0]).unwrap().efficient);
    assert!(!tester.moiqp(&[0, 2, 0]).unwrap().efficient);
    for x in [[0, 1, 0], [0, 1, 1], [0, 0, 1], [0, 0, 2]] {
        assert!(tester.moiqp(&x).unwrap().efficient, "{x:?}");
        assert!(tester.boilfp(&x).unwrap().efficient, "{x:?}");
    }
    assert!(tester.boilfp(&[0, 3, 0]).unwrap().efficient);
    assert!(tester.moiqp(&[0, 0, 3]).is_err());
}

#[test]
fn oracle_sets() {
    let inst = worked_example();
    let d = enumerate_feasible(&inst, DEFAULT_ENUMERATION_CAP).unwrap();
    assert_eq!(d.len(), 17);
    assert!(d.contains(&vec![0, 3, 0]));
    assert!(!d.contains(&vec![0, 0, 3]));
    let sets = oracle_solve(&inst, DEFAULT_ENUMERATION_CAP).unwrap();
    let mut x_f = sets.x_f.clone();
    x_f.sort();
    assert_eq!(
        x_f,
        vec![
            vec![0, 0, 1],
            vec![0, 0, 2],
            vec![0, 1, 0],
            vec![0, 1, 1],
            vec![0, 2, 0],
            vec![0, 3, 0],
            vec![1, 1, 1],
            vec![1, 2, 0],
        ]
    );
    // (1,0,2) is not dominated by any feasible point, so it joins the seven
    // reference members of the quadratic efficient set
    assert!(sets.x_q.contains(&vec![1, 0, 2]));
    assert_eq!(sets.x_q.len(), 8);
}

#[test]
fn solver_returns_the_four_points() {
    let result = solve(&worked_example(), &SolverConfig::default()).unwrap();
    assert!(result.complete);
    assert_eq!(
        result.x_eff,
        vec![vec![0, 0, 1], vec![0, 0, 2], vec![0, 1, 0], vec![0, 1, 1]]
    );
}

#[test]
fn trace_is_deterministic() {
    let inst = worked_example();
    let a = solve(&inst, &SolverConfig::default())
        .unwrap()
        .trace_lines();
    let b = solve(&inst, &SolverConfig::default())
        .unwrap()
        .trace_lines();
    assert_eq!(a, b);
    assert!(a.starts_with("{\"node\":0,\"parent\":null,\"action\":\"lfp_solved\""));
}
