#![allow(dead_code)]

use std::path::PathBuf;

use effcut::instance::{parse_instance, validate_instance};
use effcut::oracle::feasible_box;
use effcut::rational::{int, Rat};
use effcut::{FractionalObjective, Instance, Polyhedron, QuadraticObjective, Violation};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn worked_example_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures/worked_example.json")
}

pub fn worked_example() -> Instance {
    let text = std::fs::read_to_string(worked_example_path()).expect("fixture readable");
    parse_instance(&text).expect("fixture parses")
}

pub fn ints(v: &[i64]) -> Vec<Rat> {
    v.iter().map(|&x| int(x)).collect()
}

pub const CORPUS_SEED: u64 = 0x005e_ed0f_effc;
pub const CORPUS_SIZE: usize = 120;
pub const MAX_BOX: i64 = 5;

fn entry(rng: &mut ChaCha8Rng) -> i64 {
    rng.gen_range(-10..=10)
}

/// `MᵀM` with `M` square and entries in [−10, 10].
fn gram(rng: &mut ChaCha8Rng, n: usize) -> Vec<Vec<i64>> {
    let m: Vec<Vec<i64>> = (0..n)
        .map(|_| (0..n).map(|_| entry(rng)).collect())
        .collect();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).map(|k| m[k][i] * m[k][j]).sum())
                .collect()
        })
        .collect()
}

fn fractional(rng: &mut ChaCha8Rng, n: usize) -> FractionalObjective {
    FractionalObjective {
        p: (0..n).map(|_| int(entry(rng))).collect(),
        q: (0..n).map(|_| int(entry(rng))).collect(),
        alpha: int(entry(rng)),
        beta: int(rng.gen_range(1..=10)),
    }
}

fn candidate(rng: &mut ChaCha8Rng) -> Instance {
    let n = rng.gen_range(1..=3);
    let r = rng.gen_range(2..=3);
    let quadratics = (0..r)
        .map(|_| QuadraticObjective {
            q: gram(rng, n),
            c: (0..n).map(|_| entry(rng)).collect(),
        })
        .collect();
    // one upper bound per coordinate keeps the box small; the general rows
    // then carve it
    let mut a: Vec<Vec<i64>> = (0..n)
        .map(|k| (0..n).map(|j| i64::from(j == k)).collect())
        .collect();
    let mut b: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=MAX_BOX)).collect();
    for _ in 0..rng.gen_range(1..=2) {
        a.push((0..n).map(|_| entry(rng)).collect());
        b.push(rng.gen_range(0..=10));
    }
    let polyhedron = Polyhedron { a, b };
    let mut inst = Instance::new(
        n,
        quadratics,
        [fractional(rng, n), fractional(rng, n)],
        polyhedron,
    )
    .expect("generated shapes agree");
    // redraw each preference function a few times until its denominator
    // stays positive; the instance is rejected later if none does
    for s in 0..2 {
        for _ in 0..20 {
            let bad = validate_instance(&inst).iter().any(|v| {
                matches!(v, Violation::DenominatorNonpositive { objective, .. } if *objective == s)
            });
            if !bad {
                break;
            }
            inst.fractionals[s] = fractional(rng, n);
        }
    }
    inst
}

fn acceptable(inst: &Instance) -> bool {
    validate_instance(inst).is_empty()
        && feasible_box(inst).is_ok_and(|upper| upper.iter().all(|&u| u <= MAX_BOX))
}

/// Valid random instances by rejection sampling from a fixed seed.
pub fn random_corpus(seed: u64, size: usize) -> Vec<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(size);
    while out.len() < size {
        let inst = candidate(&mut rng);
        if acceptable(&inst) {
            out.push(inst);
        }
    }
    out
}
