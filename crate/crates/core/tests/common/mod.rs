#![allow(dead_code)]

use ifsynth::automata::Nba;
use ifsynth::{LassoWord, Ltl};
use rand::Rng;

pub fn vars(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

/// Random formula with exactly `size` nodes over `atoms`.
pub fn random_formula(rng: &mut impl Rng, atoms: &[String], size: usize) -> Ltl {
    if size <= 1 {
        return match rng.gen_range(0..10) {
            0 => Ltl::True,
            1 => Ltl::False,
            _ => Ltl::atom(&atoms[rng.gen_range(0..atoms.len())]),
        };
    }
    if size == 2 || rng.gen_bool(0.4) {
        let a = random_formula(rng, atoms, size - 1);
        return match rng.gen_range(0..4) {
            0 => Ltl::not(a),
            1 => Ltl::next(a),
            2 => Ltl::finally(a),
            _ => Ltl::globally(a),
        };
    }
    let l = rng.gen_range(1..size - 1);
    let a = random_formula(rng, atoms, l);
    let b = random_formula(rng, atoms, size - 1 - l);
    match rng.gen_range(0..6) {
        0 => Ltl::and(a, b),
        1 => Ltl::or(a, b),
        2 => Ltl::implies(a, b),
        3 => Ltl::iff(a, b),
        4 => Ltl::until(a, b),
        _ => Ltl::release(a, b),
    }
}

pub fn random_lasso(rng: &mut impl Rng, vars: &[String], max_stem: usize, max_loop: usize) -> LassoWord {
    let n = 1u64 << vars.len();
    let s = rng.gen_range(0..=max_stem);
    let l = rng.gen_range(1..=max_loop);
    LassoWord::new(
        vars.to_vec(),
        (0..s).map(|_| rng.gen_range(0..n)).collect(),
        (0..l).map(|_| rng.gen_range(0..n)).collect(),
    )
    .unwrap()
}

/// Random NBA over `vars` with `n` states.
pub fn random_nba(rng: &mut impl Rng, vars: &[String], n: usize) -> Nba {
    use ifsynth::automata::Cube;
    let k = vars.len();
    let trans = (0..n)
        .map(|_| {
            (0..rng.gen_range(0..=3))
                .map(|_| {
                    let mut pos = 0;
                    let mut neg = 0;
                    for b in 0..k {
                        match rng.gen_range(0..3) {
                            0 => pos |= 1 << b,
                            1 => neg |= 1 << b,
                            _ => {}
                        }
                    }
                    (Cube { pos, neg }, rng.gen_range(0..n))
                })
                .collect()
        })
        .collect();
    Nba { vars: vars.to_vec(), init: 0, trans, acc: (0..n).map(|_| rng.gen_bool(0.4)).collect() }
}
