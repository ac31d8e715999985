mod common;

use common::*;
use ifsynth::automata::{complement_nba_bounded, is_empty, lasso_member, ltl_to_nba, product, translate::ltl_to_nba_over};
use ifsynth::{eval_ltl, LassoWord, Ltl};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn translation_matches_semantics_on_random_formulas() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let atoms = vars(&["a", "b"]);
    for _ in 0..300 {
        let size = rand::Rng::gen_range(&mut rng, 1..=8);
        let phi = random_formula(&mut rng, &atoms, size);
        let a = ltl_to_nba_over(&phi, &atoms);
        for _ in 0..20 {
            let w = random_lasso(&mut rng, &atoms, 3, 3);
            assert_eq!(lasso_member(&a, &w).unwrap(), eval_ltl(&w, &phi).unwrap(), "{phi} on {w}");
        }
        if let Some(w) = is_empty(&a).witness() {
            assert!(eval_ltl(w, &phi).unwrap(), "witness {w} of {phi}");
        }
    }
}

#[test]
fn negation_flips_semantics() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let atoms = vars(&["a", "b"]);
    for _ in 0..200 {
        let phi = random_formula(&mut rng, &atoms, 6);
        let w = random_lasso(&mut rng, &atoms, 3, 3);
        assert_ne!(eval_ltl(&w, &phi).unwrap(), eval_ltl(&w, &Ltl::not(phi.clone())).unwrap());
    }
}

#[test]
fn complement_is_disjoint_and_exact_when_unflagged() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let atoms = vars(&["a"]);
    for _ in 0..40 {
        let a = random_nba(&mut rng, &atoms, 3);
        let c = complement_nba_bounded(&a, 6).unwrap();
        assert!(is_empty(&product(&a, &c.nba).unwrap()).is_empty());
        if !c.incomplete {
            for w in LassoWord::enumerate(&atoms, 2, 3) {
                assert_ne!(lasso_member(&a, &w).unwrap(), lasso_member(&c.nba, &w).unwrap(), "{w}");
            }
        }
    }
    let f = ltl_to_nba(&Ltl::parse("F out").unwrap());
    assert_eq!(f.num_states(), 2);
}
