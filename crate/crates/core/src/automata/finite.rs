//! Safety closures, bad-prefix automata and finite-violation automata.
//!
//! A finite word is a bad prefix of an ω-language `L` iff no run of the trimmed Büchi automaton
//! for `L` reads it (every state of a trimmed automaton has a nonempty language). Determinizing
//! that prefix automaton and complementing it yields the bad-prefix DFA for any LTL formula.

use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::ltl::Ltl;

use super::translate::ltl_to_nba_over;
use super::{letters_to_cubes, Cube, Dfa, Nba, Nfa, MAX_EXPLICIT_VARS};

/// Büchi automaton for the smallest safety language containing `L(a)`.
pub fn safety_closure(a: &Nba) -> Nba {
    let t = a.trim();
    let n = t.num_states();
    Nba { acc: vec![true; n], ..t }
}

/// NFA accepting the finite prefixes of words in `L(a)`.
pub fn prefix_nfa(a: &Nba) -> Nfa {
    let t = a.trim();
    let empty = t.acc.iter().all(|x| !x) && t.num_edges() == 0;
    let n = t.num_states();
    Nfa { vars: t.vars, init: t.init, trans: t.trans, finals: vec![!empty; n] }
}

/// Subset construction over explicit letters.
pub fn determinize_safety(a: &Nfa) -> Result<Dfa> {
    let k = a.vars.len();
    if k > MAX_EXPLICIT_VARS {
        return Err(Error::UnsupportedFragment(format!(
            "explicit determinization over {k} variables exceeds the limit of {MAX_EXPLICIT_VARS}"
        )));
    }
    let nl = 1usize << k;
    let mut idx: HashMap<BTreeSet<usize>, usize> = HashMap::new();
    let init: BTreeSet<usize> = [a.init].into();
    let mut sets = vec![init.clone()];
    idx.insert(init, 0);
    let mut delta = Vec::new();
    let mut i = 0;
    while i < sets.len() {
        let cur = sets[i].clone();
        let mut row = Vec::with_capacity(nl);
        for l in 0..nl as u64 {
            let next: BTreeSet<usize> = cur
                .iter()
                .flat_map(|&q| a.trans[q].iter().filter(move |(c, _)| c.matches(l)).map(|e| e.1))
                .collect();
            let j = *idx.entry(next.clone()).or_insert_with(|| {
                sets.push(next);
                sets.len() - 1
            });
            row.push(j);
        }
        delta.push(row);
        i += 1;
    }
    let finals = sets.iter().map(|s| s.iter().any(|&q| a.finals[q])).collect();
    Ok(Dfa { vars: a.vars.clone(), init: 0, delta, finals })
}

pub fn complement_det(a: &Dfa) -> Dfa {
    Dfa { finals: a.finals.iter().map(|f| !f).collect(), ..a.clone() }
}

/// Bad-prefix DFA of the language of `a`.
pub fn bad_prefix_dfa_of(a: &Nba) -> Result<Dfa> {
    Ok(complement_det(&determinize_safety(&prefix_nfa(a))?))
}

/// Bad-prefix DFA of `phi` over `vars`.
pub fn bad_prefix_dfa(phi: &Ltl, vars: &[String]) -> Result<Dfa> {
    bad_prefix_dfa_of(&ltl_to_nba_over(phi, vars))
}

/// Deterministic NFA accepting exactly the bad prefixes of `phi` (over its atoms).
pub fn bad_prefix_nfa(phi: &Ltl) -> Result<Nfa> {
    let vars: Vec<String> = phi.atoms().into_iter().collect();
    Ok(bad_prefix_dfa(phi, &vars)?.to_nfa())
}

/// Büchi automaton accepting the words with a bad prefix, built from a bad-prefix DFA whose final
/// states are made absorbing.
pub fn violation_nba_from_dfa(d: &Dfa) -> Nba {
    let k = d.vars.len();
    let trans = (0..d.num_states())
        .map(|q| {
            if d.finals[q] {
                return vec![(Cube::TOP, q)];
            }
            let mut targets = d.delta[q].clone();
            targets.sort();
            targets.dedup();
            targets
                .into_iter()
                .flat_map(|t| letters_to_cubes(k, &|l| d.delta[q][l as usize] == t).into_iter().map(move |c| (c, t)))
                .collect()
        })
        .collect();
    Nba { vars: d.vars.clone(), init: d.init, trans, acc: d.finals.clone() }.trim()
}

/// Büchi automaton accepting `w` iff `w` finitely violates `phi`.
pub fn finite_violation_nba(phi: &Ltl) -> Result<Nba> {
    let vars: Vec<String> = phi.atoms().into_iter().collect();
    finite_violation_nba_over(phi, &vars)
}

pub fn finite_violation_nba_over(phi: &Ltl, vars: &[String]) -> Result<Nba> {
    Ok(violation_nba_from_dfa(&bad_prefix_dfa(phi, vars)?))
}
