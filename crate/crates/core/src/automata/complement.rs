//! Büchi complementation.
//!
//! Weak automata are complemented exactly: read as a co-Büchi automaton, dualized to a universal
//! Büchi automaton and turned back into a Büchi automaton with the breakpoint construction.
//! Other automata use rank-based complementation with a rank cap; a cap below the complete bound
//! yields a sound under-approximation and sets the `incomplete` flag.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::model::Letter;

use super::graph;
use super::{letters_to_cubes, Nba, MAX_EXPLICIT_VARS};

#[derive(Debug, Clone)]
pub struct Complemented {
    pub nba: Nba,
    /// The construction was cut off; `nba` under-approximates the complement.
    pub incomplete: bool,
}

/// Every SCC is entirely accepting or entirely rejecting.
pub fn is_weak(a: &Nba) -> bool {
    let adj: Vec<Vec<usize>> = a.trans.iter().map(|es| es.iter().map(|e| e.1).collect()).collect();
    graph::tarjan(&adj).iter().all(|c| c.iter().all(|&q| a.acc[q] == a.acc[c[0]]))
}

/// Shared driver: explores a deterministic automaton over explicit letters whose states are
/// produced by `step`, then merges letters into cubes.
fn explore<S: Clone + Eq + std::hash::Hash>(
    vars: &[String],
    init: S,
    accepting: impl Fn(&S) -> bool,
    step: impl Fn(&S, Letter) -> Vec<S>,
    cap: usize,
) -> Result<Nba> {
    let k = vars.len();
    if k > MAX_EXPLICIT_VARS {
        return Err(Error::UnsupportedFragment(format!("complementation over {k} variables")));
    }
    let mut idx: HashMap<S, usize> = HashMap::new();
    let mut states = vec![init.clone()];
    idx.insert(init, 0);
    let mut trans = Vec::new();
    let mut i = 0;
    while i < states.len() {
        if states.len() > cap {
            return Err(Error::CapExceeded(format!("complement exceeds {cap} states")));
        }
        let s = states[i].clone();
        let mut by_target: BTreeMap<usize, Vec<Letter>> = BTreeMap::new();
        for l in 0..(1u64 << k) {
            for t in step(&s, l) {
                let j = *idx.entry(t.clone()).or_insert_with(|| {
                    states.push(t);
                    states.len() - 1
                });
                by_target.entry(j).or_default().push(l);
            }
        }
        let mut es = Vec::new();
        for (j, ls) in by_target {
            let set: BTreeSet<Letter> = ls.into_iter().collect();
            for c in letters_to_cubes(k, &|l| set.contains(&l)) {
                es.push((c, j));
            }
        }
        trans.push(es);
        i += 1;
    }
    let acc = states.iter().map(&accepting).collect();
    Ok(Nba { vars: vars.to_vec(), init: 0, trans, acc }.trim())
}

/// Exact complement of a weak automaton.
pub fn complement_weak(a: &Nba, cap: usize) -> Result<Nba> {
    debug_assert!(is_weak(a));
    // Universal Büchi reading: every run must visit a rejecting (non-accepting) state infinitely often.
    let bad: Vec<bool> = a.acc.iter().map(|x| !x).collect();
    let init_s: BTreeSet<usize> = [a.init].into();
    let init_o: BTreeSet<usize> = init_s.iter().copied().filter(|&q| !bad[q]).collect();
    explore(
        &a.vars,
        (init_s, init_o),
        |(_, o)| o.is_empty(),
        |(s, o), l| {
            let s2 = a.succ_set(s, l);
            let base = if o.is_empty() { s2.clone() } else { a.succ_set(o, l) };
            let o2 = base.into_iter().filter(|&q| !bad[q]).collect();
            vec![(s2, o2)]
        },
        cap,
    )
}

/// Rank-based complementation with ranks in `0..=max_rank`.
pub fn complement_rank(a: &Nba, max_rank: usize, cap: usize) -> Result<Complemented> {
    let n = a.num_states();
    let incomplete = max_rank < 2 * n;
    type Ranking = Vec<(usize, usize)>;
    let top = |q: usize| if a.acc[q] && max_rank % 2 == 1 { max_rank - 1 } else { max_rank };
    let init: (Ranking, BTreeSet<usize>) = (vec![(a.init, top(a.init))], BTreeSet::new());
    let nba = explore(
        &a.vars,
        init,
        |(_, o)| o.is_empty(),
        |(f, o), l| {
            // Upper bound for each successor: min rank over its predecessors.
            let mut bound: BTreeMap<usize, usize> = BTreeMap::new();
            for &(q, r) in f {
                for t in a.succ(q, l) {
                    let e = bound.entry(t).or_insert(r);
                    *e = (*e).min(r);
                }
            }
            let succ: Vec<(usize, usize)> = bound.into_iter().collect();
            let o_succ: BTreeSet<usize> =
                o.iter().flat_map(|&q| a.succ(q, l)).collect();
            let mut out = Vec::new();
            let mut cur: Ranking = Vec::with_capacity(succ.len());
            fn rec(
                i: usize,
                succ: &[(usize, usize)],
                acc: &[bool],
                cur: &mut Vec<(usize, usize)>,
                out: &mut Vec<Vec<(usize, usize)>>,
            ) {
                if i == succ.len() {
                    out.push(cur.clone());
                    return;
                }
                let (q, b) = succ[i];
                for r in 0..=b {
                    if acc[q] && r % 2 == 1 {
                        continue;
                    }
                    cur.push((q, r));
                    rec(i + 1, succ, acc, cur, out);
                    cur.pop();
                }
            }
            let mut rankings = Vec::new();
            rec(0, &succ, &a.acc, &mut cur, &mut rankings);
            for g in rankings {
                let even: BTreeSet<usize> = g.iter().filter(|(_, r)| r % 2 == 0).map(|(q, _)| *q).collect();
                let o2: BTreeSet<usize> = if o.is_empty() {
                    even
                } else {
                    o_succ.intersection(&even).copied().collect()
                };
                out.push((g, o2));
            }
            out
        },
        cap,
    )?;
    Ok(Complemented { nba, incomplete })
}

/// Complement: exact for weak automata, rank-bounded otherwise.
pub fn complement_nba_bounded(a: &Nba, max_rank: usize) -> Result<Complemented> {
    let a = a.trim();
    if is_weak(&a) {
        return Ok(Complemented { nba: complement_weak(&a, 200_000)?, incomplete: false });
    }
    complement_rank(&a, max_rank.max(1), 200_000)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::{is_empty, lasso_member, ltl_to_nba, product};
    use crate::automata::translate::ltl_to_nba_over;
    use crate::ltl::{eval_ltl, Ltl};
    use crate::model::LassoWord;

    #[test]
    fn complement_examples() {
        let vars = vec!["out".to_string()];
        let c = complement_nba_bounded(&Nba::empty(vars.clone()), 1).unwrap();
        assert!(!c.incomplete);
        for w in LassoWord::enumerate(&vars, 2, 2) {
            assert!(lasso_member(&c.nba, &w).unwrap());
        }
        let f = ltl_to_nba(&Ltl::parse("F out").unwrap());
        let c = complement_nba_bounded(&f, 2).unwrap();
        for w in LassoWord::enumerate(&vars, 3, 3) {
            let has_out = (0..w.len()).any(|i| w.letter(i) == 1);
            assert_eq!(lasso_member(&c.nba, &w).unwrap(), !has_out);
        }
        let g = ltl_to_nba(&Ltl::parse("G a").unwrap());
        let cc = complement_nba_bounded(&complement_nba_bounded(&g, 2).unwrap().nba, 2).unwrap();
        for w in LassoWord::enumerate(&g.vars, 3, 3) {
            assert_eq!(lasso_member(&cc.nba, &w).unwrap(), lasso_member(&g, &w).unwrap());
        }
    }

    #[test]
    fn rank_based_on_non_weak() {
        let vars = vec!["a".to_string()];
        let phi = Ltl::parse("G F a").unwrap();
        let a = ltl_to_nba_over(&phi, &vars);
        let c = complement_rank(&a, 2 * a.num_states(), 100_000).unwrap();
        assert!(!c.incomplete);
        for w in LassoWord::enumerate(&vars, 2, 3) {
            assert_eq!(lasso_member(&c.nba, &w).unwrap(), !eval_ltl(&w, &phi).unwrap(), "{w}");
        }
        assert!(is_empty(&product(&a, &c.nba).unwrap()).is_empty());
        let low = complement_rank(&a, 0, 100_000).unwrap();
        assert!(low.incomplete);
        assert!(is_empty(&product(&a, &low.nba).unwrap()).is_empty());
    }
}
