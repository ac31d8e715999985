//! ω- and finite-word automata with cube-labelled transitions over explicit alphabets.
//!
//! A letter is a bitset over the ordered variable list `vars`; a transition carries a [`Cube`]
//! (a conjunction of literals) and fires on every letter satisfying it.

pub mod complement;
pub mod dot;
pub mod emptiness;
pub mod finite;
pub mod graph;
pub mod ops;
pub mod translate;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{full_mask, Letter};

pub use complement::{complement_nba_bounded, complement_weak, is_weak, Complemented};
pub use emptiness::{is_empty, lasso_member, Emptiness};
pub use finite::{bad_prefix_nfa, complement_det, determinize_safety, finite_violation_nba, safety_closure};
pub use ops::{exists_project, pair_product, pair_vars, product, self_compose, union};
pub use translate::ltl_to_nba;

/// Conjunction of literals: bits in `pos` must be set, bits in `neg` clear.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cube {
    pub pos: u64,
    pub neg: u64,
}

impl Cube {
    pub const TOP: Cube = Cube { pos: 0, neg: 0 };

    pub fn letter(l: Letter, nvars: usize) -> Cube {
        Cube { pos: l, neg: !l & full_mask(nvars) }
    }

    pub fn lit(bit: usize, positive: bool) -> Cube {
        if positive {
            Cube { pos: 1 << bit, neg: 0 }
        } else {
            Cube { pos: 0, neg: 1 << bit }
        }
    }

    pub fn matches(&self, l: Letter) -> bool {
        l & self.pos == self.pos && l & self.neg == 0
    }

    pub fn and(&self, o: &Cube) -> Option<Cube> {
        let c = Cube { pos: self.pos | o.pos, neg: self.neg | o.neg };
        (c.pos & c.neg == 0).then_some(c)
    }

    /// Every letter of `self` is a letter of `o`.
    pub fn implies(&self, o: &Cube) -> bool {
        o.pos & !self.pos == 0 && o.neg & !self.neg == 0
    }

    /// The smallest valuation satisfying the cube.
    pub fn min_letter(&self) -> Letter {
        self.pos
    }

    pub fn erase(&self, mask: u64) -> Cube {
        Cube { pos: self.pos & !mask, neg: self.neg & !mask }
    }

    /// Moves bit `i` to bit `map[i]` (bits with `None` must be clear).
    pub fn remap(&self, map: &[Option<usize>]) -> Cube {
        let f = |x: u64| -> u64 {
            let mut out = 0;
            for (i, m) in map.iter().enumerate() {
                if x >> i & 1 == 1 {
                    out |= 1 << m.expect("remapped bit");
                }
            }
            out
        };
        Cube { pos: f(self.pos), neg: f(self.neg) }
    }

    pub fn render(&self, vars: &[String]) -> String {
        let mut lits = Vec::new();
        for (i, v) in vars.iter().enumerate() {
            if self.pos >> i & 1 == 1 {
                lits.push(v.clone());
            } else if self.neg >> i & 1 == 1 {
                lits.push(format!("!{v}"));
            }
        }
        if lits.is_empty() {
            "true".into()
        } else {
            lits.join(" & ")
        }
    }
}

/// Covers a set of letters (given as a membership predicate over `nvars` bits) by disjoint cubes.
pub fn letters_to_cubes(nvars: usize, member: &dyn Fn(Letter) -> bool) -> Vec<Cube> {
    fn go(nvars: usize, bit: usize, fixed: Cube, member: &dyn Fn(Letter) -> bool, out: &mut Vec<Cube>) {
        // Enumerate the free bits bit..nvars to see whether the subspace is full or empty.
        let free = nvars - bit;
        let (mut any, mut all) = (false, true);
        for x in 0..(1u64 << free) {
            let l = fixed.pos | (x << bit);
            if member(l) {
                any = true;
            } else {
                all = false;
            }
            if any && !all {
                break;
            }
        }
        if !any {
            return;
        }
        if all {
            out.push(fixed);
            return;
        }
        let lo = Cube { pos: fixed.pos, neg: fixed.neg | 1 << bit };
        let hi = Cube { pos: fixed.pos | 1 << bit, neg: fixed.neg };
        go(nvars, bit + 1, lo, member, out);
        go(nvars, bit + 1, hi, member, out);
    }
    let mut out = Vec::new();
    go(nvars, 0, Cube::TOP, member, &mut out);
    out
}

pub type Edges = Vec<Vec<(Cube, usize)>>;

/// Büchi automaton with a single initial state.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Nba {
    pub vars: Vec<String>,
    pub init: usize,
    pub trans: Edges,
    pub acc: Vec<bool>,
}

impl Nba {
    /// The automaton accepting nothing.
    pub fn empty(vars: Vec<String>) -> Nba {
        Nba { vars, init: 0, trans: vec![vec![]], acc: vec![false] }
    }

    /// The automaton accepting every word.
    pub fn universal(vars: Vec<String>) -> Nba {
        Nba { vars, init: 0, trans: vec![vec![(Cube::TOP, 0)]], acc: vec![true] }
    }

    pub fn num_states(&self) -> usize {
        self.trans.len()
    }

    pub fn num_edges(&self) -> usize {
        self.trans.iter().map(Vec::len).sum()
    }

    pub fn succ(&self, q: usize, l: Letter) -> impl Iterator<Item = usize> + '_ {
        self.trans[q].iter().filter(move |(c, _)| c.matches(l)).map(|(_, t)| *t)
    }

    pub fn succ_set(&self, qs: &BTreeSet<usize>, l: Letter) -> BTreeSet<usize> {
        qs.iter().flat_map(|&q| self.succ(q, l)).collect()
    }

    pub fn check_alphabet(&self, vars: &[String]) -> Result<()> {
        if self.vars != vars {
            return Err(Error::AlphabetMismatch(format!("{:?} vs {:?}", self.vars, vars)));
        }
        Ok(())
    }

    /// The same language over `vars`, which must contain the current alphabet; new variables
    /// are unconstrained.
    pub fn with_vars(&self, vars: &[String]) -> Result<Nba> {
        if vars.len() > 64 {
            return Err(Error::AlphabetMismatch("more than 64 variables".into()));
        }
        let map: Vec<Option<usize>> = self
            .vars
            .iter()
            .map(|v| {
                vars.iter()
                    .position(|x| x == v)
                    .map(Some)
                    .ok_or_else(|| Error::AlphabetMismatch(format!("`{v}` missing from target alphabet")))
            })
            .collect::<Result<_>>()?;
        Ok(Nba {
            vars: vars.to_vec(),
            init: self.init,
            trans: self.trans.iter().map(|es| es.iter().map(|(c, t)| (c.remap(&map), *t)).collect()).collect(),
            acc: self.acc.clone(),
        })
    }

    /// Renames variables (bit positions unchanged).
    pub fn renamed(&self, f: impl Fn(&str) -> String) -> Nba {
        Nba { vars: self.vars.iter().map(|v| f(v)).collect(), ..self.clone() }
    }

    /// Keeps only states reachable from the initial state and able to reach an accepting cycle.
    pub fn trim(&self) -> Nba {
        let n = self.num_states();
        let adj: Vec<Vec<usize>> = self.trans.iter().map(|es| es.iter().map(|e| e.1).collect()).collect();
        let reach = graph::reachable(&adj, &[self.init]);
        let sccs = graph::tarjan(&adj);
        let mut good = vec![false; n];
        for comp in &sccs {
            let nontrivial = comp.len() > 1 || adj[comp[0]].contains(&comp[0]);
            if nontrivial && comp.iter().any(|&q| self.acc[q] && reach[q]) {
                for &q in comp {
                    good[q] = true;
                }
            }
        }
        // Backward closure from good states.
        let mut radj = vec![vec![]; n];
        for (q, ts) in adj.iter().enumerate() {
            for &t in ts {
                radj[t].push(q);
            }
        }
        let seeds: Vec<usize> = (0..n).filter(|&q| good[q]).collect();
        let useful = graph::reachable(&radj, &seeds);
        let keep: Vec<bool> = (0..n).map(|q| reach[q] && useful[q]).collect();
        if !keep[self.init] {
            return Nba::empty(self.vars.clone());
        }
        self.restrict(&keep)
    }

    /// Keeps the marked states (the initial state must be kept), renumbering in BFS order.
    pub fn restrict(&self, keep: &[bool]) -> Nba {
        let mut idx = vec![usize::MAX; self.num_states()];
        let mut order = vec![self.init];
        idx[self.init] = 0;
        let mut i = 0;
        while i < order.len() {
            let q = order[i];
            i += 1;
            for &(_, t) in &self.trans[q] {
                if keep[t] && idx[t] == usize::MAX {
                    idx[t] = order.len();
                    order.push(t);
                }
            }
        }
        let trans = order
            .iter()
            .map(|&q| {
                let mut es: Vec<(Cube, usize)> =
                    self.trans[q].iter().filter(|(_, t)| idx[*t] != usize::MAX).map(|&(c, t)| (c, idx[t])).collect();
                es.sort();
                es.dedup();
                es
            })
            .collect();
        Nba { vars: self.vars.clone(), init: 0, trans, acc: order.iter().map(|&q| self.acc[q]).collect() }
    }

    pub fn all_accepting(&self) -> bool {
        self.acc.iter().all(|&a| a)
    }
}

/// Finite-word automaton.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Nfa {
    pub vars: Vec<String>,
    pub init: usize,
    pub trans: Edges,
    pub finals: Vec<bool>,
}

impl Nfa {
    pub fn accepts(&self, word: &[Letter]) -> bool {
        let mut cur: BTreeSet<usize> = [self.init].into();
        for &l in word {
            cur = cur
                .iter()
                .flat_map(|&q| self.trans[q].iter().filter(move |(c, _)| c.matches(l)).map(|e| e.1))
                .collect();
        }
        cur.iter().any(|&q| self.finals[q])
    }

    pub fn num_states(&self) -> usize {
        self.trans.len()
    }
}

/// Complete deterministic finite automaton with an explicit per-letter transition table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dfa {
    pub vars: Vec<String>,
    pub init: usize,
    pub delta: Vec<Vec<usize>>,
    pub finals: Vec<bool>,
}

impl Dfa {
    pub fn run(&self, word: &[Letter]) -> usize {
        word.iter().fold(self.init, |q, &l| self.delta[q][l as usize])
    }

    pub fn accepts(&self, word: &[Letter]) -> bool {
        self.finals[self.run(word)]
    }

    pub fn num_states(&self) -> usize {
        self.delta.len()
    }

    /// Cube-labelled view with merged letters.
    pub fn to_nfa(&self) -> Nfa {
        let k = self.vars.len();
        let trans = (0..self.num_states())
            .map(|q| {
                let mut targets: Vec<usize> = self.delta[q].clone();
                targets.sort();
                targets.dedup();
                targets
                    .into_iter()
                    .flat_map(|t| {
                        letters_to_cubes(k, &|l| self.delta[q][l as usize] == t).into_iter().map(move |c| (c, t))
                    })
                    .collect()
            })
            .collect();
        Nfa { vars: self.vars.clone(), init: self.init, trans, finals: self.finals.clone() }
    }
}

/// A universal co-Büchi automaton: a word is accepted iff every run visits `rejecting` states
/// finitely often. It is the dual reading of an [`Nba`] structure, so it accepts exactly the
/// complement of that NBA's language.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Uca {
    pub structure: Nba,
}

impl Uca {
    /// The UCA for the complement of `nba`'s language (same states, dual reading).
    pub fn dual_of(nba: Nba) -> Uca {
        Uca { structure: nba }
    }

    pub fn vars(&self) -> &[String] {
        &self.structure.vars
    }

    pub fn rejecting(&self, q: usize) -> bool {
        self.structure.acc[q]
    }

    pub fn accepts(&self, w: &crate::model::LassoWord) -> Result<bool> {
        Ok(!lasso_member(&self.structure, w)?)
    }
}

/// Maximum number of variables for which explicit per-letter tables are built.
pub const MAX_EXPLICIT_VARS: usize = 16;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cube_cover_is_exact() {
        let member = |l: Letter| l % 3 == 0;
        let cubes = letters_to_cubes(4, &member);
        for l in 0..16u64 {
            let n = cubes.iter().filter(|c| c.matches(l)).count();
            assert_eq!(n, member(l) as usize);
        }
        assert_eq!(letters_to_cubes(3, &|_| true), vec![Cube::TOP]);
        assert!(letters_to_cubes(3, &|_| false).is_empty());
    }
}
