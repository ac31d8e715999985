//! Information classes.
//!
//! Two traces with the same visible part belong to the same class iff they have the same set of
//! non-`Λ` partners. Classes are searched as unions of cylinders fixed by a prefix of depth `d`
//! over the hidden environment variables; a depth is accepted once every cylinder is internally
//! consistent, which is decided on the automaton `X(h, h')` ("some visible part and some partner
//! separate `h` from `h'`").

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::automata::complement::Complemented;
use crate::automata::{exists_project, graph, pair_vars, product, Cube, Nba};
use crate::error::{Error, Result};
use crate::model::{indexed_name, split_indexed, LassoWord, Letter};

use super::TbDistAutomaton;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InfoClass {
    pub token: String,
    /// Language over `O_e`.
    pub nba: Nba,
    pub witness: LassoWord,
    /// Hidden variables (sorted) and the hidden prefixes of length `depth` forming the class.
    pub hidden: Vec<String>,
    pub depth: usize,
    pub prefixes: Vec<Vec<Letter>>,
}

impl InfoClass {
    /// Whether a trace over `O_e` lies in the class.
    pub fn contains(&self, w: &LassoWord) -> Result<bool> {
        crate::automata::lasso_member(&self.nba, w)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassCaps {
    pub max_depth: usize,
    pub max_cylinders: usize,
    pub max_classes: usize,
    pub max_rank: usize,
}

impl Default for ClassCaps {
    fn default() -> Self {
        ClassCaps { max_depth: 4, max_cylinders: 4096, max_classes: 16, max_rank: 4 }
    }
}

/// Renames the pair alphabet of `a` (`x[0]`, `x[1]` over `O_e`): left hidden variables get
/// index `left_idx`, left visible ones become shared plain names, and right ones become `x#w`.
fn rename_pair(a: &Nba, hidden: &BTreeSet<String>, left_idx: u8) -> Nba {
    a.renamed(|v| {
        let (n, i) = split_indexed(v).expect("pair variable");
        if i == 1 {
            format!("{n}#w")
        } else if hidden.contains(n) {
            indexed_name(n, left_idx)
        } else {
            n.to_string()
        }
    })
}

fn live_states(a: &Nba) -> Vec<bool> {
    let adj: Vec<Vec<usize>> = a.trans.iter().map(|es| es.iter().map(|e| e.1).collect()).collect();
    let (id, comps) = graph::scc_ids(&adj);
    let nontrivial: Vec<bool> = comps.iter().map(|c| c.len() > 1 || adj[c[0]].contains(&c[0])).collect();
    let seeds: Vec<usize> = (0..a.num_states()).filter(|&q| a.acc[q] && nontrivial[id[q]]).collect();
    let mut rev = vec![Vec::new(); adj.len()];
    for (x, es) in adj.iter().enumerate() {
        for &y in es {
            rev[y].push(x);
        }
    }
    graph::reachable(&rev, &seeds)
}

/// Whether some continuation after reading `word` from the initial state is accepted.
fn live_after(a: &Nba, live: &[bool], word: impl IntoIterator<Item = Letter>) -> bool {
    let mut cur: BTreeSet<usize> = [a.init].into();
    for l in word {
        cur = a.succ_set(&cur, l);
        if cur.is_empty() {
            return false;
        }
    }
    cur.iter().any(|&q| live[q])
}

fn all_words(k: usize, d: usize) -> Vec<Vec<Letter>> {
    let mut out = vec![vec![]];
    for _ in 0..d {
        out = out.into_iter().flat_map(|w: Vec<Letter>| (0..1u64 << k).map(move |l| [w.clone(), vec![l]].concat())).collect();
    }
    out
}

pub fn extract_info_classes(l: &TbDistAutomaton, hidden: &BTreeSet<String>, caps: &ClassCaps) -> Result<Vec<InfoClass>> {
    let lam: Complemented = l.lambda_nba(caps.max_rank)?;
    if lam.incomplete {
        return Err(Error::CapExceeded("complement of the Λ automaton was cut off".into()));
    }
    let env = &l.env;
    let hv: Vec<String> = hidden.iter().cloned().collect();
    let visible: Vec<String> = env.iter().filter(|v| !hidden.contains(*v)).cloned().collect();
    let hp = pair_vars(&hv);
    let mut xvars = hp.clone();
    xvars.extend(visible.iter().cloned());
    xvars.extend(env.iter().map(|v| format!("{v}#w")));
    let project: BTreeSet<String> = xvars[hp.len()..].iter().cloned().collect();
    let lam_r = rename_pair(&lam.nba, hidden, 0).with_vars(&xvars)?;
    let n_r = rename_pair(l.not_lambda(), hidden, 1).with_vars(&xvars)?;
    let x = exists_project(&product(&lam_r, &n_r)?, &project)?;
    let x_live = live_states(&x);
    // Hidden traces with some Λ-partner.
    let mut lvars: Vec<String> = hv.iter().map(|v| indexed_name(v, 0)).collect();
    lvars.extend(xvars[hp.len()..].iter().cloned());
    let left = exists_project(&rename_pair(&lam.nba, hidden, 0).with_vars(&lvars)?, &project)?;
    let left_live = live_states(&left);

    let k = hv.len();
    for d in 0..=caps.max_depth {
        let n = 1usize.checked_shl((k * d) as u32).unwrap_or(usize::MAX);
        if n > caps.max_cylinders {
            break;
        }
        let cyl = all_words(k, d);
        let dist = |i: usize, j: usize| {
            let run = |a: &[Letter], b: &[Letter]| live_after(&x, &x_live, a.iter().zip(b).map(|(p, q)| p | q << k));
            run(&cyl[i], &cyl[j]) || run(&cyl[j], &cyl[i])
        };
        if (0..n).any(|i| dist(i, i)) {
            continue;
        }
        let mut group: Vec<usize> = (0..n).collect();
        let mut groups: Vec<Vec<usize>> = Vec::new();
        for i in 0..n {
            match groups.iter().position(|g| !dist(g[0], i)) {
                Some(g) => {
                    group[i] = g;
                    groups[g].push(i);
                }
                None => {
                    group[i] = groups.len();
                    groups.push(vec![i]);
                }
            }
        }
        let consistent = groups.iter().all(|g| g.iter().all(|&a| g.iter().all(|&b| !dist(a, b))))
            && (0..n).all(|i| (0..n).all(|j| (group[i] == group[j]) != dist(i, j)));
        if !consistent {
            continue;
        }
        if groups.len() > caps.max_classes {
            return Err(Error::ClassCap(format!(
                "{} classes at depth {d} exceed the cap of {}: finiteness assumption violated or cap too low",
                groups.len(),
                caps.max_classes
            )));
        }
        let has_partner = |g: &Vec<usize>| g.iter().any(|&i| live_after(&left, &left_live, cyl[i].iter().copied()));
        let mut order: Vec<usize> = (0..groups.len()).collect();
        order.sort_by_key(|&g| (!has_partner(&groups[g]), groups[g][0]));
        let env_bit: Vec<usize> = hv.iter().map(|v| env.iter().position(|x| x == v).unwrap()).collect();
        let scatter = |h: Letter| env_bit.iter().enumerate().filter(|(j, _)| h >> j & 1 == 1).fold(0, |m, (_, &b)| m | 1 << b);
        return Ok(order
            .into_iter()
            .enumerate()
            .map(|(t, g)| {
                let prefixes: Vec<Vec<Letter>> = groups[g].iter().map(|&i| cyl[i].clone()).collect();
                let first = &prefixes[0];
                InfoClass {
                    token: format!("ic{t}"),
                    nba: cylinder_nba(env, &env_bit, &prefixes),
                    witness: LassoWord { vars: env.clone(), stem: first.iter().map(|&h| scatter(h)).collect(), cycle: vec![0] },
                    hidden: hv.clone(),
                    depth: d,
                    prefixes,
                }
            })
            .collect());
    }
    Err(Error::ClassCap(format!(
        "no consistent class partition up to depth {} ({} cylinders): finiteness assumption violated or cap too low",
        caps.max_depth, caps.max_cylinders
    )))
}

/// Traces over `env` whose hidden prefix is one of `prefixes` (all of the same length).
fn cylinder_nba(env: &[String], env_bit: &[usize], prefixes: &[Vec<Letter>]) -> Nba {
    let hmask: u64 = env_bit.iter().fold(0, |m, &b| m | 1 << b);
    let cube = |h: Letter| {
        let pos = env_bit.iter().enumerate().filter(|(j, _)| h >> j & 1 == 1).fold(0, |m, (_, &b)| m | 1 << b);
        Cube { pos, neg: hmask & !pos }
    };
    // Trie over prefixes; the last state is the accepting sink.
    let mut nodes: Vec<Vec<Letter>> = vec![vec![]];
    let mut trans: Vec<Vec<(Cube, usize)>> = vec![vec![]];
    for p in prefixes {
        let mut cur = 0;
        for (i, &h) in p.iter().enumerate() {
            let key = p[..=i].to_vec();
            let next = match nodes.iter().position(|n| *n == key) {
                Some(j) => j,
                None => {
                    nodes.push(key);
                    trans.push(vec![]);
                    nodes.len() - 1
                }
            };
            if !trans[cur].iter().any(|(_, t)| *t == next) {
                trans[cur].push((cube(h), next));
            }
            cur = next;
        }
    }
    let sink = nodes.len();
    let depth = prefixes.first().map_or(0, |p| p.len());
    for (j, n) in nodes.iter().enumerate() {
        if n.len() == depth {
            trans[j].push((Cube::TOP, sink));
        }
    }
    trans.push(vec![(Cube::TOP, sink)]);
    let mut acc = vec![false; sink + 1];
    acc[sink] = true;
    Nba { vars: env.to_vec(), init: 0, trans, acc }.trim()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::infoflow::{build_tb_dist_automaton, lambda_member};
    use crate::ltl::Ltl;
    use crate::model::{Architecture, Proc, SystemSpec};

    #[test]
    fn bit_transmission_has_two_classes() {
        let s = SystemSpec::bit_transmission();
        let l = build_tb_dist_automaton(s.phi(Proc::Q), &s.arch, Proc::Q).unwrap();
        let cs = extract_info_classes(&l, &s.arch.hidden_env(Proc::Q), &ClassCaps::default()).unwrap();
        assert_eq!(cs.len(), 2);
        assert_eq!(cs[0].token, "ic0");
        let e = ["in"];
        assert!(cs[0].contains(&LassoWord::parse(&e, "{in} | {}").unwrap()).unwrap());
        assert!(cs[1].contains(&LassoWord::parse(&e, "{} | {in}").unwrap()).unwrap());
        for c in &cs {
            assert!(c.contains(&c.witness).unwrap());
        }
        // Oracle: same class iff same set of non-Λ partners among small lassos.
        let words = LassoWord::enumerate(&l.env, 2, 2);
        let row = |u: &LassoWord| -> Vec<bool> { words.iter().map(|w| lambda_member(&l, u, w).unwrap()).collect() };
        let class_of = |u: &LassoWord| cs.iter().position(|c| c.contains(u).unwrap()).unwrap();
        for u in &words {
            assert_eq!(cs.iter().filter(|c| c.contains(u).unwrap()).count(), 1);
            for v in &words {
                assert_eq!(class_of(u) == class_of(v), row(u) == row(v), "{u} / {v}");
            }
        }
    }

    #[test]
    fn trivial_spec_has_one_universal_class() {
        let s = SystemSpec::bit_transmission();
        let l = build_tb_dist_automaton(&Ltl::True, &s.arch, Proc::Q).unwrap();
        let cs = extract_info_classes(&l, &s.arch.hidden_env(Proc::Q), &ClassCaps::default()).unwrap();
        assert_eq!(cs.len(), 1);
        assert_eq!(cs[0].depth, 0);
        for w in LassoWord::enumerate(&l.env, 1, 2) {
            assert!(cs[0].contains(&w).unwrap());
        }
    }

    #[test]
    fn two_hidden_inputs_give_two_classes() {
        let arch = Architecture::new(
            "a",
            "b",
            ["x1", "x2", "y1", "y2"],
            ["c", "t"],
            ["out"],
            ["x1", "x2"],
            ["y1", "y2", "c", "t"],
        )
        .unwrap();
        let phi = Ltl::parse("(x1 & x2 & y1 & y2) <-> F out").unwrap();
        let l = build_tb_dist_automaton(&phi, &arch, Proc::Q).unwrap();
        let cs = extract_info_classes(&l, &arch.hidden_env(Proc::Q), &ClassCaps::default()).unwrap();
        assert_eq!(cs.len(), 2);
        assert_eq!(cs[0].prefixes, vec![vec![0b11]]);
        let v = ["x1", "x2", "y1", "y2"];
        assert!(cs[0].contains(&LassoWord::parse(&v, "{x1,x2} | {}").unwrap()).unwrap());
        assert!(cs[1].contains(&LassoWord::parse(&v, "{x1,y1,y2} | {x2}").unwrap()).unwrap());
        // Brute force over length-1 hidden valuations: traces differing only in hidden values at
        // step 0 are separated by Λ iff exactly one has all hidden inputs set.
        for a in 0..4u64 {
            for b in 0..4u64 {
                let w = |h: u64| LassoWord { vars: l.env.clone(), stem: vec![h | 0b1100], cycle: vec![0] };
                let sep = (0..16u64).any(|r| {
                    let p = LassoWord { vars: l.env.clone(), stem: vec![r], cycle: vec![0] };
                    lambda_member(&l, &w(a), &p).unwrap() != lambda_member(&l, &w(b), &p).unwrap()
                });
                assert_eq!(sep, (a == 3) != (b == 3));
            }
        }
    }
}
