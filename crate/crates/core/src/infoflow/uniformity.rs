//! Capped uniformity check for time-bounded distinguishability.
//!
//! For a fixed lasso pair `(π_e, π_p)` with `π_e ⊔ π_p ⊨ φ`, the question "is there a bound on
//! how late a `Λ`-partner of `π_e` may first violate `φ` together with `π_p`" is decided exactly
//! on the finite product of the lasso, the `Λ` automaton (left component fixed) and the
//! bad-prefix DFA: the bound fails iff a reachable cycle runs through live, not-yet-violated
//! nodes. Only the enumeration of lasso pairs is bounded.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::automata::finite::bad_prefix_dfa;
use crate::automata::graph;
use crate::automata::is_empty;
use crate::error::Result;
use crate::ltl::{eval_ltl, Ltl};
use crate::model::{Architecture, LassoWord, Letter, Proc};

use super::{build_tb_dist_automaton, spec_alphabet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct UniformityCaps {
    pub max_stem: usize,
    pub max_loop: usize,
    /// Product nodes per lasso pair.
    pub max_nodes: usize,
    pub max_rank: usize,
}

impl Default for UniformityCaps {
    fn default() -> Self {
        UniformityCaps { max_stem: 2, max_loop: 2, max_nodes: 200_000, max_rank: 4 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Uniformity {
    /// `bounded` is set when only lasso pairs up to the caps were examined.
    Uniform { bounded: bool },
    /// No bound exists for this environment/output pair.
    NonUniform { env: LassoWord, outputs: LassoWord },
    Inconclusive(String),
}

pub fn check_uniformity_capped(phi: &Ltl, arch: &Architecture, p: Proc, caps: &UniformityCaps) -> Result<Uniformity> {
    let vars = spec_alphabet(phi, arch, p)?;
    let l = build_tb_dist_automaton(phi, arch, p)?;
    let lam = match l.lambda_nba(caps.max_rank) {
        Ok(c) => c,
        Err(e) => return Ok(Uniformity::Inconclusive(e.to_string())),
    };
    if is_empty(&lam.nba).is_empty() {
        if lam.incomplete {
            return Ok(Uniformity::Inconclusive("complement of the Λ automaton was cut off".into()));
        }
        return Ok(Uniformity::Uniform { bounded: false });
    }
    let dfa = bad_prefix_dfa(phi, &vars)?;
    let env = &l.env;
    let k = env.len();
    // Position of each environment variable inside the specification alphabet.
    let env_bit: Vec<usize> = env.iter().map(|v| vars.iter().position(|x| x == v).unwrap()).collect();
    let env_mask: Letter = env_bit.iter().fold(0, |m, &b| m | 1 << b);
    let scatter = |w: Letter| env_bit.iter().enumerate().filter(|(j, _)| w >> j & 1 == 1).fold(0, |m, (_, &b)| m | 1 << b);
    let gather = |x: Letter| env_bit.iter().enumerate().filter(|(_, &b)| x >> b & 1 == 1).fold(0, |m, (j, _)| m | 1 << j);
    let mut lassos = LassoWord::enumerate(&vars, caps.max_stem, caps.max_loop);
    lassos.sort_by_key(|w| (w.stem.len() + w.cycle.len(), w.cycle.len()));
    for w in lassos {
        if !eval_ltl(&w, phi)? {
            continue;
        }
        let len = w.len();
        let mut idx: HashMap<(usize, usize, usize), usize> = HashMap::new();
        let mut nodes = vec![(0usize, lam.nba.init, dfa.init)];
        idx.insert(nodes[0], 0);
        let mut adj: Vec<Vec<usize>> = Vec::new();
        let mut i = 0;
        while i < nodes.len() {
            if nodes.len() > caps.max_nodes {
                return Ok(Uniformity::Inconclusive(format!("uniformity product exceeds {} nodes", caps.max_nodes)));
            }
            let (pos, q, d) = nodes[i];
            let x = w.letter(pos);
            let np = if pos + 1 < len { pos + 1 } else { w.stem.len() };
            let left = gather(x);
            let mut out = Vec::new();
            for r in 0..(1u64 << k) {
                let d2 = dfa.delta[d][((x & !env_mask) | scatter(r)) as usize];
                for q2 in lam.nba.succ(q, left | r << k) {
                    let key = (np, q2, d2);
                    let j = *idx.entry(key).or_insert_with(|| {
                        nodes.push(key);
                        nodes.len() - 1
                    });
                    out.push(j);
                }
            }
            out.sort();
            out.dedup();
            adj.push(out);
            i += 1;
        }
        if unbounded(&adj, &nodes, &lam.nba.acc, &dfa.finals) {
            let o = w.project(&arch.plain_outputs(p));
            let e = w.project(&arch.outputs_e);
            return Ok(Uniformity::NonUniform { env: e, outputs: o });
        }
    }
    if lam.incomplete {
        return Ok(Uniformity::Inconclusive("complement of the Λ automaton was cut off".into()));
    }
    Ok(Uniformity::Uniform { bounded: true })
}

/// A cycle through live, not-yet-violated nodes, reachable from the initial node without a violation.
fn unbounded(adj: &[Vec<usize>], nodes: &[(usize, usize, usize)], acc: &[bool], fin: &[bool]) -> bool {
    let n = adj.len();
    let (id, comps) = graph::scc_ids(adj);
    let nontrivial: Vec<bool> = comps.iter().map(|c| c.len() > 1 || adj[c[0]].contains(&c[0])).collect();
    let seeds: Vec<usize> = (0..n).filter(|&x| acc[nodes[x].1] && nontrivial[id[x]]).collect();
    let mut rev = vec![Vec::new(); n];
    for (x, es) in adj.iter().enumerate() {
        for &y in es {
            rev[y].push(x);
        }
    }
    let live = graph::reachable(&rev, &seeds);
    let ok = |x: usize| live[x] && !fin[nodes[x].2];
    if !ok(0) {
        return false;
    }
    let sub: Vec<Vec<usize>> = (0..n)
        .map(|x| if ok(x) { adj[x].iter().copied().filter(|&y| ok(y)).collect() } else { Vec::new() })
        .collect();
    let reach = graph::reachable(&sub, &[0]);
    graph::tarjan(&sub).iter().any(|c| reach[c[0]] && (c.len() > 1 || sub[c[0]].contains(&c[0])))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::SystemSpec;

    #[test]
    fn bit_transmission_is_uniform() {
        let s = SystemSpec::bit_transmission();
        let r = check_uniformity_capped(s.phi(Proc::Q), &s.arch, Proc::Q, &UniformityCaps::default()).unwrap();
        assert_eq!(r, Uniformity::Uniform { bounded: true });
    }

    #[test]
    fn true_is_uniform_exactly() {
        let s = SystemSpec::bit_transmission();
        let r = check_uniformity_capped(&Ltl::True, &s.arch, Proc::Q, &UniformityCaps::default()).unwrap();
        assert_eq!(r, Uniformity::Uniform { bounded: false });
    }

    #[test]
    fn delayed_start_is_not_uniform() {
        let arch = Architecture::new("a", "b", ["in", "start"], ["c"], ["out"], ["in", "start"], ["c"]).unwrap();
        let phi = Ltl::parse(
            "(in -> (!start W (start & X X out))) & (!in -> (!start W (start & X X G !out)))",
        )
        .unwrap();
        let r = check_uniformity_capped(&phi, &arch, Proc::Q, &UniformityCaps { max_stem: 1, max_loop: 1, ..Default::default() })
            .unwrap();
        let Uniformity::NonUniform { env, outputs } = r else { panic!("{r:?}") };
        assert!(eval_ltl(&LassoWord::combine(&env, &outputs).unwrap(), &phi).unwrap());
    }
}
