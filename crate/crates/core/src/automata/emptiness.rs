//! Emptiness with shortest lasso witnesses, and lasso membership.

use std::collections::HashMap;

use crate::error::Result;
use crate::model::{LassoWord, Letter};

use super::graph;
use super::Nba;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Emptiness {
    Empty,
    NonEmpty(LassoWord),
}

impl Emptiness {
    pub fn is_empty(&self) -> bool {
        matches!(self, Emptiness::Empty)
    }

    pub fn witness(&self) -> Option<&LassoWord> {
        match self {
            Emptiness::Empty => None,
            Emptiness::NonEmpty(w) => Some(w),
        }
    }
}

/// Decides emptiness; a nonempty result carries a shortest accepted lasso (stem + loop length
/// minimal, letters chosen as the smallest valuation of each transition cube).
pub fn is_empty(a: &Nba) -> Emptiness {
    let n = a.num_states();
    let adj: Vec<Vec<usize>> = a.trans.iter().map(|es| es.iter().map(|e| e.1).collect()).collect();
    let reach = graph::reachable(&adj, &[a.init]);
    let (id, comps) = graph::scc_ids(&adj);
    let nontrivial: Vec<bool> = comps.iter().map(|c| c.len() > 1 || adj[c[0]].contains(&c[0])).collect();
    let candidates: Vec<usize> = (0..n).filter(|&q| reach[q] && a.acc[q] && nontrivial[id[q]]).collect();
    if candidates.is_empty() {
        return Emptiness::Empty;
    }
    // Stem distances from init.
    let dist = bfs_dist(&adj, a.init);
    let mut best: Option<(usize, Vec<usize>, Vec<usize>)> = None;
    for &f in &candidates {
        let stem_len = dist[f];
        if let Some((b, _, _)) = &best {
            if stem_len + 1 > *b {
                continue;
            }
        }
        let same = id[f];
        let cycle = graph::bfs_path(&adj, f, &|q| q == f, &|q| id[q] == same, true).expect("cycle in nontrivial scc");
        let total = stem_len + cycle.len() - 1;
        if best.as_ref().is_none_or(|(b, _, _)| total < *b) {
            let stem = graph::bfs_path(&adj, a.init, &|q| q == f, &|_| true, false).expect("reachable");
            best = Some((total, stem, cycle));
        }
    }
    let (_, stem, cycle) = best.expect("candidate");
    let letters = |path: &[usize]| -> Vec<Letter> {
        path.windows(2)
            .map(|w| {
                a.trans[w[0]].iter().filter(|(_, t)| *t == w[1]).map(|(c, _)| c.min_letter()).min().expect("edge")
            })
            .collect()
    };
    let stem_l = letters(&stem);
    let cycle_l = letters(&cycle);
    Emptiness::NonEmpty(LassoWord { vars: a.vars.clone(), stem: stem_l, cycle: cycle_l })
}

fn bfs_dist(adj: &[Vec<usize>], from: usize) -> Vec<usize> {
    let mut d = vec![usize::MAX; adj.len()];
    d[from] = 0;
    let mut q = std::collections::VecDeque::from([from]);
    while let Some(x) = q.pop_front() {
        for &t in &adj[x] {
            if d[t] == usize::MAX {
                d[t] = d[x] + 1;
                q.push_back(t);
            }
        }
    }
    d
}

/// Whether the lasso word is accepted (product with the lasso graph plus accepting-cycle search).
pub fn lasso_member(a: &Nba, w: &LassoWord) -> Result<bool> {
    let w = if w.vars == a.vars {
        w.clone()
    } else {
        if let Some(v) = a.vars.iter().find(|v| !w.vars.contains(v)) {
            return Err(crate::error::Error::AlphabetMismatch(format!("word lacks variable `{v}`")));
        }
        w.project(&a.vars.iter().cloned().collect()).widen(&a.vars)?
    };
    Ok(lasso_member_unchecked(a, &w))
}

pub(crate) fn lasso_member_unchecked(a: &Nba, w: &LassoWord) -> bool {
    let len = w.len();
    let mut idx: HashMap<(usize, usize), usize> = HashMap::new();
    let mut nodes = vec![(a.init, 0usize)];
    idx.insert((a.init, 0), 0);
    let mut adj: Vec<Vec<usize>> = Vec::new();
    let mut i = 0;
    while i < nodes.len() {
        let (q, p) = nodes[i];
        let l = w.letter(p);
        let np = if p + 1 < len { p + 1 } else { w.stem.len() };
        let mut out = Vec::new();
        for t in a.succ(q, l) {
            let key = (t, np);
            let j = *idx.entry(key).or_insert_with(|| {
                nodes.push(key);
                nodes.len() - 1
            });
            out.push(j);
        }
        adj.push(out);
        i += 1;
    }
    let comps = graph::tarjan(&adj);
    comps.iter().any(|c| (c.len() > 1 || adj[c[0]].contains(&c[0])) && c.iter().any(|&x| a.acc[nodes[x].0]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::ltl_to_nba;
    use crate::ltl::Ltl;

    #[test]
    fn emptiness_examples() {
        assert!(is_empty(&ltl_to_nba(&Ltl::False)).is_empty());
        let f = ltl_to_nba(&Ltl::parse("F out").unwrap());
        let w = is_empty(&f).witness().cloned().unwrap();
        assert!(lasso_member(&f, &w).unwrap());
        assert_eq!(w, LassoWord::parse(&["out"], "{out} | {}").unwrap());
        let g = ltl_to_nba(&Ltl::parse("G out & G !out").unwrap());
        assert!(is_empty(&g).is_empty());
    }

    #[test]
    fn membership_examples() {
        let f = ltl_to_nba(&Ltl::parse("F out").unwrap());
        assert!(lasso_member(&f, &LassoWord::parse(&["out"], " | {out}").unwrap()).unwrap());
        assert!(!lasso_member(&f, &LassoWord::parse(&["out"], "{} | {}").unwrap()).unwrap());
        let g = ltl_to_nba(&Ltl::parse("G (in -> X c)").unwrap());
        assert!(lasso_member(&g, &LassoWord::parse(&["c", "in"], "{in} | {c}").unwrap()).unwrap());
        assert!(!lasso_member(&g, &LassoWord::parse(&["c", "in"], "{in} | {}").unwrap()).unwrap());
    }
}
