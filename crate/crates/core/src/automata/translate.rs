//! LTL to Büchi translation by tableau expansion into transition-based generalized Büchi
//! automata, followed by degeneralization.

use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::ltl::Ltl;

use super::{Cube, Nba};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Node {
    True,
    False,
    Lit(usize, bool),
    And(u32, u32),
    Or(u32, u32),
    Next(u32),
    Until(u32, u32),
    Release(u32, u32),
}

/// Hash-consed negation normal form.
struct Arena {
    nodes: Vec<Node>,
    ids: HashMap<Node, u32>,
}

impl Arena {
    fn new() -> Arena {
        Arena { nodes: Vec::new(), ids: HashMap::new() }
    }

    fn mk(&mut self, n: Node) -> u32 {
        if let Some(&i) = self.ids.get(&n) {
            return i;
        }
        let i = self.nodes.len() as u32;
        self.nodes.push(n.clone());
        self.ids.insert(n, i);
        i
    }

    fn nnf(&mut self, f: &Ltl, neg: bool, vars: &[String]) -> u32 {
        use Ltl::*;
        match (f, neg) {
            (True, false) | (False, true) => self.mk(Node::True),
            (True, true) | (False, false) => self.mk(Node::False),
            (Atom(a), _) => {
                let name = a.full_name();
                let i = vars.iter().position(|v| *v == name).expect("atom in alphabet");
                self.mk(Node::Lit(i, !neg))
            }
            (Not(a), _) => self.nnf(a, !neg, vars),
            (And(a, b), false) | (Or(a, b), true) => {
                let (x, y) = (self.nnf(a, neg, vars), self.nnf(b, neg, vars));
                self.and(x, y)
            }
            (Or(a, b), false) | (And(a, b), true) => {
                let (x, y) = (self.nnf(a, neg, vars), self.nnf(b, neg, vars));
                self.or(x, y)
            }
            (Implies(a, b), false) => {
                let (x, y) = (self.nnf(a, true, vars), self.nnf(b, false, vars));
                self.or(x, y)
            }
            (Implies(a, b), true) => {
                let (x, y) = (self.nnf(a, false, vars), self.nnf(b, true, vars));
                self.and(x, y)
            }
            (Iff(a, b), _) => {
                // (a ∧ b) ∨ (¬a ∧ ¬b), or its negation (a ∧ ¬b) ∨ (¬a ∧ b)
                let pa = self.nnf(a, false, vars);
                let na = self.nnf(a, true, vars);
                let pb = self.nnf(b, false, vars);
                let nb = self.nnf(b, true, vars);
                let (l, r) = if neg { (self.and(pa, nb), self.and(na, pb)) } else { (self.and(pa, pb), self.and(na, nb)) };
                self.or(l, r)
            }
            (Next(a), _) => {
                let x = self.nnf(a, neg, vars);
                self.mk(Node::Next(x))
            }
            (Until(a, b), false) | (Release(a, b), true) => {
                let (x, y) = (self.nnf(a, neg, vars), self.nnf(b, neg, vars));
                self.until(x, y)
            }
            (Release(a, b), false) | (Until(a, b), true) => {
                let (x, y) = (self.nnf(a, neg, vars), self.nnf(b, neg, vars));
                self.release(x, y)
            }
            (Finally(a), false) | (Globally(a), true) => {
                let t = self.mk(Node::True);
                let x = self.nnf(a, neg, vars);
                self.until(t, x)
            }
            (Globally(a), false) | (Finally(a), true) => {
                let fl = self.mk(Node::False);
                let x = self.nnf(a, neg, vars);
                self.release(fl, x)
            }
        }
    }

    fn and(&mut self, x: u32, y: u32) -> u32 {
        match (&self.nodes[x as usize], &self.nodes[y as usize]) {
            (Node::False, _) | (_, Node::False) => self.mk(Node::False),
            (Node::True, _) => y,
            (_, Node::True) => x,
            _ if x == y => x,
            _ => self.mk(Node::And(x.min(y), x.max(y))),
        }
    }

    fn or(&mut self, x: u32, y: u32) -> u32 {
        match (&self.nodes[x as usize], &self.nodes[y as usize]) {
            (Node::True, _) | (_, Node::True) => self.mk(Node::True),
            (Node::False, _) => y,
            (_, Node::False) => x,
            _ if x == y => x,
            _ => self.mk(Node::Or(x.min(y), x.max(y))),
        }
    }

    fn until(&mut self, x: u32, y: u32) -> u32 {
        match &self.nodes[y as usize] {
            Node::True | Node::False => y,
            _ => self.mk(Node::Until(x, y)),
        }
    }

    fn release(&mut self, x: u32, y: u32) -> u32 {
        match &self.nodes[y as usize] {
            Node::True | Node::False => y,
            _ => self.mk(Node::Release(x, y)),
        }
    }
}

/// One disjunct of an expansion: a letter constraint, the obligations for the next position and
/// the until-formulas postponed by this step.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Term {
    cube: Cube,
    next: BTreeSet<u32>,
    postponed: BTreeSet<u32>,
}

fn conj(a: &[Term], b: &[Term]) -> Vec<Term> {
    let mut out = Vec::new();
    for x in a {
        for y in b {
            if let Some(cube) = x.cube.and(&y.cube) {
                out.push(Term {
                    cube,
                    next: x.next.union(&y.next).copied().collect(),
                    postponed: x.postponed.union(&y.postponed).copied().collect(),
                });
            }
        }
    }
    out
}

fn prune(mut terms: Vec<Term>) -> Vec<Term> {
    terms.sort();
    terms.dedup();
    // Drop terms dominated by another (weaker letter constraint, fewer obligations, fewer postponements).
    let keep: Vec<bool> = (0..terms.len())
        .map(|i| {
            !(0..terms.len()).any(|j| {
                j != i
                    && terms[i].cube.implies(&terms[j].cube)
                    && terms[j].next.is_subset(&terms[i].next)
                    && terms[j].postponed.is_subset(&terms[i].postponed)
            })
        })
        .collect();
    terms.into_iter().zip(keep).filter(|(_, k)| *k).map(|(t, _)| t).collect()
}

struct Expander<'a> {
    arena: &'a Arena,
    memo: HashMap<u32, Vec<Term>>,
}

impl Expander<'_> {
    fn expand(&mut self, f: u32) -> Vec<Term> {
        if let Some(t) = self.memo.get(&f) {
            return t.clone();
        }
        let top = |next: BTreeSet<u32>, postponed: BTreeSet<u32>| Term { cube: Cube::TOP, next, postponed };
        let res = match self.arena.nodes[f as usize].clone() {
            Node::True => vec![top(BTreeSet::new(), BTreeSet::new())],
            Node::False => vec![],
            Node::Lit(i, pos) => vec![Term { cube: Cube::lit(i, pos), next: BTreeSet::new(), postponed: BTreeSet::new() }],
            Node::And(a, b) => {
                let (x, y) = (self.expand(a), self.expand(b));
                conj(&x, &y)
            }
            Node::Or(a, b) => {
                let mut x = self.expand(a);
                x.extend(self.expand(b));
                x
            }
            Node::Next(a) => vec![top([a].into(), BTreeSet::new())],
            Node::Until(a, b) => {
                let mut x = self.expand(b);
                let wait = conj(&self.expand(a), &[top([f].into(), [f].into())]);
                x.extend(wait);
                x
            }
            Node::Release(a, b) => {
                let eb = self.expand(b);
                let mut alt = self.expand(a);
                alt.push(top([f].into(), BTreeSet::new()));
                conj(&eb, &alt)
            }
        };
        let res = prune(res);
        self.memo.insert(f, res.clone());
        res
    }

    fn expand_set(&mut self, s: &BTreeSet<u32>) -> Vec<Term> {
        let mut acc = vec![Term { cube: Cube::TOP, next: BTreeSet::new(), postponed: BTreeSet::new() }];
        for &f in s {
            let e = self.expand(f);
            acc = prune(conj(&acc, &e));
            if acc.is_empty() {
                break;
            }
        }
        acc
    }
}

/// Translates `phi` into a Büchi automaton over `vars` (which must contain every atom of `phi`).
pub fn ltl_to_nba_over(phi: &Ltl, vars: &[String]) -> Nba {
    let mut arena = Arena::new();
    let root = arena.nnf(&phi.simplify(), false, vars);
    let untils: Vec<u32> =
        (0..arena.nodes.len() as u32).filter(|&i| matches!(arena.nodes[i as usize], Node::Until(..))).collect();
    let n_acc = untils.len();
    let mut ex = Expander { arena: &arena, memo: HashMap::new() };

    // Generalized automaton over formula sets.
    let mut states: Vec<BTreeSet<u32>> = Vec::new();
    let mut index: HashMap<BTreeSet<u32>, usize> = HashMap::new();
    let mut gtrans: Vec<Vec<(Cube, usize, Vec<bool>)>> = Vec::new();
    let init: BTreeSet<u32> = [root].into();
    states.push(init.clone());
    index.insert(init, 0);
    let mut queue = VecDeque::from([0usize]);
    while let Some(s) = queue.pop_front() {
        let terms = ex.expand_set(&states[s].clone());
        let mut out = Vec::new();
        for t in terms {
            let target = match index.get(&t.next) {
                Some(&i) => i,
                None => {
                    let i = states.len();
                    states.push(t.next.clone());
                    index.insert(t.next.clone(), i);
                    queue.push_back(i);
                    i
                }
            };
            let accs = untils.iter().map(|u| !t.postponed.contains(u)).collect();
            out.push((t.cube, target, accs));
        }
        if gtrans.len() <= s {
            gtrans.resize(s + 1, Vec::new());
        }
        gtrans[s] = out;
    }
    gtrans.resize(states.len(), Vec::new());

    // Degeneralize: states (s, k) with k in 0..=n_acc, accepting when k == n_acc.
    let mut didx: HashMap<(usize, usize), usize> = HashMap::new();
    let mut dstates: Vec<(usize, usize)> = vec![(0, 0)];
    didx.insert((0, 0), 0);
    let mut trans: Vec<Vec<(Cube, usize)>> = Vec::new();
    let mut i = 0;
    while i < dstates.len() {
        let (s, k) = dstates[i];
        let mut es = Vec::new();
        for (cube, t, accs) in &gtrans[s] {
            let mut j = if k == n_acc { 0 } else { k };
            while j < n_acc && accs[j] {
                j += 1;
            }
            let key = (*t, j);
            let d = *didx.entry(key).or_insert_with(|| {
                dstates.push(key);
                dstates.len() - 1
            });
            es.push((*cube, d));
        }
        trans.push(es);
        i += 1;
    }
    let acc = dstates.iter().map(|&(_, k)| k == n_acc).collect();
    Nba { vars: vars.to_vec(), init: 0, trans, acc }.trim()
}

/// Translates `phi` into a Büchi automaton over its own atoms (sorted).
pub fn ltl_to_nba(phi: &Ltl) -> Nba {
    let vars: Vec<String> = phi.atoms().into_iter().collect();
    ltl_to_nba_over(phi, &vars)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::lasso_member;
    use crate::ltl::eval_ltl;
    use crate::model::LassoWord;

    fn agree(s: &str) {
        let phi = Ltl::parse(s).unwrap();
        let vars: Vec<String> = phi.atoms().into_iter().collect();
        let a = ltl_to_nba_over(&phi, &vars);
        for w in LassoWord::enumerate(&vars, 2, 2) {
            assert_eq!(lasso_member(&a, &w).unwrap(), eval_ltl(&w, &phi).unwrap(), "{s} on {w}");
        }
    }

    #[test]
    fn small_formulas_agree_with_semantics() {
        for s in [
            "F out",
            "G !out",
            "in <-> F out",
            "G (in -> X c)",
            "G F a & F G !b",
            "a U (b R a)",
            "!(a U b) | X X a",
            "false",
            "true",
            "G (a -> F b)",
        ] {
            agree(s);
        }
    }

    #[test]
    fn sizes() {
        let f = ltl_to_nba(&Ltl::parse("F out").unwrap());
        assert_eq!(f.num_states(), 2);
        let g = ltl_to_nba(&Ltl::parse("G !out").unwrap());
        assert_eq!(g.num_states(), 1);
        let e = ltl_to_nba(&Ltl::False);
        assert!(e.acc.iter().all(|a| !a) || e.num_edges() == 0);
    }
}
