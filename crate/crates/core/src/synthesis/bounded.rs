//! Bounded synthesis of Moore machines.
//!
//! Each objective is given by a Büchi automaton for its violations, read as a universal co-Büchi
//! automaton for the objective. A machine with `n` states is encoded by one-hot transitions and
//! output bits; the run graph of the automaton over the machine (or over two copies of it, for
//! ∀∀ objectives) is annotated with reachability flags and binary ranks that must increase
//! strictly on every visit of an accepting state, which rules out accepting cycles.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::automata::translate::ltl_to_nba_over;
use crate::automata::{exists_project, Nba};
use crate::error::{Error, Result};
use crate::ltl::Ltl;
use crate::machine::MooreMachine;
use crate::model::split_indexed;

use super::cnf::{CnfInstance, Lit};
use super::solver::{solve_cnf, Backend};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Objective {
    /// Violations of a trace property. Variables that are neither inputs nor outputs of the
    /// machine are unobserved and quantified universally.
    Trace(Nba),
    /// Violations of a ∀∀ body over `x[0]`, `x[1]`.
    Hyper(Nba),
}

impl Objective {
    pub fn ltl(phi: &Ltl) -> Objective {
        let vars: Vec<String> = phi.atoms().into_iter().collect();
        Objective::Trace(ltl_to_nba_over(&Ltl::not(phi.clone()), &vars))
    }

    pub fn hyper(body: &Ltl) -> Objective {
        let vars: Vec<String> = body.atoms().into_iter().collect();
        Objective::Hyper(ltl_to_nba_over(&Ltl::not(body.clone()), &vars))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthesisProblem {
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    pub objectives: Vec<Objective>,
    pub bound_max: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum SynthesisOutcome {
    Realized(MooreMachine),
    /// No machine with at most this many states exists.
    UnrealizableAtBound(usize),
}

impl SynthesisOutcome {
    pub fn machine(&self) -> Option<&MooreMachine> {
        match self {
            SynthesisOutcome::Realized(m) => Some(m),
            SynthesisOutcome::UnrealizableAtBound(_) => None,
        }
    }
}

#[derive(Clone, Copy, Debug)]
enum Role {
    Input(usize),
    Output(usize),
}

/// Per-copy literal requirements of an edge: input masks checked statically, output masks
/// turned into clause literals.
#[derive(Clone, Copy, Debug, Default)]
struct Guard {
    in_pos: u64,
    in_neg: u64,
    out_pos: u64,
    out_neg: u64,
}

struct Prepared {
    copies: usize,
    init: usize,
    acc: Vec<bool>,
    /// `edges[q]` = (guard per copy, target)
    edges: Vec<Vec<(Vec<Guard>, usize)>>,
}

fn prepare(obj: &Objective, inputs: &[String], outputs: &[String]) -> Result<Prepared> {
    let (nba, copies) = match obj {
        Objective::Trace(a) => (a, 1),
        Objective::Hyper(a) => (a, 2),
    };
    let role_of = |v: &str| -> Option<Role> {
        inputs.iter().position(|x| x == v).map(Role::Input).or_else(|| outputs.iter().position(|x| x == v).map(Role::Output))
    };
    let mut hidden = BTreeSet::new();
    for v in &nba.vars {
        let base = if copies == 2 {
            split_indexed(v).ok_or_else(|| Error::Shape(format!("`{v}` in a ∀∀ objective lacks a trace index")))?.0
        } else {
            v.as_str()
        };
        if role_of(base).is_none() {
            hidden.insert(v.clone());
        }
    }
    let a = if hidden.is_empty() { nba.trim() } else { exists_project(nba, &hidden)? };
    let roles: Vec<(usize, Role)> = a
        .vars
        .iter()
        .map(|v| match split_indexed(v).filter(|_| copies == 2) {
            Some((b, i)) => (i as usize, role_of(b).unwrap()),
            None => (0, role_of(v).unwrap()),
        })
        .collect();
    let edges = a
        .trans
        .iter()
        .map(|es| {
            es.iter()
                .map(|(c, t)| {
                    let mut g = vec![Guard::default(); copies];
                    for (bit, &(copy, role)) in roles.iter().enumerate() {
                        let (p, n) = (c.pos >> bit & 1 == 1, c.neg >> bit & 1 == 1);
                        let gd = &mut g[copy];
                        match role {
                            Role::Input(i) => {
                                gd.in_pos |= u64::from(p) << i;
                                gd.in_neg |= u64::from(n) << i;
                            }
                            Role::Output(j) => {
                                gd.out_pos |= u64::from(p) << j;
                                gd.out_neg |= u64::from(n) << j;
                            }
                        }
                    }
                    (g, *t)
                })
                .collect()
        })
        .collect();
    Ok(Prepared { copies, init: a.init, acc: a.acc.clone(), edges })
}

/// Variables of the machine skeleton.
pub struct Skeleton {
    pub states: usize,
    /// `trans[s][l][t]`
    pub trans: Vec<Vec<Vec<Lit>>>,
    /// `label[s][j]`
    pub label: Vec<Vec<Lit>>,
}

pub fn encode(problem: &SynthesisProblem, n: usize) -> Result<(CnfInstance, Skeleton)> {
    let k = problem.inputs.len();
    let m = problem.outputs.len();
    let nl = 1usize << k;
    let mut f = CnfInstance::new();
    let trans: Vec<Vec<Vec<Lit>>> = (0..n).map(|_| (0..nl).map(|_| f.fresh_vec(n)).collect()).collect();
    for row in &trans {
        for choice in row {
            f.exactly_one(choice);
        }
    }
    let label: Vec<Vec<Lit>> = (0..n).map(|_| f.fresh_vec(m)).collect();
    for obj in &problem.objectives {
        let p = prepare(obj, &problem.inputs, &problem.outputs)?;
        encode_objective(&mut f, &p, &trans, &label, n, k);
    }
    Ok((f, Skeleton { states: n, trans, label }))
}

fn encode_objective(f: &mut CnfInstance, p: &Prepared, trans: &[Vec<Vec<Lit>>], label: &[Vec<Lit>], n: usize, k: usize) {
    let c = p.copies;
    let nq = p.acc.len();
    let nodes = nq * n.pow(c as u32);
    let bits = (usize::BITS - nodes.leading_zeros()) as usize;
    let mut flag: HashMap<(usize, Vec<usize>), Lit> = HashMap::new();
    let mut rank: HashMap<(usize, Vec<usize>), Vec<Lit>> = HashMap::new();
    let mut cmp: HashMap<((usize, Vec<usize>), (usize, Vec<usize>)), Lit> = HashMap::new();
    let mut node = |f: &mut CnfInstance, key: (usize, Vec<usize>)| -> (Lit, Vec<Lit>) {
        let b = *flag.entry(key.clone()).or_insert_with(|| f.fresh());
        let r = rank.entry(key).or_insert_with(|| f.fresh_vec(bits)).clone();
        (b, r)
    };
    let (b0, _) = node(f, (p.init, vec![0; c]));
    f.add(vec![b0]);
    let tuples = |base: usize| -> Vec<Vec<usize>> {
        let mut out = vec![vec![]];
        for _ in 0..c {
            out = out.into_iter().flat_map(|t: Vec<usize>| (0..base).map(move |x| [t.clone(), vec![x]].concat())).collect();
        }
        out
    };
    let states = tuples(n);
    let letters = tuples(1 << k);
    for q in 0..nq {
        for ss in &states {
            let (b, r) = node(f, (q, ss.clone()));
            for ls in &letters {
                for (guards, t) in &p.edges[q] {
                    let ok = guards.iter().zip(ls).all(|(g, &l)| l as u64 & g.in_pos == g.in_pos && l as u64 & g.in_neg == 0);
                    if !ok {
                        continue;
                    }
                    let mut base = vec![-b];
                    for (i, g) in guards.iter().enumerate() {
                        for (j, &lit) in label[ss[i]].iter().enumerate() {
                            if g.out_pos >> j & 1 == 1 {
                                base.push(-lit);
                            }
                            if g.out_neg >> j & 1 == 1 {
                                base.push(lit);
                            }
                        }
                    }
                    for ts in &states {
                        let mut cl = base.clone();
                        for i in 0..c {
                            cl.push(-trans[ss[i]][ls[i]][ts[i]]);
                        }
                        let (b2, r2) = node(f, (*t, ts.clone()));
                        let key = ((q, ss.clone()), (*t, ts.clone()));
                        let strict = p.acc[*t];
                        let g = match cmp.get(&key) {
                            Some(&g) => g,
                            None => {
                                let g = f.compare(&r2, &r, strict);
                                cmp.insert(key, g);
                                g
                            }
                        };
                        let mut c1 = cl.clone();
                        c1.push(b2);
                        f.add(c1);
                        cl.push(g);
                        f.add(cl);
                    }
                }
            }
        }
    }
}

fn decode(problem: &SynthesisProblem, sk: &Skeleton, model: &[bool]) -> Result<MooreMachine> {
    let val = |l: Lit| model[l as usize];
    let labels = sk.label.iter().map(|ls| ls.iter().enumerate().fold(0u64, |a, (j, &l)| a | (u64::from(val(l)) << j))).collect();
    let delta = sk.trans.iter().map(|row| row.iter().map(|ch| ch.iter().position(|&l| val(l)).unwrap()).collect()).collect();
    Ok(MooreMachine::new(problem.inputs.clone(), problem.outputs.clone(), 0, labels, delta)?.canonical())
}

/// A machine with exactly `n` states (before pruning unreachable ones), if one exists.
pub fn synthesize_at(problem: &SynthesisProblem, n: usize, backend: &Backend) -> Result<Option<MooreMachine>> {
    let (f, sk) = encode(problem, n)?;
    log::debug!("bound {n}: {} variables, {} clauses", f.num_vars, f.clauses.len());
    match solve_cnf(&f, backend)? {
        Some(model) => Ok(Some(decode(problem, &sk, &model)?)),
        None => Ok(None),
    }
}

/// Tries bounds `1..=bound_max` in order.
pub fn bounded_synthesize(problem: &SynthesisProblem, backend: &Backend) -> Result<SynthesisOutcome> {
    if problem.bound_max == 0 {
        return Err(Error::Shape("bound must be at least 1".into()));
    }
    for n in 1..=problem.bound_max {
        if let Some(m) = synthesize_at(problem, n, backend)? {
            return Ok(SynthesisOutcome::Realized(m));
        }
    }
    Ok(SynthesisOutcome::UnrealizableAtBound(problem.bound_max))
}

pub fn bounded_synthesize_ltl(phi: &Ltl, inputs: &[String], outputs: &[String], bound: usize, backend: &Backend) -> Result<SynthesisOutcome> {
    let problem = SynthesisProblem {
        inputs: inputs.to_vec(),
        outputs: outputs.to_vec(),
        objectives: vec![Objective::ltl(phi)],
        bound_max: bound,
    };
    bounded_synthesize(&problem, backend)
}

/// Trace conjuncts and ∀∀ bodies together.
pub fn bounded_synthesize_hyper2(
    trace: &[Ltl],
    bodies: &[Ltl],
    inputs: &[String],
    outputs: &[String],
    bound: usize,
    backend: &Backend,
) -> Result<SynthesisOutcome> {
    let mut objectives: Vec<Objective> = trace.iter().map(Objective::ltl).collect();
    objectives.extend(bodies.iter().map(Objective::hyper));
    let problem = SynthesisProblem { inputs: inputs.to_vec(), outputs: outputs.to_vec(), objectives, bound_max: bound };
    bounded_synthesize(&problem, backend)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::infoflow::{build_component_spec, build_tb_dist_automaton, extract_info_classes, negated_tb_ifa, ClassCaps};
    use crate::model::{Proc, SystemSpec};
    use crate::reference;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn constant_output_at_bound_one() {
        let phi = Ltl::parse("G out").unwrap();
        let r = bounded_synthesize_ltl(&phi, &[], &names(&["out"]), 1, &Backend::Embedded).unwrap();
        let m = r.machine().unwrap();
        assert_eq!(m.num_states(), 1);
        assert_eq!(m.labels, vec![1]);
        let r = bounded_synthesize_ltl(&Ltl::parse("G out & F !out").unwrap(), &[], &names(&["out"]), 2, &Backend::Embedded).unwrap();
        assert_eq!(r, SynthesisOutcome::UnrealizableAtBound(2));
    }

    #[test]
    fn moore_semantics_needs_a_delay() {
        // out must copy the current input: impossible for a Moore machine
        let phi = Ltl::parse("G (in <-> out)").unwrap();
        let r = bounded_synthesize_ltl(&phi, &names(&["in"]), &names(&["out"]), 3, &Backend::Embedded).unwrap();
        assert!(r.machine().is_none());
        let phi = Ltl::parse("G (in <-> X out)").unwrap();
        let r = bounded_synthesize_ltl(&phi, &names(&["in"]), &names(&["out"]), 3, &Backend::Embedded).unwrap();
        assert_eq!(r.machine().unwrap().num_states(), 2);
    }

    #[test]
    fn bit_transmission_receiver() {
        let s = SystemSpec::bit_transmission();
        let l = build_tb_dist_automaton(s.phi(Proc::Q), &s.arch, Proc::Q).unwrap();
        let cs = extract_info_classes(&l, &s.arch.hidden_env(Proc::Q), &ClassCaps::default()).unwrap();
        let cspec = build_component_spec(s.phi(Proc::Q), &cs, &s.arch, Proc::Q).unwrap();
        let problem = SynthesisProblem {
            inputs: cspec.inputs.clone(),
            outputs: cspec.outputs.clone(),
            objectives: vec![Objective::Trace(cspec.negated.clone())],
            bound_max: 1,
        };
        assert_eq!(bounded_synthesize(&problem, &Backend::Embedded).unwrap(), SynthesisOutcome::UnrealizableAtBound(1));
        let problem = SynthesisProblem { bound_max: 3, ..problem };
        let m = bounded_synthesize(&problem, &Backend::Embedded).unwrap().machine().unwrap().clone();
        // equal on every token sequence the assumption admits
        let assumption = ltl_to_nba_over(&cspec.assumption, &cspec.inputs);
        assert_eq!(m.difference_under(&reference::class_receiver(), &assumption).unwrap(), None, "{}", m.to_text());
    }

    #[test]
    fn bit_transmission_sender() {
        let s = SystemSpec::bit_transmission();
        let l = build_tb_dist_automaton(s.phi(Proc::Q), &s.arch, Proc::Q).unwrap();
        let chi = negated_tb_ifa(&l, &s.arch, Proc::Q, 4).unwrap();
        assert!(!chi.incomplete);
        let problem = SynthesisProblem {
            inputs: names(&["in"]),
            outputs: names(&["c", &s.arch.t_var(Proc::Q)]),
            objectives: vec![Objective::Hyper(chi.nba)],
            bound_max: 3,
        };
        // Several senders meet the objective; the smallest one keeps watching `in` after the
        // first step, which the partner's classes never look at.
        let m = bounded_synthesize(&problem, &Backend::Embedded).unwrap().machine().unwrap().clone();
        assert_eq!(m.num_states(), 2);
        assert!(m.difference(&reference::sender()).unwrap().is_some());
    }

    #[test]
    fn hyper_equality_and_missing_channel() {
        let body = Ltl::parse("G (c[0] <-> c[1])").unwrap();
        let r = bounded_synthesize_hyper2(&[], &[body], &names(&["in"]), &names(&["c"]), 1, &Backend::Embedded).unwrap();
        assert_eq!(r.machine().unwrap().num_states(), 1);
        let psi = Ltl::parse("(in[0] <-> !in[1]) -> F (c[0] <-> !c[1])").unwrap();
        let r = bounded_synthesize_hyper2(&[], &[psi.clone()], &names(&["in"]), &names(&["c"]), 3, &Backend::Embedded).unwrap();
        assert!(r.machine().is_some());
        let r = bounded_synthesize_hyper2(&[], &[psi], &names(&["in"]), &names(&["d"]), 4, &Backend::Embedded).unwrap();
        assert_eq!(r, SynthesisOutcome::UnrealizableAtBound(4));
    }
}
