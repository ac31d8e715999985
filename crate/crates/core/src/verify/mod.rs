//! Independent certification through the automata kernel (never through the synthesis encoding).

mod certify;

pub use certify::*;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::automata::translate::ltl_to_nba_over;
use crate::automata::{exists_project, is_empty, lasso_member, pair_vars, product, Nba};
use crate::composition::ComposedSystem;
use crate::error::{Error, Result};
use crate::infoflow::{build_compatibility_automaton, build_ifa_automaton, negated_ifa};
use crate::ltl::{eval_ltl, Ltl};
use crate::machine::MooreMachine;
use crate::model::{indexed_name, split_indexed, LassoWord, Proc};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Counterexample {
    Trace(LassoWord),
    Pair(LassoWord, LassoWord),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Verdict {
    Holds,
    Violated(Counterexample),
    /// Bounded complementation gave up; nothing was found within the bound.
    Inconclusive(String),
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }

    pub fn counterexample(&self) -> Option<&Counterexample> {
        match self {
            Verdict::Violated(c) => Some(c),
            _ => None,
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Verdict::Holds => "holds".into(),
            Verdict::Violated(Counterexample::Trace(w)) => format!("violated by {w}"),
            Verdict::Violated(Counterexample::Pair(a, b)) => format!("violated by ({a}, {b})"),
            Verdict::Inconclusive(why) => format!("inconclusive: {why}"),
        }
    }
}

/// Traces of `m` over `vars`: machine variables outside `vars` are projected away, variables
/// the machine does not mention are unconstrained.
pub fn machine_nba_over(m: &MooreMachine, vars: &[String]) -> Result<Nba> {
    let keep: BTreeSet<&String> = vars.iter().collect();
    let hidden: BTreeSet<String> = m.vars().into_iter().filter(|v| !keep.contains(v)).collect();
    let a = m.to_nba();
    let a = if hidden.is_empty() { a } else { exists_project(&a, &hidden)? };
    a.with_vars(vars)
}

/// Pairs of traces of `m` over `pair_vars(vars)`.
pub fn self_composition(m: &MooreMachine, vars: &[String]) -> Result<Nba> {
    let a = machine_nba_over(m, vars)?;
    let pv = pair_vars(vars);
    let left = a.renamed(|v| indexed_name(v, 0)).with_vars(&pv)?;
    let right = a.renamed(|v| indexed_name(v, 1)).with_vars(&pv)?;
    product(&left, &right)
}

fn check_atoms(vars: &[String], atoms: impl IntoIterator<Item = String>) -> Result<()> {
    for a in atoms {
        if !vars.contains(&a) {
            return Err(Error::UndeclaredVariable(a));
        }
    }
    Ok(())
}

pub fn model_check(m: &MooreMachine, phi: &Ltl) -> Result<Verdict> {
    let vars = m.vars();
    check_atoms(&vars, phi.atoms())?;
    let neg = ltl_to_nba_over(&Ltl::not(phi.clone()), &vars);
    match is_empty(&product(&m.to_nba(), &neg)?).witness() {
        None => Ok(Verdict::Holds),
        Some(w) => {
            if eval_ltl(w, phi)? {
                return Err(Error::Machine(format!("counterexample {w} does not replay")));
            }
            Ok(Verdict::Violated(Counterexample::Trace(w.clone())))
        }
    }
}

pub fn model_check_system(h: &ComposedSystem, phi: &Ltl) -> Result<Verdict> {
    model_check(&h.machine, phi)
}

fn base_vars(pair: &[String]) -> Result<Vec<String>> {
    let mut out: Vec<String> = Vec::new();
    for v in pair {
        let (b, _) = split_indexed(v).ok_or_else(|| Error::Shape(format!("`{v}` lacks a trace index")))?;
        if !out.iter().any(|x| x == b) {
            out.push(b.to_string());
        }
    }
    Ok(out)
}

/// Whether some pair of traces of `m` is accepted by `negated` (an automaton over pair
/// variables). Witnesses are replayed through `negated`.
pub fn check_pair_violations(m: &MooreMachine, negated: &Nba, incomplete: bool) -> Result<Verdict> {
    let vars = base_vars(&negated.vars)?;
    check_atoms(&m.vars(), vars.iter().cloned())?;
    let sc = self_composition(m, &vars)?;
    let prod = product(&sc, &negated.with_vars(&sc.vars)?)?;
    match is_empty(&prod).witness() {
        Some(w) => {
            if !lasso_member(negated, &w.project(&negated.vars.iter().cloned().collect()).widen(&negated.vars)?)? {
                return Err(Error::Machine(format!("pair counterexample {w} does not replay")));
            }
            let (a, b) = w.unpair()?;
            Ok(Verdict::Violated(Counterexample::Pair(a, b)))
        }
        None if incomplete => Ok(Verdict::Inconclusive("rank bound reached during complementation".into())),
        None => Ok(Verdict::Holds),
    }
}

/// `∀π,π'. body` on the traces of `m`.
pub fn check_2hyper(m: &MooreMachine, body: &Ltl) -> Result<Verdict> {
    let atoms: Vec<String> = body.atoms().into_iter().collect();
    let neg = ltl_to_nba_over(&Ltl::not(body.clone()), &atoms);
    let v = check_pair_violations(m, &neg, false)?;
    if let Some(Counterexample::Pair(a, b)) = v.counterexample() {
        let w = LassoWord::pair(a, b)?;
        if eval_ltl(&w, body)? {
            return Err(Error::Machine(format!("pair counterexample {w} does not replay")));
        }
    }
    Ok(v)
}

/// The information-flow assumption of `p` (derived from `phi`) on the composed system.
pub fn check_ifa(h: &ComposedSystem, phi: &Ltl, p: Proc, max_rank: usize) -> Result<Verdict> {
    let c = build_compatibility_automaton(phi, &h.arch, p)?;
    let neg = negated_ifa(&c, &h.arch, p, max_rank)?;
    let v = check_pair_violations(&h.machine, &neg.nba, neg.incomplete)?;
    if let Some(Counterexample::Pair(a, b)) = v.counterexample() {
        let ifa = build_ifa_automaton(&c, &h.arch, p)?;
        if ifa.accepts(a, b)? {
            return Err(Error::Machine(format!("pair ({a}, {b}) lies in the assumption")));
        }
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::composition::{build_class_decoder, compose_hyper, compose_practical, extract_local_strategy};
    use crate::infoflow::{build_tb_dist_automaton, extract_info_classes, ClassCaps};
    use crate::model::{Architecture, SystemSpec};
    use crate::reference;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    fn psi() -> Ltl {
        Ltl::parse("(in[0] <-> !in[1]) -> F (c[0] <-> !c[1])").unwrap()
    }

    #[test]
    fn model_checking_compositions() {
        let s = SystemSpec::bit_transmission();
        let h = compose_hyper(&reference::sender(), &reference::hyper_receiver(), &s.arch).unwrap();
        assert!(model_check_system(&h, s.phi(Proc::Q)).unwrap().holds());
        assert!(model_check(&h.machine, &Ltl::True).unwrap().holds());
        let mute = MooreMachine::constant(names(&["c"]), names(&["out"]), 0);
        let h = compose_hyper(&reference::sender(), &mute, &s.arch).unwrap();
        match model_check_system(&h, s.phi(Proc::Q)).unwrap() {
            Verdict::Violated(Counterexample::Trace(w)) => {
                let i = w.vars.iter().position(|v| v == "in").unwrap();
                assert_eq!(w.letter(0) >> i & 1, 1, "{w}");
            }
            v => panic!("{}", v.describe()),
        }
        assert!(matches!(model_check(&h.machine, &Ltl::parse("G z").unwrap()), Err(Error::UndeclaredVariable(_))));
    }

    #[test]
    fn hyperproperties_of_senders() {
        assert!(check_2hyper(&reference::sender(), &psi()).unwrap().holds());
        assert!(check_2hyper(&reference::sender(), &Ltl::True).unwrap().holds());
        let constant = MooreMachine::constant(names(&["in"]), names(&["c"]), 1);
        match check_2hyper(&constant, &psi()).unwrap() {
            Verdict::Violated(Counterexample::Pair(a, b)) => {
                let i = a.vars.iter().position(|v| v == "in").unwrap();
                assert_ne!(a.letter(0) >> i & 1, b.letter(0) >> i & 1);
            }
            v => panic!("{}", v.describe()),
        }
    }

    #[test]
    fn information_flow_assumptions() {
        let s = SystemSpec::bit_transmission();
        let h = compose_hyper(&reference::sender(), &reference::hyper_receiver(), &s.arch).unwrap();
        assert!(check_ifa(&h, s.phi(Proc::Q), Proc::Q, 4).unwrap().holds());
        assert!(check_ifa(&h, s.phi(Proc::P), Proc::P, 4).unwrap().holds());
        let constant = MooreMachine::constant(names(&["in"]), names(&["c"]), 1);
        let h = compose_hyper(&constant, &reference::hyper_receiver(), &s.arch).unwrap();
        let v = check_ifa(&h, s.phi(Proc::Q), Proc::Q, 4).unwrap();
        assert!(matches!(v, Verdict::Violated(Counterexample::Pair(..))), "{}", v.describe());
    }

    fn random_machine(rng: &mut ChaCha8Rng, n: usize) -> MooreMachine {
        let labels = (0..n).map(|_| rng.gen_range(0..2)).collect();
        let delta = (0..n).map(|_| (0..2).map(|_| rng.gen_range(0..n)).collect()).collect();
        MooreMachine::new(names(&["in"]), names(&["c"]), 0, labels, delta).unwrap()
    }

    #[test]
    fn hyper_checks_agree_with_pair_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let bodies = [psi(), Ltl::parse("G (c[0] <-> c[1])").unwrap(), Ltl::parse("(in[0] <-> in[1]) W (c[0] <-> !c[1])").unwrap()];
        let words = LassoWord::enumerate(&names(&["in"]), 3, 3);
        for round in 0..30 {
            let m = random_machine(&mut rng, 1 + round % 4);
            for body in &bodies {
                let brute = words.iter().all(|a| {
                    words.iter().all(|b| {
                        let w = LassoWord::pair(&m.trace(a).unwrap(), &m.trace(b).unwrap()).unwrap();
                        eval_ltl(&w, body).unwrap()
                    })
                });
                assert_eq!(check_2hyper(&m, body).unwrap().holds(), brute, "{}\n{body}", m.to_text());
            }
        }
    }

    #[test]
    fn certify_the_running_example() {
        let s = SystemSpec::bit_transmission();
        let l = build_tb_dist_automaton(s.phi(Proc::Q), &s.arch, Proc::Q).unwrap();
        let cs = extract_info_classes(&l, &s.arch.hidden_env(Proc::Q), &ClassCaps::default()).unwrap();
        let d = build_class_decoder(&reference::sender(), &cs, &s.arch, Proc::Q).unwrap();
        let h = compose_practical(&reference::sender(), &reference::class_receiver(), &d, &s.arch).unwrap();
        let bundle = SolutionBundle {
            local_p: extract_local_strategy(&h, Proc::P).unwrap(),
            local_q: extract_local_strategy(&h, Proc::Q).unwrap(),
            composed: h,
        };
        let r = certify_end_to_end(&s, &bundle, &CertifyConfig::default());
        assert!(r.passed(), "{}", r.to_table());
        assert_eq!(r.checks.len(), 7);
        // a receiver ignoring the tokens
        let mute = MooreMachine::constant(names(&["ic0", "ic1"]), names(&["out"]), 0);
        let h = compose_practical(&reference::sender(), &mute, &d, &s.arch).unwrap();
        let bundle = SolutionBundle {
            local_p: extract_local_strategy(&h, Proc::P).unwrap(),
            local_q: extract_local_strategy(&h, Proc::Q).unwrap(),
            composed: h,
        };
        let r = certify_end_to_end(&s, &bundle, &CertifyConfig::default());
        let failed: Vec<&str> = r.failures().map(|c| c.name.as_str()).collect();
        assert_eq!(failed, vec!["model-check", "local-pair"], "{}", r.to_table());
        // vacuous
        let t = SystemSpec::new(Architecture::bit_transmission(), Ltl::True, Ltl::True).unwrap();
        let r = certify_end_to_end(&t, &bundle, &CertifyConfig::default());
        assert!(r.passed(), "{}", r.to_table());
    }
}
