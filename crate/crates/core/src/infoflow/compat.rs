//! Distinguishability and the information flow assumption.

use serde::{Deserialize, Serialize};

use crate::automata::complement::{complement_nba_bounded, Complemented};
use crate::automata::translate::ltl_to_nba_over;
use crate::automata::{exists_project, lasso_member, pair_vars, product, self_compose, union, Nba};
use crate::error::Result;
use crate::ltl::Ltl;
use crate::model::{Architecture, LassoWord, Proc};

use super::{both_copies, differ, pair_word, spec_alphabet, union_vars};

/// Pairs of environment traces that `p` need not distinguish: some output trace satisfies the
/// local specification with both. Distinguishability is the complement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompatibilityAutomaton {
    pub inner: Nba,
    /// `O_e`, sorted; `inner` reads `pair_vars(env)`.
    pub env: Vec<String>,
}

pub fn build_compatibility_automaton(phi: &Ltl, arch: &Architecture, p: Proc) -> Result<CompatibilityAutomaton> {
    let vars = spec_alphabet(phi, arch, p)?;
    let a = ltl_to_nba_over(phi, &vars);
    let outs = arch.plain_outputs(p);
    let b = self_compose(&a, &outs)?;
    let inner = exists_project(&b, &both_copies(&outs))?;
    Ok(CompatibilityAutomaton { inner, env: arch.outputs_e.iter().cloned().collect() })
}

/// Whether `p` must distinguish the two environment traces.
pub fn delta_member(c: &CompatibilityAutomaton, left: &LassoWord, right: &LassoWord) -> Result<bool> {
    Ok(!lasso_member(&c.inner, &pair_word(left, right, &c.env)?)?)
}

/// The information flow assumption of `p` as a pair language over `O_e ∪ I_p`: the traces are
/// compatible or `p`'s inputs differ somewhere.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IfaAutomaton {
    pub inner: Nba,
    /// `O_e ∪ I_p`, sorted.
    pub vars: Vec<String>,
}

impl IfaAutomaton {
    pub fn accepts(&self, left: &LassoWord, right: &LassoWord) -> Result<bool> {
        lasso_member(&self.inner, &pair_word(left, right, &self.vars)?)
    }
}

fn ifa_vars(arch: &Architecture, p: Proc) -> Vec<String> {
    union_vars([&arch.outputs_e, &arch.plain_inputs(p)])
}

pub fn build_ifa_automaton(c: &CompatibilityAutomaton, arch: &Architecture, p: Proc) -> Result<IfaAutomaton> {
    let vars = ifa_vars(arch, p);
    let pv = pair_vars(&vars);
    let d = ltl_to_nba_over(&Ltl::finally(differ(&arch.plain_inputs(p))), &pv);
    let inner = union(&c.inner.with_vars(&pv)?, &d)?;
    Ok(IfaAutomaton { inner, vars })
}

/// Pairs violating the assumption: distinguishable, yet `p`'s inputs agree forever.
pub fn negated_ifa(c: &CompatibilityAutomaton, arch: &Architecture, p: Proc, max_rank: usize) -> Result<Complemented> {
    let vars = ifa_vars(arch, p);
    let pv = pair_vars(&vars);
    let delta = complement_nba_bounded(&c.inner, max_rank)?;
    let same = ltl_to_nba_over(&Ltl::globally(Ltl::not(differ(&arch.plain_inputs(p)))), &pv);
    Ok(Complemented { nba: product(&delta.nba.with_vars(&pv)?, &same)?, incomplete: delta.incomplete })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::is_empty;
    use crate::ltl::eval_ltl;
    use crate::model::SystemSpec;

    fn setup() -> (SystemSpec, CompatibilityAutomaton) {
        let s = SystemSpec::bit_transmission();
        let c = build_compatibility_automaton(s.phi(Proc::Q), &s.arch, Proc::Q).unwrap();
        (s, c)
    }

    fn w(vars: &[&str], t: &str) -> LassoWord {
        LassoWord::parse(vars, t).unwrap()
    }

    #[test]
    fn delta_examples() {
        let (_, c) = setup();
        let e = ["in"];
        assert!(lasso_member(&c.inner, &pair_word(&w(&e, "{in} | {}"), &w(&e, "{in} | {}"), &c.env).unwrap()).unwrap());
        assert!(delta_member(&c, &w(&e, "{in} | {}"), &w(&e, " | {}")).unwrap());
        assert!(!delta_member(&c, &w(&e, "{} {in} | {}"), &w(&e, " | {}")).unwrap());
        let u = w(&e, "{} | {in}");
        assert!(!delta_member(&c, &u, &u).unwrap());
    }

    #[test]
    fn delta_matches_output_enumeration_and_is_symmetric() {
        let (s, c) = setup();
        let phi = s.phi(Proc::Q);
        let env = vec!["in".to_string()];
        let outs = LassoWord::enumerate(&["out".to_string()], 2, 2);
        let words = LassoWord::enumerate(&env, 2, 2);
        for u in &words {
            for v in &words {
                let shared = outs.iter().any(|o| {
                    eval_ltl(&LassoWord::combine(u, o).unwrap(), phi).unwrap()
                        && eval_ltl(&LassoWord::combine(v, o).unwrap(), phi).unwrap()
                });
                let d = delta_member(&c, u, v).unwrap();
                assert_eq!(d, !shared, "{u} / {v}");
                assert_eq!(d, delta_member(&c, v, u).unwrap());
            }
        }
    }

    #[test]
    fn ifa_examples() {
        let (s, c) = setup();
        let arch = &s.arch;
        let e = build_ifa_automaton(&c, arch, Proc::Q).unwrap();
        assert_eq!(e.vars, vec!["c", "in"]);
        let v = ["c", "in"];
        assert!(e.accepts(&w(&v, "{in} | {}"), &w(&v, "{in,c} | {}")).unwrap());
        assert!(!e.accepts(&w(&v, "{in} | {}"), &w(&v, " | {}")).unwrap());
        assert!(e.accepts(&w(&v, "{in} {} {} | {}"), &w(&v, "{} {} {} {c} | {}")).unwrap());
        let neg = negated_ifa(&c, arch, Proc::Q, 4).unwrap();
        assert!(!neg.incomplete);
        assert!(is_empty(&product(&neg.nba, &e.inner).unwrap()).is_empty());
        let words = LassoWord::enumerate(&e.vars, 1, 2);
        for a in &words {
            for b in &words {
                let pw = pair_word(a, b, &e.vars).unwrap();
                let env = c.env.iter().cloned().collect();
                let (x, y) = LassoWord::align(a, b).unwrap();
                let ip_differ = (0..x.len()).any(|i| (x.letter(i) ^ y.letter(i)) & 1 == 1);
                let expect = !delta_member(&c, &a.project(&env), &b.project(&env)).unwrap() || ip_differ;
                assert_eq!(e.accepts(a, b).unwrap(), expect, "{a} / {b}");
                assert_eq!(lasso_member(&neg.nba, &pw).unwrap(), !expect);
            }
        }
    }
}
