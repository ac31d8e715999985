//! Time-bounded distinguishability and the time-bounded information flow assumption.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::automata::complement::{complement_nba_bounded, Complemented};
use crate::automata::translate::ltl_to_nba_over;
use crate::automata::{exists_project, lasso_member, pair_product, pair_vars, product, safety_closure, union, Nba, Uca};
use crate::error::Result;
use crate::ltl::Ltl;
use crate::model::{Architecture, LassoWord, Proc};

use super::{both_copies, differ, pair_word, spec_alphabet, union_vars};

/// Universal co-Büchi automaton for `Λ_p`: `(π, π')` is in `Λ_p` iff every output trace that
/// satisfies the specification with `π` finitely violates it with `π'`.
///
/// `not_lambda` is the underlying Büchi automaton for the complement: some output trace
/// satisfies the specification with `π` and has no bad prefix with `π'`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TbDistAutomaton {
    pub inner: Uca,
    pub env: Vec<String>,
}

impl TbDistAutomaton {
    pub fn not_lambda(&self) -> &Nba {
        &self.inner.structure
    }

    /// Explicit Büchi automaton for `Λ_p` (exact when the complement is weak).
    pub fn lambda_nba(&self, max_rank: usize) -> Result<Complemented> {
        complement_nba_bounded(self.not_lambda(), max_rank)
    }
}

pub fn build_tb_dist_automaton(phi: &Ltl, arch: &Architecture, p: Proc) -> Result<TbDistAutomaton> {
    let vars = spec_alphabet(phi, arch, p)?;
    let a = ltl_to_nba_over(phi, &vars).trim();
    let outs = arch.plain_outputs(p);
    let n = exists_project(&pair_product(&a, &safety_closure(&a), &outs)?, &both_copies(&outs))?;
    Ok(TbDistAutomaton { inner: Uca::dual_of(n), env: arch.outputs_e.iter().cloned().collect() })
}

pub fn lambda_member(l: &TbDistAutomaton, left: &LassoWord, right: &LassoWord) -> Result<bool> {
    Ok(!lasso_member(l.not_lambda(), &pair_word(left, right, &l.env)?)?)
}

/// `χ_p` with the marker encoding: the pair is outside `Λ_p`, or the marker occurs on the left
/// trace and `p`'s inputs differ no later than its first occurrence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TbIfaAutomaton {
    pub inner: Nba,
    /// `O_e ∪ I_p ∪ {t}`, sorted.
    pub vars: Vec<String>,
    pub marker: String,
}

impl TbIfaAutomaton {
    pub fn accepts(&self, left: &LassoWord, right: &LassoWord) -> Result<bool> {
        lasso_member(&self.inner, &pair_word(left, right, &self.vars)?)
    }
}

fn chi_vars(arch: &Architecture, p: Proc) -> (Vec<String>, String) {
    let t = arch.t_var(p);
    let tset: BTreeSet<String> = [t.clone()].into();
    (union_vars([&arch.outputs_e, &arch.plain_inputs(p), &tset]), t)
}

pub fn build_tb_ifa_automaton(l: &TbDistAutomaton, arch: &Architecture, p: Proc) -> Result<TbIfaAutomaton> {
    let (vars, marker) = chi_vars(arch, p);
    let pv = pair_vars(&vars);
    let t0 = Ltl::atom_at(&marker, 0);
    let h = Ltl::and(
        Ltl::finally(t0.clone()),
        Ltl::until(Ltl::not(t0), differ(&arch.plain_inputs(p))),
    );
    let inner = union(&l.not_lambda().with_vars(&pv)?, &ltl_to_nba_over(&h, &pv))?;
    Ok(TbIfaAutomaton { inner, vars, marker })
}

/// Pairs violating `χ_p`: in `Λ_p`, and the left marker never occurs or the inputs agree up to
/// and including its first occurrence.
pub fn negated_tb_ifa(l: &TbDistAutomaton, arch: &Architecture, p: Proc, max_rank: usize) -> Result<Complemented> {
    let (vars, marker) = chi_vars(arch, p);
    let pv = pair_vars(&vars);
    let lam = l.lambda_nba(max_rank)?;
    let t0 = Ltl::atom_at(&marker, 0);
    let late = Ltl::or(
        Ltl::globally(Ltl::not(t0.clone())),
        Ltl::release(t0, Ltl::not(differ(&arch.plain_inputs(p)))),
    );
    let nba = product(&lam.nba.with_vars(&pv)?, &ltl_to_nba_over(&late, &pv))?;
    Ok(Complemented { nba, incomplete: lam.incomplete })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::finite::finite_violation_nba_over;
    use crate::automata::is_empty;
    use crate::infoflow::{build_compatibility_automaton, delta_member};
    use crate::ltl::eval_ltl;
    use crate::model::SystemSpec;

    fn w(vars: &[&str], t: &str) -> LassoWord {
        LassoWord::parse(vars, t).unwrap()
    }

    fn setup() -> (SystemSpec, TbDistAutomaton) {
        let s = SystemSpec::bit_transmission();
        let l = build_tb_dist_automaton(s.phi(Proc::Q), &s.arch, Proc::Q).unwrap();
        (s, l)
    }

    #[test]
    fn lambda_examples() {
        let (_, l) = setup();
        let e = ["in"];
        assert!(lambda_member(&l, &w(&e, "{in} | {}"), &w(&e, " | {}")).unwrap());
        assert!(!lambda_member(&l, &w(&e, " | {}"), &w(&e, "{in} | {}")).unwrap());
        for u in LassoWord::enumerate(&l.env, 2, 2) {
            assert!(!lambda_member(&l, &u, &u).unwrap());
        }
    }

    #[test]
    fn lambda_matches_output_enumeration_and_refines_delta() {
        let (s, l) = setup();
        let phi = s.phi(Proc::Q);
        let vars = vec!["in".to_string(), "out".to_string()];
        let viol = finite_violation_nba_over(phi, &vars).unwrap();
        let c = build_compatibility_automaton(phi, &s.arch, Proc::Q).unwrap();
        let outs = LassoWord::enumerate(&["out".to_string()], 3, 2);
        let words = LassoWord::enumerate(&l.env, 2, 2);
        let lam = l.lambda_nba(4).unwrap();
        assert!(!lam.incomplete);
        for u in &words {
            for v in &words {
                let oracle = outs.iter().all(|o| {
                    !eval_ltl(&LassoWord::combine(u, o).unwrap(), phi).unwrap()
                        || lasso_member(&viol, &LassoWord::combine(v, o).unwrap()).unwrap()
                });
                let m = lambda_member(&l, u, v).unwrap();
                assert_eq!(m, oracle, "{u} / {v}");
                assert_eq!(lasso_member(&lam.nba, &pair_word(u, v, &l.env).unwrap()).unwrap(), m);
                if m {
                    assert!(delta_member(&c, u, v).unwrap());
                }
            }
        }
    }

    #[test]
    fn chi_examples() {
        let (s, l) = setup();
        let x = build_tb_ifa_automaton(&l, &s.arch, Proc::Q).unwrap();
        let t = x.marker.clone();
        let v: Vec<&str> = x.vars.iter().map(|s| s.as_str()).collect();
        assert_eq!(x.vars, vec!["c", "in", t.as_str()]);
        // Outside Λ: accepted whatever the marker does.
        assert!(x.accepts(&w(&v, " | {}"), &w(&v, "{in} | {}")).unwrap());
        let left = w(&v, &format!("{{in}} {{}} {{{t}}} | {{}}"));
        assert!(x.accepts(&left, &w(&v, "{} {c} | {}")).unwrap());
        let early = w(&v, &format!("{{in}} {{{t}}} | {{}}"));
        assert!(!x.accepts(&early, &w(&v, "{} {} {c} | {}")).unwrap());
        assert!(!x.accepts(&w(&v, "{in} | {}"), &w(&v, "{c} | {}")).unwrap());
        let neg = negated_tb_ifa(&l, &s.arch, Proc::Q, 4).unwrap();
        assert!(!neg.incomplete);
        assert!(is_empty(&product(&neg.nba, &x.inner).unwrap()).is_empty());
        for a in LassoWord::enumerate(&x.vars, 1, 1) {
            for b in LassoWord::enumerate(&x.vars, 1, 1) {
                let pw = pair_word(&a, &b, &x.vars).unwrap();
                assert_ne!(x.accepts(&a, &b).unwrap(), lasso_member(&neg.nba, &pw).unwrap(), "{a} / {b}");
            }
        }
    }
}
