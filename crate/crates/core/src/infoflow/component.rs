//! Relativized and component specifications.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::automata::translate::ltl_to_nba_over;
use crate::automata::{exists_project, product, union, Nba};
use crate::error::{Error, Result};
use crate::ltl::Ltl;
use crate::model::{Architecture, Letter, Proc};

use super::{spec_alphabet, union_vars, InfoClass};

/// The specification a process must meet knowing only the class: over `(I_p ∩ O_e) ∪ O_p`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelativizedSpec {
    pub token: String,
    /// Present when the hidden variables only occur under a bounded number of `X`.
    pub formula: Option<Ltl>,
    /// Büchi automaton for the violations.
    pub negated: Nba,
    pub vars: Vec<String>,
}

fn subst_prefix(f: &Ltl, depth: usize, hv: &[String], prefix: &[Letter]) -> Ltl {
    let go = |g: &Ltl| subst_prefix(g, depth, hv, prefix);
    match f {
        Ltl::Atom(a) => match hv.iter().position(|h| *h == a.name) {
            Some(j) if a.trace.is_none() => {
                if prefix[depth] >> j & 1 == 1 {
                    Ltl::True
                } else {
                    Ltl::False
                }
            }
            _ => f.clone(),
        },
        Ltl::True | Ltl::False => f.clone(),
        Ltl::Not(a) => Ltl::not(go(a)),
        Ltl::And(a, b) => Ltl::and(go(a), go(b)),
        Ltl::Or(a, b) => Ltl::or(go(a), go(b)),
        Ltl::Implies(a, b) => Ltl::implies(go(a), go(b)),
        Ltl::Iff(a, b) => Ltl::iff(go(a), go(b)),
        Ltl::Next(a) => Ltl::next(subst_prefix(a, depth + 1, hv, prefix)),
        // No hidden atom below a non-next temporal operator (checked by the caller).
        _ => f.clone(),
    }
}

/// Formula form, if the hidden atoms sit at fixed positions inside the class depth.
pub fn relativize_formula(phi: &Ltl, class: &InfoClass) -> Option<Ltl> {
    let hidden: BTreeSet<&str> = class.hidden.iter().map(|s| s.as_str()).collect();
    match phi.next_depth_of(&|a| hidden.contains(a.name.as_str()))? {
        None => Some(phi.clone()),
        Some(m) if m < class.depth => Some(
            Ltl::and_all(class.prefixes.iter().map(|p| subst_prefix(phi, 0, &class.hidden, p))).simplify(),
        ),
        Some(_) => None,
    }
}

/// Automaton form of the violations: some class member with the same visible part violates `phi`.
pub fn relativize_automaton(phi: &Ltl, class: &InfoClass, arch: &Architecture, p: Proc) -> Result<Nba> {
    let vars = spec_alphabet(phi, arch, p)?;
    let bad = ltl_to_nba_over(&Ltl::not(phi.clone()), &vars);
    let member = class.nba.with_vars(&vars)?;
    let hidden: BTreeSet<String> = class.hidden.iter().cloned().collect();
    exists_project(&product(&bad, &member)?, &hidden)
}

pub fn relativized_vars(arch: &Architecture, p: Proc) -> Vec<String> {
    union_vars([&arch.visible_env(p), &arch.plain_outputs(p)])
}

pub fn relativize_spec(phi: &Ltl, class: &InfoClass, arch: &Architecture, p: Proc) -> Result<RelativizedSpec> {
    let vars = relativized_vars(arch, p);
    let formula = relativize_formula(phi, class);
    let negated = match &formula {
        Some(f) => ltl_to_nba_over(&Ltl::not(f.clone()), &vars),
        None => relativize_automaton(phi, class, arch, p)?.with_vars(&vars)?,
    };
    Ok(RelativizedSpec { token: class.token.clone(), formula, negated, vars })
}

/// `(I_p ∩ O_e) ∪ IC → O_p` specification: if exactly one class token is eventually raised,
/// every raised token's relativized specification holds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentSpec {
    pub classes: Vec<InfoClass>,
    pub relativized: Vec<RelativizedSpec>,
    pub assumption: Ltl,
    /// `None` when some relativized specification has no formula form.
    pub formula: Option<Ltl>,
    /// Büchi automaton for the violations over `vars`.
    pub negated: Nba,
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    pub vars: Vec<String>,
}

pub fn token_assumption(tokens: &[String]) -> Ltl {
    let at = |t: &String| Ltl::atom(t);
    let mut parts = Vec::new();
    for i in 0..tokens.len() {
        for j in i + 1..tokens.len() {
            parts.push(Ltl::or(Ltl::globally(Ltl::not(at(&tokens[i]))), Ltl::globally(Ltl::not(at(&tokens[j])))));
        }
    }
    parts.push(Ltl::finally(Ltl::or_all(tokens.iter().map(at))));
    Ltl::and_all(parts)
}

pub fn build_component_spec(phi: &Ltl, classes: &[InfoClass], arch: &Architecture, p: Proc) -> Result<ComponentSpec> {
    if classes.is_empty() {
        return Err(Error::Shape("a component specification needs at least one class".into()));
    }
    let tokens: Vec<String> = classes.iter().map(|c| c.token.clone()).collect();
    let all = arch.all_vars();
    if let Some(t) = tokens.iter().find(|t| all.contains(*t)) {
        return Err(Error::Shape(format!("class token `{t}` clashes with a declared variable")));
    }
    let relativized = classes.iter().map(|c| relativize_spec(phi, c, arch, p)).collect::<Result<Vec<_>>>()?;
    let tokset: BTreeSet<String> = tokens.iter().cloned().collect();
    let inputs = union_vars([&arch.visible_env(p), &tokset]);
    let outputs: Vec<String> = arch.plain_outputs(p).into_iter().collect();
    let vars = union_vars([&arch.visible_env(p), &tokset, &arch.plain_outputs(p)]);
    let assumption = token_assumption(&tokens);
    let formula = relativized.iter().map(|r| r.formula.clone()).collect::<Option<Vec<_>>>().map(|fs| {
        Ltl::implies(
            assumption.clone(),
            Ltl::and_all(tokens.iter().zip(fs).map(|(t, f)| Ltl::implies(Ltl::finally(Ltl::atom(t)), f))),
        )
    });
    let mut negated = Nba::empty(vars.clone());
    for (t, r) in tokens.iter().zip(&relativized) {
        let guard = ltl_to_nba_over(&Ltl::and(assumption.clone(), Ltl::finally(Ltl::atom(t))), &vars);
        negated = union(&negated, &product(&guard, &r.negated.with_vars(&vars)?)?)?;
    }
    Ok(ComponentSpec { classes: classes.to_vec(), relativized, assumption, formula, negated, inputs, outputs, vars })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::lasso_member;
    use crate::infoflow::{build_tb_dist_automaton, extract_info_classes, ClassCaps};
    use crate::ltl::eval_ltl;
    use crate::model::{LassoWord, SystemSpec};

    fn bit() -> (SystemSpec, Vec<InfoClass>) {
        let s = SystemSpec::bit_transmission();
        let l = build_tb_dist_automaton(s.phi(Proc::Q), &s.arch, Proc::Q).unwrap();
        let cs = extract_info_classes(&l, &s.arch.hidden_env(Proc::Q), &ClassCaps::default()).unwrap();
        (s, cs)
    }

    #[test]
    fn bit_transmission_relativization() {
        let (s, cs) = bit();
        let phi = s.phi(Proc::Q);
        assert_eq!(relativize_formula(phi, &cs[0]), Some(Ltl::parse("F out").unwrap()));
        assert_eq!(relativize_formula(phi, &cs[1]), Some(Ltl::parse("G !out").unwrap()));
        // The automaton form agrees with the formula form.
        let vars = relativized_vars(&s.arch, Proc::Q);
        for c in &cs {
            let f = relativize_formula(phi, c).unwrap();
            let a = relativize_automaton(phi, c, &s.arch, Proc::Q).unwrap().with_vars(&vars).unwrap();
            for w in LassoWord::enumerate(&vars, 2, 2) {
                assert_eq!(lasso_member(&a, &w).unwrap(), !eval_ltl(&w, &f).unwrap(), "{w}");
            }
        }
    }

    #[test]
    fn bit_transmission_component_spec() {
        let (s, cs) = bit();
        let cspec = build_component_spec(s.phi(Proc::Q), &cs, &s.arch, Proc::Q).unwrap();
        let expected =
            Ltl::parse("((G !ic0 | G !ic1) & F (ic0 | ic1)) -> ((F ic0 -> F out) & (F ic1 -> G !out))").unwrap();
        assert_eq!(cspec.formula.as_ref(), Some(&expected));
        assert_eq!(cspec.inputs, vec!["ic0", "ic1"]);
        assert_eq!(cspec.outputs, vec!["out"]);
        for w in LassoWord::enumerate(&cspec.vars, 2, 2) {
            assert_eq!(lasso_member(&cspec.negated, &w).unwrap(), !eval_ltl(&w, &expected).unwrap(), "{w}");
        }
    }

    #[test]
    fn universal_class_and_no_outputs() {
        let s = SystemSpec::bit_transmission();
        let l = build_tb_dist_automaton(&Ltl::True, &s.arch, Proc::Q).unwrap();
        let cs = extract_info_classes(&l, &s.arch.hidden_env(Proc::Q), &ClassCaps::default()).unwrap();
        let cspec = build_component_spec(&Ltl::True, &cs, &s.arch, Proc::Q).unwrap();
        assert_eq!(cspec.formula, Some(Ltl::parse("F ic0 -> (F ic0 -> true)").unwrap()));
        assert!(crate::automata::is_empty(&cspec.negated).is_empty());
    }

    #[test]
    fn eventual_inputs_need_the_automaton_form() {
        let arch = Architecture::new("a", "b", ["x", "y"], ["c", "t"], ["out"], ["x"], ["y", "c", "t"]).unwrap();
        let phi = Ltl::parse("(F x & F y) -> ((x & y) <-> F out)").unwrap();
        let l = build_tb_dist_automaton(&phi, &arch, Proc::Q).unwrap();
        let cs = extract_info_classes(&l, &arch.hidden_env(Proc::Q), &ClassCaps::default()).unwrap();
        assert_eq!(cs.len(), 2);
        assert_eq!(relativize_formula(&phi, &cs[0]), None);
        let r = relativize_spec(&phi, &cs[0], &arch, Proc::Q).unwrap();
        assert_eq!(r.vars, vec!["out", "y"]);
        // Class of x@0: the specification must hold for every member sharing y, including members
        // where x never recurs, so only y-driven obligations survive.
        let v = ["out", "y"];
        let w = |t: &str| LassoWord::parse(&v, t).unwrap();
        assert!(!lasso_member(&r.negated, &w("{y} {out} | {y}")).unwrap());
        assert!(lasso_member(&r.negated, &w("{y} | {y}")).unwrap());
        assert!(!lasso_member(&r.negated, &w("{} | {y}")).unwrap());
        let cspec = build_component_spec(&phi, &cs, &arch, Proc::Q).unwrap();
        assert!(cspec.formula.is_none());
    }
}
