//! Information-flow analyses: distinguishability, time-bounded distinguishability, the derived
//! pair properties, uniformity, information classes and component specifications.
//!
//! Every pair property is an automaton over the pair alphabet (`x[0]` for the left trace, `x[1]`
//! for the right one).

mod compat;
mod lambda;
mod locality;
mod uniformity;
mod classes;
mod component;

pub use compat::*;
pub use lambda::*;
pub use locality::*;
pub use uniformity::*;
pub use classes::*;
pub use component::*;

use std::collections::BTreeSet;

use crate::automata::pair_vars;
use crate::error::{Error, Result};
use crate::ltl::Ltl;
use crate::model::{Architecture, LassoWord, Proc};

/// Sorted union of variable sets.
pub(crate) fn union_vars<'a>(sets: impl IntoIterator<Item = &'a BTreeSet<String>>) -> Vec<String> {
    let mut s = BTreeSet::new();
    for x in sets {
        s.extend(x.iter().cloned());
    }
    s.into_iter().collect()
}

/// `O_e ∪ O_p` in sorted order, after checking that `phi` stays inside it.
pub(crate) fn spec_alphabet(phi: &Ltl, arch: &Architecture, p: Proc) -> Result<Vec<String>> {
    let outs = arch.plain_outputs(p);
    let vars = union_vars([&arch.outputs_e, &outs]);
    if let Some(a) = phi.atoms().into_iter().find(|a| !vars.contains(a)) {
        return Err(Error::UndeclaredVariable(format!(
            "`{a}` in the specification of {} is neither an environment output nor one of its outputs",
            arch.name(p)
        )));
    }
    Ok(vars)
}

/// Both indexed copies of every name in `names`.
pub(crate) fn both_copies(names: &BTreeSet<String>) -> BTreeSet<String> {
    pair_vars(&names.iter().cloned().collect::<Vec<_>>()).into_iter().collect()
}

/// `⋁_{v ∈ names} v[0] ↮ v[1]`.
pub(crate) fn differ(names: &BTreeSet<String>) -> Ltl {
    Ltl::or_all(names.iter().map(|v| Ltl::not(Ltl::iff(Ltl::atom_at(v, 0), Ltl::atom_at(v, 1)))))
}

/// Reshapes `w` to exactly the alphabet `vars` (missing variables are false).
pub(crate) fn fit(w: &LassoWord, vars: &[String]) -> Result<LassoWord> {
    w.project(&vars.iter().cloned().collect()).widen(vars)
}

/// The pair word of two traces over `vars`.
pub fn pair_word(left: &LassoWord, right: &LassoWord, vars: &[String]) -> Result<LassoWord> {
    LassoWord::pair(&fit(left, vars)?, &fit(right, vars)?)
}
