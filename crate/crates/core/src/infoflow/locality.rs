//! The locality condition of hyper implementations.
//!
//! For pairs in `Λ_p` the outputs must agree until the left marker or a difference of `p`'s
//! inputs; for other pairs until an input difference or a marker difference. `Λ_p` is not
//! symmetric, and a pair whose swap lies in `Λ_p` is released by the marker of its right trace:
//! otherwise no hyper implementation could ever answer a marker that both traces carry.

use std::collections::BTreeSet;

use crate::automata::complement::Complemented;
use crate::automata::translate::ltl_to_nba_over;
use crate::automata::{pair_vars, product, union, Nba};
use crate::error::Result;
use crate::ltl::Ltl;
use crate::model::{indexed_name, split_indexed, Architecture, Proc};

use super::{differ, union_vars, TbDistAutomaton};

/// `O_e ∪ I_p ∪ {t} ∪ O_p`, sorted.
pub fn locality_vars(arch: &Architecture, p: Proc) -> Vec<String> {
    let tset: BTreeSet<String> = [arch.t_var(p)].into();
    union_vars([&arch.outputs_e, &arch.plain_inputs(p), &tset, &arch.plain_outputs(p)])
}

/// Release obligations `(in Λ, swap in Λ, neither)` over indexed atoms.
pub fn locality_bodies(arch: &Architecture, p: Proc) -> (Ltl, Ltl, Ltl) {
    let t = arch.t_var(p);
    let ins = differ(&arch.plain_inputs(p));
    let out_eq = Ltl::not(differ(&arch.plain_outputs(p)));
    let tdiff = differ(&[t.clone()].into());
    (
        Ltl::release(Ltl::or(Ltl::atom_at(&t, 0), ins.clone()), out_eq.clone()),
        Ltl::release(Ltl::or(Ltl::atom_at(&t, 1), ins.clone()), out_eq.clone()),
        Ltl::release(Ltl::or(tdiff, ins), out_eq),
    )
}

/// Pairs violating locality.
pub fn negated_locality(l: &TbDistAutomaton, arch: &Architecture, p: Proc, max_rank: usize) -> Result<Complemented> {
    let pv = pair_vars(&locality_vars(arch, p));
    let (e1, e1s, e2) = locality_bodies(arch, p);
    let lam = l.lambda_nba(max_rank)?;
    let a = product(&lam.nba.with_vars(&pv)?, &ltl_to_nba_over(&Ltl::not(e1), &pv))?;
    let a2 = product(&swap(&lam.nba).with_vars(&pv)?, &ltl_to_nba_over(&Ltl::not(e1s), &pv))?;
    let n = l.not_lambda();
    let both = product(&n.with_vars(&pv)?, &swap(n).with_vars(&pv)?)?;
    let b = product(&both, &ltl_to_nba_over(&Ltl::not(e2), &pv))?;
    Ok(Complemented { nba: union(&union(&a, &a2)?, &b)?, incomplete: lam.incomplete })
}

fn swap(a: &Nba) -> Nba {
    a.renamed(|v| match split_indexed(v) {
        Some((b, i)) => indexed_name(b, 1 - i),
        None => v.to_string(),
    })
}
