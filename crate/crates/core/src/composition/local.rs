//! Knowledge sets and local strategies.

use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::infoflow::{negated_locality, TbDistAutomaton};
use crate::machine::MooreMachine;
use crate::model::{letter_to_string, Architecture, Letter, Proc};
use crate::verify::{check_pair_violations, Verdict};

use super::{local_inputs, project_letter, ComposedSystem};

/// `K_p(v)`: env words of length `|v|` whose induced local input word is `v`, in
/// lexicographic order.
pub fn knowledge_set(h: &ComposedSystem, p: Proc, v: &[Letter]) -> Vec<Vec<Letter>> {
    let ne = 1u64 << h.machine.inputs.len();
    let mut layer: Vec<(Vec<Letter>, usize)> = vec![(vec![], h.machine.init)];
    for &a in v {
        layer = layer
            .into_iter()
            .flat_map(|(w, s)| {
                (0..ne).filter(move |&e| h.local_letter(p, s, e) == a).map(move |e| {
                    let mut w2 = w.clone();
                    w2.push(e);
                    (w2, h.machine.step(s, e))
                })
            })
            .collect();
    }
    layer.into_iter().map(|(w, _)| w).collect()
}

fn render(vars: &[String], w: &[Letter]) -> String {
    if w.is_empty() {
        return "ε".into();
    }
    w.iter().map(|&l| letter_to_string(vars, l)).collect::<Vec<_>>().join("")
}

/// Local strategy of `p`: after local word `v`, the composed output of `p` on any env word in
/// `K_p(v)`; the empty output on local words that never occur.
pub fn extract_local_strategy(h: &ComposedSystem, p: Proc) -> Result<MooreMachine> {
    let inputs = local_inputs(&h.arch, p);
    let outputs: Vec<String> = h.arch.plain_outputs(p).into_iter().collect();
    let ne = 1u64 << h.machine.inputs.len();
    let nl = 1u64 << inputs.len();
    let start: BTreeSet<usize> = [h.machine.init].into();
    let mut idx: HashMap<BTreeSet<usize>, usize> = HashMap::from([(start.clone(), 0)]);
    let mut sets = vec![start];
    let mut words: Vec<Vec<Letter>> = vec![vec![]];
    let mut labels = Vec::new();
    let mut delta = Vec::new();
    let mut i = 0;
    while i < sets.len() {
        let outs: BTreeSet<Letter> =
            sets[i].iter().map(|&s| project_letter(h.machine.labels[s], &h.machine.outputs, &outputs)).collect();
        if outs.len() > 1 {
            return Err(Error::LocalityViolated(render(&inputs, &words[i])));
        }
        labels.push(outs.into_iter().next().unwrap_or(0));
        let mut row = Vec::new();
        for a in 0..nl {
            let nxt: BTreeSet<usize> = sets[i]
                .iter()
                .flat_map(|&s| (0..ne).filter(move |&e| h.local_letter(p, s, e) == a).map(move |e| h.machine.step(s, e)))
                .collect();
            let j = match idx.get(&nxt) {
                Some(&j) => j,
                None => {
                    let mut w = words[i].clone();
                    w.push(a);
                    idx.insert(nxt.clone(), sets.len());
                    sets.push(nxt);
                    words.push(w);
                    sets.len() - 1
                }
            };
            row.push(j);
        }
        delta.push(row);
        i += 1;
    }
    Ok(MooreMachine::new(inputs, outputs, 0, labels, delta)?.minimized())
}

/// The locality condition of `p` on a hyper implementation.
pub fn check_locality(h: &MooreMachine, l: &TbDistAutomaton, arch: &Architecture, p: Proc, max_rank: usize) -> Result<Verdict> {
    let neg = negated_locality(l, arch, p, max_rank)?;
    // the machine may ignore some of the variables the condition talks about
    let mut m = h.clone();
    let base: Vec<String> = crate::infoflow::locality_vars(arch, p);
    let extra: Vec<String> = base.iter().filter(|v| !m.vars().contains(v)).cloned().collect();
    let outs_missing: Vec<String> = extra.iter().filter(|v| arch.plain_outputs(p).contains(*v)).cloned().collect();
    if let Some(v) = outs_missing.first() {
        return Err(Error::AlphabetMismatch(format!("hyper implementation lacks output `{v}`")));
    }
    let ins: Vec<String> = m.inputs.iter().cloned().chain(extra).collect();
    m = m.with_inputs(&ins)?;
    check_pair_violations(&m, &neg.nba, neg.incomplete)
}

/// Knowledge consistency up to `depth`: every local word of `p` of length ≤ `depth` whose
/// knowledge set is non-empty determines `p`'s composed output. Returns an offending local word.
pub fn knowledge_consistency(h: &ComposedSystem, p: Proc, depth: usize) -> Option<Vec<Letter>> {
    let outputs: Vec<String> = h.arch.plain_outputs(p).into_iter().collect();
    let ne = 1u64 << h.machine.inputs.len();
    let nl = 1u64 << local_inputs(&h.arch, p).len();
    let mut seen: HashMap<BTreeSet<usize>, usize> = HashMap::new();
    let mut layer: Vec<(Vec<Letter>, BTreeSet<usize>)> = vec![(vec![], [h.machine.init].into())];
    for d in 0..=depth {
        let mut next = Vec::new();
        for (v, set) in layer {
            let outs: BTreeSet<Letter> =
                set.iter().map(|&s| project_letter(h.machine.labels[s], &h.machine.outputs, &outputs)).collect();
            if outs.len() > 1 {
                return Some(v);
            }
            // a knowledge state seen at an earlier depth has the same future
            if seen.get(&set).is_some_and(|&d0| d0 < d) || d == depth {
                continue;
            }
            seen.insert(set.clone(), d);
            for a in 0..nl {
                let nxt: BTreeSet<usize> = set
                    .iter()
                    .flat_map(|&s| (0..ne).filter(move |&e| h.local_letter(p, s, e) == a).map(move |e| h.machine.step(s, e)))
                    .collect();
                if !nxt.is_empty() {
                    let mut w = v.clone();
                    w.push(a);
                    next.push((w, nxt));
                }
            }
        }
        layer = next;
    }
    None
}

/// Prefix agreement up to `depth`: on every env word, the composed output equals the union of
/// the outputs of the local strategies run on the local inputs they produce for each other.
/// Returns an env word on which they differ.
pub fn prefix_agreement(h: &ComposedSystem, s_p: &MooreMachine, s_q: &MooreMachine, depth: usize) -> Result<Option<Vec<Letter>>> {
    let locals = super::compose_hyper(s_p, s_q, &h.arch)?;
    let ne = 1u64 << h.machine.inputs.len();
    let mut seen: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut layer: Vec<(Vec<Letter>, usize, usize)> = vec![(vec![], h.machine.init, locals.machine.init)];
    for d in 0..=depth {
        let mut next = Vec::new();
        for (w, a, b) in layer {
            if h.machine.labels[a] != locals.machine.labels[b] {
                return Ok(Some(w));
            }
            if d == depth || !seen.insert((a, b)) {
                continue;
            }
            for e in 0..ne {
                let mut w2 = w.clone();
                w2.push(e);
                next.push((w2, h.machine.step(a, e), locals.machine.step(b, e)));
            }
        }
        layer = next;
    }
    Ok(None)
}
