//! Composition of implementations, knowledge sets and local strategy extraction.

mod decoder;
mod local;

pub use decoder::*;
pub use local::*;

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::automata::{Cube, Nba};
use crate::error::{Error, Result};
use crate::machine::MooreMachine;
use crate::model::{Architecture, Letter, Proc};

/// Hard cap on reachable product states.
pub const MAX_PRODUCT_STATES: usize = 10_000;

/// A closed system over `O_e` with outputs `O_p ∪ O_q`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComposedSystem {
    pub arch: Architecture,
    pub machine: MooreMachine,
    /// Component names and, per product state, the component states.
    pub components: Vec<String>,
    pub provenance: Vec<Vec<usize>>,
}

impl ComposedSystem {
    /// Output valuation over `names` after reading the env word `w`.
    pub fn output_after(&self, w: &[Letter]) -> Letter {
        self.machine.labels[self.machine.state_after(w)]
    }

    pub fn env_vars(&self) -> &[String] {
        &self.machine.inputs
    }

    /// Local input letter of `p` at state `s` under env letter `e`, over `local_inputs(p)`.
    pub fn local_letter(&self, p: Proc, s: usize, e: Letter) -> Letter {
        let vars = local_inputs(&self.arch, p);
        let full = e | self.machine.labels[s] << self.machine.inputs.len();
        let all = self.machine.vars();
        project_letter(full, &all, &vars)
    }

    /// Local input words of `p` that occur in some run, as an automaton over `local_inputs(p)`.
    pub fn local_language(&self, p: Proc) -> Nba {
        let vars = local_inputs(&self.arch, p);
        let trans = (0..self.machine.num_states())
            .map(|s| {
                let mut es: Vec<(Cube, usize)> = (0..1u64 << self.machine.inputs.len())
                    .map(|e| (Cube::letter(self.local_letter(p, s, e), vars.len()), self.machine.step(s, e)))
                    .collect();
                es.sort();
                es.dedup();
                es
            })
            .collect();
        Nba { vars: vars.clone(), init: self.machine.init, trans, acc: vec![true; self.machine.num_states()] }
    }

    /// `f_p(w)`: the local input word of `p` induced by the env word `w`.
    pub fn local_word(&self, p: Proc, w: &[Letter]) -> Vec<Letter> {
        let mut s = self.machine.init;
        w.iter()
            .map(|&e| {
                let l = self.local_letter(p, s, e);
                s = self.machine.step(s, e);
                l
            })
            .collect()
    }
}

/// Inputs of `p` without the bound marker, sorted.
pub fn local_inputs(arch: &Architecture, p: Proc) -> Vec<String> {
    arch.plain_inputs(p).into_iter().collect()
}

pub fn project_letter(l: Letter, from: &[String], to: &[String]) -> Letter {
    to.iter().enumerate().fold(0, |acc, (j, v)| match from.iter().position(|x| x == v) {
        Some(i) if l >> i & 1 == 1 => acc | 1 << j,
        _ => acc,
    })
}

#[derive(Clone, Copy, Debug)]
pub(crate) enum Src {
    Env(usize),
    /// Bit of a component's current output.
    Out(usize, usize),
    /// Not produced by anyone (an unused bound marker); reads as false.
    Zero,
}

/// Sources for each of `names`: environment variables first, then component outputs.
pub(crate) fn wire(names: &[String], env: &[String], comps: &[&[String]], who: &str) -> Result<Vec<Src>> {
    wire_with_default(names, env, comps, who, None)
}

pub(crate) fn wire_with_default(names: &[String], env: &[String], comps: &[&[String]], who: &str, absent: Option<&str>) -> Result<Vec<Src>> {
    names
        .iter()
        .map(|v| {
            if let Some(i) = env.iter().position(|x| x == v) {
                return Ok(Src::Env(i));
            }
            for (c, outs) in comps.iter().enumerate() {
                if let Some(j) = outs.iter().position(|x| x == v) {
                    return Ok(Src::Out(c, j));
                }
            }
            if absent == Some(v.as_str()) {
                return Ok(Src::Zero);
            }
            Err(Error::AlphabetMismatch(format!("input `{v}` of {who} is not produced by anyone")))
        })
        .collect()
}

pub(crate) fn assemble(w: &[Src], env: Letter, outs: &[Letter]) -> Letter {
    w.iter().enumerate().fold(0, |acc, (b, s)| {
        let on = match *s {
            Src::Env(i) => env >> i & 1 == 1,
            Src::Out(c, j) => outs[c] >> j & 1 == 1,
            Src::Zero => false,
        };
        acc | (u64::from(on) << b)
    })
}

/// Union of component outputs, restricted to `names`.
pub(crate) fn merge_labels(names: &[String], parts: &[(&[String], Letter)]) -> Letter {
    names.iter().enumerate().fold(0, |acc, (b, v)| {
        let on = parts.iter().any(|(vars, l)| vars.iter().position(|x| x == v).is_some_and(|j| l >> j & 1 == 1));
        acc | (u64::from(on) << b)
    })
}

/// Observable outputs of the composition: `O_p ∪ O_q` without bound markers, sorted.
pub fn system_outputs(arch: &Architecture) -> Vec<String> {
    let s: BTreeSet<String> = arch.plain_outputs(Proc::P).union(&arch.plain_outputs(Proc::Q)).cloned().collect();
    s.into_iter().collect()
}

/// Explores a deterministic product from `init`; `step` maps a product state and env letter to
/// the successor, `label` gives the output over `outputs`.
pub(crate) fn explore(
    arch: &Architecture,
    components: Vec<String>,
    init: Vec<usize>,
    step: impl Fn(&[usize], Letter) -> Vec<usize>,
    label: impl Fn(&[usize]) -> Letter,
) -> Result<ComposedSystem> {
    let env: Vec<String> = arch.outputs_e.iter().cloned().collect();
    let outputs = system_outputs(arch);
    let mut idx: HashMap<Vec<usize>, usize> = HashMap::from([(init.clone(), 0)]);
    let mut prov = vec![init];
    let mut delta = Vec::new();
    let mut i = 0;
    while i < prov.len() {
        let row = (0..1u64 << env.len())
            .map(|e| {
                let nxt = step(&prov[i], e);
                if let Some(&j) = idx.get(&nxt) {
                    return Ok(j);
                }
                if prov.len() >= MAX_PRODUCT_STATES {
                    return Err(Error::CapExceeded(format!("composition exceeds {MAX_PRODUCT_STATES} states")));
                }
                idx.insert(nxt.clone(), prov.len());
                prov.push(nxt);
                Ok(prov.len() - 1)
            })
            .collect::<Result<Vec<_>>>()?;
        delta.push(row);
        i += 1;
    }
    let labels = prov.iter().map(|p| label(p)).collect();
    let machine = MooreMachine::new(env, outputs, 0, labels, delta)?;
    Ok(ComposedSystem { arch: arch.clone(), machine, components, provenance: prov })
}

/// Synchronous product of two hyper implementations. Each process reads env variables, the
/// partner's current outputs and its bound marker (written by the partner in the same round).
pub fn compose_hyper(h_p: &MooreMachine, h_q: &MooreMachine, arch: &Architecture) -> Result<ComposedSystem> {
    let env: Vec<String> = arch.outputs_e.iter().cloned().collect();
    for (h, p) in [(h_p, Proc::P), (h_q, Proc::Q)] {
        let allowed: BTreeSet<String> =
            arch.outputs_e.iter().chain(arch.inputs(p)).cloned().chain([arch.t_var(p)]).collect();
        if let Some(v) = h.inputs.iter().find(|v| !allowed.contains(*v)) {
            return Err(Error::AlphabetMismatch(format!("{} may not read `{v}`", arch.name(p))));
        }
    }
    // a partner that never raises the marker simply does not declare it
    let wp = wire_with_default(&h_p.inputs, &env, &[&h_q.outputs], arch.name(Proc::P), Some(&arch.t_var(Proc::P)))?;
    let wq = wire_with_default(&h_q.inputs, &env, &[&h_p.outputs], arch.name(Proc::Q), Some(&arch.t_var(Proc::Q)))?;
    let outs = system_outputs(arch);
    let label = |st: &[usize]| merge_labels(&outs, &[(&h_p.outputs, h_p.labels[st[0]]), (&h_q.outputs, h_q.labels[st[1]])]);
    explore(
        arch,
        vec![arch.name(Proc::P).to_string(), arch.name(Proc::Q).to_string()],
        vec![h_p.init, h_q.init],
        |st, e| {
            let (a, b) = (h_p.labels[st[0]], h_q.labels[st[1]]);
            vec![h_p.step(st[0], assemble(&wp, e, &[b])), h_q.step(st[1], assemble(&wq, e, &[a]))]
        },
        label,
    )
}

#[cfg(test)]
mod tests;
