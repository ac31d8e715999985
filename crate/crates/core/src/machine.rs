//! Deterministic Moore machines with explicit transition tables.
//!
//! Letters over `inputs` use bit `i` for `inputs[i]`; labels over `outputs` likewise. The output
//! of the current state is emitted before the current input is read.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::automata::{is_empty, letters_to_cubes, product, Cube, Nba, MAX_EXPLICIT_VARS};
use crate::error::{Error, Result};
use crate::model::{letter_to_string, LassoWord, Letter};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MooreMachine {
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    pub init: usize,
    pub labels: Vec<Letter>,
    /// `delta[s][l]` for every input letter `l`.
    pub delta: Vec<Vec<usize>>,
}

impl MooreMachine {
    pub fn new(inputs: Vec<String>, outputs: Vec<String>, init: usize, labels: Vec<Letter>, delta: Vec<Vec<usize>>) -> Result<Self> {
        let m = MooreMachine { inputs, outputs, init, labels, delta };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |s: String| Err(Error::Machine(s));
        if self.inputs.len() > MAX_EXPLICIT_VARS {
            return bad(format!("{} inputs exceed the explicit limit", self.inputs.len()));
        }
        let all: BTreeSet<&String> = self.inputs.iter().chain(&self.outputs).collect();
        if all.len() != self.inputs.len() + self.outputs.len() {
            return bad("duplicate or shared input/output variable".into());
        }
        let n = self.labels.len();
        if n == 0 || self.init >= n || self.delta.len() != n {
            return bad("state tables are inconsistent".into());
        }
        let nl = 1usize << self.inputs.len();
        for (s, row) in self.delta.iter().enumerate() {
            if row.len() != nl || row.iter().any(|&t| t >= n) {
                return bad(format!("transition row of state {s} is malformed"));
            }
        }
        if self.labels.iter().any(|&l| l >> self.outputs.len() != 0) {
            return bad("label outside the output alphabet".into());
        }
        Ok(())
    }

    /// A one-state machine with a fixed output.
    pub fn constant(inputs: Vec<String>, outputs: Vec<String>, label: Letter) -> Self {
        let nl = 1usize << inputs.len();
        MooreMachine { inputs, outputs, init: 0, labels: vec![label], delta: vec![vec![0; nl]] }
    }

    pub fn num_states(&self) -> usize {
        self.labels.len()
    }

    pub fn step(&self, s: usize, l: Letter) -> usize {
        self.delta[s][l as usize]
    }

    /// Output letters while reading `word` (one per position, starting with the initial label).
    pub fn run(&self, word: &[Letter]) -> Vec<Letter> {
        let mut s = self.init;
        word.iter()
            .map(|&l| {
                let o = self.labels[s];
                s = self.step(s, l);
                o
            })
            .collect()
    }

    /// State reached after `word`.
    pub fn state_after(&self, word: &[Letter]) -> usize {
        word.iter().fold(self.init, |s, &l| self.step(s, l))
    }

    /// `inputs` followed by `outputs`.
    pub fn vars(&self) -> Vec<String> {
        self.inputs.iter().chain(&self.outputs).cloned().collect()
    }

    /// The machine's trace on a lasso input (over [`MooreMachine::vars`]); the input word is
    /// reshaped to the machine's inputs first.
    pub fn trace(&self, input: &LassoWord) -> Result<LassoWord> {
        let w = input.project(&self.inputs.iter().cloned().collect()).widen(&self.inputs)?;
        let k = self.inputs.len();
        let mut s = self.init;
        let mut stem = Vec::new();
        for &l in &w.stem {
            stem.push(l | self.labels[s] << k);
            s = self.step(s, l);
        }
        // Unroll the cycle until the state at its start repeats.
        let mut seen: HashMap<usize, usize> = HashMap::new();
        let mut body: Vec<Letter> = Vec::new();
        let c = w.cycle.len();
        loop {
            if let Some(&at) = seen.get(&s) {
                let (pre, cyc) = body.split_at(at * c);
                stem.extend_from_slice(pre);
                return LassoWord::new(self.vars(), stem, cyc.to_vec());
            }
            seen.insert(s, seen.len());
            for &l in &w.cycle {
                body.push(l | self.labels[s] << k);
                s = self.step(s, l);
            }
        }
    }

    /// Büchi automaton (all states accepting) for the set of traces over [`MooreMachine::vars`].
    pub fn to_nba(&self) -> Nba {
        let k = self.inputs.len();
        let m = self.outputs.len();
        let omask = ((1u64 << m) - 1) << k;
        let trans = (0..self.num_states())
            .map(|s| {
                let out = Cube { pos: self.labels[s] << k, neg: omask & !(self.labels[s] << k) };
                let targets: BTreeSet<usize> = self.delta[s].iter().copied().collect();
                targets
                    .into_iter()
                    .flat_map(|t| {
                        letters_to_cubes(k, &|l| self.delta[s][l as usize] == t)
                            .into_iter()
                            .filter_map(move |c| c.and(&out).map(|c| (c, t)))
                    })
                    .collect()
            })
            .collect();
        Nba { vars: self.vars(), init: self.init, trans, acc: vec![true; self.num_states()] }
    }

    /// Reachable part, states numbered in breadth-first order over ascending input letters.
    pub fn canonical(&self) -> MooreMachine {
        let mut order = vec![self.init];
        let mut idx: HashMap<usize, usize> = [(self.init, 0)].into();
        let mut q = VecDeque::from([self.init]);
        while let Some(s) = q.pop_front() {
            for &t in &self.delta[s] {
                if !idx.contains_key(&t) {
                    idx.insert(t, order.len());
                    order.push(t);
                    q.push_back(t);
                }
            }
        }
        MooreMachine {
            inputs: self.inputs.clone(),
            outputs: self.outputs.clone(),
            init: 0,
            labels: order.iter().map(|&s| self.labels[s]).collect(),
            delta: order.iter().map(|&s| self.delta[s].iter().map(|t| idx[t]).collect()).collect(),
        }
    }

    /// Minimal equivalent machine (partition refinement on the reachable part).
    pub fn minimized(&self) -> MooreMachine {
        let m = self.canonical();
        let n = m.num_states();
        let mut class: Vec<usize> = {
            let mut ids: HashMap<Letter, usize> = HashMap::new();
            m.labels.iter().map(|l| { let k = ids.len(); *ids.entry(*l).or_insert(k) }).collect()
        };
        loop {
            let mut ids: HashMap<(usize, Vec<usize>), usize> = HashMap::new();
            let next: Vec<usize> = (0..n)
                .map(|s| {
                    let key = (class[s], m.delta[s].iter().map(|&t| class[t]).collect());
                    let k = ids.len();
                    *ids.entry(key).or_insert(k)
                })
                .collect();
            let done = ids.len() == class.iter().collect::<BTreeSet<_>>().len();
            class = next;
            if done {
                break;
            }
        }
        let k = class.iter().collect::<BTreeSet<_>>().len();
        let mut labels = vec![0; k];
        let mut delta = vec![vec![]; k];
        for s in 0..n {
            labels[class[s]] = m.labels[s];
            delta[class[s]] = m.delta[s].iter().map(|&t| class[t]).collect();
        }
        MooreMachine { inputs: m.inputs, outputs: m.outputs, init: class[0], labels, delta }.canonical()
    }

    /// The same behavior over a larger input alphabet (extra inputs are ignored).
    pub fn with_inputs(&self, inputs: &[String]) -> Result<MooreMachine> {
        let pos: Vec<usize> = self
            .inputs
            .iter()
            .map(|v| inputs.iter().position(|x| x == v).ok_or_else(|| Error::Machine(format!("input `{v}` missing"))))
            .collect::<Result<_>>()?;
        let gather = |l: Letter| pos.iter().enumerate().filter(|(_, &b)| l >> b & 1 == 1).fold(0u64, |m, (j, _)| m | 1 << j);
        let delta = self
            .delta
            .iter()
            .map(|row| (0..1u64 << inputs.len()).map(|l| row[gather(l) as usize]).collect())
            .collect();
        MooreMachine::new(inputs.to_vec(), self.outputs.clone(), self.init, self.labels.clone(), delta)
    }

    /// An input lasso accepted by `assumption` (over a subset of the inputs) on which the two
    /// machines produce different outputs somewhere.
    pub fn difference_under(&self, other: &MooreMachine, assumption: &Nba) -> Result<Option<LassoWord>> {
        if self.difference(other)?.is_none() {
            return Ok(None);
        }
        let o = other.with_inputs(&self.inputs)?;
        let perm: Vec<usize> = o.outputs.iter().map(|v| self.outputs.iter().position(|x| x == v).unwrap()).collect();
        let relabel = |l: Letter| perm.iter().enumerate().filter(|(j, _)| l >> j & 1 == 1).fold(0u64, |m, (_, &b)| m | 1 << b);
        let k = self.inputs.len();
        let mut idx: HashMap<(usize, usize, bool), usize> = HashMap::new();
        let mut states = vec![(self.init, o.init, false)];
        idx.insert(states[0], 0);
        let mut trans: Vec<Vec<(Cube, usize)>> = Vec::new();
        let mut i = 0;
        while i < states.len() {
            let (a, b, f) = states[i];
            let f = f || self.labels[a] != relabel(o.labels[b]);
            let mut es = Vec::new();
            for l in 0..1u64 << k {
                let nxt = (self.step(a, l), o.step(b, l), f);
                let t = *idx.entry(nxt).or_insert_with(|| {
                    states.push(nxt);
                    states.len() - 1
                });
                es.push((Cube::letter(l, k), t));
            }
            trans.push(es);
            i += 1;
        }
        let acc = states.iter().map(|s| s.2).collect();
        let d = Nba { vars: self.inputs.clone(), init: 0, trans, acc };
        let prod = product(&d, &assumption.with_vars(&self.inputs)?)?;
        Ok(is_empty(&prod).witness().cloned())
    }

    /// A shortest input word on which the two machines (same variable names, any order)
    /// produce different outputs, or `None` if they are equivalent.
    pub fn difference(&self, other: &MooreMachine) -> Result<Option<Vec<Letter>>> {
        let same = |a: &[String], b: &[String]| a.iter().collect::<BTreeSet<_>>() == b.iter().collect::<BTreeSet<_>>();
        if !same(&self.inputs, &other.inputs) || !same(&self.outputs, &other.outputs) {
            return Err(Error::Machine("machines have different interfaces".into()));
        }
        let o = other.with_inputs(&self.inputs)?;
        let perm: Vec<usize> = o.outputs.iter().map(|v| self.outputs.iter().position(|x| x == v).unwrap()).collect();
        let relabel = |l: Letter| perm.iter().enumerate().filter(|(j, _)| l >> j & 1 == 1).fold(0u64, |m, (_, &b)| m | 1 << b);
        let mut parent: HashMap<(usize, usize), Option<((usize, usize), Letter)>> = HashMap::new();
        let start = (self.init, o.init);
        parent.insert(start, None);
        let mut q = VecDeque::from([start]);
        while let Some((a, b)) = q.pop_front() {
            if self.labels[a] != relabel(o.labels[b]) {
                let mut word = Vec::new();
                let mut cur = (a, b);
                while let Some(Some((p, l))) = parent.get(&cur) {
                    word.push(*l);
                    cur = *p;
                }
                word.reverse();
                word.push(0);
                return Ok(Some(word));
            }
            for l in 0..1u64 << self.inputs.len() {
                let nxt = (self.step(a, l), o.step(b, l));
                if !parent.contains_key(&nxt) {
                    parent.insert(nxt, Some(((a, b), l)));
                    q.push_back(nxt);
                }
            }
        }
        Ok(None)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "inputs {}", self.inputs.join(" "));
        let _ = writeln!(s, "outputs {}", self.outputs.join(" "));
        let _ = writeln!(s, "init {}", self.init);
        for (q, row) in self.delta.iter().enumerate() {
            let next: Vec<String> = row.iter().map(|t| t.to_string()).collect();
            let _ = writeln!(s, "state {q} {} -> {}", letter_to_string(&self.outputs, self.labels[q]), next.join(" "));
        }
        s
    }

    /// Parses [`MooreMachine::to_text`] output (`#` starts a comment).
    pub fn parse(text: &str) -> Result<MooreMachine> {
        let err = |n: usize, m: &str| Error::Machine(format!("line {n}: {m}"));
        let (mut inputs, mut outputs, mut init) = (None, None, 0);
        let mut states: Vec<(usize, Letter, Vec<usize>)> = Vec::new();
        for (n, raw) in text.lines().enumerate().map(|(i, l)| (i + 1, l)) {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let (key, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
            let names = || rest.split_whitespace().map(str::to_string).collect::<Vec<_>>();
            match key {
                "inputs" => inputs = Some(names()),
                "outputs" => outputs = Some(names()),
                "init" => init = rest.trim().parse().map_err(|_| err(n, "bad initial state"))?,
                "state" => {
                    let outs: &Vec<String> = outputs.as_ref().ok_or_else(|| err(n, "`outputs` must precede states"))?;
                    let (head, next) = rest.split_once("->").ok_or_else(|| err(n, "missing `->`"))?;
                    let (id, label) = head.trim().split_once(char::is_whitespace).ok_or_else(|| err(n, "missing label"))?;
                    let id: usize = id.parse().map_err(|_| err(n, "bad state id"))?;
                    let label = label.trim().trim_start_matches('{').trim_end_matches('}');
                    let label = crate::model::letter_from_names(outs, label.split(',').map(str::trim).filter(|s| !s.is_empty()))
                        .map_err(|e| err(n, &e.to_string()))?;
                    let next = next.split_whitespace().map(|t| t.parse().map_err(|_| err(n, "bad target"))).collect::<Result<_>>()?;
                    states.push((id, label, next));
                }
                _ => return Err(err(n, &format!("unknown key `{key}`"))),
            }
        }
        states.sort_by_key(|s| s.0);
        if states.iter().enumerate().any(|(i, s)| s.0 != i) {
            return Err(Error::Machine("states must be numbered 0..n".into()));
        }
        MooreMachine::new(
            inputs.unwrap_or_default(),
            outputs.unwrap_or_default(),
            init,
            states.iter().map(|s| s.1).collect(),
            states.into_iter().map(|s| s.2).collect(),
        )
    }

    pub fn to_dot(&self, name: &str) -> String {
        let mut s = format!("digraph \"{name}\" {{\n  rankdir=LR;\n  init [shape=point];\n  init -> {};\n", self.init);
        for q in 0..self.num_states() {
            let _ = writeln!(s, "  {q} [shape=box,label=\"{q}\\n{}\"];", letter_to_string(&self.outputs, self.labels[q]));
            let targets: BTreeSet<usize> = self.delta[q].iter().copied().collect();
            for t in targets {
                let label: Vec<String> = letters_to_cubes(self.inputs.len(), &|l| self.delta[q][l as usize] == t)
                    .iter()
                    .map(|c| c.render(&self.inputs))
                    .collect();
                let _ = writeln!(s, "  {q} -> {t} [label=\"{}\"];", label.join(" | "));
            }
        }
        s.push_str("}\n");
        s
    }
}
