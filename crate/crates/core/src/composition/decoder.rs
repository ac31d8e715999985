//! Practical mode: a monitor that turns the receiver's observations into class tokens.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::automata::graph;
use crate::error::{Error, Result};
use crate::infoflow::InfoClass;
use crate::machine::MooreMachine;
use crate::model::{letter_to_string, Architecture, Letter, Proc};

use super::{assemble, explore, merge_labels, project_letter, wire, ComposedSystem, MAX_PRODUCT_STATES};

/// Deterministic Mealy monitor over the receiver's observations. Each state is a set of
/// hypotheses (sender state, hidden prefix so far); `emit[d][o]` is the token raised when
/// observation `o` collapses the consistent classes to one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassDecoder {
    pub obs_vars: Vec<String>,
    pub tokens: Vec<String>,
    pub init: usize,
    pub next: Vec<Vec<usize>>,
    pub emit: Vec<Vec<Option<usize>>>,
    /// Hypothesis count per state (0 for the sink and the settled state).
    pub hypotheses: Vec<usize>,
}

impl ClassDecoder {
    pub fn num_states(&self) -> usize {
        self.next.len()
    }

    /// Tokens raised along an observation word.
    pub fn run(&self, obs: &[Letter]) -> Vec<Option<usize>> {
        let mut d = self.init;
        obs.iter()
            .map(|&o| {
                let t = self.emit[d][o as usize];
                d = self.next[d][o as usize];
                t
            })
            .collect()
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("observes {}\ntokens {}\n", self.obs_vars.join(" "), self.tokens.join(" "));
        for d in 0..self.num_states() {
            let row: Vec<String> = (0..self.next[d].len())
                .map(|o| match self.emit[d][o] {
                    Some(k) => format!("{}/{}", self.next[d][o], self.tokens[k]),
                    None => self.next[d][o].to_string(),
                })
                .collect();
            s += &format!("state {d} ({} hypotheses) -> {}\n", self.hypotheses[d], row.join(" "));
        }
        s
    }
}

type Hyp = (usize, Vec<Letter>);

#[derive(Clone, PartialEq, Eq, Hash)]
enum DState {
    Open(BTreeSet<Hyp>),
    Settled,
}

/// Subset construction over the sender for the classes of `receiver`.
pub fn build_class_decoder(sender: &MooreMachine, classes: &[InfoClass], arch: &Architecture, receiver: Proc) -> Result<ClassDecoder> {
    let env: Vec<String> = arch.outputs_e.iter().cloned().collect();
    if let Some(v) = sender.inputs.iter().find(|v| !arch.outputs_e.contains(*v)) {
        return Err(Error::AlphabetMismatch(format!("practical mode needs a sender reading only the environment, not `{v}`")));
    }
    if classes.is_empty() {
        return Err(Error::ClassCap("no classes".into()));
    }
    let hidden = classes[0].hidden.clone();
    if classes.iter().any(|c| c.hidden != hidden) {
        return Err(Error::ClassCap("classes over different hidden variables".into()));
    }
    let depth = classes.iter().map(|c| c.depth).max().unwrap_or(0);
    let nh = 1u64 << hidden.len();
    // every class as full-depth prefixes
    let mut owner: HashMap<Vec<Letter>, usize> = HashMap::new();
    for (k, c) in classes.iter().enumerate() {
        for p in &c.prefixes {
            let mut ext = vec![p.clone()];
            for _ in p.len()..depth {
                ext = ext.into_iter().flat_map(|x| (0..nh).map(move |h| [x.clone(), vec![h]].concat())).collect();
            }
            for x in ext {
                owner.insert(x, k);
            }
        }
    }
    let classes_of = |pfx: &[Letter]| -> BTreeSet<usize> {
        owner.iter().filter(|(x, _)| x.starts_with(pfx)).map(|(_, &k)| k).collect()
    };
    let obs_vars: Vec<String> = arch.plain_inputs(receiver).into_iter().collect();
    let vis: Vec<String> = arch.visible_env(receiver).into_iter().collect();
    let vis_in_obs: Vec<String> = obs_vars.iter().filter(|v| vis.contains(v)).cloned().collect();
    let sender_obs = wire(&sender.inputs, &env, &[], "the sender")?;
    let no = 1u64 << obs_vars.len();
    let ne = 1u64 << env.len();
    let obs_of = |s: usize, e: Letter| -> Letter {
        let full = e | sender.labels[s] << env.len();
        let names: Vec<String> = env.iter().chain(&sender.outputs).cloned().collect();
        project_letter(full, &names, &obs_vars)
    };
    let vis_of_obs = |o: Letter| project_letter(o, &obs_vars, &vis_in_obs);
    let vis_of_env = |e: Letter| project_letter(e, &env, &vis_in_obs);

    let start = DState::Open([(sender.init, vec![])].into());
    let mut idx: HashMap<DState, usize> = HashMap::from([(start.clone(), 0)]);
    let mut states = vec![start];
    let mut next = Vec::new();
    let mut emit = Vec::new();
    let mut i = 0;
    while i < states.len() {
        let mut nrow = Vec::new();
        let mut erow = Vec::new();
        for o in 0..no {
            let (succ, tok) = match &states[i] {
                DState::Settled => (DState::Settled, None),
                DState::Open(h) => {
                    // hypotheses whose current sender output and visible input match `o`
                    let live: Vec<&Hyp> =
                        h.iter().filter(|(s, _)| (0..ne).any(|e| vis_of_env(e) == vis_of_obs(o) && obs_of(*s, e) == o)).collect();
                    let ks: BTreeSet<usize> = live.iter().flat_map(|(_, p)| classes_of(p)).collect();
                    if ks.len() == 1 {
                        (DState::Settled, ks.into_iter().next())
                    } else {
                        let mut n = BTreeSet::new();
                        for (s, p) in live {
                            for e in (0..ne).filter(|&e| obs_of(*s, e) == o) {
                                let mut p2 = p.clone();
                                if p2.len() < depth {
                                    p2.push(project_letter(e, &env, &hidden));
                                }
                                n.insert((sender.step(*s, assemble(&sender_obs, e, &[])), p2));
                            }
                        }
                        (DState::Open(n), None)
                    }
                }
            };
            let j = match idx.get(&succ) {
                Some(&j) => j,
                None => {
                    if states.len() >= MAX_PRODUCT_STATES {
                        return Err(Error::CapExceeded("decoder too large".into()));
                    }
                    idx.insert(succ.clone(), states.len());
                    states.push(succ);
                    states.len() - 1
                }
            };
            nrow.push(j);
            erow.push(tok);
        }
        next.push(nrow);
        emit.push(erow);
        i += 1;
    }
    // a run that never collapses stays forever among open states with several classes
    let undecided: Vec<bool> = states
        .iter()
        .map(|d| match d {
            DState::Open(h) => h.iter().flat_map(|(_, p)| classes_of(p)).collect::<BTreeSet<_>>().len() > 1,
            DState::Settled => false,
        })
        .collect();
    let adj: Vec<Vec<usize>> = next
        .iter()
        .enumerate()
        .map(|(d, row)| if undecided[d] { row.iter().copied().filter(|&t| undecided[t]).collect() } else { vec![] })
        .collect();
    let (scc, _) = graph::scc_ids(&adj);
    for d in 0..states.len() {
        if undecided[d] && adj[d].iter().any(|&t| scc[t] == scc[d]) {
            let DState::Open(h) = &states[d] else { unreachable!() };
            let sample: Vec<String> = h.iter().take(4).map(|(s, p)| format!("({s}, {})", p.iter().map(|&l| letter_to_string(&hidden, l)).collect::<String>())).collect();
            return Err(Error::SenderDoesNotReveal(format!("hypotheses {} never collapse", sample.join(" "))));
        }
    }
    let hypotheses = states.iter().map(|d| if let DState::Open(h) = d { h.len() } else { 0 }).collect();
    Ok(ClassDecoder { obs_vars, tokens: classes.iter().map(|c| c.token.clone()).collect(), init: 0, next, emit, hypotheses })
}

/// Sender, decoder and class receiver in one synchronous round: the decoder sees the sender's
/// current output and raises its token in the same round; the receiver reads it.
pub fn compose_practical(sender: &MooreMachine, receiver: &MooreMachine, decoder: &ClassDecoder, arch: &Architecture) -> Result<ComposedSystem> {
    let env: Vec<String> = arch.outputs_e.iter().cloned().collect();
    for v in &receiver.inputs {
        let known = decoder.tokens.contains(v) || arch.outputs_e.contains(v) || sender.outputs.contains(v);
        if !known {
            return Err(Error::AlphabetMismatch(format!("receiver input `{v}` is neither a token nor observable")));
        }
    }
    let ws = wire(&sender.inputs, &env, &[], "the sender")?;
    let wo = wire(&decoder.obs_vars, &env, &[&sender.outputs], "the decoder")?;
    let wr = wire(&receiver.inputs, &env, &[&sender.outputs, &decoder.tokens], "the receiver")?;
    let outs = super::system_outputs(arch);
    explore(
        arch,
        vec![arch.name(Proc::P).to_string(), "decoder".to_string(), arch.name(Proc::Q).to_string()],
        vec![sender.init, decoder.init, receiver.init],
        |st, e| {
            let ls = sender.labels[st[0]];
            let o = assemble(&wo, e, &[ls]) as usize;
            let tok = decoder.emit[st[1]][o].map_or(0, |k| 1u64 << k);
            vec![
                sender.step(st[0], assemble(&ws, e, &[])),
                decoder.next[st[1]][o],
                receiver.step(st[2], assemble(&wr, e, &[ls, tok])),
            ]
        },
        |st| merge_labels(&outs, &[(&sender.outputs, sender.labels[st[0]]), (&receiver.outputs, receiver.labels[st[2]])]),
    )
}
