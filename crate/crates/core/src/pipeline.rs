//! The practical pipeline: classes, component specification, receiver and sender synthesis,
//! decoder, composition, local strategies and certification.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::composition::{build_class_decoder, compose_practical, extract_local_strategy, ClassDecoder};
use crate::error::{Error, Result};
use crate::infoflow::{build_component_spec, build_tb_dist_automaton, extract_info_classes, negated_tb_ifa, ClassCaps, ComponentSpec, InfoClass, TbDistAutomaton};
use crate::ltl::Ltl;
use crate::machine::MooreMachine;
use crate::model::{Proc, SystemSpec};
use crate::synthesis::{bounded_synthesize, Backend, Objective, SynthesisOutcome, SynthesisProblem};
use crate::verify::{certify_end_to_end, CertifyConfig, Report, SolutionBundle};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub bound_max: usize,
    pub class_caps: ClassCaps,
    pub max_rank: usize,
    pub backend: Backend,
    pub certify: CertifyConfig,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            bound_max: 8,
            class_caps: ClassCaps::default(),
            max_rank: 4,
            backend: Backend::Embedded,
            certify: CertifyConfig::default(),
        }
    }
}

/// Seconds per phase.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub analysis: f64,
    pub classes: f64,
    pub synthesis_p: f64,
    pub synthesis_q: f64,
    pub composition: f64,
    pub verification: f64,
}

impl Timings {
    pub fn total(&self) -> f64 {
        self.analysis + self.classes + self.synthesis_p + self.synthesis_q + self.composition + self.verification
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Outcome {
    Certified,
    CertificationFailed,
    Unrealizable { process: String, bound: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PracticalRun {
    pub outcome: Outcome,
    pub timings: Timings,
    pub classes: Vec<InfoClass>,
    pub component: ComponentSpec,
    pub receiver: Option<MooreMachine>,
    pub sender: Option<MooreMachine>,
    pub decoder: Option<ClassDecoder>,
    pub bundle: Option<SolutionBundle>,
    pub report: Option<Report>,
}

/// Distinguishability data and classes of the receiver `Q`.
pub fn receiver_classes(spec: &SystemSpec, caps: &ClassCaps) -> Result<(TbDistAutomaton, Vec<InfoClass>)> {
    let l = build_tb_dist_automaton(spec.phi(Proc::Q), &spec.arch, Proc::Q)?;
    let cs = extract_info_classes(&l, &spec.arch.hidden_env(Proc::Q), caps)?;
    Ok((l, cs))
}

pub fn receiver_problem(cspec: &ComponentSpec, bound_max: usize) -> SynthesisProblem {
    SynthesisProblem {
        inputs: cspec.inputs.clone(),
        outputs: cspec.outputs.clone(),
        objectives: vec![Objective::Trace(cspec.negated.clone())],
        bound_max,
    }
}

/// Sender objective: its own specification and the receiver's time-bounded assumption. The
/// sender reads only environment variables and writes its outputs and the receiver's marker.
pub fn sender_problem(spec: &SystemSpec, l_q: &TbDistAutomaton, bound_max: usize, max_rank: usize) -> Result<SynthesisProblem> {
    let arch = &spec.arch;
    let inputs: Vec<String> = arch.plain_inputs(Proc::P).into_iter().collect();
    if let Some(v) = inputs.iter().find(|v| !arch.outputs_e.contains(*v)) {
        return Err(Error::Architecture(format!("practical mode needs a one-directional architecture; {} reads `{v}`", arch.name(Proc::P))));
    }
    let mut outputs: Vec<String> = arch.plain_outputs(Proc::P).into_iter().collect();
    outputs.push(arch.t_var(Proc::Q));
    let mut objectives = Vec::new();
    if spec.phi_p != Ltl::True {
        objectives.push(Objective::ltl(&spec.phi_p));
    }
    let chi = negated_tb_ifa(l_q, arch, Proc::Q, max_rank)?;
    if chi.incomplete {
        log::warn!("rank bound reached while complementing the receiver's distinguishability relation");
    }
    objectives.push(Objective::Hyper(chi.nba));
    Ok(SynthesisProblem { inputs, outputs, objectives, bound_max })
}

fn secs(t: Instant) -> f64 {
    t.elapsed().as_secs_f64()
}

pub fn solve_practical(spec: &SystemSpec, cfg: &PipelineConfig) -> Result<PracticalRun> {
    let mut tm = Timings::default();
    let t = Instant::now();
    let (l, classes) = receiver_classes(spec, &cfg.class_caps)?;
    tm.classes = secs(t);
    let t = Instant::now();
    let component = build_component_spec(spec.phi(Proc::Q), &classes, &spec.arch, Proc::Q)?;
    let sp = sender_problem(spec, &l, cfg.bound_max, cfg.max_rank)?;
    tm.analysis = secs(t);
    let mut run = PracticalRun {
        outcome: Outcome::CertificationFailed,
        timings: tm,
        classes,
        component,
        receiver: None,
        sender: None,
        decoder: None,
        bundle: None,
        report: None,
    };
    let t = Instant::now();
    let r = bounded_synthesize(&receiver_problem(&run.component, cfg.bound_max), &cfg.backend)?;
    run.timings.synthesis_q = secs(t);
    let receiver = match r {
        SynthesisOutcome::Realized(m) => m,
        SynthesisOutcome::UnrealizableAtBound(b) => {
            run.outcome = Outcome::Unrealizable { process: spec.arch.name_q.clone(), bound: b };
            return Ok(run);
        }
    };
    run.receiver = Some(receiver.clone());
    let t = Instant::now();
    let s = bounded_synthesize(&sp, &cfg.backend)?;
    run.timings.synthesis_p = secs(t);
    let sender = match s {
        SynthesisOutcome::Realized(m) => m,
        SynthesisOutcome::UnrealizableAtBound(b) => {
            run.outcome = Outcome::Unrealizable { process: spec.arch.name_p.clone(), bound: b };
            return Ok(run);
        }
    };
    run.sender = Some(sender.clone());
    let t = Instant::now();
    let decoder = build_class_decoder(&sender, &run.classes, &spec.arch, Proc::Q)?;
    let composed = compose_practical(&sender, &receiver, &decoder, &spec.arch)?;
    let bundle = SolutionBundle {
        local_p: extract_local_strategy(&composed, Proc::P)?,
        local_q: extract_local_strategy(&composed, Proc::Q)?,
        composed,
    };
    run.decoder = Some(decoder);
    run.timings.composition = secs(t);
    let t = Instant::now();
    let report = certify_end_to_end(spec, &bundle, &cfg.certify);
    run.timings.verification = secs(t);
    run.outcome = if report.passed() { Outcome::Certified } else { Outcome::CertificationFailed };
    run.bundle = Some(bundle);
    run.report = Some(report);
    Ok(run)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bench::{channel_less, gen_benchmark, ArchMode, Family};

    #[test]
    fn running_example() {
        let s = SystemSpec::bit_transmission();
        let run = solve_practical(&s, &PipelineConfig::default()).unwrap();
        assert_eq!(run.outcome, Outcome::Certified, "{}", run.report.as_ref().map(|r| r.to_table()).unwrap_or_default());
        assert!(run.receiver.as_ref().unwrap().num_states() <= 3);
        assert!(run.sender.as_ref().unwrap().num_states() <= 3);
    }

    #[test]
    fn atomic_commit_one() {
        let b = gen_benchmark(Family::Ac, 1, ArchMode::Dir).unwrap();
        let run = solve_practical(&b.spec, &PipelineConfig::default()).unwrap();
        assert_eq!(run.outcome, Outcome::Certified, "{}", run.report.as_ref().map(|r| r.to_table()).unwrap_or_default());
    }

    #[test]
    fn no_channel_no_sender() {
        let run = solve_practical(&channel_less(), &PipelineConfig { bound_max: 3, ..Default::default() }).unwrap();
        assert_eq!(run.outcome, Outcome::Unrealizable { process: "a".into(), bound: 3 });
    }
}
