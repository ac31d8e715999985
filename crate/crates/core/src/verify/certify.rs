//! End-to-end certification of a solution.

use serde::{Deserialize, Serialize};

use crate::composition::{compose_hyper, knowledge_consistency, prefix_agreement, ComposedSystem};
use crate::error::Result;
use crate::ltl::Ltl;
use crate::machine::MooreMachine;
use crate::model::{letter_to_string, Proc, SystemSpec};

use super::{check_ifa, model_check, Verdict};

/// Artifacts of a solved instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionBundle {
    pub composed: ComposedSystem,
    pub local_p: MooreMachine,
    pub local_q: MooreMachine,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertifyConfig {
    pub knowledge_depth: usize,
    pub agreement_depth: usize,
    pub max_rank: usize,
}

impl Default for CertifyConfig {
    fn default() -> Self {
        CertifyConfig { knowledge_depth: 6, agreement_depth: 8, max_rank: 4 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Report {
    pub checks: Vec<CheckResult>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }

    fn push(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(CheckResult { name: name.into(), passed, detail: detail.into() });
    }

    fn verdict(&mut self, name: String, v: Result<Verdict>) {
        match v {
            Ok(v) => self.push(name, v.holds(), v.describe()),
            Err(e) => self.push(name, false, e.to_string()),
        }
    }

    pub fn to_table(&self) -> String {
        let w = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
        self.checks
            .iter()
            .map(|c| format!("{:w$}  {}  {}\n", c.name, if c.passed { "ok  " } else { "FAIL" }, c.detail))
            .collect()
    }

    /// `key=value` lines.
    pub fn to_rows(&self) -> String {
        self.checks
            .iter()
            .map(|c| format!("check={} passed={} detail={:?}\n", c.name, c.passed, c.detail))
            .collect()
    }
}

/// Model checking of both local specifications, both information-flow assumptions, knowledge
/// consistency, prefix agreement with the local strategies, and the local pair against φ.
pub fn certify_end_to_end(spec: &SystemSpec, bundle: &SolutionBundle, cfg: &CertifyConfig) -> Report {
    let mut r = Report::default();
    let h = &bundle.composed;
    let arch = &spec.arch;
    let phi = Ltl::and(spec.phi_p.clone(), spec.phi_q.clone());
    r.verdict("model-check".into(), model_check(&h.machine, &phi));
    for p in [Proc::P, Proc::Q] {
        r.verdict(format!("ifa-{}", arch.name(p)), check_ifa(h, spec.phi(p), p, cfg.max_rank));
    }
    for p in [Proc::P, Proc::Q] {
        let vars: Vec<String> = arch.plain_inputs(p).into_iter().collect();
        match knowledge_consistency(h, p, cfg.knowledge_depth) {
            None => r.push(format!("knowledge-{}", arch.name(p)), true, format!("consistent to depth {}", cfg.knowledge_depth)),
            Some(v) => {
                let w: String = v.iter().map(|&l| letter_to_string(&vars, l)).collect();
                r.push(format!("knowledge-{}", arch.name(p)), false, format!("outputs differ after local word {w}"))
            }
        }
    }
    let env: Vec<String> = arch.outputs_e.iter().cloned().collect();
    match prefix_agreement(h, &bundle.local_p, &bundle.local_q, cfg.agreement_depth) {
        Ok(None) => r.push("prefix-agreement", true, format!("agrees to depth {}", cfg.agreement_depth)),
        Ok(Some(w)) => {
            let w: String = w.iter().map(|&l| letter_to_string(&env, l)).collect();
            r.push("prefix-agreement", false, format!("differs after env word {w}"))
        }
        Err(e) => r.push("prefix-agreement", false, e.to_string()),
    }
    let locals = compose_hyper(&bundle.local_p, &bundle.local_q, arch);
    r.verdict("local-pair".into(), locals.and_then(|l| model_check(&l.machine, &phi)));
    r
}
