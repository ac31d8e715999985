//! Benchmark families and the running example's variants.
//!
//! AC: one-shot atomic commit; the receiver raises `out` iff every environment input is true at
//! the first step. EC: the same with the inputs assumed to rise eventually. SA: the receiver
//! answers every sender input separately.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ltl::Ltl;
use crate::model::{Architecture, SystemSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    Ac,
    Ec,
    Sa,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ArchMode {
    Dir,
    Bidir,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Ac => "AC",
            Family::Ec => "EC",
            Family::Sa => "SA",
        })
    }
}

impl fmt::Display for ArchMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ArchMode::Dir => "dir",
            ArchMode::Bidir => "bidir",
        })
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ac" => Ok(Family::Ac),
            "ec" => Ok(Family::Ec),
            "sa" => Ok(Family::Sa),
            _ => Err(Error::Benchmark(format!("unknown family `{s}`"))),
        }
    }
}

impl FromStr for ArchMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "dir" => Ok(ArchMode::Dir),
            "bidir" => Ok(ArchMode::Bidir),
            _ => Err(Error::Benchmark(format!("unknown architecture mode `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkInstance {
    pub family: Family,
    pub param: usize,
    pub mode: ArchMode,
    pub spec: SystemSpec,
}

impl BenchmarkInstance {
    pub fn name(&self) -> String {
        format!("{} {} {}", self.family, self.mode, self.param)
    }
}

fn vars(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

fn s(v: &[&str]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}

fn atoms(vs: &[String]) -> Vec<Ltl> {
    vs.iter().map(|v| Ltl::atom(v)).collect()
}

pub fn gen_benchmark(family: Family, param: usize, mode: ArchMode) -> Result<BenchmarkInstance> {
    if param == 0 {
        return Err(Error::Benchmark("parameter must be at least 1".into()));
    }
    let spec = match mode {
        ArchMode::Dir => gen_dir(family, param)?,
        ArchMode::Bidir => gen_bidir(family, param)?,
    };
    Ok(BenchmarkInstance { family, param, mode, spec })
}

fn gen_dir(family: Family, n: usize) -> Result<SystemSpec> {
    let (xs, ys) = (vars("x", n), vars("y", n));
    match family {
        Family::Ac | Family::Ec => {
            let env: Vec<String> = xs.iter().chain(&ys).cloned().collect();
            let b_in: Vec<String> = ys.iter().cloned().chain(["c".to_string()]).collect();
            let arch = Architecture::new("a", "b", env.clone(), s(&["c"]), s(&["out"]), xs.clone(), b_in)?;
            let commit = Ltl::iff(Ltl::and_all(atoms(&env)), Ltl::finally(Ltl::atom("out")));
            let phi_b = if family == Family::Ac {
                commit
            } else {
                let eventually = Ltl::and_all(atoms(&env).into_iter().map(Ltl::finally));
                Ltl::implies(eventually, commit)
            };
            SystemSpec::new(arch, Ltl::True, phi_b)
        }
        Family::Sa => {
            let outs = vars("out", n);
            let arch = Architecture::new("a", "b", xs.clone(), s(&["c"]), outs.clone(), xs.clone(), s(&["c"]))?;
            let phi_b = Ltl::and_all(
                xs.iter().zip(&outs).map(|(x, o)| Ltl::iff(Ltl::atom(x), Ltl::finally(Ltl::atom(o)))),
            );
            SystemSpec::new(arch, Ltl::True, phi_b)
        }
    }
}

/// Two environment inputs per parameter step and one channel in each direction; both processes
/// carry the family's obligation.
fn gen_bidir(family: Family, n: usize) -> Result<SystemSpec> {
    let (xs, ys) = (vars("x", n), vars("y", n));
    let env: Vec<String> = xs.iter().chain(&ys).cloned().collect();
    let a_in: Vec<String> = xs.iter().cloned().chain(["cb".to_string()]).collect();
    let b_in: Vec<String> = ys.iter().cloned().chain(["ca".to_string()]).collect();
    let arch = Architecture::new("a", "b", env.clone(), s(&["ca", "outa"]), s(&["cb", "outb"]), a_in, b_in)?;
    let goal = |out: &str| -> Ltl {
        let commit = Ltl::iff(Ltl::and_all(atoms(&env)), Ltl::finally(Ltl::atom(out)));
        match family {
            Family::Ac => commit,
            Family::Ec => Ltl::implies(Ltl::and_all(atoms(&env).into_iter().map(Ltl::finally)), commit),
            Family::Sa => Ltl::and_all(atoms(&env).into_iter().map(|x| Ltl::implies(x, Ltl::finally(Ltl::atom(out))))),
        }
    };
    SystemSpec::new(arch, goal("outa"), goal("outb"))
}

/// The running example with a delayed start signal: the receiver must answer two steps after
/// `start`, which may come arbitrarily late.
pub fn start_variant() -> SystemSpec {
    let arch = Architecture::new("a", "b", ["in", "start"], ["c"], ["out"], ["in", "start"], ["c"]).expect("valid");
    let phi = Ltl::parse("(in -> (!start W (start & X X out))) & (!in -> (!start W (start & X X G !out)))").expect("formula");
    SystemSpec::new(arch, Ltl::True, phi).expect("valid")
}

/// The running example without the channel.
pub fn channel_less() -> SystemSpec {
    let arch = Architecture::new::<&str>("a", "b", ["in"], [], ["out"], ["in"], []).expect("valid");
    SystemSpec::new(arch, Ltl::True, Ltl::parse("in <-> F out").expect("formula")).expect("valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Proc;

    #[test]
    fn generated_specs() {
        let ac = gen_benchmark(Family::Ac, 1, ArchMode::Dir).unwrap();
        assert_eq!(ac.spec.phi(Proc::Q), &Ltl::parse("(x1 & y1) <-> F out").unwrap());
        assert_eq!(ac.spec.arch.hidden_env(Proc::Q).len(), 1);
        let sa = gen_benchmark(Family::Sa, 2, ArchMode::Dir).unwrap();
        assert_eq!(sa.spec.arch.inputs_p.len(), 2);
        assert_eq!(sa.spec.phi(Proc::Q), &Ltl::parse("(x1 <-> F out1) & (x2 <-> F out2)").unwrap());
        assert!(matches!(gen_benchmark(Family::Ac, 0, ArchMode::Dir), Err(Error::Benchmark(_))));
        for f in [Family::Ac, Family::Ec, Family::Sa] {
            for m in [ArchMode::Dir, ArchMode::Bidir] {
                let a = gen_benchmark(f, 2, m).unwrap();
                let text = a.spec.to_file_string();
                assert_eq!(text, gen_benchmark(f, 2, m).unwrap().spec.to_file_string());
                assert_eq!(SystemSpec::parse(&text).unwrap(), a.spec, "{text}");
            }
        }
        assert_eq!(SystemSpec::parse(&channel_less().to_file_string()).unwrap(), channel_less());
        assert_eq!("ec".parse::<Family>().unwrap(), Family::Ec);
    }
}
