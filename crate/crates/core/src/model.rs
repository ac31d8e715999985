//! Variables, architectures, lasso words and system specifications.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ltl::Ltl;

/// Who controls a variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Owner {
    Environment,
    ProcessP,
    ProcessQ,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Variable {
    pub name: String,
    pub owner: Owner,
}

/// One of the two black-box processes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Proc {
    P,
    Q,
}

impl Proc {
    pub fn other(self) -> Proc {
        match self {
            Proc::P => Proc::Q,
            Proc::Q => Proc::P,
        }
    }
}

/// Variable partition of a two-process system. All variables are boolean.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Architecture {
    pub name_p: String,
    pub name_q: String,
    pub inputs_p: BTreeSet<String>,
    pub inputs_q: BTreeSet<String>,
    pub outputs_p: BTreeSet<String>,
    pub outputs_q: BTreeSet<String>,
    pub outputs_e: BTreeSet<String>,
}

fn set<I: IntoIterator<Item = S>, S: Into<String>>(it: I) -> BTreeSet<String> {
    it.into_iter().map(Into::into).collect()
}

impl Architecture {
    #[allow(clippy::too_many_arguments)]
    pub fn new<S: Into<String>>(
        name_p: &str,
        name_q: &str,
        outputs_e: impl IntoIterator<Item = S>,
        outputs_p: impl IntoIterator<Item = S>,
        outputs_q: impl IntoIterator<Item = S>,
        inputs_p: impl IntoIterator<Item = S>,
        inputs_q: impl IntoIterator<Item = S>,
    ) -> Result<Self> {
        let arch = Architecture {
            name_p: name_p.into(),
            name_q: name_q.into(),
            inputs_p: set(inputs_p),
            inputs_q: set(inputs_q),
            outputs_p: set(outputs_p),
            outputs_q: set(outputs_q),
            outputs_e: set(outputs_e),
        };
        arch.validate()?;
        Ok(arch)
    }

    /// The bit transmission architecture: `a` reads `in` and writes `c`, `b` reads `c` and writes `out`.
    pub fn bit_transmission() -> Self {
        Architecture::new("a", "b", ["in"], ["c"], ["out"], ["in"], ["c"]).expect("valid")
    }

    pub fn validate(&self) -> Result<()> {
        if self.name_p == self.name_q {
            return Err(Error::Architecture("process names must differ".into()));
        }
        let pairs = [
            (&self.outputs_p, &self.outputs_q, "O_p and O_q overlap"),
            (&self.outputs_p, &self.outputs_e, "O_p and O_e overlap"),
            (&self.outputs_q, &self.outputs_e, "O_q and O_e overlap"),
            (&self.inputs_p, &self.outputs_p, "I_p and O_p overlap"),
            (&self.inputs_q, &self.outputs_q, "I_q and O_q overlap"),
        ];
        for (a, b, msg) in pairs {
            if let Some(v) = a.intersection(b).next() {
                return Err(Error::Architecture(format!("partition violated: {msg} on `{v}`")));
            }
        }
        for v in &self.inputs_p {
            if !self.outputs_q.contains(v) && !self.outputs_e.contains(v) {
                return Err(Error::Architecture(format!(
                    "connectivity violated: input `{v}` of {} is not an output of {} or the environment",
                    self.name_p, self.name_q
                )));
            }
        }
        for v in &self.inputs_q {
            if !self.outputs_p.contains(v) && !self.outputs_e.contains(v) {
                return Err(Error::Architecture(format!(
                    "connectivity violated: input `{v}` of {} is not an output of {} or the environment",
                    self.name_q, self.name_p
                )));
            }
        }
        Ok(())
    }

    pub fn name(&self, p: Proc) -> &str {
        match p {
            Proc::P => &self.name_p,
            Proc::Q => &self.name_q,
        }
    }

    pub fn proc_by_name(&self, name: &str) -> Option<Proc> {
        if name == self.name_p {
            Some(Proc::P)
        } else if name == self.name_q {
            Some(Proc::Q)
        } else {
            None
        }
    }

    pub fn inputs(&self, p: Proc) -> &BTreeSet<String> {
        match p {
            Proc::P => &self.inputs_p,
            Proc::Q => &self.inputs_q,
        }
    }

    pub fn outputs(&self, p: Proc) -> &BTreeSet<String> {
        match p {
            Proc::P => &self.outputs_p,
            Proc::Q => &self.outputs_q,
        }
    }

    /// Environment outputs that `p` reads directly.
    pub fn visible_env(&self, p: Proc) -> BTreeSet<String> {
        self.inputs(p).intersection(&self.outputs_e).cloned().collect()
    }

    /// Environment outputs that `p` does not read.
    pub fn hidden_env(&self, p: Proc) -> BTreeSet<String> {
        self.outputs_e.difference(self.inputs(p)).cloned().collect()
    }

    /// The bound marker read by `p` and written by the partner. A declared partner output
    /// named `t` or `t_<p>` that `p` reads plays this role; otherwise `t_<p>` is implied.
    pub fn t_var(&self, p: Proc) -> String {
        self.declared_marker(p).unwrap_or_else(|| format!("t_{}", self.name(p)))
    }

    pub fn declared_marker(&self, p: Proc) -> Option<String> {
        let own = format!("t_{}", self.name(p));
        self.outputs(p.other())
            .intersection(self.inputs(p))
            .find(|v| *v == "t" || **v == own)
            .cloned()
    }

    /// Outputs of `p` without the marker it writes for the partner.
    pub fn plain_outputs(&self, p: Proc) -> BTreeSet<String> {
        let mut s = self.outputs(p).clone();
        if let Some(m) = self.declared_marker(p.other()) {
            s.remove(&m);
        }
        s
    }

    /// Inputs of `p` without its own marker.
    pub fn plain_inputs(&self, p: Proc) -> BTreeSet<String> {
        let mut s = self.inputs(p).clone();
        if let Some(m) = self.declared_marker(p) {
            s.remove(&m);
        }
        s
    }

    /// A copy without declared markers (the analyses add them as needed).
    pub fn without_markers(&self) -> Architecture {
        let mut a = self.clone();
        for p in [Proc::P, Proc::Q] {
            if let Some(m) = self.declared_marker(p) {
                match p {
                    Proc::P => {
                        a.inputs_p.remove(&m);
                        a.outputs_q.remove(&m);
                    }
                    Proc::Q => {
                        a.inputs_q.remove(&m);
                        a.outputs_p.remove(&m);
                    }
                }
            }
        }
        a
    }

    /// Parses the section-based file format (sections `[variables]` and `[architecture]`).
    pub fn parse(text: &str) -> Result<Architecture> {
        Ok(parse_spec_file(text, false)?.arch)
    }

    pub fn all_vars(&self) -> BTreeSet<String> {
        let mut s = self.outputs_e.clone();
        s.extend(self.outputs_p.iter().cloned());
        s.extend(self.outputs_q.iter().cloned());
        s
    }

    pub fn variables(&self) -> Vec<Variable> {
        let mut v = Vec::new();
        for (names, owner) in [
            (&self.outputs_e, Owner::Environment),
            (&self.outputs_p, Owner::ProcessP),
            (&self.outputs_q, Owner::ProcessQ),
        ] {
            v.extend(names.iter().map(|n| Variable { name: n.clone(), owner }));
        }
        v
    }
}

/// Two local LTL specifications over an architecture.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemSpec {
    pub arch: Architecture,
    pub phi_p: Ltl,
    pub phi_q: Ltl,
}

impl SystemSpec {
    pub fn new(arch: Architecture, phi_p: Ltl, phi_q: Ltl) -> Result<Self> {
        for (phi, p) in [(&phi_p, Proc::P), (&phi_q, Proc::Q)] {
            for a in phi.atoms() {
                if !arch.outputs(p).contains(&a) && !arch.outputs_e.contains(&a) {
                    return Err(Error::Architecture(format!(
                        "specification of {} mentions `{a}` outside its outputs and the environment outputs",
                        arch.name(p)
                    )));
                }
            }
        }
        Ok(SystemSpec { arch, phi_p, phi_q })
    }

    pub fn phi(&self, p: Proc) -> &Ltl {
        match p {
            Proc::P => &self.phi_p,
            Proc::Q => &self.phi_q,
        }
    }

    pub fn bit_transmission() -> Self {
        let arch = Architecture::bit_transmission();
        let phi_b = Ltl::parse("in <-> F out").expect("formula");
        SystemSpec::new(arch, Ltl::True, phi_b).expect("valid")
    }

    pub fn parse(text: &str) -> Result<SystemSpec> {
        parse_spec_file(text, true)
    }

    /// Renders the spec in the file format accepted by [`SystemSpec::parse`].
    pub fn to_file_string(&self) -> String {
        let a = &self.arch;
        let list = |s: &BTreeSet<String>| s.iter().cloned().collect::<Vec<_>>().join(", ");
        let mut out = String::new();
        out.push_str("[variables]\n");
        out.push_str(&format!("env = {}\n", list(&a.outputs_e)));
        out.push_str(&format!("{} = {}\n", a.name_p, list(&a.outputs_p)));
        out.push_str(&format!("{} = {}\n", a.name_q, list(&a.outputs_q)));
        out.push_str("\n[architecture]\n");
        out.push_str(&format!("{} reads {}\n", a.name_p, list(&a.inputs_p)));
        out.push_str(&format!("{} reads {}\n", a.name_q, list(&a.inputs_q)));
        out.push_str(&format!("\n[spec {}]\n{}\n", a.name_p, self.phi_p));
        out.push_str(&format!("\n[spec {}]\n{}\n", a.name_q, self.phi_q));
        out
    }
}

fn parse_spec_file(text: &str, need_specs: bool) -> Result<SystemSpec> {
    #[derive(PartialEq)]
    enum Sec {
        None,
        Vars,
        Arch,
        Spec(String),
    }
    let mut sec = Sec::None;
    let mut env: Option<(usize, BTreeSet<String>)> = None;
    let mut procs: Vec<(String, BTreeSet<String>)> = Vec::new();
    let mut reads: Vec<(usize, String, BTreeSet<String>)> = Vec::new();
    let mut specs: Vec<(usize, String, Vec<String>)> = Vec::new();
    let names = |s: &str| -> BTreeSet<String> {
        s.split(',').map(str::trim).filter(|x| !x.is_empty()).map(String::from).collect()
    };
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(h) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            let h = h.trim();
            sec = match h {
                "variables" => Sec::Vars,
                "architecture" => Sec::Arch,
                _ => match h.strip_prefix("spec") {
                    Some(p) if !p.trim().is_empty() => {
                        specs.push((line_no, p.trim().to_string(), Vec::new()));
                        Sec::Spec(p.trim().to_string())
                    }
                    _ => return Err(Error::SpecFile { line: line_no, msg: format!("unknown section `{h}`") }),
                },
            };
            continue;
        }
        match &sec {
            Sec::None => return Err(Error::SpecFile { line: line_no, msg: "content outside a section".into() }),
            Sec::Vars => {
                let (lhs, rhs) = line
                    .split_once('=')
                    .ok_or_else(|| Error::SpecFile { line: line_no, msg: "expected `owner = vars`".into() })?;
                let lhs = lhs.trim();
                if lhs == "env" {
                    env = Some((line_no, names(rhs)));
                } else if let Some(p) = procs.iter_mut().find(|(n, _)| n == lhs) {
                    p.1.extend(names(rhs));
                } else {
                    procs.push((lhs.to_string(), names(rhs)));
                }
            }
            Sec::Arch => {
                let (lhs, rhs) = line
                    .split_once(" reads")
                    .ok_or_else(|| Error::SpecFile { line: line_no, msg: "expected `process reads vars`".into() })?;
                reads.push((line_no, lhs.trim().to_string(), names(rhs)));
            }
            Sec::Spec(_) => specs.last_mut().expect("section").2.push(line.to_string()),
        }
    }
    let env = env.map(|e| e.1).unwrap_or_default();
    if procs.len() != 2 {
        return Err(Error::SpecFile { line: 0, msg: format!("expected exactly two processes, found {}", procs.len()) });
    }
    let declared: BTreeSet<String> = env.iter().chain(procs[0].1.iter()).chain(procs[1].1.iter()).cloned().collect();
    let mut inputs = [BTreeSet::new(), BTreeSet::new()];
    for (line, p, vs) in reads {
        let idx = procs
            .iter()
            .position(|(n, _)| *n == p)
            .ok_or_else(|| Error::SpecFile { line, msg: format!("unknown process `{p}`") })?;
        for v in &vs {
            if !declared.contains(v) {
                return Err(Error::UndeclaredVariable(v.clone()));
            }
        }
        inputs[idx].extend(vs);
    }
    let [ip, iq] = inputs;
    let arch = Architecture {
        name_p: procs[0].0.clone(),
        name_q: procs[1].0.clone(),
        inputs_p: ip,
        inputs_q: iq,
        outputs_p: procs[0].1.clone(),
        outputs_q: procs[1].1.clone(),
        outputs_e: env,
    };
    arch.validate()?;
    let mut phis = [Ltl::True, Ltl::True];
    for (line, p, lines) in &specs {
        let idx = procs
            .iter()
            .position(|(n, _)| n == p)
            .ok_or_else(|| Error::SpecFile { line: *line, msg: format!("spec for unknown process `{p}`") })?;
        let mut conj = Vec::new();
        for l in lines {
            conj.push(Ltl::parse_with_vars(l, &declared)?);
        }
        phis[idx] = Ltl::and_all(conj);
    }
    if need_specs && specs.is_empty() {
        return Err(Error::SpecFile { line: 0, msg: "no [spec] sections".into() });
    }
    let [phi_p, phi_q] = phis;
    SystemSpec::new(arch, phi_p, phi_q)
}

/// A valuation over an ordered variable list, stored as a bitset (bit `i` is `vars[i]`).
pub type Letter = u64;

/// Renders a letter as `{a,b}`.
pub fn letter_to_string(vars: &[String], l: Letter) -> String {
    let names: Vec<&str> = vars
        .iter()
        .enumerate()
        .filter(|(i, _)| l >> i & 1 == 1)
        .map(|(_, v)| v.as_str())
        .collect();
    format!("{{{}}}", names.join(","))
}

pub fn letter_from_names<'a>(vars: &[String], names: impl IntoIterator<Item = &'a str>) -> Result<Letter> {
    let mut l = 0;
    for n in names {
        let i = vars
            .iter()
            .position(|v| v == n)
            .ok_or_else(|| Error::UndeclaredVariable(n.to_string()))?;
        l |= 1 << i;
    }
    Ok(l)
}

/// Ultimately periodic word `stem · loop^ω`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LassoWord {
    pub vars: Vec<String>,
    pub stem: Vec<Letter>,
    pub cycle: Vec<Letter>,
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

impl LassoWord {
    pub fn new(vars: Vec<String>, stem: Vec<Letter>, cycle: Vec<Letter>) -> Result<Self> {
        if cycle.is_empty() {
            return Err(Error::Shape("loop must be nonempty".into()));
        }
        let mask = full_mask(vars.len());
        if stem.iter().chain(cycle.iter()).any(|l| l & !mask != 0) {
            return Err(Error::Shape("valuation outside the alphabet".into()));
        }
        Ok(LassoWord { vars, stem, cycle })
    }

    /// Parses `{a} {} | {b}`: letters of the stem, a bar, letters of the loop.
    pub fn parse(vars: &[&str], text: &str) -> Result<Self> {
        let vars: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
        let (stem_s, loop_s) = text
            .split_once('|')
            .ok_or_else(|| Error::Syntax { pos: 0, msg: "lasso needs `|`".into() })?;
        let parse_part = |s: &str| -> Result<Vec<Letter>> {
            let mut out = Vec::new();
            let mut rest = s.trim();
            while !rest.is_empty() {
                let open = rest
                    .find('{')
                    .ok_or_else(|| Error::Syntax { pos: 0, msg: format!("expected `{{` in `{rest}`") })?;
                let close = rest
                    .find('}')
                    .ok_or_else(|| Error::Syntax { pos: 0, msg: format!("expected `}}` in `{rest}`") })?;
                let inner = &rest[open + 1..close];
                let names = inner.split(',').map(str::trim).filter(|n| !n.is_empty());
                out.push(letter_from_names(&vars, names)?);
                rest = rest[close + 1..].trim();
            }
            Ok(out)
        };
        let stem = parse_part(stem_s)?;
        let cycle = parse_part(loop_s)?;
        LassoWord::new(vars, stem, cycle)
    }

    pub fn len(&self) -> usize {
        self.stem.len() + self.cycle.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn letter(&self, i: usize) -> Letter {
        if i < self.stem.len() {
            self.stem[i]
        } else {
            self.cycle[(i - self.stem.len()) % self.cycle.len()]
        }
    }

    /// Position following `i` in the finite lasso graph.
    pub fn succ(&self, i: usize) -> usize {
        if i + 1 < self.len() {
            i + 1
        } else {
            self.stem.len()
        }
    }

    /// Same word with the given stem length and loop length.
    pub fn reshape(&self, stem_len: usize, loop_len: usize) -> Result<Self> {
        if stem_len < self.stem.len() || loop_len % self.cycle.len() != 0 || loop_len == 0 {
            return Err(Error::Shape(format!(
                "cannot reshape ({},{}) to ({stem_len},{loop_len})",
                self.stem.len(),
                self.cycle.len()
            )));
        }
        let stem = (0..stem_len).map(|i| self.letter(i)).collect();
        let cycle = (stem_len..stem_len + loop_len).map(|i| self.letter(i)).collect();
        LassoWord::new(self.vars.clone(), stem, cycle)
    }

    /// Reshapes both words to a common shape.
    pub fn align(a: &LassoWord, b: &LassoWord) -> Result<(LassoWord, LassoWord)> {
        let s = a.stem.len().max(b.stem.len());
        let l = lcm(a.cycle.len(), b.cycle.len());
        Ok((a.reshape(s, l)?, b.reshape(s, l)?))
    }

    /// Pointwise intersection of every valuation with `keep`.
    pub fn project(&self, keep: &BTreeSet<String>) -> LassoWord {
        let vars: Vec<String> = self.vars.iter().filter(|v| keep.contains(*v)).cloned().collect();
        let map = |l: Letter| -> Letter {
            let mut out = 0;
            for (j, v) in vars.iter().enumerate() {
                let i = self.vars.iter().position(|x| x == v).unwrap();
                if l >> i & 1 == 1 {
                    out |= 1 << j;
                }
            }
            out
        };
        LassoWord {
            stem: self.stem.iter().map(|&l| map(l)).collect(),
            cycle: self.cycle.iter().map(|&l| map(l)).collect(),
            vars,
        }
    }

    /// Pointwise union of two words over disjoint alphabets.
    pub fn combine(a: &LassoWord, b: &LassoWord) -> Result<LassoWord> {
        if let Some(v) = a.vars.iter().find(|v| b.vars.contains(v)) {
            return Err(Error::AlphabetMismatch(format!("combine needs disjoint alphabets; `{v}` shared")));
        }
        if a.vars.len() + b.vars.len() > 64 {
            return Err(Error::AlphabetMismatch("more than 64 variables".into()));
        }
        let (a, b) = LassoWord::align(a, b)?;
        let shift = a.vars.len();
        let mut vars = a.vars.clone();
        vars.extend(b.vars.iter().cloned());
        let join = |x: &[Letter], y: &[Letter]| x.iter().zip(y).map(|(p, q)| p | (q << shift)).collect();
        Ok(LassoWord { stem: join(&a.stem, &b.stem), cycle: join(&a.cycle, &b.cycle), vars })
    }

    /// Re-expresses the word over `vars` (a superset of its alphabet; new variables are false).
    pub fn widen(&self, vars: &[String]) -> Result<LassoWord> {
        let idx: Vec<usize> = self
            .vars
            .iter()
            .map(|v| {
                vars.iter()
                    .position(|x| x == v)
                    .ok_or_else(|| Error::AlphabetMismatch(format!("`{v}` missing in target alphabet")))
            })
            .collect::<Result<_>>()?;
        let map = |l: Letter| -> Letter {
            idx.iter().enumerate().filter(|(i, _)| l >> i & 1 == 1).fold(0, |acc, (_, &j)| acc | 1 << j)
        };
        Ok(LassoWord {
            vars: vars.to_vec(),
            stem: self.stem.iter().map(|&l| map(l)).collect(),
            cycle: self.cycle.iter().map(|&l| map(l)).collect(),
        })
    }

    /// Renames every variable `x` to `x[idx]`.
    pub fn indexed(&self, idx: u8) -> LassoWord {
        LassoWord {
            vars: self.vars.iter().map(|v| indexed_name(v, idx)).collect(),
            stem: self.stem.clone(),
            cycle: self.cycle.clone(),
        }
    }

    /// Zips two words over the same alphabet into a word over the pair alphabet `x[0]`, `x[1]`.
    pub fn pair(left: &LassoWord, right: &LassoWord) -> Result<LassoWord> {
        if left.vars != right.vars {
            return Err(Error::AlphabetMismatch("pair components must share an alphabet".into()));
        }
        LassoWord::combine(&left.indexed(0), &right.indexed(1))
    }

    /// Splits a pair word back into its two components.
    pub fn unpair(&self) -> Result<(LassoWord, LassoWord)> {
        let mut base = Vec::new();
        for v in &self.vars {
            let (n, _) = split_indexed(v).ok_or_else(|| Error::AlphabetMismatch(format!("`{v}` is not indexed")))?;
            if !base.contains(&n.to_string()) {
                base.push(n.to_string());
            }
        }
        let side = |i: u8| -> LassoWord {
            let keep: BTreeSet<String> = base.iter().map(|b| indexed_name(b, i)).collect();
            let w = self.project(&keep);
            let w = w.widen(&base.iter().map(|b| indexed_name(b, i)).collect::<Vec<_>>()).unwrap();
            LassoWord { vars: base.clone(), stem: w.stem, cycle: w.cycle }
        };
        Ok((side(0), side(1)))
    }

    /// All lassos over `vars` with stem length ≤ `max_stem` and loop length in `1..=max_loop`.
    pub fn enumerate(vars: &[String], max_stem: usize, max_loop: usize) -> Vec<LassoWord> {
        let n = 1u64 << vars.len();
        let words = |len: usize| -> Vec<Vec<Letter>> {
            let mut out = vec![vec![]];
            for _ in 0..len {
                out = out
                    .into_iter()
                    .flat_map(|w| {
                        (0..n).map(move |l| {
                            let mut w2 = w.clone();
                            w2.push(l);
                            w2
                        })
                    })
                    .collect();
            }
            out
        };
        let mut res = Vec::new();
        for sl in 0..=max_stem {
            for ll in 1..=max_loop {
                for s in words(sl) {
                    for l in words(ll) {
                        res.push(LassoWord { vars: vars.to_vec(), stem: s.clone(), cycle: l });
                    }
                }
            }
        }
        res
    }
}

impl fmt::Display for LassoWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let part = |ls: &[Letter]| ls.iter().map(|&l| letter_to_string(&self.vars, l)).collect::<Vec<_>>().join(" ");
        write!(f, "{} | {}", part(&self.stem), part(&self.cycle))
    }
}

pub fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

pub fn indexed_name(v: &str, idx: u8) -> String {
    format!("{v}[{idx}]")
}

pub fn split_indexed(v: &str) -> Option<(&str, u8)> {
    let open = v.rfind('[')?;
    let idx = v[open + 1..].strip_suffix(']')?.parse().ok()?;
    Some((&v[..open], idx))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn architecture_invariants() {
        assert!(Architecture::new("a", "b", ["in"], ["c"], ["c"], ["in"], ["c"]).is_err());
        let e = Architecture::new("a", "b", ["in"], ["c"], ["out"], ["c"], ["c"]).unwrap_err();
        assert!(e.to_string().contains("connectivity") || e.to_string().contains("partition"));
        let e = Architecture::new("a", "b", ["in"], ["c"], ["out"], ["in", "x"], ["c"]).unwrap_err();
        assert!(e.to_string().contains("connectivity"));
        let a = Architecture::bit_transmission();
        assert_eq!(a.hidden_env(Proc::Q), set(["in"]));
        assert!(a.visible_env(Proc::Q).is_empty());
    }

    #[test]
    fn project_and_combine() {
        let w = LassoWord::parse(&["in", "c"], "{in,c} | {c}").unwrap();
        let p = w.project(&set(["c"]));
        assert_eq!(p, LassoWord::parse(&["c"], "{c} | {c}").unwrap());
        let e = w.project(&BTreeSet::new());
        assert_eq!((e.stem.len(), e.cycle.len()), (1, 1));
        assert!(e.stem.iter().chain(&e.cycle).all(|&l| l == 0));

        let a = LassoWord::parse(&["in"], "{in} | {}").unwrap();
        let b = LassoWord::parse(&["out"], " | {out}").unwrap();
        let c = LassoWord::combine(&a, &b).unwrap();
        assert_eq!(c, LassoWord::parse(&["in", "out"], "{in,out} | {out}").unwrap());
        assert!(LassoWord::combine(&a, &a).is_err());
    }

    #[test]
    fn pair_roundtrip() {
        let a = LassoWord::parse(&["in"], "{in} | {}").unwrap();
        let b = LassoWord::parse(&["in"], " | {} {in}").unwrap();
        let p = LassoWord::pair(&a, &b).unwrap();
        let (x, y) = p.unpair().unwrap();
        assert_eq!(x, a.reshape(1, 2).unwrap());
        assert_eq!(y, b.reshape(1, 2).unwrap());
    }
}
