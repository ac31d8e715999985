//! SAT backends: the embedded CDCL solver or an external DIMACS solver.

use std::io::Write as _;
use std::path::PathBuf;
use std::process::Command;

use varisat::{ExtendFormula, Solver};

use crate::error::{Error, Result};

use super::cnf::CnfInstance;

#[derive(Debug, Clone, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
pub enum Backend {
    #[default]
    Embedded,
    /// Executable reading a DIMACS file given as its only argument.
    External(PathBuf),
}

/// A satisfying assignment indexed by variable (entry 0 unused), or `None` if unsatisfiable.
pub fn solve_cnf(f: &CnfInstance, backend: &Backend) -> Result<Option<Vec<bool>>> {
    let model = match backend {
        Backend::Embedded => embedded(f)?,
        Backend::External(path) => external(f, path)?,
    };
    if let Some(m) = &model {
        if !f.satisfied_by(m) {
            return Err(Error::Solver("solver returned a model that violates the instance".into()));
        }
    }
    Ok(model)
}

fn embedded(f: &CnfInstance) -> Result<Option<Vec<bool>>> {
    let mut s = Solver::new();
    let vars: Vec<varisat::Var> = (0..f.num_vars).map(|_| s.new_var()).collect();
    for c in &f.clauses {
        let lits: Vec<varisat::Lit> =
            c.iter().map(|&l| varisat::Lit::from_var(vars[(l.unsigned_abs() - 1) as usize], l > 0)).collect();
        s.add_clause(&lits);
    }
    let sat = s.solve().map_err(|e| Error::Solver(e.to_string()))?;
    if !sat {
        return Ok(None);
    }
    let mut m = vec![false; f.num_vars as usize + 1];
    for l in s.model().unwrap_or_default() {
        m[l.var().index() + 1] = l.is_positive();
    }
    Ok(Some(m))
}

fn external(f: &CnfInstance, path: &PathBuf) -> Result<Option<Vec<bool>>> {
    let mut file = tempfile::NamedTempFile::new().map_err(|e| Error::Io(e.to_string()))?;
    file.write_all(f.to_dimacs().as_bytes()).map_err(|e| Error::Io(e.to_string()))?;
    let out = Command::new(path)
        .arg(file.path())
        .output()
        .map_err(|e| Error::Solver(format!("cannot run `{}`: {e}", path.display())))?;
    let text = String::from_utf8_lossy(&out.stdout);
    let mut status = match out.status.code() {
        Some(10) => Some(true),
        Some(20) => Some(false),
        _ => None,
    };
    let mut m = vec![false; f.num_vars as usize + 1];
    for line in text.lines() {
        let line = line.trim();
        if let Some(r) = line.strip_prefix("s ") {
            match r.trim() {
                "SATISFIABLE" => status = Some(true),
                "UNSATISFIABLE" => status = Some(false),
                _ => {}
            }
        } else if let Some(vals) = line.strip_prefix("v ") {
            for tok in vals.split_whitespace() {
                let l: i64 = tok.parse().map_err(|_| Error::Solver(format!("malformed model literal `{tok}`")))?;
                let v = l.unsigned_abs() as usize;
                if v > 0 && v < m.len() {
                    m[v] = l > 0;
                }
            }
        }
    }
    match status {
        Some(true) => Ok(Some(m)),
        Some(false) => Ok(None),
        None => Err(Error::Solver(format!("`{}` gave no verdict (exit status {:?})", path.display(), out.status.code()))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn tiny_instances() {
        let mut f = CnfInstance::new();
        let x = f.fresh();
        let y = f.fresh();
        f.add(vec![x]);
        f.add(vec![-x, y]);
        let m = solve_cnf(&f, &Backend::Embedded).unwrap().unwrap();
        assert!(m[1] && m[2]);
        f.add(vec![-x]);
        assert!(solve_cnf(&f, &Backend::Embedded).unwrap().is_none());
    }

    /// The embedded solver against exhaustive enumeration on random 3-CNF.
    #[test]
    fn random_3cnf_agrees_with_enumeration() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..30 {
            let n = 12;
            let mut f = CnfInstance::new();
            f.fresh_vec(n);
            for _ in 0..(n * 4) {
                let c = (0..3).map(|_| {
                    let v = rng.gen_range(1..=n as i32);
                    if rng.gen_bool(0.5) { v } else { -v }
                });
                f.add(c.collect());
            }
            let brute = (0..1u32 << n).any(|a| {
                let m: Vec<bool> = std::iter::once(false).chain((0..n).map(|i| a >> i & 1 == 1)).collect();
                f.satisfied_by(&m)
            });
            assert_eq!(solve_cnf(&f, &Backend::Embedded).unwrap().is_some(), brute);
        }
    }
}
