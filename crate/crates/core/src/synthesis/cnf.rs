//! Clause store with DIMACS-style signed literals (variables start at 1).

use std::fmt::Write;

use serde::{Deserialize, Serialize};

pub type Lit = i32;

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CnfInstance {
    pub num_vars: u32,
    pub clauses: Vec<Vec<Lit>>,
}

impl CnfInstance {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn fresh(&mut self) -> Lit {
        self.num_vars += 1;
        self.num_vars as Lit
    }

    pub fn fresh_vec(&mut self, n: usize) -> Vec<Lit> {
        (0..n).map(|_| self.fresh()).collect()
    }

    pub fn add(&mut self, clause: Vec<Lit>) {
        self.clauses.push(clause);
    }

    pub fn exactly_one(&mut self, lits: &[Lit]) {
        self.add(lits.to_vec());
        for i in 0..lits.len() {
            for j in i + 1..lits.len() {
                self.add(vec![-lits[i], -lits[j]]);
            }
        }
    }

    /// A literal `r` with `r → a ≥ b` (or `a > b` when `strict`), bit vectors least significant first.
    pub fn compare(&mut self, a: &[Lit], b: &[Lit], strict: bool) -> Lit {
        debug_assert_eq!(a.len(), b.len());
        // `None` stands for the constant of the empty comparison.
        let mut prev: Option<Lit> = None;
        for (&x, &y) in a.iter().zip(b) {
            let r = self.fresh();
            self.add(vec![-r, x, -y]);
            match prev {
                Some(p) => {
                    self.add(vec![-r, x, p]);
                    self.add(vec![-r, -y, p]);
                }
                None if strict => {
                    self.add(vec![-r, x]);
                    self.add(vec![-r, -y]);
                }
                None => {}
            }
            prev = Some(r);
        }
        match prev {
            Some(r) => r,
            None => {
                let r = self.fresh();
                if strict {
                    self.add(vec![-r]);
                }
                r
            }
        }
    }

    /// Whether `model` (indexed by variable, entry 0 unused) satisfies every clause.
    pub fn satisfied_by(&self, model: &[bool]) -> bool {
        self.clauses.iter().all(|c| c.iter().any(|&l| model[l.unsigned_abs() as usize] == (l > 0)))
    }

    pub fn to_dimacs(&self) -> String {
        let mut s = format!("p cnf {} {}\n", self.num_vars, self.clauses.len());
        for c in &self.clauses {
            for l in c {
                let _ = write!(s, "{l} ");
            }
            s.push_str("0\n");
        }
        s
    }
}
