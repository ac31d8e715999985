//! Bounded synthesis through SAT.

mod bounded;
mod cnf;
mod solver;

pub use bounded::*;
pub use cnf::{CnfInstance, Lit};
pub use solver::{solve_cnf, Backend};
