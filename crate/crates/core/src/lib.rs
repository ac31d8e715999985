//! Information-flow guided compositional synthesis for two-process distributed reactive systems.

pub mod error;
pub mod ltl;
pub mod automata;
pub mod model;
pub mod infoflow;
pub mod machine;
pub mod reference;
pub mod synthesis;
pub mod composition;
pub mod verify;
pub mod bench;
pub mod pipeline;

pub use error::{Error, Result};
pub use ltl::{eval_ltl, Atom, Ltl};
pub use machine::MooreMachine;
pub use model::{Architecture, LassoWord, Letter, Owner, Proc, SystemSpec, Variable};
