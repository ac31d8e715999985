use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("undeclared variable `{0}`")]
    UndeclaredVariable(String),
    #[error("architecture invalid: {0}")]
    Architecture(String),
    #[error("spec file line {line}: {msg}")]
    SpecFile { line: usize, msg: String },
    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),
    #[error("incompatible lasso shapes: {0}")]
    Shape(String),
    #[error("unsupported fragment: {0}")]
    UnsupportedFragment(String),
    #[error("size cap exceeded: {0}")]
    CapExceeded(String),
    #[error("information classes: finiteness assumption violated or cap too low ({0})")]
    ClassCap(String),
    #[error("sender does not reveal class: {0}")]
    SenderDoesNotReveal(String),
    #[error("locality/IFA violated at local word {0}")]
    LocalityViolated(String),
    #[error("solver: {0}")]
    Solver(String),
    #[error("machine: {0}")]
    Machine(String),
    #[error("benchmark: {0}")]
    Benchmark(String),
    #[error("i/o: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
