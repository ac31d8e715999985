//! Python bindings.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use ifsynth::bench::{gen_benchmark, ArchMode, Family};
use ifsynth::infoflow::{check_uniformity_capped, Uniformity, UniformityCaps};
use ifsynth::pipeline::{self, Outcome, PipelineConfig};
use ifsynth::verify::{self, Verdict};

fn err(e: ifsynth::Error) -> PyErr {
    match e {
        ifsynth::Error::Syntax { .. }
        | ifsynth::Error::SpecFile { .. }
        | ifsynth::Error::UndeclaredVariable(_)
        | ifsynth::Error::Architecture(_)
        | ifsynth::Error::Benchmark(_) => PyValueError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

fn proc_of(spec: &ifsynth::SystemSpec, name: &str) -> PyResult<ifsynth::Proc> {
    spec.arch.proc_by_name(name).ok_or_else(|| PyValueError::new_err(format!("no process named `{name}`")))
}

#[pyclass(name = "Ltl", from_py_object)]
#[derive(Clone)]
struct PyLtl(ifsynth::Ltl);

#[pymethods]
impl PyLtl {
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        ifsynth::Ltl::parse(text).map(PyLtl).map_err(err)
    }

    fn atoms(&self) -> Vec<String> {
        self.0.atoms().into_iter().collect()
    }

    /// Truth on the lasso `stem · cycle^ω` over `vars` (letters are bitsets).
    fn eval(&self, vars: Vec<String>, stem: Vec<u64>, cycle: Vec<u64>) -> PyResult<bool> {
        let w = ifsynth::LassoWord::new(vars, stem, cycle).map_err(err)?;
        ifsynth::eval_ltl(&w, &self.0).map_err(err)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Ltl({:?})", self.0.to_string())
    }
}

#[pyclass(name = "SystemSpec", from_py_object)]
#[derive(Clone)]
struct PySpec(ifsynth::SystemSpec);

#[pymethods]
impl PySpec {
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        ifsynth::SystemSpec::parse(text).map(PySpec).map_err(err)
    }

    #[staticmethod]
    fn bit_transmission() -> Self {
        PySpec(ifsynth::SystemSpec::bit_transmission())
    }

    fn to_file_string(&self) -> String {
        self.0.to_file_string()
    }

    fn processes(&self) -> (String, String) {
        (self.0.arch.name_p.clone(), self.0.arch.name_q.clone())
    }

    fn formula(&self, process: &str) -> PyResult<PyLtl> {
        Ok(PyLtl(self.0.phi(proc_of(&self.0, process)?).clone()))
    }

    /// "uniform", "uniform-bounded", "non-uniform" or "inconclusive".
    fn uniformity(&self, process: &str) -> PyResult<String> {
        let p = proc_of(&self.0, process)?;
        let u = check_uniformity_capped(self.0.phi(p), &self.0.arch, p, &UniformityCaps::default()).map_err(err)?;
        Ok(match u {
            Uniformity::Uniform { bounded: false } => "uniform",
            Uniformity::Uniform { bounded: true } => "uniform-bounded",
            Uniformity::NonUniform { .. } => "non-uniform",
            Uniformity::Inconclusive(_) => "inconclusive",
        }
        .to_string())
    }
}

#[pyclass(name = "MooreMachine", from_py_object)]
#[derive(Clone)]
struct PyMachine(ifsynth::MooreMachine);

#[pymethods]
impl PyMachine {
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        ifsynth::MooreMachine::parse(text).map(PyMachine).map_err(err)
    }

    #[getter]
    fn inputs(&self) -> Vec<String> {
        self.0.inputs.clone()
    }

    #[getter]
    fn outputs(&self) -> Vec<String> {
        self.0.outputs.clone()
    }

    fn num_states(&self) -> usize {
        self.0.num_states()
    }

    /// Output letters along a finite input word, starting with the initial label.
    fn run(&self, word: Vec<u64>) -> Vec<u64> {
        self.0.run(&word)
    }

    /// A shortest distinguishing input word, or `None` if equivalent.
    fn difference(&self, other: &PyMachine) -> PyResult<Option<Vec<u64>>> {
        self.0.difference(&other.0).map_err(err)
    }

    fn model_check(&self, formula: &PyLtl) -> PyResult<bool> {
        match verify::model_check(&self.0, &formula.0).map_err(err)? {
            Verdict::Holds => Ok(true),
            Verdict::Violated(_) => Ok(false),
            Verdict::Inconclusive(why) => Err(PyRuntimeError::new_err(why)),
        }
    }

    fn to_text(&self) -> String {
        self.0.to_text()
    }

    fn to_dot(&self, name: &str) -> String {
        self.0.to_dot(name)
    }

    fn __repr__(&self) -> String {
        format!("MooreMachine({} states)", self.0.num_states())
    }
}

/// Result of the practical pipeline.
#[pyclass(name = "PracticalRun")]
struct PyRun(pipeline::PracticalRun);

#[pymethods]
impl PyRun {
    /// "certified", "certification-failed" or "unrealizable".
    #[getter]
    fn outcome(&self) -> String {
        match &self.0.outcome {
            Outcome::Certified => "certified".into(),
            Outcome::CertificationFailed => "certification-failed".into(),
            Outcome::Unrealizable { .. } => "unrealizable".into(),
        }
    }

    #[getter]
    fn classes(&self) -> Vec<String> {
        self.0.classes.iter().map(|c| c.token.clone()).collect()
    }

    #[getter]
    fn component_formula(&self) -> Option<PyLtl> {
        self.0.component.formula.clone().map(PyLtl)
    }

    #[getter]
    fn sender(&self) -> Option<PyMachine> {
        self.0.sender.clone().map(PyMachine)
    }

    #[getter]
    fn receiver(&self) -> Option<PyMachine> {
        self.0.receiver.clone().map(PyMachine)
    }

    #[getter]
    fn composed(&self) -> Option<PyMachine> {
        self.0.bundle.as_ref().map(|b| PyMachine(b.composed.machine.clone()))
    }

    #[getter]
    fn local_strategies(&self) -> Option<(PyMachine, PyMachine)> {
        self.0.bundle.as_ref().map(|b| (PyMachine(b.local_p.clone()), PyMachine(b.local_q.clone())))
    }

    /// `(check, passed, detail)` triples of the certification report.
    #[getter]
    fn report(&self) -> Vec<(String, bool, String)> {
        self.0.report.iter().flat_map(|r| r.checks.iter().map(|c| (c.name.clone(), c.passed, c.detail.clone()))).collect()
    }

    #[getter]
    fn total_seconds(&self) -> f64 {
        self.0.timings.total()
    }
}

#[pyfunction]
#[pyo3(signature = (spec, bound_max = 8))]
fn solve_practical(spec: &PySpec, bound_max: usize) -> PyResult<PyRun> {
    let cfg = PipelineConfig { bound_max, ..Default::default() };
    pipeline::solve_practical(&spec.0, &cfg).map(PyRun).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (family, param, mode = "dir"))]
fn benchmark(family: &str, param: usize, mode: &str) -> PyResult<PySpec> {
    let f: Family = family.parse().map_err(err)?;
    let m: ArchMode = mode.parse().map_err(err)?;
    gen_benchmark(f, param, m).map(|b| PySpec(b.spec)).map_err(err)
}

#[pymodule]
fn ifsynth_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyLtl>()?;
    m.add_class::<PySpec>()?;
    m.add_class::<PyMachine>()?;
    m.add_class::<PyRun>()?;
    m.add_function(wrap_pyfunction!(solve_practical, m)?)?;
    m.add_function(wrap_pyfunction!(benchmark, m)?)?;
    Ok(())
}
