"""Smoke test for the Python bindings.

Build first:  cargo build -p ifsynth-py --features extension-module
Then run:     python3 python/smoke_test.py
(or install with maturin and run it against the installed module).
"""

import importlib.machinery
import importlib.util
import pathlib
import sys


def load():
    try:
        import ifsynth_py  # noqa: F401
        return ifsynth_py
    except ImportError:
        pass
    root = pathlib.Path(__file__).resolve().parent.parent
    for profile in ("release", "debug"):
        for name in ("libifsynth_py.so", "libifsynth_py.dylib", "ifsynth_py.dll"):
            lib = root / "target" / profile / name
            if lib.exists():
                loader = importlib.machinery.ExtensionFileLoader("ifsynth_py", str(lib))
                spec = importlib.util.spec_from_loader("ifsynth_py", loader)
                mod = importlib.util.module_from_spec(spec)
                loader.exec_module(mod)
                return mod
    sys.exit("ifsynth_py not built; run: cargo build -p ifsynth-py --features extension-module")


m = load()

phi = m.Ltl.parse("in <-> F out")
assert sorted(phi.atoms()) == ["in", "out"]
assert phi.eval(["in", "out"], [1], [2])
assert not phi.eval(["in", "out"], [1], [0])

spec = m.SystemSpec.bit_transmission()
assert spec.processes() == ("a", "b")
assert spec.uniformity("a") == "uniform"

run = m.solve_practical(spec)
assert run.outcome == "certified", run.report
assert run.classes == ["ic0", "ic1"]
assert str(run.component_formula) == "(G !ic0 | G !ic1) & F (ic0 | ic1) -> (F ic0 -> F out) & (F ic1 -> G !out)"
assert run.receiver.num_states() <= 3 and run.sender.num_states() <= 3
assert all(ok for _, ok, _ in run.report)
assert run.composed.model_check(m.Ltl.parse("in <-> F out"))

again = m.MooreMachine.parse(run.sender.to_text())
assert again.difference(run.sender) is None

ac = m.benchmark("AC", 1)
assert m.solve_practical(ac).outcome == "certified"
try:
    m.benchmark("AC", 0)
    raise AssertionError("parameter 0 accepted")
except ValueError:
    pass

print("python smoke test: ok")
