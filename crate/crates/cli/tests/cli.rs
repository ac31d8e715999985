use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ifsynth"))
}

fn spec(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../specs").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn analyze_reports_lambda_and_uniformity() {
    let o = run(&["analyze", spec("bit_transmission.txt").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("Lambda      1 states, empty"), "{s}");
    assert!(s.contains("nonempty"), "{s}");
    let o = run(&["analyze", spec("start_variant.txt").to_str().unwrap()]);
    assert!(stdout(&o).contains("non-uniform"));
    let o = run(&["analyze", spec("trivial.txt").to_str().unwrap()]);
    assert_eq!(stdout(&o).matches(", empty").count(), 2);
}

#[test]
fn dump_automata_writes_dot_files() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["analyze", spec("bit_transmission.txt").to_str().unwrap(), "--dump-automata", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let dot = std::fs::read_to_string(dir.path().join("b_lambda.dot")).unwrap();
    assert!(dot.starts_with("digraph"));
}

#[test]
fn synthesize_then_verify_from_disk() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("bt");
    let o = run(&["synthesize", spec("bit_transmission.txt").to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    for f in ["sender.txt", "receiver.txt", "decoder.txt", "composed.txt", "local_p.txt", "local_q.txt", "bundle.json", "report.txt"] {
        assert!(out.join(f).exists(), "{f}");
    }
    let o = run(&["verify", out.to_str().unwrap(), "--format", "rows"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).matches("passed=true").count(), 7);

    // A receiver that never answers fails certification.
    let mute = "inputs ic0 ic1\noutputs out\ninit 0\nstate 0 {} -> 0 0 0 0\n";
    std::fs::write(out.join("mute.txt"), mute).unwrap();
    let o = run(&[
        "compose",
        spec("bit_transmission.txt").to_str().unwrap(),
        "--sender",
        out.join("sender.txt").to_str().unwrap(),
        "--receiver",
        out.join("mute.txt").to_str().unwrap(),
        "--practical",
        "--out",
        out.join("mute").to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let o = run(&["verify", out.join("mute").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn channel_less_is_unrealizable() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("cl.txt");
    std::fs::write(&f, "[variables]\nenv = in\na =\nb = out\n\n[architecture]\na reads in\n\n[spec a]\ntrue\n\n[spec b]\nin <-> F out\n").unwrap();
    let o = run(&["synthesize", f.to_str().unwrap(), "--mode", "hyper", "--bound-max", "2"]);
    assert_eq!(o.status.code(), Some(1), "{}{}", stdout(&o), String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("unrealizable for a at bound 2"));
}

#[test]
fn input_errors_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("bad.txt");
    std::fs::write(&f, "[variables]\nenv = in\n[spec b]\nin <-> F\n").unwrap();
    assert_eq!(run(&["analyze", f.to_str().unwrap()]).status.code(), Some(3));
    assert_eq!(run(&["analyze", "/nonexistent/spec.txt"]).status.code(), Some(3));
    assert_eq!(run(&["gen", "AC", "0"]).status.code(), Some(3));
}

#[test]
fn gen_is_deterministic_and_parses() {
    let a = stdout(&run(&["gen", "SA", "2", "dir"]));
    let b = stdout(&run(&["gen", "SA", "2", "dir"]));
    assert_eq!(a, b);
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("sa2.txt");
    std::fs::write(&f, &a).unwrap();
    assert_eq!(run(&["classes", f.to_str().unwrap()]).status.code(), Some(0));
}

#[test]
fn bench_rows_and_zero_timeout() {
    let o = run(&["bench", "--families", "AC", "--params", "1", "--format", "rows"]);
    assert!(stdout(&o).contains("outcome=\"realized+certified\""), "{}", stdout(&o));
    let o = run(&["bench", "--families", "AC,SA", "--params", "1", "--timeout", "0", "--format", "rows"]);
    assert_eq!(stdout(&o).matches("outcome=\"TO\"").count(), 2);
}

#[test]
fn component_spec_prints_formula() {
    let o = run(&["component-spec", spec("bit_transmission.txt").to_str().unwrap()]);
    assert!(stdout(&o).contains("formula     (G !ic0 | G !ic1) & F (ic0 | ic1) -> (F ic0 -> F out) & (F ic1 -> G !out)"));
}
