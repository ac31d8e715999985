use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::mpsc;
use std::thread;
use std::time::Duration;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};

use ifsynth::automata::dot::nba_to_dot;
use ifsynth::automata::is_empty;
use ifsynth::automata::translate::ltl_to_nba;
use ifsynth::bench::{gen_benchmark, ArchMode, Family};
use ifsynth::composition::{build_class_decoder, compose_hyper, compose_practical, extract_local_strategy, ComposedSystem};
use ifsynth::infoflow::{build_component_spec, build_tb_dist_automaton, check_uniformity_capped, Uniformity, UniformityCaps};
use ifsynth::pipeline::{receiver_classes, sender_problem, solve_practical, Outcome, PipelineConfig, PracticalRun};
use ifsynth::synthesis::{bounded_synthesize, Backend, SynthesisOutcome};
use ifsynth::verify::{certify_end_to_end, SolutionBundle};
use ifsynth::{Error, MooreMachine, Proc, SystemSpec};

const EXIT_UNREALIZABLE: u8 = 1;
const EXIT_VERIFY: u8 = 2;
const EXIT_INPUT: u8 = 3;

/// Uniformity is skipped by default above this many environment outputs.
const UNIFORMITY_ENV_LIMIT: usize = 4;

#[derive(Parser, Debug)]
#[command(name = "ifsynth", version, about = "Compositional synthesis for two-process architectures")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    #[arg(long, global = true, default_value_t = 8)]
    bound_max: usize,
    /// Maximum number of information classes.
    #[arg(long, global = true, default_value_t = 16)]
    class_cap: usize,
    /// Rank cap for Büchi complementation.
    #[arg(long, global = true, default_value_t = 4)]
    rank_cap: usize,
    /// External SAT solver reading a DIMACS file (embedded solver if absent).
    #[arg(long, global = true)]
    solver: Option<PathBuf>,
    #[arg(long, global = true)]
    dump_automata: Option<PathBuf>,
    /// Wall-clock limit in seconds (per row for `bench`).
    #[arg(long, global = true)]
    timeout: Option<f64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Rows,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    Practical,
    Hyper,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Distinguishability automata and uniformity for both processes.
    Analyze {
        spec: PathBuf,
        /// Run the uniformity check even on large alphabets.
        #[arg(long)]
        uniformity: bool,
    },
    /// Information classes of the receiver.
    Classes { spec: PathBuf },
    /// The receiver's component specification.
    ComponentSpec { spec: PathBuf },
    Synthesize {
        spec: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Practical)]
        mode: Mode,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compose a sender and a receiver machine.
    Compose {
        spec: PathBuf,
        #[arg(long)]
        sender: PathBuf,
        #[arg(long)]
        receiver: PathBuf,
        /// Insert the class decoder between the two (receiver reads class tokens).
        #[arg(long)]
        practical: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-certify a bundle directory written by `synthesize`.
    Verify { dir: PathBuf },
    Bench {
        #[arg(long, value_delimiter = ',', default_values_t = vec!["AC".to_string(), "EC".to_string(), "SA".to_string()])]
        families: Vec<String>,
        #[arg(long, value_delimiter = ',', default_values_t = vec![1usize])]
        params: Vec<usize>,
        #[arg(long, default_value = "dir")]
        arch: String,
    },
    /// Print a generated benchmark specification.
    Gen {
        family: String,
        param: usize,
        #[arg(default_value = "dir")]
        arch: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// An error together with its exit code.
struct Failure(u8, anyhow::Error);

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        let e = e.into();
        let code = match e.downcast_ref::<Error>() {
            Some(Error::SenderDoesNotReveal(_)) | Some(Error::LocalityViolated(_)) => EXIT_VERIFY,
            _ => EXIT_INPUT,
        };
        Failure(code, e)
    }
}

type Res<T> = std::result::Result<T, Failure>;

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure(code, e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(code)
        }
    }
}

fn config(cli: &Cli) -> PipelineConfig {
    let mut cfg = PipelineConfig { bound_max: cli.bound_max, max_rank: cli.rank_cap, ..Default::default() };
    cfg.class_caps.max_classes = cli.class_cap;
    cfg.class_caps.max_rank = cli.rank_cap;
    cfg.certify.max_rank = cli.rank_cap;
    if let Some(p) = &cli.solver {
        cfg.backend = Backend::External(p.clone());
    }
    cfg
}

fn read_spec(path: &Path) -> Res<SystemSpec> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(SystemSpec::parse(&text).with_context(|| format!("in {}", path.display()))?)
}

fn dump(cli: &Cli, name: &str, dot: String) -> Res<()> {
    if let Some(dir) = &cli.dump_automata {
        fs::create_dir_all(dir)?;
        fs::write(dir.join(format!("{name}.dot")), dot)?;
    }
    Ok(())
}

/// Runs `f` on a worker thread; `None` when the limit passes first.
fn limited<T: Send + 'static>(limit: Option<f64>, f: impl FnOnce() -> T + Send + 'static) -> Option<T> {
    let Some(secs) = limit else { return Some(f()) };
    if secs <= 0.0 {
        return None;
    }
    let (tx, rx) = mpsc::channel();
    thread::spawn(move || {
        let _ = tx.send(f());
    });
    rx.recv_timeout(Duration::from_secs_f64(secs)).ok()
}

fn run(cli: &Cli) -> Res<u8> {
    match &cli.cmd {
        Cmd::Analyze { spec, uniformity } => analyze(cli, &read_spec(spec)?, *uniformity),
        Cmd::Classes { spec } => classes(cli, &read_spec(spec)?),
        Cmd::ComponentSpec { spec } => component_spec(cli, &read_spec(spec)?),
        Cmd::Synthesize { spec, mode, out } => synthesize(cli, read_spec(spec)?, *mode, out.as_deref()),
        Cmd::Compose { spec, sender, receiver, practical, out } => {
            compose(cli, &read_spec(spec)?, sender, receiver, *practical, out.as_deref())
        }
        Cmd::Verify { dir } => verify(cli, dir),
        Cmd::Bench { families, params, arch } => bench(cli, families, params, arch),
        Cmd::Gen { family, param, arch, out } => {
            let b = gen_benchmark(family.parse()?, *param, arch.parse()?)?;
            let text = b.spec.to_file_string();
            match out {
                Some(p) => fs::write(p, text)?,
                None => print!("{text}"),
            }
            Ok(0)
        }
    }
}

fn analyze(cli: &Cli, spec: &SystemSpec, force_uniformity: bool) -> Res<u8> {
    for p in [Proc::P, Proc::Q] {
        let name = spec.arch.name(p).to_string();
        let phi = spec.phi(p);
        dump(cli, &format!("{name}_spec"), nba_to_dot(&ltl_to_nba(phi), &format!("A_{name}")))?;
        let l = build_tb_dist_automaton(phi, &spec.arch, p)?;
        dump(cli, &format!("{name}_not_lambda"), nba_to_dot(l.not_lambda(), &format!("not_Lambda_{name}")))?;
        let lam = l.lambda_nba(cli.rank_cap)?;
        dump(cli, &format!("{name}_lambda"), nba_to_dot(&lam.nba, &format!("Lambda_{name}")))?;
        let lambda = match is_empty(&lam.nba) {
            _ if lam.incomplete => "unknown (complement cut off)".to_string(),
            ifsynth::automata::Emptiness::Empty => "empty".to_string(),
            ifsynth::automata::Emptiness::NonEmpty(w) => format!("nonempty, e.g. {w}"),
        };
        let uni = if force_uniformity || spec.arch.outputs_e.len() <= UNIFORMITY_ENV_LIMIT {
            let caps = UniformityCaps { max_rank: cli.rank_cap, ..Default::default() };
            match check_uniformity_capped(phi, &spec.arch, p, &caps)? {
                Uniformity::Uniform { bounded: false } => "uniform".to_string(),
                Uniformity::Uniform { bounded: true } => "uniform (on lassos up to the caps)".to_string(),
                Uniformity::NonUniform { env, outputs } => format!("non-uniform: env {env}, outputs {outputs}"),
                Uniformity::Inconclusive(why) => format!("inconclusive: {why}"),
            }
        } else {
            format!("skipped (more than {UNIFORMITY_ENV_LIMIT} environment outputs; pass --uniformity)")
        };
        match cli.format {
            Format::Table => {
                println!("process {name}");
                println!("  spec        {phi}");
                println!("  not-Lambda  {} states", l.not_lambda().num_states());
                println!("  Lambda      {} states, {lambda}", lam.nba.num_states());
                println!("  uniformity  {uni}");
            }
            Format::Rows => println!(
                "process={name} not_lambda_states={} lambda_states={} lambda={lambda:?} uniformity={uni:?}",
                l.not_lambda().num_states(),
                lam.nba.num_states()
            ),
        }
    }
    Ok(0)
}

fn classes(cli: &Cli, spec: &SystemSpec) -> Res<u8> {
    let cfg = config(cli);
    let (_, cls) = receiver_classes(spec, &cfg.class_caps)?;
    for c in &cls {
        dump(cli, &format!("class_{}", c.token), nba_to_dot(&c.nba, &c.token))?;
        match cli.format {
            Format::Table => println!("{}  depth {}  witness {}  prefixes {}", c.token, c.depth, c.witness, c.prefixes.len()),
            Format::Rows => println!("token={} depth={} witness={:?} prefixes={}", c.token, c.depth, c.witness.to_string(), c.prefixes.len()),
        }
    }
    Ok(0)
}

fn component_spec(cli: &Cli, spec: &SystemSpec) -> Res<u8> {
    let cfg = config(cli);
    let (_, cls) = receiver_classes(spec, &cfg.class_caps)?;
    let c = build_component_spec(spec.phi(Proc::Q), &cls, &spec.arch, Proc::Q)?;
    dump(cli, "component_negated", nba_to_dot(&c.negated, "component"))?;
    println!("inputs      {}", c.inputs.join(" "));
    println!("outputs     {}", c.outputs.join(" "));
    println!("assumption  {}", c.assumption);
    match &c.formula {
        Some(f) => println!("formula     {f}"),
        None => println!("formula     (automaton only, {} states)", c.negated.num_states()),
    }
    for r in &c.relativized {
        match &r.formula {
            Some(f) => println!("  {}: {f}", r.token),
            None => println!("  {}: (automaton only)", r.token),
        }
    }
    Ok(0)
}

fn write_run(dir: &Path, spec: &SystemSpec, run: &PracticalRun) -> Res<()> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join("spec.txt"), spec.to_file_string())?;
    if let Some(m) = &run.receiver {
        fs::write(dir.join("receiver.txt"), m.to_text())?;
    }
    if let Some(m) = &run.sender {
        fs::write(dir.join("sender.txt"), m.to_text())?;
    }
    if let Some(d) = &run.decoder {
        fs::write(dir.join("decoder.txt"), d.to_text())?;
    }
    if let Some(b) = &run.bundle {
        fs::write(dir.join("composed.txt"), composed_text(&b.composed))?;
        fs::write(dir.join("local_p.txt"), b.local_p.to_text())?;
        fs::write(dir.join("local_q.txt"), b.local_q.to_text())?;
        fs::write(dir.join("bundle.json"), serde_json::to_string_pretty(b)?)?;
    }
    if let Some(r) = &run.report {
        fs::write(dir.join("report.txt"), r.to_table())?;
        fs::write(dir.join("report.rows"), r.to_rows())?;
    }
    Ok(())
}

fn composed_text(h: &ComposedSystem) -> String {
    format!("# components {}\n{}", h.components.join(" "), h.machine.to_text())
}

fn synthesize(cli: &Cli, spec: SystemSpec, mode: Mode, out: Option<&Path>) -> Res<u8> {
    let cfg = config(cli);
    match mode {
        Mode::Practical => {
            let sp = spec.clone();
            let run = match limited(cli.timeout, move || solve_practical(&sp, &cfg)) {
                Some(r) => r?,
                None => {
                    eprintln!("timeout");
                    return Ok(EXIT_UNREALIZABLE);
                }
            };
            if let Some(dir) = out {
                write_run(dir, &spec, &run)?;
            }
            let t = &run.timings;
            println!(
                "classes {}  receiver {}  sender {}  composed {}",
                run.classes.len(),
                states(&run.receiver),
                states(&run.sender),
                run.bundle.as_ref().map(|b| b.composed.machine.num_states().to_string()).unwrap_or("-".into())
            );
            println!("time {:.2}s (synthesis {:.2}s / {:.2}s)", t.total(), t.synthesis_p, t.synthesis_q);
            if let Some(r) = &run.report {
                print!("{}", report_text(cli, r));
            }
            Ok(match run.outcome {
                Outcome::Certified => 0,
                Outcome::CertificationFailed => EXIT_VERIFY,
                Outcome::Unrealizable { process, bound } => {
                    println!("unrealizable for {process} at bound {bound}");
                    EXIT_UNREALIZABLE
                }
            })
        }
        Mode::Hyper => {
            let sp = spec.clone();
            let res = limited(cli.timeout, move || -> ifsynth::Result<SynthesisOutcome> {
                let l = build_tb_dist_automaton(spec.phi(Proc::Q), &spec.arch, Proc::Q)?;
                bounded_synthesize(&sender_problem(&spec, &l, cfg.bound_max, cfg.max_rank)?, &cfg.backend)
            });
            let name = sp.arch.name_p.clone();
            match res {
                None => {
                    eprintln!("timeout");
                    Ok(EXIT_UNREALIZABLE)
                }
                Some(r) => match r? {
                    SynthesisOutcome::Realized(m) => {
                        println!("{name}: {} states", m.num_states());
                        if let Some(dir) = out {
                            fs::create_dir_all(dir)?;
                            fs::write(dir.join("spec.txt"), sp.to_file_string())?;
                            fs::write(dir.join("sender.txt"), m.to_text())?;
                        } else {
                            print!("{}", m.to_text());
                        }
                        Ok(0)
                    }
                    SynthesisOutcome::UnrealizableAtBound(b) => {
                        println!("unrealizable for {name} at bound {b}");
                        Ok(EXIT_UNREALIZABLE)
                    }
                },
            }
        }
    }
}

fn states(m: &Option<MooreMachine>) -> String {
    m.as_ref().map(|m| m.num_states().to_string()).unwrap_or("-".into())
}

fn report_text(cli: &Cli, r: &ifsynth::verify::Report) -> String {
    match cli.format {
        Format::Table => r.to_table(),
        Format::Rows => r.to_rows(),
    }
}

fn read_machine(path: &Path) -> Res<MooreMachine> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(MooreMachine::parse(&text).with_context(|| format!("in {}", path.display()))?)
}

fn compose(cli: &Cli, spec: &SystemSpec, sender: &Path, receiver: &Path, practical: bool, out: Option<&Path>) -> Res<u8> {
    let (a, b) = (read_machine(sender)?, read_machine(receiver)?);
    let h = if practical {
        let (_, cls) = receiver_classes(spec, &config(cli).class_caps)?;
        let d = build_class_decoder(&a, &cls, &spec.arch, Proc::Q)?;
        compose_practical(&a, &b, &d, &spec.arch)?
    } else {
        compose_hyper(&a, &b, &spec.arch)?
    };
    let text = composed_text(&h);
    match out {
        Some(dir) => {
            let bundle = SolutionBundle {
                local_p: extract_local_strategy(&h, Proc::P)?,
                local_q: extract_local_strategy(&h, Proc::Q)?,
                composed: h,
            };
            fs::create_dir_all(dir)?;
            fs::write(dir.join("spec.txt"), spec.to_file_string())?;
            fs::write(dir.join("composed.txt"), &text)?;
            fs::write(dir.join("bundle.json"), serde_json::to_string_pretty(&bundle)?)?;
            println!("composed {} states", bundle.composed.machine.num_states());
        }
        None => print!("{text}"),
    }
    Ok(0)
}

fn verify(cli: &Cli, dir: &Path) -> Res<u8> {
    let spec = read_spec(&dir.join("spec.txt"))?;
    let json = fs::read_to_string(dir.join("bundle.json")).context("reading bundle.json")?;
    let bundle: SolutionBundle = serde_json::from_str(&json).context("parsing bundle.json")?;
    let report = certify_end_to_end(&spec, &bundle, &config(cli).certify);
    print!("{}", report_text(cli, &report));
    Ok(if report.passed() { 0 } else { EXIT_VERIFY })
}

fn bench(cli: &Cli, families: &[String], params: &[usize], arch: &str) -> Res<u8> {
    let mode: ArchMode = arch.parse()?;
    let fams: Vec<Family> = families.iter().map(|f| f.parse()).collect::<Result<_, _>>()?;
    if cli.format == Format::Table {
        println!(
            "{:<6} {:<6} {:>4} {:>9} {:>9} {:>9} {:>9} {:>9} {:>9}  outcome",
            "bench", "arch", "par", "analysis", "classes", "synth_p", "synth_q", "compose", "verify"
        );
    }
    let mut worst = 0;
    for &f in &fams {
        for &n in params {
            let inst = gen_benchmark(f, n, mode)?;
            let cfg = config(cli);
            let spec = inst.spec.clone();
            let res = limited(cli.timeout, move || solve_practical(&spec, &cfg));
            let (t, outcome, sizes) = match res {
                None => (None, "TO".to_string(), String::new()),
                Some(Err(e)) => (None, format!("error: {e}"), String::new()),
                Some(Ok(run)) => {
                    let o = match &run.outcome {
                        Outcome::Certified => "realized+certified".to_string(),
                        Outcome::CertificationFailed => {
                            worst = worst.max(EXIT_VERIFY);
                            "certification-failed".to_string()
                        }
                        Outcome::Unrealizable { process, bound } => format!("unrealizable({process}@{bound})"),
                    };
                    let sizes = format!("{}/{}", states(&run.sender), states(&run.receiver));
                    (Some(run.timings), o, sizes)
                }
            };
            let cell = |x: Option<f64>| x.map(|v| format!("{v:.2}")).unwrap_or("-".into());
            let tt = t.clone();
            let col = |g: fn(&ifsynth::pipeline::Timings) -> f64| cell(tt.as_ref().map(g));
            match cli.format {
                Format::Table => println!(
                    "{:<6} {:<6} {:>4} {:>9} {:>9} {:>9} {:>9} {:>9} {:>9}  {outcome} {sizes}",
                    f.to_string(),
                    mode.to_string(),
                    n,
                    col(|t| t.analysis),
                    col(|t| t.classes),
                    col(|t| t.synthesis_p),
                    col(|t| t.synthesis_q),
                    col(|t| t.composition),
                    col(|t| t.verification)
                ),
                Format::Rows => println!(
                    "bench={f} arch={mode} param={n} analysis={} classes={} synthesis_p={} synthesis_q={} composition={} verification={} outcome={outcome:?} sizes={sizes:?}",
                    col(|t| t.analysis),
                    col(|t| t.classes),
                    col(|t| t.synthesis_p),
                    col(|t| t.synthesis_q),
                    col(|t| t.composition),
                    col(|t| t.verification)
                ),
            }
        }
    }
    Ok(worst)
}
