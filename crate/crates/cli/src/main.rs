use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use sill::domain::{parse_record, render_record, Port, Record, ValueRegistry};
use sill::equiv::{
    check_equiv, demo_flip, law_suite, library, oracle_suite, structural_suite, trace_axiom_suite, AxiomReport,
    Interface, Strategy, Verdict,
};
use sill::semantics::{program_env, proc_denotation, Fuel};
use sill::syntax::{parse_program, DeclKind, Program, SessionType};
use sill::typecheck::{check_program, decl_type};

const OK: u8 = 0;
const FAIL: u8 = 1;
const APPROXIMATE: u8 = 2;
const USAGE: u8 = 3;

#[derive(Parser)]
#[command(name = "sill", version, about = "Type checker, evaluator and equivalence tester for polarized SILL")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Height bound for enumerated inputs and truncated outputs.
    #[arg(long, global = true)]
    depth: Option<usize>,
    /// Recursion unrollings and feedback truncation depth (default 2·depth+4).
    #[arg(long, global = true)]
    fuel: Option<usize>,
    /// Seed for randomized suites.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Print machine-readable JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Evaluate inputs one at a time instead of on the thread pool.
    #[arg(long, global = true)]
    sequential: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Typecheck every declaration in a file.
    Check { file: PathBuf },
    /// Run a process declaration on one input record.
    Eval {
        file: PathBuf,
        #[arg(long)]
        proc: String,
        /// Input ports, e.g. `b+ = up(*,*), c- = _`. Missing ports are `_`.
        #[arg(long = "in", default_value = "")]
        input: String,
    },
    /// Compare two process declarations on every input up to --depth.
    Equiv {
        file: PathBuf,
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
    },
    /// Run a built-in law suite.
    Laws {
        #[arg(long, value_enum)]
        suite: Suite,
    },
    /// flip ∘ flip against fwd on bit streams.
    DemoFlip,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Eta,
    Trace,
    Structural,
}

impl Cli {
    fn fuel(&self, depth: usize) -> Fuel {
        match self.fuel {
            Some(n) => Fuel {
                depth,
                iterations: n,
                feedback_depth: n,
            },
            None => Fuel::new(depth),
        }
    }

    fn strategy(&self) -> Strategy {
        if self.sequential {
            Strategy::Sequential
        } else {
            Strategy::Parallel
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { USAGE } else { OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(USAGE)
        }
    }
}

fn run(cli: &Cli) -> Result<u8> {
    match &cli.command {
        Command::Check { file } => cmd_check(cli, file),
        Command::Eval { file, proc, input } => cmd_eval(cli, file, proc, input),
        Command::Equiv { file, left, right } => cmd_equiv(cli, file, left, right),
        Command::Laws { suite } => cmd_laws(cli, *suite),
        Command::DemoFlip => cmd_demo_flip(cli),
    }
}

fn emit<T: Serialize>(cli: &Cli, value: &T, text: impl FnOnce() -> String) -> Result<()> {
    if cli.json {
        println!("{}", serde_json::to_string_pretty(value)?);
    } else {
        print!("{}", text());
    }
    Ok(())
}

#[derive(Serialize)]
struct CheckJson<'a> {
    ok: bool,
    declarations: Vec<DeclJson<'a>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<ErrorJson>,
}

#[derive(Serialize)]
struct DeclJson<'a> {
    name: &'a str,
    kind: &'static str,
}

#[derive(Serialize)]
struct ErrorJson {
    kind: String,
    rule: Option<String>,
    line: usize,
    col: usize,
    decl: Option<String>,
    message: String,
}

fn kind_name(k: &DeclKind) -> &'static str {
    match k {
        DeclKind::Type(_) => "type",
        DeclKind::Term(..) => "term",
        DeclKind::Proc { .. } => "proc",
    }
}

fn file_label(file: &Path) -> String {
    file.file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| file.display().to_string())
}

fn cmd_check(cli: &Cli, file: &Path) -> Result<u8> {
    let src = std::fs::read_to_string(file).with_context(|| format!("reading {}", file.display()))?;
    let label = file_label(file);
    let (program, error) = match parse_program(&src) {
        Err(e) => (
            Program::default(),
            Some(ErrorJson {
                kind: "syntax".into(),
                rule: None,
                line: e.line,
                col: e.col,
                decl: None,
                message: e.to_string(),
            }),
        ),
        Ok(p) => match check_program(&p) {
            Ok(p) => (p, None),
            Err(e) => {
                let span = e.span.unwrap_or_default();
                let err = ErrorJson {
                    kind: serde_json::to_value(e.kind)
                        .ok()
                        .and_then(|v| v.as_str().map(str::to_string))
                        .unwrap_or_default(),
                    rule: Some(e.rule.clone()),
                    line: span.line,
                    col: span.col,
                    decl: e.decl.clone(),
                    message: e.to_string(),
                };
                (p, Some(err))
            }
        },
    };
    let ok = error.is_none();
    let decls: Vec<DeclJson> = if ok {
        program
            .decls
            .iter()
            .map(|d| DeclJson {
                name: &d.name,
                kind: kind_name(&d.kind),
            })
            .collect()
    } else {
        Vec::new()
    };
    let out = CheckJson {
        ok,
        declarations: decls,
        error,
    };
    emit(cli, &out, || match &out.error {
        None => {
            let mut s = String::new();
            for d in &out.declarations {
                s.push_str(&format!("{} {}\n", d.kind, d.name));
            }
            let n = out.declarations.len();
            s.push_str(&format!("ok: {n} declaration{}\n", if n == 1 { "" } else { "s" }));
            s
        }
        Some(e) => {
            let within = e.decl.as_ref().map(|d| format!(" (in `{d}`)")).unwrap_or_default();
            format!("{label}:{}:{}: {}{within}\n", e.line, e.col, e.message)
        }
    })?;
    Ok(if ok { OK } else { FAIL })
}

/// Parses and checks a file, failing with a usage error if it is ill-typed.
fn load(file: &Path) -> Result<Program> {
    let src = std::fs::read_to_string(file).with_context(|| format!("reading {}", file.display()))?;
    let p = parse_program(&src).map_err(|e| anyhow!("{}: {e}", file_label(file)))?;
    check_program(&p).map_err(|e| anyhow!("{}: {e}", file_label(file)))
}

fn interface(program: &Program, name: &str) -> Result<Interface> {
    match program.get(name).map(|d| &d.kind) {
        Some(DeclKind::Proc { used, provided, .. }) => Ok(Interface {
            used: used.clone(),
            provided: provided.clone(),
        }),
        _ => bail!("no process named `{name}`"),
    }
}

/// Names every declared functional value so the text notation can refer to
/// it as `@name`.
fn registry(program: &Program, fuel: &Fuel) -> ValueRegistry {
    let env = program_env(program, fuel);
    let mut reg = ValueRegistry::new();
    for d in &program.decls {
        if let Some(t) = decl_type(&d.kind) {
            reg.register(&d.name, t, env.get(&d.name));
        }
    }
    reg
}

#[derive(Serialize)]
struct EvalJson {
    output: String,
    traces: usize,
    rounds: usize,
    max_rounds: usize,
    exhausted: bool,
}

fn cmd_eval(cli: &Cli, file: &Path, proc: &str, input: &str) -> Result<u8> {
    let program = load(file)?;
    let iface = interface(&program, proc)?;
    let depth = cli.depth.unwrap_or(8);
    let fuel = cli.fuel(depth);
    let reg = registry(&program, &fuel);
    let record = parse_record(input, &iface.input_ports(), &reg)?;
    let d = proc_denotation(&program, proc, &fuel).expect("checked process");
    let e = d.apply(&record);
    let out = EvalJson {
        output: render_record(&e.out, &iface.output_ports(), &reg),
        traces: e.diag.traces,
        rounds: e.diag.rounds,
        max_rounds: e.diag.max_rounds,
        exhausted: e.diag.exhausted,
    };
    emit(cli, &out, || {
        let mut s = format!("{}\n", out.output);
        s.push_str(&format!(
            "traces: {}, rounds: {}, max rounds: {}{}\n",
            out.traces,
            out.rounds,
            out.max_rounds,
            if out.exhausted { ", approximate: a recursion ran out of fuel" } else { "" }
        ));
        s
    })?;
    Ok(if out.exhausted { APPROXIMATE } else { OK })
}

#[derive(Serialize)]
struct VerdictJson {
    verdict: &'static str,
    depth: usize,
    inputs: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    left: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    right: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    reason: Option<String>,
}

fn verdict_json(v: &Verdict, iface: &Interface, reg: &ValueRegistry) -> VerdictJson {
    let render = |r: &Record, ports: Vec<(Port, SessionType)>| render_record(r, &ports, reg);
    let mut out = VerdictJson {
        verdict: v.label(),
        depth: 0,
        inputs: 0,
        witness: None,
        left: None,
        right: None,
        reason: None,
    };
    match v {
        Verdict::Equivalent { depth, inputs } => {
            out.depth = *depth;
            out.inputs = *inputs;
        }
        Verdict::Distinguished {
            depth,
            inputs,
            witness,
            left,
            right,
        } => {
            out.depth = *depth;
            out.inputs = *inputs;
            out.witness = Some(render(witness, iface.input_ports()));
            out.left = Some(render(left, iface.output_ports()));
            out.right = Some(render(right, iface.output_ports()));
        }
        Verdict::Approximate { depth, inputs, reason } => {
            out.depth = *depth;
            out.inputs = *inputs;
            out.reason = Some(reason.clone());
        }
    }
    out
}

fn verdict_text(v: &VerdictJson) -> String {
    let mut s = format!("{} at depth {} over {} inputs\n", v.verdict, v.depth, v.inputs);
    if let (Some(w), Some(l), Some(r)) = (&v.witness, &v.left, &v.right) {
        s.push_str(&format!("witness: {w}\nleft:    {l}\nright:   {r}\n"));
    }
    if let Some(reason) = &v.reason {
        s.push_str(&format!("reason: {reason}\n"));
    }
    s
}

fn exit_for(v: &Verdict) -> u8 {
    match v {
        Verdict::Equivalent { .. } => OK,
        Verdict::Distinguished { .. } => FAIL,
        Verdict::Approximate { .. } => APPROXIMATE,
    }
}

fn cmd_equiv(cli: &Cli, file: &Path, left: &str, right: &str) -> Result<u8> {
    let program = load(file)?;
    let iface = interface(&program, left)?;
    let other = interface(&program, right)?;
    let types = |i: &Interface| -> Vec<SessionType> {
        i.used.iter().map(|(_, a)| a.clone()).chain([i.provided.1.clone()]).collect()
    };
    if types(&iface) != types(&other) {
        bail!("`{left}` and `{right}` have different interfaces");
    }
    let depth = cli.depth.unwrap_or(4);
    let fuel = cli.fuel(depth);
    let reg = registry(&program, &fuel);
    let l = proc_denotation(&program, left, &fuel).expect("checked process");
    let r = proc_denotation(&program, right, &fuel).expect("checked process");
    let v = check_equiv(&l, &r, &iface, depth, &reg, cli.strategy())?;
    let out = verdict_json(&v, &iface, &reg);
    emit(cli, &out, || verdict_text(&out))?;
    Ok(exit_for(&v))
}

#[derive(Serialize)]
struct SuiteLine {
    name: String,
    instances: usize,
    passed: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    example: Option<String>,
}

impl From<&AxiomReport> for SuiteLine {
    fn from(r: &AxiomReport) -> Self {
        SuiteLine {
            name: r.name.clone(),
            instances: r.instances,
            passed: r.instances - r.failures,
            example: r.example.clone(),
        }
    }
}

fn cmd_laws(cli: &Cli, suite: Suite) -> Result<u8> {
    let lines: Vec<SuiteLine> = match suite {
        Suite::Eta => {
            let depth = cli.depth.unwrap_or(4);
            let lib = library();
            let report = law_suite(&lib, depth, cli.fuel.map(|_| cli.fuel(depth)), cli.strategy());
            let tally = report.tally();
            tally
                .iter()
                .map(|(law, (n, ok))| SuiteLine {
                    name: law.name().to_string(),
                    instances: *n,
                    passed: *ok,
                    example: report
                        .outcomes
                        .iter()
                        .find(|o| o.law == *law && !o.passed())
                        .map(|o| format!("{} vs {}", o.left, o.right)),
                })
                .collect()
        }
        Suite::Trace => {
            let mut v: Vec<SuiteLine> = trace_axiom_suite(cli.seed, 200).iter().map(SuiteLine::from).collect();
            v.push(SuiteLine::from(&oracle_suite(cli.seed, 500)));
            v
        }
        Suite::Structural => {
            let depth = cli.depth.unwrap_or(3);
            let lib = library();
            structural_suite(&lib, depth, cli.fuel.map(|_| cli.fuel(depth)))
                .iter()
                .map(SuiteLine::from)
                .collect()
        }
    };
    let all = lines.iter().all(|l| l.passed == l.instances);
    emit(cli, &lines, || {
        let mut s = String::new();
        for l in &lines {
            let mark = if l.passed == l.instances { "pass" } else { "FAIL" };
            s.push_str(&format!("{mark} {:<36} {}/{}\n", l.name, l.passed, l.instances));
            if let Some(e) = &l.example {
                s.push_str(&format!("     first failure: {e}\n"));
            }
        }
        s
    })?;
    Ok(if all { OK } else { FAIL })
}

#[derive(Serialize)]
struct FlipJson {
    summary: String,
    verdict: VerdictJson,
    rounds: Vec<(usize, usize)>,
    fd_checked: usize,
    fd_failures: Vec<String>,
}

fn cmd_demo_flip(cli: &Cli) -> Result<u8> {
    let depth = cli.depth.unwrap_or(8);
    let fuel = cli.fuel.map(|_| cli.fuel(depth));
    let report = demo_flip(depth, fuel, cli.strategy());
    let bits = SessionType::bits();
    let iface = Interface::new(vec![("a", bits.clone())], ("b", bits));
    let out = FlipJson {
        summary: report.summary(),
        verdict: verdict_json(&report.verdict, &iface, &ValueRegistry::new()),
        rounds: report.rounds.iter().map(|(k, v)| (*k, *v)).collect(),
        fd_checked: report.fd_checked,
        fd_failures: report.fd_failures.clone(),
    };
    emit(cli, &out, || {
        let mut s = format!("{}\n", out.summary);
        s.push_str(&verdict_text(&out.verdict));
        for (n, count) in &out.rounds {
            let plural = |k: usize| if k == 1 { "" } else { "s" };
            s.push_str(&format!("  {count} input{} stabilized after {n} round{}\n", plural(*count), plural(*n)));
        }
        if out.fd_failures.is_empty() {
            s.push_str(&format!("fd laws hold ({} instances)\n", out.fd_checked));
        } else {
            for f in &out.fd_failures {
                s.push_str(&format!("fd law fails: {f}\n"));
            }
        }
        s
    })?;
    Ok(if report.passed() {
        OK
    } else if report.verdict.is_distinguished() || !report.fd_failures.is_empty() {
        FAIL
    } else {
        APPROXIMATE
    })
}
