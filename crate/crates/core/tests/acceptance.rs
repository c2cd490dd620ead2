//! One line per acceptance criterion. Exits non-zero if any fails.

use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use sill::domain::{parse_record, render_record, ValueRegistry};
use sill::equiv::{
    demo_flip, law_suite, library, oracle_suite, structural_suite, trace_axiom_suite, Interface, Law, Poset,
    Strategy, Verdict,
};
use sill::semantics::{proc_denotation, Fuel};
use sill::syntax::{parse_program, DeclKind};
use sill::typecheck::check_program;

const TABLE_BUDGET: Duration = Duration::from_secs(1);
const FLIP_BUDGET: Duration = Duration::from_secs(5);
const LAW_BUDGET: Duration = Duration::from_secs(30);
const TRACE_BUDGET: Duration = Duration::from_secs(30);

const FLIP_DEPTH: usize = 8;
const LAW_DEPTH: usize = 4;
const STRUCTURAL_DEPTH: usize = 3;
const MIN_LAW_INSTANCES: usize = 10;
const MAPS_PER_AXIOM: usize = 200;
const ORACLE_MAPS: usize = 500;
const MAX_FACTOR: usize = 9;
const MAX_ORACLE_FACTOR: usize = 5;
const ILL_TYPED: usize = 10;

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome { ok, detail: detail.into() }
}

/// Evaluates `proc` in `file` on `input` and renders its outputs.
fn eval(file: &str, proc: &str, input: &str) -> Result<String, String> {
    let src = std::fs::read_to_string(fixtures().join(file)).map_err(|e| e.to_string())?;
    let program = parse_program(&src).map_err(|e| e.to_string())?;
    let program = check_program(&program).map_err(|e| e.to_string())?;
    let Some(DeclKind::Proc { used, provided, .. }) = program.get(proc).map(|d| &d.kind) else {
        return Err(format!("no process {proc}"));
    };
    let iface = Interface {
        used: used.clone(),
        provided: provided.clone(),
    };
    let reg = ValueRegistry::new();
    let input = parse_record(input, &iface.input_ports(), &reg).map_err(|e| e.to_string())?;
    let d = proc_denotation(&program, proc, &Fuel::new(4)).ok_or("no denotation")?;
    Ok(render_record(&d.apply(&input).out, &iface.output_ports(), &reg))
}

fn tables() -> Outcome {
    let rows = [
        ("wait_pair.sill", "wait_pair", "b+ = up(*,*)", "b- = (_,_), c+ = *"),
        ("wait_pair.sill", "wait_pair", "b+ = up(*,_)", "b- = (_,_), c+ = _"),
        ("wait_pair.sill", "wait_pair", "b+ = up(_,*)", "b- = (_,_), c+ = _"),
        ("wait_pair.sill", "wait_pair", "b+ = up(_,_)", "b- = (_,_), c+ = _"),
        ("wait_pair.sill", "wait_pair", "b+ = _", "b- = (_,_), c+ = _"),
        ("upshift.sill", "sync_close", "a- = _", "a+ = _"),
        ("upshift.sill", "sync_close", "a- = up(_)", "a+ = *"),
        ("choice.sill", "choose", "a- = j·up(_)", "a+ = {j: *, k: _}"),
        ("choice.sill", "choose", "a- = k·up(_)", "a+ = {j: _, k: *}"),
        ("choice.sill", "choose", "a- = j·_", "a+ = {j: _, k: _}"),
        ("choice.sill", "choose", "a- = k·_", "a+ = {j: _, k: _}"),
        ("choice.sill", "choose", "a- = _", "a+ = {j: _, k: _}"),
    ];
    let mut bad = Vec::new();
    for (file, proc, input, want) in rows {
        match eval(file, proc, input) {
            Ok(got) if got == want => {}
            Ok(got) => bad.push(format!("{proc} on `{input}` gave `{got}`")),
            Err(e) => bad.push(format!("{proc}: {e}")),
        }
    }
    if bad.is_empty() {
        outcome(true, format!("{} rows match", rows.len()))
    } else {
        outcome(false, bad.join("; "))
    }
}

fn flip() -> Outcome {
    let r = demo_flip(FLIP_DEPTH, None, Strategy::default());
    let inputs = match r.verdict {
        Verdict::Equivalent { inputs, .. } => inputs,
        _ => 0,
    };
    let want_inputs = (1 << (FLIP_DEPTH + 1)) - 1;
    let want_fd = 1 + 2 * ((1 << FLIP_DEPTH) - 1);
    let want = "equivalent; chain stabilized at n = 2 on every input";
    let ok = r.passed() && inputs == want_inputs && r.summary() == want && r.fd_checked == want_fd;
    outcome(
        ok,
        format!(
            "{}; {inputs} inputs; {} fd instances, {} failing",
            r.summary(),
            r.fd_checked,
            r.fd_failures.len()
        ),
    )
}

fn eta_laws() -> Outcome {
    let lib = library();
    let report = law_suite(&lib, LAW_DEPTH, None, Strategy::default());
    let tally = report.tally();
    let mut bad = Vec::new();
    for law in Law::ALL {
        let (n, ok) = tally.get(&law).copied().unwrap_or((0, 0));
        if ok != n {
            bad.push(format!("{}: {} of {n} failed", law.name(), n - ok));
        }
        if law.holds() && n < MIN_LAW_INSTANCES {
            bad.push(format!("{}: only {n} instances", law.name()));
        }
        if !law.holds() && n == 0 {
            bad.push(format!("{}: no instances", law.name()));
        }
    }
    let negative = tally.get(&Law::ValueEtaDiverging).map_or(0, |t| t.1);
    if bad.is_empty() {
        outcome(
            true,
            format!(
                "{} laws, {} instances, {negative} diverging instances distinguished",
                tally.len(),
                report.outcomes.len()
            ),
        )
    } else {
        outcome(false, bad.join("; "))
    }
}

fn trace_axioms() -> Outcome {
    let largest = Poset::standard().iter().map(|p| p.len()).max().unwrap_or(0);
    let reports = trace_axiom_suite(0, MAPS_PER_AXIOM);
    let mut bad = Vec::new();
    if largest > MAX_FACTOR {
        bad.push(format!("a factor has {largest} elements"));
    }
    for r in &reports {
        if !r.passed() || r.instances < MAPS_PER_AXIOM {
            bad.push(format!(
                "{}: {}/{} failed{}",
                r.name,
                r.failures,
                r.instances,
                r.example.as_deref().map(|e| format!(" ({e})")).unwrap_or_default()
            ));
        }
    }
    if bad.is_empty() {
        outcome(
            true,
            format!("{} identities × {MAPS_PER_AXIOM} maps, factors ≤ {largest} elements", reports.len()),
        )
    } else {
        outcome(false, bad.join("; "))
    }
}

fn oracle() -> Outcome {
    let r = oracle_suite(0, ORACLE_MAPS);
    outcome(
        r.passed() && r.instances >= ORACLE_MAPS,
        format!(
            "{} maps, factors ≤ {MAX_ORACLE_FACTOR} elements, {} disagreements",
            r.instances, r.failures
        ),
    )
}

fn structural() -> Outcome {
    let lib = library();
    let reports = structural_suite(&lib, STRUCTURAL_DEPTH, None);
    let parts: Vec<String> = reports
        .iter()
        .map(|r| format!("{} {}/{}", r.name, r.instances - r.failures, r.instances))
        .collect();
    outcome(reports.iter().all(|r| r.passed() && r.instances > 0), parts.join(", "))
}

fn sill_files(dir: &Path, out: &mut Vec<PathBuf>) {
    for e in std::fs::read_dir(dir).expect("fixtures dir") {
        let p = e.expect("dir entry").path();
        if p.is_dir() {
            sill_files(&p, out);
        } else if p.extension().is_some_and(|x| x == "sill") {
            out.push(p);
        }
    }
}

fn typing() -> Outcome {
    let mut files = Vec::new();
    sill_files(&fixtures(), &mut files);
    files.sort();
    let mut good = 0;
    let mut rejected = 0;
    let mut bad = Vec::new();
    for f in &files {
        let src = std::fs::read_to_string(f).expect("fixture");
        let expect = src
            .lines()
            .find_map(|l| l.trim().strip_prefix("// expect rule:"))
            .map(|r| r.trim().to_string());
        let name = f.file_name().unwrap().to_string_lossy();
        let result = parse_program(&src)
            .map_err(|e| e.to_string())
            .and_then(|p| check_program(&p).map_err(|e| e.rule));
        match (expect, result) {
            (None, Ok(_)) => good += 1,
            (None, Err(e)) => bad.push(format!("{name} rejected: {e}")),
            (Some(rule), Err(got)) if got == rule => rejected += 1,
            (Some(rule), Err(got)) => bad.push(format!("{name}: rule {got}, expected {rule}")),
            (Some(rule), Ok(_)) => bad.push(format!("{name} accepted, expected {rule}")),
        }
    }
    // The library the suites run on counts as well-typed input too.
    let lib_ok = std::panic::catch_unwind(library).is_ok();
    if !lib_ok {
        bad.push("law library fails to check".into());
    }
    if rejected < ILL_TYPED {
        bad.push(format!("only {rejected} ill-typed programs"));
    }
    if bad.is_empty() {
        outcome(true, format!("{good} programs accepted, {rejected} rejected by the expected rule"))
    } else {
        outcome(false, bad.join("; "))
    }
}

fn main() {
    let criteria: [(&str, fn() -> Outcome, Option<Duration>); 7] = [
        ("evaluation tables", tables, Some(TABLE_BUDGET)),
        ("flip twice is the identity", flip, Some(FLIP_BUDGET)),
        ("eta and unfolding laws", eta_laws, Some(LAW_BUDGET)),
        ("trace axioms and Conway identities", trace_axioms, Some(TRACE_BUDGET)),
        ("Kleene trace agrees with least post-fixed point", oracle, None),
        ("structural properties", structural, None),
        ("typing of examples", typing, None),
    ];
    let mut failed = 0;
    for (i, (name, run, budget)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let mut o = run();
        let took = start.elapsed();
        if let Some(b) = budget {
            if took > b {
                o.ok = false;
                o.detail.push_str(&format!("; over budget of {b:?}"));
            }
        }
        failed += !o.ok as usize;
        println!(
            "[{}] {}. {name}: {} ({:.0?})",
            if o.ok { "PASS" } else { "FAIL" },
            i + 1,
            o.detail,
            took
        );
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
