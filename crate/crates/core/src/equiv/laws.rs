//! Instances of the η-laws and related equations, built from the stream
//! library, and their depth-bounded checks.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::domain::ValueRegistry;
use crate::semantics::{denote_process, Fuel};
use crate::syntax::{process_to_string, rename_channels, subst_term, DeclKind, Process, SessionType, Term};

use super::corpus::{Library, TRANSDUCERS};
use super::{check_equiv, Interface, Strategy, Verdict};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Law {
    /// `[fix x.M/x]M ≡ fix x.M`
    FixUnfold,
    /// `a <- {a <- P <- ā} <- ā ≡ P`
    QuoteUnquote,
    /// Sending a value then receiving it is substitution, for converging M.
    ValueEta,
    /// The same with a diverging M and x unused: must be distinguished.
    ValueEtaDiverging,
    /// Cuts associate.
    CutAssoc,
    /// `cut a (close a) (wait a; P) ≡ P`
    UnitEta,
    /// `cut a (send a b; P) (recv a chan b; Q) ≡ cut a P Q`
    TensorEta,
    /// `cut a (send a shift; P) (recv a shift; Q) ≡ cut a P Q`
    ShiftEta,
    /// `cut a (a.k; P) (case a {l => Q_l}) ≡ cut a P Q_k`
    ChoiceEta,
    /// `cut a (send a unfold; P) (recv a unfold; Q) ≡ cut a P Q`
    RecEta,
}

impl Law {
    pub const ALL: [Law; 10] = [
        Law::FixUnfold,
        Law::QuoteUnquote,
        Law::ValueEta,
        Law::ValueEtaDiverging,
        Law::CutAssoc,
        Law::UnitEta,
        Law::TensorEta,
        Law::ShiftEta,
        Law::ChoiceEta,
        Law::RecEta,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Law::FixUnfold => "fix-unfold",
            Law::QuoteUnquote => "quote-unquote",
            Law::ValueEta => "value-eta",
            Law::ValueEtaDiverging => "value-eta-diverging",
            Law::CutAssoc => "cut-assoc",
            Law::UnitEta => "unit-eta",
            Law::TensorEta => "tensor-eta",
            Law::ShiftEta => "shift-eta",
            Law::ChoiceEta => "choice-eta",
            Law::RecEta => "rec-eta",
        }
    }

    /// Whether the two sides are expected to be equivalent.
    pub fn holds(self) -> bool {
        self != Law::ValueEtaDiverging
    }
}

#[derive(Debug, Clone)]
pub struct LawInstance {
    pub law: Law,
    pub iface: Interface,
    pub left: Process,
    pub right: Process,
}

#[derive(Debug, Clone)]
pub struct LawOutcome {
    pub law: Law,
    pub left: String,
    pub right: String,
    /// `Err` when an instance failed to typecheck.
    pub verdict: Result<Verdict, String>,
}

impl LawOutcome {
    pub fn passed(&self) -> bool {
        match &self.verdict {
            Ok(v) if self.law.holds() => v.is_equivalent(),
            Ok(v) => v.is_distinguished(),
            Err(_) => false,
        }
    }
}

#[derive(Debug, Clone)]
pub struct LawReport {
    pub depth: usize,
    pub outcomes: Vec<LawOutcome>,
}

impl LawReport {
    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(LawOutcome::passed)
    }

    /// Per law: (instances, passed).
    pub fn tally(&self) -> BTreeMap<Law, (usize, usize)> {
        let mut m = BTreeMap::new();
        for o in &self.outcomes {
            let e = m.entry(o.law).or_insert((0, 0));
            e.0 += 1;
            e.1 += o.passed() as usize;
        }
        m
    }
}

fn body_of(lib: &Library, name: &str) -> Process {
    match &lib.program.get(name).expect("library proc").kind {
        DeclKind::Proc { body, .. } => body.clone(),
        _ => unreachable!("{name} is a process"),
    }
}

const RECURSIVE: &[&str] = &["flip", "same", "zeroes", "ones", "double"];

/// Every law instance drawn from the library.
pub fn law_instances(lib: &Library) -> Vec<LawInstance> {
    let mut out = Vec::new();
    let stream = lib.stream_iface(&["d"], "c");
    let mut push = |law: Law, iface: &Interface, l: Process, r: Process| {
        out.push(LawInstance {
            law,
            iface: iface.clone(),
            left: l,
            right: r,
        })
    };
    let p = |s: &str| lib.process(s);

    // Unrolling each recursive library process once, alone and in front of
    // a consumer.
    let fb = lib.stream_iface(&["b"], "f");
    for n in RECURSIVE {
        let Process::Unquote { chan, term, args } = body_of(lib, n) else {
            unreachable!("recursive library procs spawn a fixed point")
        };
        let Term::Fix(x, m) = &term else { unreachable!() };
        let unrolled = subst_term(&BTreeMap::from([(x.clone(), term.clone())]), m);
        let once = Process::Unquote {
            chan: chan.clone(),
            term: unrolled,
            args: args.clone(),
        };
        let whole = Process::Unquote { chan, term, args };
        push(Law::FixUnfold, &fb, once.clone(), whole.clone());
        for g in ["flip", "copy"] {
            let after = |q: Process| {
                let q = rename_channels(&BTreeMap::from([("f".into(), "t".into())]), &q);
                Process::cut("t", Some(lib.bits.clone()), q, p(&format!("f <- {g} <- t")))
            };
            push(Law::FixUnfold, &fb, after(once.clone()), after(whole.clone()));
        }
    }
    // Fixed points of constant bodies.
    for body in ["fwd f b", "send f unfold; f.0; fwd f b", "f <- flip <- b"] {
        let m = format!("{{f <- {body} <- b}}");
        push(
            Law::FixUnfold,
            &fb,
            p(&format!("f <- {m} <- b")),
            p(&format!("f <- fix F. {m} <- b")),
        );
    }

    // Quoting then spawning.
    let mut corpus: Vec<Process> = TRANSDUCERS.iter().map(|n| p(&format!("f <- {n} <- b"))).collect();
    corpus.extend(RECURSIVE.iter().map(|n| body_of(lib, n)));
    corpus.push(p("fwd f b"));
    for q in &corpus {
        let text = process_to_string(q);
        push(Law::QuoteUnquote, &fb, q.clone(), p(&format!("f <- {{f <- {text} <- b}} <- b")));
    }
    let unit = SessionType::Unit;
    let pair_iface = Interface::new(
        vec![("b", SessionType::tensor(unit.clone(), unit.clone()))],
        ("c", unit.clone()),
    );
    let wp = "recv b chan a; wait a; wait b; close c";
    push(Law::QuoteUnquote, &pair_iface, p(wp), p(&format!("c <- {{c <- {wp} <- b}} <- b")));
    let up_iface = Interface::new(vec![], ("a", SessionType::up(unit.clone())));
    let sc = "recv a shift; close a";
    push(Law::QuoteUnquote, &up_iface, p(sc), p(&format!("a <- {{a <- {sc} <-}} <-")));

    // Sending a value.
    let val_ty = "[{f : bits <- b : bits}] /\\ bits";
    for n in ["flip", "same", "double"] {
        for m in ["flip", "same", "zeroes", "ones"] {
            push(
                Law::ValueEta,
                &stream,
                p(&format!("cut a : bits {{ a <- {n} <- d }}; c <- {m} <- a")),
                p(&format!(
                    "cut a : {val_ty} {{ send a val {m}; a <- {n} <- d }}; recv a val x; c <- x <- a"
                )),
            );
        }
        push(
            Law::ValueEtaDiverging,
            &stream,
            p(&format!("cut a : bits {{ a <- {n} <- d }}; c <- flip <- a")),
            p(&format!(
                "cut a : {val_ty} {{ send a val fix y. y; a <- {n} <- d }}; recv a val x; c <- flip <- a"
            )),
        );
    }

    // Associativity of cut.
    let triples = [
        ("flip", "flip", "flip"),
        ("flip", "same", "double"),
        ("double", "flip", "zeroes"),
        ("lead0", "flip", "copy"),
        ("copy", "copy", "flip"),
        ("ones", "flip", "lead0"),
        ("double", "same", "flip"),
        ("same", "lead0", "double"),
        ("zeroes", "ones", "flip"),
        ("flip", "double", "lead0"),
        ("copy", "flip", "copy"),
        ("lead0", "lead0", "flip"),
    ];
    for (p1, p2, p3) in triples {
        push(
            Law::CutAssoc,
            &stream,
            p(&format!(
                "cut c1 : bits {{ c1 <- {p1} <- d }}; cut c2 : bits {{ c2 <- {p2} <- c1 }}; c <- {p3} <- c2"
            )),
            p(&format!(
                "cut c2 : bits {{ cut c1 : bits {{ c1 <- {p1} <- d }}; c2 <- {p2} <- c1 }}; c <- {p3} <- c2"
            )),
        );
    }

    // Closing a fresh unit channel.
    for q in &corpus {
        push(
            Law::UnitEta,
            &fb,
            q.clone(),
            Process::cut("u", Some(unit.clone()), Process::close("u"), Process::wait("u", q.clone())),
        );
    }

    // Sending a channel of type 1.
    let bits = lib.bits.clone();
    let tensor_iface = Interface::new(vec![("d", bits.clone()), ("e", unit.clone())], ("c", bits.clone()));
    for n in TRANSDUCERS {
        for q in ["wait e; c <- flip <- a", "wait e; fwd c a"] {
            push(
                Law::TensorEta,
                &tensor_iface,
                p(&format!("cut a : bits {{ a <- {n} <- d }}; {q}")),
                p(&format!("cut a : 1 * bits {{ send a chan e; a <- {n} <- d }}; recv a chan e; {q}")),
            );
        }
    }
    let units = Interface::new(vec![("e", unit.clone())], ("c", unit.clone()));
    for q in ["wait a; wait e; close c", "wait e; wait a; close c"] {
        push(
            Law::TensorEta,
            &units,
            p(&format!("cut a : 1 {{ close a }}; {q}")),
            p(&format!("cut a : 1 * 1 {{ send a chan e; close a }}; recv a chan e; {q}")),
        );
    }

    // Shifts, both directions.
    for n in ["flip", "same", "double", "lead0", "zeroes"] {
        for m in ["flip", "copy"] {
            push(
                Law::ShiftEta,
                &stream,
                p(&format!("cut a : up bits {{ recv a shift; a <- {n} <- d }}; send a shift; c <- {m} <- a")),
                p(&format!(
                    "cut a : down up bits {{ send a shift; recv a shift; a <- {n} <- d }}; \
                     recv a shift; send a shift; c <- {m} <- a"
                )),
            );
        }
    }
    for n in ["flip", "double", "lead0"] {
        for m in ["same", "flip"] {
            push(
                Law::ShiftEta,
                &stream,
                p(&format!("cut a : bits {{ a <- {n} <- d }}; c <- {m} <- a")),
                p(&format!("cut a : up bits {{ recv a shift; a <- {n} <- d }}; send a shift; c <- {m} <- a")),
            );
        }
    }

    // Internal choice, and the same behind an unfold.
    let pairs = [("flip", "copy"), ("zeroes", "ones")];
    for n in ["flip", "same", "double"] {
        for (m0, m1) in pairs {
            for k in ["0", "1"] {
                let mk = if k == "0" { m0 } else { m1 };
                let case = format!("case a {{ 0 => c <- {m0} <- a | 1 => c <- {m1} <- a }}");
                push(
                    Law::ChoiceEta,
                    &stream,
                    p(&format!("cut a : bits {{ a <- {n} <- d }}; c <- {mk} <- a")),
                    p(&format!("cut a : +{{0: bits, 1: bits}} {{ a.{k}; a <- {n} <- d }}; {case}")),
                );
                push(
                    Law::RecEta,
                    &stream,
                    p(&format!("cut a : +{{0: bits, 1: bits}} {{ a.{k}; a <- {n} <- d }}; {case}")),
                    p(&format!("cut a : bits {{ send a unfold; a.{k}; a <- {n} <- d }}; recv a unfold; {case}")),
                );
            }
        }
    }
    out
}

/// Checks every instance at `depth`.
pub fn law_suite(lib: &Library, depth: usize, fuel: Option<Fuel>, strategy: Strategy) -> LawReport {
    let fuel = fuel.unwrap_or_else(|| Fuel::new(depth));
    let env = lib.env(&fuel);
    let reg = ValueRegistry::new();
    let outcomes = law_instances(lib)
        .into_iter()
        .map(|inst| {
            let verdict = (|| {
                let l = lib.check(&inst.iface, &inst.left).map_err(|e| format!("left: {e}"))?;
                let r = lib.check(&inst.iface, &inst.right).map_err(|e| format!("right: {e}"))?;
                let used = inst.iface.used_names();
                let c = &inst.iface.provided.0;
                let ld = denote_process(&l, c, &used, &env, &fuel);
                let rd = denote_process(&r, c, &used, &env, &fuel);
                check_equiv(&ld, &rd, &inst.iface, depth, &reg, strategy).map_err(|e| e.to_string())
            })();
            LawOutcome {
                law: inst.law,
                left: process_to_string(&inst.left),
                right: process_to_string(&inst.right),
                verdict,
            }
        })
        .collect();
    LawReport { depth, outcomes }
}
