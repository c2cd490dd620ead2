//! Structural properties of the semantics: exchange and weakening,
//! substitution of terms and of types, and fold/unfold.

use std::collections::BTreeMap;

use crate::domain::{enumerate, equal, fold, records_equal, truncate_record, unfold, ValueRegistry};
use crate::semantics::{denote_process, eval_term, Denotation, Fuel};
use crate::syntax::{
    parse_term, subst_process, subst_type, unfold_type, Name, Polarity, SessionType,
};

use super::axioms::AxiomReport;
use super::corpus::{Library, TRANSDUCERS};
use super::{enumerate_inputs, Interface};

pub type StructuralReport = AxiomReport;

struct Tally {
    name: &'static str,
    instances: usize,
    failures: usize,
    example: Option<String>,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Tally {
            name,
            instances: 0,
            failures: 0,
            example: None,
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.instances += 1;
        if !ok {
            self.failures += 1;
            if self.example.is_none() {
                self.example = Some(what());
            }
        }
    }

    fn report(self) -> StructuralReport {
        AxiomReport {
            name: self.name.to_string(),
            instances: self.instances,
            failures: self.failures,
            example: self.example,
        }
    }
}

/// Whether two denotations agree on every input, compared by port name.
fn same_by_name(l: &Denotation, r: &Denotation, iface: &Interface, depth: usize) -> bool {
    enumerate_inputs(iface, depth, &ValueRegistry::new())
        .expect("enumerable interface")
        .iter()
        .all(|i| {
            let a = l.apply(i);
            let b = r.apply(i);
            !a.diag.exhausted
                && !b.diag.exhausted
                && records_equal(&truncate_record(&a.out, depth), &truncate_record(&b.out, depth))
        })
}

/// The order of Δ and unused functional variables do not matter.
fn weakening(lib: &Library, depth: usize, fuel: &Fuel) -> StructuralReport {
    let mut t = Tally::new("exchange and weakening");
    let env = lib.env(fuel);
    let unit = SessionType::Unit;
    let iface = Interface::new(vec![("d", lib.bits.clone()), ("e", unit)], ("c", lib.bits.clone()));
    let spare = env.get("double");
    for n in TRANSDUCERS {
        for q in ["wait e; c <- flip <- a", "wait e; fwd c a"] {
            let src = format!("cut a : bits {{ a <- {n} <- d }}; {q}");
            let p = lib.check(&iface, &lib.process(&src)).expect("well typed");
            let de: Vec<Name> = vec!["d".into(), "e".into()];
            let ed: Vec<Name> = vec!["e".into(), "d".into()];
            let base = denote_process(&p, "c", &de, &env, fuel);
            let swapped = denote_process(&p, "c", &ed, &env, fuel);
            t.check(same_by_name(&base, &swapped, &iface, depth), || format!("exchange: {src}"));
            let weak = denote_process(&p, "c", &de, &env.with("unused", spare.clone()), fuel);
            t.check(same_by_name(&base, &weak, &iface, depth), || format!("weakening: {src}"));
        }
    }
    t.report()
}

/// `⟦[M/x]P⟧u = ⟦P⟧(u[x ↦ ⟦M⟧u])`.
fn term_substitution(lib: &Library, depth: usize, fuel: &Fuel) -> StructuralReport {
    let mut t = Tally::new("term substitution");
    let env = lib.env(fuel);
    let iface = lib.stream_iface(&["d"], "c");
    let x_ty = crate::syntax::FuncType::proc_type(("f", lib.bits.clone()), vec![("b", lib.bits.clone())]);
    let mut psi = lib.psi.clone();
    psi.insert("x".into(), x_ty);
    let bodies = [
        "c <- x <- d",
        "cut a : bits { a <- x <- d }; c <- flip <- a",
        "cut a : bits { a <- flip <- d }; c <- x <- a",
        "cut a : bits { a <- x <- d }; c <- x <- a",
        "send c unfold; c.1; c <- x <- d",
    ];
    let terms = [
        "flip",
        "same",
        "double",
        "{f <- send f unfold; f.0; fwd f b <- b}",
        "{f <- cut t : bits { t <- flip <- b }; f <- flip <- t <- b}",
    ];
    let used: Vec<Name> = vec!["d".into()];
    for body in bodies {
        let p = lib.check_in(&psi, &iface, &lib.process(body)).expect("well typed");
        for m_src in terms {
            let m = parse_term(m_src).expect("term");
            let (v, _) = eval_term(&m, &env, fuel);
            let substituted = subst_process(&BTreeMap::from([("x".to_string(), m)]), &p);
            let l = denote_process(&substituted, "c", &used, &env, fuel);
            let r = denote_process(&p, "c", &used, &env.with("x", v), fuel);
            t.check(same_by_name(&l, &r, &iface, depth), || format!("[{m_src}/x]({body})"));
        }
    }
    t.report()
}

/// Size of ⟦A⟧ᵖ at height `d`, counted without building values; `vars`
/// gives the size for each free variable at each polarity and height.
fn count(a: &SessionType, p: Polarity, d: usize, vars: &dyn Fn(&str, Polarity, usize) -> usize) -> usize {
    use Polarity::{Negative as Neg, Positive as Pos};
    use SessionType::*;
    let sub = |b: &SessionType, q: Polarity, e: usize| count(b, q, e, vars);
    match (a, p) {
        (Unit, Neg) => 1,
        (Unit, Pos) => 2,
        (Down(b), Neg) => sub(b, Neg, d),
        (Up(b), Pos) => sub(b, Pos, d),
        (Down(b), Pos) | (Up(b), Neg) => {
            if d == 0 {
                1
            } else {
                1 + sub(b, p, d - 1)
            }
        }
        (Plus(m), Pos) | (With(m), Neg) => {
            if d == 0 {
                1
            } else {
                1 + m.values().map(|b| sub(b, p, d - 1)).sum::<usize>()
            }
        }
        (Plus(m), Neg) | (With(m), Pos) => m.values().map(|b| sub(b, p, d)).product(),
        (Tensor(b, c), Neg) => sub(b, Neg, d) * sub(c, Neg, d),
        (Lolly(b, c), Pos) => sub(b, Neg, d) * sub(c, Pos, d),
        (Tensor(b, c), Pos) | (Lolly(b, c), Neg) => {
            if d == 0 {
                1
            } else {
                1 + sub(b, Pos, d - 1) * sub(c, p, d - 1)
            }
        }
        (Var(x), _) => vars(x, p, d),
        _ => panic!("count: unsupported type {a}"),
    }
}

/// `⟦[B/α]A⟧ᵖ` has as many elements as `⟦A⟧ᵖ` with α read as `⟦B⟧`.
fn type_substitution(depth: usize) -> StructuralReport {
    let mut t = Tally::new("type substitution");
    let unit = SessionType::Unit;
    let alpha = SessionType::var("α");
    let bodies = [
        SessionType::plus([("l", alpha.clone()), ("r", unit.clone())]),
        SessionType::with([("l", SessionType::up(alpha.clone())), ("r", SessionType::up(unit.clone()))]),
        SessionType::tensor(alpha.clone(), alpha.clone()),
        SessionType::lolly(alpha.clone(), SessionType::up(unit.clone())),
        SessionType::down(SessionType::up(alpha.clone())),
        SessionType::up(alpha.clone()),
    ];
    let args = [
        unit.clone(),
        SessionType::bits(),
        SessionType::down(SessionType::up(unit.clone())),
        SessionType::plus([("j", unit.clone()), ("k", unit.clone())]),
        SessionType::tensor(unit.clone(), unit.clone()),
    ];
    for a in &bodies {
        for b in &args {
            let ab = subst_type(&BTreeMap::from([("α".to_string(), b.clone())]), a);
            for p in [Polarity::Positive, Polarity::Negative] {
                for d in 0..=depth {
                    let actual = enumerate(&ab, p, d).expect("closed").len();
                    let expected = count(a, p, d, &|_, q, e| enumerate(b, q, e).expect("closed").len());
                    t.check(actual == expected, || {
                        format!("[{b}/α]{a} at {p} height {d}: {actual} elements, expected {expected}")
                    });
                }
            }
        }
    }
    t.report()
}

/// `fold` and `unfold` are inverse, and ⟦ρα.A⟧ is the image of ⟦[ρα.A/α]A⟧
/// under `fold`.
fn fold_unfold(depth: usize) -> StructuralReport {
    let mut t = Tally::new("fold/unfold isomorphism");
    let unit = SessionType::Unit;
    let types = [
        SessionType::bits(),
        SessionType::rec(
            "s",
            SessionType::with([("h", SessionType::up(unit.clone())), ("t", SessionType::var("s"))]),
        ),
        SessionType::rec("s", SessionType::down(SessionType::tensor(unit.clone(), SessionType::var("s")))),
    ];
    for a in &types {
        let body = unfold_type(a).expect("rec");
        for p in [Polarity::Positive, Polarity::Negative] {
            let folded = enumerate(a, p, depth).expect("closed");
            for v in &folded {
                t.check(equal(&fold(unfold(v)), v), || format!("fold(unfold({v:?})) at {a}"));
            }
            // The unfolded side, one height lower unless its values are
            // already up-images.
            let e = if crate::domain::lift_shaped(&body, p) { depth } else { depth.saturating_sub(1) };
            let unfolded = enumerate(&body, p, e).expect("closed");
            for w in &unfolded {
                t.check(equal(&unfold(&fold(w.clone())), w), || format!("unfold(fold({w:?})) at {a}"));
                let image = fold(w.clone());
                t.check(folded.iter().any(|v| equal(v, &image)), || {
                    format!("fold({w:?}) missing from {a} at {p}")
                });
            }
            t.check(folded.len() == unfolded.len(), || {
                format!("{a} at {p}: {} folded vs {} unfolded", folded.len(), unfolded.len())
            });
        }
    }
    t.report()
}

pub fn structural_suite(lib: &Library, depth: usize, fuel: Option<Fuel>) -> Vec<StructuralReport> {
    let fuel = fuel.unwrap_or_else(|| Fuel::new(depth));
    vec![
        weakening(lib, depth, &fuel),
        term_substitution(lib, depth, &fuel),
        type_substitution(depth),
        fold_unfold(depth),
    ]
}
