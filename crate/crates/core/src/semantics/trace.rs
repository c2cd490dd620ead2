use crate::domain::{get, glb2, record_leq, records_equal, truncate, Port, Record};

use super::denotation::{set, Diagnostics, Evaluated};

/// Result of tracing a function at one input.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceOutcome {
    /// Outputs other than the feedback ports.
    pub out: Record,
    /// The feedback value at the fixed point.
    pub feedback: Record,
    pub diag: Diagnostics,
}

/// Feedback over `x_ports`: `f` maps `A × X` to `B × X`, both sides keyed by
/// the same ports for X. Kleene iteration from bottom, truncating the
/// feedback at `depth`, until it repeats or `max_rounds` is reached.
pub fn trace_at(
    f: &dyn Fn(&Record) -> Evaluated,
    a: &Record,
    x_ports: &[Port],
    depth: usize,
    max_rounds: usize,
) -> TraceOutcome {
    let mut x = Record::new();
    let mut diag = Diagnostics::default();
    let mut rounds = 0;
    loop {
        rounds += 1;
        let mut input = a.clone();
        for p in x_ports {
            input.remove(p);
        }
        input.extend(x.iter().map(|(k, v)| (k.clone(), v.clone())));
        let e = f(&input);
        diag.absorb(&e.diag);
        let mut next = Record::new();
        for p in x_ports {
            set(&mut next, p.clone(), truncate(&get(&e.out, p), depth));
        }
        let stable = records_equal(&next, &x);
        if stable || rounds >= max_rounds {
            if !stable {
                diag.exhausted = true;
            }
            let mut out = e.out;
            for p in x_ports {
                out.remove(p);
            }
            diag.traces += 1;
            diag.rounds = rounds;
            diag.max_rounds = diag.max_rounds.max(rounds);
            return TraceOutcome {
                out,
                feedback: next,
                diag,
            };
        }
        x = next;
    }
}

/// The least post-fixed point formulation: the meet of every candidate
/// `(b, x)` with `f(a, x) ⊑ (b, x)`, projected away from X. `candidates`
/// must list all records over the B and X ports at the working depth.
/// Returns `None` when no candidate is a post-fixed point.
pub fn knaster_tarski_at(
    f: &dyn Fn(&Record) -> Evaluated,
    a: &Record,
    x_ports: &[Port],
    candidates: &[Record],
) -> Option<(Record, Record)> {
    let mut meet: Option<Record> = None;
    for c in candidates {
        let mut input = a.clone();
        for p in x_ports {
            input.remove(p);
            if let Some(v) = c.get(p) {
                input.insert(p.clone(), v.clone());
            }
        }
        let e = f(&input);
        if record_leq(&e.out, c) {
            meet = Some(match meet {
                None => c.clone(),
                Some(m) => meet_records(&m, c),
            });
        }
    }
    meet.map(|m| {
        let mut b = m.clone();
        let mut x = Record::new();
        for p in x_ports {
            if let Some(v) = b.remove(p) {
                x.insert(p.clone(), v);
            }
        }
        (b, x)
    })
}

pub fn meet_records(a: &Record, b: &Record) -> Record {
    let mut out = Record::new();
    for (k, v) in a {
        set(&mut out, k.clone(), glb2(v, &get(b, k)));
    }
    out
}

/// Kleene iteration for a parametrized fixed point. Returns the fixed point
/// and whether it was reached within `fuel` steps.
pub fn sfix<V: Clone>(bottom: V, g: impl Fn(&V) -> V, eq: impl Fn(&V, &V) -> bool, fuel: usize) -> (V, bool) {
    let mut v = bottom;
    for _ in 0..fuel {
        let next = g(&v);
        if eq(&next, &v) {
            return (v, true);
        }
        v = next;
    }
    (v, false)
}
