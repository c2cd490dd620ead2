//! Depth-bounded equivalence of processes, counterexamples, and the law suites.

mod axioms;
mod corpus;
mod finite;
mod flip;
mod laws;
mod structural;

pub use axioms::{oracle_suite, trace_axiom_suite, AxiomReport};
pub use corpus::{library, Library, LIBRARY_SOURCE, TRANSDUCERS};
pub use finite::{random_monotone, FiniteMap, Poset};
pub use flip::{demo_flip, FlipReport, FLIP_SOURCE};
pub use laws::{law_instances, law_suite, Law, LawInstance, LawOutcome, LawReport};
pub use structural::{structural_suite, StructuralReport};

use crate::domain::{
    enumerate_with, records_equal, truncate_record, DomainError, Port, Record, ValueRegistry,
};
use crate::semantics::{set, Denotation, Diagnostics};
use crate::syntax::{Name, SessionType};

/// A typed interface `d₁:A₁, …, dₙ:Aₙ ⊢ c:C`.
#[derive(Debug, Clone, PartialEq)]
pub struct Interface {
    pub used: Vec<(Name, SessionType)>,
    pub provided: (Name, SessionType),
}

impl Interface {
    pub fn new(used: Vec<(&str, SessionType)>, provided: (&str, SessionType)) -> Self {
        Interface {
            used: used.into_iter().map(|(d, a)| (d.to_string(), a)).collect(),
            provided: (provided.0.to_string(), provided.1),
        }
    }

    pub fn used_names(&self) -> Vec<Name> {
        self.used.iter().map(|(d, _)| d.clone()).collect()
    }

    /// `d+` for each used channel, then `c-`.
    pub fn input_ports(&self) -> Vec<(Port, SessionType)> {
        let mut out: Vec<(Port, SessionType)> =
            self.used.iter().map(|(d, a)| (Port::pos(d), a.clone())).collect();
        out.push((Port::neg(&self.provided.0), self.provided.1.clone()));
        out
    }

    /// `d-` for each used channel, then `c+`.
    pub fn output_ports(&self) -> Vec<(Port, SessionType)> {
        let mut out: Vec<(Port, SessionType)> =
            self.used.iter().map(|(d, a)| (Port::neg(d), a.clone())).collect();
        out.push((Port::pos(&self.provided.0), self.provided.1.clone()));
        out
    }
}

/// Every input record of height at most `depth`, in a fixed order.
pub fn enumerate_inputs(
    iface: &Interface,
    depth: usize,
    reg: &ValueRegistry,
) -> Result<Vec<Record>, DomainError> {
    let mut inputs = vec![Record::new()];
    for (port, ty) in iface.input_ports() {
        let values = enumerate_with(&ty, port.pol, depth, reg)?;
        let mut next = Vec::with_capacity(inputs.len() * values.len());
        for r in &inputs {
            for v in &values {
                let mut r2 = r.clone();
                set(&mut r2, port.clone(), v.clone());
                next.push(r2);
            }
        }
        inputs = next;
    }
    Ok(inputs)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    Sequential,
    /// Evaluates inputs on the rayon pool. Without the `parallel` feature
    /// this is the same as `Sequential`.
    #[default]
    Parallel,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Verdict {
    Equivalent {
        depth: usize,
        inputs: usize,
    },
    Distinguished {
        depth: usize,
        inputs: usize,
        witness: Record,
        left: Record,
        right: Record,
    },
    /// No difference found, or differences only where a recursion ran out
    /// of fuel.
    Approximate {
        depth: usize,
        inputs: usize,
        reason: String,
    },
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Equivalent { .. } => "equivalent",
            Verdict::Distinguished { .. } => "distinguished",
            Verdict::Approximate { .. } => "approximate",
        }
    }

    pub fn is_equivalent(&self) -> bool {
        matches!(self, Verdict::Equivalent { .. })
    }

    pub fn is_distinguished(&self) -> bool {
        matches!(self, Verdict::Distinguished { .. })
    }
}

/// Outcome of evaluating both sides on one input.
struct Probe {
    left: Record,
    right: Record,
    differ: bool,
    exhausted: bool,
}

fn probe(left: &Denotation, right: &Denotation, input: &Record, depth: usize) -> Probe {
    let l = left.apply(input);
    let r = right.apply(input);
    let lo = truncate_record(&l.out, depth);
    let ro = truncate_record(&r.out, depth);
    let differ = !records_equal(&lo, &ro);
    Probe {
        left: lo,
        right: ro,
        differ,
        exhausted: l.diag.exhausted || r.diag.exhausted,
    }
}

fn run<T: Send>(
    inputs: &[Record],
    strategy: Strategy,
    f: impl Fn(&Record) -> T + Sync + Send,
) -> Vec<T> {
    match strategy {
        #[cfg(feature = "parallel")]
        Strategy::Parallel => {
            use rayon::prelude::*;
            inputs.par_iter().map(f).collect()
        }
        _ => inputs.iter().map(f).collect(),
    }
}

/// Compares two denotations at an interface on every input of height at
/// most `depth`, after truncating outputs to `depth`. Both denotations are
/// renamed positionally onto the interface.
pub fn check_equiv(
    left: &Denotation,
    right: &Denotation,
    iface: &Interface,
    depth: usize,
    reg: &ValueRegistry,
    strategy: Strategy,
) -> Result<Verdict, DomainError> {
    let used = iface.used_names();
    let left = left.renamed(&iface.provided.0, &used);
    let right = right.renamed(&iface.provided.0, &used);
    let inputs = enumerate_inputs(iface, depth, reg)?;
    let probes = run(&inputs, strategy, |r| probe(&left, &right, r, depth));
    let n = inputs.len();
    let first_clean = probes.iter().position(|p| p.differ && !p.exhausted);
    if let Some(i) = first_clean {
        let p = &probes[i];
        return Ok(Verdict::Distinguished {
            depth,
            inputs: n,
            witness: inputs[i].clone(),
            left: p.left.clone(),
            right: p.right.clone(),
        });
    }
    if probes.iter().any(|p| p.exhausted) {
        let differing = probes.iter().filter(|p| p.differ).count();
        return Ok(Verdict::Approximate {
            depth,
            inputs: n,
            reason: if differing > 0 {
                format!("outputs differ on {differing} inputs, all of which consulted a recursion cut off by fuel")
            } else {
                "a recursion was cut off by fuel; raise --fuel".to_string()
            },
        });
    }
    Ok(Verdict::Equivalent { depth, inputs: n })
}

/// Per-input diagnostics of one denotation over all inputs.
pub fn diagnostics_over(
    d: &Denotation,
    iface: &Interface,
    depth: usize,
    reg: &ValueRegistry,
    strategy: Strategy,
) -> Result<Vec<(Record, Diagnostics)>, DomainError> {
    let d = d.renamed(&iface.provided.0, &iface.used_names());
    let inputs = enumerate_inputs(iface, depth, reg)?;
    let diags = run(&inputs, strategy, |r| d.apply(r).diag);
    Ok(inputs.into_iter().zip(diags).collect())
}

/// Re-evaluates a counterexample: true when the two sides still differ.
pub fn replay(left: &Denotation, right: &Denotation, iface: &Interface, witness: &Record, depth: usize) -> bool {
    let used = iface.used_names();
    let left = left.renamed(&iface.provided.0, &used);
    let right = right.renamed(&iface.provided.0, &used);
    probe(&left, &right, witness, depth).differ
}
