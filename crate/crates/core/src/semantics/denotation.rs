use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::domain::{CommValue, Port, Record};
use crate::syntax::{Name, Polarity};

/// Evaluation statistics returned alongside every output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize)]
pub struct Diagnostics {
    /// Number of traces (cuts) evaluated.
    pub traces: usize,
    /// Kleene rounds of the outermost trace, counting the round that
    /// confirmed the fixed point.
    pub rounds: usize,
    /// Largest round count of any trace evaluated.
    pub max_rounds: usize,
    /// A fuel-truncated recursion was consulted, or a trace hit its round cap.
    pub exhausted: bool,
}

impl Diagnostics {
    pub fn absorb(&mut self, other: &Diagnostics) {
        self.traces += other.traces;
        self.max_rounds = self.max_rounds.max(other.max_rounds);
        self.exhausted |= other.exhausted;
    }

    pub fn exhausted() -> Self {
        Diagnostics {
            exhausted: true,
            ..Diagnostics::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Evaluated {
    pub out: Record,
    pub diag: Diagnostics,
}

impl Evaluated {
    pub fn bottom() -> Self {
        Evaluated {
            out: Record::new(),
            diag: Diagnostics::default(),
        }
    }

    pub fn with_flag(mut self, exhausted: bool) -> Self {
        self.diag.exhausted |= exhausted;
        self
    }
}

type Func = dyn Fn(&Record) -> Evaluated + Send + Sync;

struct Inner {
    provided: Name,
    used: Vec<Name>,
    func: Box<Func>,
}

/// A function from `{d+ | d ∈ Δ} ∪ {c-}` to `{d- | d ∈ Δ} ∪ {c+}`.
#[derive(Clone)]
pub struct Denotation {
    inner: Arc<Inner>,
}

impl fmt::Debug for Denotation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{} <- {}>", self.inner.provided, self.inner.used.join(", "))
    }
}

impl Denotation {
    pub fn new(
        provided: &str,
        used: &[Name],
        func: impl Fn(&Record) -> Evaluated + Send + Sync + 'static,
    ) -> Self {
        Denotation {
            inner: Arc::new(Inner {
                provided: provided.to_string(),
                used: used.to_vec(),
                func: Box::new(func),
            }),
        }
    }

    /// The process that never communicates.
    pub fn constant_bottom(provided: &str, used: &[Name], exhausted: bool) -> Self {
        Denotation::new(provided, used, move |_| Evaluated::bottom().with_flag(exhausted))
    }

    pub fn provided(&self) -> &str {
        &self.inner.provided
    }

    pub fn used(&self) -> &[Name] {
        &self.inner.used
    }

    pub fn ptr_eq(&self, other: &Denotation) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
    }

    pub fn input_ports(&self) -> Vec<Port> {
        let mut out: Vec<Port> = self.inner.used.iter().map(|d| Port::pos(d)).collect();
        out.push(Port::neg(&self.inner.provided));
        out
    }

    pub fn output_ports(&self) -> Vec<Port> {
        let mut out: Vec<Port> = self.inner.used.iter().map(|d| Port::neg(d)).collect();
        out.push(Port::pos(&self.inner.provided));
        out
    }

    fn is_input(&self, p: &Port) -> bool {
        match p.pol {
            Polarity::Positive => self.inner.used.contains(&p.chan),
            Polarity::Negative => p.chan == self.inner.provided,
        }
    }

    fn is_output(&self, p: &Port) -> bool {
        match p.pol {
            Polarity::Negative => self.inner.used.contains(&p.chan),
            Polarity::Positive => p.chan == self.inner.provided,
        }
    }

    /// Applies the function to the input ports present in `input`; other
    /// entries are ignored and absent inputs read as bottom. Bottom outputs
    /// are omitted from the result.
    pub fn apply(&self, input: &Record) -> Evaluated {
        let restricted: Record = input
            .iter()
            .filter(|(p, _)| self.is_input(p))
            .map(|(p, v)| (p.clone(), v.clone()))
            .collect();
        let mut e = (self.inner.func)(&restricted);
        e.out.retain(|p, v| self.is_output(p) && !v.is_bot());
        e
    }

    /// Renames the interface positionally: the provided channel becomes
    /// `provided` and the i-th used channel becomes `used[i]`.
    pub fn renamed(&self, provided: &str, used: &[Name]) -> Denotation {
        if provided == self.provided() && used == self.used() {
            return self.clone();
        }
        let mut to_new: BTreeMap<Name, Name> = BTreeMap::new();
        to_new.insert(self.provided().to_string(), provided.to_string());
        for (old, new) in self.used().iter().zip(used) {
            to_new.insert(old.clone(), new.clone());
        }
        let to_old: BTreeMap<Name, Name> = to_new.iter().map(|(a, b)| (b.clone(), a.clone())).collect();
        let me = self.clone();
        Denotation::new(provided, used, move |input| {
            let inner: Record = input
                .iter()
                .filter_map(|(p, v)| {
                    to_old.get(&p.chan).map(|c| {
                        (
                            Port {
                                chan: c.clone(),
                                pol: p.pol,
                            },
                            v.clone(),
                        )
                    })
                })
                .collect();
            let e = me.apply(&inner);
            let out = e
                .out
                .into_iter()
                .filter_map(|(p, v)| {
                    to_new.get(&p.chan).map(|c| {
                        (
                            Port {
                                chan: c.clone(),
                                pol: p.pol,
                            },
                            v,
                        )
                    })
                })
                .collect();
            Evaluated { out, diag: e.diag }
        })
    }
}

/// Sets a port in a record, dropping bottoms so records stay normal.
pub fn set(r: &mut Record, p: Port, v: CommValue) {
    if v.is_bot() {
        r.remove(&p);
    } else {
        r.insert(p, v);
    }
}
