use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::semantics::Denotation;
use crate::syntax::{Label, Name, Polarity, Term};

/// A finite approximant of an element of some aspect ⟦A⟧ᵖ.
///
/// Values built through the smart constructors (`record`, `pair`, `fold`)
/// are kept normal: a product whose components are all bottom is `Bot`,
/// bottom record fields are dropped, and `Fold(Bot)` is `Bot`. Lifting is
/// never collapsed: `Lift(Bot)` is strictly above `Bot`.
#[derive(Debug, Clone, PartialEq)]
pub enum CommValue {
    Bot,
    Star,
    Lift(Box<CommValue>),
    /// `(k, up v)`: one lift, tagged with a label.
    Tag(Label, Box<CommValue>),
    Record(BTreeMap<Label, CommValue>),
    Pair(Box<CommValue>, Box<CommValue>),
    /// A functional value together with the rest of the communication; only
    /// ever found directly under a `Lift`.
    ValPair(FuncValue, Box<CommValue>),
    Fold(Box<CommValue>),
}

impl CommValue {
    pub fn lift(v: CommValue) -> Self {
        CommValue::Lift(Box::new(v))
    }

    pub fn tag(k: &str, v: CommValue) -> Self {
        CommValue::Tag(k.to_string(), Box::new(v))
    }

    pub fn record(fields: BTreeMap<Label, CommValue>) -> Self {
        let fields: BTreeMap<Label, CommValue> =
            fields.into_iter().filter(|(_, v)| !v.is_bot()).collect();
        if fields.is_empty() {
            CommValue::Bot
        } else {
            CommValue::Record(fields)
        }
    }

    pub fn pair(l: CommValue, r: CommValue) -> Self {
        if l.is_bot() && r.is_bot() {
            CommValue::Bot
        } else {
            CommValue::Pair(Box::new(l), Box::new(r))
        }
    }

    pub fn val_pair(f: FuncValue, rest: CommValue) -> Self {
        CommValue::ValPair(f, Box::new(rest))
    }

    pub fn fold(v: CommValue) -> Self {
        if v.is_bot() {
            CommValue::Bot
        } else {
            CommValue::Fold(Box::new(v))
        }
    }

    /// Bit stream `b₀·b₁·…·_`, folded at each cell.
    pub fn bits(bs: &[u8]) -> Self {
        bs.iter().rev().fold(CommValue::Bot, |acc, b| {
            CommValue::fold(CommValue::tag(&b.to_string(), acc))
        })
    }

    /// Whether this is the least element, looking through unnormalized
    /// products of bottoms.
    pub fn is_bot(&self) -> bool {
        match self {
            CommValue::Bot => true,
            CommValue::Record(m) => m.values().all(CommValue::is_bot),
            CommValue::Pair(a, b) => a.is_bot() && b.is_bot(),
            CommValue::Fold(a) => a.is_bot(),
            _ => false,
        }
    }

    pub fn normalize(&self) -> CommValue {
        use CommValue::*;
        match self {
            Bot => Bot,
            Star => Star,
            Lift(a) => Lift(Box::new(a.normalize())),
            Tag(k, a) => Tag(k.clone(), Box::new(a.normalize())),
            Record(m) => CommValue::record(m.iter().map(|(k, v)| (k.clone(), v.normalize())).collect()),
            Pair(a, b) => CommValue::pair(a.normalize(), b.normalize()),
            ValPair(f, a) => ValPair(f.clone(), Box::new(a.normalize())),
            Fold(a) => CommValue::fold(a.normalize()),
        }
    }

    /// Record field lookup; absent fields and a bottom record read as `Bot`.
    pub fn field(&self, k: &str) -> CommValue {
        match self {
            CommValue::Record(m) => m.get(k).cloned().unwrap_or(CommValue::Bot),
            _ => CommValue::Bot,
        }
    }

    /// Components of a pair; bottom reads as a pair of bottoms.
    pub fn components(&self) -> (CommValue, CommValue) {
        match self {
            CommValue::Pair(a, b) => ((**a).clone(), (**b).clone()),
            _ => (CommValue::Bot, CommValue::Bot),
        }
    }

    /// Whether the value is an up-image (a lift or a tagged lift).
    pub fn is_lift_shaped(&self) -> bool {
        matches!(self, CommValue::Lift(_) | CommValue::Tag(..))
    }
}

/// Decidable equality of finite approximants, up to normalization.
pub fn equal(v: &CommValue, w: &CommValue) -> bool {
    v.normalize() == w.normalize()
}

/// An element of ⟦τ⟧.
#[derive(Clone)]
pub enum FuncValue {
    Bot,
    /// `up(λx.⊥)`: a quoted process that never communicates.
    QProcBot,
    QProc(Denotation),
    Closure(Arc<Closure>),
    /// The innermost unrolling of a recursion cut off by fuel. It behaves as
    /// `Bot`, but evaluation that consults it reports the result approximate.
    Exhausted,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Closure {
    pub env: Env,
    pub param: Name,
    pub body: Term,
}

impl FuncValue {
    pub fn is_bot(&self) -> bool {
        matches!(self, FuncValue::Bot | FuncValue::Exhausted)
    }

    /// Order on functional values. Non-bottom closures and quoted processes
    /// are compared by identity only.
    pub fn leq(&self, other: &FuncValue) -> bool {
        match (self, other) {
            (a, _) if a.is_bot() => true,
            (FuncValue::QProcBot, FuncValue::QProcBot | FuncValue::QProc(_)) => true,
            _ => self == other,
        }
    }
}

impl PartialEq for FuncValue {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (a, b) if a.is_bot() && b.is_bot() => true,
            (FuncValue::QProcBot, FuncValue::QProcBot) => true,
            (FuncValue::QProc(d), FuncValue::QProc(e)) => d.ptr_eq(e),
            (FuncValue::Closure(c), FuncValue::Closure(d)) => Arc::ptr_eq(c, d) || c == d,
            _ => false,
        }
    }
}

impl fmt::Debug for FuncValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FuncValue::Bot => f.write_str("Bot"),
            FuncValue::QProcBot => f.write_str("QProcBot"),
            FuncValue::QProc(d) => write!(f, "QProc({:?})", d),
            FuncValue::Closure(c) => write!(f, "Closure(\\{}. {})", c.param, c.body),
            FuncValue::Exhausted => f.write_str("Exhausted"),
        }
    }
}

/// Values of the functional variables in scope.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Env {
    vars: BTreeMap<Name, FuncValue>,
}

impl Env {
    pub fn new() -> Self {
        Env::default()
    }

    pub fn get(&self, x: &str) -> FuncValue {
        self.vars.get(x).cloned().unwrap_or(FuncValue::Bot)
    }

    pub fn contains(&self, x: &str) -> bool {
        self.vars.contains_key(x)
    }

    pub fn with(&self, x: &str, v: FuncValue) -> Env {
        let mut vars = self.vars.clone();
        vars.insert(x.to_string(), v);
        Env { vars }
    }

    pub fn insert(&mut self, x: &str, v: FuncValue) {
        self.vars.insert(x.to_string(), v);
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Name, &FuncValue)> {
        self.vars.iter()
    }
}

/// One direction of a channel: `c+` carries ⟦A⟧⁺, `c-` carries ⟦A⟧⁻.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Port {
    pub chan: Name,
    pub pol: Polarity,
}

impl Port {
    pub fn pos(chan: &str) -> Self {
        Port {
            chan: chan.to_string(),
            pol: Polarity::Positive,
        }
    }

    pub fn neg(chan: &str) -> Self {
        Port {
            chan: chan.to_string(),
            pol: Polarity::Negative,
        }
    }
}

impl fmt::Display for Port {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.chan, self.pol.sign())
    }
}

/// Channel-indexed values; absent ports read as bottom.
pub type Record = BTreeMap<Port, CommValue>;

pub fn get(r: &Record, p: &Port) -> CommValue {
    r.get(p).cloned().unwrap_or(CommValue::Bot)
}

pub fn records_equal(a: &Record, b: &Record) -> bool {
    let keys: std::collections::BTreeSet<&Port> = a.keys().chain(b.keys()).collect();
    keys.into_iter().all(|k| equal(&get(a, k), &get(b, k)))
}
