use std::collections::BTreeMap;
use std::fmt;

pub type Name = String;
pub type Label = String;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize)]
pub enum Polarity {
    Positive,
    Negative,
}

impl Polarity {
    pub fn dual(self) -> Polarity {
        match self {
            Polarity::Positive => Polarity::Negative,
            Polarity::Negative => Polarity::Positive,
        }
    }

    pub fn sign(self) -> char {
        match self {
            Polarity::Positive => '+',
            Polarity::Negative => '-',
        }
    }
}

impl fmt::Display for Polarity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Polarity::Positive => f.write_str("positive"),
            Polarity::Negative => f.write_str("negative"),
        }
    }
}

/// Session types. Label maps are ordered so printing and comparison are canonical.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SessionType {
    Unit,
    Down(Box<SessionType>),
    Up(Box<SessionType>),
    Plus(BTreeMap<Label, SessionType>),
    With(BTreeMap<Label, SessionType>),
    /// `B * A`: send a channel of type B, continue as A.
    Tensor(Box<SessionType>, Box<SessionType>),
    /// `B -o A`: receive a channel of type B, continue as A.
    Lolly(Box<SessionType>, Box<SessionType>),
    AndVal(Box<FuncType>, Box<SessionType>),
    ImpVal(Box<FuncType>, Box<SessionType>),
    Var(Name),
    Rec(Name, Box<SessionType>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FuncType {
    Arrow(Box<FuncType>, Box<FuncType>),
    Proc {
        provided: (Name, SessionType),
        used: Vec<(Name, SessionType)>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(Name),
    Fix(Name, Box<Term>),
    Lam(Name, FuncType, Box<Term>),
    App(Box<Term>, Box<Term>),
    Quote {
        chan: Name,
        body: Box<Process>,
        args: Vec<Name>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Process {
    /// `fwd b a`: provide b by forwarding a.
    Fwd { to: Name, from: Name },
    /// Cut on a private channel. The type annotation is optional in the
    /// source; the checker fills it in.
    Cut {
        chan: Name,
        ty: Option<SessionType>,
        left: Box<Process>,
        right: Box<Process>,
    },
    Close(Name),
    Wait(Name, Box<Process>),
    SendShift(Name, Box<Process>),
    RecvShift(Name, Box<Process>),
    SendLabel(Name, Label, Box<Process>),
    Case(Name, BTreeMap<Label, Process>),
    /// Send channel `sent` over `chan`.
    SendChan {
        chan: Name,
        sent: Name,
        cont: Box<Process>,
    },
    /// Receive a channel over `chan` and bind it to `bind`.
    RecvChan {
        bind: Name,
        chan: Name,
        cont: Box<Process>,
    },
    SendVal {
        chan: Name,
        term: Term,
        cont: Box<Process>,
    },
    RecvVal {
        bind: Name,
        chan: Name,
        cont: Box<Process>,
    },
    SendUnfold(Name, Box<Process>),
    RecvUnfold(Name, Box<Process>),
    Unquote {
        chan: Name,
        term: Term,
        args: Vec<Name>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize)]
pub struct Span {
    pub start: usize,
    pub end: usize,
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum DeclKind {
    Type(SessionType),
    Term(FuncType, Term),
    Proc {
        used: Vec<(Name, SessionType)>,
        provided: (Name, SessionType),
        body: Process,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Decl {
    pub name: Name,
    pub span: Span,
    pub kind: DeclKind,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Program {
    pub decls: Vec<Decl>,
}

impl Program {
    pub fn get(&self, name: &str) -> Option<&Decl> {
        self.decls.iter().find(|d| d.name == name)
    }

    pub fn type_named(&self, name: &str) -> Option<&SessionType> {
        self.decls.iter().find_map(|d| match &d.kind {
            DeclKind::Type(t) if d.name == name => Some(t),
            _ => None,
        })
    }
}

// Shorthand constructors, mostly for tests and generated corpora.
impl SessionType {
    pub fn down(a: SessionType) -> Self {
        SessionType::Down(Box::new(a))
    }
    pub fn up(a: SessionType) -> Self {
        SessionType::Up(Box::new(a))
    }
    pub fn tensor(b: SessionType, a: SessionType) -> Self {
        SessionType::Tensor(Box::new(b), Box::new(a))
    }
    pub fn lolly(b: SessionType, a: SessionType) -> Self {
        SessionType::Lolly(Box::new(b), Box::new(a))
    }
    pub fn rec(x: &str, a: SessionType) -> Self {
        SessionType::Rec(x.to_string(), Box::new(a))
    }
    pub fn var(x: &str) -> Self {
        SessionType::Var(x.to_string())
    }
    pub fn plus<'a>(items: impl IntoIterator<Item = (&'a str, SessionType)>) -> Self {
        SessionType::Plus(items.into_iter().map(|(l, a)| (l.to_string(), a)).collect())
    }
    pub fn with<'a>(items: impl IntoIterator<Item = (&'a str, SessionType)>) -> Self {
        SessionType::With(items.into_iter().map(|(l, a)| (l.to_string(), a)).collect())
    }
    pub fn and_val(t: FuncType, a: SessionType) -> Self {
        SessionType::AndVal(Box::new(t), Box::new(a))
    }
    pub fn imp_val(t: FuncType, a: SessionType) -> Self {
        SessionType::ImpVal(Box::new(t), Box::new(a))
    }

    /// The stream of bits `rec b. +{0: b, 1: b}`.
    pub fn bits() -> Self {
        SessionType::rec(
            "b",
            SessionType::plus([("0", SessionType::var("b")), ("1", SessionType::var("b"))]),
        )
    }
}

impl FuncType {
    pub fn proc_type(provided: (&str, SessionType), used: Vec<(&str, SessionType)>) -> Self {
        FuncType::Proc {
            provided: (provided.0.to_string(), provided.1),
            used: used.into_iter().map(|(n, a)| (n.to_string(), a)).collect(),
        }
    }
    pub fn arrow(a: FuncType, b: FuncType) -> Self {
        FuncType::Arrow(Box::new(a), Box::new(b))
    }
}

impl Term {
    pub fn var(x: &str) -> Self {
        Term::Var(x.to_string())
    }
    pub fn fix(x: &str, m: Term) -> Self {
        Term::Fix(x.to_string(), Box::new(m))
    }
    pub fn lam(x: &str, t: FuncType, m: Term) -> Self {
        Term::Lam(x.to_string(), t, Box::new(m))
    }
    pub fn app(m: Term, n: Term) -> Self {
        Term::App(Box::new(m), Box::new(n))
    }
    pub fn quote(chan: &str, body: Process, args: &[&str]) -> Self {
        Term::Quote {
            chan: chan.to_string(),
            body: Box::new(body),
            args: args.iter().map(|s| s.to_string()).collect(),
        }
    }
}

impl Process {
    pub fn fwd(to: &str, from: &str) -> Self {
        Process::Fwd {
            to: to.into(),
            from: from.into(),
        }
    }
    pub fn cut(chan: &str, ty: Option<SessionType>, left: Process, right: Process) -> Self {
        Process::Cut {
            chan: chan.into(),
            ty,
            left: Box::new(left),
            right: Box::new(right),
        }
    }
    pub fn close(a: &str) -> Self {
        Process::Close(a.into())
    }
    pub fn wait(a: &str, p: Process) -> Self {
        Process::Wait(a.into(), Box::new(p))
    }
    pub fn send_shift(a: &str, p: Process) -> Self {
        Process::SendShift(a.into(), Box::new(p))
    }
    pub fn recv_shift(a: &str, p: Process) -> Self {
        Process::RecvShift(a.into(), Box::new(p))
    }
    pub fn send_label(a: &str, k: &str, p: Process) -> Self {
        Process::SendLabel(a.into(), k.into(), Box::new(p))
    }
    pub fn case<'a>(a: &str, branches: impl IntoIterator<Item = (&'a str, Process)>) -> Self {
        Process::Case(
            a.into(),
            branches.into_iter().map(|(l, p)| (l.to_string(), p)).collect(),
        )
    }
    pub fn send_chan(a: &str, b: &str, p: Process) -> Self {
        Process::SendChan {
            chan: a.into(),
            sent: b.into(),
            cont: Box::new(p),
        }
    }
    pub fn recv_chan(b: &str, a: &str, p: Process) -> Self {
        Process::RecvChan {
            bind: b.into(),
            chan: a.into(),
            cont: Box::new(p),
        }
    }
    pub fn send_val(a: &str, m: Term, p: Process) -> Self {
        Process::SendVal {
            chan: a.into(),
            term: m,
            cont: Box::new(p),
        }
    }
    pub fn recv_val(x: &str, a: &str, p: Process) -> Self {
        Process::RecvVal {
            bind: x.into(),
            chan: a.into(),
            cont: Box::new(p),
        }
    }
    pub fn send_unfold(a: &str, p: Process) -> Self {
        Process::SendUnfold(a.into(), Box::new(p))
    }
    pub fn recv_unfold(a: &str, p: Process) -> Self {
        Process::RecvUnfold(a.into(), Box::new(p))
    }
    pub fn unquote(a: &str, m: Term, args: &[&str]) -> Self {
        Process::Unquote {
            chan: a.into(),
            term: m,
            args: args.iter().map(|s| s.to_string()).collect(),
        }
    }
}
