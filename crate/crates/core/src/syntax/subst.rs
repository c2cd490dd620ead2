//! Free names, capture-avoiding substitution and alpha-equivalence.

use std::collections::{BTreeMap, BTreeSet};

use super::ast::*;

/// Picks `base`, `base'`, `base''`, ... until the name avoids `used`.
pub fn fresh_name(base: &str, used: &BTreeSet<Name>) -> Name {
    let mut candidate = base.to_string();
    while used.contains(&candidate) {
        candidate.push('\'');
    }
    candidate
}

// ---------------------------------------------------------------- types

pub fn free_type_vars(a: &SessionType) -> BTreeSet<Name> {
    let mut out = BTreeSet::new();
    collect_type_vars(a, &mut Vec::new(), &mut out);
    out
}

fn collect_type_vars(a: &SessionType, bound: &mut Vec<Name>, out: &mut BTreeSet<Name>) {
    use SessionType::*;
    match a {
        Unit => {}
        Down(b) | Up(b) => collect_type_vars(b, bound, out),
        Plus(m) | With(m) => m.values().for_each(|b| collect_type_vars(b, bound, out)),
        Tensor(b, c) | Lolly(b, c) => {
            collect_type_vars(b, bound, out);
            collect_type_vars(c, bound, out);
        }
        // Types under a functional type are closed.
        AndVal(_, b) | ImpVal(_, b) => collect_type_vars(b, bound, out),
        Var(x) => {
            if !bound.contains(x) {
                out.insert(x.clone());
            }
        }
        Rec(x, b) => {
            bound.push(x.clone());
            collect_type_vars(b, bound, out);
            bound.pop();
        }
    }
}

/// Simultaneous capture-avoiding substitution `[σ]B`. Polarity of the
/// substituted types is not checked here; see `typecheck::subst_type_checked`.
pub fn subst_type(sigma: &BTreeMap<Name, SessionType>, b: &SessionType) -> SessionType {
    use SessionType::*;
    if sigma.is_empty() {
        return b.clone();
    }
    match b {
        Unit => Unit,
        Down(a) => Down(Box::new(subst_type(sigma, a))),
        Up(a) => Up(Box::new(subst_type(sigma, a))),
        Plus(m) => Plus(m.iter().map(|(l, a)| (l.clone(), subst_type(sigma, a))).collect()),
        With(m) => With(m.iter().map(|(l, a)| (l.clone(), subst_type(sigma, a))).collect()),
        Tensor(x, y) => Tensor(Box::new(subst_type(sigma, x)), Box::new(subst_type(sigma, y))),
        Lolly(x, y) => Lolly(Box::new(subst_type(sigma, x)), Box::new(subst_type(sigma, y))),
        AndVal(t, a) => AndVal(t.clone(), Box::new(subst_type(sigma, a))),
        ImpVal(t, a) => ImpVal(t.clone(), Box::new(subst_type(sigma, a))),
        Var(x) => sigma.get(x).cloned().unwrap_or_else(|| b.clone()),
        Rec(x, body) => {
            let mut inner = sigma.clone();
            inner.remove(x);
            if inner.is_empty() {
                return b.clone();
            }
            let mut avoid: BTreeSet<Name> = BTreeSet::new();
            for t in inner.values() {
                avoid.extend(free_type_vars(t));
            }
            if avoid.contains(x) {
                avoid.extend(free_type_vars(body));
                avoid.extend(inner.keys().cloned());
                let y = fresh_name(x, &avoid);
                let mut rename = BTreeMap::new();
                rename.insert(x.clone(), Var(y.clone()));
                let renamed = subst_type(&rename, body);
                Rec(y, Box::new(subst_type(&inner, &renamed)))
            } else {
                Rec(x.clone(), Box::new(subst_type(&inner, body)))
            }
        }
    }
}

/// `[ρα.A/α]A`
pub fn unfold_type(a: &SessionType) -> Option<SessionType> {
    match a {
        SessionType::Rec(x, body) => {
            let mut sigma = BTreeMap::new();
            sigma.insert(x.clone(), a.clone());
            Some(subst_type(&sigma, body))
        }
        _ => None,
    }
}

/// Alpha-equivalence of session types, comparing bound variables by their
/// binder depth.
pub fn type_alpha_eq(a: &SessionType, b: &SessionType) -> bool {
    type_eq_in(a, b, &mut Vec::new(), &mut Vec::new())
}

fn type_eq_in(a: &SessionType, b: &SessionType, ea: &mut Vec<Name>, eb: &mut Vec<Name>) -> bool {
    use SessionType::*;
    match (a, b) {
        (Unit, Unit) => true,
        (Down(x), Down(y)) | (Up(x), Up(y)) => type_eq_in(x, y, ea, eb),
        (Plus(m), Plus(n)) | (With(m), With(n)) => {
            m.len() == n.len()
                && m.iter()
                    .zip(n.iter())
                    .all(|((l, x), (k, y))| l == k && type_eq_in(x, y, ea, eb))
        }
        (Tensor(x1, y1), Tensor(x2, y2)) | (Lolly(x1, y1), Lolly(x2, y2)) => {
            type_eq_in(x1, x2, ea, eb) && type_eq_in(y1, y2, ea, eb)
        }
        (AndVal(t, x), AndVal(s, y)) | (ImpVal(t, x), ImpVal(s, y)) => {
            func_type_alpha_eq(t, s) && type_eq_in(x, y, ea, eb)
        }
        (Var(x), Var(y)) => {
            let ix = ea.iter().rposition(|v| v == x);
            let iy = eb.iter().rposition(|v| v == y);
            match (ix, iy) {
                (Some(i), Some(j)) => ea.len() - i == eb.len() - j,
                (None, None) => x == y,
                _ => false,
            }
        }
        (Rec(x, p), Rec(y, q)) => {
            ea.push(x.clone());
            eb.push(y.clone());
            let r = type_eq_in(p, q, ea, eb);
            ea.pop();
            eb.pop();
            r
        }
        _ => false,
    }
}

/// Channel names in a quoted-process type are part of the interface, so they
/// are compared by position only.
pub fn func_type_alpha_eq(t: &FuncType, s: &FuncType) -> bool {
    match (t, s) {
        (FuncType::Arrow(a, b), FuncType::Arrow(c, d)) => {
            func_type_alpha_eq(a, c) && func_type_alpha_eq(b, d)
        }
        (
            FuncType::Proc {
                provided: (_, a),
                used: u,
            },
            FuncType::Proc {
                provided: (_, b),
                used: v,
            },
        ) => {
            type_alpha_eq(a, b)
                && u.len() == v.len()
                && u.iter().zip(v).all(|((_, x), (_, y))| type_alpha_eq(x, y))
        }
        _ => false,
    }
}

// ---------------------------------------------------------------- channels

/// Free channel names of a process.
pub fn free_channels(p: &Process) -> BTreeSet<Name> {
    use Process::*;
    let mut out = BTreeSet::new();
    match p {
        Fwd { to, from } => {
            out.insert(to.clone());
            out.insert(from.clone());
        }
        Cut {
            chan, left, right, ..
        } => {
            out.extend(free_channels(left));
            out.extend(free_channels(right));
            out.remove(chan);
        }
        Close(a) => {
            out.insert(a.clone());
        }
        Wait(a, q)
        | SendShift(a, q)
        | RecvShift(a, q)
        | SendLabel(a, _, q)
        | SendUnfold(a, q)
        | RecvUnfold(a, q) => {
            out.extend(free_channels(q));
            out.insert(a.clone());
        }
        Case(a, branches) => {
            for q in branches.values() {
                out.extend(free_channels(q));
            }
            out.insert(a.clone());
        }
        SendChan { chan, sent, cont } => {
            out.extend(free_channels(cont));
            out.insert(chan.clone());
            out.insert(sent.clone());
        }
        RecvChan { bind, chan, cont } => {
            out.extend(free_channels(cont));
            out.remove(bind);
            out.insert(chan.clone());
        }
        SendVal { chan, cont, .. } | RecvVal { chan, cont, .. } => {
            out.extend(free_channels(cont));
            out.insert(chan.clone());
        }
        Unquote { chan, args, .. } => {
            out.insert(chan.clone());
            out.extend(args.iter().cloned());
        }
    }
    out
}

/// Renames free channels of `p` according to `rho`. Bound channels that would
/// capture a renamed channel are renamed first.
pub fn rename_channels(rho: &BTreeMap<Name, Name>, p: &Process) -> Process {
    use Process::*;
    let r = |n: &Name| rho.get(n).cloned().unwrap_or_else(|| n.clone());
    match p {
        Fwd { to, from } => Fwd {
            to: r(to),
            from: r(from),
        },
        Cut {
            chan,
            ty,
            left,
            right,
        } => {
            let (chan2, inner) = under_channel_binder(rho, chan, p);
            Cut {
                chan: chan2,
                ty: ty.clone(),
                left: Box::new(rename_channels(&inner, left)),
                right: Box::new(rename_channels(&inner, right)),
            }
        }
        Close(a) => Close(r(a)),
        Wait(a, q) => Wait(r(a), Box::new(rename_channels(rho, q))),
        SendShift(a, q) => SendShift(r(a), Box::new(rename_channels(rho, q))),
        RecvShift(a, q) => RecvShift(r(a), Box::new(rename_channels(rho, q))),
        SendLabel(a, k, q) => SendLabel(r(a), k.clone(), Box::new(rename_channels(rho, q))),
        SendUnfold(a, q) => SendUnfold(r(a), Box::new(rename_channels(rho, q))),
        RecvUnfold(a, q) => RecvUnfold(r(a), Box::new(rename_channels(rho, q))),
        Case(a, bs) => Case(
            r(a),
            bs.iter()
                .map(|(l, q)| (l.clone(), rename_channels(rho, q)))
                .collect(),
        ),
        SendChan { chan, sent, cont } => SendChan {
            chan: r(chan),
            sent: r(sent),
            cont: Box::new(rename_channels(rho, cont)),
        },
        RecvChan { bind, chan, cont } => {
            let (bind2, inner) = under_channel_binder(rho, bind, p);
            RecvChan {
                bind: bind2,
                chan: r(chan),
                cont: Box::new(rename_channels(&inner, cont)),
            }
        }
        SendVal { chan, term, cont } => SendVal {
            chan: r(chan),
            term: term.clone(),
            cont: Box::new(rename_channels(rho, cont)),
        },
        RecvVal { bind, chan, cont } => RecvVal {
            bind: bind.clone(),
            chan: r(chan),
            cont: Box::new(rename_channels(rho, cont)),
        },
        Unquote { chan, term, args } => Unquote {
            chan: r(chan),
            term: term.clone(),
            args: args.iter().map(r).collect(),
        },
    }
}

fn under_channel_binder(
    rho: &BTreeMap<Name, Name>,
    binder: &Name,
    whole: &Process,
) -> (Name, BTreeMap<Name, Name>) {
    let mut inner = rho.clone();
    inner.remove(binder);
    let targets: BTreeSet<Name> = inner.values().cloned().collect();
    if targets.contains(binder) {
        let mut avoid = targets;
        avoid.extend(free_channels(whole));
        avoid.extend(inner.keys().cloned());
        let fresh = fresh_name(binder, &avoid);
        inner.insert(binder.clone(), fresh.clone());
        (fresh, inner)
    } else {
        (binder.clone(), inner)
    }
}

// ---------------------------------------------------------------- terms

pub fn free_term_vars(m: &Term) -> BTreeSet<Name> {
    let mut out = BTreeSet::new();
    term_vars(m, &mut out);
    out
}

pub fn free_term_vars_process(p: &Process) -> BTreeSet<Name> {
    let mut out = BTreeSet::new();
    process_vars(p, &mut out);
    out
}

fn term_vars(m: &Term, out: &mut BTreeSet<Name>) {
    match m {
        Term::Var(x) => {
            out.insert(x.clone());
        }
        Term::Fix(x, n) | Term::Lam(x, _, n) => {
            let mut inner = BTreeSet::new();
            term_vars(n, &mut inner);
            inner.remove(x);
            out.extend(inner);
        }
        Term::App(a, b) => {
            term_vars(a, out);
            term_vars(b, out);
        }
        Term::Quote { body, .. } => process_vars(body, out),
    }
}

fn process_vars(p: &Process, out: &mut BTreeSet<Name>) {
    use Process::*;
    match p {
        Fwd { .. } | Close(_) => {}
        Cut { left, right, .. } => {
            process_vars(left, out);
            process_vars(right, out);
        }
        Wait(_, q)
        | SendShift(_, q)
        | RecvShift(_, q)
        | SendLabel(_, _, q)
        | SendUnfold(_, q)
        | RecvUnfold(_, q) => process_vars(q, out),
        Case(_, bs) => bs.values().for_each(|q| process_vars(q, out)),
        SendChan { cont, .. } | RecvChan { cont, .. } => process_vars(cont, out),
        SendVal { term, cont, .. } => {
            term_vars(term, out);
            process_vars(cont, out);
        }
        RecvVal { bind, cont, .. } => {
            let mut inner = BTreeSet::new();
            process_vars(cont, &mut inner);
            inner.remove(bind);
            out.extend(inner);
        }
        Unquote { term, .. } => term_vars(term, out),
    }
}

/// Simultaneous capture-avoiding substitution of terms for functional variables.
pub fn subst_term(sigma: &BTreeMap<Name, Term>, m: &Term) -> Term {
    if sigma.is_empty() {
        return m.clone();
    }
    match m {
        Term::Var(x) => sigma.get(x).cloned().unwrap_or_else(|| m.clone()),
        Term::Fix(x, n) => {
            let (x2, inner) = under_term_binder(sigma, x, &free_term_vars(n));
            Term::Fix(x2, Box::new(subst_term(&inner, n)))
        }
        Term::Lam(x, t, n) => {
            let (x2, inner) = under_term_binder(sigma, x, &free_term_vars(n));
            Term::Lam(x2, t.clone(), Box::new(subst_term(&inner, n)))
        }
        Term::App(a, b) => Term::App(Box::new(subst_term(sigma, a)), Box::new(subst_term(sigma, b))),
        Term::Quote { chan, body, args } => Term::Quote {
            chan: chan.clone(),
            body: Box::new(subst_process(sigma, body)),
            args: args.clone(),
        },
    }
}

pub fn subst_process(sigma: &BTreeMap<Name, Term>, p: &Process) -> Process {
    use Process::*;
    if sigma.is_empty() {
        return p.clone();
    }
    let s = |q: &Process| Box::new(subst_process(sigma, q));
    match p {
        Fwd { .. } | Close(_) => p.clone(),
        Cut {
            chan,
            ty,
            left,
            right,
        } => Cut {
            chan: chan.clone(),
            ty: ty.clone(),
            left: s(left),
            right: s(right),
        },
        Wait(a, q) => Wait(a.clone(), s(q)),
        SendShift(a, q) => SendShift(a.clone(), s(q)),
        RecvShift(a, q) => RecvShift(a.clone(), s(q)),
        SendLabel(a, k, q) => SendLabel(a.clone(), k.clone(), s(q)),
        SendUnfold(a, q) => SendUnfold(a.clone(), s(q)),
        RecvUnfold(a, q) => RecvUnfold(a.clone(), s(q)),
        Case(a, bs) => Case(
            a.clone(),
            bs.iter()
                .map(|(l, q)| (l.clone(), subst_process(sigma, q)))
                .collect(),
        ),
        SendChan { chan, sent, cont } => SendChan {
            chan: chan.clone(),
            sent: sent.clone(),
            cont: s(cont),
        },
        RecvChan { bind, chan, cont } => RecvChan {
            bind: bind.clone(),
            chan: chan.clone(),
            cont: s(cont),
        },
        SendVal { chan, term, cont } => SendVal {
            chan: chan.clone(),
            term: subst_term(sigma, term),
            cont: s(cont),
        },
        RecvVal { bind, chan, cont } => {
            let (x2, inner) = under_term_binder(sigma, bind, &free_term_vars_process(cont));
            RecvVal {
                bind: x2,
                chan: chan.clone(),
                cont: Box::new(subst_process(&inner, cont)),
            }
        }
        Unquote { chan, term, args } => Unquote {
            chan: chan.clone(),
            term: subst_term(sigma, term),
            args: args.clone(),
        },
    }
}

fn under_term_binder(
    sigma: &BTreeMap<Name, Term>,
    binder: &Name,
    body_free: &BTreeSet<Name>,
) -> (Name, BTreeMap<Name, Term>) {
    let mut inner = sigma.clone();
    inner.remove(binder);
    let mut avoid = BTreeSet::new();
    for t in inner.values() {
        avoid.extend(free_term_vars(t));
    }
    if avoid.contains(binder) {
        avoid.extend(body_free.iter().cloned());
        avoid.extend(inner.keys().cloned());
        let fresh = fresh_name(binder, &avoid);
        inner.insert(binder.clone(), Term::Var(fresh.clone()));
        (fresh, inner)
    } else {
        (binder.clone(), inner)
    }
}

// ---------------------------------------------------------------- alpha-equivalence of processes

/// Alpha-equivalence of processes: bound channels and bound functional
/// variables are compared by binding position.
pub fn process_alpha_eq(p: &Process, q: &Process) -> bool {
    Alpha::default().proc(p, q)
}

pub fn term_alpha_eq(m: &Term, n: &Term) -> bool {
    Alpha::default().term(m, n)
}

#[derive(Default, Clone)]
struct Alpha {
    chans: Vec<(Name, Name)>,
    vars: Vec<(Name, Name)>,
}

fn same_bound(env: &[(Name, Name)], x: &Name, y: &Name) -> bool {
    let ix = env.iter().rposition(|(a, _)| a == x);
    let iy = env.iter().rposition(|(_, b)| b == y);
    match (ix, iy) {
        (Some(i), Some(j)) => i == j,
        (None, None) => x == y,
        _ => false,
    }
}

impl Alpha {
    fn ch(&self, x: &Name, y: &Name) -> bool {
        same_bound(&self.chans, x, y)
    }

    fn with_chan(&self, x: &Name, y: &Name) -> Alpha {
        let mut a = self.clone();
        a.chans.push((x.clone(), y.clone()));
        a
    }

    fn with_var(&self, x: &Name, y: &Name) -> Alpha {
        let mut a = self.clone();
        a.vars.push((x.clone(), y.clone()));
        a
    }

    fn ty(&self, a: &Option<SessionType>, b: &Option<SessionType>) -> bool {
        match (a, b) {
            (Some(x), Some(y)) => type_alpha_eq(x, y),
            (None, None) => true,
            _ => false,
        }
    }

    fn term(&self, m: &Term, n: &Term) -> bool {
        match (m, n) {
            (Term::Var(x), Term::Var(y)) => same_bound(&self.vars, x, y),
            (Term::Fix(x, a), Term::Fix(y, b)) => self.with_var(x, y).term(a, b),
            (Term::Lam(x, t, a), Term::Lam(y, s, b)) => {
                func_type_alpha_eq(t, s) && self.with_var(x, y).term(a, b)
            }
            (Term::App(a, b), Term::App(c, d)) => self.term(a, c) && self.term(b, d),
            (
                Term::Quote {
                    chan: a,
                    body: p,
                    args: xs,
                },
                Term::Quote {
                    chan: b,
                    body: q,
                    args: ys,
                },
            ) => {
                if xs.len() != ys.len() {
                    return false;
                }
                // A quote closes over no channels; its body sees only its interface.
                let mut inner = Alpha {
                    chans: Vec::new(),
                    vars: self.vars.clone(),
                };
                inner.chans.push((a.clone(), b.clone()));
                for (x, y) in xs.iter().zip(ys) {
                    inner.chans.push((x.clone(), y.clone()));
                }
                inner.proc(p, q)
            }
            _ => false,
        }
    }

    fn proc(&self, p: &Process, q: &Process) -> bool {
        use Process::*;
        match (p, q) {
            (Fwd { to: a, from: b }, Fwd { to: c, from: d }) => self.ch(a, c) && self.ch(b, d),
            (
                Cut {
                    chan: a,
                    ty: t,
                    left: l1,
                    right: r1,
                },
                Cut {
                    chan: b,
                    ty: s,
                    left: l2,
                    right: r2,
                },
            ) => {
                let inner = self.with_chan(a, b);
                self.ty(t, s) && inner.proc(l1, l2) && inner.proc(r1, r2)
            }
            (Close(a), Close(b)) => self.ch(a, b),
            (Wait(a, p1), Wait(b, q1))
            | (SendShift(a, p1), SendShift(b, q1))
            | (RecvShift(a, p1), RecvShift(b, q1))
            | (SendUnfold(a, p1), SendUnfold(b, q1))
            | (RecvUnfold(a, p1), RecvUnfold(b, q1)) => self.ch(a, b) && self.proc(p1, q1),
            (SendLabel(a, k, p1), SendLabel(b, l, q1)) => {
                k == l && self.ch(a, b) && self.proc(p1, q1)
            }
            (Case(a, m), Case(b, n)) => {
                self.ch(a, b)
                    && m.len() == n.len()
                    && m.iter()
                        .zip(n)
                        .all(|((k, p1), (l, q1))| k == l && self.proc(p1, q1))
            }
            (
                SendChan {
                    chan: a,
                    sent: b,
                    cont: p1,
                },
                SendChan {
                    chan: c,
                    sent: d,
                    cont: q1,
                },
            ) => self.ch(a, c) && self.ch(b, d) && self.proc(p1, q1),
            (
                RecvChan {
                    bind: x,
                    chan: a,
                    cont: p1,
                },
                RecvChan {
                    bind: y,
                    chan: b,
                    cont: q1,
                },
            ) => self.ch(a, b) && self.with_chan(x, y).proc(p1, q1),
            (
                SendVal {
                    chan: a,
                    term: m,
                    cont: p1,
                },
                SendVal {
                    chan: b,
                    term: n,
                    cont: q1,
                },
            ) => self.ch(a, b) && self.term(m, n) && self.proc(p1, q1),
            (
                RecvVal {
                    bind: x,
                    chan: a,
                    cont: p1,
                },
                RecvVal {
                    bind: y,
                    chan: b,
                    cont: q1,
                },
            ) => self.ch(a, b) && self.with_var(x, y).proc(p1, q1),
            (
                Unquote {
                    chan: a,
                    term: m,
                    args: xs,
                },
                Unquote {
                    chan: b,
                    term: n,
                    args: ys,
                },
            ) => {
                self.ch(a, b)
                    && xs.len() == ys.len()
                    && xs.iter().zip(ys).all(|(x, y)| self.ch(x, y))
                    && self.term(m, n)
            }
            _ => false,
        }
    }
}
