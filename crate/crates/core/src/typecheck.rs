//! Type formation, term typing and process typing.
//!
//! Terms are checked bidirectionally: variables, applications, lambdas and
//! quotes against a known interface synthesize; `fix` and bare quotes are
//! checked against an expected type. Process checking returns the process
//! with every cut annotated by the type of its private channel.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::syntax::{
    free_channels, func_type_alpha_eq, subst_type, top_polarity, type_alpha_eq, unfold_type,
    DeclKind, FuncType, Name, Polarity, Process, Program, SessionType, Span, Term,
};

use Polarity::{Negative as Neg, Positive as Pos};

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ErrorKind {
    UnboundName,
    PolarityMismatch,
    LinearMisuse,
    LabelMismatch,
    RuleMismatch,
}

impl fmt::Display for ErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ErrorKind::UnboundName => "unbound name",
            ErrorKind::PolarityMismatch => "polarity mismatch",
            ErrorKind::LinearMisuse => "linear context misuse",
            ErrorKind::LabelMismatch => "label mismatch",
            ErrorKind::RuleMismatch => "rule mismatch",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error, serde::Serialize)]
#[error("{kind} in rule {rule}: {message}")]
pub struct TypeError {
    pub kind: ErrorKind,
    /// The typing rule whose premises failed, e.g. `C↓` or `⊕L`.
    pub rule: String,
    pub span: Option<Span>,
    /// Declaration being checked, when known.
    pub decl: Option<Name>,
    pub message: String,
}

fn err<T>(kind: ErrorKind, rule: &str, message: impl Into<String>) -> Result<T, TypeError> {
    Err(TypeError {
        kind,
        rule: rule.to_string(),
        span: None,
        decl: None,
        message: message.into(),
    })
}

pub type TypeVars = BTreeMap<Name, Polarity>;
pub type FuncContext = BTreeMap<Name, FuncType>;
pub type LinearContext = BTreeMap<Name, SessionType>;

/// The polarity `p` with `Ξ ⊢ A typeᵖ`.
pub fn check_session_type(xi: &TypeVars, a: &SessionType) -> Result<Polarity, TypeError> {
    use SessionType::*;
    let need = |rule: &str, b: &SessionType, p: Polarity| -> Result<(), TypeError> {
        let q = check_session_type(xi, b)?;
        if q != p {
            return err(
                ErrorKind::PolarityMismatch,
                rule,
                format!("`{b}` is {q}, expected a {p} type"),
            );
        }
        Ok(())
    };
    match a {
        Unit => Ok(Pos),
        Down(b) => need("C↓", b, Neg).map(|_| Pos),
        Up(b) => need("C↑", b, Pos).map(|_| Neg),
        Plus(m) | With(m) => {
            let (rule, p) = if matches!(a, Plus(_)) { ("C⊕", Pos) } else { ("C&", Neg) };
            if m.is_empty() {
                return err(ErrorKind::LabelMismatch, rule, "empty label set");
            }
            for b in m.values() {
                need(rule, b, p)?;
            }
            Ok(p)
        }
        Tensor(b, c) => {
            need("C⊗", b, Pos)?;
            need("C⊗", c, Pos)?;
            Ok(Pos)
        }
        Lolly(b, c) => {
            need("C⊸", b, Pos)?;
            need("C⊸", c, Neg)?;
            Ok(Neg)
        }
        AndVal(t, b) => {
            check_func_type(t)?;
            need("C∧", b, Pos).map(|_| Pos)
        }
        ImpVal(t, b) => {
            check_func_type(t)?;
            need("C⊃", b, Neg).map(|_| Neg)
        }
        Var(x) => match xi.get(x) {
            Some(p) => Ok(*p),
            None => err(ErrorKind::UnboundName, "CVar", format!("type variable `{x}` is not bound")),
        },
        Rec(x, body) => {
            if !contractive(x, body) {
                return err(
                    ErrorKind::RuleMismatch,
                    "Cρ",
                    format!("`{a}` is not contractive: `{x}` occurs unguarded"),
                );
            }
            let p = match top_polarity(body) {
                Some(p) => p,
                None => return err(ErrorKind::RuleMismatch, "Cρ", format!("`{a}` has no polarity")),
            };
            let mut xi2 = xi.clone();
            xi2.insert(x.clone(), p);
            let q = check_session_type(&xi2, body)?;
            if q != p {
                return err(ErrorKind::PolarityMismatch, "Cρ", format!("body of `{a}` is {q}"));
            }
            Ok(p)
        }
    }
}

/// The bound variable does not appear at the top of the body, looking
/// through nested `rec` binders.
fn contractive(x: &str, body: &SessionType) -> bool {
    match body {
        SessionType::Var(y) => y != x,
        SessionType::Rec(y, b) => y == x || contractive(x, b),
        _ => true,
    }
}

/// `⊢ τ ftype`: every session type in a quoted-process type is closed.
pub fn check_func_type(t: &FuncType) -> Result<(), TypeError> {
    match t {
        FuncType::Arrow(a, b) => {
            check_func_type(a)?;
            check_func_type(b)
        }
        FuncType::Proc { provided, used } => {
            let mut seen = BTreeSet::new();
            for (c, a) in std::iter::once(provided).chain(used) {
                if !seen.insert(c.clone()) {
                    return err(ErrorKind::LinearMisuse, "T{}", format!("channel `{c}` listed twice"));
                }
                check_session_type(&TypeVars::new(), a).map_err(|mut e| {
                    if e.kind == ErrorKind::UnboundName {
                        e.rule = "T{}".into();
                        e.message = format!("{} (types in a process type must be closed)", e.message);
                    }
                    e
                })?;
            }
            Ok(())
        }
    }
}

/// Substitution `[σ]B` that first checks each replacement has the polarity
/// of the variable it replaces.
pub fn subst_type_checked(
    xi: &TypeVars,
    sigma: &BTreeMap<Name, SessionType>,
    b: &SessionType,
) -> Result<SessionType, TypeError> {
    for (x, a) in sigma {
        let want = match xi.get(x) {
            Some(p) => *p,
            None => return err(ErrorKind::UnboundName, "CVar", format!("`{x}` is not a type variable")),
        };
        let got = check_session_type(xi, a)?;
        if got != want {
            return err(
                ErrorKind::PolarityMismatch,
                "CVar",
                format!("`{x}` is {want} but `{a}` is {got}"),
            );
        }
    }
    Ok(subst_type(sigma, b))
}

/// Synthesizes the type of a term, or fails when the term needs an expected
/// type (`fix`, quotes).
pub fn check_term(psi: &FuncContext, m: &Term) -> Result<FuncType, TypeError> {
    synth(psi, m).map(|(t, _)| t)
}

fn synth(psi: &FuncContext, m: &Term) -> Result<(FuncType, Term), TypeError> {
    match m {
        Term::Var(x) => match psi.get(x) {
            Some(t) => Ok((t.clone(), m.clone())),
            None => err(ErrorKind::UnboundName, "F-Var", format!("variable `{x}` is not in scope")),
        },
        Term::Lam(x, t, body) => {
            check_func_type(t)?;
            let mut psi2 = psi.clone();
            psi2.insert(x.clone(), t.clone());
            let (s, body) = synth(&psi2, body)?;
            Ok((
                FuncType::arrow(t.clone(), s),
                Term::Lam(x.clone(), t.clone(), Box::new(body)),
            ))
        }
        Term::App(f, a) => {
            let (ft, f) = synth(psi, f)?;
            match ft {
                FuncType::Arrow(t, s) => {
                    let a = check_term_against(psi, a, &t)?;
                    Ok((*s, Term::App(Box::new(f), Box::new(a))))
                }
                other => err(
                    ErrorKind::RuleMismatch,
                    "F-App",
                    format!("applied term has type `{other}`, not a function type"),
                ),
            }
        }
        Term::Fix(x, _) => err(
            ErrorKind::RuleMismatch,
            "F-Fix",
            format!("cannot infer the type of `fix {x}`; it needs an expected type"),
        ),
        Term::Quote { chan, .. } => err(
            ErrorKind::RuleMismatch,
            "I-{}",
            format!("cannot infer the interface of the quoted process on `{chan}`; it needs an expected type"),
        ),
    }
}

/// Checks `Ψ ⊢ M : τ` and returns the elaborated term.
pub fn check_term_against(psi: &FuncContext, m: &Term, t: &FuncType) -> Result<Term, TypeError> {
    match m {
        Term::Fix(x, body) => {
            let mut psi2 = psi.clone();
            psi2.insert(x.clone(), t.clone());
            let body = check_term_against(&psi2, body, t)?;
            Ok(Term::Fix(x.clone(), Box::new(body)))
        }
        Term::Quote { chan, body, args } => {
            let FuncType::Proc { provided, used } = t else {
                return err(
                    ErrorKind::RuleMismatch,
                    "I-{}",
                    format!("a quoted process cannot have type `{t}`"),
                );
            };
            if args.len() != used.len() {
                return err(
                    ErrorKind::LinearMisuse,
                    "I-{}",
                    format!("quote lists {} channels, the type lists {}", args.len(), used.len()),
                );
            }
            let mut delta = LinearContext::new();
            for (arg, (_, a)) in args.iter().zip(used) {
                if arg == chan || delta.insert(arg.clone(), a.clone()).is_some() {
                    return err(ErrorKind::LinearMisuse, "I-{}", format!("channel `{arg}` listed twice"));
                }
            }
            let body = check_process(psi, &delta, body, chan, &provided.1)?;
            Ok(Term::Quote {
                chan: chan.clone(),
                body: Box::new(body),
                args: args.clone(),
            })
        }
        Term::Lam(x, s, body) => match t {
            FuncType::Arrow(a, b) if func_type_alpha_eq(a, s) => {
                let mut psi2 = psi.clone();
                psi2.insert(x.clone(), s.clone());
                let body = check_term_against(&psi2, body, b)?;
                Ok(Term::Lam(x.clone(), s.clone(), Box::new(body)))
            }
            _ => err(
                ErrorKind::RuleMismatch,
                "F-Fun",
                format!("`\\{x} : {s}. ...` cannot have type `{t}`"),
            ),
        },
        _ => {
            let (got, m) = synth(psi, m)?;
            if !func_type_alpha_eq(&got, t) {
                let rule = match m {
                    Term::Var(_) => "F-Var",
                    _ => "F-App",
                };
                return err(
                    ErrorKind::RuleMismatch,
                    rule,
                    format!("expected `{t}`, found `{got}`"),
                );
            }
            Ok(m)
        }
    }
}

fn same_type(a: &SessionType, b: &SessionType) -> bool {
    type_alpha_eq(a, b)
}

fn lookup<'a>(delta: &'a LinearContext, a: &str, rule: &str) -> Result<&'a SessionType, TypeError> {
    delta.get(a).ok_or_else(|| TypeError {
        kind: ErrorKind::UnboundName,
        rule: rule.to_string(),
        span: None,
        decl: None,
        message: format!("channel `{a}` is not available"),
    })
}

fn with(delta: &LinearContext, a: &str, t: SessionType) -> LinearContext {
    let mut d = delta.clone();
    d.insert(a.to_string(), t);
    d
}

fn without(delta: &LinearContext, a: &str) -> LinearContext {
    let mut d = delta.clone();
    d.remove(a);
    d
}

fn fresh_binder(delta: &LinearContext, c: &str, b: &str, rule: &str) -> Result<(), TypeError> {
    if delta.contains_key(b) || b == c {
        return err(
            ErrorKind::LinearMisuse,
            rule,
            format!("received channel `{b}` shadows a channel in scope"),
        );
    }
    Ok(())
}

fn mismatch<T>(rule: &str, chan: &str, expected: &str, found: &SessionType) -> Result<T, TypeError> {
    err(
        ErrorKind::RuleMismatch,
        rule,
        format!("channel `{chan}` has type `{found}`, expected {expected}"),
    )
}

fn unused(delta: &LinearContext, rule: &str) -> Result<(), TypeError> {
    if let Some(a) = delta.keys().next() {
        return err(
            ErrorKind::LinearMisuse,
            rule,
            format!("channel `{a}` is never used"),
        );
    }
    Ok(())
}

/// Checks `Ψ ; Δ ⊢ P :: c : A` and returns `P` with its cuts annotated.
pub fn check_process(
    psi: &FuncContext,
    delta: &LinearContext,
    p: &Process,
    c: &str,
    a: &SessionType,
) -> Result<Process, TypeError> {
    use Process::*;
    use SessionType as T;
    if delta.contains_key(c) {
        return err(
            ErrorKind::LinearMisuse,
            "Cut",
            format!("channel `{c}` is both used and provided"),
        );
    }
    let right = |x: &str| x == c;
    match p {
        Fwd { to, from } => {
            if to != c {
                return err(ErrorKind::RuleMismatch, "Fwd", format!("`fwd {to} {from}` must provide `{c}`"));
            }
            let b = lookup(delta, from, "Fwd")?;
            if !same_type(a, b) {
                return err(
                    ErrorKind::RuleMismatch,
                    "Fwd",
                    format!("`{from}` has type `{b}` but `{c}` has type `{a}`"),
                );
            }
            unused(&without(delta, from), "Fwd")?;
            Ok(p.clone())
        }
        Close(x) => {
            if !right(x) {
                let found = lookup(delta, x, "1R")?;
                return mismatch("1R", x, "to be provided", found);
            }
            if *a != T::Unit {
                return mismatch("1R", x, "`1`", a);
            }
            unused(delta, "1R")?;
            Ok(p.clone())
        }
        Wait(x, q) => {
            if right(x) {
                return mismatch("1L", x, "a used channel of type `1`", a);
            }
            let t = lookup(delta, x, "1L")?;
            if *t != T::Unit {
                return mismatch("1L", x, "`1`", t);
            }
            let q = check_process(psi, &without(delta, x), q, c, a)?;
            Ok(Wait(x.clone(), Box::new(q)))
        }
        SendShift(x, q) => {
            if right(x) {
                let T::Down(b) = a else { return mismatch("↓R", x, "`down A`", a) };
                let q = check_process(psi, delta, q, c, b)?;
                Ok(SendShift(x.clone(), Box::new(q)))
            } else {
                let t = lookup(delta, x, "↑L")?;
                let T::Up(b) = t else { return mismatch("↑L", x, "`up A`", t) };
                let q = check_process(psi, &with(delta, x, (**b).clone()), q, c, a)?;
                Ok(SendShift(x.clone(), Box::new(q)))
            }
        }
        RecvShift(x, q) => {
            if right(x) {
                let T::Up(b) = a else { return mismatch("↑R", x, "`up A`", a) };
                let q = check_process(psi, delta, q, c, b)?;
                Ok(RecvShift(x.clone(), Box::new(q)))
            } else {
                let t = lookup(delta, x, "↓L")?;
                let T::Down(b) = t else { return mismatch("↓L", x, "`down A`", t) };
                let q = check_process(psi, &with(delta, x, (**b).clone()), q, c, a)?;
                Ok(RecvShift(x.clone(), Box::new(q)))
            }
        }
        SendLabel(x, k, q) => {
            let (rule, t) = if right(x) { ("⊕R", a) } else { ("&L", lookup(delta, x, "&L")?) };
            let m = match (right(x), t) {
                (true, T::Plus(m)) | (false, T::With(m)) => m,
                _ => return mismatch(rule, x, if right(x) { "`+{...}`" } else { "`&{...}`" }, t),
            };
            let Some(b) = m.get(k) else {
                return err(
                    ErrorKind::LabelMismatch,
                    rule,
                    format!("label `{k}` is not one of {}", labels(m)),
                );
            };
            let q = if right(x) {
                check_process(psi, delta, q, c, b)?
            } else {
                check_process(psi, &with(delta, x, b.clone()), q, c, a)?
            };
            Ok(SendLabel(x.clone(), k.clone(), Box::new(q)))
        }
        Case(x, branches) => {
            let (rule, t) = if right(x) { ("&R", a) } else { ("⊕L", lookup(delta, x, "⊕L")?) };
            let m = match (right(x), t) {
                (true, T::With(m)) | (false, T::Plus(m)) => m,
                _ => return mismatch(rule, x, if right(x) { "`&{...}`" } else { "`+{...}`" }, t),
            };
            let want: BTreeSet<&String> = m.keys().collect();
            let got: BTreeSet<&String> = branches.keys().collect();
            if want != got {
                return err(
                    ErrorKind::LabelMismatch,
                    rule,
                    format!(
                        "branches {} do not match the labels {}",
                        labels(branches),
                        labels(m)
                    ),
                );
            }
            let mut out = BTreeMap::new();
            for (l, q) in branches {
                let b = &m[l];
                let q = if right(x) {
                    check_process(psi, delta, q, c, b)?
                } else {
                    check_process(psi, &with(delta, x, b.clone()), q, c, a)?
                };
                out.insert(l.clone(), q);
            }
            Ok(Case(x.clone(), out))
        }
        SendChan { chan, sent, cont } => {
            let build = |q| SendChan {
                chan: chan.clone(),
                sent: sent.clone(),
                cont: Box::new(q),
            };
            if right(chan) {
                let T::Tensor(b, rest) = a else { return mismatch("⊗R*", chan, "`B * A`", a) };
                let tb = lookup(delta, sent, "⊗R*")?;
                if !same_type(tb, b) {
                    return mismatch("⊗R*", sent, &format!("`{b}`"), tb);
                }
                Ok(build(check_process(psi, &without(delta, sent), cont, c, rest)?))
            } else {
                let t = lookup(delta, chan, "⊸L")?;
                let T::Lolly(b, rest) = t else { return mismatch("⊸L", chan, "`B -o A`", t) };
                let tb = lookup(delta, sent, "⊸L")?;
                if !same_type(tb, b) {
                    return mismatch("⊸L", sent, &format!("`{b}`"), tb);
                }
                let d = with(&without(delta, sent), chan, (**rest).clone());
                Ok(build(check_process(psi, &d, cont, c, a)?))
            }
        }
        RecvChan { bind, chan, cont } => {
            let build = |q| RecvChan {
                bind: bind.clone(),
                chan: chan.clone(),
                cont: Box::new(q),
            };
            if right(chan) {
                let T::Lolly(b, rest) = a else { return mismatch("⊸R", chan, "`B -o A`", a) };
                fresh_binder(delta, c, bind, "⊸R")?;
                Ok(build(check_process(psi, &with(delta, bind, (**b).clone()), cont, c, rest)?))
            } else {
                let t = lookup(delta, chan, "⊗L")?;
                let T::Tensor(b, rest) = t else { return mismatch("⊗L", chan, "`B * A`", t) };
                fresh_binder(delta, c, bind, "⊗L")?;
                let d = with(&with(delta, chan, (**rest).clone()), bind, (**b).clone());
                Ok(build(check_process(psi, &d, cont, c, a)?))
            }
        }
        SendVal { chan, term, cont } => {
            let (rule, t) = if right(chan) { ("∧R", a) } else { ("⊃L", lookup(delta, chan, "⊃L")?) };
            let (tau, rest) = match (right(chan), t) {
                (true, T::AndVal(tau, rest)) | (false, T::ImpVal(tau, rest)) => (tau, rest),
                _ => return mismatch(rule, chan, if right(chan) { "`[t] /\\ A`" } else { "`[t] => A`" }, t),
            };
            let term = check_term_against(psi, term, tau)?;
            let cont = if right(chan) {
                check_process(psi, delta, cont, c, rest)?
            } else {
                check_process(psi, &with(delta, chan, (**rest).clone()), cont, c, a)?
            };
            Ok(SendVal {
                chan: chan.clone(),
                term,
                cont: Box::new(cont),
            })
        }
        RecvVal { bind, chan, cont } => {
            let (rule, t) = if right(chan) { ("⊃R", a) } else { ("∧L", lookup(delta, chan, "∧L")?) };
            let (tau, rest) = match (right(chan), t) {
                (true, T::ImpVal(tau, rest)) | (false, T::AndVal(tau, rest)) => (tau, rest),
                _ => return mismatch(rule, chan, if right(chan) { "`[t] => A`" } else { "`[t] /\\ A`" }, t),
            };
            let mut psi2 = psi.clone();
            psi2.insert(bind.clone(), (**tau).clone());
            let cont = if right(chan) {
                check_process(&psi2, delta, cont, c, rest)?
            } else {
                check_process(&psi2, &with(delta, chan, (**rest).clone()), cont, c, a)?
            };
            Ok(RecvVal {
                bind: bind.clone(),
                chan: chan.clone(),
                cont: Box::new(cont),
            })
        }
        SendUnfold(x, q) | RecvUnfold(x, q) => {
            let send = matches!(p, SendUnfold(..));
            // Positive recursion is unfolded by the provider sending, negative
            // by the client sending.
            let (rule, want, t) = match (right(x), send) {
                (true, true) => ("ρ⁺R", Pos, a),
                (true, false) => ("ρ⁻R", Neg, a),
                (false, false) => ("ρ⁺L", Pos, lookup(delta, x, "ρ⁺L")?),
                (false, true) => ("ρ⁻L", Neg, lookup(delta, x, "ρ⁻L")?),
            };
            if !matches!(t, T::Rec(..)) {
                return mismatch(rule, x, "a recursive type", t);
            }
            let pol = check_session_type(&TypeVars::new(), t)?;
            if pol != want {
                return err(
                    ErrorKind::PolarityMismatch,
                    rule,
                    format!("`{t}` is {pol}; a {} unfold message needs a {want} type", if send { "sent" } else { "received" }),
                );
            }
            let b = unfold_type(t).expect("rec");
            let q = if right(x) {
                check_process(psi, delta, q, c, &b)?
            } else {
                check_process(psi, &with(delta, x, b), q, c, a)?
            };
            Ok(if send { SendUnfold(x.clone(), Box::new(q)) } else { RecvUnfold(x.clone(), Box::new(q)) })
        }
        Unquote { chan, term, args } => {
            if !right(chan) {
                return err(
                    ErrorKind::RuleMismatch,
                    "E-{}",
                    format!("spawned process provides `{chan}`, expected `{c}`"),
                );
            }
            let mut seen = BTreeSet::new();
            let mut used = Vec::new();
            for d in args {
                if !seen.insert(d.clone()) {
                    return err(ErrorKind::LinearMisuse, "E-{}", format!("channel `{d}` passed twice"));
                }
                used.push((d.clone(), lookup(delta, d, "E-{}")?.clone()));
            }
            let rest: LinearContext = delta
                .iter()
                .filter(|(d, _)| !seen.contains(*d))
                .map(|(d, t)| (d.clone(), t.clone()))
                .collect();
            unused(&rest, "E-{}")?;
            let t = FuncType::Proc {
                provided: (chan.clone(), a.clone()),
                used,
            };
            let term = check_term_against(psi, term, &t)?;
            Ok(Unquote {
                chan: chan.clone(),
                term,
                args: args.clone(),
            })
        }
        Cut {
            chan,
            ty,
            left,
            right: q,
        } => {
            if delta.contains_key(chan) || chan == c {
                return err(
                    ErrorKind::LinearMisuse,
                    "Cut",
                    format!("cut channel `{chan}` shadows a channel in scope"),
                );
            }
            let mut fc_left = free_channels(left);
            fc_left.remove(chan);
            for d in &fc_left {
                if !delta.contains_key(d) {
                    return err(ErrorKind::UnboundName, "Cut", format!("channel `{d}` is not available"));
                }
            }
            let d1: LinearContext = delta
                .iter()
                .filter(|(d, _)| fc_left.contains(*d))
                .map(|(d, t)| (d.clone(), t.clone()))
                .collect();
            let d2: LinearContext = delta
                .iter()
                .filter(|(d, _)| !fc_left.contains(*d))
                .map(|(d, t)| (d.clone(), t.clone()))
                .collect();
            let cut_ty = match ty {
                Some(t) => t.clone(),
                None => spawned_type(psi, left, chan)?,
            };
            check_session_type(&TypeVars::new(), &cut_ty)?;
            let left = check_process(psi, &d1, left, chan, &cut_ty)?;
            let q = check_process(psi, &with(&d2, chan, cut_ty.clone()), q, c, a)?;
            Ok(Cut {
                chan: chan.clone(),
                ty: Some(cut_ty),
                left: Box::new(left),
                right: Box::new(q),
            })
        }
    }
}

/// The provided type of a spawned process `a <- M <- ā`, read off M's type.
fn spawned_type(psi: &FuncContext, left: &Process, chan: &str) -> Result<SessionType, TypeError> {
    if let Process::Unquote { term, .. } = left {
        match check_term(psi, term)? {
            FuncType::Proc { provided, .. } => return Ok(provided.1),
            other => {
                return err(
                    ErrorKind::RuleMismatch,
                    "E-{}",
                    format!("spawned term has type `{other}`, not a process type"),
                )
            }
        }
    }
    err(
        ErrorKind::RuleMismatch,
        "Cut",
        format!("the type of cut channel `{chan}` must be annotated"),
    )
}

fn labels<V>(m: &BTreeMap<String, V>) -> String {
    let ls: Vec<&str> = m.keys().map(String::as_str).collect();
    format!("{{{}}}", ls.join(", "))
}

/// Type of a declaration as a functional value.
pub fn decl_type(kind: &DeclKind) -> Option<FuncType> {
    match kind {
        DeclKind::Type(_) => None,
        DeclKind::Term(t, _) => Some(t.clone()),
        DeclKind::Proc { used, provided, .. } => Some(FuncType::Proc {
            provided: provided.clone(),
            used: used.clone(),
        }),
    }
}

/// Checks every declaration in order. Each declaration may refer to the
/// terms and processes declared before it. Returns the program with cut
/// types filled in.
pub fn check_program(program: &Program) -> Result<Program, TypeError> {
    let mut psi = FuncContext::new();
    let mut out = Program::default();
    for decl in &program.decls {
        let tag = |mut e: TypeError| {
            e.span.get_or_insert(decl.span);
            e.decl.get_or_insert(decl.name.clone());
            e
        };
        let kind = match &decl.kind {
            DeclKind::Type(a) => {
                check_session_type(&TypeVars::new(), a).map_err(tag)?;
                DeclKind::Type(a.clone())
            }
            DeclKind::Term(t, m) => {
                check_func_type(t).map_err(tag)?;
                let m = check_term_against(&psi, m, t).map_err(tag)?;
                DeclKind::Term(t.clone(), m)
            }
            DeclKind::Proc { used, provided, body } => {
                let t = FuncType::Proc {
                    provided: provided.clone(),
                    used: used.clone(),
                };
                check_func_type(&t).map_err(tag)?;
                let delta: LinearContext = used.iter().cloned().collect();
                let body = check_process(&psi, &delta, body, &provided.0, &provided.1).map_err(tag)?;
                DeclKind::Proc {
                    used: used.clone(),
                    provided: provided.clone(),
                    body,
                }
            }
        };
        if let Some(t) = decl_type(&kind) {
            psi.insert(decl.name.clone(), t);
        }
        out.decls.push(crate::syntax::Decl {
            name: decl.name.clone(),
            span: decl.span,
            kind,
        });
    }
    Ok(out)
}
