//! Printing in the concrete grammar accepted by the parser.

use std::fmt::{self, Display, Write};

use super::ast::*;

pub fn type_to_string(a: &SessionType) -> String {
    let mut s = String::new();
    write_type(&mut s, a, 0).unwrap();
    s
}

pub fn func_type_to_string(t: &FuncType) -> String {
    let mut s = String::new();
    write_func_type(&mut s, t, 0).unwrap();
    s
}

pub fn term_to_string(m: &Term) -> String {
    let mut s = String::new();
    write_term(&mut s, m, 0).unwrap();
    s
}

pub fn process_to_string(p: &Process) -> String {
    let mut s = String::new();
    write_process(&mut s, p).unwrap();
    s
}

fn type_level(a: &SessionType) -> u8 {
    match a {
        SessionType::Rec(..) | SessionType::AndVal(..) | SessionType::ImpVal(..) => 0,
        SessionType::Tensor(..) | SessionType::Lolly(..) => 1,
        SessionType::Down(_) | SessionType::Up(_) => 2,
        _ => 3,
    }
}

fn write_type(out: &mut String, a: &SessionType, min: u8) -> fmt::Result {
    use SessionType::*;
    if type_level(a) < min {
        out.push('(');
        write_type(out, a, 0)?;
        out.push(')');
        return Ok(());
    }
    match a {
        Unit => out.push('1'),
        Down(b) => {
            out.push_str("down ");
            write_type(out, b, 2)?;
        }
        Up(b) => {
            out.push_str("up ");
            write_type(out, b, 2)?;
        }
        Plus(m) | With(m) => {
            out.push_str(if matches!(a, Plus(_)) { "+{" } else { "&{" });
            for (i, (l, b)) in m.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write!(out, "{l}: ")?;
                write_type(out, b, 0)?;
            }
            out.push('}');
        }
        Tensor(b, c) | Lolly(b, c) => {
            write_type(out, b, 2)?;
            out.push_str(if matches!(a, Tensor(..)) { " * " } else { " -o " });
            write_type(out, c, 0)?;
        }
        AndVal(t, b) | ImpVal(t, b) => {
            out.push('[');
            write_func_type(out, t, 0)?;
            out.push_str(if matches!(a, AndVal(..)) { "] /\\ " } else { "] => " });
            write_type(out, b, 0)?;
        }
        Var(x) => out.push_str(x),
        Rec(x, b) => {
            write!(out, "rec {x}. ")?;
            write_type(out, b, 0)?;
        }
    }
    Ok(())
}

fn write_func_type(out: &mut String, t: &FuncType, min: u8) -> fmt::Result {
    match t {
        FuncType::Arrow(a, b) => {
            if min > 0 {
                out.push('(');
            }
            write_func_type(out, a, 1)?;
            out.push_str(" -> ");
            write_func_type(out, b, 0)?;
            if min > 0 {
                out.push(')');
            }
        }
        FuncType::Proc { provided, used } => {
            write!(out, "{{{} : ", provided.0)?;
            write_type(out, &provided.1, 0)?;
            if !used.is_empty() {
                out.push_str(" <- ");
                for (i, (d, b)) in used.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    write!(out, "{d} : ")?;
                    write_type(out, b, 0)?;
                }
            }
            out.push('}');
        }
    }
    Ok(())
}

fn write_term(out: &mut String, m: &Term, min: u8) -> fmt::Result {
    let level = match m {
        Term::Fix(..) | Term::Lam(..) => 0,
        Term::App(..) => 1,
        _ => 2,
    };
    if level < min {
        out.push('(');
        write_term(out, m, 0)?;
        out.push(')');
        return Ok(());
    }
    match m {
        Term::Var(x) => out.push_str(x),
        Term::Fix(x, n) => {
            write!(out, "fix {x}. ")?;
            write_term(out, n, 0)?;
        }
        Term::Lam(x, t, n) => {
            write!(out, "\\{x} : ")?;
            write_func_type(out, t, 0)?;
            out.push_str(". ");
            write_term(out, n, 0)?;
        }
        Term::App(a, b) => {
            write_term(out, a, 1)?;
            out.push(' ');
            write_term(out, b, 2)?;
        }
        Term::Quote { chan, body, args } => {
            write!(out, "{{{chan} <- ")?;
            write_process(out, body)?;
            out.push_str(" <-");
            if !args.is_empty() {
                write!(out, " {}", args.join(", "))?;
            }
            out.push('}');
        }
    }
    Ok(())
}

fn write_process(out: &mut String, p: &Process) -> fmt::Result {
    use Process::*;
    match p {
        Fwd { to, from } => write!(out, "fwd {to} {from}")?,
        Cut {
            chan,
            ty,
            left,
            right,
        } => {
            match (ty, left.as_ref()) {
                (None, Unquote { chan: c, term, args }) if c == chan => {
                    write_unquote(out, c, term, args)?;
                }
                _ => {
                    write!(out, "cut {chan}")?;
                    if let Some(a) = ty {
                        out.push_str(" : ");
                        write_type(out, a, 0)?;
                    }
                    out.push_str(" { ");
                    write_process(out, left)?;
                    out.push_str(" }");
                }
            }
            out.push_str("; ");
            write_process(out, right)?;
        }
        Close(a) => write!(out, "close {a}")?,
        Wait(a, q) => seq(out, format_args!("wait {a}"), q)?,
        SendShift(a, q) => seq(out, format_args!("send {a} shift"), q)?,
        RecvShift(a, q) => seq(out, format_args!("recv {a} shift"), q)?,
        SendUnfold(a, q) => seq(out, format_args!("send {a} unfold"), q)?,
        RecvUnfold(a, q) => seq(out, format_args!("recv {a} unfold"), q)?,
        SendLabel(a, k, q) => seq(out, format_args!("{a}.{k}"), q)?,
        Case(a, bs) => {
            write!(out, "case {a} {{ ")?;
            for (i, (l, q)) in bs.iter().enumerate() {
                if i > 0 {
                    out.push_str(" | ");
                }
                write!(out, "{l} => ")?;
                write_process(out, q)?;
            }
            out.push_str(" }");
        }
        SendChan { chan, sent, cont } => seq(out, format_args!("send {chan} chan {sent}"), cont)?,
        RecvChan { bind, chan, cont } => seq(out, format_args!("recv {chan} chan {bind}"), cont)?,
        SendVal { chan, term, cont } => {
            write!(out, "send {chan} val ")?;
            write_term(out, term, 0)?;
            out.push_str("; ");
            write_process(out, cont)?;
        }
        RecvVal { bind, chan, cont } => seq(out, format_args!("recv {chan} val {bind}"), cont)?,
        Unquote { chan, term, args } => write_unquote(out, chan, term, args)?,
    }
    Ok(())
}

fn write_unquote(out: &mut String, chan: &str, term: &Term, args: &[Name]) -> fmt::Result {
    write!(out, "{chan} <- ")?;
    write_term(out, term, 0)?;
    out.push_str(" <-");
    if !args.is_empty() {
        write!(out, " {}", args.join(", "))?;
    }
    Ok(())
}

fn seq(out: &mut String, head: fmt::Arguments<'_>, rest: &Process) -> fmt::Result {
    out.write_fmt(head)?;
    out.push_str("; ");
    write_process(out, rest)
}

impl Display for SessionType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&type_to_string(self))
    }
}

impl Display for FuncType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&func_type_to_string(self))
    }
}

impl Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&term_to_string(self))
    }
}

impl Display for Process {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&process_to_string(self))
    }
}
