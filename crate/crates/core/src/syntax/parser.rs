//! Recursive-descent parser for `.sill` sources.
//!
//! ```text
//! program ::= decl*
//! decl    ::= "type" x "=" type
//!           | "term" x ":" ftype "=" term
//!           | "proc" x ":" "(" (c ":" type),* "|-" c ":" type ")" "=" ("fix" x "." proc | proc)
//!
//! type    ::= "rec" x "." type | "[" ftype "]" ("/\" | "=>") type | type2 (("*" | "-o") type)?
//! type2   ::= "down" type2 | "up" type2 | "1" | x | "+{" l ":" type, ... "}" | "&{" ... "}" | "(" type ")"
//! ftype   ::= fatom ("->" ftype)?
//! fatom   ::= "{" c ":" type ("<-" (c ":" type),*)? "}" | "(" ftype ")"
//!
//! term    ::= "fix" x "." term | "\" x ":" ftype "." term | atom+
//! atom    ::= x | "(" term ")" | "{" c "<-" proc "<-" c,* "}"
//!
//! proc    ::= "fwd" c c | "close" c | "wait" c ";" proc
//!           | "send" c ("shift" | "unfold" | "chan" c | "val" term) ";" proc
//!           | "recv" c ("shift" | "unfold" | "chan" c | "val" x) ";" proc
//!           | c "." l ";" proc | "case" c "{" l "=>" proc "|" ... "}"
//!           | c "<-" term "<-" c,* (";" proc)?
//!           | "cut" c (":" type)? "{" proc "}" ";" proc
//!           | "(" proc ")"
//! ```
//!
//! A process declaration whose body starts with `fix F .` is sugar for a
//! recursive quoted process spawned on the declared interface. The body is
//! prefixed with one unfold message for every channel of recursive type.

use std::collections::BTreeMap;

use super::ast::*;
use super::lexer::{tokenize, Tok, Token};
use super::{top_polarity, SyntaxError};

const KEYWORDS: &[&str] = &[
    "type", "term", "proc", "fix", "rec", "down", "up", "fwd", "cut", "close", "wait", "send",
    "recv", "case", "shift", "unfold", "chan", "val",
];

pub fn is_keyword(s: &str) -> bool {
    KEYWORDS.contains(&s)
}

pub fn parse_program(src: &str) -> Result<Program, SyntaxError> {
    let mut p = Parser::new(src)?;
    let mut decls = Vec::new();
    while p.peek() != &Tok::Eof {
        decls.push(p.decl()?);
    }
    Ok(Program { decls })
}

/// Parses a single process (no declarations).
pub fn parse_process(src: &str) -> Result<Process, SyntaxError> {
    let mut p = Parser::new(src)?;
    let r = p.process()?;
    p.expect(Tok::Eof)?;
    Ok(r)
}

pub fn parse_term(src: &str) -> Result<Term, SyntaxError> {
    let mut p = Parser::new(src)?;
    let r = p.term()?;
    p.expect(Tok::Eof)?;
    Ok(r)
}

pub fn parse_type(src: &str) -> Result<SessionType, SyntaxError> {
    let mut p = Parser::new(src)?;
    let r = p.session_type()?;
    p.expect(Tok::Eof)?;
    Ok(r)
}

/// Parses a type in the scope of the named types declared by `program`.
pub fn parse_type_in(program: &Program, src: &str) -> Result<SessionType, SyntaxError> {
    let mut p = Parser::new(src)?;
    p.load_types(program);
    let r = p.session_type()?;
    p.expect(Tok::Eof)?;
    Ok(r)
}

/// Parses a process in the scope of the named types declared by `program`.
pub fn parse_process_in(program: &Program, src: &str) -> Result<Process, SyntaxError> {
    let mut p = Parser::new(src)?;
    p.load_types(program);
    let r = p.process()?;
    p.expect(Tok::Eof)?;
    Ok(r)
}

pub fn parse_func_type(src: &str) -> Result<FuncType, SyntaxError> {
    let mut p = Parser::new(src)?;
    let r = p.func_type()?;
    p.expect(Tok::Eof)?;
    Ok(r)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    named: BTreeMap<Name, SessionType>,
    rec_bound: Vec<Name>,
}

impl Parser {
    fn new(src: &str) -> Result<Self, SyntaxError> {
        Ok(Parser {
            toks: tokenize(src)?,
            pos: 0,
            named: BTreeMap::new(),
            rec_bound: Vec::new(),
        })
    }

    fn load_types(&mut self, program: &Program) {
        for d in &program.decls {
            if let DeclKind::Type(t) = &d.kind {
                self.named.insert(d.name.clone(), t.clone());
            }
        }
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        let i = (self.pos + k).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &[&str]) -> SyntaxError {
        let t = &self.toks[self.pos];
        SyntaxError {
            line: t.span.line,
            col: t.span.col,
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: t.tok.describe(),
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<Token, SyntaxError> {
        if *self.peek() == tok {
            Ok(self.bump())
        } else {
            Err(self.error(&[&format!("`{}`", tok.text())]))
        }
    }

    fn is_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn ident(&mut self, what: &str) -> Result<Name, SyntaxError> {
        match self.peek().clone() {
            Tok::Ident(s) if !is_keyword(&s) => {
                self.bump();
                Ok(s)
            }
            _ => Err(self.error(&[what])),
        }
    }

    fn label(&mut self) -> Result<Label, SyntaxError> {
        match self.peek().clone() {
            Tok::Ident(s) if !is_keyword(&s) => {
                self.bump();
                Ok(s)
            }
            Tok::Num(s) => {
                self.bump();
                Ok(s)
            }
            _ => Err(self.error(&["label"])),
        }
    }

    fn channel_list(&mut self) -> Result<Vec<Name>, SyntaxError> {
        let mut out = Vec::new();
        if let Tok::Ident(s) = self.peek() {
            if !is_keyword(s) {
                out.push(self.ident("channel")?);
                while *self.peek() == Tok::Comma {
                    self.bump();
                    out.push(self.ident("channel")?);
                }
            }
        }
        Ok(out)
    }

    // ------------------------------------------------------------ declarations

    fn decl(&mut self) -> Result<Decl, SyntaxError> {
        let start = self.toks[self.pos].span;
        if self.is_kw("type") {
            self.bump();
            let name = self.ident("type name")?;
            self.expect(Tok::Eq)?;
            let ty = self.session_type()?;
            self.named.insert(name.clone(), ty.clone());
            return Ok(Decl {
                name,
                span: self.span_from(start),
                kind: DeclKind::Type(ty),
            });
        }
        if self.is_kw("term") {
            self.bump();
            let name = self.ident("term name")?;
            self.expect(Tok::Colon)?;
            let ft = self.func_type()?;
            self.expect(Tok::Eq)?;
            let m = self.term()?;
            return Ok(Decl {
                name,
                span: self.span_from(start),
                kind: DeclKind::Term(ft, m),
            });
        }
        if self.is_kw("proc") {
            self.bump();
            let name = self.ident("process name")?;
            self.expect(Tok::Colon)?;
            self.expect(Tok::LParen)?;
            let mut used = Vec::new();
            if *self.peek() != Tok::Turnstile {
                loop {
                    let c = self.ident("channel")?;
                    self.expect(Tok::Colon)?;
                    let a = self.session_type()?;
                    used.push((c, a));
                    if *self.peek() == Tok::Comma {
                        self.bump();
                    } else {
                        break;
                    }
                }
            }
            self.expect(Tok::Turnstile)?;
            let c = self.ident("channel")?;
            self.expect(Tok::Colon)?;
            let a = self.session_type()?;
            self.expect(Tok::RParen)?;
            self.expect(Tok::Eq)?;
            let provided = (c, a);
            let body = if self.is_kw("fix") {
                self.bump();
                let f = self.ident("recursion variable")?;
                self.expect(Tok::Dot)?;
                let p = self.process()?;
                desugar_recursive_proc(&f, p, &used, &provided)
            } else {
                self.process()?
            };
            return Ok(Decl {
                name,
                span: self.span_from(start),
                kind: DeclKind::Proc {
                    used,
                    provided,
                    body,
                },
            });
        }
        Err(self.error(&["`type`", "`term`", "`proc`"]))
    }

    fn span_from(&self, start: Span) -> Span {
        let last = &self.toks[self.pos.saturating_sub(1)].span;
        Span {
            start: start.start,
            end: last.end.max(start.start),
            line: start.line,
            col: start.col,
        }
    }

    // ------------------------------------------------------------ types

    fn session_type(&mut self) -> Result<SessionType, SyntaxError> {
        if self.is_kw("rec") {
            self.bump();
            let x = self.ident("type variable")?;
            self.expect(Tok::Dot)?;
            self.rec_bound.push(x.clone());
            let body = self.session_type();
            self.rec_bound.pop();
            return Ok(SessionType::Rec(x, Box::new(body?)));
        }
        if *self.peek() == Tok::LBrack {
            self.bump();
            let t = self.func_type()?;
            self.expect(Tok::RBrack)?;
            return match self.peek() {
                Tok::AndVal => {
                    self.bump();
                    Ok(SessionType::AndVal(Box::new(t), Box::new(self.session_type()?)))
                }
                Tok::FatArrow => {
                    self.bump();
                    Ok(SessionType::ImpVal(Box::new(t), Box::new(self.session_type()?)))
                }
                _ => Err(self.error(&["`/\\`", "`=>`"])),
            };
        }
        let left = self.type2()?;
        match self.peek() {
            Tok::Star => {
                self.bump();
                Ok(SessionType::Tensor(Box::new(left), Box::new(self.session_type()?)))
            }
            Tok::Lolly => {
                self.bump();
                Ok(SessionType::Lolly(Box::new(left), Box::new(self.session_type()?)))
            }
            _ => Ok(left),
        }
    }

    fn type2(&mut self) -> Result<SessionType, SyntaxError> {
        match self.peek().clone() {
            Tok::Ident(s) if s == "down" => {
                self.bump();
                Ok(SessionType::Down(Box::new(self.type2()?)))
            }
            Tok::Ident(s) if s == "up" => {
                self.bump();
                Ok(SessionType::Up(Box::new(self.type2()?)))
            }
            Tok::Num(s) if s == "1" => {
                self.bump();
                Ok(SessionType::Unit)
            }
            Tok::Ident(s) if !is_keyword(&s) => {
                self.bump();
                if self.rec_bound.contains(&s) {
                    Ok(SessionType::Var(s))
                } else if let Some(t) = self.named.get(&s) {
                    Ok(t.clone())
                } else {
                    Ok(SessionType::Var(s))
                }
            }
            Tok::Plus => {
                self.bump();
                Ok(SessionType::Plus(self.choices()?))
            }
            Tok::Amp => {
                self.bump();
                Ok(SessionType::With(self.choices()?))
            }
            Tok::LParen => {
                self.bump();
                let t = self.session_type()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            _ => Err(self.error(&["session type"])),
        }
    }

    fn choices(&mut self) -> Result<BTreeMap<Label, SessionType>, SyntaxError> {
        self.expect(Tok::LBrace)?;
        let mut out = BTreeMap::new();
        loop {
            let at = self.toks[self.pos].span;
            let l = self.label()?;
            self.expect(Tok::Colon)?;
            let a = self.session_type()?;
            if out.insert(l.clone(), a).is_some() {
                return Err(SyntaxError {
                    line: at.line,
                    col: at.col,
                    expected: vec!["distinct labels".into()],
                    found: format!("duplicate label `{l}`"),
                });
            }
            if *self.peek() == Tok::Comma {
                self.bump();
            } else {
                break;
            }
        }
        self.expect(Tok::RBrace)?;
        Ok(out)
    }

    fn func_type(&mut self) -> Result<FuncType, SyntaxError> {
        let left = match self.peek() {
            Tok::LParen => {
                self.bump();
                let t = self.func_type()?;
                self.expect(Tok::RParen)?;
                t
            }
            Tok::LBrace => {
                self.bump();
                // Types inside a quoted-process type are closed.
                let saved = std::mem::take(&mut self.rec_bound);
                let c = self.ident("channel")?;
                self.expect(Tok::Colon)?;
                let a = self.session_type()?;
                let mut used = Vec::new();
                if *self.peek() == Tok::LArrow {
                    self.bump();
                    if *self.peek() != Tok::RBrace {
                        loop {
                            let d = self.ident("channel")?;
                            self.expect(Tok::Colon)?;
                            let b = self.session_type()?;
                            used.push((d, b));
                            if *self.peek() == Tok::Comma {
                                self.bump();
                            } else {
                                break;
                            }
                        }
                    }
                }
                self.expect(Tok::RBrace)?;
                self.rec_bound = saved;
                FuncType::Proc {
                    provided: (c, a),
                    used,
                }
            }
            _ => return Err(self.error(&["functional type"])),
        };
        if *self.peek() == Tok::Arrow {
            self.bump();
            Ok(FuncType::Arrow(Box::new(left), Box::new(self.func_type()?)))
        } else {
            Ok(left)
        }
    }

    // ------------------------------------------------------------ terms

    fn term(&mut self) -> Result<Term, SyntaxError> {
        if self.is_kw("fix") {
            self.bump();
            let x = self.ident("variable")?;
            self.expect(Tok::Dot)?;
            return Ok(Term::Fix(x, Box::new(self.term()?)));
        }
        if *self.peek() == Tok::Backslash {
            self.bump();
            let x = self.ident("variable")?;
            self.expect(Tok::Colon)?;
            let t = self.func_type()?;
            self.expect(Tok::Dot)?;
            return Ok(Term::Lam(x, t, Box::new(self.term()?)));
        }
        let mut m = self.term_atom()?;
        while self.starts_term_atom() {
            let n = self.term_atom()?;
            m = Term::App(Box::new(m), Box::new(n));
        }
        Ok(m)
    }

    fn starts_term_atom(&self) -> bool {
        match self.peek() {
            Tok::Ident(s) => !is_keyword(s),
            Tok::LParen | Tok::LBrace => true,
            _ => false,
        }
    }

    fn term_atom(&mut self) -> Result<Term, SyntaxError> {
        match self.peek().clone() {
            Tok::Ident(s) if !is_keyword(&s) => {
                self.bump();
                Ok(Term::Var(s))
            }
            Tok::LParen => {
                self.bump();
                let m = self.term()?;
                self.expect(Tok::RParen)?;
                Ok(m)
            }
            Tok::LBrace => {
                self.bump();
                let chan = self.ident("channel")?;
                self.expect(Tok::LArrow)?;
                let body = self.process()?;
                self.expect(Tok::LArrow)?;
                let args = self.channel_list()?;
                self.expect(Tok::RBrace)?;
                Ok(Term::Quote {
                    chan,
                    body: Box::new(body),
                    args,
                })
            }
            _ => Err(self.error(&["term"])),
        }
    }

    // ------------------------------------------------------------ processes

    fn then(&mut self) -> Result<Box<Process>, SyntaxError> {
        self.expect(Tok::Semi)?;
        Ok(Box::new(self.process()?))
    }

    fn process(&mut self) -> Result<Process, SyntaxError> {
        let head = self.peek().clone();
        match head {
            Tok::LParen => {
                self.bump();
                let p = self.process()?;
                self.expect(Tok::RParen)?;
                Ok(p)
            }
            Tok::Ident(kw) if is_keyword(&kw) => {
                self.bump();
                match kw.as_str() {
                    "fwd" => {
                        let to = self.ident("channel")?;
                        let from = self.ident("channel")?;
                        Ok(Process::Fwd { to, from })
                    }
                    "close" => Ok(Process::Close(self.ident("channel")?)),
                    "wait" => {
                        let a = self.ident("channel")?;
                        Ok(Process::Wait(a, self.then()?))
                    }
                    "send" => {
                        let a = self.ident("channel")?;
                        if self.is_kw("shift") {
                            self.bump();
                            Ok(Process::SendShift(a, self.then()?))
                        } else if self.is_kw("unfold") {
                            self.bump();
                            Ok(Process::SendUnfold(a, self.then()?))
                        } else if self.is_kw("chan") {
                            self.bump();
                            let b = self.ident("channel")?;
                            Ok(Process::SendChan {
                                chan: a,
                                sent: b,
                                cont: self.then()?,
                            })
                        } else if self.is_kw("val") {
                            self.bump();
                            let m = self.term()?;
                            Ok(Process::SendVal {
                                chan: a,
                                term: m,
                                cont: self.then()?,
                            })
                        } else {
                            Err(self.error(&["`shift`", "`unfold`", "`chan`", "`val`"]))
                        }
                    }
                    "recv" => {
                        let a = self.ident("channel")?;
                        if self.is_kw("shift") {
                            self.bump();
                            Ok(Process::RecvShift(a, self.then()?))
                        } else if self.is_kw("unfold") {
                            self.bump();
                            Ok(Process::RecvUnfold(a, self.then()?))
                        } else if self.is_kw("chan") {
                            self.bump();
                            let b = self.ident("channel")?;
                            Ok(Process::RecvChan {
                                bind: b,
                                chan: a,
                                cont: self.then()?,
                            })
                        } else if self.is_kw("val") {
                            self.bump();
                            let x = self.ident("variable")?;
                            Ok(Process::RecvVal {
                                bind: x,
                                chan: a,
                                cont: self.then()?,
                            })
                        } else {
                            Err(self.error(&["`shift`", "`unfold`", "`chan`", "`val`"]))
                        }
                    }
                    "case" => {
                        let a = self.ident("channel")?;
                        self.expect(Tok::LBrace)?;
                        let mut branches = BTreeMap::new();
                        loop {
                            let at = self.toks[self.pos].span;
                            let l = self.label()?;
                            self.expect(Tok::FatArrow)?;
                            let p = self.process()?;
                            if branches.insert(l.clone(), p).is_some() {
                                return Err(SyntaxError {
                                    line: at.line,
                                    col: at.col,
                                    expected: vec!["distinct labels".into()],
                                    found: format!("duplicate branch `{l}`"),
                                });
                            }
                            if *self.peek() == Tok::Bar {
                                self.bump();
                            } else {
                                break;
                            }
                        }
                        self.expect(Tok::RBrace)?;
                        Ok(Process::Case(a, branches))
                    }
                    "cut" => {
                        let a = self.ident("channel")?;
                        let ty = if *self.peek() == Tok::Colon {
                            self.bump();
                            Some(self.session_type()?)
                        } else {
                            None
                        };
                        self.expect(Tok::LBrace)?;
                        let left = self.process()?;
                        self.expect(Tok::RBrace)?;
                        let right = self.then()?;
                        Ok(Process::Cut {
                            chan: a,
                            ty,
                            left: Box::new(left),
                            right,
                        })
                    }
                    _ => {
                        self.pos -= 1;
                        Err(self.error(&["process"]))
                    }
                }
            }
            Tok::Ident(a) => {
                match self.peek_at(1) {
                    Tok::Dot => {
                        self.bump();
                        self.bump();
                        let k = self.label()?;
                        Ok(Process::SendLabel(a, k, self.then()?))
                    }
                    Tok::LArrow => {
                        self.bump();
                        self.bump();
                        let m = self.term()?;
                        self.expect(Tok::LArrow)?;
                        let args = self.channel_list()?;
                        let spawn = Process::Unquote {
                            chan: a.clone(),
                            term: m,
                            args,
                        };
                        if *self.peek() == Tok::Semi {
                            let right = self.then()?;
                            Ok(Process::Cut {
                                chan: a,
                                ty: None,
                                left: Box::new(spawn),
                                right,
                            })
                        } else {
                            Ok(spawn)
                        }
                    }
                    _ => {
                        self.bump();
                        Err(self.error(&["`.`", "`<-`"]))
                    }
                }
            }
            _ => Err(self.error(&["process"])),
        }
    }
}

/// `fix F. P` at interface `Δ ⊢ c:A` becomes
/// `c <- (fix F. {c <- U(P) <- Δ}) <- Δ`, where U prefixes one unfold
/// message per recursive channel: send on the provided channel when its type
/// is positive, receive when negative, and the reverse for used channels.
pub fn desugar_recursive_proc(
    f: &str,
    body: Process,
    used: &[(Name, SessionType)],
    provided: &(Name, SessionType),
) -> Process {
    let mut steps: Vec<(bool, Name)> = Vec::new();
    if let SessionType::Rec(..) = provided.1 {
        let send = top_polarity(&provided.1) == Some(Polarity::Positive);
        steps.push((send, provided.0.clone()));
    }
    for (d, a) in used {
        if let SessionType::Rec(..) = a {
            let send = top_polarity(a) == Some(Polarity::Negative);
            steps.push((send, d.clone()));
        }
    }
    let mut inner = body;
    for (send, ch) in steps.into_iter().rev() {
        inner = if send {
            Process::SendUnfold(ch, Box::new(inner))
        } else {
            Process::RecvUnfold(ch, Box::new(inner))
        };
    }
    let args: Vec<Name> = used.iter().map(|(d, _)| d.clone()).collect();
    let quoted = Term::Quote {
        chan: provided.0.clone(),
        body: Box::new(inner),
        args: args.clone(),
    };
    Process::Unquote {
        chan: provided.0.clone(),
        term: Term::Fix(f.to_string(), Box::new(quoted)),
        args,
    }
}
