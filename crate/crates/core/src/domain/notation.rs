//! Text notation for approximants.
//!
//! ```text
//! v ::= "_" | "*" | "up(" v ("," v)? ")" | l "·" v | "(" v "," v ")"
//!     | "{" l ":" v, ... "}" | "fold(" v ")" | "qbot" | "@" name
//! ```
//!
//! Parsing and printing are type-directed: the same text `k·v` denotes a
//! tagged lift at a choice type and a folded tagged lift at a recursive
//! type, and bottom is printed in the shape of its aspect.

use std::collections::BTreeMap;

use super::enumerate::ValueRegistry;
use super::value::{CommValue, FuncValue, Port, Record};
use crate::syntax::{unfold_type, Label, Name, Polarity, SessionType};

use Polarity::{Negative as Neg, Positive as Pos};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum NotationError {
    #[error("cannot read value at column {col}: {msg}")]
    Syntax { col: usize, msg: String },
    #[error("value `{found}` does not fit {ty} ({pol} aspect): expected {expected}")]
    Shape {
        found: String,
        ty: String,
        pol: Polarity,
        expected: String,
    },
    #[error("unknown functional value `@{0}`")]
    UnknownValue(String),
    #[error("unknown port `{0}`")]
    UnknownPort(String),
}

#[derive(Debug, Clone, PartialEq)]
enum Tree {
    Bot,
    Star,
    Up(Vec<Tree>),
    Tagged(Label, Box<Tree>),
    Tuple(Vec<Tree>),
    Fields(Vec<(Label, Tree)>),
    Fold(Box<Tree>),
    QBot,
    Named(Name),
}

impl Tree {
    fn text(&self) -> String {
        match self {
            Tree::Bot => "_".into(),
            Tree::Star => "*".into(),
            Tree::Up(xs) => format!("up({})", xs.iter().map(Tree::text).collect::<Vec<_>>().join(",")),
            Tree::Tagged(l, x) => format!("{l}·{}", x.text()),
            Tree::Tuple(xs) => format!("({})", xs.iter().map(Tree::text).collect::<Vec<_>>().join(",")),
            Tree::Fields(fs) => format!(
                "{{{}}}",
                fs.iter()
                    .map(|(l, x)| format!("{l}: {}", x.text()))
                    .collect::<Vec<_>>()
                    .join(", ")
            ),
            Tree::Fold(x) => format!("fold({})", x.text()),
            Tree::QBot => "qbot".into(),
            Tree::Named(n) => format!("@{n}"),
        }
    }
}

struct Reader {
    chars: Vec<char>,
    pos: usize,
}

impl Reader {
    fn new(src: &str) -> Self {
        Reader {
            chars: src.chars().collect(),
            pos: 0,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn err(&self, msg: &str) -> NotationError {
        NotationError::Syntax {
            col: self.pos + 1,
            msg: msg.to_string(),
        }
    }

    fn eat(&mut self, c: char) -> Result<(), NotationError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected `{c}`")))
        }
    }

    fn word(&mut self) -> String {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len()
            && (self.chars[self.pos].is_alphanumeric() || self.chars[self.pos] == '_' || self.chars[self.pos] == '\'')
        {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }

    fn tree(&mut self) -> Result<Tree, NotationError> {
        match self.peek() {
            None => Err(self.err("unexpected end of value")),
            Some('*') => {
                self.pos += 1;
                Ok(Tree::Star)
            }
            Some('(') => {
                self.pos += 1;
                let items = self.items(')')?;
                if items.len() == 1 {
                    Ok(items.into_iter().next().unwrap())
                } else {
                    Ok(Tree::Tuple(items))
                }
            }
            Some('{') => {
                self.pos += 1;
                let mut fields = Vec::new();
                if self.peek() == Some('}') {
                    self.pos += 1;
                    return Ok(Tree::Fields(fields));
                }
                loop {
                    let l = self.word();
                    if l.is_empty() {
                        return Err(self.err("expected a label"));
                    }
                    self.eat(':')?;
                    fields.push((l, self.tree()?));
                    match self.peek() {
                        Some(',') => self.pos += 1,
                        Some('}') => {
                            self.pos += 1;
                            return Ok(Tree::Fields(fields));
                        }
                        _ => return Err(self.err("expected `,` or `}`")),
                    }
                }
            }
            Some('@') => {
                self.pos += 1;
                let n = self.word();
                if n.is_empty() {
                    return Err(self.err("expected a name after `@`"));
                }
                Ok(Tree::Named(n))
            }
            Some(_) => {
                let w = self.word();
                if w.is_empty() {
                    return Err(self.err("expected a value"));
                }
                if w == "_" {
                    return Ok(Tree::Bot);
                }
                if self.peek() == Some('·') || self.peek() == Some('.') {
                    self.pos += 1;
                    let rest = self.tree()?;
                    return Ok(Tree::Tagged(w, Box::new(rest)));
                }
                match w.as_str() {
                    "up" => {
                        self.eat('(')?;
                        Ok(Tree::Up(self.items(')')?))
                    }
                    "fold" => {
                        self.eat('(')?;
                        let mut xs = self.items(')')?;
                        if xs.len() != 1 {
                            return Err(self.err("fold takes one value"));
                        }
                        Ok(Tree::Fold(Box::new(xs.remove(0))))
                    }
                    "qbot" => Ok(Tree::QBot),
                    _ => Err(self.err(&format!("unexpected `{w}`"))),
                }
            }
        }
    }

    fn items(&mut self, close: char) -> Result<Vec<Tree>, NotationError> {
        let mut out = vec![self.tree()?];
        loop {
            match self.peek() {
                Some(',') => {
                    self.pos += 1;
                    out.push(self.tree()?);
                }
                Some(c) if c == close => {
                    self.pos += 1;
                    return Ok(out);
                }
                _ => return Err(self.err(&format!("expected `,` or `{close}`"))),
            }
        }
    }
}

fn shape_of(a: &SessionType, p: Polarity) -> String {
    use SessionType::*;
    match (a, p) {
        (Unit, Pos) => "`_` or `*`".into(),
        (Unit, Neg) => "`_`".into(),
        (Down(b), Neg) | (AndVal(_, b), Neg) => shape_of(b, Neg),
        (Up(b), Pos) | (ImpVal(_, b), Pos) => shape_of(b, Pos),
        (Down(_), Pos) | (Up(_), Neg) => "`_` or `up(v)`".into(),
        (Plus(m), Pos) | (With(m), Neg) => format!(
            "`_` or `l·v` with l in {{{}}}",
            m.keys().cloned().collect::<Vec<_>>().join(", ")
        ),
        (Plus(m), Neg) | (With(m), Pos) => format!(
            "a record `{{{}}}`",
            m.keys().map(|l| format!("{l}: v")).collect::<Vec<_>>().join(", ")
        ),
        (Tensor(..), Neg) | (Lolly(..), Pos) => "a pair `(v, w)`".into(),
        (Tensor(..), Pos) | (Lolly(..), Neg) => "`_` or `up(v, w)`".into(),
        (AndVal(..), Pos) | (ImpVal(..), Neg) => "`_` or `up(f, v)`".into(),
        (Rec(..), _) => "a folded value".into(),
        (Var(_), _) => "a closed type".into(),
    }
}

pub fn parse_value(
    text: &str,
    a: &SessionType,
    p: Polarity,
    reg: &ValueRegistry,
) -> Result<CommValue, NotationError> {
    let mut r = Reader::new(text);
    let t = r.tree()?;
    if r.peek().is_some() {
        return Err(r.err("trailing input"));
    }
    elaborate(&t, a, p, reg)
}

fn elaborate(t: &Tree, a: &SessionType, p: Polarity, reg: &ValueRegistry) -> Result<CommValue, NotationError> {
    use SessionType::*;
    let mismatch = || NotationError::Shape {
        found: t.text(),
        ty: a.to_string(),
        pol: p,
        expected: shape_of(a, p),
    };
    if *t == Tree::Bot {
        return Ok(CommValue::Bot);
    }
    match (a, p) {
        (Unit, Pos) if *t == Tree::Star => Ok(CommValue::Star),
        (Down(b), Neg) | (AndVal(_, b), Neg) => elaborate(t, b, Neg, reg),
        (Up(b), Pos) | (ImpVal(_, b), Pos) => elaborate(t, b, Pos, reg),
        (Down(b), Pos) | (Up(b), Neg) => match t {
            Tree::Up(xs) => Ok(CommValue::lift(elaborate(&single(xs), b, p, reg)?)),
            _ => Err(mismatch()),
        },
        (Plus(m), Pos) | (With(m), Neg) => match t {
            Tree::Tagged(l, x) => match m.get(l) {
                Some(b) => Ok(CommValue::tag(l, elaborate(x, b, p, reg)?)),
                None => Err(mismatch()),
            },
            _ => Err(mismatch()),
        },
        (Plus(m), Neg) | (With(m), Pos) => match t {
            Tree::Fields(fs) => {
                let mut out = BTreeMap::new();
                for (l, x) in fs {
                    let b = m.get(l).ok_or_else(mismatch)?;
                    out.insert(l.clone(), elaborate(x, b, p, reg)?);
                }
                Ok(CommValue::record(out))
            }
            _ => Err(mismatch()),
        },
        (Tensor(b, c), Neg) | (Lolly(b, c), Pos) => match t {
            Tree::Tuple(xs) if xs.len() == 2 => Ok(CommValue::pair(
                elaborate(&xs[0], b, Neg, reg)?,
                elaborate(&xs[1], c, p, reg)?,
            )),
            _ => Err(mismatch()),
        },
        (Tensor(b, c), Pos) | (Lolly(b, c), Neg) => match t {
            Tree::Up(xs) => {
                let xs = match xs.as_slice() {
                    [Tree::Tuple(inner)] => inner.clone(),
                    [Tree::Bot] => vec![Tree::Bot, Tree::Bot],
                    _ => xs.clone(),
                };
                if xs.len() != 2 {
                    return Err(mismatch());
                }
                Ok(CommValue::lift(CommValue::pair(
                    elaborate(&xs[0], b, Pos, reg)?,
                    elaborate(&xs[1], c, p, reg)?,
                )))
            }
            _ => Err(mismatch()),
        },
        (AndVal(_, b), Pos) | (ImpVal(_, b), Neg) => match t {
            Tree::Up(xs) if xs.len() == 2 => {
                let f = match &xs[0] {
                    Tree::Bot => FuncValue::Bot,
                    Tree::QBot => FuncValue::QProcBot,
                    Tree::Named(n) => reg
                        .lookup(n)
                        .cloned()
                        .ok_or_else(|| NotationError::UnknownValue(n.clone()))?,
                    _ => return Err(mismatch()),
                };
                Ok(CommValue::lift(CommValue::val_pair(f, elaborate(&xs[1], b, p, reg)?)))
            }
            _ => Err(mismatch()),
        },
        (Rec(..), _) => {
            let body = unfold_type(a).expect("rec");
            match t {
                Tree::Fold(x) => Ok(CommValue::fold(elaborate(x, &body, p, reg)?)),
                _ => Ok(CommValue::fold(elaborate(t, &body, p, reg)?)),
            }
        }
        _ => Err(mismatch()),
    }
}

fn single(xs: &[Tree]) -> Tree {
    if xs.len() == 1 {
        xs[0].clone()
    } else {
        Tree::Tuple(xs.to_vec())
    }
}

fn func_text(f: &FuncValue, reg: &ValueRegistry) -> String {
    match f {
        FuncValue::Bot | FuncValue::Exhausted => "_".into(),
        FuncValue::QProcBot => "qbot".into(),
        other => match reg.name_of(other) {
            Some(n) => format!("@{n}"),
            None => match other {
                FuncValue::QProc(_) => "@<proc>".into(),
                _ => "@<closure>".into(),
            },
        },
    }
}

/// Prints `v` as an element of ⟦A⟧ᵖ.
pub fn render_value(v: &CommValue, a: &SessionType, p: Polarity, reg: &ValueRegistry) -> String {
    use SessionType::*;
    match (a, p) {
        (Down(b), Neg) | (AndVal(_, b), Neg) => return render_value(v, b, Neg, reg),
        (Up(b), Pos) | (ImpVal(_, b), Pos) => return render_value(v, b, Pos, reg),
        (Plus(m), Neg) | (With(m), Pos) => {
            let fields: Vec<String> = m
                .iter()
                .map(|(l, b)| format!("{l}: {}", render_value(&v.field(l), b, p, reg)))
                .collect();
            return format!("{{{}}}", fields.join(", "));
        }
        (Tensor(b, c), Neg) | (Lolly(b, c), Pos) => {
            let (x, y) = v.components();
            return format!(
                "({},{})",
                render_value(&x, b, Neg, reg),
                render_value(&y, c, p, reg)
            );
        }
        _ => {}
    }
    match v {
        CommValue::Bot => "_".into(),
        CommValue::Star => "*".into(),
        CommValue::Lift(inner) => match (a, p) {
            (Down(b), Pos) | (Up(b), Neg) => format!("up({})", render_value(inner, b, p, reg)),
            (Tensor(b, c), Pos) | (Lolly(b, c), Neg) => {
                let (x, y) = inner.components();
                format!(
                    "up({},{})",
                    render_value(&x, b, Pos, reg),
                    render_value(&y, c, p, reg)
                )
            }
            (AndVal(_, b), Pos) | (ImpVal(_, b), Neg) => match &**inner {
                CommValue::ValPair(f, rest) => {
                    format!("up({},{})", func_text(f, reg), render_value(rest, b, p, reg))
                }
                other => format!("up({other:?})"),
            },
            _ => format!("up({inner:?})"),
        },
        CommValue::Tag(l, inner) => match (a, p) {
            (Plus(m), Pos) | (With(m), Neg) => match m.get(l) {
                Some(b) => format!("{l}·{}", render_value(inner, b, p, reg)),
                None => format!("{l}·{inner:?}"),
            },
            _ => format!("{l}·{inner:?}"),
        },
        CommValue::Fold(inner) => match a {
            Rec(..) => {
                let body = unfold_type(a).expect("rec");
                let s = render_value(inner, &body, p, reg);
                if matches!(**inner, CommValue::Tag(..)) {
                    s
                } else {
                    format!("fold({s})")
                }
            }
            _ => format!("fold({inner:?})"),
        },
        other => format!("{other:?}"),
    }
}

/// Reads `c+ = v, d- = w` against an interface. Ports not mentioned are bottom.
pub fn parse_record(
    text: &str,
    ports: &[(Port, SessionType)],
    reg: &ValueRegistry,
) -> Result<Record, NotationError> {
    let mut out = Record::new();
    for part in split_top_level(text) {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let (lhs, rhs) = part.split_once('=').ok_or_else(|| NotationError::Syntax {
            col: 1,
            msg: format!("expected `port = value` in `{part}`"),
        })?;
        let lhs = lhs.trim();
        let (port, ty) = ports
            .iter()
            .find(|(p, _)| p.to_string() == lhs)
            .ok_or_else(|| NotationError::UnknownPort(lhs.to_string()))?;
        out.insert(port.clone(), parse_value(rhs.trim(), ty, port.pol, reg)?);
    }
    Ok(out)
}

fn split_top_level(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for c in text.chars() {
        match c {
            '(' | '{' => depth += 1,
            ')' | '}' => depth -= 1,
            _ => {}
        }
        if c == ',' && depth == 0 {
            out.push(std::mem::take(&mut cur));
        } else {
            cur.push(c);
        }
    }
    out.push(cur);
    out
}

/// Prints the given ports of a record, in order, as `c+ = v, d- = w`.
pub fn render_record(r: &Record, ports: &[(Port, SessionType)], reg: &ValueRegistry) -> String {
    ports
        .iter()
        .map(|(port, ty)| {
            let v = super::get(r, port);
            format!("{port} = {}", render_value(&v, ty, port.pol, reg))
        })
        .collect::<Vec<_>>()
        .join(", ")
}
