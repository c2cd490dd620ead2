use std::collections::BTreeMap;

use super::value::{CommValue, FuncValue};
use super::DomainError;
use crate::syntax::{func_type_alpha_eq, unfold_type, FuncType, Label, Name, Polarity, SessionType};

use Polarity::{Negative as Neg, Positive as Pos};

/// Named functional values available to enumeration and the text notation.
#[derive(Debug, Clone, Default)]
pub struct ValueRegistry {
    entries: Vec<(Name, FuncType, FuncValue)>,
}

impl ValueRegistry {
    pub fn new() -> Self {
        ValueRegistry::default()
    }

    pub fn register(&mut self, name: &str, ty: FuncType, value: FuncValue) {
        self.entries.push((name.to_string(), ty, value));
    }

    pub fn lookup(&self, name: &str) -> Option<&FuncValue> {
        self.entries.iter().find(|e| e.0 == name).map(|e| &e.2)
    }

    pub fn name_of(&self, v: &FuncValue) -> Option<&str> {
        self.entries.iter().find(|e| &e.2 == v).map(|e| e.0.as_str())
    }

    pub fn values_of(&self, ty: &FuncType) -> Vec<FuncValue> {
        self.entries
            .iter()
            .filter(|e| func_type_alpha_eq(&e.1, ty))
            .map(|e| e.2.clone())
            .collect()
    }
}

/// The least element of ⟦A⟧ᵖ. Product-shaped aspects have the record of
/// bottoms as least element; it is represented by `Bot` as well.
pub fn bottom(_a: &SessionType, _p: Polarity) -> CommValue {
    CommValue::Bot
}

/// Whether every element of ⟦A⟧ᵖ other than bottom is an up-image, so that
/// a fold around it does not count as an extra message.
pub fn lift_shaped(a: &SessionType, p: Polarity) -> bool {
    use SessionType::*;
    match (a, p) {
        (Down(_), Pos) | (Up(_), Neg) | (Plus(_), Pos) | (With(_), Neg) => true,
        (Tensor(..), Pos) | (Lolly(..), Neg) | (AndVal(..), Pos) | (ImpVal(..), Neg) => true,
        (Unit, Neg) => true,
        (Down(b), Neg) | (AndVal(_, b), Neg) => lift_shaped(b, Neg),
        (Up(b), Pos) | (ImpVal(_, b), Pos) => lift_shaped(b, Pos),
        _ => false,
    }
}

/// Functional values used when a channel transmits τ.
pub fn func_values(t: &FuncType, reg: &ValueRegistry) -> Result<Vec<FuncValue>, DomainError> {
    let registered = reg.values_of(t);
    match t {
        FuncType::Proc { .. } => {
            let mut out = vec![FuncValue::Bot, FuncValue::QProcBot];
            out.extend(registered);
            Ok(out)
        }
        FuncType::Arrow(..) => {
            if registered.is_empty() {
                Err(DomainError::NotEnumerable(t.to_string()))
            } else {
                let mut out = vec![FuncValue::Bot];
                out.extend(registered);
                Ok(out)
            }
        }
    }
}

/// All conforming values of ⟦A⟧ᵖ of height at most `d`.
pub fn enumerate(a: &SessionType, p: Polarity, d: usize) -> Result<Vec<CommValue>, DomainError> {
    enumerate_with(a, p, d, &ValueRegistry::default())
}

pub fn enumerate_with(
    a: &SessionType,
    p: Polarity,
    d: usize,
    reg: &ValueRegistry,
) -> Result<Vec<CommValue>, DomainError> {
    use SessionType::*;
    let lifted = |inner: Vec<CommValue>| {
        let mut out = vec![CommValue::Bot];
        out.extend(inner.into_iter().map(CommValue::lift));
        out
    };
    Ok(match (a, p) {
        (Unit, Neg) => vec![CommValue::Bot],
        (Unit, Pos) => vec![CommValue::Bot, CommValue::Star],
        (Down(b), Neg) => enumerate_with(b, Neg, d, reg)?,
        (Up(b), Pos) => enumerate_with(b, Pos, d, reg)?,
        (Down(b), Pos) | (Up(b), Neg) => {
            if d == 0 {
                vec![CommValue::Bot]
            } else {
                lifted(enumerate_with(b, p, d - 1, reg)?)
            }
        }
        (Plus(m), Pos) | (With(m), Neg) => {
            let mut out = vec![CommValue::Bot];
            if d > 0 {
                for (l, b) in m {
                    for v in enumerate_with(b, p, d - 1, reg)? {
                        out.push(CommValue::tag(l, v));
                    }
                }
            }
            out
        }
        (Plus(m), Neg) | (With(m), Pos) => {
            let mut fields: Vec<(Label, Vec<CommValue>)> = Vec::new();
            for (l, b) in m {
                fields.push((l.clone(), enumerate_with(b, p, d, reg)?));
            }
            record_product(&fields)
        }
        (Tensor(b, c), Neg) => pairs(&enumerate_with(b, Neg, d, reg)?, &enumerate_with(c, Neg, d, reg)?),
        (Lolly(b, c), Pos) => pairs(&enumerate_with(b, Neg, d, reg)?, &enumerate_with(c, Pos, d, reg)?),
        (Tensor(b, c), Pos) | (Lolly(b, c), Neg) => {
            if d == 0 {
                vec![CommValue::Bot]
            } else {
                let left = enumerate_with(b, Pos, d - 1, reg)?;
                let right = enumerate_with(c, p, d - 1, reg)?;
                let mut out = vec![CommValue::Bot];
                for x in &left {
                    for y in &right {
                        out.push(CommValue::lift(CommValue::pair(x.clone(), y.clone())));
                    }
                }
                out
            }
        }
        (AndVal(_, b), Neg) => enumerate_with(b, Neg, d, reg)?,
        (ImpVal(_, b), Pos) => enumerate_with(b, Pos, d, reg)?,
        (AndVal(t, b), Pos) | (ImpVal(t, b), Neg) => {
            let fs = func_values(t, reg)?;
            if d == 0 {
                vec![CommValue::Bot]
            } else {
                let rest = enumerate_with(b, p, d - 1, reg)?;
                let mut out = vec![CommValue::Bot];
                for f in &fs {
                    for r in &rest {
                        out.push(CommValue::lift(CommValue::val_pair(f.clone(), r.clone())));
                    }
                }
                out
            }
        }
        (Rec(..), _) => {
            let body = unfold_type(a).expect("rec");
            let inner = if lift_shaped(&body, p) {
                enumerate_with(&body, p, d, reg)?
            } else if d == 0 {
                return Ok(vec![CommValue::Bot]);
            } else {
                enumerate_with(&body, p, d - 1, reg)?
            };
            inner.into_iter().map(CommValue::fold).collect()
        }
        (Var(x), _) => return Err(DomainError::OpenType(x.clone())),
    })
}

fn pairs(left: &[CommValue], right: &[CommValue]) -> Vec<CommValue> {
    let mut out = Vec::with_capacity(left.len() * right.len());
    for x in left {
        for y in right {
            out.push(CommValue::pair(x.clone(), y.clone()));
        }
    }
    out
}

fn record_product(fields: &[(Label, Vec<CommValue>)]) -> Vec<CommValue> {
    let mut acc: Vec<BTreeMap<Label, CommValue>> = vec![BTreeMap::new()];
    for (l, vs) in fields {
        let mut next = Vec::with_capacity(acc.len() * vs.len());
        for m in &acc {
            for v in vs {
                let mut m2 = m.clone();
                m2.insert(l.clone(), v.clone());
                next.push(m2);
            }
        }
        acc = next;
    }
    acc.into_iter().map(CommValue::record).collect()
}

/// Whether `v` is an element of ⟦A⟧ᵖ.
pub fn conforms(v: &CommValue, a: &SessionType, p: Polarity) -> bool {
    use SessionType::*;
    if v.is_bot() {
        return true;
    }
    match (a, p, v) {
        (Unit, Pos, CommValue::Star) => true,
        (Down(b), Neg, _) | (AndVal(_, b), Neg, _) => conforms(v, b, Neg),
        (Up(b), Pos, _) | (ImpVal(_, b), Pos, _) => conforms(v, b, Pos),
        (Down(b), Pos, CommValue::Lift(x)) | (Up(b), Neg, CommValue::Lift(x)) => conforms(x, b, p),
        (Plus(m), Pos, CommValue::Tag(l, x)) | (With(m), Neg, CommValue::Tag(l, x)) => {
            m.get(l).is_some_and(|b| conforms(x, b, p))
        }
        (Plus(m), Neg, CommValue::Record(r)) | (With(m), Pos, CommValue::Record(r)) => r
            .iter()
            .all(|(l, x)| m.get(l).is_some_and(|b| conforms(x, b, p))),
        (Tensor(b, c), Neg, CommValue::Pair(x, y)) => conforms(x, b, Neg) && conforms(y, c, Neg),
        (Lolly(b, c), Pos, CommValue::Pair(x, y)) => conforms(x, b, Neg) && conforms(y, c, Pos),
        (Tensor(b, c), Pos, CommValue::Lift(inner)) | (Lolly(b, c), Neg, CommValue::Lift(inner)) => {
            let (x, y) = inner.components();
            matches!(**inner, CommValue::Pair(..) | CommValue::Bot)
                && conforms(&x, b, Pos)
                && conforms(&y, c, p)
        }
        (AndVal(_, b), Pos, CommValue::Lift(inner)) | (ImpVal(_, b), Neg, CommValue::Lift(inner)) => {
            match &**inner {
                CommValue::ValPair(_, rest) => conforms(rest, b, p),
                _ => false,
            }
        }
        (Rec(..), _, CommValue::Fold(x)) => conforms(x, &unfold_type(a).expect("rec"), p),
        _ => false,
    }
}

/// An upper bound on the length of strictly ascending chains among values of
/// ⟦A⟧ᵖ of height at most `d`.
pub fn chain_height(a: &SessionType, p: Polarity, d: usize) -> usize {
    use SessionType::*;
    match (a, p) {
        (Unit, Neg) => 0,
        (Unit, Pos) => 1,
        (Down(b), Neg) | (AndVal(_, b), Neg) => chain_height(b, Neg, d),
        (Up(b), Pos) | (ImpVal(_, b), Pos) => chain_height(b, Pos, d),
        (Down(_), Pos) | (Up(_), Neg) | (Plus(_), Pos) | (With(_), Neg) if d == 0 => 0,
        (Down(b), Pos) | (Up(b), Neg) => 1 + chain_height(b, p, d - 1),
        (Plus(m), Pos) | (With(m), Neg) => {
            1 + distinct(m).iter().map(|(b, _)| chain_height(b, p, d - 1)).max().unwrap_or(0)
        }
        (Plus(m), Neg) | (With(m), Pos) => distinct(m).iter().fold(0usize, |acc, (b, n)| {
            acc.saturating_add(chain_height(b, p, d).saturating_mul(*n))
        }),
        (Tensor(b, c), Neg) => chain_height(b, Neg, d).saturating_add(chain_height(c, Neg, d)),
        (Lolly(b, c), Pos) => chain_height(b, Neg, d).saturating_add(chain_height(c, Pos, d)),
        (Tensor(b, c), Pos) | (Lolly(b, c), Neg) => {
            if d == 0 {
                0
            } else {
                1usize
                    .saturating_add(chain_height(b, Pos, d - 1))
                    .saturating_add(chain_height(c, p, d - 1))
            }
        }
        (AndVal(_, b), Pos) | (ImpVal(_, b), Neg) => {
            if d == 0 {
                0
            } else {
                3usize.saturating_add(chain_height(b, p, d - 1))
            }
        }
        (Rec(..), _) => {
            let body = unfold_type(a).expect("rec");
            if lift_shaped(&body, p) {
                chain_height(&body, p, d)
            } else if d == 0 {
                0
            } else {
                chain_height(&body, p, d - 1)
            }
        }
        (Var(_), _) => 0,
    }
}

/// Field types with multiplicities. Labelled choices over a recursive type
/// often repeat the same type, and recursing once per distinct type keeps
/// `chain_height` linear in the height for them.
fn distinct(m: &BTreeMap<Label, SessionType>) -> Vec<(&SessionType, usize)> {
    let mut out: Vec<(&SessionType, usize)> = Vec::new();
    for b in m.values() {
        match out.iter_mut().find(|(c, _)| *c == b) {
            Some(e) => e.1 += 1,
            None => out.push((b, 1)),
        }
    }
    out
}
