use std::collections::{BTreeMap, BTreeSet};

use super::value::{CommValue, FuncValue, Port, Record};
use super::DomainError;

/// The information order. Tags with different labels are incomparable.
pub fn leq(v: &CommValue, w: &CommValue) -> bool {
    use CommValue::*;
    if v.is_bot() {
        return true;
    }
    match (v, w) {
        (Star, Star) => true,
        (Lift(a), Lift(b)) => leq(a, b),
        (Tag(k, a), Tag(l, b)) => k == l && leq(a, b),
        (Record(m), _) => m.iter().all(|(k, a)| leq(a, &w.field(k))),
        (Pair(a, b), Pair(c, d)) => leq(a, c) && leq(b, d),
        (ValPair(f, a), ValPair(g, b)) => f.leq(g) && leq(a, b),
        (Fold(a), Fold(b)) => leq(a, b),
        _ => false,
    }
}

pub fn record_leq(a: &Record, b: &Record) -> bool {
    let keys: BTreeSet<&Port> = a.keys().chain(b.keys()).collect();
    keys.into_iter()
        .all(|k| leq(&super::get(a, k), &super::get(b, k)))
}

/// Least upper bound of two compatible approximants.
pub fn lub2(v: &CommValue, w: &CommValue) -> Result<CommValue, DomainError> {
    use CommValue::*;
    if v.is_bot() {
        return Ok(w.normalize());
    }
    if w.is_bot() {
        return Ok(v.normalize());
    }
    let incompatible = || DomainError::Incompatible(format!("{v:?} and {w:?}"));
    match (v, w) {
        (Star, Star) => Ok(Star),
        (Lift(a), Lift(b)) => Ok(Lift(Box::new(lub2(a, b)?))),
        (Tag(k, a), Tag(l, b)) if k == l => Ok(Tag(k.clone(), Box::new(lub2(a, b)?))),
        (Record(m), Record(n)) => {
            let keys: BTreeSet<&String> = m.keys().chain(n.keys()).collect();
            let mut out = BTreeMap::new();
            for k in keys {
                out.insert(k.clone(), lub2(&v.field(k), &w.field(k))?);
            }
            Ok(CommValue::record(out))
        }
        (Pair(a, b), Pair(c, d)) => Ok(CommValue::pair(lub2(a, c)?, lub2(b, d)?)),
        (ValPair(f, a), ValPair(g, b)) => {
            let h = if f.leq(g) {
                g.clone()
            } else if g.leq(f) {
                f.clone()
            } else {
                return Err(incompatible());
            };
            Ok(ValPair(h, Box::new(lub2(a, b)?)))
        }
        (Fold(a), Fold(b)) => Ok(CommValue::fold(lub2(a, b)?)),
        _ => Err(incompatible()),
    }
}

fn func_meet(f: &FuncValue, g: &FuncValue) -> FuncValue {
    if f.leq(g) {
        f.clone()
    } else if g.leq(f) {
        g.clone()
    } else if matches!((f, g), (FuncValue::QProc(_), FuncValue::QProc(_))) {
        FuncValue::QProcBot
    } else {
        FuncValue::Bot
    }
}

/// Greatest lower bound; always defined since bottom is below everything.
pub fn glb2(v: &CommValue, w: &CommValue) -> CommValue {
    use CommValue::*;
    if v.is_bot() || w.is_bot() {
        return Bot;
    }
    match (v, w) {
        (Star, Star) => Star,
        (Lift(a), Lift(b)) => Lift(Box::new(glb2(a, b))),
        (Tag(k, a), Tag(l, b)) if k == l => Tag(k.clone(), Box::new(glb2(a, b))),
        (Record(m), Record(_)) => CommValue::record(
            m.keys()
                .map(|k| (k.clone(), glb2(&v.field(k), &w.field(k))))
                .collect(),
        ),
        (Pair(a, b), Pair(c, d)) => CommValue::pair(glb2(a, c), glb2(b, d)),
        (ValPair(f, a), ValPair(g, b)) => ValPair(func_meet(f, g), Box::new(glb2(a, b))),
        (Fold(a), Fold(b)) => CommValue::fold(glb2(a, b)),
        _ => Bot,
    }
}

/// Number of message boundaries along the deepest path. Lifts and tags
/// count one each; a fold counts one unless it directly wraps an up-image,
/// so that a stream cell `k·v` counts as a single message.
pub fn height(v: &CommValue) -> usize {
    use CommValue::*;
    match v {
        Bot | Star => 0,
        Lift(a) | Tag(_, a) => 1 + height(a),
        Record(m) => m.values().map(height).max().unwrap_or(0),
        Pair(a, b) => height(a).max(height(b)),
        ValPair(_, a) => height(a),
        Fold(a) => {
            if a.is_lift_shaped() {
                height(a)
            } else {
                1 + height(a)
            }
        }
    }
}

/// Cuts the value below `d` message boundaries, replacing the rest by bottom.
pub fn truncate(v: &CommValue, d: usize) -> CommValue {
    use CommValue::*;
    match v {
        Bot => Bot,
        Star => Star,
        Lift(a) => {
            if d == 0 {
                Bot
            } else {
                Lift(Box::new(truncate(a, d - 1)))
            }
        }
        Tag(k, a) => {
            if d == 0 {
                Bot
            } else {
                Tag(k.clone(), Box::new(truncate(a, d - 1)))
            }
        }
        Record(m) => CommValue::record(m.iter().map(|(k, a)| (k.clone(), truncate(a, d))).collect()),
        Pair(a, b) => CommValue::pair(truncate(a, d), truncate(b, d)),
        ValPair(f, a) => ValPair(f.clone(), Box::new(truncate(a, d))),
        Fold(a) => {
            if a.is_lift_shaped() {
                CommValue::fold(truncate(a, d))
            } else if d == 0 {
                Bot
            } else {
                CommValue::fold(truncate(a, d - 1))
            }
        }
    }
}

pub fn truncate_record(r: &Record, d: usize) -> Record {
    r.iter().map(|(k, v)| (k.clone(), truncate(v, d))).collect()
}

/// Lifting unit.
pub fn up(v: CommValue) -> CommValue {
    CommValue::Lift(Box::new(v))
}

/// Retraction of `up`: `down(Bot) = Bot`, `down(up v) = v`.
pub fn down(w: &CommValue) -> CommValue {
    match w {
        CommValue::Lift(v) => (**v).clone(),
        _ => CommValue::Bot,
    }
}

/// Canonical isomorphism from the unfolding into the recursive type.
pub fn fold(v: CommValue) -> CommValue {
    CommValue::fold(v)
}

/// Inverse of `fold`.
pub fn unfold(w: &CommValue) -> CommValue {
    match w {
        CommValue::Fold(v) => (**v).clone(),
        _ => CommValue::Bot,
    }
}
