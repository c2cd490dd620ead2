//! One clause per process constructor. Receiving clauses are strict in the
//! port they wait on.

use std::collections::BTreeMap;

use crate::domain::{
    chain_height, down, fold, get, strictify, unfold, CommValue, Env, FuncValue, Port, Record,
};
use crate::syntax::{free_channels, Label, Name, Polarity, Process, Term};

use super::denotation::{set, Denotation, Evaluated};
use super::term::eval_term;
use super::trace::trace_at;
use super::Fuel;

/// Rounds allowed for a cut whose channel type is unknown.
const DEFAULT_ROUND_CAP: usize = 10_000;

/// ⟦P⟧u as a function of the interface `used ⊢ provided`.
pub fn denote_process(p: &Process, provided: &str, used: &[Name], u: &Env, fuel: &Fuel) -> Denotation {
    let inner = clause(p, provided, u, fuel);
    if inner.used() == used {
        inner
    } else {
        // Same channel names, declared order.
        let d = inner.clone();
        Denotation::new(provided, used, move |r| d.apply(r))
    }
}

fn used_of(p: &Process, provided: &str) -> Vec<Name> {
    let mut fc = free_channels(p);
    fc.remove(provided);
    fc.into_iter().collect()
}

fn sub(p: &Process, provided: &str, u: &Env, fuel: &Fuel) -> Denotation {
    clause(p, provided, u, fuel)
}

/// Runs `d` on `r` after replacing one input port.
fn with_input(d: &Denotation, r: &Record, port: Port, v: CommValue) -> Evaluated {
    let mut r2 = r.clone();
    set(&mut r2, port, v);
    d.apply(&r2)
}

fn clause(p: &Process, c: &str, u: &Env, fuel: &Fuel) -> Denotation {
    use Process::*;
    let used = used_of(p, c);
    match p {
        Fwd { to, from } => {
            let (b, a) = (to.clone(), from.clone());
            Denotation::new(c, &used, move |r| {
                let mut out = Record::new();
                set(&mut out, Port::neg(&a), get(r, &Port::neg(&b)));
                set(&mut out, Port::pos(&b), get(r, &Port::pos(&a)));
                Evaluated { out, diag: Default::default() }
            })
        }
        Close(a) => {
            let a = a.clone();
            Denotation::new(c, &used, move |_| {
                let mut out = Record::new();
                out.insert(Port::pos(&a), CommValue::Star);
                Evaluated { out, diag: Default::default() }
            })
        }
        Wait(a, q) => {
            let k = sub(q, c, u, fuel);
            let f = Denotation::new(c, &used, move |r| k.apply(r));
            strictify(&f, Port::pos(a))
        }
        SendShift(a, q) => {
            let k = sub(q, c, u, fuel);
            // The shift goes out on the positive side when providing (down
            // shift) and on the negative side when using (up shift).
            let port = if a == c { Port::pos(a) } else { Port::neg(a) };
            Denotation::new(c, &used, move |r| {
                let mut e = k.apply(r);
                let v = get(&e.out, &port);
                set(&mut e.out, port.clone(), CommValue::lift(v));
                e
            })
        }
        RecvShift(a, q) => {
            let k = sub(q, c, u, fuel);
            let port = if a == c { Port::neg(a) } else { Port::pos(a) };
            let p2 = port.clone();
            let f = Denotation::new(c, &used, move |r| {
                with_input(&k, r, p2.clone(), down(&get(r, &p2)))
            });
            strictify(&f, port)
        }
        SendLabel(a, l, q) => {
            let k = sub(q, c, u, fuel);
            let (inp, outp) = if a == c {
                (Port::neg(a), Port::pos(a))
            } else {
                (Port::pos(a), Port::neg(a))
            };
            let l = l.clone();
            Denotation::new(c, &used, move |r| {
                let mut e = with_input(&k, r, inp.clone(), get(r, &inp).field(&l));
                let v = get(&e.out, &outp);
                set(&mut e.out, outp.clone(), CommValue::tag(&l, v));
                e
            })
        }
        Case(a, branches) => {
            let ks: BTreeMap<Label, Denotation> = branches
                .iter()
                .map(|(l, q)| (l.clone(), sub(q, c, u, fuel)))
                .collect();
            let (inp, outp) = if a == c {
                (Port::neg(a), Port::pos(a))
            } else {
                (Port::pos(a), Port::neg(a))
            };
            let i2 = inp.clone();
            let f = Denotation::new(c, &used, move |r| match get(r, &i2) {
                CommValue::Tag(l, v) => match ks.get(&l) {
                    Some(k) => {
                        let mut e = with_input(k, r, i2.clone(), (*v).clone());
                        let w = get(&e.out, &outp);
                        let mut fields = BTreeMap::new();
                        fields.insert(l.clone(), w);
                        set(&mut e.out, outp.clone(), CommValue::record(fields));
                        e
                    }
                    None => Evaluated::bottom(),
                },
                _ => Evaluated::bottom(),
            });
            strictify(&f, inp)
        }
        SendChan { chan, sent, cont } => {
            let k = sub(cont, c, u, fuel);
            let (a, b) = (chan.clone(), sent.clone());
            if chan == c {
                // Provider of B ⊗ A: relay the sent channel's negative side,
                // package its positive side with the continuation's.
                Denotation::new(c, &used, move |r| {
                    let (b_neg, a_neg) = get(r, &Port::neg(&a)).components();
                    let mut e = with_input(&k, r, Port::neg(&a), a_neg);
                    set(&mut e.out, Port::neg(&b), b_neg);
                    let cont_pos = get(&e.out, &Port::pos(&a));
                    let packed = CommValue::pair(get(r, &Port::pos(&b)), cont_pos);
                    set(&mut e.out, Port::pos(&a), CommValue::lift(packed));
                    e
                })
            } else {
                // Client of B ⊸ A.
                Denotation::new(c, &used, move |r| {
                    let (b_neg, a_pos) = get(r, &Port::pos(&a)).components();
                    let mut e = with_input(&k, r, Port::pos(&a), a_pos);
                    set(&mut e.out, Port::neg(&b), b_neg);
                    let cont_neg = get(&e.out, &Port::neg(&a));
                    let packed = CommValue::pair(get(r, &Port::pos(&b)), cont_neg);
                    set(&mut e.out, Port::neg(&a), CommValue::lift(packed));
                    e
                })
            }
        }
        RecvChan { bind, chan, cont } => {
            let k = sub(cont, c, u, fuel);
            let (a, b) = (chan.clone(), bind.clone());
            let (inp, outp) = if chan == c {
                (Port::neg(&a), Port::pos(&a))
            } else {
                (Port::pos(&a), Port::neg(&a))
            };
            let i2 = inp.clone();
            let f = Denotation::new(c, &used, move |r| {
                let (b_pos, a_rest) = down(&get(r, &i2)).components();
                let mut r2 = r.clone();
                set(&mut r2, i2.clone(), a_rest);
                set(&mut r2, Port::pos(&b), b_pos);
                let mut e = k.apply(&r2);
                let b_neg = e.out.remove(&Port::neg(&b)).unwrap_or(CommValue::Bot);
                let a_out = get(&e.out, &outp);
                set(&mut e.out, outp.clone(), CommValue::pair(b_neg, a_out));
                e
            });
            strictify(&f, inp)
        }
        SendVal { chan, term, cont } => {
            let k = sub(cont, c, u, fuel);
            let (v, flag) = eval_term(term, u, fuel);
            let outp = if chan == c { Port::pos(chan) } else { Port::neg(chan) };
            if v.is_bot() {
                let exhausted = flag || matches!(v, FuncValue::Exhausted);
                return Denotation::constant_bottom(c, &used, exhausted);
            }
            Denotation::new(c, &used, move |r| {
                let mut e = k.apply(r).with_flag(flag);
                let rest = get(&e.out, &outp);
                set(&mut e.out, outp.clone(), CommValue::lift(CommValue::val_pair(v.clone(), rest)));
                e
            })
        }
        RecvVal { bind, chan, cont } => {
            let inp = if chan == c { Port::neg(chan) } else { Port::pos(chan) };
            let i2 = inp.clone();
            let (x, body, env, fuel2, c2) = (bind.clone(), (**cont).clone(), u.clone(), *fuel, c.to_string());
            let f = Denotation::new(c, &used, move |r| match down(&get(r, &i2)) {
                CommValue::ValPair(v, rest) => {
                    let k = sub(&body, &c2, &env.with(&x, v), &fuel2);
                    with_input(&k, r, i2.clone(), *rest)
                }
                _ => Evaluated::bottom(),
            });
            strictify(&f, inp)
        }
        SendUnfold(a, q) | RecvUnfold(a, q) => {
            // Fold and unfold are isomorphisms, so the clause only depends
            // on which side of the channel this process is on.
            let k = sub(q, c, u, fuel);
            let (inp, outp) = if a == c {
                (Port::neg(a), Port::pos(a))
            } else {
                (Port::pos(a), Port::neg(a))
            };
            Denotation::new(c, &used, move |r| {
                let mut e = with_input(&k, r, inp.clone(), unfold(&get(r, &inp)));
                let v = get(&e.out, &outp);
                set(&mut e.out, outp.clone(), fold(v));
                e
            })
        }
        Unquote { chan, term, args } => spawn(term, chan, args, u, fuel),
        Cut {
            chan,
            ty,
            left,
            right,
        } => {
            let pd = sub(left, chan, u, fuel);
            let qd = sub(right, c, u, fuel);
            let x_ports = vec![Port::neg(chan), Port::pos(chan)];
            let depth = fuel.feedback_depth;
            let cap = match ty {
                Some(a) => chain_height(a, Polarity::Positive, depth)
                    .saturating_add(chain_height(a, Polarity::Negative, depth))
                    .saturating_add(2),
                None => DEFAULT_ROUND_CAP,
            };
            Denotation::new(c, &used, move |r| {
                let both = |input: &Record| {
                    let mut e = pd.apply(input);
                    let e2 = qd.apply(input);
                    e.out.extend(e2.out);
                    e.diag.absorb(&e2.diag);
                    e
                };
                let t = trace_at(&both, r, &x_ports, depth, cap);
                Evaluated {
                    out: t.out,
                    diag: t.diag,
                }
            })
        }
    }
}

/// `a <- M <- ā`: evaluate M and run the quoted process on the given channels.
fn spawn(term: &Term, chan: &str, args: &[Name], u: &Env, fuel: &Fuel) -> Denotation {
    let (v, flag) = eval_term(term, u, fuel);
    match v {
        FuncValue::QProc(d) => {
            let d = d.renamed(chan, args);
            if flag {
                let d2 = d.clone();
                Denotation::new(chan, args, move |r| d2.apply(r).with_flag(true))
            } else {
                d
            }
        }
        FuncValue::Exhausted => Denotation::constant_bottom(chan, args, true),
        _ => Denotation::constant_bottom(chan, args, flag),
    }
}
