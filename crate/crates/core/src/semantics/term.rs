use std::sync::Arc;

use crate::domain::{Closure, Env, FuncValue};
use crate::syntax::Term;

use super::process::denote_process;
use super::Fuel;

/// ⟦M⟧u, call by value.
pub fn denote_term(m: &Term, u: &Env, fuel: &Fuel) -> FuncValue {
    eval_term(m, u, fuel).0
}

/// ⟦M⟧u together with whether a fuel-truncated recursion was consulted.
pub fn eval_term(m: &Term, u: &Env, fuel: &Fuel) -> (FuncValue, bool) {
    match m {
        Term::Var(x) => (u.get(x), false),
        Term::Lam(x, _, body) => (
            FuncValue::Closure(Arc::new(Closure {
                env: u.clone(),
                param: x.clone(),
                body: (**body).clone(),
            })),
            false,
        ),
        Term::App(f, a) => {
            let (fv, f1) = eval_term(f, u, fuel);
            if fv.is_bot() {
                return (FuncValue::Bot, f1 || matches!(fv, FuncValue::Exhausted));
            }
            let (av, f2) = eval_term(a, u, fuel);
            if av.is_bot() {
                return (FuncValue::Bot, f1 || f2 || matches!(av, FuncValue::Exhausted));
            }
            let (r, f3) = apply_value(&fv, av, fuel);
            (r, f1 || f2 || f3)
        }
        Term::Quote { chan, body, args } => (
            FuncValue::QProc(denote_process(body, chan, args, u, fuel)),
            false,
        ),
        Term::Fix(x, body) => eval_fix(x, body, u, fuel),
    }
}

/// Strict application of a functional value.
pub fn apply_value(f: &FuncValue, a: FuncValue, fuel: &Fuel) -> (FuncValue, bool) {
    match f {
        FuncValue::Closure(c) => {
            if a.is_bot() {
                return (FuncValue::Bot, matches!(a, FuncValue::Exhausted));
            }
            eval_term(&c.body, &c.env.with(&c.param, a), fuel)
        }
        FuncValue::Exhausted => (FuncValue::Bot, true),
        _ => (FuncValue::Bot, false),
    }
}

/// Kleene iteration from `Bot`. Iterates whose equality is decidable (bottoms)
/// are compared directly. Once an iterate is a closure or a quoted process
/// the chain is rebuilt lazily: `fuel.iterations` unrollings around an
/// `Exhausted` core, which flags any evaluation that reaches it.
fn eval_fix(x: &str, body: &Term, u: &Env, fuel: &Fuel) -> (FuncValue, bool) {
    let mut v = FuncValue::Bot;
    for _ in 0..fuel.iterations {
        let (next, _) = eval_term(body, &u.with(x, v.clone()), fuel);
        let decidable = matches!(next, FuncValue::Bot | FuncValue::QProcBot);
        if decidable && next == v {
            return (v, false);
        }
        v = next;
        if !decidable {
            break;
        }
    }
    let mut v = FuncValue::Exhausted;
    let mut flag = false;
    for _ in 0..fuel.iterations {
        let (next, f) = eval_term(body, &u.with(x, v), fuel);
        flag = f;
        v = next;
    }
    (v, flag)
}
