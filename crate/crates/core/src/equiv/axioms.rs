//! Trace axioms and Conway identities checked on random monotone maps
//! between small finite posets, and the Kleene trace checked against the
//! least-post-fixed-point formulation.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::domain::{equal, get, CommValue, Port, Record};
use crate::semantics::{knaster_tarski_at, set, sfix, trace_at, Evaluated};

use super::finite::{random_monotone, FiniteMap, Poset};

type Val = CommValue;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub name: String,
    pub instances: usize,
    pub failures: usize,
    /// The first failing instance, described.
    pub example: Option<String>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

fn pair(a: &Val, b: &Val) -> Val {
    CommValue::pair(a.clone(), b.clone())
}

fn ports() -> (Port, Port, Port) {
    (Port::pos("a"), Port::pos("x"), Port::pos("b"))
}

/// `f : A × X → B × X` as a function on records `{a+, x+} → {b+, x+}`.
fn as_record_fn<'a>(f: &'a dyn Fn(&Val) -> Val) -> impl Fn(&Record) -> Evaluated + 'a {
    let (pa, px, pb) = ports();
    move |r: &Record| {
        let (b, x) = f(&pair(&get(r, &pa), &get(r, &px))).components();
        let mut out = Record::new();
        set(&mut out, pb.clone(), b);
        set(&mut out, px.clone(), x);
        Evaluated {
            out,
            diag: Default::default(),
        }
    }
}

/// Kleene trace through the evaluator's feedback loop.
fn trace(f: &dyn Fn(&Val) -> Val, x: &Poset, a: &Val) -> Result<Val, String> {
    let (pa, px, pb) = ports();
    let rf = as_record_fn(f);
    let mut input = Record::new();
    set(&mut input, pa, a.clone());
    let t = trace_at(&rf, &input, &[px], usize::MAX, x.len() + 1);
    if t.diag.exhausted {
        return Err(format!("trace at {a:?} did not stabilize"));
    }
    Ok(get(&t.out, &pb))
}

/// The meet of all post-fixed points `(b, x)`, projected to `b`.
fn trace_post_fixed(f: &dyn Fn(&Val) -> Val, b: &Poset, x: &Poset, a: &Val) -> Result<Val, String> {
    let (pa, px, pb) = ports();
    let rf = as_record_fn(f);
    let mut candidates = Vec::with_capacity(b.len() * x.len());
    for bv in &b.elems {
        for xv in &x.elems {
            let mut c = Record::new();
            set(&mut c, pb.clone(), bv.clone());
            set(&mut c, px.clone(), xv.clone());
            candidates.push(c);
        }
    }
    let mut input = Record::new();
    set(&mut input, pa, a.clone());
    knaster_tarski_at(&rf, &input, &[px], &candidates)
        .map(|(out, _)| get(&out, &pb))
        .ok_or_else(|| format!("no post-fixed point at {a:?}"))
}

/// Parametrized least fixed point of `f : A × X → X` at `a`.
fn fix(f: &dyn Fn(&Val) -> Val, x: &Poset, a: &Val) -> Result<Val, String> {
    let (v, done) = sfix(Val::Bot, |v| f(&pair(a, v)), equal, x.len() + 1);
    if done {
        Ok(v)
    } else {
        Err(format!("fixed point at {a:?} did not stabilize"))
    }
}

/// Compares two maps pointwise on `dom`.
fn agree(
    dom: &Poset,
    lhs: impl Fn(&Val) -> Result<Val, String>,
    rhs: impl Fn(&Val) -> Result<Val, String>,
) -> Result<(), String> {
    for v in &dom.elems {
        let l = lhs(v)?;
        let r = rhs(v)?;
        if !equal(&l, &r) {
            return Err(format!("at {v:?}: {l:?} vs {r:?}"));
        }
    }
    Ok(())
}

struct Gen {
    rng: ChaCha8Rng,
    posets: Vec<Arc<Poset>>,
}

impl Gen {
    fn new(seed: u64) -> Self {
        Gen {
            rng: ChaCha8Rng::seed_from_u64(seed),
            posets: Poset::standard(),
        }
    }

    /// A random standard poset with at most `max` elements.
    fn poset(&mut self, max: usize) -> Arc<Poset> {
        let fit: Vec<&Arc<Poset>> = self.posets.iter().filter(|p| p.len() <= max).collect();
        (*fit.choose(&mut self.rng).expect("small poset")).clone()
    }

    fn map(&mut self, dom: &Arc<Poset>, cod: &Arc<Poset>) -> FiniteMap {
        random_monotone(dom, cod, &mut self.rng)
    }
}

fn prod(a: &Arc<Poset>, b: &Arc<Poset>) -> Arc<Poset> {
    Arc::new(a.product(b))
}

type Instance = fn(&mut Gen) -> Result<(), String>;

fn left_tightening(g: &mut Gen) -> Result<(), String> {
    let (a0, a, x, b) = (g.poset(7), g.poset(7), g.poset(5), g.poset(7));
    let h = g.map(&a0, &a);
    let f = g.map(&prod(&a, &x), &prod(&b, &x));
    let fh = |v: &Val| {
        let (a0v, xv) = v.components();
        f.apply(&pair(&h.apply(&a0v), &xv))
    };
    agree(&a0, |v| trace(&fh, &x, v), |v| trace(&|w| f.apply(w), &x, &h.apply(v)))
}

fn right_tightening(g: &mut Gen) -> Result<(), String> {
    let (a, x, b, b1) = (g.poset(7), g.poset(5), g.poset(7), g.poset(7));
    let f = g.map(&prod(&a, &x), &prod(&b, &x));
    let h = g.map(&b, &b1);
    let hf = |v: &Val| {
        let (bv, xv) = f.apply(v).components();
        pair(&h.apply(&bv), &xv)
    };
    agree(&a, |v| trace(&hf, &x, v), |v| Ok(h.apply(&trace(&|w| f.apply(w), &x, v)?)))
}

fn sliding(g: &mut Gen) -> Result<(), String> {
    let (a, x, y, b) = (g.poset(7), g.poset(5), g.poset(5), g.poset(7));
    let f = g.map(&prod(&a, &x), &prod(&b, &y));
    let k = g.map(&y, &x);
    let after = |v: &Val| {
        let (bv, yv) = f.apply(v).components();
        pair(&bv, &k.apply(&yv))
    };
    let before = |v: &Val| {
        let (av, yv) = v.components();
        f.apply(&pair(&av, &k.apply(&yv)))
    };
    agree(&a, |v| trace(&after, &x, v), |v| trace(&before, &y, v))
}

fn vanishing_unit(g: &mut Gen) -> Result<(), String> {
    let unit = g.posets[0].clone();
    let (a, b) = (g.poset(7), g.poset(7));
    let f = g.map(&prod(&a, &unit), &prod(&b, &unit));
    agree(
        &a,
        |v| trace(&|w| f.apply(w), &unit, v),
        |v| Ok(f.apply(&pair(v, &Val::Bot)).components().0),
    )
}

fn vanishing_product(g: &mut Gen) -> Result<(), String> {
    let (a, x, y, b) = (g.poset(5), g.poset(3), g.poset(3), g.poset(5));
    let xy = prod(&x, &y);
    let f = g.map(&prod(&a, &xy), &prod(&b, &xy));
    // ((a, x), y) ↦ ((b, x'), y')
    let regrouped = |v: &Val| {
        let (ax, yv) = v.components();
        let (av, xv) = ax.components();
        let (bv, x1y1) = f.apply(&pair(&av, &pair(&xv, &yv))).components();
        let (x1, y1) = x1y1.components();
        pair(&pair(&bv, &x1), &y1)
    };
    let inner = |v: &Val| trace(&regrouped, &y, v).expect("inner trace");
    agree(&a, |v| trace(&|w| f.apply(w), &xy, v), |v| trace(&inner, &x, v))
}

fn superposing(g: &mut Gen) -> Result<(), String> {
    let (a, x, b, c, d) = (g.poset(5), g.poset(5), g.poset(5), g.poset(5), g.poset(5));
    let f = g.map(&prod(&a, &x), &prod(&b, &x));
    let k = g.map(&c, &d);
    let beside = |v: &Val| {
        let (ac, xv) = v.components();
        let (av, cv) = ac.components();
        let (bv, x1) = f.apply(&pair(&av, &xv)).components();
        pair(&pair(&bv, &k.apply(&cv)), &x1)
    };
    agree(
        &prod(&a, &c),
        |v| trace(&beside, &x, v),
        |v| {
            let (av, cv) = v.components();
            Ok(pair(&trace(&|w| f.apply(w), &x, &av)?, &k.apply(&cv)))
        },
    )
}

/// `Tr(σ) = id`, and also `Tr(σ) ∘ h = h` for a random `h` into X.
fn yanking(g: &mut Gen) -> Result<(), String> {
    let (x, a) = (g.poset(7), g.poset(7));
    let h = g.map(&a, &x);
    let swap = |v: &Val| {
        let (p, q) = v.components();
        pair(&q, &p)
    };
    agree(&x, |v| trace(&swap, &x, v), |v| Ok(v.clone()))?;
    agree(&a, |v| trace(&swap, &x, &h.apply(v)), |v| Ok(h.apply(v)))
}

fn conway_naturality(g: &mut Gen) -> Result<(), String> {
    let (a0, a, x) = (g.poset(7), g.poset(7), g.poset(7));
    let h = g.map(&a0, &a);
    let f = g.map(&prod(&a, &x), &x);
    let fh = |v: &Val| {
        let (a0v, xv) = v.components();
        f.apply(&pair(&h.apply(&a0v), &xv))
    };
    agree(&a0, |v| fix(&fh, &x, v), |v| fix(&|w| f.apply(w), &x, &h.apply(v)))
}

fn conway_fixed_point(g: &mut Gen) -> Result<(), String> {
    let (a, x) = (g.poset(7), g.poset(7));
    let f = g.map(&prod(&a, &x), &x);
    agree(
        &a,
        |v| fix(&|w| f.apply(w), &x, v),
        |v| Ok(f.apply(&pair(v, &fix(&|w| f.apply(w), &x, v)?))),
    )
}

fn conway_dinaturality(g: &mut Gen) -> Result<(), String> {
    let (a, x, y) = (g.poset(5), g.poset(7), g.poset(7));
    let f = g.map(&prod(&a, &y), &x);
    let k = g.map(&prod(&a, &x), &y);
    let fk = |v: &Val| {
        let (av, xv) = v.components();
        f.apply(&pair(&av, &k.apply(&pair(&av, &xv))))
    };
    let kf = |v: &Val| {
        let (av, yv) = v.components();
        k.apply(&pair(&av, &f.apply(&pair(&av, &yv))))
    };
    agree(&a, |v| fix(&fk, &x, v), |v| Ok(f.apply(&pair(v, &fix(&kf, &y, v)?))))
}

fn conway_diagonal(g: &mut Gen) -> Result<(), String> {
    let (a, x) = (g.poset(5), g.poset(5));
    let f = g.map(&prod(&a, &prod(&x, &x)), &x);
    // (a, x) ↦ fix x'. f(a, (x, x'))
    let inner = |v: &Val| {
        let (av, xv) = v.components();
        let step = |w: &Val| {
            let (_, x1) = w.components();
            f.apply(&pair(&av, &pair(&xv, &x1)))
        };
        fix(&step, &x, &av).expect("inner fixed point")
    };
    let diag = |v: &Val| {
        let (av, xv) = v.components();
        f.apply(&pair(&av, &pair(&xv, &xv)))
    };
    agree(&a, |v| fix(&inner, &x, v), |v| fix(&diag, &x, v))
}

const AXIOMS: &[(&str, Instance)] = &[
    ("left tightening", left_tightening),
    ("right tightening", right_tightening),
    ("sliding", sliding),
    ("vanishing (unit)", vanishing_unit),
    ("vanishing (product)", vanishing_product),
    ("superposing", superposing),
    ("yanking", yanking),
    ("Conway naturality", conway_naturality),
    ("Conway fixed point", conway_fixed_point),
    ("Conway parametrized dinaturality", conway_dinaturality),
    ("Conway diagonal", conway_diagonal),
];

fn run_instances(name: &str, seed: u64, n: usize, inst: Instance) -> AxiomReport {
    let mut g = Gen::new(seed);
    let mut failures = 0;
    let mut example = None;
    for i in 0..n {
        if let Err(e) = inst(&mut g) {
            failures += 1;
            example.get_or_insert_with(|| format!("instance {i}: {e}"));
        }
    }
    AxiomReport {
        name: name.to_string(),
        instances: n,
        failures,
        example,
    }
}

/// Every trace axiom and Conway identity on `per_axiom` random instances.
/// Each axiom draws from its own stream derived from `seed`.
pub fn trace_axiom_suite(seed: u64, per_axiom: usize) -> Vec<AxiomReport> {
    AXIOMS
        .iter()
        .enumerate()
        .map(|(i, (name, inst))| run_instances(name, seed.wrapping_add(i as u64 * 0x9e37_79b9), per_axiom, *inst))
        .collect()
}

/// Kleene iteration against the meet of post-fixed points on `maps` random
/// maps `A × X → B × X`, every factor at most 5 elements.
pub fn oracle_suite(seed: u64, maps: usize) -> AxiomReport {
    fn one(g: &mut Gen) -> Result<(), String> {
        let (a, x, b) = (g.poset(5), g.poset(5), g.poset(5));
        let f = g.map(&prod(&a, &x), &prod(&b, &x));
        let fun = |w: &Val| f.apply(w);
        agree(&a, |v| trace(&fun, &x, v), |v| trace_post_fixed(&fun, &b, &x, v))
    }
    run_instances("Kleene trace = least post-fixed point", seed, maps, one)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn swap_trace_is_identity_on_a_chain() {
        let x = Poset::standard()[3].clone();
        let swap = |v: &Val| {
            let (p, q) = v.components();
            pair(&q, &p)
        };
        for v in &x.elems {
            assert_eq!(trace(&swap, &x, v).unwrap(), v.clone());
        }
    }

    #[test]
    fn broken_trace_is_caught() {
        // Feedback that always returns its input but drops the parameter
        // violates yanking's second half once composed with a constant.
        let x = Poset::standard()[3].clone();
        let top = x.elems.last().unwrap().clone();
        let wrong = |v: &Val| {
            let (_, q) = v.components();
            pair(&top, &q)
        };
        assert!(agree(&x, |v| trace(&wrong, &x, v), |v| Ok(v.clone())).is_err());
    }

    #[test]
    fn suites_pass_small() {
        for r in trace_axiom_suite(1, 10) {
            assert!(r.passed(), "{r:?}");
        }
        assert!(oracle_suite(1, 20).passed());
    }

    #[test]
    fn rng_draws_vary() {
        let mut g = Gen::new(3);
        let sizes: std::collections::BTreeSet<usize> = (0..50).map(|_| g.poset(9).len()).collect();
        assert!(sizes.len() > 3);
    }
}
