use std::sync::Arc;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use sill::domain::{
    chain_height, conforms, enumerate, equal, glb2, height, leq, lub2, parse_value, render_value, truncate,
    CommValue, ValueRegistry,
};
use sill::equiv::{random_monotone, Poset};
use sill::syntax::{parse_process, parse_type, process_to_string, type_to_string, Polarity, SessionType};

fn unit() -> SessionType {
    SessionType::Unit
}

/// A fixed spread of closed types covering every connective.
fn sample_types() -> Vec<SessionType> {
    vec![
        unit(),
        SessionType::bits(),
        SessionType::down(SessionType::up(unit())),
        SessionType::tensor(unit(), unit()),
        SessionType::lolly(unit(), SessionType::up(unit())),
        SessionType::plus([("j", unit()), ("k", SessionType::tensor(unit(), unit()))]),
        SessionType::with([("j", SessionType::up(unit())), ("k", SessionType::up(unit()))]),
        SessionType::rec(
            "s",
            SessionType::with([("h", SessionType::up(unit())), ("t", SessionType::var("s"))]),
        ),
    ]
}

fn polarity() -> impl Strategy<Value = Polarity> {
    prop_oneof![Just(Polarity::Positive), Just(Polarity::Negative)]
}

/// A type, a polarity and the values of that type up to height 3.
fn domain() -> impl Strategy<Value = (SessionType, Polarity, Vec<CommValue>)> {
    (0..sample_types().len(), polarity()).prop_map(|(i, p)| {
        let a = sample_types()[i].clone();
        let vs = enumerate(&a, p, 3).expect("closed type");
        (a, p, vs)
    })
}

fn three_values() -> impl Strategy<Value = (SessionType, Polarity, Vec<CommValue>, [usize; 3])> {
    domain().prop_flat_map(|(a, p, vs)| {
        let n = vs.len();
        (Just(a), Just(p), Just(vs), [0..n, 0..n, 0..n])
    })
}

#[test]
fn bit_streams_double_per_level() {
    for d in 0..8 {
        let n = enumerate(&SessionType::bits(), Polarity::Positive, d).unwrap().len();
        assert_eq!(n, (1 << (d + 1)) - 1, "height {d}");
    }
}

#[test]
fn unit_domains() {
    assert_eq!(enumerate(&unit(), Polarity::Positive, 0).unwrap().len(), 2);
    assert_eq!(enumerate(&unit(), Polarity::Negative, 5).unwrap().len(), 1);
}

proptest! {
    #[test]
    fn enumerated_values_conform((a, p, vs) in domain()) {
        for v in &vs {
            prop_assert!(conforms(v, &a, p), "{v:?}");
            prop_assert!(height(v) <= 3);
        }
        for (i, v) in vs.iter().enumerate() {
            prop_assert!(!vs[..i].iter().any(|w| equal(v, w)), "duplicate {v:?}");
        }
    }

    #[test]
    fn order_is_partial((_, _, vs, [i, j, k]) in three_values()) {
        let (u, v, w) = (&vs[i], &vs[j], &vs[k]);
        prop_assert!(leq(u, u));
        if leq(u, v) && leq(v, u) {
            prop_assert!(equal(u, v));
        }
        if leq(u, v) && leq(v, w) {
            prop_assert!(leq(u, w));
        }
    }

    #[test]
    fn lub_is_least_upper_bound((_, _, vs, [i, j, _]) in three_values()) {
        let (u, v) = (&vs[i], &vs[j]);
        let bounds: Vec<&CommValue> = vs.iter().filter(|w| leq(u, w) && leq(v, w)).collect();
        match lub2(u, v) {
            Ok(l) => {
                prop_assert!(leq(u, &l) && leq(v, &l));
                for b in bounds {
                    prop_assert!(leq(&l, b));
                }
            }
            Err(_) => prop_assert!(bounds.is_empty()),
        }
    }

    #[test]
    fn glb_is_greatest_lower_bound((_, _, vs, [i, j, _]) in three_values()) {
        let (u, v) = (&vs[i], &vs[j]);
        let g = glb2(u, v);
        prop_assert!(leq(&g, u) && leq(&g, v));
        for w in vs.iter().filter(|w| leq(w, u) && leq(w, v)) {
            prop_assert!(leq(w, &g));
        }
    }

    #[test]
    fn truncation_is_a_deflationary_projection((_, _, vs, [i, _, _]) in three_values(), d in 0usize..4) {
        let v = &vs[i];
        let t = truncate(v, d);
        prop_assert!(leq(&t, v));
        prop_assert!(equal(&truncate(&t, d), &t));
        prop_assert!(height(&t) <= d);
        if height(v) <= d {
            prop_assert!(equal(&t, v));
        }
    }

    #[test]
    fn notation_round_trips((a, p, vs, [i, _, _]) in three_values()) {
        let reg = ValueRegistry::new();
        let text = render_value(&vs[i], &a, p, &reg);
        let back = parse_value(&text, &a, p, &reg).expect("own output parses");
        prop_assert!(equal(&back, &vs[i]), "{text}");
    }

    #[test]
    fn random_maps_are_monotone(seed in any::<u64>(), i in 0usize..7, j in 0usize..7) {
        let ps = Poset::standard();
        let dom = Arc::new(ps[i].product(&ps[j]));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_monotone(&dom, &ps[j], &mut rng);
        prop_assert!(f.is_monotone());
    }
}

/// Longest strictly ascending chain, counted in steps.
fn longest_chain(vs: &[CommValue]) -> usize {
    let mut order: Vec<usize> = (0..vs.len()).collect();
    order.sort_by_key(|&i| vs.iter().filter(|w| leq(w, &vs[i])).count());
    let mut best = vec![0usize; vs.len()];
    for (n, &i) in order.iter().enumerate() {
        for &j in &order[..n] {
            if leq(&vs[j], &vs[i]) && !equal(&vs[j], &vs[i]) {
                best[i] = best[i].max(best[j] + 1);
            }
        }
    }
    best.into_iter().max().unwrap_or(0)
}

#[test]
fn chain_height_bounds_actual_chains() {
    for a in sample_types() {
        for p in [Polarity::Positive, Polarity::Negative] {
            for d in 0..3 {
                let vs = enumerate(&a, p, d).unwrap();
                let actual = longest_chain(&vs);
                let bound = chain_height(&a, p, d);
                assert!(actual <= bound, "{a} at {p} height {d}: chain {actual} > bound {bound}");
            }
        }
    }
}

fn arb_type() -> impl Strategy<Value = SessionType> {
    let leaf = prop_oneof![Just(unit()), Just(SessionType::var("s"))];
    leaf.prop_recursive(4, 24, 3, |inner| {
        let labels = prop::collection::btree_map(prop::sample::select(vec!["a", "b", "c"]), inner.clone(), 1..3);
        prop_oneof![
            inner.clone().prop_map(SessionType::down),
            inner.clone().prop_map(SessionType::up),
            (inner.clone(), inner.clone()).prop_map(|(b, a)| SessionType::tensor(b, a)),
            (inner.clone(), inner.clone()).prop_map(|(b, a)| SessionType::lolly(b, a)),
            labels.clone().prop_map(SessionType::plus),
            labels.prop_map(SessionType::with),
            inner.prop_map(|a| SessionType::rec("s", a)),
        ]
    })
}

proptest! {
    #[test]
    fn types_print_and_parse_back(a in arb_type()) {
        let text = type_to_string(&a);
        prop_assert_eq!(parse_type(&text).expect("printed type parses"), a, "{}", text);
    }
}

#[test]
fn processes_print_and_parse_back() {
    let sources = [
        "close c",
        "wait a; close c",
        "recv b chan a; wait a; wait b; close c",
        "case a { j => recv a shift; close a | k => recv a shift; close a }",
        "send c unfold; c.1; c <- flip <- d",
        "cut a : 1 * 1 { cut x : 1 { close x }; send a chan x; close a }; fwd c a",
        "recv d unfold; case d { 0 => send c unfold; c.1; c <- flip <- d | 1 => send c unfold; c.0; c <- flip <- d }",
    ];
    for src in sources {
        let p = parse_process(src).unwrap_or_else(|e| panic!("{src}: {e}"));
        let printed = process_to_string(&p);
        let again = parse_process(&printed).unwrap_or_else(|e| panic!("{printed}: {e}"));
        assert_eq!(again, p, "{printed}");
    }
}
