//! The flip case study: `flip ∘ flip` against `fwd`.

use std::collections::BTreeMap;

use crate::domain::{enumerate, get, CommValue, Port, Record, ValueRegistry};
use crate::semantics::{proc_denotation, set, Fuel};
use crate::syntax::{parse_program, Polarity, SessionType};
use crate::typecheck::check_program;

use super::{check_equiv, diagnostics_over, Interface, Strategy, Verdict};

pub const FLIP_SOURCE: &str = include_str!("../../fixtures/flip.sill");

#[derive(Debug, Clone)]
pub struct FlipReport {
    pub depth: usize,
    pub verdict: Verdict,
    /// Number of inputs whose feedback chain stabilized after n rounds.
    pub rounds: BTreeMap<usize, usize>,
    /// How many instances of the three per-constructor laws were checked.
    pub fd_checked: usize,
    pub fd_failures: Vec<String>,
}

impl FlipReport {
    pub fn max_rounds(&self) -> usize {
        self.rounds.keys().copied().max().unwrap_or(0)
    }

    pub fn passed(&self) -> bool {
        self.verdict.is_equivalent() && self.fd_failures.is_empty()
    }

    pub fn summary(&self) -> String {
        format!(
            "{}; chain stabilized at n = {} on every input",
            self.verdict.label(),
            self.max_rounds()
        )
    }
}

/// Checks `flipflip ≡ copy` on every input of height at most `depth`,
/// records the feedback rounds of `flipflip` per input, and checks
/// `fd(⊥) = ⊥`, `fd(k·α) = k·fd(α)` for every `α` of height below `depth`,
/// where `fd` is the `flipflip` output.
pub fn demo_flip(depth: usize, fuel: Option<Fuel>, strategy: Strategy) -> FlipReport {
    let program = parse_program(FLIP_SOURCE).expect("flip fixture parses");
    let program = check_program(&program).expect("flip fixture checks");
    let fuel = fuel.unwrap_or_else(|| Fuel::new(depth));
    let flipflip = proc_denotation(&program, "flipflip", &fuel).expect("flipflip");
    let copy = proc_denotation(&program, "copy", &fuel).expect("copy");
    let bits = SessionType::bits();
    let iface = Interface::new(vec![("a", bits.clone())], ("b", bits.clone()));
    let reg = ValueRegistry::new();
    let verdict = check_equiv(&flipflip, &copy, &iface, depth, &reg, strategy).expect("bits enumerate");

    let mut rounds = BTreeMap::new();
    for (_, d) in diagnostics_over(&flipflip, &iface, depth, &reg, strategy).expect("bits enumerate") {
        *rounds.entry(d.rounds).or_insert(0) += 1;
    }

    let fd = |a: &CommValue| {
        let mut r = Record::new();
        set(&mut r, Port::pos("a"), a.clone());
        get(&flipflip.apply(&r).out, &Port::pos("b"))
    };
    let mut fd_checked = 1;
    let mut fd_failures = Vec::new();
    if !fd(&CommValue::Bot).is_bot() {
        fd_failures.push("fd(⊥) ≠ ⊥".to_string());
    }
    let alphas = enumerate(&bits, Polarity::Positive, depth.saturating_sub(1)).expect("bits enumerate");
    for alpha in &alphas {
        let rest = fd(alpha);
        for k in ["0", "1"] {
            fd_checked += 1;
            let lhs = fd(&CommValue::fold(CommValue::tag(k, alpha.clone())));
            let rhs = CommValue::fold(CommValue::tag(k, rest.clone()));
            if !crate::domain::equal(&lhs, &rhs) {
                fd_failures.push(format!("fd({k}·α) ≠ {k}·fd(α) at α = {alpha:?}"));
            }
        }
    }
    FlipReport {
        depth,
        verdict,
        rounds,
        fd_checked,
        fd_failures,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn depth_three() {
        let r = demo_flip(3, None, Strategy::Sequential);
        assert!(r.passed(), "{r:?}");
        // 15 inputs: ⊥ settles in one round, the rest in two.
        assert_eq!(r.rounds, BTreeMap::from([(1, 1), (2, 14)]));
        assert_eq!(r.fd_checked, 1 + 2 * 7);
        assert_eq!(r.summary(), "equivalent; chain stabilized at n = 2 on every input");
    }
}
