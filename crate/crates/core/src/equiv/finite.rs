//! Small finite posets drawn from enumerated domains, and monotone maps
//! between them.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::domain::{enumerate, equal, leq, CommValue};
use crate::syntax::{Polarity, SessionType};

/// A finite poset of communication values, ordered by `leq`.
#[derive(Debug, Clone)]
pub struct Poset {
    pub name: String,
    pub elems: Vec<CommValue>,
    le: Vec<Vec<bool>>,
}

impl Poset {
    pub fn new(name: &str, elems: Vec<CommValue>) -> Self {
        let le = elems
            .iter()
            .map(|x| elems.iter().map(|y| leq(x, y)).collect())
            .collect();
        Poset {
            name: name.to_string(),
            elems,
            le,
        }
    }

    /// ⟦A⟧ᵖ cut off at height `depth`.
    pub fn of_type(name: &str, a: &SessionType, p: Polarity, depth: usize) -> Self {
        Poset::new(name, enumerate(a, p, depth).expect("closed session type"))
    }

    /// Products are pairs; `(⊥, ⊥)` is `⊥`.
    pub fn product(&self, other: &Poset) -> Poset {
        let mut elems = Vec::with_capacity(self.len() * other.len());
        for x in &self.elems {
            for y in &other.elems {
                elems.push(CommValue::pair(x.clone(), y.clone()));
            }
        }
        Poset::new(&format!("{}×{}", self.name, other.name), elems)
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn le(&self, i: usize, j: usize) -> bool {
        self.le[i][j]
    }

    pub fn index_of(&self, v: &CommValue) -> Option<usize> {
        self.elems.iter().position(|e| equal(e, v))
    }

    pub fn bottom(&self) -> usize {
        (0..self.len())
            .find(|&i| (0..self.len()).all(|j| self.le(i, j)))
            .expect("pointed poset")
    }

    /// The small domains used by the axiom suites, at most 7 elements each.
    pub fn standard() -> Vec<Arc<Poset>> {
        use Polarity::{Negative as Neg, Positive as Pos};
        let unit = SessionType::Unit;
        let labels = SessionType::plus([("j", unit.clone()), ("k", unit.clone())]);
        vec![
            Poset::of_type("1⁻", &unit, Neg, 0),
            Poset::of_type("1⁺", &unit, Pos, 0),
            Poset::of_type("bits¹", &SessionType::bits(), Pos, 1),
            Poset::of_type("↓↑1", &SessionType::down(SessionType::up(unit.clone())), Pos, 2),
            Poset::of_type("1⊗1", &SessionType::tensor(unit.clone(), unit.clone()), Pos, 1),
            Poset::of_type("+{j,k}", &labels, Pos, 1),
            Poset::of_type("bits²", &SessionType::bits(), Pos, 2),
        ]
        .into_iter()
        .map(Arc::new)
        .collect()
    }
}

/// A monotone map given by its table on element indices.
#[derive(Debug, Clone)]
pub struct FiniteMap {
    pub dom: Arc<Poset>,
    pub cod: Arc<Poset>,
    pub table: Vec<usize>,
}

impl FiniteMap {
    pub fn apply(&self, v: &CommValue) -> CommValue {
        let i = self
            .dom
            .index_of(v)
            .unwrap_or_else(|| panic!("{v:?} is not in {}", self.dom.name));
        self.cod.elems[self.table[i]].clone()
    }

    pub fn is_monotone(&self) -> bool {
        let n = self.dom.len();
        (0..n).all(|i| (0..n).all(|j| !self.dom.le(i, j) || self.cod.le(self.table[i], self.table[j])))
    }
}

/// A random monotone map. Elements are visited bottom-up; each picks its
/// image among the upper bounds of the images below it, preferring a
/// minimal one half of the time. Falls back to a constant map if the
/// codomain lacks the needed upper bounds.
pub fn random_monotone<R: Rng>(dom: &Arc<Poset>, cod: &Arc<Poset>, rng: &mut R) -> FiniteMap {
    let n = dom.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| (0..n).filter(|&j| dom.le(j, i)).count());
    'attempt: for _ in 0..16 {
        let mut table = vec![usize::MAX; n];
        for &i in &order {
            let below: Vec<usize> = (0..n)
                .filter(|&j| j != i && dom.le(j, i))
                .map(|j| table[j])
                .collect();
            let ubs: Vec<usize> = (0..cod.len())
                .filter(|&z| below.iter().all(|&b| cod.le(b, z)))
                .collect();
            if ubs.is_empty() {
                continue 'attempt;
            }
            let pick = if rng.gen_bool(0.5) {
                let minimal: Vec<usize> = ubs
                    .iter()
                    .copied()
                    .filter(|&z| ubs.iter().all(|&w| w == z || !cod.le(w, z)))
                    .collect();
                *minimal.choose(rng).expect("nonempty")
            } else {
                *ubs.choose(rng).expect("nonempty")
            };
            table[i] = pick;
        }
        return FiniteMap {
            dom: dom.clone(),
            cod: cod.clone(),
            table,
        };
    }
    let z = rng.gen_range(0..cod.len());
    FiniteMap {
        dom: dom.clone(),
        cod: cod.clone(),
        table: vec![z; n],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn standard_sizes() {
        let sizes: Vec<usize> = Poset::standard().iter().map(|p| p.len()).collect();
        assert_eq!(sizes, vec![1, 2, 3, 3, 5, 5, 7]);
    }

    #[test]
    fn random_maps_are_monotone() {
        let ps = Poset::standard();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for a in &ps {
            for b in &ps {
                for _ in 0..20 {
                    assert!(random_monotone(a, b, &mut rng).is_monotone());
                }
            }
        }
    }

    #[test]
    fn products_are_componentwise() {
        let ps = Poset::standard();
        let p = ps[1].product(&ps[3]);
        assert_eq!(p.len(), 6);
        for i in 0..p.len() {
            for j in 0..p.len() {
                let (a, b) = p.elems[i].components();
                let (c, d) = p.elems[j].components();
                assert_eq!(p.le(i, j), leq(&a, &c) && leq(&b, &d));
            }
        }
    }
}
