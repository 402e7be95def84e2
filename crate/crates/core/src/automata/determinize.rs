use std::collections::{HashMap, VecDeque};

use fixedbitset::FixedBitSet;

use crate::graph::Edge;

use super::{AutomatonError, CoBuchiAutomaton, Kind};

pub const DEFAULT_STATE_BUDGET: usize = 20_000;

/// Breakpoint construction. States are pairs `(S, O)`: the reachable set
/// and the states still owing a co-Büchi-free run since the last breakpoint.
/// A transition is co-Büchi exactly when `O` empties and is reset to `S`.
pub fn determinize_breakpoint(a: &CoBuchiAutomaton, budget: usize) -> Result<CoBuchiAutomaton, AutomatonError> {
    let n = a.state_count();
    let letters: Vec<_> = a.alphabet.iter().collect();
    let post = |set: &FixedBitSet, c, normal_only: bool| {
        let mut out = FixedBitSet::with_capacity(n);
        for q in set.ones() {
            for (k, q2) in a.successors(q, c) {
                if !normal_only || k == Kind::Normal {
                    out.insert(q2);
                }
            }
        }
        out
    };

    let mut start = FixedBitSet::with_capacity(n);
    start.insert(a.initial);
    let start = (start.clone(), start);
    let mut index: HashMap<(FixedBitSet, FixedBitSet), usize> = HashMap::new();
    index.insert(start.clone(), 0);
    let mut states = vec![start];
    let mut queue = VecDeque::from([0]);
    let mut edges = Vec::new();
    while let Some(i) = queue.pop_front() {
        let (s, o) = states[i].clone();
        for &c in &letters {
            let s2 = post(&s, c, false);
            let mut o2 = post(&o, c, true);
            o2.intersect_with(&s2);
            let kind = if o2.is_clear() {
                o2 = s2.clone();
                Kind::CoBuchi
            } else {
                Kind::Normal
            };
            let key = (s2, o2);
            let j = match index.get(&key) {
                Some(&j) => j,
                None => {
                    if states.len() >= budget {
                        return Err(AutomatonError::StateBudget(budget));
                    }
                    let j = states.len();
                    index.insert(key.clone(), j);
                    states.push(key);
                    queue.push_back(j);
                    j
                }
            };
            edges.push(Edge::new(i, (c, kind), j));
        }
    }
    CoBuchiAutomaton::new(a.alphabet.clone(), states.len(), edges, 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::transition;
    use crate::graph::{Alphabet, Letter};
    use crate::objectives::UpWord;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn finitely_many_b() -> CoBuchiAutomaton {
        let ts = [
            transition(0, 'a', Kind::Normal, 0),
            transition(0, 'b', Kind::CoBuchi, 0),
            transition(0, 'a', Kind::Normal, 1),
            transition(1, 'a', Kind::Normal, 1),
            transition(1, 'b', Kind::CoBuchi, 0),
        ];
        CoBuchiAutomaton::new(Alphabet::symbols("ab"), 2, ts, 0).unwrap()
    }

    #[test]
    fn agrees_with_closed_form() {
        let a = finitely_many_b();
        let d = determinize_breakpoint(&a, DEFAULT_STATE_BUDGET).unwrap();
        assert!(d.is_deterministic());
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..500 {
            let w = UpWord::random(&mut rng, a.alphabet(), 4, 5);
            let oracle = !w.period().contains(&Letter::Sym('b'));
            assert_eq!(d.run(&w).unwrap().accepting(), oracle, "{w}");
            assert_eq!(a.accepts(&w), oracle, "{w}");
        }
    }

    #[test]
    fn budget_is_enforced() {
        assert_eq!(determinize_breakpoint(&finitely_many_b(), 1), Err(AutomatonError::StateBudget(1)));
    }
}
