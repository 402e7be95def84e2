use std::collections::{HashMap, VecDeque};

use thiserror::Error;

use crate::graph::{Edge, Graph, Morphism};

use super::{CoBuchiAutomaton, Kind, Resolver, ResolverError, Transition};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum UnionError {
    #[error("union of no automata")]
    Empty,
    #[error("part {0} has a different alphabet")]
    Alphabet(usize),
    #[error("part {0} is not saturated")]
    NotSaturated(usize),
    #[error("part {0} has no order")]
    Unordered(usize),
    #[error("part {part} is not monotone: {witness:?}")]
    NotMonotone { part: usize, witness: Transition },
    #[error("expected one resolver per part")]
    ResolverCount,
    #[error(transparent)]
    Resolver(#[from] ResolverError),
}

/// The union automaton together with where each part's states begin.
#[derive(Clone, Debug)]
pub struct UnionAutomaton {
    pub automaton: CoBuchiAutomaton,
    pub offsets: Vec<usize>,
}

/// Disjoint union of saturated monotone parts, with normal transitions on
/// every letter from part `i` down to part `j < i`, and part `i` ranked
/// above part `j`.
pub fn union_automaton(parts: &[CoBuchiAutomaton]) -> Result<UnionAutomaton, UnionError> {
    let first = parts.first().ok_or(UnionError::Empty)?;
    let mut offsets = Vec::with_capacity(parts.len());
    let mut total = 0;
    for (i, p) in parts.iter().enumerate() {
        if p.alphabet != first.alphabet {
            return Err(UnionError::Alphabet(i));
        }
        if !p.is_saturated() {
            return Err(UnionError::NotSaturated(i));
        }
        match p.check_monotone() {
            None => return Err(UnionError::Unordered(i)),
            Some(Err(witness)) => return Err(UnionError::NotMonotone { part: i, witness }),
            Some(Ok(())) => {}
        }
        offsets.push(total);
        total += p.state_count();
    }

    let mut edges = Vec::new();
    let mut rank = vec![0; total];
    for (i, p) in parts.iter().enumerate() {
        let off = offsets[i];
        edges.extend(p.transitions().iter().map(|e| Edge::new(e.src + off, e.label, e.dst + off)));
        let mut by_rank: Vec<usize> = p.graph.vertices().collect();
        let r = p.order.as_ref().expect("checked");
        by_rank.sort_by_key(|&q| r[q]);
        for (pos, q) in by_rank.into_iter().enumerate() {
            rank[off + q] = off + pos;
        }
    }
    for q in 0..total {
        for c in first.alphabet.iter() {
            for q2 in 0..total {
                edges.push(Edge::new(q, (c, Kind::CoBuchi), q2));
            }
        }
    }
    for i in 0..parts.len() {
        for j in 0..i {
            for q in offsets[i]..offsets[i] + parts[i].state_count() {
                for q2 in offsets[j]..offsets[j] + parts[j].state_count() {
                    for c in first.alphabet.iter() {
                        edges.push(Edge::new(q, (c, Kind::Normal), q2));
                    }
                }
            }
        }
    }
    let graph = Graph::new(total, edges);
    let automaton = CoBuchiAutomaton {
        alphabet: first.alphabet.clone(),
        graph,
        initial: first.initial,
        order: Some(rank),
    };
    Ok(UnionAutomaton { automaton, offsets })
}

/// The round-robin schedule over `k` parts: blocks `0`, `0 1`, …,
/// `0 … k−1`, then `0 … k−1` forever. Positions past the triangle wrap
/// back onto its last block.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Schedule {
    k: usize,
}

impl Schedule {
    pub fn new(k: usize) -> Self {
        assert!(k > 0, "schedule over no parts");
        Schedule { k }
    }

    fn triangle(&self) -> usize {
        self.k * (self.k - 1) / 2
    }

    /// Number of distinct positions.
    pub fn len(&self) -> usize {
        self.triangle() + self.k
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// The part indicated at position `p`.
    pub fn part(&self, p: usize) -> usize {
        let mut p = p;
        let mut block = 1;
        while p >= block && block < self.k {
            p -= block;
            block += 1;
        }
        p
    }

    pub fn next(&self, p: usize) -> usize {
        if p + 1 < self.len() {
            p + 1
        } else {
            self.triangle()
        }
    }
}

/// The first `len` entries of the schedule.
pub fn round_robin_schedule(k: usize, len: usize) -> Vec<usize> {
    let s = Schedule::new(k);
    let mut out = Vec::with_capacity(len);
    let mut p = 0;
    for _ in 0..len {
        out.push(s.part(p));
        p = s.next(p);
    }
    out
}

/// A state of [`round_robin_product`]: the component states and the
/// schedule position.
pub type ProductState = (Vec<usize>, usize);

/// Runs deterministic automata in lockstep. A step is normal when the
/// currently indicated component steps normally; otherwise it is co-Büchi
/// and the schedule advances. Accepts the union of the languages.
pub fn round_robin_product(parts: &[CoBuchiAutomaton]) -> (CoBuchiAutomaton, Vec<ProductState>) {
    let first = parts.first().expect("at least one part");
    let schedule = Schedule::new(parts.len());
    let start: ProductState = (parts.iter().map(|p| p.initial).collect(), 0);
    let mut index = HashMap::from([(start.clone(), 0)]);
    let mut states = vec![start];
    let mut queue = VecDeque::from([0]);
    let mut edges = Vec::new();
    while let Some(i) = queue.pop_front() {
        let (qs, p) = states[i].clone();
        for c in first.alphabet.iter() {
            let steps: Vec<(Kind, usize)> = parts.iter().zip(&qs).map(|(a, &q)| a.step(q, c)).collect();
            let kind = steps[schedule.part(p)].0;
            let p2 = if kind == Kind::Normal { p } else { schedule.next(p) };
            let key = (steps.iter().map(|s| s.1).collect(), p2);
            let j = *index.entry(key.clone()).or_insert_with(|| {
                states.push(key);
                queue.push_back(states.len() - 1);
                states.len() - 1
            });
            edges.push(Edge::new(i, (c, kind), j));
        }
    }
    let a = CoBuchiAutomaton::new(first.alphabet.clone(), states.len(), edges, 0).expect("complete and reachable");
    (a, states)
}

/// Resolver for [`union_automaton`] built from one resolver per part: the
/// round-robin product of the part resolvers, mapped through the resolver
/// of the currently indicated part.
pub fn round_robin_resolver(union: &UnionAutomaton, part_resolvers: &[Resolver]) -> Result<Resolver, UnionError> {
    if part_resolvers.len() != union.offsets.len() {
        return Err(UnionError::ResolverCount);
    }
    let autos: Vec<CoBuchiAutomaton> = part_resolvers.iter().map(|r| r.automaton().clone()).collect();
    let (product, states) = round_robin_product(&autos);
    let schedule = Schedule::new(autos.len());
    let map = states
        .iter()
        .map(|(rs, p)| {
            let i = schedule.part(*p);
            union.offsets[i] + part_resolvers[i].morphism().apply(rs[i])
        })
        .collect();
    Ok(Resolver::new(product, Morphism { map }, &union.automaton)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::{saturate, transition};
    use crate::graph::{Alphabet, Letter};
    use crate::objectives::UpWord;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn avoid(bad: char) -> CoBuchiAutomaton {
        let ab = Alphabet::symbols("ab");
        let ts = ab.iter().map(|c| {
            let k = if c == Letter::Sym(bad) { Kind::CoBuchi } else { Kind::Normal };
            transition(0, c, k, 0)
        });
        CoBuchiAutomaton::new(ab.clone(), 1, ts, 0).unwrap().with_order(vec![0]).unwrap()
    }

    #[test]
    fn schedule_prefix() {
        assert_eq!(round_robin_schedule(3, 12), vec![0, 0, 1, 0, 1, 2, 0, 1, 2, 0, 1, 2]);
        assert_eq!(round_robin_schedule(1, 4), vec![0, 0, 0, 0]);
        let s = Schedule::new(4);
        assert_eq!(s.len(), 10);
    }

    #[test]
    fn two_single_states() {
        let u = union_automaton(&[saturate(&avoid('a')), saturate(&avoid('b'))]).unwrap();
        assert_eq!(u.automaton.state_count(), 2);
        for c in u.automaton.alphabet().iter() {
            assert!(u.automaton.has_transition(1, c, Kind::Normal, 0));
            assert!(!u.automaton.has_transition(0, c, Kind::Normal, 1));
        }
        assert_eq!(u.automaton.check_monotone(), Some(Ok(())));
    }

    #[test]
    fn union_language_and_resolver() {
        let parts = [saturate(&avoid('a')), saturate(&avoid('b'))];
        let u = union_automaton(&parts).unwrap();
        let rs: Vec<Resolver> = [avoid('a'), avoid('b')]
            .iter()
            .zip(&parts)
            .map(|(d, p)| Resolver::new(d.clone().without_order(), Morphism::identity(1), p).unwrap())
            .collect();
        let r = round_robin_resolver(&u, &rs).unwrap();
        assert_eq!(r.find_unsound_word(&u.automaton), None);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..500 {
            let w = UpWord::random(&mut rng, u.automaton.alphabet(), 3, 4);
            let either = parts.iter().any(|p| p.accepts(&w));
            assert_eq!(u.automaton.accepts(&w), either, "{w}");
            assert_eq!(r.replay(&w).accepting(), either, "{w}");
        }
    }

    #[test]
    fn unsaturated_part_is_rejected() {
        assert_eq!(union_automaton(&[avoid('a')]).unwrap_err(), UnionError::NotSaturated(0));
    }
}
