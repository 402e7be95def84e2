//! Example automata with their resolvers: truncated energy, finite
//! support and eventually non-increasing automata, monotone versions of
//! the `aab` and `c(a*cb*)+c` detectors, and a small automaton that is not
//! history-deterministic.

use std::cell::Cell;
use std::collections::{HashMap, VecDeque};

use crate::graph::{monotone_closure, Alphabet, Edge, Letter, Morphism, OrderedGraph};
use crate::objectives::{fig1_left_dfa, fig1_right_dfa, ObjectiveKind, Objective, UpWord};

use super::{
    round_robin_resolver, saturate, transition, union_automaton, CoBuchiAutomaton, Kind, Resolver, Run,
    Transition,
};

fn value_ordered(alphabet: Alphabet, states: usize, normal: impl Fn(i64, i64, i64) -> bool) -> CoBuchiAutomaton {
    let mut ts = Vec::new();
    for v in 0..states {
        for c in alphabet.iter() {
            let w = c.value().expect("integer alphabet");
            for v2 in 0..states {
                ts.push(transition(v, c, Kind::CoBuchi, v2));
                if normal(v as i64, w, v2 as i64) {
                    ts.push(transition(v, c, Kind::Normal, v2));
                }
            }
        }
    }
    CoBuchiAutomaton::new(alphabet, states, ts, 0)
        .expect("saturated automata are complete")
        .with_order((0..states).collect())
        .expect("distinct ranks")
}

/// States `0..=cap`, normal `v -w-> v'` iff `w ≤ v − v'`, over `[−b, b]`.
pub fn energy_automaton(cap: usize, b: i64) -> CoBuchiAutomaton {
    value_ordered(Alphabet::range(-b, b), cap + 1, |v, w, v2| w <= v - v2)
}

/// States `0..=m`, normal `v -w-> v'` iff `w ≤ v` and `v' ≤ v`, over `0..=m`.
pub fn finite_support_automaton(m: usize) -> CoBuchiAutomaton {
    value_ordered(Alphabet::range(0, m as i64), m + 1, |v, w, v2| w <= v && v2 <= v)
}

/// States `0..=m`, normal `v -w-> v'` iff `v ≥ w ≥ v'`, over `0..=m`.
pub fn eni_automaton(m: usize) -> CoBuchiAutomaton {
    value_ordered(Alphabet::range(0, m as i64), m + 1, |v, w, v2| v >= w && w >= v2)
}

/// Builds a resolver by exploring a deterministic step function from
/// `start`; `image` gives the target state of each resolver state.
pub(crate) fn explore<S: Clone + Eq + std::hash::Hash>(
    target: &CoBuchiAutomaton,
    start: S,
    step: impl Fn(&S, Letter) -> (Kind, S),
    image: impl Fn(&S) -> usize,
) -> (Resolver, Vec<S>) {
    let mut index = HashMap::from([(start.clone(), 0)]);
    let mut states = vec![start];
    let mut queue = VecDeque::from([0]);
    let mut ts: Vec<Transition> = Vec::new();
    while let Some(i) = queue.pop_front() {
        for c in target.alphabet().iter() {
            let (k, s2) = step(&states[i], c);
            let j = *index.entry(s2.clone()).or_insert_with(|| {
                states.push(s2);
                queue.push_back(states.len() - 1);
                states.len() - 1
            });
            ts.push(Edge::new(i, (c, k), j));
        }
    }
    let map = states.iter().map(&image).collect();
    let a = CoBuchiAutomaton::new(target.alphabet().clone(), states.len(), ts, 0).expect("complete");
    let r = Resolver::new(a, Morphism { map }, target).expect("resolver transitions exist in the target");
    (r, states)
}

/// The counter resolver of [`energy_automaton`]: from `(v, c)` reading `w`,
/// go normally to `(v − w, c)` when `v ≥ w`, else take a co-Büchi
/// transition to `(c + 1, c + 1)`.
#[derive(Clone, Debug)]
pub struct EnergyResolver {
    pub resolver: Resolver,
    /// `(value, counter)` of each resolver state.
    pub states: Vec<(usize, usize)>,
    pub cap: usize,
    pub counter_cap: usize,
}

/// A resolver replay, flagged when the truncation at the caps was hit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnergyReplay {
    pub run: Run,
    pub max_counter: usize,
    pub overflow: bool,
}

pub fn energy_resolver(cap: usize, counter_cap: usize, b: i64) -> EnergyResolver {
    assert!(counter_cap <= cap, "counter values are also states");
    let target = energy_automaton(cap, b);
    let (resolver, states) = explore(&target, (0usize, 0usize), |&(v, c), w| energy_step(cap, counter_cap, v, c, w).0, |s| s.0);
    EnergyResolver { resolver, states, cap, counter_cap }
}

/// One resolver step; the flag marks a step clipped at a cap.
fn energy_step(cap: usize, counter_cap: usize, v: usize, c: usize, w: Letter) -> ((Kind, (usize, usize)), bool) {
    let next = v as i64 - w.value().expect("weight");
    if next < 0 {
        if c + 1 > counter_cap {
            ((Kind::CoBuchi, (cap, counter_cap)), true)
        } else {
            ((Kind::CoBuchi, (c + 1, c + 1)), false)
        }
    } else if next as usize > cap {
        ((Kind::Normal, (cap, c)), true)
    } else {
        ((Kind::Normal, (next as usize, c)), false)
    }
}

impl EnergyResolver {
    fn index_of(&self, s: (usize, usize)) -> usize {
        self.states.iter().position(|&x| x == s).expect("reachable state")
    }

    pub fn replay(&self, w: &UpWord) -> EnergyReplay {
        let overflow = Cell::new(false);
        let max_counter = Cell::new(0);
        let run = Run::replay(w, 0, |q, c| {
            let (v, cnt) = self.states[q];
            let ((k, s2), clipped) = energy_step(self.cap, self.counter_cap, v, cnt, c);
            overflow.set(overflow.get() || clipped);
            max_counter.set(max_counter.get().max(s2.1));
            (k, self.index_of(s2))
        });
        EnergyReplay { run, max_counter: max_counter.get(), overflow: overflow.get() }
    }

    /// Counter values along a finite word, starting from `(0, 0)`.
    pub fn counter_trace(&self, word: &[Letter]) -> (Vec<usize>, bool) {
        let (mut v, mut c) = (0, 0);
        let mut overflow = false;
        let mut trace = vec![0];
        for &w in word {
            let ((_, s2), clipped) = energy_step(self.cap, self.counter_cap, v, c, w);
            overflow |= clipped;
            (v, c) = s2;
            trace.push(c);
        }
        (trace, overflow)
    }
}

/// Remembers the largest letter so far.
pub fn finite_support_resolver(m: usize) -> Resolver {
    let target = finite_support_automaton(m);
    explore(
        &target,
        0usize,
        |&v, c| {
            let w = c.value().expect("integer") as usize;
            if w <= v {
                (Kind::Normal, v)
            } else {
                (Kind::CoBuchi, w)
            }
        },
        |&v| v,
    )
    .0
}

/// Moves to the letter just read.
pub fn eni_resolver(m: usize) -> Resolver {
    let target = eni_automaton(m);
    explore(
        &target,
        0usize,
        |&v, c| {
            let w = c.value().expect("integer") as usize;
            (if w <= v { Kind::Normal } else { Kind::CoBuchi }, w)
        },
        |&v| v,
    )
    .0
}

/// Saturated monotone closure of a detector, with the detector itself as
/// resolver. Rank 2 is the idle state.
fn monotone_from_dfa(dfa: CoBuchiAutomaton) -> (CoBuchiAutomaton, Resolver) {
    let rank = vec![2, 1, 0];
    let ordered = OrderedGraph::new(dfa.graph().clone(), rank.clone()).expect("distinct ranks");
    let (graph, _) = monotone_closure(&ordered).into_parts();
    let closed = CoBuchiAutomaton { alphabet: dfa.alphabet.clone(), graph, initial: dfa.initial, order: Some(rank) };
    let a = saturate(&closed);
    let r = Resolver::new(dfa, Morphism::identity(3), &a).expect("closure contains the detector");
    (a, r)
}

/// Finitely many `aab` infixes, `e` neutral.
pub fn fig1_left_automaton() -> (CoBuchiAutomaton, Resolver) {
    monotone_from_dfa(fig1_left_dfa())
}

/// Finitely many infixes in `c(a*cb*)+c`, `e` neutral.
pub fn fig1_right_automaton() -> (CoBuchiAutomaton, Resolver) {
    monotone_from_dfa(fig1_right_dfa())
}

/// One state: normal on every letter except `bad`.
pub fn cobuchi_automaton(alphabet: Alphabet, bad: &[Letter]) -> CoBuchiAutomaton {
    let ts: Vec<Transition> = alphabet
        .iter()
        .map(|c| transition(0, c, if bad.contains(&c) { Kind::CoBuchi } else { Kind::Normal }, 0))
        .collect();
    let a = CoBuchiAutomaton::new(alphabet, 1, ts, 0).expect("complete").with_order(vec![0]).expect("one rank");
    saturate(&a)
}

/// Waits in state 0, then commits to `a` forever (state 1) or `b`
/// forever (state 2). Recognizes "finitely many a or finitely many b" but
/// no resolver can know when to commit.
pub fn guesser() -> CoBuchiAutomaton {
    let ts = [
        transition(0, 'a', Kind::CoBuchi, 0),
        transition(0, 'b', Kind::CoBuchi, 0),
        transition(0, 'a', Kind::Normal, 1),
        transition(0, 'b', Kind::Normal, 2),
        transition(1, 'a', Kind::Normal, 1),
        transition(1, 'b', Kind::CoBuchi, 1),
        transition(2, 'b', Kind::Normal, 2),
        transition(2, 'a', Kind::CoBuchi, 2),
    ];
    CoBuchiAutomaton::new(Alphabet::symbols("ab"), 3, ts, 0).expect("complete")
}

/// A monotone history-deterministic automaton for `w` together with a
/// sound resolver, where the catalog has one. Weighted objectives are
/// truncated at `cap`.
pub fn monotone_hd_automaton(w: &Objective, cap: usize) -> Option<(CoBuchiAutomaton, Resolver)> {
    Some(match w.kind() {
        ObjectiveKind::Bounded => {
            let b = w.alphabet().max_abs_weight();
            let r = energy_resolver(cap, cap, b);
            (energy_automaton(cap, b), r.resolver)
        }
        ObjectiveKind::Finite { m } => (finite_support_automaton(*m as usize), finite_support_resolver(*m as usize)),
        ObjectiveKind::Eni { m } => (eni_automaton(*m as usize), eni_resolver(*m as usize)),
        ObjectiveKind::CoBuchi { bad } => {
            let a = cobuchi_automaton(w.alphabet().clone(), bad);
            let det = a.clone().without_order();
            let ts: Vec<Transition> = det.transitions().iter().filter(|e| {
                let bad_letter = bad.contains(&e.label.0);
                (e.label.1 == Kind::CoBuchi) == bad_letter
            }).copied().collect();
            let d = CoBuchiAutomaton::new(det.alphabet.clone(), 1, ts, 0).expect("complete");
            let r = Resolver::new(d, Morphism::identity(1), &a).expect("sub-automaton");
            (a, r)
        }
        ObjectiveKind::Fig1Left => fig1_left_automaton(),
        ObjectiveKind::Fig1Right => fig1_right_automaton(),
        ObjectiveKind::Union(parts) => {
            let pieces: Vec<(CoBuchiAutomaton, Resolver)> =
                parts.iter().map(|p| monotone_hd_automaton(p, cap)).collect::<Option<_>>()?;
            let autos: Vec<CoBuchiAutomaton> = pieces.iter().map(|p| p.0.clone()).collect();
            let resolvers: Vec<Resolver> = pieces.into_iter().map(|p| p.1).collect();
            let u = union_automaton(&autos).ok()?;
            let r = round_robin_resolver(&u, &resolvers).ok()?;
            (u.automaton, r)
        }
        _ => return None,
    })
}
