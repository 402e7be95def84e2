//! Co-Büchi automata: graphs over `letter × {Normal, CoBuchi}` with an
//! initial state, accepting the words that have a run with finitely many
//! co-Büchi transitions.

pub mod catalog;
mod determinize;
mod hd;
mod resolver;
mod transform;
mod union;

use std::fmt;

use thiserror::Error;

use crate::graph::{
    check_monotone, reachable_from, scc_ids, Alphabet, Edge, Graph, Letter, OrderError, OrderedGraph,
};
use crate::objectives::{DetParity, UpWord};

pub use determinize::{determinize_breakpoint, DEFAULT_STATE_BUDGET};
pub use hd::{check_hd, letter_game, HdVerdict, LetterGame};
pub use resolver::{
    check_resolver_sound, compose_resolver, Resolver, ResolverError, SoundnessReport,
};
pub use transform::{normal_core, saturate, NormalCore};
pub use union::{
    round_robin_product, round_robin_resolver, round_robin_schedule, union_automaton, ProductState, Schedule,
    UnionAutomaton, UnionError,
};

/// Transition kind. `CoBuchi` transitions may only be taken finitely often.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Kind {
    Normal,
    CoBuchi,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Normal => "N",
            Kind::CoBuchi => "F",
        })
    }
}

pub type Transition = Edge<(Letter, Kind)>;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AutomatonError {
    #[error("initial state {0} does not exist")]
    NoInitial(usize),
    #[error("state {state} has no transition on letter {letter}")]
    Incomplete { state: usize, letter: Letter },
    #[error("state {0} is not reachable from the initial state")]
    Unreachable(usize),
    #[error("letter {0} is not in the alphabet")]
    ForeignLetter(Letter),
    #[error(transparent)]
    Order(#[from] OrderError),
    #[error("language is empty: no cycle of normal transitions")]
    EmptyLanguage,
    #[error("automaton is not deterministic at state {0}")]
    Nondeterministic(usize),
    #[error("determinization exceeded its budget of {0} states")]
    StateBudget(usize),
}

/// A complete co-Büchi automaton with every state reachable.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CoBuchiAutomaton {
    alphabet: Alphabet,
    graph: Graph<(Letter, Kind)>,
    initial: usize,
    order: Option<Vec<usize>>,
}

impl CoBuchiAutomaton {
    pub fn new(
        alphabet: Alphabet,
        states: usize,
        transitions: impl IntoIterator<Item = Transition>,
        initial: usize,
    ) -> Result<Self, AutomatonError> {
        if initial >= states {
            return Err(AutomatonError::NoInitial(initial));
        }
        let graph = Graph::new(states, transitions);
        for e in graph.edges() {
            if !alphabet.contains(e.label.0) {
                return Err(AutomatonError::ForeignLetter(e.label.0));
            }
        }
        let a = CoBuchiAutomaton { alphabet, graph, initial, order: None };
        for q in a.graph.vertices() {
            for c in a.alphabet.iter() {
                if a.successors(q, c).next().is_none() {
                    return Err(AutomatonError::Incomplete { state: q, letter: c });
                }
            }
        }
        let seen = reachable_from(&a.graph, [initial]);
        if let Some(q) = seen.iter().position(|s| !s) {
            return Err(AutomatonError::Unreachable(q));
        }
        Ok(a)
    }

    /// Attaches a total order, given as distinct ranks.
    pub fn with_order(mut self, rank: Vec<usize>) -> Result<Self, AutomatonError> {
        OrderedGraph::new(self.graph.clone(), rank.clone())?;
        self.order = Some(rank);
        Ok(self)
    }

    pub fn without_order(mut self) -> Self {
        self.order = None;
        self
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn graph(&self) -> &Graph<(Letter, Kind)> {
        &self.graph
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn state_count(&self) -> usize {
        self.graph.vertex_count()
    }

    pub fn transitions(&self) -> &[Transition] {
        self.graph.edges()
    }

    pub fn order(&self) -> Option<&[usize]> {
        self.order.as_deref()
    }

    pub fn has_transition(&self, q: usize, c: Letter, k: Kind, q2: usize) -> bool {
        self.graph.has_edge(q, (c, k), q2)
    }

    /// Transitions from `q` on `c`, normal ones first.
    pub fn successors(&self, q: usize, c: Letter) -> impl Iterator<Item = (Kind, usize)> + '_ {
        let normal = self.graph.successors(q, (c, Kind::Normal)).map(|d| (Kind::Normal, d));
        let bad = self.graph.successors(q, (c, Kind::CoBuchi)).map(|d| (Kind::CoBuchi, d));
        normal.chain(bad)
    }

    pub fn is_deterministic(&self) -> bool {
        self.graph.vertices().all(|q| self.alphabet.iter().all(|c| self.successors(q, c).count() == 1))
    }

    /// The unique transition of a deterministic automaton.
    pub fn step(&self, q: usize, c: Letter) -> (Kind, usize) {
        self.successors(q, c).next().expect("complete automaton")
    }

    /// Normal transitions only, as a plain letter graph (may have sinks).
    pub fn normal_graph(&self) -> Graph<Letter> {
        Graph::new(
            self.state_count(),
            self.transitions()
                .iter()
                .filter(|e| e.label.1 == Kind::Normal)
                .map(|e| Edge::new(e.src, e.label.0, e.dst)),
        )
    }

    pub fn ordered_graph(&self) -> Option<OrderedGraph<(Letter, Kind)>> {
        let rank = self.order.clone()?;
        Some(OrderedGraph::new(self.graph.clone(), rank).expect("validated order"))
    }

    /// Monotonicity as a `letter × kind` graph; `None` when unordered.
    pub fn check_monotone(&self) -> Option<Result<(), Transition>> {
        self.ordered_graph().map(|g| check_monotone(&g))
    }

    pub fn is_saturated(&self) -> bool {
        let n = self.state_count();
        self.graph.vertices().all(|q| {
            self.alphabet.iter().all(|c| self.graph.out_with_label(q, (c, Kind::CoBuchi)).len() == n)
        })
    }

    /// Does some run on `w` take finitely many co-Büchi transitions?
    pub fn accepts(&self, w: &UpWord) -> bool {
        let (u, v) = (w.prefix().len(), w.period().len());
        let positions = u + v;
        let next_pos = |p: usize| if p + 1 < positions { p + 1 } else { u };
        let id = |q: usize, p: usize| q * positions + p;
        let mut edges = Vec::new();
        for q in self.graph.vertices() {
            for p in 0..positions {
                for (k, q2) in self.successors(q, w.at(p)) {
                    edges.push(Edge::new(id(q, p), k, id(q2, next_pos(p))));
                }
            }
        }
        let product = Graph::new(self.state_count() * positions, edges);
        let reach = reachable_from(&product, [id(self.initial, 0)]);
        let in_period = |x: usize| x % positions >= u;
        let normal = |e: &Edge<Kind>| e.label == Kind::Normal && in_period(e.src) && in_period(e.dst);
        let scc = scc_ids(&product, normal);
        product.edges().iter().any(|e| normal(e) && reach[e.src] && scc[e.src] == scc[e.dst])
    }

    /// Replays a deterministic automaton on `w`.
    pub fn run(&self, w: &UpWord) -> Result<Run, AutomatonError> {
        if let Some(q) = self.graph.vertices().find(|&q| self.alphabet.iter().any(|c| self.successors(q, c).count() != 1)) {
            return Err(AutomatonError::Nondeterministic(q));
        }
        Ok(Run::replay(w, self.initial, |q, c| self.step(q, c)))
    }

    /// Reads a deterministic automaton as a parity automaton (normal ↦ 0,
    /// co-Büchi ↦ 1).
    pub fn to_parity(&self) -> Result<DetParity, AutomatonError> {
        if !self.is_deterministic() {
            let q = self.graph.vertices().find(|&q| self.alphabet.iter().any(|c| self.successors(q, c).count() != 1));
            return Err(AutomatonError::Nondeterministic(q.unwrap_or(0)));
        }
        Ok(DetParity::from_fn(self.alphabet.clone(), self.state_count(), self.initial, |q, c| {
            let (k, q2) = self.step(q, c);
            (q2, if k == Kind::CoBuchi { 1 } else { 0 })
        }))
    }
}

/// The run of a deterministic machine on an ultimately periodic word, cut
/// where the pair (state, position in the period) first repeats.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Run {
    pub states: Vec<usize>,
    pub kinds: Vec<Kind>,
    /// Index into `kinds` where the repeating part starts.
    pub loop_start: usize,
}

impl Run {
    pub fn replay(w: &UpWord, initial: usize, mut step: impl FnMut(usize, Letter) -> (Kind, usize)) -> Run {
        let u = w.prefix().len();
        let v = w.period().len();
        let mut q = initial;
        let mut states = vec![q];
        let mut kinds = Vec::new();
        for &c in w.prefix() {
            let (k, q2) = step(q, c);
            kinds.push(k);
            states.push(q2);
            q = q2;
        }
        let mut seen = std::collections::HashMap::new();
        let mut i = 0;
        loop {
            if let Some(&start) = seen.get(&(q, i % v)) {
                return Run { states, kinds, loop_start: start };
            }
            seen.insert((q, i % v), u + i);
            let (k, q2) = step(q, w.period()[i % v]);
            kinds.push(k);
            states.push(q2);
            q = q2;
            i += 1;
        }
    }

    pub fn loop_kinds(&self) -> &[Kind] {
        &self.kinds[self.loop_start..]
    }

    pub fn accepting(&self) -> bool {
        self.loop_kinds().iter().all(|&k| k == Kind::Normal)
    }

    pub fn cobuchi_count(&self) -> usize {
        self.kinds.iter().filter(|&&k| k == Kind::CoBuchi).count()
    }
}

/// Shorthand used throughout the catalog and tests.
pub fn transition(src: usize, c: impl Into<Letter>, kind: Kind, dst: usize) -> Transition {
    Edge::new(src, (c.into(), kind), dst)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn finitely_many_b() -> CoBuchiAutomaton {
        // state 0 waits, state 1 has committed to never seeing b again
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
    fn incomplete_is_rejected() {
        let err = CoBuchiAutomaton::new(Alphabet::symbols("ab"), 1, [transition(0, 'a', Kind::Normal, 0)], 0);
        assert_eq!(err, Err(AutomatonError::Incomplete { state: 0, letter: Letter::Sym('b') }));
    }

    #[test]
    fn unreachable_is_rejected() {
        let ts = [transition(0, 'a', Kind::Normal, 0), transition(1, 'a', Kind::Normal, 0)];
        let err = CoBuchiAutomaton::new(Alphabet::symbols("a"), 2, ts, 0);
        assert_eq!(err, Err(AutomatonError::Unreachable(1)));
    }

    #[test]
    fn nondeterministic_acceptance() {
        let a = finitely_many_b();
        assert!(!a.is_deterministic());
        assert!(a.accepts(&UpWord::syms("bbab", "a")));
        assert!(!a.accepts(&UpWord::syms("", "ab")));
        assert!(!a.accepts(&UpWord::syms("aaa", "b")));
    }

    #[test]
    fn deterministic_run_detects_loop() {
        let ts = [transition(0, 'N', Kind::Normal, 0), transition(0, 'F', Kind::CoBuchi, 0)];
        let a = CoBuchiAutomaton::new(Alphabet::symbols("FN"), 1, ts, 0).unwrap();
        assert!(a.run(&UpWord::syms("", "N")).unwrap().accepting());
        assert!(!a.run(&UpWord::syms("", "NF")).unwrap().accepting());
        assert!(a.run(&UpWord::syms("FFF", "N")).unwrap().accepting());
    }
}
