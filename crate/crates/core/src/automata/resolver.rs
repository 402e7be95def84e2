//! Resolvers: deterministic automata mapped into a nondeterministic one.

use thiserror::Error;

use crate::graph::{is_morphism, reachable_from, scc_ids, shortest_path, Edge, Graph, Morphism};
use crate::objectives::UpWord;

use super::{CoBuchiAutomaton, Kind, Run, Transition};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ResolverError {
    #[error("resolver automaton is not deterministic")]
    Nondeterministic,
    #[error("resolver transition {0:?} has no image in the target automaton")]
    NotAMorphism(Transition),
    #[error("resolver initial state maps to {got}, target initial state is {expected}")]
    Initial { expected: usize, got: usize },
    #[error("resolver and target have different alphabets")]
    Alphabet,
}

/// A deterministic automaton `R` with a morphism `R → A` that preserves
/// transition kinds and the initial state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Resolver {
    automaton: CoBuchiAutomaton,
    morphism: Morphism,
}

impl Resolver {
    pub fn new(automaton: CoBuchiAutomaton, morphism: Morphism, target: &CoBuchiAutomaton) -> Result<Self, ResolverError> {
        if automaton.alphabet() != target.alphabet() {
            return Err(ResolverError::Alphabet);
        }
        if !automaton.is_deterministic() {
            return Err(ResolverError::Nondeterministic);
        }
        is_morphism(automaton.graph(), target.graph(), &morphism.map).map_err(ResolverError::NotAMorphism)?;
        let got = morphism.apply(automaton.initial());
        if got != target.initial() {
            return Err(ResolverError::Initial { expected: target.initial(), got });
        }
        Ok(Resolver { automaton, morphism })
    }

    /// The identity resolver of a deterministic automaton.
    pub fn identity(a: &CoBuchiAutomaton) -> Result<Self, ResolverError> {
        Resolver::new(a.clone().without_order(), Morphism::identity(a.state_count()), a)
    }

    pub fn automaton(&self) -> &CoBuchiAutomaton {
        &self.automaton
    }

    pub fn morphism(&self) -> &Morphism {
        &self.morphism
    }

    pub fn replay(&self, w: &UpWord) -> Run {
        self.automaton.run(w).expect("resolvers are deterministic")
    }

    /// Exact soundness check: a word accepted by `target` but rejected by the
    /// resolver, if one exists.
    pub fn find_unsound_word(&self, target: &CoBuchiAutomaton) -> Option<UpWord> {
        let r = &self.automaton;
        let m = r.state_count();
        let id = |q: usize, s: usize| q * m + s;
        let mut edges = Vec::new();
        for e in target.transitions() {
            for s in 0..m {
                let (kr, s2) = r.step(s, e.label.0);
                edges.push(Edge::new(id(e.src, s), (e.label.0, e.label.1, kr), id(e.dst, s2)));
            }
        }
        let product = Graph::new(target.state_count() * m, edges);
        let start = id(target.initial(), r.initial());
        let reach = reachable_from(&product, [start]);
        let allowed = |e: &Edge<(crate::graph::Letter, Kind, Kind)>| e.label.1 == Kind::Normal && reach[e.src];
        let scc = scc_ids(&product, allowed);
        let bad = product
            .edges()
            .iter()
            .find(|e| allowed(e) && e.label.2 == Kind::CoBuchi && scc[e.src] == scc[e.dst])?;
        let inside = |x: &Edge<_>| allowed(x) && scc[x.src] == scc[bad.src] && scc[x.dst] == scc[bad.src];
        let stem = shortest_path(&product, start, |v| v == bad.src, |_| true).expect("reachable");
        let mut cycle = vec![*bad];
        cycle.extend(shortest_path(&product, bad.dst, |v| v == bad.src, inside).expect("same component"));
        let letters = |p: &[Edge<(crate::graph::Letter, Kind, Kind)>]| p.iter().map(|e| e.label.0).collect();
        Some(UpWord::new(letters(&stem), letters(&cycle)).expect("nonempty cycle"))
    }
}

/// `φ ∘ r`: a resolver for `target` given a resolver for some `a` and an
/// automaton morphism `φ : a → target`.
pub fn compose_resolver(r: &Resolver, phi: &Morphism, target: &CoBuchiAutomaton) -> Result<Resolver, ResolverError> {
    Resolver::new(r.automaton.clone(), r.morphism.then(phi), target)
}

/// Outcome of replaying a resolver on sample words.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SoundnessReport {
    pub samples: usize,
    pub in_language: usize,
    pub failures: Vec<UpWord>,
}

impl SoundnessReport {
    pub fn is_sound(&self) -> bool {
        self.failures.is_empty()
    }
}

/// For each sample in `L(a)`, checks that the resolver's run accepts.
pub fn check_resolver_sound<'w>(
    r: &Resolver,
    a: &CoBuchiAutomaton,
    samples: impl IntoIterator<Item = &'w UpWord>,
) -> SoundnessReport {
    let mut report = SoundnessReport::default();
    for w in samples {
        report.samples += 1;
        if a.accepts(w) {
            report.in_language += 1;
            if !r.replay(w).accepting() {
                report.failures.push(w.clone());
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::transition;
    use crate::graph::Alphabet;

    fn guess_b() -> CoBuchiAutomaton {
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
    fn deterministic_part_is_a_sound_resolver() {
        let a = guess_b();
        let ts = [transition(0, 'a', Kind::Normal, 0), transition(0, 'b', Kind::CoBuchi, 0)];
        let ra = CoBuchiAutomaton::new(Alphabet::symbols("ab"), 1, ts, 0).unwrap();
        let r = Resolver::new(ra, Morphism { map: vec![0] }, &a).unwrap();
        assert_eq!(r.find_unsound_word(&a), None);
        let samples = [UpWord::syms("b", "a"), UpWord::syms("", "ab")];
        let report = check_resolver_sound(&r, &a, &samples);
        assert!(report.is_sound());
        assert_eq!(report.in_language, 1);
    }

    #[test]
    fn bad_morphism_is_rejected() {
        let a = guess_b();
        let ts = [transition(0, 'a', Kind::Normal, 0), transition(0, 'b', Kind::Normal, 0)];
        let ra = CoBuchiAutomaton::new(Alphabet::symbols("ab"), 1, ts, 0).unwrap();
        assert!(matches!(Resolver::new(ra, Morphism { map: vec![0] }, &a), Err(ResolverError::NotAMorphism(_))));
    }
}
