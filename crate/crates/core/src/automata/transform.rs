use crate::graph::{Edge, Morphism};

use super::{AutomatonError, CoBuchiAutomaton, Kind, Resolver, ResolverError};

/// Adds every co-Büchi transition `(q, c, F, q')`.
pub fn saturate(a: &CoBuchiAutomaton) -> CoBuchiAutomaton {
    let n = a.state_count();
    let mut extra = Vec::with_capacity(n * n * a.alphabet.len());
    for q in 0..n {
        for c in a.alphabet.iter() {
            for q2 in 0..n {
                extra.push(Edge::new(q, (c, Kind::CoBuchi), q2));
            }
        }
    }
    CoBuchiAutomaton {
        alphabet: a.alphabet.clone(),
        graph: a.graph.with_edges(extra),
        initial: a.initial,
        order: a.order.clone(),
    }
}

/// States from which an infinite path of normal transitions starts.
pub(crate) fn normal_recurrent(a: &CoBuchiAutomaton) -> Vec<bool> {
    let mut alive = vec![true; a.state_count()];
    loop {
        let mut changed = false;
        for q in a.graph.vertices() {
            if alive[q]
                && !a.graph.out_edges(q).iter().any(|e| e.label.1 == Kind::Normal && alive[e.dst])
            {
                alive[q] = false;
                changed = true;
            }
        }
        if !changed {
            return alive;
        }
    }
}

/// Result of [`normal_core`].
#[derive(Clone, Debug)]
pub struct NormalCore {
    /// The input with normal transitions touching dead states turned co-Büchi.
    pub converted: CoBuchiAutomaton,
    /// The restricted, saturated automaton.
    pub automaton: CoBuchiAutomaton,
    /// Morphism `converted → automaton`: identity on live states, the rest
    /// to the new initial state.
    pub morphism: Morphism,
    /// Indices (in the input) of the states that were kept.
    pub kept: Vec<usize>,
}

/// Keeps only states with an infinite normal path, preserving the language
/// of prefix-independent history-deterministic automata.
pub fn normal_core(a: &CoBuchiAutomaton) -> Result<NormalCore, AutomatonError> {
    let live = normal_recurrent(a);
    let kept: Vec<usize> = a.graph.vertices().filter(|&q| live[q]).collect();
    if kept.is_empty() {
        return Err(AutomatonError::EmptyLanguage);
    }
    let converted_edges = a.transitions().iter().map(|e| {
        if e.label.1 == Kind::Normal && (!live[e.src] || !live[e.dst]) {
            Edge::new(e.src, (e.label.0, Kind::CoBuchi), e.dst)
        } else {
            *e
        }
    });
    let converted = CoBuchiAutomaton {
        alphabet: a.alphabet.clone(),
        graph: crate::graph::Graph::new(a.state_count(), converted_edges),
        initial: a.initial,
        order: a.order.clone(),
    };
    let saturated = saturate(&converted);

    let mut new_index = vec![None; a.state_count()];
    for (i, &q) in kept.iter().enumerate() {
        new_index[q] = Some(i);
    }
    let rank_of = |q: usize| a.order.as_ref().map_or(q, |r| r[q]);
    let initial = match new_index[a.initial] {
        Some(i) => i,
        None => {
            let least = *kept.iter().min_by_key(|&&q| rank_of(q)).expect("nonempty");
            new_index[least].expect("kept")
        }
    };
    let keep: Vec<bool> = live.clone();
    let (graph, _) = saturated.graph.induced(&keep);
    let order = a.order.as_ref().map(|r| kept.iter().map(|&q| r[q]).collect());
    let automaton = CoBuchiAutomaton { alphabet: a.alphabet.clone(), graph, initial, order };
    let morphism = Morphism { map: (0..a.state_count()).map(|q| new_index[q].unwrap_or(initial)).collect() };
    Ok(NormalCore { converted, automaton, morphism, kept })
}

impl NormalCore {
    /// Carries a resolver of the input over to the core: transitions whose
    /// image was turned co-Büchi become co-Büchi in the resolver too, then
    /// the core morphism is composed on.
    pub fn transfer(&self, r: &Resolver) -> Result<Resolver, ResolverError> {
        let ra = r.automaton();
        let edges = ra.transitions().iter().map(|e| {
            let (s, d) = (r.morphism().apply(e.src), r.morphism().apply(e.dst));
            let kind = if self.converted.has_transition(s, e.label.0, e.label.1, d) {
                e.label.1
            } else {
                Kind::CoBuchi
            };
            Edge::new(e.src, (e.label.0, kind), e.dst)
        });
        let rekinded = CoBuchiAutomaton {
            alphabet: ra.alphabet.clone(),
            graph: crate::graph::Graph::new(ra.state_count(), edges),
            initial: ra.initial,
            order: None,
        };
        let r2 = Resolver::new(rekinded, r.morphism().clone(), &self.converted)?;
        super::compose_resolver(&r2, &self.morphism, &self.automaton)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::transition;
    use crate::graph::Alphabet;

    #[test]
    fn one_state_gains_cobuchi_loop() {
        let a = CoBuchiAutomaton::new(Alphabet::symbols("a"), 1, [transition(0, 'a', Kind::Normal, 0)], 0).unwrap();
        let s = saturate(&a);
        assert_eq!(s.transitions().len(), 2);
        assert!(s.is_saturated());
        assert_eq!(saturate(&s), s);
    }

    #[test]
    fn trap_is_removed() {
        // 0 -a-> 1 (normal) and 1 only has co-Büchi transitions; 2 loops normally.
        let ts = [
            transition(0, 'a', Kind::Normal, 1),
            transition(0, 'a', Kind::Normal, 2),
            transition(1, 'a', Kind::CoBuchi, 1),
            transition(2, 'a', Kind::Normal, 2),
        ];
        let a = CoBuchiAutomaton::new(Alphabet::symbols("a"), 3, ts, 0).unwrap();
        let core = normal_core(&a).unwrap();
        assert_eq!(core.kept, vec![0, 2]);
        assert_eq!(core.morphism.map, vec![0, 0, 1]);
        assert!(core.automaton.has_transition(0, 'a'.into(), Kind::Normal, 1));
        assert!(!core.converted.has_transition(0, 'a'.into(), Kind::Normal, 1));
    }

    #[test]
    fn empty_language_is_an_error() {
        let a = CoBuchiAutomaton::new(Alphabet::symbols("a"), 1, [transition(0, 'a', Kind::CoBuchi, 0)], 0).unwrap();
        assert!(matches!(normal_core(&a), Err(AutomatonError::EmptyLanguage)));
    }
}
