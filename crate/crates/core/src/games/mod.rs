//! Arenas, strategies and game solving.

mod energy;
mod parity;
mod product;
mod solve;

use std::fmt;

use thiserror::Error;

use crate::graph::{is_morphism, Edge, Graph, Lasso, Letter, Morphism};
use crate::objectives::{graph_satisfies, Objective, Satisfaction, SatisfyError};

pub use energy::{solve_energy_game, EnergySolution};
pub use parity::{ParityGame, ParitySolution};
pub use product::{hd_product_game, product_game, solve_cobuchi_game, CoBuchiSolution, ProductGame};
pub use solve::{
    eve_wins, eve_wins_from, eve_wins_hd, exists_positional_winning, restrict_to_region, winning_region,
    winning_region_hd, Certificate, SolveError, Verdict, DEFAULT_STRATEGY_BUDGET,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Player {
    Eve,
    Adam,
}

impl Player {
    pub fn opponent(self) -> Player {
        match self {
            Player::Eve => Player::Adam,
            Player::Adam => Player::Eve,
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Player::Eve => "eve",
            Player::Adam => "adam",
        })
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ArenaError {
    #[error("{owners} owners given for {vertices} vertices")]
    OwnerCount { owners: usize, vertices: usize },
    #[error("vertex {0} has no outgoing edge")]
    Sink(usize),
}

/// A graph whose vertices are split between Eve and Adam.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arena {
    graph: Graph<Letter>,
    owner: Vec<Player>,
}

impl Arena {
    pub fn new(graph: Graph<Letter>, owner: Vec<Player>) -> Result<Self, ArenaError> {
        if owner.len() != graph.vertex_count() {
            return Err(ArenaError::OwnerCount { owners: owner.len(), vertices: graph.vertex_count() });
        }
        if let Some(&v) = graph.sinks().first() {
            return Err(ArenaError::Sink(v));
        }
        Ok(Arena { graph, owner })
    }

    /// Every vertex belongs to Eve.
    pub fn solitaire(graph: Graph<Letter>) -> Result<Self, ArenaError> {
        let n = graph.vertex_count();
        Arena::new(graph, vec![Player::Eve; n])
    }

    pub fn graph(&self) -> &Graph<Letter> {
        &self.graph
    }

    pub fn owner(&self, v: usize) -> Player {
        self.owner[v]
    }

    pub fn owners(&self) -> &[Player] {
        &self.owner
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    /// The sub-arena on the vertices reachable from `root`, with the map
    /// from old to new indices.
    pub fn reachable_part(&self, root: usize) -> (Arena, Vec<Option<usize>>) {
        let keep = crate::graph::reachable_from(&self.graph, [root]);
        let (graph, map) = self.graph.induced(&keep);
        let owner = self.owner.iter().zip(&keep).filter(|(_, &k)| k).map(|(&o, _)| o).collect();
        (Arena { graph, owner }, map)
    }

    /// Number of positional strategies for Eve.
    pub fn positional_count(&self) -> u128 {
        self.graph
            .vertices()
            .filter(|&v| self.owner[v] == Player::Eve)
            .map(|v| self.graph.out_edges(v).len() as u128)
            .fold(1u128, |a, b| a.saturating_mul(b))
    }
}

/// A strategy graph `S` with a surjective morphism `π : S → A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Strategy {
    pub graph: Graph<Letter>,
    pub morphism: Morphism,
}

/// One chosen outgoing edge (as an index into `Graph::edges`) per Eve
/// vertex; Adam vertices keep all their edges.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PositionalStrategy {
    pub choice: Vec<Option<usize>>,
}

impl PositionalStrategy {
    /// The kept subgraph, on the same vertex set as the arena.
    pub fn kept_graph(&self, a: &Arena) -> Graph<Letter> {
        let g = a.graph();
        let edges = g.vertices().flat_map(|v| {
            let range = g.out_range(v);
            match (a.owner(v), self.choice[v]) {
                (Player::Eve, Some(i)) => vec![g.edges()[i]],
                (Player::Eve, None) => Vec::new(),
                (Player::Adam, _) => g.edges()[range].to_vec(),
            }
        });
        Graph::new(g.vertex_count(), edges.collect::<Vec<_>>())
    }

    pub fn kept_edges(&self, a: &Arena) -> Vec<Edge<Letter>> {
        self.kept_graph(a).edges().to_vec()
    }

    pub fn to_strategy(&self, a: &Arena) -> Strategy {
        Strategy { graph: self.kept_graph(a), morphism: Morphism::identity(a.vertex_count()) }
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum StrategyViolation {
    #[error("strategy morphism is not surjective")]
    NotSurjective,
    #[error("strategy edge {0:?} is not mapped onto an arena edge")]
    NotAMorphism(Edge<Letter>),
    #[error("strategy vertex {state} lacks a response to Adam's edge {edge:?}")]
    AdamIncomplete { state: usize, edge: Edge<Letter> },
    #[error("strategy vertex {0} has no outgoing edge")]
    Sink(usize),
    #[error("positional choice at vertex {0} is missing or not one of its edges")]
    BadChoice(usize),
    #[error("a play consistent with the strategy is losing: {0:?}")]
    Losing(Lasso<Letter>),
    #[error(transparent)]
    Objective(#[from] SatisfyError),
}

/// Checks that `s` is a strategy for Eve in `a` and that it satisfies `w`.
pub fn check_strategy(a: &Arena, s: &Strategy, w: &Objective) -> Result<(), StrategyViolation> {
    if s.morphism.map.len() != s.graph.vertex_count() || !s.morphism.is_surjective(a.vertex_count()) {
        return Err(StrategyViolation::NotSurjective);
    }
    is_morphism(&s.graph, a.graph(), &s.morphism.map).map_err(StrategyViolation::NotAMorphism)?;
    if let Some(&v) = s.graph.sinks().first() {
        return Err(StrategyViolation::Sink(v));
    }
    for state in s.graph.vertices() {
        let v = s.morphism.apply(state);
        if a.owner(v) != Player::Adam {
            continue;
        }
        for e in a.graph().out_edges(v) {
            let answered = s
                .graph
                .out_with_label(state, e.label)
                .iter()
                .any(|f| s.morphism.apply(f.dst) == e.dst);
            if !answered {
                return Err(StrategyViolation::AdamIncomplete { state, edge: *e });
            }
        }
    }
    match graph_satisfies(w, &s.graph)? {
        Satisfaction::Satisfies => Ok(()),
        Satisfaction::Violates(l) => Err(StrategyViolation::Losing(l)),
    }
}

/// Checks a positional strategy: one valid choice per Eve vertex, then
/// [`check_strategy`] on the kept subgraph.
pub fn check_positional(a: &Arena, p: &PositionalStrategy, w: &Objective) -> Result<(), StrategyViolation> {
    for v in a.graph().vertices() {
        if a.owner(v) == Player::Eve {
            match p.choice.get(v).copied().flatten() {
                Some(i) if a.graph().out_range(v).contains(&i) => {}
                _ => return Err(StrategyViolation::BadChoice(v)),
            }
        }
    }
    check_strategy(a, &p.to_strategy(a), w)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_loop(w: i64) -> Arena {
        Arena::solitaire(Graph::new(1, [Edge::new(0, Letter::Int(w), 0)])).unwrap()
    }

    #[test]
    fn identity_strategy_on_zero_loop() {
        let a = one_loop(0);
        let s = PositionalStrategy { choice: vec![Some(0)] };
        assert_eq!(check_positional(&a, &s, &Objective::bounded(2)), Ok(()));
    }

    #[test]
    fn positive_loop_loses() {
        let a = one_loop(1);
        let s = PositionalStrategy { choice: vec![Some(0)] };
        assert!(matches!(check_positional(&a, &s, &Objective::bounded(2)), Err(StrategyViolation::Losing(_))));
    }

    #[test]
    fn adam_completeness_is_checked() {
        let g = Graph::new(1, [Edge::new(0, Letter::Int(0), 0), Edge::new(0, Letter::Int(-1), 0)]);
        let a = Arena::new(g, vec![Player::Adam]).unwrap();
        let s = Strategy { graph: Graph::new(1, [Edge::new(0, Letter::Int(0), 0)]), morphism: Morphism::identity(1) };
        assert!(matches!(check_strategy(&a, &s, &Objective::bounded(2)), Err(StrategyViolation::AdamIncomplete { .. })));
    }

    #[test]
    fn sinks_are_rejected() {
        let g = Graph::new(2, [Edge::new(0, Letter::Int(0), 1)]);
        assert_eq!(Arena::solitaire(g), Err(ArenaError::Sink(1)));
    }
}
