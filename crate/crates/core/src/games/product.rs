//! Products of arenas with automata, and the games they induce.

use std::collections::{HashMap, VecDeque};

use crate::automata::{CoBuchiAutomaton, Kind};
use crate::graph::{Edge, Graph, Letter, Morphism};
use crate::objectives::DetParity;

use super::{Arena, ParityGame, ParitySolution, Player, PositionalStrategy, Strategy};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Position {
    /// Arena vertex and automaton state.
    Pair { vertex: usize, state: usize },
    /// Eve resolves the automaton's transition on arena edge `edge`.
    Choice { edge: usize, state: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProductEdge {
    pub src: usize,
    pub dst: usize,
    pub priority: u32,
    pub letter: Letter,
}

/// A product game. Plays start at `starts[v] = (v, initial)`.
#[derive(Clone, Debug)]
pub struct ProductGame {
    pub positions: Vec<Position>,
    pub owner: Vec<Player>,
    pub edges: Vec<ProductEdge>,
    pub starts: Vec<usize>,
}

/// Solved product game.
#[derive(Clone, Debug)]
pub struct ProductSolution {
    pub winner: Vec<Player>,
    /// Chosen edge (index into `edges`) at each position Eve owns and wins.
    pub choice: Vec<Option<usize>>,
}

struct Builder {
    index: HashMap<Position, usize>,
    positions: Vec<Position>,
    owner: Vec<Player>,
    queue: VecDeque<usize>,
}

impl Builder {
    fn new() -> Self {
        Builder { index: HashMap::new(), positions: Vec::new(), owner: Vec::new(), queue: VecDeque::new() }
    }

    fn id(&mut self, p: Position, owner: Player) -> usize {
        if let Some(&i) = self.index.get(&p) {
            return i;
        }
        let i = self.positions.len();
        self.index.insert(p, i);
        self.positions.push(p);
        self.owner.push(owner);
        self.queue.push_back(i);
        i
    }
}

/// Product with a deterministic parity automaton, from every `(v, initial)`.
pub fn product_game(a: &Arena, d: &DetParity) -> ProductGame {
    let g = a.graph();
    let mut b = Builder::new();
    let starts: Vec<usize> =
        g.vertices().map(|v| b.id(Position::Pair { vertex: v, state: d.initial() }, a.owner(v))).collect();
    let mut edges = Vec::new();
    while let Some(i) = b.queue.pop_front() {
        let Position::Pair { vertex, state } = b.positions[i] else { unreachable!() };
        for e in g.out_edges(vertex) {
            let (q2, p) = d.step(state, e.label);
            let j = b.id(Position::Pair { vertex: e.dst, state: q2 }, a.owner(e.dst));
            edges.push(ProductEdge { src: i, dst: j, priority: p, letter: e.label });
        }
    }
    ProductGame { positions: b.positions, owner: b.owner, edges, starts }
}

/// Product with a nondeterministic co-Büchi automaton in which Eve picks
/// the automaton's transitions; meaningful when the automaton is
/// history-deterministic.
pub fn hd_product_game(a: &Arena, aut: &CoBuchiAutomaton) -> ProductGame {
    let g = a.graph();
    let mut b = Builder::new();
    let starts: Vec<usize> =
        g.vertices().map(|v| b.id(Position::Pair { vertex: v, state: aut.initial() }, a.owner(v))).collect();
    let mut edges = Vec::new();
    while let Some(i) = b.queue.pop_front() {
        match b.positions[i] {
            Position::Pair { vertex, state } => {
                for idx in g.out_range(vertex) {
                    let e = g.edges()[idx];
                    let j = b.id(Position::Choice { edge: idx, state }, Player::Eve);
                    edges.push(ProductEdge { src: i, dst: j, priority: 0, letter: e.label });
                }
            }
            Position::Choice { edge, state } => {
                let e = g.edges()[edge];
                for (k, q2) in aut.successors(state, e.label) {
                    let j = b.id(Position::Pair { vertex: e.dst, state: q2 }, a.owner(e.dst));
                    let priority = if k == Kind::CoBuchi { 1 } else { 0 };
                    edges.push(ProductEdge { src: i, dst: j, priority, letter: e.label });
                }
            }
        }
    }
    ProductGame { positions: b.positions, owner: b.owner, edges, starts }
}

impl ProductGame {
    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn solve(&self) -> ProductSolution {
        let triples: Vec<(usize, u32, usize)> = self.edges.iter().map(|e| (e.src, e.priority, e.dst)).collect();
        let (game, origin) = ParityGame::from_edge_priorities(self.owner.clone(), &triples);
        let ParitySolution { winner, choice } = game.solve();
        let n = self.len();
        let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (i, e) in self.edges.iter().enumerate() {
            out[e.src].push(i);
        }
        let choice = (0..n)
            .map(|v| {
                let c = choice[v]?;
                if c >= n {
                    Some(origin[c - n])
                } else {
                    out[v].iter().copied().find(|&i| self.edges[i].dst == c && self.edges[i].priority == 0)
                }
            })
            .collect();
        ProductSolution { winner: winner[..n].to_vec(), choice }
    }

    pub fn eve_wins_everywhere(&self, sol: &ProductSolution) -> bool {
        self.starts.iter().all(|&s| sol.winner[s] == Player::Eve)
    }

    /// Eve's winning strategy from every start, as a strategy graph over
    /// the arena: the pair positions reachable under her choices, with
    /// choice positions collapsed. `None` unless Eve wins everywhere.
    pub fn strategy(&self, a: &Arena, sol: &ProductSolution) -> Option<Strategy> {
        if !self.eve_wins_everywhere(sol) {
            return None;
        }
        let mut out: Vec<Vec<usize>> = vec![Vec::new(); self.len()];
        for (i, e) in self.edges.iter().enumerate() {
            out[e.src].push(i);
        }
        let follow = |p: usize| -> Vec<usize> {
            if self.owner[p] == Player::Eve {
                vec![sol.choice[p].expect("Eve moves in her region")]
            } else {
                out[p].clone()
            }
        };
        let mut index: HashMap<usize, usize> = HashMap::new();
        let mut order = Vec::new();
        let mut queue = VecDeque::new();
        for &s in &self.starts {
            index.entry(s).or_insert_with(|| {
                order.push(s);
                queue.push_back(s);
                order.len() - 1
            });
        }
        let mut edges = Vec::new();
        while let Some(p) = queue.pop_front() {
            for i in follow(p) {
                let e = self.edges[i];
                let targets = match self.positions[e.dst] {
                    Position::Pair { .. } => vec![e.dst],
                    Position::Choice { .. } => follow(e.dst).into_iter().map(|j| self.edges[j].dst).collect(),
                };
                for t in targets {
                    let ti = *index.entry(t).or_insert_with(|| {
                        order.push(t);
                        queue.push_back(t);
                        order.len() - 1
                    });
                    edges.push(Edge::new(index[&p], e.letter, ti));
                }
            }
        }
        let map = order
            .iter()
            .map(|&p| match self.positions[p] {
                Position::Pair { vertex, .. } => vertex,
                Position::Choice { .. } => unreachable!("choice positions are collapsed"),
            })
            .collect();
        debug_assert_eq!(a.vertex_count(), self.starts.len());
        Some(Strategy { graph: Graph::new(order.len(), edges), morphism: Morphism { map } })
    }

    /// The product as an arena over `{F, N}` when every priority is 0 or 1.
    pub fn cobuchi_arena(&self) -> Option<Arena> {
        if self.edges.iter().any(|e| e.priority > 1) {
            return None;
        }
        let edges = self.edges.iter().map(|e| {
            let c = if e.priority == 1 { 'F' } else { 'N' };
            Edge::new(e.src, Letter::Sym(c), e.dst)
        });
        Some(Arena::new(Graph::new(self.len(), edges.collect::<Vec<_>>()), self.owner.clone()).expect("sinkless"))
    }
}

/// Winning regions of a game over `{F, N}` where Eve wants finitely many `F`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoBuchiSolution {
    pub eve_region: Vec<bool>,
    pub strategy: PositionalStrategy,
}

impl CoBuchiSolution {
    pub fn adam_region(&self) -> Vec<bool> {
        self.eve_region.iter().map(|b| !b).collect()
    }
}

pub fn solve_cobuchi_game(a: &Arena) -> CoBuchiSolution {
    let g = a.graph();
    let n = g.vertex_count();
    let triples: Vec<(usize, u32, usize)> = g
        .edges()
        .iter()
        .map(|e| (e.src, u32::from(e.label == Letter::Sym('F')), e.dst))
        .collect();
    let (game, origin) = ParityGame::from_edge_priorities(a.owners().to_vec(), &triples);
    let sol = game.solve();
    let eve_region: Vec<bool> = sol.winner[..n].iter().map(|&p| p == Player::Eve).collect();
    let choice = (0..n)
        .map(|v| {
            let c = sol.choice[v]?;
            if c >= n {
                Some(origin[c - n])
            } else {
                g.out_range(v).find(|&i| g.edges()[i].dst == c && g.edges()[i].label != Letter::Sym('F'))
            }
        })
        .collect();
    CoBuchiSolution { eve_region, strategy: PositionalStrategy { choice } }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games::check_positional;
    use crate::objectives::Objective;

    fn fn_arena(edges: &[(usize, char, usize)], owner: Vec<Player>) -> Arena {
        let g = Graph::new(owner.len(), edges.iter().map(|&(s, c, d)| Edge::new(s, Letter::Sym(c), d)));
        Arena::new(g, owner).unwrap()
    }

    #[test]
    fn all_normal_is_won() {
        let a = fn_arena(&[(0, 'N', 1), (1, 'N', 0)], vec![Player::Adam, Player::Eve]);
        let s = solve_cobuchi_game(&a);
        assert_eq!(s.eve_region, vec![true, true]);
    }

    #[test]
    fn adam_cobuchi_loop_is_lost() {
        let a = fn_arena(&[(0, 'F', 0)], vec![Player::Adam]);
        assert_eq!(solve_cobuchi_game(&a).eve_region, vec![false]);
    }

    #[test]
    fn eve_strategy_avoids_f() {
        let a = fn_arena(&[(0, 'F', 0), (0, 'N', 1), (1, 'N', 1), (1, 'F', 0)], vec![Player::Eve, Player::Eve]);
        let s = solve_cobuchi_game(&a);
        assert_eq!(s.eve_region, vec![true, true]);
        assert_eq!(check_positional(&a, &s.strategy, &Objective::cobuchi()), Ok(()));
    }

    #[test]
    fn single_vertex_product_sizes() {
        let a = fn_arena(&[(0, 'N', 0)], vec![Player::Eve]);
        let d = Objective::cobuchi().recognizer().unwrap().to_parity();
        assert_eq!(product_game(&a, &d).len(), 1);
        let aut = Objective::cobuchi().recognizer().unwrap().as_cobuchi().unwrap().clone();
        assert_eq!(hd_product_game(&a, &aut).len(), 2);
    }
}
