//! Deciding history-determinism with the letter game.

use std::collections::{HashMap, VecDeque};

use crate::games::{ParityGame, Player};
use crate::graph::{Edge, Letter, Morphism};

use super::{determinize_breakpoint, AutomatonError, CoBuchiAutomaton, Kind, Resolver};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LetterPosition {
    /// Adam picks the next letter.
    Adam { state: usize, tracker: usize },
    /// Eve picks a transition on `letter`.
    Eve { state: usize, tracker: usize, letter: Letter },
}

/// Adam spells a word letter by letter, Eve builds a run of the automaton
/// on the fly, and a deterministic copy of the automaton tracks membership.
/// Priorities: Eve's co-Büchi transition 1, the tracker's 2, otherwise 0.
#[derive(Clone, Debug)]
pub struct LetterGame {
    pub positions: Vec<LetterPosition>,
    /// `(src, priority, dst, Eve's transition kind)`.
    pub edges: Vec<(usize, u32, usize, Kind)>,
    pub tracker: CoBuchiAutomaton,
}

impl LetterGame {
    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }
}

pub fn letter_game(a: &CoBuchiAutomaton, budget: usize) -> Result<LetterGame, AutomatonError> {
    let tracker = determinize_breakpoint(a, budget)?;
    let start = LetterPosition::Adam { state: a.initial, tracker: tracker.initial };
    let mut index = HashMap::from([(start, 0)]);
    let mut positions = vec![start];
    let mut queue = VecDeque::from([0]);
    let mut edges = Vec::new();
    while let Some(i) = queue.pop_front() {
        let mut targets = Vec::new();
        match positions[i] {
            LetterPosition::Adam { state, tracker: d } => {
                for c in a.alphabet.iter() {
                    targets.push((LetterPosition::Eve { state, tracker: d, letter: c }, 0, Kind::Normal));
                }
            }
            LetterPosition::Eve { state, tracker: d, letter } => {
                let (kd, d2) = tracker.step(d, letter);
                for (k, q2) in a.successors(state, letter) {
                    let p = if kd == Kind::CoBuchi {
                        2
                    } else if k == Kind::CoBuchi {
                        1
                    } else {
                        0
                    };
                    targets.push((LetterPosition::Adam { state: q2, tracker: d2 }, p, k));
                }
            }
        }
        for (t, p, k) in targets {
            let j = *index.entry(t).or_insert_with(|| {
                positions.push(t);
                queue.push_back(positions.len() - 1);
                positions.len() - 1
            });
            edges.push((i, p, j, k));
        }
    }
    Ok(LetterGame { positions, edges, tracker })
}

/// Outcome of [`check_hd`].
#[derive(Clone, Debug)]
pub enum HdVerdict {
    /// History-deterministic, with a sound resolver read off Eve's
    /// winning strategy.
    Hd(Resolver),
    NotHd,
}

impl HdVerdict {
    pub fn is_hd(&self) -> bool {
        matches!(self, HdVerdict::Hd(_))
    }

    pub fn resolver(&self) -> Option<&Resolver> {
        match self {
            HdVerdict::Hd(r) => Some(r),
            HdVerdict::NotHd => None,
        }
    }
}

/// Decides whether `a` is history-deterministic by solving its letter game.
pub fn check_hd(a: &CoBuchiAutomaton, budget: usize) -> Result<HdVerdict, AutomatonError> {
    let game = letter_game(a, budget)?;
    let owner: Vec<Player> = game
        .positions
        .iter()
        .map(|p| match p {
            LetterPosition::Adam { .. } => Player::Adam,
            LetterPosition::Eve { .. } => Player::Eve,
        })
        .collect();
    let triples: Vec<(usize, u32, usize)> = game.edges.iter().map(|&(s, p, d, _)| (s, p, d)).collect();
    let (parity, origin) = ParityGame::from_edge_priorities(owner, &triples);
    let sol = parity.solve();
    if sol.winner[0] != Player::Eve {
        return Ok(HdVerdict::NotHd);
    }
    let n = game.len();
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, e) in game.edges.iter().enumerate() {
        out[e.0].push(i);
    }
    let chosen_edge = |v: usize| {
        let c = sol.choice[v].expect("Eve moves in her region");
        if c >= n {
            origin[c - n]
        } else {
            let zero = out[v].iter().copied().find(|&i| game.edges[i].2 == c && game.edges[i].1 == 0);
            zero.expect("edge exists")
        }
    };

    // Resolver states are Adam positions reachable under Eve's strategy.
    let mut index = HashMap::from([(0usize, 0usize)]);
    let mut order = vec![0usize];
    let mut queue = VecDeque::from([0usize]);
    let mut transitions = Vec::new();
    while let Some(p) = queue.pop_front() {
        for &ei in &out[p] {
            let eve = game.edges[ei].2;
            let LetterPosition::Eve { letter, .. } = game.positions[eve] else { unreachable!() };
            let (_, _, next, kind) = game.edges[chosen_edge(eve)];
            let j = *index.entry(next).or_insert_with(|| {
                order.push(next);
                queue.push_back(next);
                order.len() - 1
            });
            transitions.push(Edge::new(index[&p], (letter, kind), j));
        }
    }
    let map = order
        .iter()
        .map(|&p| match game.positions[p] {
            LetterPosition::Adam { state, .. } => state,
            LetterPosition::Eve { .. } => unreachable!(),
        })
        .collect();
    let automaton = CoBuchiAutomaton::new(a.alphabet.clone(), order.len(), transitions, 0)?;
    let r = Resolver::new(automaton, Morphism { map }, a).expect("strategy transitions are automaton transitions");
    Ok(HdVerdict::Hd(r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::{transition, DEFAULT_STATE_BUDGET};
    use crate::graph::Alphabet;

    #[test]
    fn deterministic_is_hd() {
        let ts = [transition(0, 'a', Kind::Normal, 1), transition(1, 'a', Kind::CoBuchi, 0)];
        let a = CoBuchiAutomaton::new(Alphabet::symbols("a"), 2, ts, 0).unwrap();
        let v = check_hd(&a, DEFAULT_STATE_BUDGET).unwrap();
        let r = v.resolver().unwrap();
        assert_eq!(r.automaton().state_count(), 2);
        assert_eq!(r.find_unsound_word(&a), None);
    }

    #[test]
    fn guessing_the_future_is_not_hd() {
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
        let a = CoBuchiAutomaton::new(Alphabet::symbols("ab"), 3, ts, 0).unwrap();
        assert!(!check_hd(&a, DEFAULT_STATE_BUDGET).unwrap().is_hd());
    }
}
