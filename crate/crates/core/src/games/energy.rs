//! Energy games by value iteration: Eve wants the prefix sums of the
//! weights to stay bounded from above.

use crate::graph::Letter;

use super::{Arena, Player, PositionalStrategy};

/// Minimal initial credit per vertex (`None` when Adam wins) and a
/// positional strategy for Eve on her winning region.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnergySolution {
    pub credit: Vec<Option<i64>>,
    pub strategy: PositionalStrategy,
}

impl EnergySolution {
    pub fn eve_wins(&self, v: usize) -> bool {
        self.credit[v].is_some()
    }

    pub fn eve_wins_everywhere(&self) -> bool {
        self.credit.iter().all(Option::is_some)
    }
}

/// Solves the game where a play is won by Eve iff
/// `sup_k Σ_{i<k} weight(c_i)` is finite.
pub fn solve_energy_game(a: &Arena, weight: impl Fn(Letter) -> i64) -> EnergySolution {
    let g = a.graph();
    let n = g.vertex_count();
    let w: Vec<i64> = g.edges().iter().map(|e| weight(e.label)).collect();
    let cap = n as i64 * w.iter().copied().max().unwrap_or(0).max(0);
    let mut f: Vec<Option<i64>> = vec![Some(0); n];
    loop {
        let mut changed = false;
        for v in g.vertices() {
            if f[v].is_none() {
                continue;
            }
            let options = g.out_range(v).map(|i| f[g.edges()[i].dst].map(|x| w[i] + x));
            let best = match a.owner(v) {
                Player::Eve => options.reduce(|x, y| match (x, y) {
                    (Some(x), Some(y)) => Some(x.min(y)),
                    (Some(x), None) | (None, Some(x)) => Some(x),
                    (None, None) => None,
                }),
                Player::Adam => options.reduce(|x, y| match (x, y) {
                    (Some(x), Some(y)) => Some(x.max(y)),
                    _ => None,
                }),
            }
            .expect("arenas are sinkless");
            let new = best.map(|x| x.max(0)).filter(|&x| x <= cap);
            if new != f[v] {
                f[v] = new;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let choice = g
        .vertices()
        .map(|v| {
            let fv = f[v]?;
            if a.owner(v) != Player::Eve {
                return None;
            }
            g.out_range(v).find(|&i| f[g.edges()[i].dst].is_some_and(|x| w[i] + x <= fv))
        })
        .collect();
    EnergySolution { credit: f, strategy: PositionalStrategy { choice } }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Edge, Graph};

    fn two_loops(owner: Player) -> Arena {
        let g = Graph::new(1, [Edge::new(0, Letter::Int(-1), 0), Edge::new(0, Letter::Int(1), 0)]);
        Arena::new(g, vec![owner]).unwrap()
    }

    fn value(c: Letter) -> i64 {
        c.value().unwrap()
    }

    #[test]
    fn eve_keeps_negative_loop() {
        let s = solve_energy_game(&two_loops(Player::Eve), value);
        assert_eq!(s.credit, vec![Some(0)]);
        assert_eq!(s.strategy.choice, vec![Some(0)]);
    }

    #[test]
    fn adam_takes_positive_loop() {
        let s = solve_energy_game(&two_loops(Player::Adam), value);
        assert_eq!(s.credit, vec![None]);
    }

    #[test]
    fn credit_is_minimal() {
        // 0 -2-> 1 -(-2)-> 0: starting at 0 the sums peak at 2.
        let g = Graph::new(2, [Edge::new(0, Letter::Int(2), 1), Edge::new(1, Letter::Int(-2), 0)]);
        let s = solve_energy_game(&Arena::solitaire(g).unwrap(), value);
        assert_eq!(s.credit, vec![Some(2), Some(0)]);
    }
}
