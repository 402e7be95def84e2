//! Zielonka's algorithm for max-parity games with vertex priorities. Eve
//! wins a play when the largest priority seen infinitely often is even.

use std::collections::VecDeque;

use super::Player;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParityGame {
    pub owner: Vec<Player>,
    pub priority: Vec<u32>,
    pub succ: Vec<Vec<usize>>,
}

/// Winning regions and, for every vertex owned by the player winning it, a
/// successor realising a positional winning strategy.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParitySolution {
    pub winner: Vec<Player>,
    pub choice: Vec<Option<usize>>,
}

impl ParityGame {
    pub fn new(owner: Vec<Player>, priority: Vec<u32>, succ: Vec<Vec<usize>>) -> Self {
        assert_eq!(owner.len(), priority.len());
        assert_eq!(owner.len(), succ.len());
        assert!(succ.iter().all(|s| !s.is_empty()), "parity game with a sink");
        ParityGame { owner, priority, succ }
    }

    /// Game whose priorities sit on edges `(src, priority, dst)`: each edge
    /// with a positive priority is routed through a fresh vertex carrying it.
    /// Returns the game and, per fresh vertex, the edge it stands for.
    pub fn from_edge_priorities(owner: Vec<Player>, edges: &[(usize, u32, usize)]) -> (Self, Vec<usize>) {
        let n = owner.len();
        let mut owner = owner;
        let mut priority = vec![0; n];
        let mut succ = vec![Vec::new(); n];
        let mut origin = Vec::new();
        for (i, &(s, p, d)) in edges.iter().enumerate() {
            if p == 0 {
                succ[s].push(d);
            } else {
                let mid = owner.len();
                owner.push(Player::Eve);
                priority.push(p);
                succ.push(vec![d]);
                succ[s].push(mid);
                origin.push(i);
            }
        }
        for s in &mut succ {
            s.sort_unstable();
            s.dedup();
        }
        (ParityGame::new(owner, priority, succ), origin)
    }

    pub fn len(&self) -> usize {
        self.owner.len()
    }

    pub fn is_empty(&self) -> bool {
        self.owner.is_empty()
    }

    pub fn solve(&self) -> ParitySolution {
        let n = self.len();
        let mut pred = vec![Vec::new(); n];
        for (v, ss) in self.succ.iter().enumerate() {
            for &s in ss {
                pred[s].push(v);
            }
        }
        let mut choice = vec![None; n];
        let all = vec![true; n];
        let (eve, _) = self.zielonka(&all, &pred, &mut choice);
        let winner: Vec<Player> = (0..n).map(|v| if eve[v] { Player::Eve } else { Player::Adam }).collect();
        for v in 0..n {
            if self.owner[v] != winner[v] {
                choice[v] = None;
            }
        }
        ParitySolution { winner, choice }
    }

    /// Attractor of `target` for `who` inside `within`, recording attracting
    /// moves in `choice`.
    fn attractor(
        &self,
        who: Player,
        target: &[bool],
        within: &[bool],
        pred: &[Vec<usize>],
        choice: &mut [Option<usize>],
    ) -> Vec<bool> {
        let n = self.len();
        let mut attr = target.to_vec();
        let mut missing: Vec<usize> =
            (0..n).map(|v| self.succ[v].iter().filter(|&&s| within[s]).count()).collect();
        let mut queue: VecDeque<usize> = (0..n).filter(|&v| attr[v]).collect();
        while let Some(x) = queue.pop_front() {
            for &v in &pred[x] {
                if !within[v] || attr[v] {
                    continue;
                }
                if self.owner[v] == who {
                    attr[v] = true;
                    choice[v] = Some(x);
                    queue.push_back(v);
                } else {
                    missing[v] -= 1;
                    if missing[v] == 0 {
                        attr[v] = true;
                        queue.push_back(v);
                    }
                }
            }
        }
        attr
    }

    /// Returns (Eve's region, Adam's region) of the subgame `within`.
    fn zielonka(&self, within: &[bool], pred: &[Vec<usize>], choice: &mut [Option<usize>]) -> (Vec<bool>, Vec<bool>) {
        let n = self.len();
        let Some(p) = (0..n).filter(|&v| within[v]).map(|v| self.priority[v]).max() else {
            return (vec![false; n], vec![false; n]);
        };
        let x = if p % 2 == 0 { Player::Eve } else { Player::Adam };
        let top: Vec<bool> = (0..n).map(|v| within[v] && self.priority[v] == p).collect();
        for v in (0..n).filter(|&v| top[v] && self.owner[v] == x) {
            choice[v] = self.succ[v].iter().copied().find(|&s| within[s]);
        }
        let a = self.attractor(x, &top, within, pred, choice);
        let rest: Vec<bool> = (0..n).map(|v| within[v] && !a[v]).collect();
        let (w0, w1) = self.zielonka(&rest, pred, choice);
        let wy = if x == Player::Eve { w1 } else { w0 };
        let result = if !wy.iter().any(|&b| b) {
            (within.to_vec(), vec![false; n])
        } else {
            let b = self.attractor(x.opponent(), &wy, within, pred, choice);
            let rest2: Vec<bool> = (0..n).map(|v| within[v] && !b[v]).collect();
            let (v0, v1) = self.zielonka(&rest2, pred, choice);
            let (vx, vy) = if x == Player::Eve { (v0, v1) } else { (v1, v0) };
            let wy_total: Vec<bool> = (0..n).map(|v| b[v] || vy[v]).collect();
            (vx, wy_total)
        };
        if x == Player::Eve {
            result
        } else {
            (result.1, result.0)
        }
    }
}
