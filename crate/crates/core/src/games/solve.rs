//! Deciding who wins `(A, W)`.

use rayon::prelude::*;
use thiserror::Error;

use crate::automata::CoBuchiAutomaton;
use crate::graph::Letter;
use crate::objectives::{graph_satisfies, Objective, ObjectiveKind, SatisfyError};

use super::{hd_product_game, product_game, solve_energy_game, Arena, Player, PositionalStrategy, Strategy};

pub const DEFAULT_STRATEGY_BUDGET: u128 = 1 << 20;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SolveError {
    #[error("no game solver for objective `{0}`")]
    Unsupported(String),
    #[error("edge label {0} is outside the objective's alphabet")]
    ForeignLetter(Letter),
    #[error("{needed} positional strategies exceed the budget of {budget}")]
    Budget { needed: u128, budget: u128 },
    #[error("root {0} is not a vertex")]
    Root(usize),
    #[error(transparent)]
    Satisfy(#[from] SatisfyError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    /// A winning positional strategy in the arena itself.
    Positional(PositionalStrategy),
    /// A winning strategy graph, projected from a product game.
    Strategy(Strategy),
    /// Eve loses the game started here.
    AdamWins { vertex: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub eve_wins: bool,
    pub certificate: Certificate,
}

fn check_letters(a: &Arena, w: &Objective) -> Result<(), SolveError> {
    match a.graph().edges().iter().find(|e| !w.alphabet().contains(e.label)) {
        Some(e) => Err(SolveError::ForeignLetter(e.label)),
        None => Ok(()),
    }
}

fn energy_tilt(a: &Arena, w: &Objective) -> Option<(i64, i64)> {
    match w.kind() {
        ObjectiveKind::Bounded | ObjectiveKind::MeanPayoffLe0 | ObjectiveKind::LiminfLe0 => Some((1, 0)),
        ObjectiveKind::MeanPayoffLt0 | ObjectiveKind::LiminfLt0 => Some((a.vertex_count() as i64, 1)),
        ObjectiveKind::Tilted { n } => Some((*n, 1)),
        _ => None,
    }
}

/// Does Eve win `(a, w)` from every vertex?
///
/// Weighted objectives are solved as energy games (mean-payoff `< 0` via
/// the tilt `w ↦ |V|·w + 1`), the others through a product with their
/// deterministic recognizer.
pub fn eve_wins(a: &Arena, w: &Objective) -> Result<Verdict, SolveError> {
    check_letters(a, w)?;
    if let Some((scale, shift)) = energy_tilt(a, w) {
        let sol = solve_energy_game(a, |c| scale * c.value().expect("weighted alphabet") + shift);
        return Ok(match sol.credit.iter().position(Option::is_none) {
            Some(vertex) => Verdict { eve_wins: false, certificate: Certificate::AdamWins { vertex } },
            None => Verdict { eve_wins: true, certificate: Certificate::Positional(sol.strategy) },
        });
    }
    let rec = w.recognizer().ok_or_else(|| SolveError::Unsupported(w.key().to_string()))?;
    let game = product_game(a, &rec.to_parity());
    let sol = game.solve();
    Ok(match game.starts.iter().position(|&s| sol.winner[s] != Player::Eve) {
        Some(vertex) => Verdict { eve_wins: false, certificate: Certificate::AdamWins { vertex } },
        None => Verdict {
            eve_wins: true,
            certificate: Certificate::Strategy(game.strategy(a, &sol).expect("Eve wins everywhere")),
        },
    })
}

/// Does Eve win the game started at `root`? Solved on the part of the
/// arena reachable from `root`; certificates refer to that sub-arena.
pub fn eve_wins_from(a: &Arena, w: &Objective, root: usize) -> Result<(Arena, Verdict), SolveError> {
    if root >= a.vertex_count() {
        return Err(SolveError::Root(root));
    }
    let (sub, _) = a.reachable_part(root);
    let v = eve_wins(&sub, w)?;
    Ok((sub, v))
}

/// Solves `(a, L(aut))` through the product in which Eve resolves the
/// automaton's nondeterminism. Agrees with [`eve_wins`] when `aut` is
/// history-deterministic.
pub fn eve_wins_hd(a: &Arena, aut: &CoBuchiAutomaton) -> Verdict {
    let game = hd_product_game(a, aut);
    let sol = game.solve();
    match game.starts.iter().position(|&s| sol.winner[s] != Player::Eve) {
        Some(vertex) => Verdict { eve_wins: false, certificate: Certificate::AdamWins { vertex } },
        None => Verdict {
            eve_wins: true,
            certificate: Certificate::Strategy(game.strategy(a, &sol).expect("Eve wins everywhere")),
        },
    }
}

/// Eve's winning region in `(a, w)`: the vertices from which she wins.
pub fn winning_region(a: &Arena, w: &Objective) -> Result<Vec<bool>, SolveError> {
    check_letters(a, w)?;
    if let Some((scale, shift)) = energy_tilt(a, w) {
        let sol = solve_energy_game(a, |c| scale * c.value().expect("weighted alphabet") + shift);
        return Ok(sol.credit.iter().map(Option::is_some).collect());
    }
    let rec = w.recognizer().ok_or_else(|| SolveError::Unsupported(w.key().to_string()))?;
    let game = product_game(a, &rec.to_parity());
    let sol = game.solve();
    Ok(game.starts.iter().map(|&s| sol.winner[s] == Player::Eve).collect())
}

/// Eve's winning region in `(a, L(aut))` through the product in which she
/// resolves the automaton's nondeterminism.
pub fn winning_region_hd(a: &Arena, aut: &CoBuchiAutomaton) -> Vec<bool> {
    let game = hd_product_game(a, aut);
    let sol = game.solve();
    game.starts.iter().map(|&s| sol.winner[s] == Player::Eve).collect()
}

/// The sub-arena induced on a winning region, with the kept vertices in
/// order. Eve vertices lose their edges leaving the region; Adam vertices
/// must have none.
pub fn restrict_to_region(a: &Arena, region: &[bool]) -> Option<(Arena, Vec<usize>)> {
    let (graph, _) = a.graph().induced(region);
    let kept: Vec<usize> = (0..region.len()).filter(|&v| region[v]).collect();
    if kept.is_empty() {
        return None;
    }
    for &v in &kept {
        let out = a.graph().out_edges(v);
        let inside = out.iter().filter(|e| region[e.dst]).count();
        if inside == 0 || (a.owner(v) == Player::Adam && inside < out.len()) {
            return None;
        }
    }
    let owner = kept.iter().map(|&v| a.owner(v)).collect();
    Some((Arena::new(graph, owner).expect("region is sinkless"), kept))
}

/// The lexicographically least positional strategy (choices ordered by
/// vertex, then by edge) whose kept subgraph satisfies `w`.
pub fn exists_positional_winning(
    a: &Arena,
    w: &Objective,
    budget: u128,
) -> Result<Option<PositionalStrategy>, SolveError> {
    check_letters(a, w)?;
    let needed = a.positional_count();
    if needed > budget {
        return Err(SolveError::Budget { needed, budget });
    }
    let g = a.graph();
    let eve: Vec<usize> = g.vertices().filter(|&v| a.owner(v) == Player::Eve).collect();
    let decode = |mut k: u128| {
        let mut choice = vec![None; g.vertex_count()];
        for &v in eve.iter().rev() {
            let r = g.out_range(v);
            let d = r.len() as u128;
            choice[v] = Some(r.start + (k % d) as usize);
            k /= d;
        }
        PositionalStrategy { choice }
    };
    graph_satisfies(w, &decode(0).kept_graph(a))?;
    let found = (0..needed as u64)
        .into_par_iter()
        .map(|k| decode(k as u128))
        .find_first(|s| graph_satisfies(w, &s.kept_graph(a)).is_ok_and(|r| r.is_satisfied()));
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games::{check_positional, check_strategy};
    use crate::graph::{Edge, Graph};

    fn loops(owner: Player, labels: &[Letter]) -> Arena {
        Arena::new(Graph::new(1, labels.iter().map(|&c| Edge::new(0, c, 0))), vec![owner]).unwrap()
    }

    #[test]
    fn zero_loop_mean_payoff() {
        let a = loops(Player::Eve, &[Letter::Int(0)]);
        assert!(eve_wins(&a, &Objective::mean_payoff_le0(2)).unwrap().eve_wins);
        assert!(!eve_wins(&a, &Objective::mean_payoff_lt0(2)).unwrap().eve_wins);
    }

    #[test]
    fn gen_buchi_needs_memory() {
        let a = loops(Player::Eve, &[Letter::Sym('a'), Letter::Sym('b')]);
        let w = Objective::gen_buchi();
        let v = eve_wins(&a, &w).unwrap();
        assert!(v.eve_wins);
        let Certificate::Strategy(s) = v.certificate else { panic!("product certificate expected") };
        assert_eq!(check_strategy(&a, &s, &w), Ok(()));
        assert_eq!(exists_positional_winning(&a, &w, DEFAULT_STRATEGY_BUDGET).unwrap(), None);
    }

    #[test]
    fn positional_certificate_checks() {
        let a = loops(Player::Eve, &[Letter::Int(1), Letter::Int(-1)]);
        let w = Objective::bounded(2);
        let v = eve_wins(&a, &w).unwrap();
        let Certificate::Positional(p) = v.certificate else { panic!("energy certificate expected") };
        assert_eq!(check_positional(&a, &p, &w), Ok(()));
        let found = exists_positional_winning(&a, &w, DEFAULT_STRATEGY_BUDGET).unwrap().unwrap();
        assert_eq!(found.choice, vec![Some(0)]);
    }

    #[test]
    fn budget_and_foreign_letters() {
        let a = loops(Player::Eve, &[Letter::Int(1), Letter::Int(-1)]);
        assert!(matches!(exists_positional_winning(&a, &Objective::bounded(2), 1), Err(SolveError::Budget { .. })));
        assert!(matches!(eve_wins(&a, &Objective::parity(2)), Err(SolveError::ForeignLetter(_))));
    }
}
