//! Deciding `L(G) ⊆ W` for finite graphs.

use std::collections::VecDeque;

use thiserror::Error;

use crate::graph::{scc_ids, shortest_path, Edge, Graph, Label, Lasso, Letter};

use super::cycles::max_mean_cycle;
use super::{CycleCriterion, DetParity, Objective};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Satisfaction {
    Satisfies,
    /// An infinite path of the graph whose label is outside the objective.
    Violates(Lasso<Letter>),
}

impl Satisfaction {
    pub fn is_satisfied(&self) -> bool {
        matches!(self, Satisfaction::Satisfies)
    }

    pub fn counterexample(&self) -> Option<&Lasso<Letter>> {
        match self {
            Satisfaction::Satisfies => None,
            Satisfaction::Violates(l) => Some(l),
        }
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum SatisfyError {
    #[error("objective `{0}` has neither a recognizer nor a cycle criterion")]
    Unsupported(String),
    #[error("edge {src} -{letter}-> {dst} uses a letter outside the alphabet of `{objective}`")]
    ForeignLetter { objective: String, src: usize, letter: Letter, dst: usize },
    #[error("letter {0} is not an integer")]
    NotAWeight(Letter),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Recognizer,
    Cycles,
}

/// `L(G) ⊆ W`, where `L(G)` collects the labels of infinite paths from
/// every vertex. Uses the cycle criterion when there is one, the
/// recognizer otherwise.
pub fn graph_satisfies(w: &Objective, g: &Graph<Letter>) -> Result<Satisfaction, SatisfyError> {
    let method = if w.cycle_criterion().is_some() { Method::Cycles } else { Method::Recognizer };
    graph_satisfies_via(w, g, method)
}

pub fn graph_satisfies_via(w: &Objective, g: &Graph<Letter>, method: Method) -> Result<Satisfaction, SatisfyError> {
    if let Some(e) = g.edges().iter().find(|e| !w.alphabet().contains(e.label)) {
        return Err(SatisfyError::ForeignLetter {
            objective: w.key().to_string(),
            src: e.src,
            letter: e.label,
            dst: e.dst,
        });
    }
    match method {
        Method::Cycles => {
            let c = w.cycle_criterion().ok_or_else(|| SatisfyError::Unsupported(w.key().to_string()))?;
            by_cycles(&c, g)
        }
        Method::Recognizer => {
            let r = w.recognizer().ok_or_else(|| SatisfyError::Unsupported(w.key().to_string()))?;
            Ok(by_recognizer(&r.to_parity(), g))
        }
    }
}

fn weight(c: Letter) -> Result<i64, SatisfyError> {
    c.value().ok_or(SatisfyError::NotAWeight(c))
}

fn by_cycles(c: &CycleCriterion, g: &Graph<Letter>) -> Result<Satisfaction, SatisfyError> {
    let weights: Vec<i64> = match c {
        CycleCriterion::NoPositiveCycle
        | CycleCriterion::AllCyclesNegative
        | CycleCriterion::Tilted(_)
        | CycleCriterion::EvenMaxPriority => g.edges().iter().map(|e| weight(e.label)).collect::<Result<_, _>>()?,
        _ => Vec::new(),
    };
    let violating_cycle = match c {
        CycleCriterion::NoPositiveCycle | CycleCriterion::AllCyclesNegative | CycleCriterion::Tilted(_) => {
            let (scale, shift) = match c {
                CycleCriterion::Tilted(n) => (*n, 1),
                _ => (1, 0),
            };
            let best = max_mean_cycle(g, |e| scale * e.label.value().expect("checked weights") + shift);
            best.filter(|m| match c {
                CycleCriterion::AllCyclesNegative => *m.mean.numer() >= 0,
                _ => *m.mean.numer() > 0,
            })
            .map(|m| m.cycle)
        }
        CycleCriterion::EvenMaxPriority => {
            let top = weights.iter().copied().max().unwrap_or(0);
            let mut found = None;
            for p in (1..=top).rev().filter(|p| p % 2 == 1) {
                if let Some(cycle) = cycle_with_edge(g, |e| weight(e.label).unwrap_or(0) <= p, |e| {
                    weight(e.label).unwrap_or(0) == p
                }) {
                    found = Some(cycle);
                    break;
                }
            }
            found
        }
        CycleCriterion::AvoidLetters(bad) => cycle_with_edge(g, |_| true, |e| bad.contains(&e.label)),
        CycleCriterion::ConstantCycles => {
            let scc = scc_ids(g, |_| true);
            let inner: Vec<&Edge<Letter>> = g.edges().iter().filter(|e| scc[e.src] == scc[e.dst]).collect();
            let mut found = None;
            'outer: for (i, e1) in inner.iter().enumerate() {
                for e2 in &inner[i + 1..] {
                    if scc[e1.src] == scc[e2.src] && e1.label != e2.label {
                        let inside = |e: &Edge<Letter>| scc[e.src] == scc[e1.src] && scc[e.dst] == scc[e1.src];
                        let mut cycle = vec![**e1];
                        cycle.extend(shortest_path(g, e1.dst, |v| v == e2.src, inside).expect("same component"));
                        cycle.push(**e2);
                        cycle.extend(shortest_path(g, e2.dst, |v| v == e1.src, inside).expect("same component"));
                        found = Some(cycle);
                        break 'outer;
                    }
                }
            }
            found
        }
    };
    Ok(match violating_cycle {
        Some(cycle) => Satisfaction::Violates(Lasso { stem: Vec::new(), cycle }),
        None => Satisfaction::Satisfies,
    })
}

/// A cycle made of `allowed` edges that contains a `marked` edge.
fn cycle_with_edge<L: Label>(
    g: &Graph<L>,
    allowed: impl Fn(&Edge<L>) -> bool,
    marked: impl Fn(&Edge<L>) -> bool,
) -> Option<Vec<Edge<L>>> {
    let scc = scc_ids(g, &allowed);
    let e = g.edges().iter().find(|e| allowed(e) && marked(e) && scc[e.src] == scc[e.dst])?;
    let inside = |x: &Edge<L>| allowed(x) && scc[x.src] == scc[e.src] && scc[x.dst] == scc[e.src];
    let mut cycle = vec![*e];
    cycle.extend(shortest_path(g, e.dst, |v| v == e.src, inside).expect("same component"));
    Some(cycle)
}

/// Product with a deterministic parity automaton started in its initial
/// state at every vertex; a reachable cycle whose top priority is odd is a
/// violation.
fn by_recognizer(d: &DetParity, g: &Graph<Letter>) -> Satisfaction {
    let q = d.state_count();
    let id = |v: usize, s: usize| v * q + s;
    let mut edges = Vec::new();
    for e in g.edges() {
        for s in 0..q {
            let (s2, p) = d.step(s, e.label);
            edges.push(Edge::new(id(e.src, s), (p, e.label), id(e.dst, s2)));
        }
    }
    let product = Graph::new(g.vertex_count() * q, edges);

    // Multi-source BFS from every (v, initial) for reachability and stems.
    let mut parent: Vec<Option<Edge<(u32, Letter)>>> = vec![None; product.vertex_count()];
    let mut reach = vec![false; product.vertex_count()];
    let mut queue = VecDeque::new();
    for v in g.vertices() {
        reach[id(v, d.initial())] = true;
        queue.push_back(id(v, d.initial()));
    }
    while let Some(x) = queue.pop_front() {
        for e in product.out_edges(x) {
            if !reach[e.dst] {
                reach[e.dst] = true;
                parent[e.dst] = Some(*e);
                queue.push_back(e.dst);
            }
        }
    }

    let top = d.max_priority();
    for p in (1..=top).rev().filter(|p| p % 2 == 1) {
        let allowed = |e: &Edge<(u32, Letter)>| e.label.0 <= p && reach[e.src];
        if let Some(cycle) = cycle_with_edge(&product, allowed, |e| e.label.0 == p) {
            let mut stem = Vec::new();
            let mut at = cycle[0].src;
            while let Some(e) = parent[at] {
                stem.push(e);
                at = e.src;
            }
            stem.reverse();
            let project = |e: &Edge<(u32, Letter)>| Edge::new(e.src / q, e.label.1, e.dst / q);
            return Satisfaction::Violates(Lasso {
                stem: stem.iter().map(project).collect(),
                cycle: cycle.iter().map(project).collect(),
            });
        }
    }
    Satisfaction::Satisfies
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objectives::UpWord;

    fn weighted(n: usize, edges: &[(usize, i64, usize)]) -> Graph<Letter> {
        Graph::new(n, edges.iter().map(|&(s, w, d)| Edge::new(s, Letter::Int(w), d)))
    }

    #[test]
    fn zero_loop_is_bounded() {
        let r = graph_satisfies(&Objective::bounded(2), &weighted(1, &[(0, 0, 0)])).unwrap();
        assert!(r.is_satisfied());
    }

    #[test]
    fn positive_loop_violates_mean_payoff() {
        let r = graph_satisfies(&Objective::mean_payoff_le0(2), &weighted(1, &[(0, 1, 0)])).unwrap();
        let lasso = r.counterexample().unwrap();
        let sum: i64 = lasso.cycle.iter().map(|e| e.label.value().unwrap()).sum();
        assert_eq!(sum, 1);
    }

    #[test]
    fn recognizer_counterexample_is_a_real_path() {
        let g = Graph::new(
            2,
            [
                Edge::new(0, Letter::Sym('a'), 1),
                Edge::new(1, Letter::Sym('a'), 0),
                Edge::new(1, Letter::Sym('b'), 0),
            ],
        );
        let w = Objective::fig1_left();
        let r = graph_satisfies(&w, &g).unwrap();
        let lasso = r.counterexample().expect("aab is a path").clone();
        assert!(lasso.replays_in(&g));
        let word = UpWord::new(lasso.stem_labels(), lasso.cycle_labels()).unwrap();
        assert!(!w.up_member(&word));
    }

    #[test]
    fn methods_agree_on_parity() {
        let w = Objective::parity(2);
        let g = weighted(2, &[(0, 1, 1), (1, 0, 0), (1, 2, 1)]);
        let a = graph_satisfies_via(&w, &g, Method::Cycles).unwrap();
        let b = graph_satisfies_via(&w, &g, Method::Recognizer).unwrap();
        assert!(!a.is_satisfied());
        assert!(!b.is_satisfied());
    }

    #[test]
    fn unsupported_and_foreign() {
        let g = weighted(1, &[(0, 0, 0)]);
        assert!(matches!(
            graph_satisfies_via(&Objective::bounded(2), &g, Method::Recognizer),
            Err(SatisfyError::Unsupported(_))
        ));
        assert!(matches!(graph_satisfies(&Objective::bounded(2), &weighted(1, &[(0, 7, 0)])), Err(SatisfyError::ForeignLetter { .. })));
    }
}
