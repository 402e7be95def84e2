//! Turning a finite graph satisfying a positional objective into a
//! monotone one it embeds into: saturate with the neutral letter, read a
//! total preorder off the neutral edges, close and quotient.

use std::collections::BTreeSet;

use rayon::prelude::*;
use thiserror::Error;

use crate::graph::{check_monotone, reachable_from, Edge, Graph, Lasso, Letter, Morphism, OrderedGraph};
use crate::objectives::{graph_satisfies, Objective, Satisfaction, SatisfyError};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum StructureError {
    #[error("the input graph does not satisfy the objective: {0:?}")]
    NotSatisfied(Lasso<Letter>),
    #[error("letter {0} is not a neutral letter of the objective")]
    NotNeutral(Letter),
    #[error("the relation is not a total transitive preorder")]
    NotPreorder,
    #[error(transparent)]
    Satisfy(#[from] SatisfyError),
}

fn satisfies(w: &Objective, g: &Graph<Letter>) -> Result<bool, StructureError> {
    Ok(graph_satisfies(w, g)?.is_satisfied())
}

/// Adds `eps`-edges greedily, in `(src, dst)` order, as long as the graph
/// keeps satisfying `w`. The pass is repeated until nothing changes.
pub fn epsilon_saturate(g: &Graph<Letter>, w: &Objective, eps: Letter) -> Result<Graph<Letter>, StructureError> {
    if w.neutral_letter().map(|(c, _)| c) != Some(eps) {
        return Err(StructureError::NotNeutral(eps));
    }
    if let Satisfaction::Violates(l) = graph_satisfies(w, g)? {
        return Err(StructureError::NotSatisfied(l));
    }
    let n = g.vertex_count();
    let mut current = g.clone();
    loop {
        let mut added = false;
        for v in 0..n {
            for v2 in 0..n {
                if current.has_edge(v, eps, v2) {
                    continue;
                }
                let candidate = current.with_edges([Edge::new(v, eps, v2)]);
                if satisfies(w, &candidate)? {
                    current = candidate;
                    added = true;
                }
            }
        }
        if !added {
            return Ok(current);
        }
    }
}

/// An absent `eps`-edge whose addition keeps `w` satisfied, if any.
pub fn addable_epsilon_edge(g: &Graph<Letter>, w: &Objective, eps: Letter) -> Option<Edge<Letter>> {
    let n = g.vertex_count();
    (0..n * n)
        .into_par_iter()
        .map(|i| Edge::new(i / n, eps, i % n))
        .filter(|e| !g.has_edge(e.src, eps, e.dst))
        .find_first(|e| graph_satisfies(w, &g.with_edges([*e])).is_ok_and(|s| s.is_satisfied()))
}

/// The relation `v > v'` iff `v ≠ v'` and `v -ε-> v'`, with the first
/// failures of transitivity and totality found.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PreOrderWitness {
    pub relation: BTreeSet<(usize, usize)>,
    pub transitivity_failure: Option<(usize, usize, usize)>,
    pub totality_failure: Option<(usize, usize)>,
}

impl PreOrderWitness {
    pub fn is_total_preorder(&self) -> bool {
        self.transitivity_failure.is_none() && self.totality_failure.is_none()
    }

    pub fn above(&self, v: usize, v2: usize) -> bool {
        self.relation.contains(&(v, v2))
    }
}

pub fn extract_preorder(g_eps: &Graph<Letter>, eps: Letter) -> PreOrderWitness {
    let n = g_eps.vertex_count();
    let relation: BTreeSet<(usize, usize)> =
        g_eps.edges().iter().filter(|e| e.label == eps && e.src != e.dst).map(|e| (e.src, e.dst)).collect();
    let mut transitivity_failure = None;
    'outer: for &(a, b) in &relation {
        for c in 0..n {
            if c != a && relation.contains(&(b, c)) && !relation.contains(&(a, c)) {
                transitivity_failure = Some((a, b, c));
                break 'outer;
            }
        }
    }
    let totality_failure = (0..n)
        .flat_map(|v| (v + 1..n).map(move |v2| (v, v2)))
        .find(|&(v, v2)| !relation.contains(&(v, v2)) && !relation.contains(&(v2, v)));
    PreOrderWitness { relation, transitivity_failure, totality_failure }
}

/// The closure `Ḡ` (edges `v ε* u -c-> u' ε* v'`), quotiented by mutual
/// relatedness and ordered by the preorder. Returns the ordered graph and
/// the map `g_eps → G'`.
pub fn monotone_quotient(
    g_eps: &Graph<Letter>,
    pre: &PreOrderWitness,
    eps: Letter,
) -> Result<(OrderedGraph<Letter>, Morphism), StructureError> {
    if !pre.is_total_preorder() {
        return Err(StructureError::NotPreorder);
    }
    let n = g_eps.vertex_count();
    let eps_only = g_eps.filter_edges(|e| e.label == eps);
    let reach: Vec<Vec<bool>> = (0..n).map(|v| reachable_from(&eps_only, [v])).collect();

    let mut class = vec![usize::MAX; n];
    let mut classes = 0;
    for v in 0..n {
        if class[v] != usize::MAX {
            continue;
        }
        for v2 in v..n {
            if v2 == v || (pre.above(v, v2) && pre.above(v2, v)) {
                class[v2] = classes;
            }
        }
        classes += 1;
    }

    let mut edges = BTreeSet::new();
    for e in g_eps.edges() {
        for v in (0..n).filter(|&v| reach[v][e.src]) {
            for v2 in (0..n).filter(|&v2| reach[e.dst][v2]) {
                edges.insert(Edge::new(class[v], e.label, class[v2]));
            }
        }
    }
    let rep: Vec<usize> = (0..classes).map(|k| class.iter().position(|&c| c == k).expect("nonempty")).collect();
    let rank: Vec<usize> =
        rep.iter().map(|&r| rep.iter().filter(|&&s| s != r && pre.above(r, s) && !pre.above(s, r)).count()).collect();
    let graph = OrderedGraph::new(Graph::new(classes, edges), rank).map_err(|_| StructureError::NotPreorder)?;
    Ok((graph, Morphism { map: class }))
}

/// Result of [`structure_finite`].
#[derive(Clone, Debug)]
pub enum StructureOutcome {
    /// A monotone graph satisfying the objective, and a morphism into it.
    Monotone { saturated: Graph<Letter>, graph: OrderedGraph<Letter>, morphism: Morphism },
    /// Neither `v0 -ε-> v1` nor `v1 -ε-> v0` after saturation: the objective
    /// is not positional over finite arenas, or `ε` is not really neutral.
    NotTotal { saturated: Graph<Letter>, pair: (usize, usize) },
    /// Saturation produced a non-transitive relation.
    NotTransitive { saturated: Graph<Letter>, triple: (usize, usize, usize) },
}

pub fn structure_finite(g: &Graph<Letter>, w: &Objective, eps: Letter) -> Result<StructureOutcome, StructureError> {
    let saturated = epsilon_saturate(g, w, eps)?;
    let pre = extract_preorder(&saturated, eps);
    if let Some(triple) = pre.transitivity_failure {
        return Ok(StructureOutcome::NotTransitive { saturated, triple });
    }
    if let Some(pair) = pre.totality_failure {
        return Ok(StructureOutcome::NotTotal { saturated, pair });
    }
    let (graph, morphism) = monotone_quotient(&saturated, &pre, eps)?;
    Ok(StructureOutcome::Monotone { saturated, graph, morphism })
}

/// Independent re-checks of a successful run: monotone, satisfies `w`,
/// receives `g` through the morphism, and is no larger than `g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureChecks {
    pub monotone: bool,
    pub satisfies: bool,
    pub embeds: bool,
    pub size_ok: bool,
}

impl StructureChecks {
    pub fn all(&self) -> bool {
        self.monotone && self.satisfies && self.embeds && self.size_ok
    }
}

pub fn verify_structure(g: &Graph<Letter>, w: &Objective, out: &OrderedGraph<Letter>, m: &Morphism) -> StructureChecks {
    StructureChecks {
        monotone: check_monotone(out).is_ok(),
        satisfies: graph_satisfies(w, out.graph()).is_ok_and(|s| s.is_satisfied()),
        embeds: m.map.len() == g.vertex_count() && crate::graph::is_morphism(g, out.graph(), &m.map).is_ok(),
        size_ok: out.graph().vertex_count() <= g.vertex_count(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn weighted(n: usize, edges: &[(usize, i64, usize)]) -> Graph<Letter> {
        Graph::new(n, edges.iter().map(|&(s, w, d)| Edge::new(s, Letter::Int(w), d)))
    }

    const ZERO: Letter = Letter::Int(0);

    #[test]
    fn zero_loop_gains_nothing() {
        let g = weighted(1, &[(0, 0, 0)]);
        assert_eq!(epsilon_saturate(&g, &Objective::bounded(2), ZERO).unwrap(), g);
    }

    #[test]
    fn two_zero_loops_get_connected() {
        let g = weighted(2, &[(0, 0, 0), (1, 0, 1)]);
        let s = epsilon_saturate(&g, &Objective::bounded(2), ZERO).unwrap();
        assert!(s.has_edge(0, ZERO, 1) && s.has_edge(1, ZERO, 0));
        assert_eq!(addable_epsilon_edge(&s, &Objective::bounded(2), ZERO), None);
    }

    #[test]
    fn chain_relation() {
        let g = weighted(4, &[(3, 0, 2), (2, 0, 1), (3, 0, 1), (0, 0, 0), (1, 0, 1), (2, 0, 2), (3, 0, 3)]);
        let p = extract_preorder(&g, ZERO);
        assert_eq!(p.relation, BTreeSet::from([(3, 2), (2, 1), (3, 1)]));
        assert_eq!(p.transitivity_failure, None);
        assert!(p.totality_failure.is_some());
        let g = weighted(4, &[(3, 0, 2), (2, 0, 1), (0, 0, 0)]);
        assert_eq!(extract_preorder(&g, ZERO).transitivity_failure, Some((3, 2, 1)));
    }

    #[test]
    fn bounded_end_to_end() {
        let w = Objective::bounded(2);
        let g = weighted(3, &[(0, 1, 1), (1, -1, 2), (2, 0, 0), (1, -2, 1)]);
        let StructureOutcome::Monotone { graph, morphism, .. } = structure_finite(&g, &w, ZERO).unwrap() else {
            panic!("bounded is positional");
        };
        assert!(verify_structure(&g, &w, &graph, &morphism).all());
    }

    #[test]
    fn mutual_pairs_merge() {
        let w = Objective::bounded(2);
        let g = weighted(2, &[(0, 0, 0), (1, 0, 1)]);
        let StructureOutcome::Monotone { graph, morphism, .. } = structure_finite(&g, &w, ZERO).unwrap() else {
            panic!("bounded is positional");
        };
        assert_eq!(graph.graph().vertex_count(), 1);
        assert_eq!(morphism.map, vec![0, 0]);
    }

    #[test]
    fn rejects_bad_inputs() {
        let w = Objective::bounded(2);
        assert!(matches!(epsilon_saturate(&weighted(1, &[(0, 1, 0)]), &w, ZERO), Err(StructureError::NotSatisfied(_))));
        assert!(matches!(
            epsilon_saturate(&weighted(1, &[(0, 0, 0)]), &w, Letter::Int(1)),
            Err(StructureError::NotNeutral(_))
        ));
    }
}
