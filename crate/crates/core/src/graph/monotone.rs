use super::{Edge, Label, OrderedGraph};

/// For every label `c` and vertex `v`, the largest rank reachable by a
/// `c`-edge from some vertex at or below `v`. In a monotone graph the
/// `c`-successors of `v` are exactly the vertices up to that rank.
fn thresholds<L: Label>(g: &OrderedGraph<L>) -> Vec<(L, Vec<Option<usize>>)> {
    let graph = g.graph();
    let ascending = g.ascending();
    graph
        .labels()
        .into_iter()
        .map(|c| {
            let mut t = vec![None; graph.vertex_count()];
            let mut running: Option<usize> = None;
            for &v in &ascending {
                let local = graph.successors(v, c).map(|d| g.rank(d)).max();
                running = running.max(local);
                t[v] = running;
            }
            (c, t)
        })
        .collect()
}

/// Checks `v ≥ u -c-> u' ≥ v'  ⇒  v -c-> v'`.
///
/// On failure returns a missing edge. Sources are scanned from the top of the
/// order downwards and targets from the bottom upwards, so the reported
/// triple is the "widest" one demanded by the closure.
pub fn check_monotone<L: Label>(g: &OrderedGraph<L>) -> Result<(), Edge<L>> {
    let graph = g.graph();
    let ascending = g.ascending();
    let table = thresholds(g);
    for &v in ascending.iter().rev() {
        for (c, t) in &table {
            let Some(limit) = t[v] else { continue };
            for &d in &ascending {
                if g.rank(d) > limit {
                    break;
                }
                if !graph.has_edge(v, *c, d) {
                    return Err(Edge::new(v, *c, d));
                }
            }
        }
    }
    Ok(())
}

/// The least monotone graph (for the same order) containing `g`.
pub fn monotone_closure<L: Label>(g: &OrderedGraph<L>) -> OrderedGraph<L> {
    let graph = g.graph();
    let ascending = g.ascending();
    let mut extra = Vec::new();
    for (c, t) in thresholds(g) {
        for v in graph.vertices() {
            let Some(limit) = t[v] else { continue };
            for &d in &ascending {
                if g.rank(d) > limit {
                    break;
                }
                extra.push(Edge::new(v, c, d));
            }
        }
    }
    let closed = graph.with_edges(extra);
    OrderedGraph::new(closed, g.ranks().to_vec()).expect("ranks were already distinct")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Graph, Letter};

    fn ordered(n: usize, edges: &[(usize, char, usize)]) -> OrderedGraph<Letter> {
        let g = Graph::new(n, edges.iter().map(|&(s, c, d)| Edge::new(s, Letter::Sym(c), d)));
        OrderedGraph::by_index(g)
    }

    #[test]
    fn downward_edge_is_monotone() {
        assert_eq!(check_monotone(&ordered(2, &[(1, 'a', 0)])), Ok(()));
    }

    #[test]
    fn upward_edge_demands_the_wide_edge() {
        let g = ordered(2, &[(0, 'a', 1)]);
        assert_eq!(check_monotone(&g), Err(Edge::new(1, Letter::Sym('a'), 0)));
    }

    #[test]
    fn full_downward_chain() {
        let mut edges = vec![];
        for v in 0..3 {
            for w in 0..=v {
                edges.push((v, 'e', w));
            }
        }
        assert_eq!(check_monotone(&ordered(3, &edges)), Ok(()));
    }

    #[test]
    fn closure_is_monotone_and_idempotent() {
        let g = ordered(3, &[(0, 'a', 2), (2, 'b', 1), (1, 'a', 0)]);
        let closed = monotone_closure(&g);
        assert_eq!(check_monotone(&closed), Ok(()));
        assert_eq!(monotone_closure(&closed), closed);
        assert!(closed.graph().has_edge(2, Letter::Sym('a'), 0));
    }
}
