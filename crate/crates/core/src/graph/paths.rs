//! Reachability, strongly connected components, lassos and unfoldings.

use std::collections::VecDeque;

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;

use super::{Edge, Graph, Label};

/// A finite witness of an infinite path: `stem` followed by `cycle` forever.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Lasso<L> {
    pub stem: Vec<Edge<L>>,
    pub cycle: Vec<Edge<L>>,
}

impl<L: Label> Lasso<L> {
    pub fn stem_labels(&self) -> Vec<L> {
        self.stem.iter().map(|e| e.label).collect()
    }

    pub fn cycle_labels(&self) -> Vec<L> {
        self.cycle.iter().map(|e| e.label).collect()
    }

    /// Checks that the edges chain up and close the loop.
    pub fn is_well_formed(&self) -> bool {
        let Some(first) = self.cycle.first() else { return false };
        let path = self.stem.iter().chain(&self.cycle);
        let mut prev: Option<usize> = None;
        for e in path {
            if prev.is_some_and(|p| p != e.src) {
                return false;
            }
            prev = Some(e.dst);
        }
        prev == Some(first.src)
    }

    /// Well-formed and every edge present in `g`.
    pub fn replays_in(&self, g: &Graph<L>) -> bool {
        self.is_well_formed()
            && self.stem.iter().chain(&self.cycle).all(|e| g.has_edge(e.src, e.label, e.dst))
    }

    /// Rewrites every edge through `f`, e.g. to project a product lasso.
    pub fn map<M: Label>(&self, mut f: impl FnMut(&Edge<L>) -> Edge<M>) -> Lasso<M> {
        Lasso {
            stem: self.stem.iter().map(&mut f).collect(),
            cycle: self.cycle.iter().map(&mut f).collect(),
        }
    }
}

/// All simple cycles of length at most `max_cycle_len`, each reported once
/// (rotated to start at its least vertex) with an empty stem.
///
/// Parallel edges with distinct labels give distinct cycles.
pub fn enumerate_lassos<L: Label>(g: &Graph<L>, max_cycle_len: usize) -> Vec<Lasso<L>> {
    let mut out = Vec::new();
    let mut on_path = vec![false; g.vertex_count()];
    let mut path = Vec::new();
    for start in g.vertices() {
        on_path[start] = true;
        cycles_from(g, start, start, max_cycle_len, &mut on_path, &mut path, &mut out);
        on_path[start] = false;
    }
    out
}

fn cycles_from<L: Label>(
    g: &Graph<L>,
    start: usize,
    at: usize,
    max_len: usize,
    on_path: &mut [bool],
    path: &mut Vec<Edge<L>>,
    out: &mut Vec<Lasso<L>>,
) {
    if path.len() == max_len {
        return;
    }
    for e in g.out_edges(at) {
        if e.dst == start {
            path.push(*e);
            out.push(Lasso { stem: Vec::new(), cycle: path.clone() });
            path.pop();
        } else if e.dst > start && !on_path[e.dst] {
            on_path[e.dst] = true;
            path.push(*e);
            cycles_from(g, start, e.dst, max_len, on_path, path, out);
            path.pop();
            on_path[e.dst] = false;
        }
    }
}

/// Vertices reachable from `sources` (inclusive).
pub fn reachable_from<L: Label>(g: &Graph<L>, sources: impl IntoIterator<Item = usize>) -> Vec<bool> {
    let mut seen = vec![false; g.vertex_count()];
    let mut stack: Vec<usize> = Vec::new();
    for s in sources {
        if !seen[s] {
            seen[s] = true;
            stack.push(s);
        }
    }
    while let Some(v) = stack.pop() {
        for e in g.out_edges(v) {
            if !seen[e.dst] {
                seen[e.dst] = true;
                stack.push(e.dst);
            }
        }
    }
    seen
}

/// Shortest edge path from `from` to any vertex satisfying `goal`, using only
/// edges accepted by `allowed`. The empty path is returned when `from` itself
/// is a goal.
pub fn shortest_path<L: Label>(
    g: &Graph<L>,
    from: usize,
    goal: impl Fn(usize) -> bool,
    allowed: impl Fn(&Edge<L>) -> bool,
) -> Option<Vec<Edge<L>>> {
    let mut parent: Vec<Option<Edge<L>>> = vec![None; g.vertex_count()];
    let mut seen = vec![false; g.vertex_count()];
    seen[from] = true;
    let mut queue = VecDeque::from([from]);
    while let Some(v) = queue.pop_front() {
        if goal(v) {
            let mut path = Vec::new();
            let mut at = v;
            while let Some(e) = parent[at] {
                path.push(e);
                at = e.src;
            }
            path.reverse();
            return Some(path);
        }
        for e in g.out_edges(v) {
            if allowed(e) && !seen[e.dst] {
                seen[e.dst] = true;
                parent[e.dst] = Some(*e);
                queue.push_back(e.dst);
            }
        }
    }
    None
}

/// Strongly connected component id of every vertex, restricted to the edges
/// accepted by `allowed`. Ids are in reverse topological order.
pub fn scc_ids<L: Label>(g: &Graph<L>, allowed: impl Fn(&Edge<L>) -> bool) -> Vec<usize> {
    let mut pg = DiGraph::<(), ()>::with_capacity(g.vertex_count(), g.edge_count());
    let nodes: Vec<_> = g.vertices().map(|_| pg.add_node(())).collect();
    for e in g.edges().iter().filter(|e| allowed(e)) {
        pg.add_edge(nodes[e.src], nodes[e.dst], ());
    }
    let mut ids = vec![0; g.vertex_count()];
    for (i, comp) in tarjan_scc(&pg).into_iter().enumerate() {
        for v in comp {
            ids[v.index()] = i;
        }
    }
    ids
}

/// A depth-bounded unfolding together with the vertex each node copies.
#[derive(Clone, Debug)]
pub struct Unfolding<L> {
    pub tree: Graph<L>,
    pub origin: Vec<usize>,
    pub depth: Vec<usize>,
}

impl<L: Label> Unfolding<L> {
    pub fn root(&self) -> usize {
        0
    }

    /// The subtree rooted at `t`, re-indexed with `t` as vertex 0.
    pub fn subtree(&self, t: usize) -> Unfolding<L> {
        let keep = reachable_from(&self.tree, [t]);
        let (tree, map) = self.tree.induced(&keep);
        let mut origin = vec![0; tree.vertex_count()];
        let mut depth = vec![0; tree.vertex_count()];
        for (old, new) in map.iter().enumerate() {
            if let Some(new) = new {
                origin[*new] = self.origin[old];
                depth[*new] = self.depth[old] - self.depth[t];
            }
        }
        // Tree vertices are numbered in BFS order, so t keeps the least index.
        debug_assert_eq!(map[t], Some(0));
        Unfolding { tree, origin, depth }
    }

    /// Longest distance from `t` to a leaf.
    pub fn height(&self, t: usize) -> usize {
        let mut best = 0;
        let mut stack = vec![t];
        while let Some(v) = stack.pop() {
            best = best.max(self.depth[v] - self.depth[t]);
            for e in self.tree.out_edges(v) {
                if e.dst != v {
                    stack.push(e.dst);
                }
            }
        }
        best
    }
}

/// Unfolds `g` from `root` into a tree of the given depth (in edges).
/// Leaves get a `pad` self-loop so the tree stays sinkless.
pub fn unfold_tree<L: Label>(g: &Graph<L>, root: usize, depth: usize, pad: L) -> Unfolding<L> {
    let mut origin = vec![root];
    let mut level = vec![0];
    let mut edges = Vec::new();
    let mut next = 0;
    while next < origin.len() {
        let (t, v, d) = (next, origin[next], level[next]);
        next += 1;
        if d == depth {
            edges.push(Edge::new(t, pad, t));
            continue;
        }
        for e in g.out_edges(v) {
            let child = origin.len();
            origin.push(e.dst);
            level.push(d + 1);
            edges.push(Edge::new(t, e.label, child));
        }
    }
    Unfolding { tree: Graph::new(origin.len(), edges), origin, depth: level }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{is_morphism, Letter};

    fn graph(n: usize, edges: &[(usize, char, usize)]) -> Graph<Letter> {
        Graph::new(n, edges.iter().map(|&(s, c, d)| Edge::new(s, Letter::Sym(c), d)))
    }

    #[test]
    fn self_loop_has_one_lasso() {
        let lassos = enumerate_lassos(&graph(1, &[(0, 'a', 0)]), 1);
        assert_eq!(lassos.len(), 1);
        assert!(lassos[0].stem.is_empty());
        assert_eq!(lassos[0].cycle.len(), 1);
    }

    #[test]
    fn two_cycle_is_found() {
        let g = graph(2, &[(0, 'a', 1), (1, 'b', 0)]);
        let lassos = enumerate_lassos(&g, 2);
        assert_eq!(lassos.len(), 1);
        assert_eq!(lassos[0].cycle_labels(), vec![Letter::Sym('a'), Letter::Sym('b')]);
        assert!(lassos[0].replays_in(&g));
        assert!(enumerate_lassos(&g, 1).is_empty());
    }

    #[test]
    fn loop_unfolds_to_a_path() {
        let u = unfold_tree(&graph(1, &[(0, 'a', 0)]), 0, 2, Letter::Sym('#'));
        assert_eq!(u.tree.vertex_count(), 3);
        assert_eq!(u.origin, vec![0, 0, 0]);
    }

    #[test]
    fn binary_unfolding_is_bounded() {
        let g = graph(1, &[(0, 'a', 0), (0, 'b', 0)]);
        let u = unfold_tree(&g, 0, 3, Letter::Sym('#'));
        assert_eq!(u.tree.vertex_count(), 15);
        assert!(u.tree.is_sinkless());
    }

    #[test]
    fn projection_is_a_morphism_when_padding_exists() {
        let g = graph(2, &[(0, 'a', 1), (1, 'b', 0), (0, '#', 0), (1, '#', 1)]);
        let u = unfold_tree(&g, 0, 3, Letter::Sym('#'));
        assert_eq!(is_morphism(&u.tree, &g, &u.origin), Ok(()));
    }

    #[test]
    fn subtree_is_reindexed() {
        let g = graph(1, &[(0, 'a', 0), (0, 'b', 0)]);
        let u = unfold_tree(&g, 0, 3, Letter::Sym('#'));
        let s = u.subtree(1);
        assert_eq!(s.tree.vertex_count(), 7);
        assert_eq!(s.height(0), 2);
        assert_eq!(u.height(0), 3);
    }

    #[test]
    fn sccs_split_by_filter() {
        let g = graph(2, &[(0, 'a', 1), (1, 'b', 0)]);
        let all = scc_ids(&g, |_| true);
        assert_eq!(all[0], all[1]);
        let only_a = scc_ids(&g, |e| e.label == Letter::Sym('a'));
        assert_ne!(only_a[0], only_a[1]);
    }

    #[test]
    fn shortest_path_respects_filter() {
        let g = graph(3, &[(0, 'a', 1), (1, 'a', 2), (0, 'b', 2), (2, 'a', 2)]);
        let p = shortest_path(&g, 0, |v| v == 2, |_| true).unwrap();
        assert_eq!(p.len(), 1);
        let p = shortest_path(&g, 0, |v| v == 2, |e| e.label == Letter::Sym('a')).unwrap();
        assert_eq!(p.len(), 2);
    }
}
