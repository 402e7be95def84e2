//! Graph morphisms: validation and backtracking search.

use std::collections::VecDeque;

use fixedbitset::FixedBitSet;
use thiserror::Error;

use super::{Edge, Graph, Label};

/// A vertex map `source → target` preserving every labelled edge.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Morphism {
    pub map: Vec<usize>,
}

impl Morphism {
    pub fn identity(n: usize) -> Self {
        Morphism { map: (0..n).collect() }
    }

    pub fn apply(&self, v: usize) -> usize {
        self.map[v]
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &Morphism) -> Morphism {
        Morphism { map: self.map.iter().map(|&v| other.map[v]).collect() }
    }

    pub fn is_surjective(&self, target_size: usize) -> bool {
        let mut hit = vec![false; target_size];
        for &v in &self.map {
            hit[v] = true;
        }
        hit.into_iter().all(|h| h)
    }
}

/// Returns the first source edge whose image is missing from `h`.
pub fn is_morphism<L: Label>(g: &Graph<L>, h: &Graph<L>, map: &[usize]) -> Result<(), Edge<L>> {
    if map.len() != g.vertex_count() {
        return match g.edges().first() {
            Some(e) => Err(*e),
            None => Ok(()),
        };
    }
    for e in g.edges() {
        let (s, d) = (map[e.src], map[e.dst]);
        if s >= h.vertex_count() || d >= h.vertex_count() || !h.has_edge(s, e.label, d) {
            return Err(*e);
        }
    }
    Ok(())
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SearchError {
    #[error("morphism search exceeded its budget of {0} nodes")]
    Budget(u64),
}

/// Default node budget for [`find_morphism`].
pub const DEFAULT_BUDGET: u64 = 1_000_000;

/// Searches for a morphism `g → h` with forward checking.
pub fn find_morphism<L: Label>(g: &Graph<L>, h: &Graph<L>) -> Result<Option<Morphism>, SearchError> {
    MorphismSearch::new(g, h).run()
}

/// Configurable morphism search: vertices may be pinned to fixed images.
pub struct MorphismSearch<'a, L> {
    g: &'a Graph<L>,
    h: &'a Graph<L>,
    pins: Vec<(usize, usize)>,
    budget: u64,
}

struct Index {
    // succ[c][u]: c-successors of u in h, pred[c][u]: c-predecessors.
    succ: Vec<Vec<FixedBitSet>>,
    pred: Vec<Vec<FixedBitSet>>,
    // g-edges as (src, label index, dst).
    edges: Vec<(usize, usize, usize)>,
    incident: Vec<Vec<usize>>,
}

impl<'a, L: Label> MorphismSearch<'a, L> {
    pub fn new(g: &'a Graph<L>, h: &'a Graph<L>) -> Self {
        MorphismSearch { g, h, pins: Vec::new(), budget: DEFAULT_BUDGET }
    }

    pub fn pin(mut self, v: usize, image: usize) -> Self {
        self.pins.push((v, image));
        self
    }

    pub fn budget(mut self, nodes: u64) -> Self {
        self.budget = nodes;
        self
    }

    fn index(&self) -> Option<Index> {
        let labels = self.h.labels();
        let m = self.h.vertex_count();
        let mut succ = vec![vec![FixedBitSet::with_capacity(m); m]; labels.len()];
        let mut pred = succ.clone();
        for e in self.h.edges() {
            let c = labels.binary_search(&e.label).expect("label collected from h");
            succ[c][e.src].insert(e.dst);
            pred[c][e.dst].insert(e.src);
        }
        let mut edges = Vec::with_capacity(self.g.edge_count());
        let mut incident = vec![Vec::new(); self.g.vertex_count()];
        for e in self.g.edges() {
            let c = labels.binary_search(&e.label).ok()?;
            incident[e.src].push(edges.len());
            if e.dst != e.src {
                incident[e.dst].push(edges.len());
            }
            edges.push((e.src, c, e.dst));
        }
        Some(Index { succ, pred, edges, incident })
    }

    pub fn run(self) -> Result<Option<Morphism>, SearchError> {
        let n = self.g.vertex_count();
        let m = self.h.vertex_count();
        if n == 0 {
            return Ok(Some(Morphism { map: Vec::new() }));
        }
        if m == 0 {
            return Ok(None);
        }
        let Some(index) = self.index() else { return Ok(None) };

        let mut domains = vec![FixedBitSet::with_capacity(m); n];
        for d in &mut domains {
            d.insert_range(..);
        }
        for &(v, u) in &self.pins {
            if u >= m {
                return Ok(None);
            }
            domains[v].clear();
            domains[v].insert(u);
        }
        // Unary filtering: label signatures and self-loops.
        for &(s, c, d) in &index.edges {
            if s == d {
                let ok: FixedBitSet = (0..m).filter(|&u| index.succ[c][u].contains(u)).collect();
                domains[s].intersect_with(&ok);
            } else {
                let has_out: FixedBitSet = (0..m).filter(|&u| !index.succ[c][u].is_clear()).collect();
                let has_in: FixedBitSet = (0..m).filter(|&u| !index.pred[c][u].is_clear()).collect();
                domains[s].intersect_with(&has_out);
                domains[d].intersect_with(&has_in);
            }
        }
        if !propagate(&index, &mut domains, (0..index.edges.len()).collect()) {
            return Ok(None);
        }

        let order = search_order(&index, &domains);
        let mut nodes = 0u64;
        let found = backtrack(&index, &order, 0, domains, &mut nodes, self.budget)?;
        Ok(found.map(|domains| Morphism {
            map: domains.iter().map(|d| d.ones().next().expect("assigned")).collect(),
        }))
    }
}

/// Arc consistency over the g-edges listed in `queue`. Returns false when a
/// domain empties.
fn propagate(index: &Index, domains: &mut [FixedBitSet], queue: Vec<usize>) -> bool {
    let mut queue: VecDeque<usize> = queue.into();
    let mut queued = vec![false; index.edges.len()];
    for &i in &queue {
        queued[i] = true;
    }
    while let Some(i) = queue.pop_front() {
        queued[i] = false;
        let (s, c, d) = index.edges[i];
        let mut changed = Vec::new();
        let keep_s: Vec<usize> =
            domains[s].ones().filter(|&u| !index.succ[c][u].is_disjoint(&domains[d])).collect();
        if keep_s.len() != domains[s].count_ones(..) {
            domains[s] = keep_s.into_iter().collect_bitset(domains[s].len());
            changed.push(s);
        }
        let keep_d: Vec<usize> =
            domains[d].ones().filter(|&u| !index.pred[c][u].is_disjoint(&domains[s])).collect();
        if keep_d.len() != domains[d].count_ones(..) {
            domains[d] = keep_d.into_iter().collect_bitset(domains[d].len());
            changed.push(d);
        }
        for v in changed {
            if domains[v].is_clear() {
                return false;
            }
            for &j in &index.incident[v] {
                if j != i && !queued[j] {
                    queued[j] = true;
                    queue.push_back(j);
                }
            }
        }
    }
    true
}

trait CollectBitset {
    fn collect_bitset(self, len: usize) -> FixedBitSet;
}

impl<I: Iterator<Item = usize>> CollectBitset for I {
    fn collect_bitset(self, len: usize) -> FixedBitSet {
        let mut b = FixedBitSet::with_capacity(len);
        b.extend(self);
        b
    }
}

/// Breadth-first order from the most constrained vertex of each component,
/// so that every assigned vertex after the first has an assigned neighbour.
fn search_order(index: &Index, domains: &[FixedBitSet]) -> Vec<usize> {
    let n = domains.len();
    let mut seen = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut starts: Vec<usize> = (0..n).collect();
    starts.sort_by_key(|&v| (domains[v].count_ones(..), v));
    for start in starts {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &i in &index.incident[v] {
                let (s, _, d) = index.edges[i];
                for w in [s, d] {
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
        }
    }
    order
}

fn backtrack(
    index: &Index,
    order: &[usize],
    depth: usize,
    domains: Vec<FixedBitSet>,
    nodes: &mut u64,
    budget: u64,
) -> Result<Option<Vec<FixedBitSet>>, SearchError> {
    let Some(&v) = order.get(depth) else { return Ok(Some(domains)) };
    let candidates: Vec<usize> = domains[v].ones().collect();
    if candidates.len() == 1 {
        return backtrack(index, order, depth + 1, domains, nodes, budget);
    }
    for u in candidates {
        *nodes += 1;
        if *nodes > budget {
            return Err(SearchError::Budget(budget));
        }
        let mut next = domains.clone();
        next[v].clear();
        next[v].insert(u);
        if propagate(index, &mut next, index.incident[v].clone()) {
            if let Some(done) = backtrack(index, order, depth + 1, next, nodes, budget)? {
                return Ok(Some(done));
            }
        }
    }
    Ok(None)
}
