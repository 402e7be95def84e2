//! Edge-labelled graphs, the substrate for arenas, strategies and automata.
//!
//! A [`Graph`] is generic over its label type so that the same code handles
//! plain `C`-graphs (`Graph<Letter>`), automata (`Graph<(Letter, Kind)>`) and
//! product games (`Graph<u32>` priorities). Graphs are immutable once built;
//! edges are kept sorted by `(src, label, dst)` which makes every traversal
//! in the crate deterministic.

mod monotone;
mod morphism;
mod paths;

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

use thiserror::Error;

pub use monotone::{check_monotone, monotone_closure};
pub use morphism::{find_morphism, is_morphism, Morphism, MorphismSearch, SearchError, DEFAULT_BUDGET};
pub use paths::{
    enumerate_lassos, reachable_from, scc_ids, shortest_path, unfold_tree, Lasso, Unfolding,
};

/// Anything usable as an edge label.
pub trait Label: Copy + Ord + Hash + fmt::Debug {}
impl<T: Copy + Ord + Hash + fmt::Debug> Label for T {}

/// A letter of a finite alphabet: an integer (weight, priority) or a symbol.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    Int(i64),
    Sym(char),
}

impl Letter {
    /// The integer value for weight and priority alphabets.
    pub fn value(self) -> Option<i64> {
        match self {
            Letter::Int(v) => Some(v),
            Letter::Sym(_) => None,
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Letter::Int(v) => write!(f, "{v}"),
            Letter::Sym(c) => write!(f, "{c}"),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("invalid letter `{0}`: expected an integer or a single character")]
pub struct ParseLetterError(pub String);

impl FromStr for Letter {
    type Err = ParseLetterError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if let Ok(v) = s.parse::<i64>() {
            return Ok(Letter::Int(v));
        }
        let mut chars = s.chars();
        match (chars.next(), chars.next()) {
            (Some(c), None) if !c.is_whitespace() => Ok(Letter::Sym(c)),
            _ => Err(ParseLetterError(s.to_string())),
        }
    }
}

impl From<i64> for Letter {
    fn from(v: i64) -> Self {
        Letter::Int(v)
    }
}

impl From<char> for Letter {
    fn from(c: char) -> Self {
        Letter::Sym(c)
    }
}

/// A finite, sorted set of letters.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Alphabet {
    letters: Vec<Letter>,
}

impl Alphabet {
    pub fn new(letters: impl IntoIterator<Item = Letter>) -> Self {
        let mut letters: Vec<Letter> = letters.into_iter().collect();
        letters.sort();
        letters.dedup();
        Alphabet { letters }
    }

    /// Integer letters `lo..=hi`.
    pub fn range(lo: i64, hi: i64) -> Self {
        Alphabet::new((lo..=hi).map(Letter::Int))
    }

    /// One symbolic letter per character of `symbols`.
    pub fn symbols(symbols: &str) -> Self {
        Alphabet::new(symbols.chars().map(Letter::Sym))
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn contains(&self, c: Letter) -> bool {
        self.letters.binary_search(&c).is_ok()
    }

    /// Position of `c` in the sorted letter list.
    pub fn index_of(&self, c: Letter) -> Option<usize> {
        self.letters.binary_search(&c).ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = Letter> + '_ {
        self.letters.iter().copied()
    }

    /// `Some((lo, hi))` when the alphabet is exactly the integers `lo..=hi`.
    pub fn as_range(&self) -> Option<(i64, i64)> {
        let first = self.letters.first()?.value()?;
        for (i, c) in self.letters.iter().enumerate() {
            if c.value() != Some(first + i as i64) {
                return None;
            }
        }
        Some((first, first + self.letters.len() as i64 - 1))
    }

    /// Largest absolute integer value, 0 for symbolic alphabets.
    pub fn max_abs_weight(&self) -> i64 {
        self.letters.iter().filter_map(|c| c.value()).map(i64::abs).max().unwrap_or(0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge<L> {
    pub src: usize,
    pub label: L,
    pub dst: usize,
}

impl<L> Edge<L> {
    pub fn new(src: usize, label: L, dst: usize) -> Self {
        Edge { src, label, dst }
    }
}

/// Finite edge-labelled directed graph on vertices `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Graph<L> {
    n: usize,
    edges: Vec<Edge<L>>,
    offsets: Vec<usize>,
}

impl<L: Label> Graph<L> {
    /// Builds a graph, sorting and deduplicating the edges.
    ///
    /// Panics if an edge endpoint is not below `n`. Sinks are allowed here;
    /// use [`Graph::validate`] to detect them.
    pub fn new(n: usize, edges: impl IntoIterator<Item = Edge<L>>) -> Self {
        let mut edges: Vec<Edge<L>> = edges.into_iter().collect();
        for e in &edges {
            assert!(e.src < n && e.dst < n, "edge {e:?} out of range for {n} vertices");
        }
        edges.sort();
        edges.dedup();
        let mut offsets = vec![0; n + 1];
        for e in &edges {
            offsets[e.src + 1] += 1;
        }
        for v in 0..n {
            offsets[v + 1] += offsets[v];
        }
        Graph { n, edges, offsets }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> std::ops::Range<usize> {
        0..self.n
    }

    /// All edges, sorted by `(src, label, dst)`.
    pub fn edges(&self) -> &[Edge<L>] {
        &self.edges
    }

    /// Index range of the out-edges of `v` inside [`Graph::edges`].
    pub fn out_range(&self, v: usize) -> std::ops::Range<usize> {
        self.offsets[v]..self.offsets[v + 1]
    }

    pub fn out_edges(&self, v: usize) -> &[Edge<L>] {
        &self.edges[self.out_range(v)]
    }

    /// Out-edges of `v` carrying `label`.
    pub fn out_with_label(&self, v: usize, label: L) -> &[Edge<L>] {
        let out = self.out_edges(v);
        let lo = out.partition_point(|e| e.label < label);
        let hi = out.partition_point(|e| e.label <= label);
        &out[lo..hi]
    }

    pub fn successors(&self, v: usize, label: L) -> impl Iterator<Item = usize> + '_ {
        self.out_with_label(v, label).iter().map(|e| e.dst)
    }

    pub fn has_edge(&self, src: usize, label: L, dst: usize) -> bool {
        src < self.n && self.out_edges(src).binary_search(&Edge::new(src, label, dst)).is_ok()
    }

    /// Index of the edge in [`Graph::edges`], if present.
    pub fn edge_index(&self, e: &Edge<L>) -> Option<usize> {
        if e.src >= self.n {
            return None;
        }
        self.out_edges(e.src).binary_search(e).ok().map(|i| self.offsets[e.src] + i)
    }

    /// Distinct labels used by some edge, sorted.
    pub fn labels(&self) -> Vec<L> {
        let mut labels: Vec<L> = self.edges.iter().map(|e| e.label).collect();
        labels.sort();
        labels.dedup();
        labels
    }

    pub fn sinks(&self) -> Vec<usize> {
        self.vertices().filter(|&v| self.out_range(v).is_empty()).collect()
    }

    pub fn is_sinkless(&self) -> bool {
        self.vertices().all(|v| !self.out_range(v).is_empty())
    }

    /// A new graph with the extra edges added.
    pub fn with_edges(&self, extra: impl IntoIterator<Item = Edge<L>>) -> Self {
        Graph::new(self.n, self.edges.iter().copied().chain(extra))
    }

    /// Keeps the edges for which `keep` holds.
    pub fn filter_edges(&self, mut keep: impl FnMut(&Edge<L>) -> bool) -> Self {
        Graph::new(self.n, self.edges.iter().copied().filter(|e| keep(e)))
    }

    pub fn map_labels<M: Label>(&self, mut f: impl FnMut(L) -> M) -> Graph<M> {
        Graph::new(self.n, self.edges.iter().map(|e| Edge::new(e.src, f(e.label), e.dst)))
    }

    /// Induced subgraph on the vertices with `keep[v]`; returns the graph and
    /// the old-to-new index map.
    pub fn induced(&self, keep: &[bool]) -> (Self, Vec<Option<usize>>) {
        let mut map = vec![None; self.n];
        let mut next = 0;
        for v in self.vertices() {
            if keep[v] {
                map[v] = Some(next);
                next += 1;
            }
        }
        let edges = self.edges.iter().filter_map(|e| match (map[e.src], map[e.dst]) {
            (Some(s), Some(d)) => Some(Edge::new(s, e.label, d)),
            _ => None,
        });
        (Graph::new(next, edges), map)
    }

    /// Checks sinklessness and label membership.
    pub fn validate(&self, in_alphabet: impl Fn(&L) -> bool) -> ValidationReport<L> {
        ValidationReport {
            sinks: self.sinks(),
            foreign_edges: self.edges.iter().filter(|e| !in_alphabet(&e.label)).copied().collect(),
        }
    }
}

/// Problems found by [`validate_graph`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport<L> {
    pub sinks: Vec<usize>,
    pub foreign_edges: Vec<Edge<L>>,
}

impl<L> ValidationReport<L> {
    pub fn is_ok(&self) -> bool {
        self.sinks.is_empty() && self.foreign_edges.is_empty()
    }
}

/// Reports every sink and every edge whose letter is outside `alphabet`.
pub fn validate_graph(g: &Graph<Letter>, alphabet: &Alphabet) -> ValidationReport<Letter> {
    g.validate(|c| alphabet.contains(*c))
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OrderError {
    #[error("rank vector has {got} entries for {expected} vertices")]
    Length { expected: usize, got: usize },
    #[error("vertices {0} and {1} share rank {2}")]
    Tie(usize, usize, usize),
}

/// A graph with a total order on its vertices, given as distinct ranks.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OrderedGraph<L> {
    graph: Graph<L>,
    rank: Vec<usize>,
}

impl<L: Label> OrderedGraph<L> {
    pub fn new(graph: Graph<L>, rank: Vec<usize>) -> Result<Self, OrderError> {
        if rank.len() != graph.vertex_count() {
            return Err(OrderError::Length { expected: graph.vertex_count(), got: rank.len() });
        }
        let mut seen = HashMap::new();
        for (v, &r) in rank.iter().enumerate() {
            if let Some(&u) = seen.get(&r) {
                return Err(OrderError::Tie(u, v, r));
            }
            seen.insert(r, v);
        }
        Ok(OrderedGraph { graph, rank })
    }

    /// Orders vertices by index.
    pub fn by_index(graph: Graph<L>) -> Self {
        let rank = graph.vertices().collect();
        OrderedGraph { graph, rank }
    }

    pub fn graph(&self) -> &Graph<L> {
        &self.graph
    }

    pub fn rank(&self, v: usize) -> usize {
        self.rank[v]
    }

    pub fn ranks(&self) -> &[usize] {
        &self.rank
    }

    pub fn into_parts(self) -> (Graph<L>, Vec<usize>) {
        (self.graph, self.rank)
    }

    /// Vertices sorted by increasing rank.
    pub fn ascending(&self) -> Vec<usize> {
        let mut vs: Vec<usize> = self.graph.vertices().collect();
        vs.sort_by_key(|&v| self.rank[v]);
        vs
    }

    /// The vertex of maximal rank.
    pub fn max_vertex(&self) -> Option<usize> {
        self.graph.vertices().max_by_key(|&v| self.rank[v])
    }
}
