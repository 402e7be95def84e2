//! Arena censuses: exhaustive up to isomorphism, or random.

use std::collections::HashMap;
use std::fmt;

use itertools::Itertools;
use rand::seq::index::sample;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::games::{Arena, Player};
use crate::graph::{Edge, Graph, Letter};
use crate::objectives::{graph_satisfies, Objective};

/// Which arenas a survey looks at.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Census {
    /// Every arena with at most `max_vertices` vertices and out-degree
    /// between 1 and `max_out_degree`, up to isomorphism. Owners of
    /// vertices with a single edge are immaterial and fixed to Adam.
    Exhaustive { max_vertices: usize, max_out_degree: usize },
    Random { samples: usize, max_vertices: usize, max_out_degree: usize, seed: u64 },
}

impl fmt::Display for Census {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Census::Exhaustive { max_vertices, max_out_degree } => {
                write!(f, "exhaustive(vertices<={max_vertices}, out-degree<={max_out_degree})")
            }
            Census::Random { samples, max_vertices, max_out_degree, seed } => {
                write!(f, "random(samples={samples}, vertices<={max_vertices}, out-degree<={max_out_degree}, seed={seed})")
            }
        }
    }
}

impl Census {
    /// The census over the given letters, in a deterministic order.
    pub fn arenas<'a>(&self, letters: &'a [Letter]) -> Box<dyn Iterator<Item = Arena> + 'a> {
        match *self {
            Census::Exhaustive { max_vertices, max_out_degree } => Box::new(
                (1..=max_vertices).flat_map(move |n| ExhaustiveArenas::new(n, letters, max_out_degree)),
            ),
            Census::Random { samples, max_vertices, max_out_degree, seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                Box::new((0..samples).map(move |_| random_arena(&mut rng, letters, max_vertices, max_out_degree)))
            }
        }
    }

    /// Number of labelled arenas an exhaustive census walks through before
    /// isomorphism reduction; the number of samples for a random one.
    pub fn raw_size(&self, letters: usize) -> u128 {
        match *self {
            Census::Exhaustive { max_vertices, max_out_degree } => (1..=max_vertices)
                .map(|n| (vertex_codes(n, letters, max_out_degree).len() as u128).saturating_pow(n as u32))
                .fold(0u128, u128::saturating_add),
            Census::Random { samples, .. } => samples as u128,
        }
    }
}

/// A vertex's owner and its sorted set of `(letter index, target)` edges.
type Code = (Player, Vec<(usize, usize)>);

fn vertex_codes(n: usize, letters: usize, max_out_degree: usize) -> Vec<Code> {
    let options: Vec<(usize, usize)> = (0..letters).cartesian_product(0..n).collect();
    let mut codes = Vec::new();
    for d in 1..=max_out_degree.min(options.len()) {
        for set in options.iter().copied().combinations(d) {
            if d == 1 {
                codes.push((Player::Adam, set));
            } else {
                codes.push((Player::Eve, set.clone()));
                codes.push((Player::Adam, set));
            }
        }
    }
    codes
}

/// Canonical representatives of the arenas on exactly `n` vertices: the
/// tuples of vertex codes that are lexicographically least among all their
/// relabellings.
pub struct ExhaustiveArenas<'a> {
    letters: &'a [Letter],
    codes: Vec<Code>,
    /// `remap[p][c]`: code `c` after relabelling targets by permutation `p`.
    remap: Vec<Vec<usize>>,
    perms: Vec<Vec<usize>>,
    tuple: Vec<usize>,
    done: bool,
}

impl<'a> ExhaustiveArenas<'a> {
    pub fn new(n: usize, letters: &'a [Letter], max_out_degree: usize) -> Self {
        let codes = vertex_codes(n, letters.len(), max_out_degree);
        let index: HashMap<&Code, usize> = codes.iter().enumerate().map(|(i, c)| (c, i)).collect();
        let perms: Vec<Vec<usize>> = (0..n).permutations(n).collect();
        let remap = perms
            .iter()
            .map(|p| {
                codes
                    .iter()
                    .map(|(o, set)| {
                        let mut moved: Vec<(usize, usize)> = set.iter().map(|&(c, d)| (c, p[d])).collect();
                        moved.sort_unstable();
                        index[&(*o, moved)]
                    })
                    .collect()
            })
            .collect();
        let done = codes.is_empty() || n == 0;
        ExhaustiveArenas { letters, codes, remap, perms, tuple: vec![0; n], done }
    }

    fn is_canonical(&self) -> bool {
        let n = self.tuple.len();
        let mut moved = vec![0; n];
        for (p, table) in self.perms.iter().zip(&self.remap) {
            for v in 0..n {
                moved[p[v]] = table[self.tuple[v]];
            }
            if moved < self.tuple {
                return false;
            }
        }
        true
    }

    fn advance(&mut self) {
        for slot in self.tuple.iter_mut().rev() {
            *slot += 1;
            if *slot < self.codes.len() {
                return;
            }
            *slot = 0;
        }
        self.done = true;
    }

    fn build(&self) -> Arena {
        let mut edges = Vec::new();
        let mut owner = Vec::new();
        for (v, &c) in self.tuple.iter().enumerate() {
            let (o, set) = &self.codes[c];
            owner.push(*o);
            edges.extend(set.iter().map(|&(l, d)| Edge::new(v, self.letters[l], d)));
        }
        Arena::new(Graph::new(self.tuple.len(), edges), owner).expect("every vertex has an edge")
    }
}

impl Iterator for ExhaustiveArenas<'_> {
    type Item = Arena;

    fn next(&mut self) -> Option<Arena> {
        while !self.done {
            let canonical = self.is_canonical();
            let arena = canonical.then(|| self.build());
            self.advance();
            if arena.is_some() {
                return arena;
            }
        }
        None
    }
}

/// A random arena with `1..=max_vertices` vertices, each with between 1 and
/// `max_out_degree` distinct edges and a random owner.
pub fn random_arena<R: Rng + ?Sized>(rng: &mut R, letters: &[Letter], max_vertices: usize, max_out_degree: usize) -> Arena {
    let g = random_graph(rng, letters, max_vertices, max_out_degree);
    let owner = g.vertices().map(|_| if rng.gen_bool(0.5) { Player::Eve } else { Player::Adam }).collect();
    Arena::new(g, owner).expect("random graphs are sinkless")
}

/// A random sinkless graph, as in [`random_arena`].
pub fn random_graph<R: Rng + ?Sized>(
    rng: &mut R,
    letters: &[Letter],
    max_vertices: usize,
    max_out_degree: usize,
) -> Graph<Letter> {
    let n = rng.gen_range(1..=max_vertices.max(1));
    let options = letters.len() * n;
    let mut edges = Vec::new();
    for v in 0..n {
        let d = rng.gen_range(1..=max_out_degree.clamp(1, options));
        for i in sample(rng, options, d) {
            edges.push(Edge::new(v, letters[i / n], i % n));
        }
    }
    Graph::new(n, edges)
}

/// Rejection-samples a random graph satisfying `w`; `None` after `tries`
/// failed attempts.
pub fn random_satisfying_graph<R: Rng + ?Sized>(
    rng: &mut R,
    w: &Objective,
    max_vertices: usize,
    max_out_degree: usize,
    tries: usize,
) -> Option<Graph<Letter>> {
    let letters = w.alphabet().letters().to_vec();
    (0..tries).find_map(|_| {
        let g = random_graph(rng, &letters, max_vertices, max_out_degree);
        graph_satisfies(w, &g).ok()?.is_satisfied().then_some(g)
    })
}
