//! Maximum mean cycles (Karp) in exact rational arithmetic.

use num_rational::Ratio;

use crate::graph::{Edge, Graph, Label};

/// A cycle of maximal mean weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeanCycle<L> {
    pub mean: Ratio<i64>,
    pub cycle: Vec<Edge<L>>,
}

/// Karp's algorithm on all vertices at once (a virtual source with
/// zero-weight edges to every vertex). Returns `None` for acyclic graphs.
pub fn max_mean_cycle<L: Label>(g: &Graph<L>, weight: impl Fn(&Edge<L>) -> i64) -> Option<MeanCycle<L>> {
    let n = g.vertex_count();
    if n == 0 {
        return None;
    }
    // d[k][v]: heaviest walk with exactly k edges ending in v.
    let mut d: Vec<Vec<Option<i64>>> = vec![vec![Some(0); n]];
    for k in 1..=n {
        let mut row = vec![None; n];
        for e in g.edges() {
            if let Some(x) = d[k - 1][e.src] {
                let y = x + weight(e);
                if row[e.dst].is_none_or(|r| y > r) {
                    row[e.dst] = Some(y);
                }
            }
        }
        d.push(row);
    }
    let mut best: Option<Ratio<i64>> = None;
    for v in 0..n {
        let Some(dn) = d[n][v] else { continue };
        let worst = (0..n)
            .filter_map(|k| d[k][v].map(|dk| Ratio::new(dn - dk, (n - k) as i64)))
            .min()
            .expect("k = 0 is always finite");
        if best.is_none_or(|b| worst > b) {
            best = Some(worst);
        }
    }
    let mean = best?;
    let cycle = tight_cycle(g, &weight, mean);
    Some(MeanCycle { mean, cycle })
}

/// With `w' = q·w - p` for `mean = p/q`, no cycle is positive; longest-path
/// potentials make every optimal cycle tight, and every tight cycle optimal.
fn tight_cycle<L: Label>(g: &Graph<L>, weight: &impl Fn(&Edge<L>) -> i64, mean: Ratio<i64>) -> Vec<Edge<L>> {
    let (p, q) = (*mean.numer(), *mean.denom());
    let shifted = |e: &Edge<L>| q * weight(e) - p;
    let n = g.vertex_count();
    let mut pi = vec![0i64; n];
    for _ in 0..n {
        let mut changed = false;
        for e in g.edges() {
            let y = pi[e.src] + shifted(e);
            if y > pi[e.dst] {
                pi[e.dst] = y;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let tight: Vec<&Edge<L>> = g.edges().iter().filter(|e| pi[e.src] + shifted(e) == pi[e.dst]).collect();
    let mut out: Vec<Vec<&Edge<L>>> = vec![Vec::new(); n];
    for e in &tight {
        out[e.src].push(e);
    }
    // Iterative DFS; the first back edge closes a cycle.
    let mut color = vec![0u8; n];
    for s in 0..n {
        if color[s] != 0 {
            continue;
        }
        let mut stack: Vec<(usize, usize)> = vec![(s, 0)];
        let mut path: Vec<Edge<L>> = Vec::new();
        color[s] = 1;
        while let Some(top) = stack.last_mut() {
            let v = top.0;
            if top.1 < out[v].len() {
                let e = *out[v][top.1];
                top.1 += 1;
                match color[e.dst] {
                    0 => {
                        color[e.dst] = 1;
                        path.push(e);
                        stack.push((e.dst, 0));
                    }
                    1 => {
                        let start = path.iter().position(|x| x.src == e.dst).unwrap_or(path.len());
                        let mut cycle: Vec<Edge<L>> = path[start..].to_vec();
                        cycle.push(e);
                        return cycle;
                    }
                    _ => {}
                }
            } else {
                color[v] = 2;
                stack.pop();
                path.pop();
            }
        }
    }
    unreachable!("an optimal cycle is always tight")
}
