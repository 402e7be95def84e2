//! The finitary approximant `W_fin`: the union of the languages of all
//! finite monotone graphs satisfying `W`, here capped at a graph size.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::automata::catalog::explore;
use crate::automata::{transition, CoBuchiAutomaton, Kind, Resolver};
use crate::games::{winning_region, winning_region_hd, Arena};
use crate::graph::{Edge, Graph, Letter, OrderedGraph};
use crate::objectives::{graph_satisfies, Objective, UpWord};

use super::{run_census, AgreementReport, Census, LabError};

/// Largest graph size accepted by [`enumerate_monotone_satisfying_graphs`].
pub const MAX_GRAPH_SIZE: usize = 4;
const MAX_CANDIDATES: u128 = 2_000_000;

/// Non-decreasing sequences of length `k` over `-1..k`, lexicographic.
fn thresholds(k: usize) -> Vec<Vec<i64>> {
    fn go(k: usize, prefix: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if prefix.len() == k {
            out.push(prefix.clone());
            return;
        }
        let lo = prefix.last().copied().unwrap_or(-1);
        for t in lo..k as i64 {
            prefix.push(t);
            go(k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(k, &mut Vec::with_capacity(k), &mut out);
    out
}

fn binomial(n: u128, k: u128) -> u128 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// All monotone graphs with at most `size` vertices satisfying `w`.
///
/// Vertices are numbered by rank, so order-preserving isomorphism is
/// equality. A monotone graph is determined by, for each letter `c` and
/// vertex `v`, the largest `c`-successor of `v` (or none), which is
/// non-decreasing in `v`. Output is sorted by size, then by these
/// thresholds letter by letter.
pub fn enumerate_monotone_satisfying_graphs(w: &Objective, size: usize) -> Result<Vec<OrderedGraph<Letter>>, LabError> {
    if size > MAX_GRAPH_SIZE {
        return Err(LabError::Cap { what: "graph size", requested: size as u128, cap: MAX_GRAPH_SIZE as u128 });
    }
    let letters = w.alphabet().letters();
    let candidates: u128 =
        (1..=size).map(|k| binomial(2 * k as u128, k as u128).saturating_pow(letters.len() as u32)).sum();
    if candidates > MAX_CANDIDATES {
        return Err(LabError::Cap { what: "candidate graphs", requested: candidates, cap: MAX_CANDIDATES });
    }
    let mut out = Vec::new();
    for k in 1..=size {
        let per_letter = thresholds(k);
        let mut pick = vec![0usize; letters.len()];
        loop {
            let edges = letters.iter().zip(&pick).flat_map(|(&c, &p)| {
                let t = &per_letter[p];
                (0..k).flat_map(move |v| (0..=t[v]).map(move |d| Edge::new(v, c, d as usize)))
            });
            let g = Graph::new(k, edges.collect::<Vec<_>>());
            if g.is_sinkless() && graph_satisfies(w, &g)?.is_satisfied() {
                out.push(OrderedGraph::by_index(g));
            }
            let Some(i) = (0..pick.len()).rev().find(|&i| pick[i] + 1 < per_letter.len()) else { break };
            pick[i] += 1;
            pick[i + 1..].iter_mut().for_each(|p| *p = 0);
        }
    }
    Ok(out)
}

/// The capped `W_fin` automaton with its max-successor resolver.
#[derive(Clone, Debug)]
pub struct Wfin {
    pub graphs: Vec<OrderedGraph<Letter>>,
    /// First automaton state of each graph's block.
    pub offsets: Vec<usize>,
    pub automaton: CoBuchiAutomaton,
    pub resolver: Resolver,
}

impl Wfin {
    /// Top state of block `i`.
    pub fn top(&self, i: usize) -> usize {
        self.offsets[i] + self.graphs[i].graph().vertex_count() - 1
    }
}

/// Disjoint union of the graphs `G_0, G_1, …` as normal transitions, plus
/// every normal transition from `G_i` to `G_j` for `i > j` and every
/// co-Büchi transition. Blocks are stacked with `G_0` lowest; the initial
/// state is the top of `G_0`.
///
/// The resolver stays in `G_i` following the largest successor while it
/// exists, and otherwise takes a co-Büchi transition to the top of
/// `G_{i+1}` (of the last block, once there).
///
/// With no satisfying graph the automaton has one state and no normal
/// transitions.
pub fn build_wfin_automaton(w: &Objective, size: usize) -> Result<Wfin, LabError> {
    let graphs = enumerate_monotone_satisfying_graphs(w, size)?;
    let alphabet = w.alphabet().clone();
    if graphs.is_empty() {
        let ts: Vec<_> = alphabet.iter().map(|c| transition(0, c, Kind::CoBuchi, 0)).collect();
        let automaton = CoBuchiAutomaton::new(alphabet, 1, ts, 0)?.with_order(vec![0])?;
        let resolver = Resolver::identity(&automaton).expect("deterministic");
        return Ok(Wfin { graphs, offsets: vec![], automaton, resolver });
    }
    let mut offsets = Vec::with_capacity(graphs.len());
    let mut total = 0;
    for g in &graphs {
        offsets.push(total);
        total += g.graph().vertex_count();
    }
    let block_of = |s: usize| offsets.iter().rposition(|&o| o <= s).expect("offset 0 exists");
    let mut ts = Vec::new();
    for (i, g) in graphs.iter().enumerate() {
        ts.extend(g.graph().edges().iter().map(|e| transition(offsets[i] + e.src, e.label, Kind::Normal, offsets[i] + e.dst)));
    }
    for s in 0..total {
        for d in 0..total {
            for c in alphabet.iter() {
                ts.push(transition(s, c, Kind::CoBuchi, d));
                if block_of(s) > block_of(d) {
                    ts.push(transition(s, c, Kind::Normal, d));
                }
            }
        }
    }
    let initial = graphs[0].graph().vertex_count() - 1;
    let automaton = CoBuchiAutomaton::new(alphabet, total, ts, initial)?.with_order((0..total).collect())?;

    let last = graphs.len() - 1;
    let top = |i: usize| offsets[i] + graphs[i].graph().vertex_count() - 1;
    let step = |&s: &usize, c: Letter| {
        let i = block_of(s);
        let v = s - offsets[i];
        match graphs[i].graph().successors(v, c).max() {
            Some(d) => (Kind::Normal, offsets[i] + d),
            None => (Kind::CoBuchi, top((i + 1).min(last))),
        }
    };
    let (resolver, _) = explore(&automaton, initial, step, |&s| s);
    Ok(Wfin { graphs, offsets, automaton, resolver })
}

/// A random ultimately periodic word labelling an infinite path of `g`,
/// through a random walk that stops at its first repeated vertex.
pub fn sample_path_word<R: Rng + ?Sized>(rng: &mut R, g: &Graph<Letter>) -> UpWord {
    let start = rng.gen_range(0..g.vertex_count());
    let mut seen = vec![None; g.vertex_count()];
    let mut labels = Vec::new();
    let mut v = start;
    loop {
        if let Some(at) = seen[v] {
            let period = labels.split_off(at);
            return UpWord::new(labels, period).expect("walk closed a cycle");
        }
        seen[v] = Some(labels.len());
        let e: &Edge<Letter> = g.out_edges(v).choose(rng).expect("sinkless");
        labels.push(e.label);
        v = e.dst;
    }
}

/// Compares winning regions of `W` and of the capped `W_fin` automaton
/// (solved through its history-deterministic product) over a census.
pub fn wfin_equivalence_survey(w: &Objective, graph_size: usize, census: &Census) -> Result<AgreementReport, LabError> {
    let wfin = build_wfin_automaton(w, graph_size)?;
    let letters = w.alphabet().letters().to_vec();
    let outcome = |a: &Arena| -> Result<bool, LabError> {
        Ok(winning_region(a, w)? == winning_region_hd(a, &wfin.automaton))
    };
    let mut report = AgreementReport::new(
        format!("{} vs W_fin(graph size <= {graph_size}, {} graphs)", w.key(), wfin.graphs.len()),
        census.to_string(),
    );
    run_census(census.arenas(&letters), outcome, |a, agree| report.record(a, agree))?;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::check_monotone;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn threshold_counts_are_central_binomials() {
        for k in 1..=4 {
            assert_eq!(thresholds(k).len() as u128, binomial(2 * k as u128, k as u128));
        }
    }

    #[test]
    fn cobuchi_size_one() {
        let gs = enumerate_monotone_satisfying_graphs(&Objective::cobuchi(), 1).unwrap();
        assert_eq!(gs.len(), 1);
        let g = gs[0].graph();
        assert_eq!(g.edges(), &[Edge::new(0, Letter::Sym('N'), 0)]);
    }

    /// Independent generate-and-filter over every edge subset on two vertices.
    #[test]
    fn size_two_matches_naive_enumeration() {
        let w = Objective::cobuchi();
        let letters = w.alphabet().letters().to_vec();
        let all: Vec<Edge<Letter>> = (0..2)
            .flat_map(|s| letters.iter().flat_map(move |&c| (0..2).map(move |d| Edge::new(s, c, d))))
            .collect();
        let mut naive = 0;
        for mask in 0u32..(1 << all.len()) {
            let g = Graph::new(2, (0..all.len()).filter(|i| mask >> i & 1 == 1).map(|i| all[i]).collect::<Vec<_>>());
            let og = OrderedGraph::by_index(g.clone());
            if g.is_sinkless() && check_monotone(&og).is_ok() && graph_satisfies(&w, &g).unwrap().is_satisfied() {
                naive += 1;
            }
        }
        let ours = enumerate_monotone_satisfying_graphs(&w, 2).unwrap();
        assert_eq!(ours.iter().filter(|g| g.graph().vertex_count() == 2).count(), naive);
        for g in &ours {
            assert!(check_monotone(g).is_ok());
        }
    }

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(
            enumerate_monotone_satisfying_graphs(&Objective::cobuchi(), 5),
            Err(LabError::Cap { .. })
        ));
    }

    #[test]
    fn cobuchi_size_one_automaton() {
        let wf = build_wfin_automaton(&Objective::cobuchi(), 1).unwrap();
        assert!(wf.automaton.accepts(&UpWord::syms("", "N")));
        assert!(!wf.automaton.accepts(&UpWord::syms("", "NF")));
        assert_eq!(wf.automaton.check_monotone(), Some(Ok(())));
    }

    #[test]
    fn resolver_stays_in_block_zero_on_its_words() {
        let wf = build_wfin_automaton(&Objective::cobuchi(), 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let w = sample_path_word(&mut rng, wf.graphs[0].graph());
            assert_eq!(wf.resolver.replay(&w).cobuchi_count(), 0);
        }
    }

    #[test]
    fn empty_objective_gives_one_state() {
        let w = Objective::cobuchi_over("F", "F");
        let wf = build_wfin_automaton(&w, 2).unwrap();
        assert!(wf.graphs.is_empty());
        assert_eq!(wf.automaton.state_count(), 1);
        assert!(!wf.automaton.accepts(&UpWord::syms("", "F")));
    }
}
