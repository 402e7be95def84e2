//! Oracles shared by the integration tests: brute-force resolver search,
//! brute-force game solving and word samplers.
#![allow(dead_code)]

use positional::automata::{CoBuchiAutomaton, Kind, Resolver, Transition};
use positional::games::{Arena, Player};
use positional::graph::{Alphabet, Edge, Graph, Letter, Morphism};
use positional::objectives::{Objective, UpWord};
use rand::Rng;

/// Counts of an exhaustive resolver search.
#[derive(Debug, Default)]
pub struct ResolverSearch {
    pub candidates: usize,
    pub sound: Option<Resolver>,
}

/// Every deterministic automaton with at most `max_states` states that maps
/// into `target` by a kind-preserving morphism, with states numbered in
/// order of creation. Stops at the first sound one.
pub fn search_resolvers(target: &CoBuchiAutomaton, max_states: usize) -> ResolverSearch {
    let letters: Vec<Letter> = target.alphabet().letters().to_vec();
    let mut out = ResolverSearch::default();
    let mut images = vec![target.initial()];
    let mut slots: Vec<(Kind, usize)> = Vec::new();
    go(target, &letters, max_states, &mut images, &mut slots, &mut out);
    out
}

fn go(
    target: &CoBuchiAutomaton,
    letters: &[Letter],
    max_states: usize,
    images: &mut Vec<usize>,
    slots: &mut Vec<(Kind, usize)>,
    out: &mut ResolverSearch,
) {
    if out.sound.is_some() {
        return;
    }
    let l = letters.len();
    if slots.len() == images.len() * l {
        out.candidates += 1;
        let ts: Vec<Transition> =
            slots.iter().enumerate().map(|(i, &(k, d))| Edge::new(i / l, (letters[i % l], k), d)).collect();
        let a = CoBuchiAutomaton::new(target.alphabet().clone(), images.len(), ts, 0).expect("complete and reachable");
        let r = Resolver::new(a, Morphism { map: images.clone() }, target).expect("morphism by construction");
        if r.find_unsound_word(target).is_none() {
            out.sound = Some(r);
        }
        return;
    }
    let i = slots.len();
    let (s, c) = (i / l, letters[i % l]);
    let options: Vec<(Kind, usize)> = target.successors(images[s], c).collect();
    for (k, q) in options {
        for r in 0..images.len() {
            if images[r] == q {
                slots.push((k, r));
                go(target, letters, max_states, images, slots, out);
                slots.pop();
            }
        }
        if images.len() < max_states {
            images.push(q);
            slots.push((k, images.len() - 1));
            go(target, letters, max_states, images, slots, out);
            slots.pop();
            images.pop();
        }
    }
}

/// Eve's winning region when both players may be assumed positional: `v`
/// is winning iff some Eve positional strategy beats every Adam positional
/// strategy from `v`, judged on the single resulting lasso.
pub fn brute_force_region(a: &Arena, w: &Objective) -> Vec<bool> {
    let g = a.graph();
    let n = g.vertex_count();
    let choices = |p: Player| -> Vec<Vec<usize>> {
        let mut all = vec![vec![usize::MAX; n]];
        for v in g.vertices().filter(|&v| a.owner(v) == p) {
            all = all
                .into_iter()
                .flat_map(|s| {
                    g.out_range(v).map(move |i| {
                        let mut t = s.clone();
                        t[v] = i;
                        t
                    })
                })
                .collect();
        }
        all
    };
    let eve = choices(Player::Eve);
    let adam = choices(Player::Adam);
    (0..n)
        .map(|v| {
            eve.iter().any(|se| {
                adam.iter().all(|sa| {
                    let pick = |u: usize| if a.owner(u) == Player::Eve { se[u] } else { sa[u] };
                    w.up_member(&play_word(g, v, pick))
                })
            })
        })
        .collect()
}

fn play_word(g: &Graph<Letter>, start: usize, pick: impl Fn(usize) -> usize) -> UpWord {
    let mut seen = vec![None; g.vertex_count()];
    let mut labels = Vec::new();
    let mut v = start;
    loop {
        if let Some(at) = seen[v] {
            let period = labels.split_off(at);
            return UpWord::new(labels, period).expect("closed a cycle");
        }
        seen[v] = Some(labels.len());
        let e = g.edges()[pick(v)];
        labels.push(e.label);
        v = e.dst;
    }
}

pub fn random_words<R: Rng>(rng: &mut R, alphabet: &Alphabet, count: usize, max_prefix: usize, max_period: usize) -> Vec<UpWord> {
    (0..count).map(|_| UpWord::random(rng, alphabet, max_prefix, max_period)).collect()
}

/// A random word over `[-b, b]` whose prefix sums never exceed `bound`
/// and whose period sums to zero.
pub fn bounded_word<R: Rng>(rng: &mut R, b: i64, bound: i64, max_prefix: usize, max_period: usize) -> UpWord {
    let mut sum = 0;
    let step = |rng: &mut R, sum: &mut i64| {
        let hi = b.min(bound - *sum);
        let w = rng.gen_range(-b..=hi.max(-b));
        *sum += w;
        Letter::Int(w)
    };
    let p = rng.gen_range(0..=max_prefix);
    let prefix: Vec<Letter> = (0..p).map(|_| step(rng, &mut sum)).collect();
    let start = sum;
    let q = rng.gen_range(1..=max_period);
    let mut period: Vec<Letter> = (0..q).map(|_| step(rng, &mut sum)).collect();
    while sum != start {
        let w = (sum - start).clamp(-b, b);
        period.push(Letter::Int(-w));
        sum -= w;
    }
    UpWord::new(prefix, period).expect("nonempty period")
}

/// Largest prefix sum of an ultimately periodic word with nonpositive
/// period sum, counting the empty prefix.
pub fn max_prefix_sum(w: &UpWord) -> i64 {
    let mut sum = 0;
    let mut best = 0;
    for c in w.prefix().iter().chain(w.period()) {
        sum += c.value().expect("weighted");
        best = best.max(sum);
    }
    best
}
