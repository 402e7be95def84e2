//! Truncations of infinite arenas on which Eve needs memory.
//!
//! The arenas are reconstructions: each satisfies the properties listed on
//! its [`FamilyKind`] variant, and the tests certify them.

use num_rational::Ratio;

use crate::games::{Arena, Player, PositionalStrategy};
use crate::graph::{reachable_from, Edge, Graph, Letter};
use crate::objectives::cycles::max_mean_cycle;
use crate::objectives::{generator_prefix_averages, graph_satisfies, Objective, WordGenerator};

use super::LabError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FamilyKind {
    /// Eve alone. A hub `h` and a ray `r_1, r_2, …`; `h -1-> r_1`,
    /// `r_i -1-> r_{i+1}` and `r_i -(1-i)-> h`. The loop through `r_i` has
    /// sum 1 and length `i + 1`; running right forever averages 1. Eve wins
    /// mean-payoff `≤ 0` only by taking longer and longer loops.
    EscapeRight,
    /// Eve's hub `e` and Adam's hub `a`. Eve's loop `k` runs left along
    /// `o_1 … o_{k+1}` with weights 1, turns with weight `-(2^k + k + 1)`
    /// and climbs back to `a` with weights `2^{k-1}, …, 2, 1`: sum `-1`,
    /// length `2k + 2`, lowest prefix sum `-2^k`. Adam's loop `k` runs right
    /// along `p_1 … p_{k+1}` with weights `-1`, turns with weight
    /// `2^{k+1} + k + 1` and returns to `e` with weights 0: sum `2^{k+1}`,
    /// length `2k + 2`. Escaping left averages 1, escaping right averages
    /// `-1`.
    DipLeft,
    /// Eve's hub `h` reads any `k ≤ n` into Adam's `a_k`, who answers any
    /// `m` with `k ≤ m ≤ n` back to `h`. Remembering Adam's last answer
    /// keeps the word non-decreasing; a fixed choice `k < n` is punished by
    /// `m = k + 1`. Only the top choice survives, and it disappears in the
    /// infinite arena.
    EndClimb,
}

/// A family of finite arenas indexed by `n ≥ 1`, each embedding into the
/// next, with the vertex plays start from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ArenaFamily {
    pub kind: FamilyKind,
}

pub fn mp_family(kind: FamilyKind) -> ArenaFamily {
    ArenaFamily { kind }
}

struct Builder {
    names: Vec<String>,
    owner: Vec<Player>,
    edges: Vec<Edge<Letter>>,
}

impl Builder {
    fn new() -> Self {
        Builder { names: Vec::new(), owner: Vec::new(), edges: Vec::new() }
    }

    fn vertex(&mut self, name: String, owner: Player) -> usize {
        self.names.push(name);
        self.owner.push(owner);
        self.names.len() - 1
    }

    fn edge(&mut self, s: usize, w: i64, d: usize) {
        self.edges.push(Edge::new(s, Letter::Int(w), d));
    }

    fn finish(self) -> (Arena, Vec<String>) {
        let g = Graph::new(self.names.len(), self.edges);
        (Arena::new(g, self.owner).expect("family arenas are sinkless"), self.names)
    }
}

impl ArenaFamily {
    pub fn name(&self) -> &'static str {
        match self.kind {
            FamilyKind::EscapeRight => "escape_right",
            FamilyKind::DipLeft => "dip_left",
            FamilyKind::EndClimb => "end_climb",
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        let kind = match name {
            "escape_right" => FamilyKind::EscapeRight,
            "dip_left" => FamilyKind::DipLeft,
            "end_climb" => FamilyKind::EndClimb,
            _ => return None,
        };
        Some(mp_family(kind))
    }

    /// Vertex 0 in every member.
    pub fn start(&self) -> usize {
        0
    }

    pub fn instantiate(&self, n: usize) -> Arena {
        self.instantiate_named(n).0
    }

    /// The truncation at `n` with vertex names.
    pub fn instantiate_named(&self, n: usize) -> (Arena, Vec<String>) {
        assert!(n >= 1, "families start at n = 1");
        let mut b = Builder::new();
        match self.kind {
            FamilyKind::EscapeRight => {
                let h = b.vertex("h".into(), Player::Eve);
                let r: Vec<usize> = (1..=n).map(|i| b.vertex(format!("r{i}"), Player::Eve)).collect();
                b.edge(h, 1, r[0]);
                for i in 1..=n {
                    if i < n {
                        b.edge(r[i - 1], 1, r[i]);
                    }
                    b.edge(r[i - 1], 1 - i as i64, h);
                }
            }
            FamilyKind::DipLeft => {
                let e = b.vertex("e".into(), Player::Eve);
                let a = b.vertex("a".into(), Player::Adam);
                let o: Vec<usize> = (1..=n + 1).map(|i| b.vertex(format!("o{i}"), Player::Eve)).collect();
                let back: Vec<usize> = (1..=n).map(|i| b.vertex(format!("b{i}"), Player::Eve)).collect();
                let p: Vec<usize> = (1..=n + 1).map(|i| b.vertex(format!("p{i}"), Player::Adam)).collect();
                let q: Vec<usize> = (1..=n).map(|i| b.vertex(format!("q{i}"), Player::Adam)).collect();
                // o_k, b_k, p_k, q_k sit at index k - 1; b_0 is a and q_0 is e.
                let b_at = |k: usize| if k == 0 { a } else { back[k - 1] };
                let q_at = |k: usize| if k == 0 { e } else { q[k - 1] };
                b.edge(e, 1, o[0]);
                b.edge(a, -1, p[0]);
                for k in 1..=n + 1 {
                    if k <= n {
                        b.edge(o[k - 1], 1, o[k]);
                        b.edge(p[k - 1], -1, p[k]);
                        b.edge(back[k - 1], 1 << (k - 1), b_at(k - 1));
                        b.edge(q[k - 1], 0, q_at(k - 1));
                    }
                    if k >= 2 {
                        let depth = k - 1;
                        b.edge(o[k - 1], -((1i64 << depth) + depth as i64 + 1), b_at(depth));
                    }
                    let depth = k - 1;
                    b.edge(p[k - 1], (1i64 << (depth + 1)) + depth as i64 + 1, q_at(depth));
                }
            }
            FamilyKind::EndClimb => {
                let h = b.vertex("h".into(), Player::Eve);
                let a: Vec<usize> = (0..=n).map(|k| b.vertex(format!("a{k}"), Player::Adam)).collect();
                for k in 0..=n {
                    b.edge(h, k as i64, a[k]);
                    for m in k..=n {
                        b.edge(a[k], m as i64, h);
                    }
                }
            }
        }
        b.finish()
    }

    /// The objective Eve plays for at truncation `n`, over an alphabet
    /// wide enough for its weights.
    pub fn objective(&self, n: usize) -> Objective {
        match self.kind {
            FamilyKind::EscapeRight => Objective::mean_payoff_le0((n as i64 - 1).max(1)),
            FamilyKind::DipLeft => Objective::liminf_le0((1i64 << (n + 1)) + n as i64 + 1),
            FamilyKind::EndClimb => Objective::end(n as i64),
        }
    }

    /// The label of the family's winning play that needs memory, where it
    /// is a fixed word.
    pub fn play_generator(&self) -> Option<WordGenerator> {
        match self.kind {
            FamilyKind::EscapeRight => Some(WordGenerator::EscapeRight),
            _ => None,
        }
    }

    /// Whether Eve's strategies are scored by mean weight.
    fn weighted(&self) -> bool {
        !matches!(self.kind, FamilyKind::EndClimb)
    }
}

fn positional_strategies(a: &Arena) -> Vec<PositionalStrategy> {
    let g = a.graph();
    let mut all = vec![PositionalStrategy { choice: vec![None; g.vertex_count()] }];
    for v in g.vertices().filter(|&v| a.owner(v) == Player::Eve) {
        all = all
            .into_iter()
            .flat_map(|s| {
                g.out_range(v).map(move |i| {
                    let mut t = s.clone();
                    t.choice[v] = Some(i);
                    t
                })
            })
            .collect();
    }
    all
}

fn kept_from(a: &Arena, s: &PositionalStrategy, start: usize) -> Graph<Letter> {
    let kept = s.kept_graph(a);
    let seen = reachable_from(&kept, [start]);
    kept.induced(&seen).0
}

/// Least, over Eve's positional strategies, of the largest mean of a
/// cycle reachable from `start` in the kept graph: the best long-run
/// average Eve can force positionally against Adam's best loop.
pub fn best_positional_value(a: &Arena, start: usize) -> Option<Ratio<i64>> {
    positional_strategies(a)
        .iter()
        .filter_map(|s| max_mean_cycle(&kept_from(a, s, start), |e| e.label.value().expect("weighted arena")))
        .map(|c| c.mean)
        .min()
}

/// Prefix averages of a fixed word on a horizon.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorCheck {
    pub generator: String,
    pub letters: usize,
    pub all_positive: bool,
    pub final_average: Ratio<i64>,
}

/// What a truncation shows about the infinite arena.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NonPositionalityReport {
    pub family: String,
    pub objective: String,
    pub n: usize,
    pub strategies: usize,
    /// Positional strategies with a losing play from the start vertex.
    pub refuted: usize,
    /// [`best_positional_value`], for weighted families.
    pub margin: Option<Ratio<i64>>,
    pub generator: Option<GeneratorCheck>,
}

impl NonPositionalityReport {
    pub const CAVEAT: &'static str =
        "finite truncation: evidence for non-positionality over infinite arenas, not a proof";

    pub fn fields(&self) -> Vec<(&'static str, String)> {
        let mut out = vec![
            ("family", self.family.clone()),
            ("objective", self.objective.clone()),
            ("n", self.n.to_string()),
            ("positional_strategies", self.strategies.to_string()),
            ("refuted", self.refuted.to_string()),
        ];
        if let Some(m) = self.margin {
            out.push(("best_positional_value", m.to_string()));
        }
        if let Some(g) = &self.generator {
            out.push(("generator", g.generator.clone()));
            out.push(("generator_letters", g.letters.to_string()));
            out.push(("generator_all_positive", g.all_positive.to_string()));
            out.push(("generator_final_average", g.final_average.to_string()));
        }
        out.push(("note", Self::CAVEAT.to_string()));
        out
    }
}

/// Checks every positional strategy of Eve at truncation `n` against the
/// family's objective, and measures the family's generator over
/// `horizon` letters.
pub fn verify_nonpositionality_truncated(
    f: &ArenaFamily,
    n: usize,
    horizon: usize,
) -> Result<NonPositionalityReport, LabError> {
    let a = f.instantiate(n);
    let w = f.objective(n);
    let strategies = positional_strategies(&a);
    let mut refuted = 0;
    for s in &strategies {
        if !graph_satisfies(&w, &kept_from(&a, s, f.start()))?.is_satisfied() {
            refuted += 1;
        }
    }
    let margin = if f.weighted() { best_positional_value(&a, f.start()) } else { None };
    let generator = f.play_generator().map(|g| {
        let avg = generator_prefix_averages(&g, horizon);
        GeneratorCheck {
            generator: g.name(),
            letters: horizon,
            all_positive: avg.iter().all(|x| *x > Ratio::from_integer(0)),
            final_average: avg.last().copied().unwrap_or_else(|| Ratio::from_integer(0)),
        }
    });
    Ok(NonPositionalityReport {
        family: f.name().into(),
        objective: w.key().into(),
        n,
        strategies: strategies.len(),
        refuted,
        margin,
        generator,
    })
}

/// Mean of Eve's loop `n` followed by Adam's loop `n` in the `dip_left`
/// truncation at `n`, read off the arena's edges.
pub fn dip_left_combined_mean(n: usize) -> Ratio<i64> {
    let (a, names) = mp_family(FamilyKind::DipLeft).instantiate_named(n);
    let at = |name: String| names.iter().position(|x| *x == name).expect("named vertex");
    let mut walk = vec![at("e".into())];
    walk.extend((1..=n + 1).map(|i| at(format!("o{i}"))));
    walk.extend((1..=n).rev().map(|i| at(format!("b{i}"))));
    walk.push(at("a".into()));
    walk.extend((1..=n + 1).map(|i| at(format!("p{i}"))));
    walk.extend((1..=n).rev().map(|i| at(format!("q{i}"))));
    walk.push(at("e".into()));
    let sum: i64 = walk
        .windows(2)
        .map(|p| {
            let e = a.graph().out_edges(p[0]).iter().find(|e| e.dst == p[1]).expect("loop edge");
            e.label.value().expect("weighted")
        })
        .sum();
    Ratio::new(sum, walk.len() as i64 - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::find_morphism;

    #[test]
    fn escape_right_values() {
        let f = mp_family(FamilyKind::EscapeRight);
        for n in 1..=5 {
            assert_eq!(best_positional_value(&f.instantiate(n), 0), Some(Ratio::new(1, n as i64 + 1)));
        }
    }

    #[test]
    fn escape_right_all_refuted() {
        let r = verify_nonpositionality_truncated(&mp_family(FamilyKind::EscapeRight), 3, 1000).unwrap();
        assert_eq!(r.refuted, r.strategies);
        let g = r.generator.unwrap();
        assert!(g.all_positive);
    }

    #[test]
    fn dip_left_mean_formula() {
        assert_eq!(dip_left_combined_mean(1), Ratio::new(3, 8));
        assert_eq!(dip_left_combined_mean(2), Ratio::new(7, 12));
        assert_eq!(dip_left_combined_mean(3), Ratio::new(15, 16));
    }

    #[test]
    fn dip_left_every_positional_strategy_loses() {
        let r = verify_nonpositionality_truncated(&mp_family(FamilyKind::DipLeft), 2, 0).unwrap();
        assert_eq!(r.strategies, 2);
        assert_eq!(r.refuted, 2);
    }

    #[test]
    fn end_climb_only_top_survives() {
        let f = mp_family(FamilyKind::EndClimb);
        for n in 1..=3 {
            let r = verify_nonpositionality_truncated(&f, n, 0).unwrap();
            assert_eq!(r.strategies, n + 1);
            assert_eq!(r.refuted, n);
        }
    }

    #[test]
    fn truncations_embed() {
        for kind in [FamilyKind::EscapeRight, FamilyKind::DipLeft, FamilyKind::EndClimb] {
            let f = mp_family(kind);
            for n in 1..=3 {
                let m = find_morphism(f.instantiate(n).graph(), f.instantiate(n + 1).graph()).unwrap();
                assert!(m.is_some(), "{} {n}", f.name());
            }
        }
    }
}
