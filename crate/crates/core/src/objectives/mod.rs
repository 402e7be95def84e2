//! The objective catalog.
//!
//! Every [`Objective`] is a prefix-independent set of infinite words over a
//! finite alphabet. It can always decide membership of ultimately periodic
//! words in closed form, and it may additionally carry a deterministic
//! recognizer and a cycle criterion, which are the two ways
//! [`graph_satisfies`] decides `L(G) ⊆ W`.

pub mod cycles;
mod recognizer;
mod satisfy;
mod word;

use std::fmt;
use std::sync::OnceLock;

use regex::Regex;
use thiserror::Error;

use crate::automata::{transition, CoBuchiAutomaton, Kind};
use crate::graph::{Alphabet, Letter};

pub use recognizer::{DetParity, Recognizer};
pub use satisfy::{graph_satisfies, graph_satisfies_via, Method, Satisfaction, SatisfyError};
pub use word::{generator_prefix_averages, EmptyPeriod, KnownMembership, UpWord, WordGenerator};

/// Default weight bound `B` for weighted objectives (alphabet `[-B, B]`).
pub const DEFAULT_WEIGHT_BOUND: i64 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Neutrality {
    Weak,
    Strong,
}

impl fmt::Display for Neutrality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Neutrality::Weak => "weak",
            Neutrality::Strong => "strong",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ObjectiveKind {
    /// Largest priority seen infinitely often is even; priorities `0..=max`.
    Parity { max: i64 },
    MeanPayoffLe0,
    MeanPayoffLt0,
    LiminfLe0,
    LiminfLt0,
    /// Prefix sums bounded from above.
    Bounded,
    /// Prefix sums of `w + 1/n` bounded from above.
    Tilted { n: i64 },
    /// Finitely many distinct letters; everything, over a finite alphabet.
    Finite { m: i64 },
    /// Eventually non-increasing.
    Eni { m: i64 },
    /// Eventually non-decreasing.
    End { m: i64 },
    /// Finitely many occurrences of the `bad` letters.
    CoBuchi { bad: Vec<Letter> },
    /// Finitely many `aab` infixes once `e` is erased.
    Fig1Left,
    /// Finitely many infixes in `c(a*cb*)+c` once `e` is erased.
    Fig1Right,
    /// Infinitely many `a` and infinitely many `b`.
    GenBuchi,
    Union(Vec<Objective>),
}

/// How cycles of a finite graph decide satisfaction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CycleCriterion {
    /// No cycle of positive weight.
    NoPositiveCycle,
    /// Every cycle has negative weight.
    AllCyclesNegative,
    /// No cycle of positive weight after `w ↦ n·w + 1`.
    Tilted(i64),
    /// Every cycle's largest priority is even.
    EvenMaxPriority,
    /// No cycle reads one of these letters.
    AvoidLetters(Vec<Letter>),
    /// Every cycle reads a single letter.
    ConstantCycles,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ObjectiveError {
    #[error("unknown objective `{0}`")]
    Unknown(String),
    #[error("objective `{key}`: {detail}")]
    Parameter { key: String, detail: String },
    #[error("union parts must share an alphabet: `{0}` differs")]
    AlphabetMismatch(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Objective {
    key: String,
    kind: ObjectiveKind,
    alphabet: Alphabet,
}

fn fig1_alphabet() -> Alphabet {
    Alphabet::symbols("abce")
}

impl Objective {
    pub fn parity(max: i64) -> Self {
        Objective { key: format!("parity:{max}"), kind: ObjectiveKind::Parity { max }, alphabet: Alphabet::range(0, max) }
    }

    pub fn mean_payoff_le0(b: i64) -> Self {
        Self::weighted(format!("mp_le_0:B={b}"), ObjectiveKind::MeanPayoffLe0, b)
    }

    pub fn mean_payoff_lt0(b: i64) -> Self {
        Self::weighted(format!("mp_lt_0:B={b}"), ObjectiveKind::MeanPayoffLt0, b)
    }

    pub fn liminf_le0(b: i64) -> Self {
        Self::weighted(format!("liminf_mp_le_0:B={b}"), ObjectiveKind::LiminfLe0, b)
    }

    pub fn liminf_lt0(b: i64) -> Self {
        Self::weighted(format!("liminf_mp_lt_0:B={b}"), ObjectiveKind::LiminfLt0, b)
    }

    pub fn bounded(b: i64) -> Self {
        Self::weighted(format!("bounded:B={b}"), ObjectiveKind::Bounded, b)
    }

    pub fn tilted(n: i64, b: i64) -> Self {
        assert!(n >= 1, "tilt must be positive");
        Self::weighted(format!("tilted:n={n},B={b}"), ObjectiveKind::Tilted { n }, b)
    }

    /// Weighted objective over an explicit integer interval.
    pub fn with_weights(mut self, lo: i64, hi: i64) -> Self {
        self.alphabet = Alphabet::range(lo, hi);
        self
    }

    fn weighted(key: String, kind: ObjectiveKind, b: i64) -> Self {
        Objective { key, kind, alphabet: Alphabet::range(-b, b) }
    }

    pub fn finite(m: i64) -> Self {
        Objective { key: format!("finite:m={m}"), kind: ObjectiveKind::Finite { m }, alphabet: Alphabet::range(0, m) }
    }

    pub fn eni(m: i64) -> Self {
        Objective { key: format!("eni:m={m}"), kind: ObjectiveKind::Eni { m }, alphabet: Alphabet::range(0, m) }
    }

    pub fn end(m: i64) -> Self {
        Objective { key: format!("end:m={m}"), kind: ObjectiveKind::End { m }, alphabet: Alphabet::range(0, m) }
    }

    /// Co-Büchi objective over `{F, N}` with bad letter `F`.
    pub fn cobuchi() -> Self {
        Objective {
            key: "cobuchi".into(),
            kind: ObjectiveKind::CoBuchi { bad: vec![Letter::Sym('F')] },
            alphabet: Alphabet::symbols("FN"),
        }
    }

    pub fn cobuchi_over(alphabet: &str, bad: &str) -> Self {
        let mut bad: Vec<Letter> = bad.chars().map(Letter::Sym).collect();
        bad.sort();
        Objective {
            key: format!("cobuchi:alphabet={alphabet},bad={}", bad.iter().map(|c| c.to_string()).collect::<String>()),
            kind: ObjectiveKind::CoBuchi { bad },
            alphabet: Alphabet::symbols(alphabet),
        }
    }

    pub fn fig1_left() -> Self {
        Objective { key: "fig1_left".into(), kind: ObjectiveKind::Fig1Left, alphabet: fig1_alphabet() }
    }

    pub fn fig1_right() -> Self {
        Objective { key: "fig1_right".into(), kind: ObjectiveKind::Fig1Right, alphabet: fig1_alphabet() }
    }

    pub fn gen_buchi() -> Self {
        Objective { key: "genbuchi".into(), kind: ObjectiveKind::GenBuchi, alphabet: Alphabet::symbols("abe") }
    }

    pub fn union(parts: Vec<Objective>) -> Result<Self, ObjectiveError> {
        let first = parts.first().ok_or_else(|| ObjectiveError::Parameter {
            key: "union".into(),
            detail: "needs at least one part".into(),
        })?;
        let alphabet = first.alphabet.clone();
        if let Some(p) = parts.iter().find(|p| p.alphabet != alphabet) {
            return Err(ObjectiveError::AlphabetMismatch(p.key.clone()));
        }
        let key = format!("union:{}", parts.iter().map(|p| p.key.as_str()).collect::<Vec<_>>().join("+"));
        Ok(Objective { key, kind: ObjectiveKind::Union(parts), alphabet })
    }

    /// Parses a key such as `parity:2`, `tilted:n=2,B=2` or
    /// `union:fig1_left+fig1_right`.
    pub fn parse(key: &str) -> Result<Self, ObjectiveError> {
        let key = key.trim();
        if let Some(rest) = key.strip_prefix("union:") {
            let parts = rest.split('+').map(Objective::parse).collect::<Result<Vec<_>, _>>()?;
            return Objective::union(parts);
        }
        let (name, params) = match key.split_once(':') {
            Some((n, p)) => (n, p),
            None => (key, ""),
        };
        let bad = |detail: String| ObjectiveError::Parameter { key: key.to_string(), detail };
        let mut named: Vec<(&str, &str)> = Vec::new();
        let mut positional: Vec<&str> = Vec::new();
        for item in params.split(',').filter(|s| !s.is_empty()) {
            match item.split_once('=') {
                Some((k, v)) => named.push((k.trim(), v.trim())),
                None => positional.push(item.trim()),
            }
        }
        let int = |name: &str, default: Option<i64>| -> Result<i64, ObjectiveError> {
            match named.iter().find(|(k, _)| *k == name) {
                Some((_, v)) => v.parse().map_err(|_| bad(format!("parameter {name} must be an integer, got `{v}`"))),
                None => default.ok_or_else(|| bad(format!("missing parameter {name}"))),
            }
        };
        let allow = |names: &[&str], positional_ok: usize| -> Result<(), ObjectiveError> {
            if let Some((k, _)) = named.iter().find(|(k, _)| !names.contains(k)) {
                return Err(bad(format!("unknown parameter `{k}`")));
            }
            if positional.len() > positional_ok {
                return Err(bad(format!("unexpected argument `{}`", positional[positional_ok])));
            }
            Ok(())
        };
        let b = || int("B", Some(DEFAULT_WEIGHT_BOUND));
        let obj = match name {
            "parity" => {
                allow(&["d"], 1)?;
                let d = match positional.first() {
                    Some(p) => p.parse().map_err(|_| bad(format!("priority bound must be an integer, got `{p}`")))?,
                    None => int("d", None)?,
                };
                if d < 0 {
                    return Err(bad("priority bound must be nonnegative".into()));
                }
                Objective::parity(d)
            }
            "mp_le_0" => {
                allow(&["B"], 0)?;
                Objective::mean_payoff_le0(b()?)
            }
            "mp_lt_0" => {
                allow(&["B"], 0)?;
                Objective::mean_payoff_lt0(b()?)
            }
            "liminf_mp_le_0" => {
                allow(&["B"], 0)?;
                Objective::liminf_le0(b()?)
            }
            "liminf_mp_lt_0" => {
                allow(&["B"], 0)?;
                Objective::liminf_lt0(b()?)
            }
            "bounded" => {
                allow(&["B"], 0)?;
                Objective::bounded(b()?)
            }
            "tilted" => {
                allow(&["n", "B"], 0)?;
                let n = int("n", None)?;
                if n < 1 {
                    return Err(bad("tilt n must be at least 1".into()));
                }
                Objective::tilted(n, b()?)
            }
            "finite" | "eni" | "end" => {
                allow(&["m"], 0)?;
                let m = int("m", Some(3))?;
                if m < 1 {
                    return Err(bad("m must be at least 1".into()));
                }
                match name {
                    "finite" => Objective::finite(m),
                    "eni" => Objective::eni(m),
                    _ => Objective::end(m),
                }
            }
            "cobuchi" => {
                allow(&["alphabet", "bad"], 0)?;
                let get = |k: &str| named.iter().find(|(n, _)| *n == k).map(|(_, v)| *v);
                match (get("alphabet"), get("bad")) {
                    (None, None) => Objective::cobuchi(),
                    (alphabet, bad_letters) => {
                        let alphabet = alphabet.unwrap_or("FN");
                        let bad_letters = bad_letters.unwrap_or("F");
                        if let Some(c) = bad_letters.chars().find(|c| !alphabet.contains(*c)) {
                            return Err(bad(format!("bad letter `{c}` is not in the alphabet")));
                        }
                        Objective::cobuchi_over(alphabet, bad_letters)
                    }
                }
            }
            "fig1_left" | "fig1_right" | "genbuchi" => {
                allow(&[], 0)?;
                match name {
                    "fig1_left" => Objective::fig1_left(),
                    "fig1_right" => Objective::fig1_right(),
                    _ => Objective::gen_buchi(),
                }
            }
            _ => return Err(ObjectiveError::Unknown(key.to_string())),
        };
        Ok(obj)
    }

    pub fn key(&self) -> &str {
        &self.key
    }

    pub fn kind(&self) -> &ObjectiveKind {
        &self.kind
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    /// True for objectives over integer weights (mean-payoff family).
    pub fn is_weighted(&self) -> bool {
        matches!(
            self.kind,
            ObjectiveKind::MeanPayoffLe0
                | ObjectiveKind::MeanPayoffLt0
                | ObjectiveKind::LiminfLe0
                | ObjectiveKind::LiminfLt0
                | ObjectiveKind::Bounded
                | ObjectiveKind::Tilted { .. }
        )
    }

    /// Every catalog objective is prefix-independent.
    pub fn prefix_independent(&self) -> bool {
        true
    }

    /// Membership of `w` in the objective, in closed form.
    pub fn up_member(&self, w: &UpWord) -> bool {
        let v = w.period();
        let sum = || v.iter().map(|c| c.value().unwrap_or(0)).sum::<i64>();
        match &self.kind {
            ObjectiveKind::Parity { .. } => v.iter().filter_map(|c| c.value()).max().is_some_and(|p| p % 2 == 0),
            ObjectiveKind::MeanPayoffLe0 | ObjectiveKind::LiminfLe0 | ObjectiveKind::Bounded => sum() <= 0,
            ObjectiveKind::MeanPayoffLt0 | ObjectiveKind::LiminfLt0 => sum() < 0,
            ObjectiveKind::Tilted { n } => n * sum() + v.len() as i64 <= 0,
            ObjectiveKind::Finite { .. } => true,
            ObjectiveKind::Eni { .. } | ObjectiveKind::End { .. } => v.iter().all(|c| *c == v[0]),
            ObjectiveKind::CoBuchi { bad } => !v.iter().any(|c| bad.contains(c)),
            ObjectiveKind::Fig1Left => {
                static AAB: OnceLock<Regex> = OnceLock::new();
                !periodic_infix(v, AAB.get_or_init(|| Regex::new("aab").expect("valid pattern")))
            }
            ObjectiveKind::Fig1Right => {
                static CAC: OnceLock<Regex> = OnceLock::new();
                !periodic_infix(v, CAC.get_or_init(|| Regex::new("c(a*cb*)+c").expect("valid pattern")))
            }
            ObjectiveKind::GenBuchi => v.contains(&Letter::Sym('a')) && v.contains(&Letter::Sym('b')),
            ObjectiveKind::Union(parts) => parts.iter().any(|p| p.up_member(w)),
        }
    }

    /// Membership decided by running the recognizer, if there is one.
    pub fn up_member_via_recognizer(&self, w: &UpWord) -> Option<bool> {
        self.recognizer().map(|r| r.accepts(w))
    }

    /// A finite deterministic recognizer: co-Büchi where the objective is
    /// co-Büchi recognizable, parity otherwise. Weighted objectives have none.
    pub fn recognizer(&self) -> Option<Recognizer> {
        let a = self.alphabet.clone();
        let one_state = |bad: &dyn Fn(Letter) -> bool| {
            let ts = a.iter().map(|c| transition(0, c, if bad(c) { Kind::CoBuchi } else { Kind::Normal }, 0));
            CoBuchiAutomaton::new(a.clone(), 1, ts, 0).expect("complete")
        };
        let rec = match &self.kind {
            ObjectiveKind::Parity { .. } => {
                Recognizer::Parity(DetParity::from_fn(a.clone(), 1, 0, |_, c| (0, c.value().unwrap_or(0) as u32)))
            }
            ObjectiveKind::GenBuchi => Recognizer::Parity(DetParity::from_fn(a.clone(), 2, 0, |q, c| match (q, c) {
                (0, Letter::Sym('a')) => (1, 1),
                (1, Letter::Sym('b')) => (0, 2),
                (q, _) => (q, 1),
            })),
            ObjectiveKind::Finite { .. } => Recognizer::CoBuchi(one_state(&|_| false)),
            ObjectiveKind::CoBuchi { bad } => Recognizer::CoBuchi(one_state(&|c| bad.contains(&c))),
            ObjectiveKind::Eni { m } | ObjectiveKind::End { m } => {
                let increasing_is_bad = matches!(self.kind, ObjectiveKind::Eni { .. });
                let mut ts = Vec::new();
                for s in 0..=*m {
                    for w in 0..=*m {
                        let bad = if increasing_is_bad { w > s } else { w < s };
                        ts.push(transition(s as usize, w, if bad { Kind::CoBuchi } else { Kind::Normal }, w as usize));
                    }
                }
                Recognizer::CoBuchi(CoBuchiAutomaton::new(a, *m as usize + 1, ts, 0).expect("complete"))
            }
            ObjectiveKind::Fig1Left => Recognizer::CoBuchi(fig1_left_dfa()),
            ObjectiveKind::Fig1Right => Recognizer::CoBuchi(fig1_right_dfa()),
            ObjectiveKind::Union(parts) => {
                let dfas: Option<Vec<CoBuchiAutomaton>> =
                    parts.iter().map(|p| p.recognizer().and_then(|r| r.as_cobuchi().cloned())).collect();
                let (product, _) = crate::automata::round_robin_product(&dfas?);
                Recognizer::CoBuchi(product)
            }
            _ => return None,
        };
        Some(rec)
    }

    pub fn cycle_criterion(&self) -> Option<CycleCriterion> {
        Some(match &self.kind {
            ObjectiveKind::Parity { .. } => CycleCriterion::EvenMaxPriority,
            ObjectiveKind::MeanPayoffLe0 | ObjectiveKind::LiminfLe0 | ObjectiveKind::Bounded => {
                CycleCriterion::NoPositiveCycle
            }
            ObjectiveKind::MeanPayoffLt0 | ObjectiveKind::LiminfLt0 => CycleCriterion::AllCyclesNegative,
            ObjectiveKind::Tilted { n } => CycleCriterion::Tilted(*n),
            ObjectiveKind::Finite { .. } => CycleCriterion::AvoidLetters(Vec::new()),
            ObjectiveKind::CoBuchi { bad } => CycleCriterion::AvoidLetters(bad.clone()),
            ObjectiveKind::Eni { .. } | ObjectiveKind::End { .. } => CycleCriterion::ConstantCycles,
            _ => return None,
        })
    }

    pub fn neutral_letter(&self) -> Option<(Letter, Neutrality)> {
        match &self.kind {
            ObjectiveKind::Parity { .. } | ObjectiveKind::Bounded | ObjectiveKind::Finite { .. } => {
                Some((Letter::Int(0), Neutrality::Strong))
            }
            ObjectiveKind::MeanPayoffLe0
            | ObjectiveKind::MeanPayoffLt0
            | ObjectiveKind::LiminfLe0
            | ObjectiveKind::LiminfLt0 => Some((Letter::Int(0), Neutrality::Weak)),
            ObjectiveKind::Tilted { n: 1 } if self.alphabet.contains(Letter::Int(-1)) => {
                Some((Letter::Int(-1), Neutrality::Strong))
            }
            ObjectiveKind::Tilted { .. } | ObjectiveKind::Eni { .. } | ObjectiveKind::End { .. } => None,
            ObjectiveKind::CoBuchi { bad } => {
                self.alphabet.iter().find(|c| !bad.contains(c)).map(|c| (c, Neutrality::Strong))
            }
            ObjectiveKind::Fig1Left | ObjectiveKind::Fig1Right => Some((Letter::Sym('e'), Neutrality::Strong)),
            ObjectiveKind::GenBuchi => Some((Letter::Sym('e'), Neutrality::Weak)),
            ObjectiveKind::Union(parts) => {
                let mut found: Option<(Letter, Neutrality)> = None;
                for p in parts {
                    let (c, k) = p.neutral_letter()?;
                    found = match found {
                        None => Some((c, k)),
                        Some((c0, k0)) if c0 == c => Some((c, k0.min(k))),
                        Some(_) => return None,
                    };
                }
                found
            }
        }
    }

    /// Positional over all finite arenas.
    pub fn positional_over_finite_arenas(&self) -> bool {
        match &self.kind {
            ObjectiveKind::GenBuchi => false,
            ObjectiveKind::Union(parts) => parts.iter().all(|p| p.positional_over_finite_arenas()),
            _ => true,
        }
    }

    /// Positional over arbitrary, possibly infinite, arenas.
    pub fn positional_over_all_arenas(&self) -> bool {
        match &self.kind {
            ObjectiveKind::GenBuchi
            | ObjectiveKind::MeanPayoffLe0
            | ObjectiveKind::LiminfLe0
            | ObjectiveKind::LiminfLt0
            | ObjectiveKind::End { .. } => false,
            ObjectiveKind::Union(parts) => parts.iter().all(|p| p.positional_over_all_arenas()),
            _ => true,
        }
    }
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.key)
    }
}

/// Does the cyclic word `v^ω`, with `e` erased, contain an infix matching
/// `pattern`? Any such infix recurs with the period, so finding one in a
/// long enough unrolling suffices.
fn periodic_infix(v: &[Letter], pattern: &Regex) -> bool {
    let erased: String = v
        .iter()
        .filter_map(|c| match c {
            Letter::Sym('e') => None,
            Letter::Sym(ch) => Some(*ch),
            Letter::Int(_) => Some('?'),
        })
        .collect();
    if erased.is_empty() {
        return false;
    }
    pattern.is_match(&erased.repeat(12))
}

/// `aab` detector; states: 0 idle, 1 after `a`, 2 after `aa`.
pub(crate) fn fig1_left_dfa() -> CoBuchiAutomaton {
    let mut ts = Vec::new();
    for q in 0..3 {
        ts.push(transition(q, 'a', Kind::Normal, (q + 1).min(2)));
        ts.push(transition(q, 'b', if q == 2 { Kind::CoBuchi } else { Kind::Normal }, 0));
        ts.push(transition(q, 'c', Kind::Normal, 0));
        ts.push(transition(q, 'e', Kind::Normal, q));
    }
    CoBuchiAutomaton::new(fig1_alphabet(), 3, ts, 0).expect("complete")
}

/// `c(a*cb*)+c` detector; states: 0 idle, 1 after `c a*`, 2 after `c a* c b*`.
/// A completed infix sends it back to idle, so it counts disjoint infixes.
pub(crate) fn fig1_right_dfa() -> CoBuchiAutomaton {
    let n = Kind::Normal;
    let ts = [
        transition(0, 'a', n, 0),
        transition(0, 'b', n, 0),
        transition(0, 'c', n, 1),
        transition(1, 'a', n, 1),
        transition(1, 'b', n, 0),
        transition(1, 'c', n, 2),
        transition(2, 'a', n, 1),
        transition(2, 'b', n, 2),
        transition(2, 'c', Kind::CoBuchi, 0),
        transition(0, 'e', n, 0),
        transition(1, 'e', n, 1),
        transition(2, 'e', n, 2),
    ];
    CoBuchiAutomaton::new(fig1_alphabet(), 3, ts, 0).expect("complete")
}

/// Objectives exercised by catalog-wide tests.
pub fn catalog() -> Vec<Objective> {
    vec![
        Objective::parity(2),
        Objective::parity(3),
        Objective::mean_payoff_le0(2),
        Objective::mean_payoff_lt0(2),
        Objective::liminf_le0(2),
        Objective::liminf_lt0(2),
        Objective::bounded(2),
        Objective::tilted(1, 2),
        Objective::tilted(2, 2),
        Objective::finite(3),
        Objective::eni(3),
        Objective::end(3),
        Objective::cobuchi(),
        Objective::cobuchi_over("ab", "a"),
        Objective::fig1_left(),
        Objective::fig1_right(),
        Objective::gen_buchi(),
        Objective::union(vec![Objective::cobuchi_over("ab", "a"), Objective::cobuchi_over("ab", "b")])
            .expect("same alphabet"),
        Objective::union(vec![Objective::fig1_left(), Objective::fig1_right()]).expect("same alphabet"),
    ]
}
