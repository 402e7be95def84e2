//! Ultimately periodic words and a few fixed non-periodic generators.

use std::fmt;

use num_rational::Ratio;
use rand::Rng;
use thiserror::Error;

use crate::graph::{Alphabet, Letter};

/// The infinite word `prefix · period^ω`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UpWord {
    prefix: Vec<Letter>,
    period: Vec<Letter>,
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("the period of an ultimately periodic word must be nonempty")]
pub struct EmptyPeriod;

impl UpWord {
    pub fn new(prefix: Vec<Letter>, period: Vec<Letter>) -> Result<Self, EmptyPeriod> {
        if period.is_empty() {
            return Err(EmptyPeriod);
        }
        Ok(UpWord { prefix, period })
    }

    /// Convenience constructor from integers, e.g. weights or priorities.
    pub fn ints(prefix: &[i64], period: &[i64]) -> Self {
        UpWord::new(
            prefix.iter().map(|&v| Letter::Int(v)).collect(),
            period.iter().map(|&v| Letter::Int(v)).collect(),
        )
        .expect("nonempty period")
    }

    /// Convenience constructor from characters.
    pub fn syms(prefix: &str, period: &str) -> Self {
        UpWord::new(prefix.chars().map(Letter::Sym).collect(), period.chars().map(Letter::Sym).collect())
            .expect("nonempty period")
    }

    pub fn prefix(&self) -> &[Letter] {
        &self.prefix
    }

    pub fn period(&self) -> &[Letter] {
        &self.period
    }

    /// Letter at position `i` of the infinite word.
    pub fn at(&self, i: usize) -> Letter {
        if i < self.prefix.len() {
            self.prefix[i]
        } else {
            self.period[(i - self.prefix.len()) % self.period.len()]
        }
    }

    /// The first `n` letters.
    pub fn take(&self, n: usize) -> Vec<Letter> {
        (0..n).map(|i| self.at(i)).collect()
    }

    /// `c · self`.
    pub fn cons(&self, c: Letter) -> Self {
        let mut prefix = vec![c];
        prefix.extend_from_slice(&self.prefix);
        UpWord { prefix, period: self.period.clone() }
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        self.prefix.iter().chain(&self.period).copied()
    }

    /// Uniformly random word with prefix length `0..=max_prefix` and period
    /// length `1..=max_period`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, alphabet: &Alphabet, max_prefix: usize, max_period: usize) -> Self {
        let letters = alphabet.letters();
        let p = rng.gen_range(0..=max_prefix);
        let prefix = (0..p).map(|_| letters[rng.gen_range(0..letters.len())]).collect();
        let q = rng.gen_range(1..=max_period);
        let period = (0..q).map(|_| letters[rng.gen_range(0..letters.len())]).collect();
        UpWord { prefix, period }
    }
}

impl fmt::Display for UpWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |w: &[Letter]| w.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" ");
        write!(f, "[{}]([{}])^w", join(&self.prefix), join(&self.period))
    }
}

/// Fixed infinite words that are not ultimately periodic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WordGenerator {
    /// `0 1 0 0 1 0 0 0 1 …`: blocks of `k` zeros followed by a one.
    ZeroOneBlocks,
    /// The label of the growing-loops play in the escape-right family:
    /// loop `n` reads `n` ones and then `-(n-1)`.
    EscapeRight,
    /// `0 1 2 3 …`
    Increasing,
    /// `c c c …`
    Constant(i64),
}

/// Membership of a generated word in a catalog objective, with the reason.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KnownMembership {
    pub objective: &'static str,
    pub member: bool,
    pub reason: &'static str,
}

impl WordGenerator {
    pub fn name(&self) -> String {
        match self {
            WordGenerator::ZeroOneBlocks => "zero_one_blocks".into(),
            WordGenerator::EscapeRight => "escape_right".into(),
            WordGenerator::Increasing => "increasing".into(),
            WordGenerator::Constant(c) => format!("constant:{c}"),
        }
    }

    /// The first `k` letters.
    pub fn produce(&self, k: usize) -> Vec<Letter> {
        let mut out = Vec::with_capacity(k);
        match self {
            WordGenerator::ZeroOneBlocks => {
                let mut block = 1;
                while out.len() < k {
                    out.extend(std::iter::repeat_n(Letter::Int(0), block));
                    out.push(Letter::Int(1));
                    block += 1;
                }
            }
            WordGenerator::EscapeRight => {
                let mut n: i64 = 1;
                while out.len() < k {
                    out.extend(std::iter::repeat_n(Letter::Int(1), n as usize));
                    out.push(Letter::Int(-(n - 1)));
                    n += 1;
                }
            }
            WordGenerator::Increasing => out.extend((0..k as i64).map(Letter::Int)),
            WordGenerator::Constant(c) => out.extend(std::iter::repeat_n(Letter::Int(*c), k)),
        }
        out.truncate(k);
        out
    }

    /// Positions right after each completed loop of [`WordGenerator::EscapeRight`]
    /// or block of [`WordGenerator::ZeroOneBlocks`], up to `k`.
    pub fn block_ends(&self, k: usize) -> Vec<usize> {
        let mut ends = Vec::new();
        let mut at = 0;
        let mut n = 1;
        loop {
            at += match self {
                WordGenerator::ZeroOneBlocks | WordGenerator::EscapeRight => n + 1,
                _ => 1,
            };
            if at > k {
                return ends;
            }
            ends.push(at);
            n += 1;
        }
    }

    pub fn known_memberships(&self) -> Vec<KnownMembership> {
        match self {
            WordGenerator::ZeroOneBlocks => vec![
                KnownMembership { objective: "mp_le_0", member: true, reason: "averages tend to 0" },
                KnownMembership { objective: "mp_lt_0", member: false, reason: "averages are nonnegative" },
                KnownMembership { objective: "bounded", member: false, reason: "prefix sums grow without bound" },
            ],
            WordGenerator::EscapeRight => vec![
                KnownMembership { objective: "mp_le_0", member: true, reason: "loop n has mean 1/(n+1)" },
                KnownMembership { objective: "bounded", member: false, reason: "each loop adds 1 to the running sum" },
            ],
            WordGenerator::Increasing => vec![
                KnownMembership { objective: "eni", member: false, reason: "increases at every step" },
                KnownMembership { objective: "end", member: true, reason: "never decreases" },
            ],
            WordGenerator::Constant(c) => vec![KnownMembership {
                objective: "eni",
                member: true,
                reason: if *c == 0 { "constant zero" } else { "constant" },
            }],
        }
    }
}

/// Exact prefix averages `(1/j) Σ_{i<j} w_i` for `j = 1..=k`.
pub fn generator_prefix_averages(gen: &WordGenerator, k: usize) -> Vec<Ratio<i64>> {
    let mut sum = 0i64;
    gen.produce(k)
        .into_iter()
        .enumerate()
        .map(|(i, c)| {
            sum += c.value().expect("weight generator");
            Ratio::new(sum, i as i64 + 1)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    #[test]
    fn empty_period_is_rejected() {
        assert_eq!(UpWord::new(vec![], vec![]), Err(EmptyPeriod));
    }

    #[test]
    fn zero_one_blocks_shape() {
        let w: Vec<i64> = WordGenerator::ZeroOneBlocks.produce(9).iter().map(|c| c.value().unwrap()).collect();
        assert_eq!(w, vec![0, 1, 0, 0, 1, 0, 0, 0, 1]);
    }

    #[test]
    fn constant_zero_averages() {
        let avg = generator_prefix_averages(&WordGenerator::Constant(0), 5);
        assert_eq!(avg, vec![Ratio::zero(); 5]);
    }

    #[test]
    fn zero_one_block_averages_decrease_at_block_ends() {
        let gen = WordGenerator::ZeroOneBlocks;
        let avg = generator_prefix_averages(&gen, 2000);
        assert!(avg.iter().all(|a| *a >= Ratio::zero()));
        let ends = gen.block_ends(2000);
        for pair in ends.windows(2) {
            assert!(avg[pair[1] - 1] < avg[pair[0] - 1]);
        }
    }

    #[test]
    fn produce_is_prefix_closed() {
        for gen in [WordGenerator::ZeroOneBlocks, WordGenerator::EscapeRight, WordGenerator::Increasing] {
            let long = gen.produce(200);
            for k in [0, 1, 7, 50, 199] {
                assert_eq!(gen.produce(k), long[..k]);
            }
        }
    }
}
