use crate::automata::{CoBuchiAutomaton, Kind, Run};
use crate::graph::{Alphabet, Letter};

use super::UpWord;

/// Complete deterministic automaton with priorities on transitions; a run
/// is accepting when the largest priority seen infinitely often is even.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DetParity {
    alphabet: Alphabet,
    states: usize,
    initial: usize,
    table: Vec<(usize, u32)>,
}

impl DetParity {
    pub fn from_fn(
        alphabet: Alphabet,
        states: usize,
        initial: usize,
        mut delta: impl FnMut(usize, Letter) -> (usize, u32),
    ) -> Self {
        let mut table = Vec::with_capacity(states * alphabet.len());
        for q in 0..states {
            for c in alphabet.iter() {
                let (q2, p) = delta(q, c);
                assert!(q2 < states, "transition target {q2} out of range");
                table.push((q2, p));
            }
        }
        DetParity { alphabet, states, initial, table }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn state_count(&self) -> usize {
        self.states
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn max_priority(&self) -> u32 {
        self.table.iter().map(|t| t.1).max().unwrap_or(0)
    }

    /// Panics on letters outside the alphabet.
    pub fn step(&self, q: usize, c: Letter) -> (usize, u32) {
        let i = self.alphabet.index_of(c).unwrap_or_else(|| panic!("letter {c} not in alphabet"));
        self.table[q * self.alphabet.len() + i]
    }

    pub fn accepts(&self, w: &UpWord) -> bool {
        let mut priorities = Vec::new();
        let run = Run::replay(w, self.initial, |q, c| {
            let (q2, p) = self.step(q, c);
            priorities.push(p);
            (Kind::Normal, q2)
        });
        priorities[run.loop_start..].iter().max().is_some_and(|p| p % 2 == 0)
    }
}

/// A finite deterministic recognizer for an objective.
#[derive(Clone, Debug)]
pub enum Recognizer {
    CoBuchi(CoBuchiAutomaton),
    Parity(DetParity),
}

impl Recognizer {
    pub fn accepts(&self, w: &UpWord) -> bool {
        match self {
            Recognizer::CoBuchi(a) => a.run(w).expect("recognizers are deterministic").accepting(),
            Recognizer::Parity(p) => p.accepts(w),
        }
    }

    pub fn to_parity(&self) -> DetParity {
        match self {
            Recognizer::CoBuchi(a) => a.to_parity().expect("recognizers are deterministic"),
            Recognizer::Parity(p) => p.clone(),
        }
    }

    pub fn as_cobuchi(&self) -> Option<&CoBuchiAutomaton> {
        match self {
            Recognizer::CoBuchi(a) => Some(a),
            Recognizer::Parity(_) => None,
        }
    }
}
