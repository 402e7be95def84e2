//! Experiments: arena censuses and positionality surveys, the capped
//! `W_fin` construction, truncated mean-payoff families and the
//! almost-universality probe.
//!
//! Everything here runs at desk scale and is evidence, not proof: the
//! statements being probed are about infinite arenas.

mod census;
mod families;
mod probe;
mod survey;
mod wfin;

use std::fmt;

use rayon::prelude::*;
use thiserror::Error;

use crate::automata::AutomatonError;
use crate::games::{Arena, SolveError};
use crate::graph::Lasso;
use crate::graph::Letter;
use crate::objectives::SatisfyError;

pub use census::{random_arena, random_graph, random_satisfying_graph, Census, ExhaustiveArenas};
pub use families::{
    best_positional_value, dip_left_combined_mean, mp_family, verify_nonpositionality_truncated, ArenaFamily, FamilyKind, GeneratorCheck,
    NonPositionalityReport,
};
pub use probe::{almost_universality_probe, embeddable_subtree, ProbeReport};
pub use survey::{
    mp_lt0_positionality_survey, positional_outcome, positionality_survey, union_positionality_experiment,
    winner_agreement, PositionalOutcome,
};
pub use wfin::{
    build_wfin_automaton, enumerate_monotone_satisfying_graphs, sample_path_word, wfin_equivalence_survey, Wfin,
    MAX_GRAPH_SIZE,
};

#[derive(Debug, Error)]
pub enum LabError {
    #[error("{what} {requested} exceeds the cap of {cap}")]
    Cap { what: &'static str, requested: u128, cap: u128 },
    #[error("objective `{0}` has no {1}")]
    Objective(String, &'static str),
    #[error("graph does not satisfy the objective: {0:?}")]
    NotSatisfied(Lasso<Letter>),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Satisfy(#[from] SatisfyError),
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
}

/// How many witnesses a report keeps.
pub const MAX_WITNESSES: usize = 5;

/// Counts of a positionality survey. `witnesses` are arenas where Eve
/// wins somewhere but no positional strategy wins her whole region.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurveyReport {
    pub objective: String,
    pub census: String,
    pub arenas: usize,
    pub eve_wins: usize,
    pub positional_wins: usize,
    pub witnesses: Vec<Arena>,
}

impl SurveyReport {
    pub fn new(objective: impl Into<String>, census: impl Into<String>) -> Self {
        SurveyReport {
            objective: objective.into(),
            census: census.into(),
            arenas: 0,
            eve_wins: 0,
            positional_wins: 0,
            witnesses: Vec::new(),
        }
    }

    pub fn record(&mut self, a: Arena, outcome: PositionalOutcome) {
        self.arenas += 1;
        match outcome {
            PositionalOutcome::AdamEverywhere => {}
            PositionalOutcome::Positional => {
                self.eve_wins += 1;
                self.positional_wins += 1;
            }
            PositionalOutcome::NeedsMemory => {
                self.eve_wins += 1;
                if self.witnesses.len() < MAX_WITNESSES {
                    self.witnesses.push(a);
                }
            }
        }
    }

    pub fn all_positional(&self) -> bool {
        self.positional_wins == self.eve_wins
    }

    pub fn fields(&self) -> Vec<(&'static str, String)> {
        vec![
            ("objective", self.objective.clone()),
            ("census", self.census.clone()),
            ("arenas", self.arenas.to_string()),
            ("eve_wins", self.eve_wins.to_string()),
            ("positional_wins", self.positional_wins.to_string()),
            ("witnesses", self.witnesses.len().to_string()),
        ]
    }
}

impl fmt::Display for SurveyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "survey of {} over {}", self.objective, self.census)?;
        writeln!(f, "  arenas:          {}", self.arenas)?;
        writeln!(f, "  eve wins:        {}", self.eve_wins)?;
        write!(f, "  positional wins: {}", self.positional_wins)?;
        if self.eve_wins > 0 {
            write!(f, " ({:.2}%)", 100.0 * self.positional_wins as f64 / self.eve_wins as f64)?;
        }
        Ok(())
    }
}

/// Counts of a winner-agreement survey between two ways of solving games.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AgreementReport {
    pub comparison: String,
    pub census: String,
    pub arenas: usize,
    pub agreements: usize,
    pub divergences: Vec<Arena>,
}

impl AgreementReport {
    pub fn new(comparison: impl Into<String>, census: impl Into<String>) -> Self {
        AgreementReport {
            comparison: comparison.into(),
            census: census.into(),
            arenas: 0,
            agreements: 0,
            divergences: Vec::new(),
        }
    }

    pub fn record(&mut self, a: Arena, agree: bool) {
        self.arenas += 1;
        if agree {
            self.agreements += 1;
        } else if self.divergences.len() < MAX_WITNESSES {
            self.divergences.push(a);
        }
    }

    pub fn all_agree(&self) -> bool {
        self.agreements == self.arenas
    }

    pub fn fields(&self) -> Vec<(&'static str, String)> {
        vec![
            ("comparison", self.comparison.clone()),
            ("census", self.census.clone()),
            ("arenas", self.arenas.to_string()),
            ("agreements", self.agreements.to_string()),
            ("divergences", (self.arenas - self.agreements).to_string()),
        ]
    }
}

impl fmt::Display for AgreementReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} over {}", self.comparison, self.census)?;
        writeln!(f, "  arenas:     {}", self.arenas)?;
        write!(f, "  agreements: {}", self.agreements)?;
        if self.arenas > 0 {
            write!(f, " ({:.2}%)", 100.0 * self.agreements as f64 / self.arenas as f64)?;
        }
        Ok(())
    }
}

const CHUNK: usize = 2048;

/// Evaluates `outcome` on every arena, in parallel chunks, and feeds the
/// results to `record` in census order.
pub(crate) fn run_census<T: Send>(
    arenas: impl Iterator<Item = Arena>,
    outcome: impl Fn(&Arena) -> Result<T, LabError> + Sync,
    mut record: impl FnMut(Arena, T),
) -> Result<(), LabError> {
    let mut arenas = arenas.peekable();
    while arenas.peek().is_some() {
        let chunk: Vec<Arena> = arenas.by_ref().take(CHUNK).collect();
        let results: Vec<T> = chunk.par_iter().map(&outcome).collect::<Result<_, _>>()?;
        for (a, r) in chunk.into_iter().zip(results) {
            record(a, r);
        }
    }
    Ok(())
}
