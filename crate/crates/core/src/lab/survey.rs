//! Positionality surveys: whenever Eve wins, does she win positionally?

use crate::automata::catalog::monotone_hd_automaton;
use crate::automata::CoBuchiAutomaton;
use crate::games::{
    exists_positional_winning, restrict_to_region, winning_region, winning_region_hd, Arena, DEFAULT_STRATEGY_BUDGET,
};
use crate::objectives::Objective;

use super::{run_census, AgreementReport, Census, LabError, SurveyReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PositionalOutcome {
    AdamEverywhere,
    /// One positional strategy wins from every vertex of Eve's region.
    Positional,
    NeedsMemory,
}

/// Classifies `a` given Eve's winning region for `w`.
pub fn positional_outcome(a: &Arena, w: &Objective, region: &[bool]) -> Result<PositionalOutcome, LabError> {
    if !region.contains(&true) {
        return Ok(PositionalOutcome::AdamEverywhere);
    }
    let (sub, _) = restrict_to_region(a, region).expect("a winning region is a trap for Adam");
    Ok(match exists_positional_winning(&sub, w, DEFAULT_STRATEGY_BUDGET)? {
        Some(_) => PositionalOutcome::Positional,
        None => PositionalOutcome::NeedsMemory,
    })
}

pub fn positionality_survey(w: &Objective, census: &Census) -> Result<SurveyReport, LabError> {
    let letters = w.alphabet().letters().to_vec();
    let mut report = SurveyReport::new(w.key(), census.to_string());
    run_census(
        census.arenas(&letters),
        |a| positional_outcome(a, w, &winning_region(a, w)?),
        |a, o| report.record(a, o),
    )?;
    Ok(report)
}

/// Builds the union automaton of the parts' catalog automata with its
/// round-robin resolver, solves each arena through the
/// history-deterministic product, and checks positionality against the
/// union objective.
pub fn union_positionality_experiment(parts: &[Objective], census: &Census, cap: usize) -> Result<SurveyReport, LabError> {
    let w = Objective::union(parts.to_vec()).map_err(|e| LabError::Objective(e.to_string(), "union"))?;
    let (aut, _) = union_automaton_for(&w, cap)?;
    let letters = w.alphabet().letters().to_vec();
    let mut report = SurveyReport::new(w.key(), census.to_string());
    run_census(
        census.arenas(&letters),
        |a| positional_outcome(a, &w, &winning_region_hd(a, &aut)),
        |a, o| report.record(a, o),
    )?;
    Ok(report)
}

fn union_automaton_for(w: &Objective, cap: usize) -> Result<(CoBuchiAutomaton, crate::automata::Resolver), LabError> {
    monotone_hd_automaton(w, cap).ok_or_else(|| LabError::Objective(w.key().to_string(), "catalog automaton"))
}

/// Mean-payoff `< 0` with weights in `[-weight_bound, weight_bound]`.
pub fn mp_lt0_positionality_survey(census: &Census, weight_bound: i64) -> Result<SurveyReport, LabError> {
    positionality_survey(&Objective::mean_payoff_lt0(weight_bound), census)
}

/// Do `w1` and `w2` have the same winning regions on every census arena?
/// Arenas are drawn over the letters of `w1`.
pub fn winner_agreement(w1: &Objective, w2: &Objective, census: &Census) -> Result<AgreementReport, LabError> {
    let letters = w1.alphabet().letters().to_vec();
    let mut report = AgreementReport::new(format!("{} vs {}", w1.key(), w2.key()), census.to_string());
    run_census(
        census.arenas(&letters),
        |a| Ok(winning_region(a, w1)? == winning_region(a, w2)?),
        |a, agree| report.record(a, agree),
    )?;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parity_is_positional_on_small_arenas() {
        let census = Census::Exhaustive { max_vertices: 2, max_out_degree: 2 };
        let r = positionality_survey(&Objective::parity(2), &census).unwrap();
        assert!(r.arenas > 0 && r.eve_wins > 0);
        assert!(r.all_positional());
    }

    #[test]
    fn gen_buchi_diverges() {
        let census = Census::Exhaustive { max_vertices: 1, max_out_degree: 2 };
        let r = positionality_survey(&Objective::gen_buchi(), &census).unwrap();
        assert!(r.positional_wins < r.eve_wins);
        assert!(!r.witnesses.is_empty());
    }

    #[test]
    fn mp_le0_and_bounded_agree() {
        let census = Census::Random { samples: 40, max_vertices: 4, max_out_degree: 3, seed: 11 };
        let r = winner_agreement(&Objective::mean_payoff_le0(2), &Objective::bounded(2), &census).unwrap();
        assert!(r.all_agree(), "{r}");
    }

    #[test]
    fn single_part_union() {
        let census = Census::Exhaustive { max_vertices: 2, max_out_degree: 2 };
        let r = union_positionality_experiment(&[Objective::cobuchi()], &census, 4).unwrap();
        let s = positionality_survey(&Objective::cobuchi(), &census).unwrap();
        assert_eq!((r.arenas, r.eve_wins, r.positional_wins), (s.arenas, s.eve_wins, s.positional_wins));
    }
}
