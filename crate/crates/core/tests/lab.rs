use num_rational::Ratio;

use positional::games::Player;
use positional::graph::Letter;
use positional::lab::{
    best_positional_value, build_wfin_automaton, mp_family, positionality_survey, verify_nonpositionality_truncated,
    Census, ExhaustiveArenas, FamilyKind,
};
use positional::objectives::Objective;

#[test]
fn exhaustive_census_sizes() {
    let letters = [Letter::Sym('a')];
    // One vertex with a self-loop, owned by Adam since it is forced.
    let one: Vec<_> = ExhaustiveArenas::new(1, &letters, 2).collect();
    assert_eq!(one.len(), 1);
    assert_eq!(one[0].owner(0), Player::Adam);
    let census = Census::Exhaustive { max_vertices: 2, max_out_degree: 1 };
    // Functional graphs on at most 2 points up to isomorphism: 1 + 3.
    assert_eq!(census.arenas(&letters).count(), 4);
}

#[test]
fn random_census_is_reproducible() {
    let letters = [Letter::Int(-1), Letter::Int(1)];
    let c = Census::Random { samples: 20, max_vertices: 4, max_out_degree: 2, seed: 3 };
    let a: Vec<_> = c.arenas(&letters).collect();
    let b: Vec<_> = c.arenas(&letters).collect();
    assert_eq!(a, b);
}

#[test]
fn positional_objectives_survive_small_surveys() {
    let census = Census::Exhaustive { max_vertices: 3, max_out_degree: 2 };
    for w in [Objective::parity(2), Objective::cobuchi(), Objective::finite(2)] {
        let r = positionality_survey(&w, &census).unwrap();
        assert!(r.all_positional(), "{r}");
    }
}

#[test]
fn no_small_end_witness() {
    let census = Census::Exhaustive { max_vertices: 3, max_out_degree: 2 };
    let r = positionality_survey(&Objective::end(2), &census).unwrap();
    assert!(r.witnesses.is_empty(), "{r}");
}

#[test]
fn escape_right_values_shrink() {
    let f = mp_family(FamilyKind::EscapeRight);
    let values: Vec<_> = (1..=4).map(|n| best_positional_value(&f.instantiate(n), f.start()).unwrap()).collect();
    assert_eq!(values, (1..=4).map(|n| Ratio::new(1, n + 1)).collect::<Vec<_>>());
}

#[test]
fn families_refute_every_positional_strategy() {
    for kind in [FamilyKind::EscapeRight, FamilyKind::DipLeft, FamilyKind::EndClimb] {
        let f = mp_family(kind);
        for n in 1..=3 {
            let r = verify_nonpositionality_truncated(&f, n, 1000).unwrap();
            assert!(r.refuted > 0, "{:?} n = {n}", kind);
        }
    }
}

#[test]
fn wfin_grows_with_the_size_cap() {
    let w = Objective::cobuchi();
    let sizes: Vec<_> = (1..=3).map(|k| build_wfin_automaton(&w, k).unwrap().graphs.len()).collect();
    assert!(sizes.windows(2).all(|p| p[0] < p[1]), "{sizes:?}");
}
