use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use positional::automata::catalog::{
    energy_automaton, energy_resolver, eni_automaton, eni_resolver, fig1_left_automaton, fig1_right_automaton,
    finite_support_automaton, finite_support_resolver,
};
use positional::automata::{
    check_hd, round_robin_resolver, round_robin_schedule, saturate, union_automaton, CoBuchiAutomaton,
    DEFAULT_STATE_BUDGET,
};
use positional::objectives::{Objective, UpWord};

fn catalog() -> Vec<(CoBuchiAutomaton, Objective)> {
    vec![
        (energy_automaton(5, 2), Objective::bounded(2)),
        (finite_support_automaton(3), Objective::finite(3)),
        (eni_automaton(3), Objective::eni(3)),
        (fig1_left_automaton().0, Objective::fig1_left()),
        (fig1_right_automaton().0, Objective::fig1_right()),
    ]
}

#[test]
fn catalog_automata_are_monotone_and_saturated() {
    for (a, _) in catalog() {
        assert_eq!(a.check_monotone(), Some(Ok(())));
        assert!(a.is_saturated());
        assert_eq!(saturate(&a).transitions().len(), a.transitions().len());
    }
}

#[test]
fn catalog_resolvers_are_sound() {
    assert!(energy_resolver(5, 5, 2).resolver.find_unsound_word(&energy_automaton(5, 2)).is_none());
    assert!(finite_support_resolver(3).find_unsound_word(&finite_support_automaton(3)).is_none());
    assert!(eni_resolver(3).find_unsound_word(&eni_automaton(3)).is_none());
}

#[test]
fn fig1_union_is_history_deterministic() {
    let (l, lr) = fig1_left_automaton();
    let (r, rr) = fig1_right_automaton();
    let u = union_automaton(&[l, r]).unwrap();
    let res = round_robin_resolver(&u, &[lr, rr]).unwrap();
    assert!(res.find_unsound_word(&u.automaton).is_none());
    assert!(check_hd(&u.automaton, DEFAULT_STATE_BUDGET).unwrap().is_hd());
}

#[test]
fn round_robin_visits_every_part() {
    let s = round_robin_schedule(3, 12);
    assert_eq!(s, vec![0, 0, 1, 0, 1, 2, 0, 1, 2, 0, 1, 2]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn finite_support_languages(seed in any::<u64>()) {
        // The truncated energy automaton only sees bounded prefix sums, so it
        // is checked on the finite-support and ENI objectives instead.
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for (a, w) in catalog().into_iter().skip(1) {
            let u = UpWord::random(&mut rng, w.alphabet(), 5, 5);
            prop_assert_eq!(a.accepts(&u), w.up_member(&u), "{} on {:?}", w.key(), u);
        }
    }

    #[test]
    fn union_accepts_the_union(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (l, _) = fig1_left_automaton();
        let (r, _) = fig1_right_automaton();
        let u = union_automaton(&[l.clone(), r.clone()]).unwrap();
        let w = UpWord::random(&mut rng, l.alphabet(), 5, 6);
        prop_assert_eq!(u.automaton.accepts(&w), l.accepts(&w) || r.accepts(&w));
    }

    #[test]
    fn saturation_is_idempotent(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, _) = fig1_left_automaton();
        let b = saturate(&a.without_order());
        let w = UpWord::random(&mut rng, b.alphabet(), 4, 4);
        prop_assert_eq!(saturate(&b).accepts(&w), b.accepts(&w));
    }
}
