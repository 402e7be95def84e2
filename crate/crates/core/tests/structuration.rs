use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use positional::graph::{Edge, Graph, Letter};
use positional::lab::random_satisfying_graph;
use positional::objectives::Objective;
use positional::structuration::{epsilon_saturate, structure_finite, verify_structure, StructureError, StructureOutcome};

#[test]
fn rejects_a_violating_graph() {
    let g = Graph::new(1, [Edge::new(0, Letter::Sym('F'), 0)]);
    let err = structure_finite(&g, &Objective::cobuchi(), Letter::Sym('N')).unwrap_err();
    assert!(matches!(err, StructureError::NotSatisfied(_)));
}

#[test]
fn rejects_a_letter_that_is_not_neutral() {
    let g = Graph::new(1, [Edge::new(0, Letter::Sym('N'), 0)]);
    let err = structure_finite(&g, &Objective::cobuchi(), Letter::Sym('F')).unwrap_err();
    assert!(matches!(err, StructureError::NotNeutral(_)));
}

#[test]
fn saturating_a_chain_orders_it() {
    // 0 -F-> 1 -N-> 1: the F edge can only be taken once.
    let g = Graph::new(2, [Edge::new(0, Letter::Sym('F'), 1), Edge::new(1, Letter::Sym('N'), 1)]);
    let w = Objective::cobuchi();
    let sat = epsilon_saturate(&g, &w, Letter::Sym('N')).unwrap();
    assert!(sat.has_edge(0, Letter::Sym('N'), 1));
    assert!(!sat.has_edge(1, Letter::Sym('N'), 0));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn structured_graphs_pass_every_check(seed in any::<u64>(), which in 0usize..4) {
        let (w, eps) = [
            (Objective::parity(2), Letter::Int(0)),
            (Objective::cobuchi(), Letter::Sym('N')),
            (Objective::fig1_left(), Letter::Sym('e')),
            (Objective::bounded(2), Letter::Int(0)),
        ][which].clone();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_satisfying_graph(&mut rng, &w, 5, 3, 100_000).unwrap();
        match structure_finite(&g, &w, eps).unwrap() {
            StructureOutcome::Monotone { saturated, graph, morphism } => {
                prop_assert!(saturated.edge_count() >= g.edge_count());
                prop_assert!(verify_structure(&g, &w, &graph, &morphism).all());
            }
            other => prop_assert!(false, "{:?}", other),
        }
    }
}
