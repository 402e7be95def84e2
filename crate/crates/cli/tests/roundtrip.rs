use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use poslab_cli::format::{index_names, parse_document, serialize_document, ArenaDoc, AutomatonDoc, Document, GraphDoc, Header};
use positional::automata::catalog::{energy_automaton, eni_automaton, fig1_left_automaton, guesser};
use positional::graph::Alphabet;
use positional::lab::{random_arena, random_graph};

fn round_trip(doc: Document) -> Result<(), TestCaseError> {
    let text = serialize_document(&doc);
    let back = parse_document(&text).map_err(|e| TestCaseError::fail(format!("{e}\n{text}")))?;
    prop_assert_eq!(&back, &doc);
    prop_assert_eq!(serialize_document(&back), text);
    Ok(())
}

#[test]
fn catalog_automata_round_trip() {
    for a in [energy_automaton(4, 2), eni_automaton(3), fig1_left_automaton().0, guesser()] {
        let names = index_names(a.state_count());
        round_trip(Document::Automaton(AutomatonDoc { header: Header::default(), names, automaton: a })).unwrap();
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn arenas_round_trip(seed in any::<u64>(), weighted in any::<bool>(), objective in proptest::option::of("[a-z_]{1,8}")) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let alphabet = if weighted { Alphabet::range(-2, 2) } else { Alphabet::symbols("abc") };
        let arena = random_arena(&mut rng, alphabet.letters(), 6, 3);
        let names = index_names(arena.vertex_count());
        let header = Header { objective, seed: Some(seed), cap: None };
        round_trip(Document::Arena(ArenaDoc { header, alphabet, names, arena }))?;
    }

    #[test]
    fn ordered_graphs_round_trip(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let alphabet = Alphabet::symbols("xy");
        let graph = random_graph(&mut rng, alphabet.letters(), 5, 2);
        let n = graph.vertex_count();
        let rank = Some((0..n).rev().collect());
        let names = (0..n).map(|v| format!("v{v}")).collect();
        round_trip(Document::Graph(GraphDoc { header: Header::default(), alphabet, names, graph, rank }))?;
    }
}
