use std::path::PathBuf;
use std::process::Command;

use poslab_cli::format::{parse_document, serialize_document, Document};
use positional::games::{check_strategy, Strategy};
use positional::graph::Morphism;
use positional::objectives::Objective;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name).display().to_string()
}

fn poslab(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_poslab")).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

/// The document starting with the line `kind`, up to the next blank line.
fn section<'a>(out: &'a str, kind: &str) -> Option<&'a str> {
    let start = out.find(&format!("\n{kind}"))? + 1;
    let rest = &out[start..];
    Some(rest.split("\n\n").next().unwrap())
}

fn field(out: &str, key: &str) -> String {
    let report = parse_document(section(out, "report").unwrap()).unwrap();
    match report {
        Document::Report(r) => r.get(key).unwrap_or_else(|| panic!("no field {key}")).to_string(),
        _ => unreachable!(),
    }
}

#[test]
fn zero_loop_loses_strict_mean_payoff() {
    let (code, out, _) = poslab(&["solve", &data("one_loop.arena"), "--objective", "mp_lt_0"]);
    assert_eq!(code, 0);
    assert!(out.contains("Eve loses"), "{out}");
    let (code, out, _) = poslab(&["solve", &data("one_loop.arena"), "--objective", "mp_le_0"]);
    assert_eq!(code, 0);
    assert!(out.contains("Eve wins from every vertex"), "{out}");
}

#[test]
fn solve_certificates_revalidate() {
    for (file, key) in [("choice.arena", "mp_lt_0:B=1"), ("genbuchi.arena", "genbuchi")] {
        let (code, out, _) = poslab(&["solve", &data(file), "--objective", key]);
        assert_eq!(code, 0, "{out}");
        let arena = parse_document(&std::fs::read_to_string(data(file)).unwrap()).unwrap().into_arena().unwrap();
        let Document::Strategy(s) = parse_document(section(&out, "strategy").unwrap()).unwrap() else { panic!() };
        // Restrict the arena to the strategy's image, which is Eve's region.
        let mut region = vec![false; arena.arena.vertex_count()];
        for &v in &s.image {
            region[v] = true;
        }
        let (sub, kept) = positional::games::restrict_to_region(&arena.arena, &region).unwrap();
        let map = s.image.iter().map(|v| kept.iter().position(|k| k == v).unwrap()).collect();
        let strategy = Strategy { graph: s.graph, morphism: Morphism { map } };
        assert_eq!(check_strategy(&sub, &strategy, &Objective::parse(key).unwrap()), Ok(()));
    }
}

#[test]
fn parity_survey_is_positional() {
    let (code, out, _) = poslab(&["survey", "--objective", "parity:2", "--max-vertices", "4", "--seed", "7"]);
    assert_eq!(code, 0);
    assert_eq!(field(&out, "positional_wins"), field(&out, "eve_wins"));
}

#[test]
fn output_is_deterministic() {
    let args = ["survey", "--objective", "cobuchi", "--max-vertices", "4", "--seed", "3"];
    assert_eq!(poslab(&args), poslab(&args));
    let args = ["probe", "--universal", &data("energy.graph"), "--seed", "9"];
    assert_eq!(poslab(&args), poslab(&args));
}

#[test]
fn structure_rejects_violating_graph() {
    let (code, out, err) = poslab(&["structure", &data("fig1_bad.graph"), "--objective", "fig1_left", "--epsilon", "e"]);
    assert_eq!(code, 2);
    assert!(out.is_empty());
    assert!(err.contains("losing path"), "{err}");
}

#[test]
fn structure_orders_a_chain() {
    let (code, out, _) = poslab(&["structure", &data("cobuchi_chain.graph"), "--epsilon", "N"]);
    assert_eq!(code, 0);
    assert!(out.contains("classes from lowest: t < s"), "{out}");
    assert_eq!(field(&out, "checks_passed"), "true");
}

#[test]
fn hd_verdicts() {
    let (code, out, _) = poslab(&["hdcheck", &data("guess.automaton")]);
    assert_eq!(code, 0);
    assert_eq!(field(&out, "hd"), "false");
    let (code, out, _) = poslab(&["union", &data("finite_a.automaton"), &data("finite_b.automaton")]);
    assert_eq!(code, 0);
    assert_eq!(field(&out, "hd"), "true");
    let (code, out, _) = poslab(&["hdcheck", &data("finite_a.automaton")]);
    assert_eq!(code, 0);
    assert_eq!(field(&out, "hd"), "true");
    assert!(section(&out, "automaton").is_some());
}

#[test]
fn union_rejects_unsaturated_parts() {
    let (code, _, err) = poslab(&["union", &data("guess.automaton"), &data("finite_a.automaton")]);
    assert_eq!(code, 2);
    assert!(err.contains("error"), "{err}");
}

#[test]
fn saturate_emits_a_parsable_automaton() {
    let (code, out, _) = poslab(&["saturate", &data("guess.automaton")]);
    assert_eq!(code, 0);
    let a = parse_document(section(&out, "automaton").unwrap()).unwrap().into_automaton().unwrap();
    assert!(a.automaton.is_saturated());
}

#[test]
fn family_truncations_refute_positional_strategies() {
    for kind in ["escape_right", "dip_left", "end_climb"] {
        let (code, out, _) = poslab(&["mpfamily", "--kind", kind, "--n", "3", "--horizon", "100"]);
        assert_eq!(code, 0, "{kind}: {out}");
        let refuted: usize = field(&out, "refuted").parse().unwrap();
        let all: usize = field(&out, "positional_strategies").parse().unwrap();
        // END is positional on finite arenas: one strategy survives.
        assert_eq!(refuted + usize::from(kind == "end_climb"), all, "{kind}");
    }
    let (code, _, _) = poslab(&["mpfamily", "--kind", "nope", "--n", "3"]);
    assert_eq!(code, 2);
}

#[test]
fn wfin_small() {
    let (code, out, _) = poslab(&["wfin", "--objective", "cobuchi", "--graph-size", "2", "--survey-vertices", "2"]);
    assert_eq!(code, 0, "{out}");
    assert_eq!(field(&out, "agreements"), field(&out, "arenas"));
}

#[test]
fn census_cap_is_an_input_error() {
    let (code, _, err) =
        poslab(&["survey", "--objective", "cobuchi", "--exhaustive", "--max-vertices", "4", "--cap", "10"]);
    assert_eq!(code, 2);
    assert!(err.contains("cap"), "{err}");
}

#[test]
fn genbuchi_survey_finds_memory_without_violation() {
    let (code, out, _) = poslab(&["survey", "--objective", "genbuchi", "--exhaustive", "--max-vertices", "2"]);
    assert_eq!(code, 0);
    assert_eq!(field(&out, "predicted_positional"), "false");
    assert!(section(&out, "arena").is_some(), "a witness arena is printed");
}

#[test]
fn dot_owner_does_not_change_winners() {
    let (_, adam, _) = poslab(&["solve", &data("choice.arena"), "--objective", "mp_lt_0:B=1"]);
    let (_, eve, _) = poslab(&["solve", &data("choice.arena"), "--objective", "mp_lt_0:B=1", "--dots", "eve"]);
    assert_eq!(field(&adam, "eve_region"), "p");
    assert_eq!(field(&eve, "eve_region"), "p");
}

#[test]
fn input_errors_exit_2() {
    let (code, _, err) = poslab(&["solve", &data("missing.arena"), "--objective", "cobuchi"]);
    assert_eq!(code, 2);
    assert!(err.contains("missing.arena"));
    let (code, _, err) = poslab(&["solve", &data("one_loop.arena"), "--objective", "parity:x"]);
    assert_eq!(code, 2, "{err}");
    let (code, _, err) = poslab(&["solve", &data("one_loop.arena")]);
    assert_eq!(code, 2);
    assert!(err.contains("objective"));
    let (code, _, _) = poslab(&["frobnicate"]);
    assert_eq!(code, 2);
}

#[test]
fn golden_files_round_trip() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data");
    let mut seen = 0;
    for entry in std::fs::read_dir(dir).unwrap() {
        let text = std::fs::read_to_string(entry.unwrap().path()).unwrap();
        let doc = parse_document(&text).unwrap();
        let canonical = serialize_document(&doc);
        assert_eq!(parse_document(&canonical).unwrap(), doc);
        assert_eq!(serialize_document(&parse_document(&canonical).unwrap()), canonical);
        seen += 1;
    }
    assert!(seen >= 8);
}
