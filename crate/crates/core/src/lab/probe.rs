//! A finite-depth probe of almost-universality: do unfoldings of random
//! graphs satisfying `W` embed into `U` from some shallow subtree?
//!
//! Only a necessary condition at finite depth.

use rand::Rng;

use crate::graph::{find_morphism, unfold_tree, Graph, Letter, Morphism, Unfolding};
use crate::objectives::{graph_satisfies, Objective, Satisfaction};

use super::{random_satisfying_graph, LabError, MAX_WITNESSES};

const TRIES: usize = 10_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProbeReport {
    pub samples: usize,
    pub embedded: usize,
    pub depth: usize,
    /// Subtree roots are searched down to this depth.
    pub max_root_depth: usize,
    /// Samples for which no satisfying graph was found.
    pub skipped: usize,
    pub failures: Vec<Graph<Letter>>,
}

impl ProbeReport {
    pub fn all_embedded(&self) -> bool {
        self.embedded + self.skipped == self.samples && self.skipped == 0
    }

    pub fn fields(&self) -> Vec<(&'static str, String)> {
        vec![
            ("samples", self.samples.to_string()),
            ("embedded", self.embedded.to_string()),
            ("depth", self.depth.to_string()),
            ("max_root_depth", self.max_root_depth.to_string()),
            ("skipped", self.skipped.to_string()),
            ("note", "finite-depth necessary condition for almost-universality".into()),
        ]
    }
}

/// The first node `t` of `tree` (in breadth-first order, at depth at most
/// `max_root_depth`) whose subtree maps into `u`.
pub fn embeddable_subtree(u: &Graph<Letter>, tree: &Unfolding<Letter>, max_root_depth: usize) -> Option<(usize, Morphism)> {
    (0..tree.tree.vertex_count()).filter(|&t| tree.depth[t] <= max_root_depth).find_map(|t| {
        let sub = tree.subtree(t);
        find_morphism(&sub.tree, u).ok().flatten().map(|m| (t, m))
    })
}

/// Samples `samples` random graphs (at most 5 vertices, out-degree at most
/// 3) satisfying `w`, unfolds each from vertex 0 to `depth`, padding leaves
/// with the neutral letter of `w`, and looks for a subtree rooted at depth
/// at most `depth / 2` that maps into `u`.
pub fn almost_universality_probe<R: Rng + ?Sized>(
    rng: &mut R,
    u: &Graph<Letter>,
    w: &Objective,
    samples: usize,
    depth: usize,
) -> Result<ProbeReport, LabError> {
    if let Satisfaction::Violates(l) = graph_satisfies(w, u)? {
        return Err(LabError::NotSatisfied(l));
    }
    let (pad, _) = w.neutral_letter().ok_or_else(|| LabError::Objective(w.key().to_string(), "neutral letter"))?;
    let max_root_depth = depth / 2;
    let mut report =
        ProbeReport { samples, embedded: 0, depth, max_root_depth, skipped: 0, failures: Vec::new() };
    for _ in 0..samples {
        let Some(g) = random_satisfying_graph(rng, w, 5, 3, TRIES) else {
            report.skipped += 1;
            continue;
        };
        let tree = unfold_tree(&g, 0, depth, pad);
        if embeddable_subtree(u, &tree, max_root_depth).is_some() {
            report.embedded += 1;
        } else if report.failures.len() < MAX_WITNESSES {
            report.failures.push(g);
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::catalog::energy_automaton;
    use crate::graph::Edge;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn energy_graph_absorbs_bounded_trees() {
        let u = energy_automaton(6, 2).normal_graph();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let r = almost_universality_probe(&mut rng, &u, &Objective::bounded(2), 10, 4).unwrap();
        assert!(r.all_embedded(), "{r:?}");
    }

    #[test]
    fn zero_loop_rejects_excursions() {
        let u = Graph::new(1, [Edge::new(0, Letter::Int(0), 0)]);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let r = almost_universality_probe(&mut rng, &u, &Objective::bounded(2), 10, 4).unwrap();
        assert!(r.embedded < r.samples);
        assert!(!r.failures.is_empty());
    }

    #[test]
    fn own_unfolding_embeds_at_the_root() {
        let u = energy_automaton(3, 1).normal_graph();
        let tree = unfold_tree(&u, 2, 3, Letter::Int(0));
        let (t, m) = embeddable_subtree(&u, &tree, 0).unwrap();
        assert_eq!(t, 0);
        assert!(crate::graph::is_morphism(&tree.tree, &u, &m.map).is_ok());
    }
}
