//! Subcommands of `poslab`.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use positional::automata::{
    check_hd, normal_core, saturate, union_automaton, AutomatonError, HdVerdict, UnionError,
    DEFAULT_STATE_BUDGET,
};
use positional::games::{
    check_positional, check_strategy, eve_wins, exists_positional_winning, restrict_to_region, winning_region,
    Arena, Certificate, Player, SolveError,
};
use positional::graph::{Edge, Graph, Lasso, Letter};
use positional::lab::{
    almost_universality_probe, build_wfin_automaton, positionality_survey, verify_nonpositionality_truncated,
    wfin_equivalence_survey, ArenaFamily, Census, FamilyKind, LabError, NonPositionalityReport,
};
use positional::objectives::{graph_satisfies, Objective, ObjectiveError, Satisfaction, SatisfyError};
use positional::structuration::{structure_finite, verify_structure, StructureError, StructureOutcome};

use crate::format::{
    index_names, parse_document_with, serialize_document, AutomatonDoc, Document, FormatError, GraphDoc, Header,
    ParseOptions, Report, StrategyDoc,
};

#[derive(Debug, Parser)]
#[command(name = "poslab", version, about = "Positionality experiments for games on graphs")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Dots {
    Eve,
    Adam,
}

#[derive(Debug, Args)]
pub struct Global {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Search budget: positional strategies for `solve`, automaton states
    /// for `hdcheck` and `union`.
    #[arg(long, global = true)]
    pub budget: Option<u128>,
    /// Size cap: census size for `survey`, catalog caps elsewhere.
    #[arg(long, global = true)]
    pub cap: Option<u128>,
    /// Owner of undeclared vertices with one outgoing edge.
    #[arg(long, global = true, value_enum, default_value_t = Dots::Adam)]
    pub dots: Dots,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve a game and print a winning strategy when Eve wins.
    Solve {
        arena: PathBuf,
        #[arg(long)]
        objective: Option<String>,
    },
    /// Check that every infinite path of a graph satisfies an objective.
    Satisfies {
        graph: PathBuf,
        #[arg(long)]
        objective: Option<String>,
    },
    /// Add every co-Büchi transition allowed by the order.
    Saturate { automaton: PathBuf },
    /// Restrict to the states with a normal cycle and saturate.
    Normalcore { automaton: PathBuf },
    /// Decide history-determinism through the letter game.
    Hdcheck { automaton: PathBuf },
    /// Monotone union of saturated monotone automata.
    Union {
        #[arg(required = true)]
        automata: Vec<PathBuf>,
    },
    /// Saturate with a neutral letter and quotient to a monotone graph.
    Structure {
        graph: PathBuf,
        #[arg(long)]
        objective: Option<String>,
        #[arg(long)]
        epsilon: String,
    },
    /// Build the automaton for the union of small monotone graphs.
    Wfin {
        #[arg(long)]
        objective: String,
        #[arg(long, default_value_t = 2)]
        graph_size: usize,
        /// Compare winners with the objective on all arenas up to this size.
        #[arg(long, default_value_t = 0)]
        survey_vertices: usize,
    },
    /// Does Eve win positionally whenever she wins?
    Survey {
        #[arg(long)]
        objective: String,
        #[arg(long, default_value_t = 4)]
        max_vertices: usize,
        #[arg(long, default_value_t = 2)]
        max_out_degree: usize,
        /// Random arenas to draw; ignored with `--exhaustive`.
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long)]
        exhaustive: bool,
    },
    /// Truncations of the mean-payoff families.
    Mpfamily {
        #[arg(long)]
        kind: String,
        #[arg(long)]
        n: usize,
        /// Letters of the family's play generator to average.
        #[arg(long, default_value_t = 10_000)]
        horizon: usize,
    },
    /// Embed unfoldings of random satisfying graphs into a graph.
    Probe {
        #[arg(long)]
        universal: PathBuf,
        #[arg(long)]
        objective: Option<String>,
        #[arg(long, default_value_t = 30)]
        samples: usize,
        #[arg(long, default_value_t = 4)]
        depth: usize,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {source}")]
    Format { path: String, source: FormatError },
    #[error(transparent)]
    Objective(#[from] ObjectiveError),
    #[error("no objective: pass --objective or add an `objective` line")]
    NoObjective,
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Satisfy(#[from] SatisfyError),
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
    #[error(transparent)]
    Union(#[from] UnionError),
    #[error(transparent)]
    Lab(#[from] LabError),
}

/// What a command prints, and whether a predicted property failed.
#[derive(Debug, Default)]
pub struct Output {
    pub text: String,
    pub documents: Vec<Document>,
    pub report: Report,
    pub violated: bool,
}

impl Output {
    fn new(title: &str) -> Self {
        Output { report: Report::new(title), ..Default::default() }
    }

    fn line(&mut self, s: impl AsRef<str>) {
        self.text.push_str(s.as_ref());
        self.text.push('\n');
    }

    /// Human text, emitted documents, then the key-value report.
    pub fn render(&self) -> String {
        let mut out = self.text.clone();
        for d in &self.documents {
            out.push('\n');
            out.push_str(&serialize_document(d));
        }
        out.push('\n');
        out.push_str(&serialize_document(&Document::Report(self.report.clone())));
        out
    }

    /// 0 when a verdict was computed, 1 when a predicted property failed.
    pub fn exit_code(&self) -> u8 {
        u8::from(self.violated)
    }
}

fn read(path: &Path, opts: ParseOptions) -> Result<Document, CliError> {
    let p = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: p.clone(), source })?;
    parse_document_with(&text, opts).map_err(|source| CliError::Format { path: p, source })
}

fn kind_error(path: &Path, e: FormatError) -> CliError {
    CliError::Format { path: path.display().to_string(), source: e }
}

fn objective(flag: &Option<String>, header: &Header) -> Result<Objective, CliError> {
    let key = flag.as_ref().or(header.objective.as_ref()).ok_or(CliError::NoObjective)?;
    Ok(Objective::parse(key)?)
}

fn lasso_text(l: &Lasso<Letter>, names: &[String]) -> String {
    let mut s = String::new();
    let hop = |s: &mut String, e: &Edge<Letter>| {
        let _ = write!(s, " -{}-> {}", e.label, names[e.dst]);
    };
    let start = l.stem.first().or(l.cycle.first()).map(|e| e.src).unwrap_or(0);
    s.push_str(&names[start]);
    for e in &l.stem {
        hop(&mut s, e);
    }
    s.push_str(" (");
    if let Some(e) = l.cycle.first() {
        s.push_str(&names[e.src]);
    }
    for e in &l.cycle {
        hop(&mut s, e);
    }
    s.push_str(")^ω");
    s
}

fn name_list(names: &[String], pick: impl Fn(usize) -> bool) -> String {
    let v: Vec<&str> = (0..names.len()).filter(|&i| pick(i)).map(|i| names[i].as_str()).collect();
    if v.is_empty() {
        "-".into()
    } else {
        v.join(",")
    }
}

pub fn run(cli: &Cli) -> Result<Output, CliError> {
    let g = &cli.global;
    let opts = ParseOptions { dots: if g.dots == Dots::Eve { Player::Eve } else { Player::Adam } };
    let state_budget = g.budget.map_or(DEFAULT_STATE_BUDGET, |b| b.min(usize::MAX as u128) as usize);
    match &cli.command {
        Command::Solve { arena, objective: key } => {
            let doc = read(arena, opts)?.into_arena().map_err(|e| kind_error(arena, e))?;
            let w = objective(key, &doc.header)?;
            solve(&doc.arena, &doc.names, &w, g.budget.unwrap_or(positional::games::DEFAULT_STRATEGY_BUDGET))
        }
        Command::Satisfies { graph, objective: key } => {
            let doc = read(graph, opts)?.into_graph().map_err(|e| kind_error(graph, e))?;
            let w = objective(key, &doc.header)?;
            let mut out = Output::new("satisfies");
            out.report.push("objective", w.key());
            match graph_satisfies(&w, &doc.graph)? {
                Satisfaction::Satisfies => {
                    out.line(format!("the graph satisfies {}", w.key()));
                    out.report.push("satisfies", true);
                }
                Satisfaction::Violates(l) => {
                    out.line(format!("the graph violates {}", w.key()));
                    out.line(format!("losing path: {}", lasso_text(&l, &doc.names)));
                    out.report.push("satisfies", false);
                    out.report.push("counterexample", lasso_text(&l, &doc.names));
                }
            }
            Ok(out)
        }
        Command::Saturate { automaton } => {
            let doc = read(automaton, opts)?.into_automaton().map_err(|e| kind_error(automaton, e))?;
            let before = doc.automaton.transitions().len();
            let sat = saturate(&doc.automaton);
            let mut out = Output::new("saturate");
            out.line(format!("added {} co-Büchi transitions", sat.transitions().len() - before));
            out.report.push("transitions_before", before);
            out.report.push("transitions_after", sat.transitions().len());
            out.documents.push(Document::Automaton(AutomatonDoc { header: doc.header, names: doc.names, automaton: sat }));
            Ok(out)
        }
        Command::Normalcore { automaton } => {
            let doc = read(automaton, opts)?.into_automaton().map_err(|e| kind_error(automaton, e))?;
            let core = normal_core(&doc.automaton)?;
            let mut out = Output::new("normalcore");
            let kept = name_list(&doc.names, |q| core.kept.contains(&q));
            out.line(format!("kept {} of {} states: {kept}", core.kept.len(), doc.automaton.state_count()));
            out.report.push("states_before", doc.automaton.state_count());
            out.report.push("states_after", core.automaton.state_count());
            out.report.push("kept", kept);
            let names = core.kept.iter().map(|&q| doc.names[q].clone()).collect();
            out.documents.push(Document::Automaton(AutomatonDoc { header: doc.header, names, automaton: core.automaton }));
            Ok(out)
        }
        Command::Hdcheck { automaton } => {
            let doc = read(automaton, opts)?.into_automaton().map_err(|e| kind_error(automaton, e))?;
            let mut out = Output::new("hdcheck");
            out.report.push("states", doc.automaton.state_count());
            match check_hd(&doc.automaton, state_budget)? {
                HdVerdict::Hd(r) => {
                    out.line("the automaton is history-deterministic");
                    out.line(format!("resolver with {} states", r.automaton().state_count()));
                    out.report.push("hd", true);
                    out.report.push("resolver_states", r.automaton().state_count());
                    let names = r.morphism().map.iter().enumerate().map(|(i, &q)| format!("{i}:{}", doc.names[q])).collect();
                    out.documents.push(Document::Automaton(AutomatonDoc {
                        header: Header::default(),
                        names,
                        automaton: r.automaton().clone(),
                    }));
                }
                HdVerdict::NotHd => {
                    out.line("the automaton is not history-deterministic");
                    out.report.push("hd", false);
                }
            }
            Ok(out)
        }
        Command::Union { automata } => {
            let mut parts = Vec::new();
            let mut names = Vec::new();
            for (i, p) in automata.iter().enumerate() {
                let doc = read(p, opts)?.into_automaton().map_err(|e| kind_error(p, e))?;
                names.extend(doc.names.iter().map(|n| format!("{i}.{n}")));
                parts.push(doc.automaton);
            }
            let u = union_automaton(&parts)?;
            let mut out = Output::new("union");
            let hd = check_hd(&u.automaton, state_budget)?.is_hd();
            let all_hd = parts.iter().map(|a| check_hd(a, state_budget).map(|v| v.is_hd())).collect::<Result<Vec<_>, _>>()?;
            out.line(format!("union of {} automata, {} states", parts.len(), u.automaton.state_count()));
            out.line(format!("history-deterministic: {hd}"));
            out.report.push("parts", parts.len());
            out.report.push("states", u.automaton.state_count());
            out.report.push("hd", hd);
            if all_hd.iter().all(|&b| b) && !hd {
                out.line("the parts are history-deterministic but the union is not");
                out.violated = true;
            }
            out.documents.push(Document::Automaton(AutomatonDoc { header: Header::default(), names, automaton: u.automaton }));
            Ok(out)
        }
        Command::Structure { graph, objective: key, epsilon } => {
            let doc = read(graph, opts)?.into_graph().map_err(|e| kind_error(graph, e))?;
            let w = objective(key, &doc.header)?;
            let eps: Letter = epsilon.parse().map_err(|e: positional::graph::ParseLetterError| CliError::Input(e.to_string()))?;
            structure(&doc, &w, eps)
        }
        Command::Wfin { objective: key, graph_size, survey_vertices } => {
            let w = Objective::parse(key)?;
            let wf = build_wfin_automaton(&w, *graph_size)?;
            let mut out = Output::new("wfin");
            let monotone = wf.automaton.check_monotone() == Some(Ok(()));
            let hd = check_hd(&wf.automaton, state_budget)?.is_hd();
            let sound = wf.resolver.find_unsound_word(&wf.automaton).is_none();
            out.line(format!(
                "{} monotone graphs of size <= {graph_size} satisfy {}; automaton has {} states",
                wf.graphs.len(),
                w.key(),
                wf.automaton.state_count()
            ));
            out.line(format!("monotone: {monotone}, history-deterministic: {hd}, block resolver sound: {sound}"));
            out.report.push("objective", w.key());
            out.report.push("graphs", wf.graphs.len());
            out.report.push("states", wf.automaton.state_count());
            out.report.push("monotone", monotone);
            out.report.push("hd", hd);
            out.report.push("resolver_sound", sound);
            out.violated = !(monotone && hd && sound);
            if *survey_vertices > 0 {
                let census = Census::Exhaustive { max_vertices: *survey_vertices, max_out_degree: 2 };
                check_census_cap(&census, &w, g.cap)?;
                let r = wfin_equivalence_survey(&w, *graph_size, &census)?;
                out.line(r.to_string());
                out.report.extend(r.fields());
                out.violated |= !r.all_agree();
            }
            let names = index_names(wf.automaton.state_count());
            let header = Header { objective: Some(w.key().into()), ..Default::default() };
            out.documents.push(Document::Automaton(AutomatonDoc { header, names, automaton: wf.automaton }));
            Ok(out)
        }
        Command::Survey { objective: key, max_vertices, max_out_degree, samples, exhaustive } => {
            let w = Objective::parse(key)?;
            let census = if *exhaustive {
                Census::Exhaustive { max_vertices: *max_vertices, max_out_degree: *max_out_degree }
            } else {
                Census::Random {
                    samples: *samples,
                    max_vertices: *max_vertices,
                    max_out_degree: *max_out_degree,
                    seed: g.seed,
                }
            };
            check_census_cap(&census, &w, g.cap)?;
            let r = positionality_survey(&w, &census)?;
            let mut out = Output::new("survey");
            out.line(r.to_string());
            out.report.extend(r.fields());
            let predicted = w.positional_over_finite_arenas();
            out.report.push("predicted_positional", predicted);
            if predicted && !r.all_positional() {
                out.line("a finite arena where Eve needs memory, although the objective is positional");
                out.violated = true;
            }
            for a in &r.witnesses {
                let alphabet = w.alphabet().clone();
                let names = index_names(a.vertex_count());
                out.documents.push(Document::Arena(crate::format::ArenaDoc {
                    header: Header { objective: Some(w.key().into()), ..Default::default() },
                    alphabet,
                    names,
                    arena: a.clone(),
                }));
            }
            Ok(out)
        }
        Command::Mpfamily { kind, n, horizon } => {
            let f = ArenaFamily::parse(kind)
                .ok_or_else(|| CliError::Input(format!("unknown family `{kind}`: expected escape_right, dip_left or end_climb")))?;
            if *n == 0 {
                return Err(CliError::Input("n must be at least 1".into()));
            }
            let r = verify_nonpositionality_truncated(&f, *n, *horizon)?;
            let mut out = Output::new("mpfamily");
            out.line(format!(
                "{} at n = {}: {} of {} positional strategies lose {}",
                r.family, r.n, r.refuted, r.strategies, r.objective
            ));
            if let Some(m) = r.margin {
                out.line(format!("best positional value: {m}"));
            }
            out.line(NonPositionalityReport::CAVEAT);
            out.report.extend(r.fields());
            // END truncations are finite arenas, where END is positional.
            let survivors = usize::from(f.kind == FamilyKind::EndClimb);
            out.violated = r.refuted + survivors != r.strategies;
            let (arena, names) = f.instantiate_named(*n);
            let alphabet = f.objective(*n).alphabet().clone();
            out.documents.push(Document::Arena(crate::format::ArenaDoc {
                header: Header { objective: Some(r.objective.clone()), ..Default::default() },
                alphabet,
                names,
                arena,
            }));
            Ok(out)
        }
        Command::Probe { universal, objective: key, samples, depth } => {
            let doc = read(universal, opts)?.into_graph().map_err(|e| kind_error(universal, e))?;
            let w = objective(key, &doc.header)?;
            let mut rng = ChaCha8Rng::seed_from_u64(g.seed);
            let r = almost_universality_probe(&mut rng, &doc.graph, &w, *samples, *depth)?;
            let mut out = Output::new("probe");
            out.line(format!("{} of {} sampled trees embed from a subtree rooted at depth <= {}", r.embedded, r.samples, r.max_root_depth));
            out.report.extend(r.fields());
            out.violated = !r.all_embedded();
            Ok(out)
        }
    }
}

fn check_census_cap(census: &Census, w: &Objective, cap: Option<u128>) -> Result<(), CliError> {
    let Some(cap) = cap else { return Ok(()) };
    let requested = census.raw_size(w.alphabet().len());
    if requested > cap {
        return Err(LabError::Cap { what: "census size", requested, cap }.into());
    }
    Ok(())
}

fn strategy_doc(graph: Graph<Letter>, image: Vec<usize>, w: &Objective) -> StrategyDoc {
    StrategyDoc {
        header: Header { objective: Some(w.key().into()), ..Default::default() },
        alphabet: w.alphabet().clone(),
        names: (0..graph.vertex_count()).map(|i| format!("s{i}")).collect(),
        graph,
        image,
    }
}

fn solve(a: &Arena, names: &[String], w: &Objective, budget: u128) -> Result<Output, CliError> {
    let region = winning_region(a, w)?;
    let mut out = Output::new("solve");
    out.report.push("objective", w.key());
    out.report.push("vertices", a.vertex_count());
    out.report.push("eve_region", name_list(names, |v| region[v]));
    if region.iter().all(|&b| b) {
        out.line("Eve wins from every vertex");
    } else if !region.contains(&true) {
        out.line("Eve loses from every vertex");
    } else {
        out.line(format!("Eve wins from {}", name_list(names, |v| region[v])));
        out.line(format!("Eve loses from {}", name_list(names, |v| !region[v])));
    }
    let Some((sub, kept)) = restrict_to_region(a, &region) else {
        out.report.push("certificate", "none");
        return Ok(out);
    };
    let predicted = w.positional_over_finite_arenas();
    let positional = match exists_positional_winning(&sub, w, budget) {
        Ok(p) => p,
        Err(SolveError::Budget { .. }) => None,
        Err(e) => return Err(e.into()),
    };
    match positional {
        Some(p) => {
            check_positional(&sub, &p, w).map_err(|e| CliError::Input(format!("certificate failed to validate: {e}")))?;
            out.line("certificate: a positional strategy winning the whole region");
            out.report.push("certificate", "positional");
            let g = p.kept_graph(&sub);
            out.documents.push(Document::Strategy(strategy_doc(g, kept.clone(), w)));
        }
        None => {
            if predicted && sub.positional_count() <= budget {
                out.line("no positional strategy wins the region, although the objective is positional");
                out.violated = true;
            }
            let v = eve_wins(&sub, w)?;
            if let Certificate::Strategy(s) = v.certificate {
                check_strategy(&sub, &s, w).map_err(|e| CliError::Input(format!("certificate failed to validate: {e}")))?;
                out.line(format!("certificate: a strategy with memory ({} states)", s.graph.vertex_count()));
                out.report.push("certificate", "memory");
                let image = s.morphism.map.iter().map(|&v| kept[v]).collect();
                out.documents.push(Document::Strategy(strategy_doc(s.graph, image, w)));
            } else if let Certificate::Positional(p) = v.certificate {
                out.line("certificate: a positional strategy winning the whole region");
                out.report.push("certificate", "positional");
                out.documents.push(Document::Strategy(strategy_doc(p.kept_graph(&sub), kept.clone(), w)));
            }
        }
    }
    Ok(out)
}

fn structure(doc: &GraphDoc, w: &Objective, eps: Letter) -> Result<Output, CliError> {
    let outcome = structure_finite(&doc.graph, w, eps).map_err(|e| match e {
        StructureError::NotSatisfied(l) => {
            CliError::Input(format!("the graph does not satisfy {}: losing path {}", w.key(), lasso_text(&l, &doc.names)))
        }
        StructureError::NotNeutral(c) => CliError::Input(format!("`{c}` is not a neutral letter of {}", w.key())),
        other => CliError::Input(other.to_string()),
    })?;
    let mut out = Output::new("structure");
    out.report.push("objective", w.key());
    out.report.push("epsilon", eps);
    match outcome {
        StructureOutcome::Monotone { saturated, graph, morphism } => {
            let checks = verify_structure(&doc.graph, w, &graph, &morphism);
            let n = graph.graph().vertex_count();
            out.line(format!(
                "added {} {eps}-edges; monotone quotient with {n} vertices",
                saturated.edge_count() - doc.graph.edge_count()
            ));
            let classes: Vec<String> = (0..n).map(|c| name_list(&doc.names, |v| morphism.map[v] == c)).collect();
            let mut by_rank: Vec<usize> = (0..n).collect();
            by_rank.sort_by_key(|&c| graph.rank(c));
            let ordered: Vec<&str> = by_rank.iter().map(|&c| classes[c].as_str()).collect();
            out.line(format!("classes from lowest: {}", ordered.join(" < ")));
            out.report.push("outcome", "monotone");
            out.report.push("vertices", n);
            out.report.push("checks_passed", checks.all());
            out.violated = !checks.all();
            let (g, rank) = graph.into_parts();
            let names = classes.iter().map(|c| format!("[{c}]")).collect();
            out.documents.push(Document::Graph(GraphDoc {
                header: Header { objective: Some(w.key().into()), ..Default::default() },
                alphabet: doc.alphabet.clone(),
                names,
                graph: g,
                rank: Some(rank),
            }));
        }
        StructureOutcome::NotTotal { pair: (u, v), .. } => {
            out.line(format!("{} and {} are incomparable after saturation", doc.names[u], doc.names[v]));
            out.report.push("outcome", "not_total");
            out.violated = w.positional_over_finite_arenas();
        }
        StructureOutcome::NotTransitive { triple: (x, y, z), .. } => {
            out.line(format!("the {eps}-relation is not transitive on {}, {}, {}", doc.names[x], doc.names[y], doc.names[z]));
            out.report.push("outcome", "not_transitive");
            out.violated = true;
        }
    }
    Ok(out)
}
