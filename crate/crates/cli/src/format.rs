//! The line-based text format for graphs, arenas, automata, strategies and
//! reports.
//!
//! ```text
//! arena
//! objective mp_lt_0
//! weights -1..1
//! v p eve
//! v q
//! e p -1 q
//! e p 0 p
//! e q 1 p
//! ```
//!
//! Blank lines and lines starting with `#` are ignored. Vertices are
//! declared with `v`, edges with `e src letter dst`, and automata mark
//! co-Büchi transitions with a trailing `F`.

use std::collections::HashMap;
use std::fmt::Write as _;

use thiserror::Error;

use positional::automata::{CoBuchiAutomaton, Kind, Transition};
use positional::games::{Arena, Player};
use positional::graph::{Alphabet, Edge, Graph, Letter};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DocKind {
    Graph,
    Arena,
    Automaton,
    Strategy,
    Report,
}

impl DocKind {
    pub fn keyword(self) -> &'static str {
        match self {
            DocKind::Graph => "graph",
            DocKind::Arena => "arena",
            DocKind::Automaton => "automaton",
            DocKind::Strategy => "strategy",
            DocKind::Report => "report",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        [DocKind::Graph, DocKind::Arena, DocKind::Automaton, DocKind::Strategy, DocKind::Report]
            .into_iter()
            .find(|k| k.keyword() == s)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FormatError {
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("line {line}: {message}")]
    Semantic { line: usize, message: String },
    #[error("expected a {expected} document, found {found}")]
    WrongKind { expected: &'static str, found: &'static str },
}

fn syntax<T>(line: usize, column: usize, message: impl Into<String>) -> Result<T, FormatError> {
    Err(FormatError::Syntax { line, column, message: message.into() })
}

fn semantic<T>(line: usize, message: impl Into<String>) -> Result<T, FormatError> {
    Err(FormatError::Semantic { line, message: message.into() })
}

/// Optional experiment settings carried by any document.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Header {
    pub objective: Option<String>,
    pub seed: Option<u64>,
    pub cap: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphDoc {
    pub header: Header,
    pub alphabet: Alphabet,
    pub names: Vec<String>,
    pub graph: Graph<Letter>,
    /// Ranks of an ordered graph.
    pub rank: Option<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArenaDoc {
    pub header: Header,
    pub alphabet: Alphabet,
    pub names: Vec<String>,
    pub arena: Arena,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AutomatonDoc {
    pub header: Header,
    pub names: Vec<String>,
    pub automaton: CoBuchiAutomaton,
}

/// A strategy graph with the arena vertex each of its vertices maps to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrategyDoc {
    pub header: Header,
    pub alphabet: Alphabet,
    pub names: Vec<String>,
    pub graph: Graph<Letter>,
    pub image: Vec<usize>,
}

/// A titled list of `key=value` fields.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub title: String,
    pub fields: Vec<(String, String)>,
}

impl Report {
    pub fn new(title: impl Into<String>) -> Self {
        Report { title: title.into(), fields: Vec::new() }
    }

    pub fn push(&mut self, key: impl Into<String>, value: impl ToString) {
        let value = value.to_string().replace('\n', " ");
        self.fields.push((key.into(), value));
    }

    pub fn extend<'a>(&mut self, fields: impl IntoIterator<Item = (&'a str, String)>) {
        for (k, v) in fields {
            self.push(k, v);
        }
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.fields.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Document {
    Graph(GraphDoc),
    Arena(ArenaDoc),
    Automaton(AutomatonDoc),
    Strategy(StrategyDoc),
    Report(Report),
}

impl Document {
    pub fn kind(&self) -> DocKind {
        match self {
            Document::Graph(_) => DocKind::Graph,
            Document::Arena(_) => DocKind::Arena,
            Document::Automaton(_) => DocKind::Automaton,
            Document::Strategy(_) => DocKind::Strategy,
            Document::Report(_) => DocKind::Report,
        }
    }

    fn wrong(&self, expected: DocKind) -> FormatError {
        FormatError::WrongKind { expected: expected.keyword(), found: self.kind().keyword() }
    }

    pub fn into_graph(self) -> Result<GraphDoc, FormatError> {
        match self {
            Document::Graph(g) => Ok(g),
            other => Err(other.wrong(DocKind::Graph)),
        }
    }

    pub fn into_arena(self) -> Result<ArenaDoc, FormatError> {
        match self {
            Document::Arena(a) => Ok(a),
            other => Err(other.wrong(DocKind::Arena)),
        }
    }

    pub fn into_automaton(self) -> Result<AutomatonDoc, FormatError> {
        match self {
            Document::Automaton(a) => Ok(a),
            other => Err(other.wrong(DocKind::Automaton)),
        }
    }
}

/// Vertex names `0, 1, ..`.
pub fn index_names(n: usize) -> Vec<String> {
    (0..n).map(|v| v.to_string()).collect()
}

/// Parsing options.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ParseOptions {
    /// Owner of arena vertices with a single outgoing edge and no declared
    /// owner.
    pub dots: Player,
}

impl Default for ParseOptions {
    fn default() -> Self {
        ParseOptions { dots: Player::Adam }
    }
}

pub fn parse_document(text: &str) -> Result<Document, FormatError> {
    parse_document_with(text, ParseOptions::default())
}

struct VertexDecl {
    line: usize,
    owner: Option<Player>,
    rank: Option<usize>,
    image: Option<usize>,
}

struct EdgeDecl {
    src: usize,
    letter: Letter,
    dst: usize,
    kind: Kind,
}

/// Whitespace-separated tokens with their 1-based columns.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices().chain(std::iter::once((line.len(), ' '))) {
        match (c.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push((line[..s].chars().count() + 1, &line[s..i]));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    out
}

fn parse_num<T: std::str::FromStr>(line: usize, (col, tok): (usize, &str), what: &str) -> Result<T, FormatError> {
    tok.parse().or_else(|_| syntax(line, col, format!("expected {what}, found `{tok}`")))
}

fn parse_range(line: usize, (col, tok): (usize, &str)) -> Result<Alphabet, FormatError> {
    let bad = || syntax(line, col, format!("expected a range `lo..hi`, found `{tok}`"));
    let Some((lo, hi)) = tok.split_once("..") else { return bad() };
    match (lo.parse::<i64>(), hi.parse::<i64>()) {
        (Ok(lo), Ok(hi)) if lo <= hi => Ok(Alphabet::range(lo, hi)),
        _ => bad(),
    }
}

pub fn parse_document_with(text: &str, opts: ParseOptions) -> Result<Document, FormatError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'));
    let Some((first, head)) = lines.next() else {
        return syntax(1, 1, "empty document");
    };
    let head_tokens = tokens(head);
    let (col, word) = head_tokens[0];
    let Some(kind) = DocKind::parse(word) else {
        return syntax(first, col, format!("expected a document kind, found `{word}`"));
    };
    if kind == DocKind::Report {
        let title = head.trim_start()[word.len()..].trim().to_string();
        let mut report = Report::new(title);
        for (n, l) in lines {
            let Some((k, v)) = l.trim().split_once('=') else {
                return syntax(n, 1, "expected `key=value`");
            };
            if k.is_empty() || k.chars().any(char::is_whitespace) {
                return syntax(n, 1, format!("invalid key `{k}`"));
            }
            report.fields.push((k.to_string(), v.to_string()));
        }
        return Ok(Document::Report(report));
    }
    if let Some(&(col, extra)) = head_tokens.get(1) {
        return syntax(first, col, format!("unexpected `{extra}`"));
    }

    let mut header = Header::default();
    let mut alphabet: Option<Alphabet> = None;
    let mut names: Vec<String> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut vertices: Vec<VertexDecl> = Vec::new();
    let mut edges: Vec<EdgeDecl> = Vec::new();
    let mut initial: Option<(usize, usize)> = None;

    for (n, l) in lines {
        let toks = tokens(l);
        let (col, key) = toks[0];
        let args = &toks[1..];
        let arity = |k: usize| -> Result<(), FormatError> {
            if args.len() < k {
                return syntax(n, l.chars().count() + 1, format!("`{key}` expects {k} argument(s)"));
            }
            Ok(())
        };
        let vertex = |(c, name): (usize, &str)| -> Result<usize, FormatError> {
            index.get(name).copied().map_or_else(|| syntax(n, c, format!("unknown vertex `{name}`")), Ok)
        };
        match key {
            "objective" | "seed" | "cap" => {
                arity(1)?;
                if let Some(&(c, t)) = args.get(1) {
                    return syntax(n, c, format!("unexpected `{t}`"));
                }
                match key {
                    "objective" => header.objective = Some(args[0].1.to_string()),
                    "seed" => header.seed = Some(parse_num(n, args[0], "a seed")?),
                    _ => header.cap = Some(parse_num(n, args[0], "a cap")?),
                }
            }
            "alphabet" | "weights" => {
                arity(1)?;
                if alphabet.is_some() {
                    return semantic(n, "alphabet declared twice");
                }
                if key == "weights" {
                    if let Some(&(c, t)) = args.get(1) {
                        return syntax(n, c, format!("unexpected `{t}`"));
                    }
                    alphabet = Some(parse_range(n, args[0])?);
                } else {
                    let mut letters = Vec::new();
                    for &(c, t) in args {
                        letters.push(t.parse::<Letter>().or_else(|e| syntax(n, c, e.to_string()))?);
                    }
                    alphabet = Some(Alphabet::new(letters));
                }
            }
            "v" => {
                arity(1)?;
                let name = args[0].1;
                if index.contains_key(name) {
                    return semantic(n, format!("duplicate vertex `{name}`"));
                }
                let mut decl = VertexDecl { line: n, owner: None, rank: None, image: None };
                for &(c, attr) in &args[1..] {
                    match (kind, attr) {
                        (DocKind::Arena, "eve") if decl.owner.is_none() => decl.owner = Some(Player::Eve),
                        (DocKind::Arena, "adam") if decl.owner.is_none() => decl.owner = Some(Player::Adam),
                        (DocKind::Graph | DocKind::Automaton, _) if attr.starts_with("rank=") && decl.rank.is_none() => {
                            decl.rank = Some(parse_num(n, (c + 5, &attr[5..]), "a rank")?)
                        }
                        (DocKind::Strategy, _) if attr.starts_with("image=") && decl.image.is_none() => {
                            decl.image = Some(parse_num(n, (c + 6, &attr[6..]), "a vertex index")?)
                        }
                        _ => return syntax(n, c, format!("unexpected `{attr}`")),
                    }
                }
                index.insert(name.to_string(), names.len());
                names.push(name.to_string());
                vertices.push(decl);
            }
            "e" => {
                arity(3)?;
                let Some(alpha) = &alphabet else {
                    return semantic(n, "the alphabet must be declared before edges");
                };
                let src = vertex(args[0])?;
                let (lc, lt) = args[1];
                let letter: Letter = lt.parse().or_else(|e: positional::graph::ParseLetterError| syntax(n, lc, e.to_string()))?;
                if !alpha.contains(letter) {
                    return syntax(n, lc, format!("letter `{letter}` is not in the alphabet"));
                }
                let dst = vertex(args[2])?;
                let kind = match (kind, args.get(3)) {
                    (_, None) => Kind::Normal,
                    (DocKind::Automaton, Some((_, "F"))) => Kind::CoBuchi,
                    (_, Some(&(c, t))) => return syntax(n, c, format!("unexpected `{t}`")),
                };
                if let Some(&(c, t)) = args.get(4) {
                    return syntax(n, c, format!("unexpected `{t}`"));
                }
                if edges.iter().any(|e| (e.src, e.letter, e.dst, e.kind) == (src, letter, dst, kind)) {
                    return semantic(n, format!("duplicate edge {} {letter} {}", args[0].1, args[2].1));
                }
                edges.push(EdgeDecl { src, letter, dst, kind });
            }
            "initial" if kind == DocKind::Automaton => {
                arity(1)?;
                if initial.is_some() {
                    return semantic(n, "initial state declared twice");
                }
                initial = Some((n, vertex(args[0])?));
            }
            _ => return syntax(n, col, format!("unknown key `{key}`")),
        }
    }

    let last = text.lines().count().max(1);
    let Some(alphabet) = alphabet else {
        return semantic(last, "missing `alphabet` or `weights`");
    };
    let nv = names.len();
    if nv == 0 {
        return semantic(last, "no vertices");
    }
    let mut out_degree = vec![0usize; nv];
    for e in &edges {
        out_degree[e.src] += 1;
    }
    if kind != DocKind::Automaton {
        if let Some(v) = (0..nv).find(|&v| out_degree[v] == 0) {
            return semantic(vertices[v].line, format!("vertex `{}` is a sink", names[v]));
        }
    }
    let ranks = || -> Result<Option<Vec<usize>>, FormatError> {
        let given = vertices.iter().filter(|d| d.rank.is_some()).count();
        if given == 0 {
            return Ok(None);
        }
        if let Some(d) = vertices.iter().find(|d| d.rank.is_none()) {
            return semantic(d.line, "ranks must be given for all vertices or none");
        }
        let rank: Vec<usize> = vertices.iter().map(|d| d.rank.unwrap()).collect();
        let mut sorted = rank.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != rank.len() {
            return semantic(vertices[0].line, "ranks must be distinct");
        }
        Ok(Some(rank))
    };
    let plain = || Graph::new(nv, edges.iter().map(|e| Edge::new(e.src, e.letter, e.dst)));

    Ok(match kind {
        DocKind::Graph => Document::Graph(GraphDoc { header, alphabet, names, graph: plain(), rank: ranks()? }),
        DocKind::Arena => {
            let mut owner = Vec::with_capacity(nv);
            for (v, d) in vertices.iter().enumerate() {
                owner.push(match d.owner {
                    Some(p) => p,
                    None if out_degree[v] == 1 => opts.dots,
                    None => return semantic(d.line, format!("vertex `{}` needs an owner (eve or adam)", names[v])),
                });
            }
            let arena = Arena::new(plain(), owner).expect("owners and sinks checked");
            Document::Arena(ArenaDoc { header, alphabet, names, arena })
        }
        DocKind::Strategy => {
            let mut image = Vec::with_capacity(nv);
            for (v, d) in vertices.iter().enumerate() {
                match d.image {
                    Some(i) => image.push(i),
                    None => return semantic(d.line, format!("vertex `{}` needs `image=<arena vertex>`", names[v])),
                }
            }
            Document::Strategy(StrategyDoc { header, alphabet, names, graph: plain(), image })
        }
        DocKind::Automaton => {
            let Some((_, init)) = initial else {
                return semantic(last, "missing `initial`");
            };
            let ts: Vec<Transition> = edges.iter().map(|e| Edge::new(e.src, (e.letter, e.kind), e.dst)).collect();
            let at = |q: usize| vertices[q].line;
            let mut a = CoBuchiAutomaton::new(alphabet, nv, ts, init).map_err(|err| {
                use positional::automata::AutomatonError as E;
                let (line, message) = match &err {
                    E::Incomplete { state, letter } => {
                        (at(*state), format!("state `{}` has no transition on `{letter}`", names[*state]))
                    }
                    E::Unreachable(q) => (at(*q), format!("state `{}` is unreachable", names[*q])),
                    _ => (initial.map_or(last, |(l, _)| l), err.to_string()),
                };
                FormatError::Semantic { line, message }
            })?;
            if let Some(rank) = ranks()? {
                a = a.with_order(rank).expect("distinct ranks");
            }
            Document::Automaton(AutomatonDoc { header, names, automaton: a })
        }
        DocKind::Report => unreachable!("handled above"),
    })
}

fn write_header(out: &mut String, kind: DocKind, h: &Header) {
    out.push_str(kind.keyword());
    out.push('\n');
    if let Some(o) = &h.objective {
        let _ = writeln!(out, "objective {o}");
    }
    if let Some(s) = h.seed {
        let _ = writeln!(out, "seed {s}");
    }
    if let Some(c) = h.cap {
        let _ = writeln!(out, "cap {c}");
    }
}

fn write_alphabet(out: &mut String, a: &Alphabet) {
    match a.as_range() {
        Some((lo, hi)) => {
            let _ = writeln!(out, "weights {lo}..{hi}");
        }
        None => {
            out.push_str("alphabet");
            for c in a.iter() {
                let _ = write!(out, " {c}");
            }
            out.push('\n');
        }
    }
}

fn write_edges(out: &mut String, names: &[String], g: &Graph<Letter>) {
    for e in g.edges() {
        let _ = writeln!(out, "e {} {} {}", names[e.src], e.label, names[e.dst]);
    }
}

/// The canonical text of a document: header keys, alphabet, vertices in
/// index order, then edges in sorted order.
pub fn serialize_document(doc: &Document) -> String {
    let mut out = String::new();
    match doc {
        Document::Graph(d) => {
            write_header(&mut out, DocKind::Graph, &d.header);
            write_alphabet(&mut out, &d.alphabet);
            for (v, name) in d.names.iter().enumerate() {
                match &d.rank {
                    Some(r) => {
                        let _ = writeln!(out, "v {name} rank={}", r[v]);
                    }
                    None => {
                        let _ = writeln!(out, "v {name}");
                    }
                }
            }
            write_edges(&mut out, &d.names, &d.graph);
        }
        Document::Arena(d) => {
            write_header(&mut out, DocKind::Arena, &d.header);
            write_alphabet(&mut out, &d.alphabet);
            for (v, name) in d.names.iter().enumerate() {
                let _ = writeln!(out, "v {name} {}", d.arena.owner(v));
            }
            write_edges(&mut out, &d.names, d.arena.graph());
        }
        Document::Strategy(d) => {
            write_header(&mut out, DocKind::Strategy, &d.header);
            write_alphabet(&mut out, &d.alphabet);
            for (v, name) in d.names.iter().enumerate() {
                let _ = writeln!(out, "v {name} image={}", d.image[v]);
            }
            write_edges(&mut out, &d.names, &d.graph);
        }
        Document::Automaton(d) => {
            let a = &d.automaton;
            write_header(&mut out, DocKind::Automaton, &d.header);
            write_alphabet(&mut out, a.alphabet());
            for (q, name) in d.names.iter().enumerate() {
                match a.order() {
                    Some(r) => {
                        let _ = writeln!(out, "v {name} rank={}", r[q]);
                    }
                    None => {
                        let _ = writeln!(out, "v {name}");
                    }
                }
            }
            let _ = writeln!(out, "initial {}", d.names[a.initial()]);
            for e in a.transitions() {
                let (c, k) = e.label;
                let mark = if k == Kind::CoBuchi { " F" } else { "" };
                let _ = writeln!(out, "e {} {c} {}{mark}", d.names[e.src], d.names[e.dst]);
            }
        }
        Document::Report(r) => {
            let _ = writeln!(out, "report {}", r.title);
            for (k, v) in &r.fields {
                let _ = writeln!(out, "{k}={v}");
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Document {
        parse_document(text).unwrap()
    }

    fn round_trip(text: &str) {
        let doc = parse(text);
        let out = serialize_document(&doc);
        assert_eq!(parse(&out), doc);
        assert_eq!(serialize_document(&parse(&out)), out);
    }

    #[test]
    fn one_vertex_graph() {
        let d = parse("graph\nalphabet a\nv q\ne q a q").into_graph().unwrap();
        assert_eq!(d.graph, Graph::new(1, [Edge::new(0, Letter::Sym('a'), 0)]));
        assert_eq!(d.names, vec!["q"]);
    }

    #[test]
    fn cobuchi_transition() {
        let d = parse("automaton\nalphabet a\nv q\ninitial q\ne q a q F").into_automaton().unwrap();
        assert!(d.automaton.has_transition(0, Letter::Sym('a'), Kind::CoBuchi, 0));
    }

    #[test]
    fn dots_default_to_adam() {
        let text = "arena\nweights -1..1\nv p eve\nv q\ne p 0 q\ne p 1 p\ne q -1 p\n";
        let d = parse(text).into_arena().unwrap();
        assert_eq!(d.arena.owner(1), Player::Adam);
        let d = parse_document_with(text, ParseOptions { dots: Player::Eve }).unwrap().into_arena().unwrap();
        assert_eq!(d.arena.owner(1), Player::Eve);
    }

    #[test]
    fn branching_vertex_needs_owner() {
        let err = parse_document("arena\nweights 0..1\nv p\ne p 0 p\ne p 1 p").unwrap_err();
        assert_eq!(err, FormatError::Semantic { line: 3, message: "vertex `p` needs an owner (eve or adam)".into() });
    }

    #[test]
    fn diagnostics_carry_positions() {
        let err = parse_document("graph\nalphabet a\nv q\ne q b q").unwrap_err();
        assert_eq!(err, FormatError::Syntax { line: 4, column: 5, message: "letter `b` is not in the alphabet".into() });
        let err = parse_document("graph\nalphabet a\nv q\ne q a r").unwrap_err();
        assert!(matches!(err, FormatError::Syntax { line: 4, column: 7, .. }), "{err}");
        let err = parse_document("graph\nalphabet a\ncolour red").unwrap_err();
        assert!(matches!(err, FormatError::Syntax { line: 3, column: 1, .. }));
        let err = parse_document("graph\nalphabet a\nv q\nv r\ne q a q").unwrap_err();
        assert_eq!(err, FormatError::Semantic { line: 4, message: "vertex `r` is a sink".into() });
        let err = parse_document("graph\nalphabet a\nv q\nv q").unwrap_err();
        assert!(matches!(err, FormatError::Semantic { line: 4, .. }));
        let err = parse_document("automaton\nalphabet a b\nv q\ninitial q\ne q a q").unwrap_err();
        assert!(err.to_string().contains("no transition on `b`"), "{err}");
    }

    #[test]
    fn round_trips() {
        round_trip("# comment\ngraph\nobjective cobuchi\nalphabet N F\nv x rank=1\nv y rank=0\ne y F x\ne x N y\n");
        round_trip("arena\nseed 7\ncap 3\nweights -2..2\nv a eve\nv b adam\ne a -2 b\ne b 2 a\ne b 0 b\n");
        round_trip("automaton\nalphabet a b\nv p rank=0\nv q rank=1\ninitial q\ne q a q\ne q b p F\ne p a q F\ne p b p\n");
        round_trip("strategy\nweights 0..0\nv s image=0\nv t image=0\ne s 0 t\ne t 0 s\n");
        round_trip("report survey of parity\narenas=12\nnote=finite arenas only\n");
    }

    #[test]
    fn report_fields() {
        let mut r = Report::new("x");
        r.push("a", 1);
        r.push("b", "two\nlines");
        let d = parse(&serialize_document(&Document::Report(r.clone())));
        assert_eq!(d, Document::Report(r));
    }
}
